//! Activity status of versions and libraries.
//!
//! A version is *active* when it appears in the transitive dependency tree
//! of at least one latest version; *dormant* when nothing depends on it
//! directly; *passive non-dormant* otherwise. A latest version nothing
//! depends on is dormant — the set-membership rule is applied literally,
//! with no special case for chain terminals.

use std::collections::VecDeque;
use std::fmt;

use crate::exec::{map_indexed, Execution};
use crate::graph::{DependencyGraph, GraphError, LibraryId, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActivityStatus {
    Active,
    PassiveNonDormant,
    Dormant,
}

impl fmt::Display for ActivityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ActivityStatus::Active => "active",
            ActivityStatus::PassiveNonDormant => "passive-nondormant",
            ActivityStatus::Dormant => "dormant",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LibraryStatus {
    Active,
    Passive,
    Dormant,
}

impl fmt::Display for LibraryStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LibraryStatus::Active => "active",
            LibraryStatus::Passive => "passive",
            LibraryStatus::Dormant => "dormant",
        })
    }
}

/// Per-vertex activity statuses; `None` for external stubs.
#[derive(Debug, Clone)]
pub struct ActivityTable {
    statuses: Vec<Option<ActivityStatus>>,
    active: usize,
    passive_nondormant: usize,
    dormant: usize,
}

impl ActivityTable {
    pub fn status(&self, v: VertexId) -> Option<ActivityStatus> {
        self.statuses[v.index()]
    }

    pub fn is_active(&self, v: VertexId) -> bool {
        self.statuses[v.index()] == Some(ActivityStatus::Active)
    }

    /// `(active, passive non-dormant, dormant)` counts over non-external
    /// vertices.
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.active, self.passive_nondormant, self.dormant)
    }
}

/// Computes the status of every vertex. The active set is the union of
/// the transitive dependency trees of all latest versions.
pub fn activity(g: &DependencyGraph, exec: Execution) -> ActivityTable {
    let mut in_tree = vec![false; g.vertex_count()];
    let mut queue = VecDeque::new();
    for latest in g.latests() {
        for &d in g.dependencies(latest) {
            if !in_tree[d.index()] {
                in_tree[d.index()] = true;
                queue.push_back(d);
            }
        }
    }
    while let Some(v) = queue.pop_front() {
        for &d in g.dependencies(v) {
            if !in_tree[d.index()] {
                in_tree[d.index()] = true;
                queue.push_back(d);
            }
        }
    }

    let statuses = map_indexed(exec, g.vertex_count(), |i| {
        let v = VertexId(i as u32);
        if g.vertex(v).is_external() {
            None
        } else if in_tree[i] {
            Some(ActivityStatus::Active)
        } else if g.users(v).is_empty() {
            Some(ActivityStatus::Dormant)
        } else {
            Some(ActivityStatus::PassiveNonDormant)
        }
    });

    let mut counts = [0usize; 3];
    for s in statuses.iter().flatten() {
        counts[*s as usize] += 1;
    }
    ActivityTable {
        statuses,
        active: counts[ActivityStatus::Active as usize],
        passive_nondormant: counts[ActivityStatus::PassiveNonDormant as usize],
        dormant: counts[ActivityStatus::Dormant as usize],
    }
}

/// Library status: active with any active version, dormant when every
/// version is dormant, passive otherwise.
pub fn library_status(
    g: &DependencyGraph,
    table: &ActivityTable,
    l: LibraryId,
) -> Result<LibraryStatus, GraphError> {
    let chain = g.chain(l);
    if chain.is_empty() {
        return Err(GraphError::NoVersions(g.library_key(l).to_string()));
    }
    let mut all_dormant = true;
    for &v in chain {
        match table.status(v) {
            Some(ActivityStatus::Active) => return Ok(LibraryStatus::Active),
            Some(ActivityStatus::Dormant) => {}
            _ => all_dormant = false,
        }
    }
    if all_dormant {
        Ok(LibraryStatus::Dormant)
    } else {
        Ok(LibraryStatus::Passive)
    }
}

/// Statuses for every library; `None` for libraries with no non-external
/// versions.
pub fn library_statuses(g: &DependencyGraph, table: &ActivityTable) -> Vec<Option<LibraryStatus>> {
    g.library_ids()
        .map(|l| library_status(g, table, l).ok())
        .collect()
}
