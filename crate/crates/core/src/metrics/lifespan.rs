//! Lifespan: the interval during which a version was or is being used.
//!
//! Active versions live from their release to the snapshot. A passive
//! version's end is the latest date at which one of its transitive users
//! moved on, i.e. the maximum release date of `next(i)` over its users
//! `i`. Dormant versions have no lifespan.

use crate::exec::{map_indexed, Execution};
use crate::graph::{DependencyGraph, VertexId};
use crate::metrics::{ActivityStatus, ActivityTable};
use crate::version::ReleaseDate;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lifespan {
    pub start: ReleaseDate,
    pub end: ReleaseDate,
    /// Set when the computed end preceded the start (possible with
    /// downgrade releases, or when every user is an external stub) and
    /// the interval was clamped to a point.
    pub clamped: bool,
}

/// Lifespan of one vertex; `None` for dormant versions and external stubs.
pub fn lifespan(g: &DependencyGraph, v: VertexId, table: &ActivityTable) -> Option<Lifespan> {
    let status = table.status(v)?;
    let start = g.vertex(v).released()?;
    match status {
        ActivityStatus::Dormant => None,
        ActivityStatus::Active => Some(Lifespan {
            start,
            end: g.snapshot(),
            clamped: false,
        }),
        ActivityStatus::PassiveNonDormant => {
            // No transitive user of a passive version can be a latest
            // version, so every non-external user has a successor.
            let end = g
                .transitive_users(v)
                .into_iter()
                .filter(|&u| !g.vertex(u).is_external())
                .filter_map(|u| g.next(u).ok().flatten())
                .filter_map(|n| g.vertex(n).released())
                .max();
            match end {
                Some(end) if end >= start => Some(Lifespan {
                    start,
                    end,
                    clamped: false,
                }),
                _ => Some(Lifespan {
                    start,
                    end: start,
                    clamped: true,
                }),
            }
        }
    }
}

/// Lifespans for every vertex, indexed by vertex id.
pub fn lifespans(
    g: &DependencyGraph,
    table: &ActivityTable,
    exec: Execution,
) -> Vec<Option<Lifespan>> {
    map_indexed(exec, g.vertex_count(), |i| {
        lifespan(g, VertexId(i as u32), table)
    })
}
