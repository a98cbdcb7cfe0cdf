//! Transitional activity patterns: each library's versions, in version
//! order, mapped to `A` (active) or `P` (passive, dormant included), with
//! consecutive repeats optionally compressed away.

use std::collections::BTreeMap;
use std::fmt;

use crate::graph::{DependencyGraph, LibraryId};
use crate::metrics::{ActivityStatus, ActivityTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StatusSymbol {
    A,
    P,
}

impl fmt::Display for StatusSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StatusSymbol::A => "A",
            StatusSymbol::P => "P",
        })
    }
}

/// A sequence over {A, P}; compressed form has no adjacent repeats.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StatusPattern(pub Vec<StatusSymbol>);

impl StatusPattern {
    pub fn symbols(&self) -> &[StatusSymbol] {
        &self.0
    }

    pub fn ends_active(&self) -> bool {
        self.0.last() == Some(&StatusSymbol::A)
    }
}

impl fmt::Display for StatusPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Collapses runs of equal symbols.
pub fn compress(symbols: &[StatusSymbol]) -> Vec<StatusSymbol> {
    let mut out = Vec::new();
    for &s in symbols {
        if out.last() != Some(&s) {
            out.push(s);
        }
    }
    out
}

/// The pattern of a library's versions in version order. Empty for
/// libraries with no non-external versions.
pub fn status_pattern(
    g: &DependencyGraph,
    l: LibraryId,
    table: &ActivityTable,
    compressed: bool,
) -> StatusPattern {
    let symbols: Vec<StatusSymbol> = g
        .chain(l)
        .iter()
        .filter_map(|&v| table.status(v))
        .map(|s| match s {
            ActivityStatus::Active => StatusSymbol::A,
            _ => StatusSymbol::P,
        })
        .collect();
    if compressed {
        StatusPattern(compress(&symbols))
    } else {
        StatusPattern(symbols)
    }
}

/// Frequency of each compressed pattern across the given libraries,
/// sorted by descending count with ties broken lexically.
pub fn pattern_frequencies(
    g: &DependencyGraph,
    libraries: &[LibraryId],
    table: &ActivityTable,
) -> Vec<(StatusPattern, u64)> {
    let mut counts: BTreeMap<StatusPattern, u64> = BTreeMap::new();
    for &l in libraries {
        let pattern = status_pattern(g, l, table, true);
        if pattern.symbols().is_empty() {
            continue;
        }
        *counts.entry(pattern).or_insert(0) += 1;
    }
    let mut out: Vec<(StatusPattern, u64)> = counts.into_iter().collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}
