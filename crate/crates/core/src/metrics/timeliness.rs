//! Timeliness: did a version attract users while it was the newest
//! release of its library?
//!
//! The timeliness period of `v` runs from its release to the release of
//! `mr`, the version-order successor with the earliest release date
//! strictly after `v`'s (versions released the same day or earlier do not
//! close the period). Without such a successor the period extends to the
//! snapshot. The value is
//!
//! ```text
//! tim(v) = |users(v)| / |{ i : R(i) in tp(v), library(v) used by i }|
//! ```
//!
//! with both interval endpoints inclusive at day granularity. Special
//! rules take precedence in this order: dormant versions score 0; first
//! releases score 1; a zero denominator scores 0.

use std::fmt;

use crate::exec::{map_indexed, Execution};
use crate::graph::{DependencyGraph, VertexId};
use crate::metrics::{ActivityStatus, ActivityTable};
use crate::version::ReleaseDate;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimelinessClass {
    Timely,
    OverTimely,
    UnderTimely,
}

impl TimelinessClass {
    fn from_value(value: f64) -> Self {
        if value == 1.0 {
            TimelinessClass::Timely
        } else if value > 1.0 {
            TimelinessClass::OverTimely
        } else {
            TimelinessClass::UnderTimely
        }
    }
}

impl fmt::Display for TimelinessClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TimelinessClass::Timely => "timely",
            TimelinessClass::OverTimely => "over-timely",
            TimelinessClass::UnderTimely => "under-timely",
        })
    }
}

/// Numerator choice. `Formula` counts all direct users, as the metric is
/// written. `StrictLifespan` restricts the count to users released within
/// the version's lifespan; it is offered for comparison and makes no
/// fidelity claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimelinessVariant {
    #[default]
    Formula,
    StrictLifespan,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimelinessResult {
    pub value: f64,
    /// The timeliness period; `None` when a special rule preempted its
    /// evaluation (dormant versions).
    pub period: Option<(ReleaseDate, ReleaseDate)>,
    pub class: TimelinessClass,
}

/// Precomputed per-library usage dates: for library `l`, the sorted
/// release dates of every dated vertex with a direct dependency into `l`.
pub struct TimelinessContext<'g> {
    graph: &'g DependencyGraph,
    usage_dates: Vec<Vec<ReleaseDate>>,
}

impl<'g> TimelinessContext<'g> {
    pub fn new(graph: &'g DependencyGraph) -> Self {
        let mut usage_dates = vec![Vec::new(); graph.library_count()];
        for i in graph.vertex_ids() {
            let Some(date) = graph.vertex(i).released() else {
                continue;
            };
            let mut target_libs: Vec<_> = graph
                .dependencies(i)
                .iter()
                .map(|&j| graph.vertex(j).library())
                .collect();
            target_libs.sort_unstable();
            target_libs.dedup();
            for l in target_libs {
                usage_dates[l.index()].push(date);
            }
        }
        for dates in &mut usage_dates {
            dates.sort_unstable();
        }
        TimelinessContext { graph, usage_dates }
    }

    /// Usages of `library(v)` released within `[start, end]`.
    fn usages_within(&self, v: VertexId, start: ReleaseDate, end: ReleaseDate) -> usize {
        let dates = &self.usage_dates[self.graph.vertex(v).library().index()];
        let lo = dates.partition_point(|&d| d < start);
        let hi = dates.partition_point(|&d| d <= end);
        hi - lo
    }

    /// Evaluates one non-external vertex. Returns `None` for externals.
    pub fn evaluate(
        &self,
        v: VertexId,
        table: &ActivityTable,
        variant: TimelinessVariant,
    ) -> Option<TimelinessResult> {
        let g = self.graph;
        let status = table.status(v)?;
        let released = g.vertex(v).released()?;

        if status == ActivityStatus::Dormant {
            return Some(TimelinessResult {
                value: 0.0,
                period: None,
                class: TimelinessClass::UnderTimely,
            });
        }

        let (position, _) = g.chain_position(v)?;
        if position == 0 {
            let end = self.period_end(v, released);
            return Some(TimelinessResult {
                value: 1.0,
                period: Some((released, end)),
                class: TimelinessClass::Timely,
            });
        }

        let end = self.period_end(v, released);
        let numerator = match variant {
            TimelinessVariant::Formula => g.users(v).len(),
            TimelinessVariant::StrictLifespan => match crate::metrics::lifespan(g, v, table) {
                Some(ls) => g
                    .users(v)
                    .iter()
                    .filter_map(|&u| g.vertex(u).released())
                    .filter(|&d| d >= ls.start && d <= ls.end)
                    .count(),
                None => 0,
            },
        };
        let denominator = self.usages_within(v, released, end);
        let value = if denominator == 0 {
            0.0
        } else {
            numerator as f64 / denominator as f64
        };
        Some(TimelinessResult {
            value,
            period: Some((released, end)),
            class: TimelinessClass::from_value(value),
        })
    }

    /// Release date of the earliest later-released successor, or the
    /// snapshot when no successor was released strictly after `v`.
    fn period_end(&self, v: VertexId, released: ReleaseDate) -> ReleaseDate {
        let g = self.graph;
        g.next_all(v)
            .ok()
            .and_then(|succ| {
                succ.iter()
                    .filter_map(|&s| g.vertex(s).released())
                    .filter(|&d| d > released)
                    .min()
            })
            .unwrap_or_else(|| g.snapshot())
    }
}

/// Timeliness of one vertex; `None` for external stubs.
pub fn timeliness(
    g: &DependencyGraph,
    v: VertexId,
    table: &ActivityTable,
    variant: TimelinessVariant,
) -> Option<TimelinessResult> {
    TimelinessContext::new(g).evaluate(v, table, variant)
}

/// Timeliness for every vertex, indexed by vertex id.
pub fn timeliness_all(
    g: &DependencyGraph,
    table: &ActivityTable,
    variant: TimelinessVariant,
    exec: Execution,
) -> Vec<Option<TimelinessResult>> {
    let cx = TimelinessContext::new(g);
    map_indexed(exec, g.vertex_count(), |i| {
        cx.evaluate(VertexId(i as u32), table, variant)
    })
}
