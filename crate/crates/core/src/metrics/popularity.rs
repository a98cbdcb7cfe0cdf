//! Popularity: PageRank-style scores over versions and libraries.
//!
//! The version score follows the recurrence
//!
//! ```text
//! pop(v) = (1 - d) + d * sum over users u of v of pop(u)        (literal)
//! pop(v) = (1 - d) + d * sum of pop(u) / |deps(u)|           (normalized)
//! ```
//!
//! Literal mode evaluates the sum as printed. On an acyclic user relation
//! it is computed exactly in topological order; with cycles it falls back
//! to fixed-point iteration, which can diverge on dense cycles — that is
//! reported as an error suggesting normalized mode. Normalized mode is the
//! standard PageRank update and contracts with factor `d`, so it converges
//! on any graph.
//!
//! The library score runs weighted PageRank on the library graph: each
//! user library `u` of `l` contributes its score scaled by the share of
//! `l` in the incoming and outgoing edge weights of `u`'s dependency set.
//! When a weight denominator is zero (every dependency of `u` is a leaf)
//! the corresponding share falls back to the uniform `1 / |D(u)|`.

use thiserror::Error;

use crate::exec::{map_indexed, Execution};
use crate::graph::{DependencyGraph, LibraryGraph, VertexId};

#[derive(Debug, Error)]
pub enum PopularityError {
    #[error("invalid popularity configuration: {0}")]
    InvalidConfig(String),
    #[error(
        "literal popularity diverged after {iterations} iterations \
         (residual {residual:.3e}); the user relation has reinforcing cycles — \
         consider normalized mode"
    )]
    Diverged { iterations: usize, residual: f64 },
    #[error("popularity did not converge after {iterations} iterations (residual {residual:.3e})")]
    NotConverged { iterations: usize, residual: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PopularityMode {
    /// The recurrence as printed: user scores are summed unscaled.
    #[default]
    Literal,
    /// Standard PageRank: user contributions divided by their out-degree.
    Normalized,
}

#[derive(Debug, Clone, Copy)]
pub struct PopularityConfig {
    pub damping: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub mode: PopularityMode,
}

impl Default for PopularityConfig {
    fn default() -> Self {
        PopularityConfig {
            damping: 0.85,
            tolerance: 1e-9,
            max_iterations: 200,
            mode: PopularityMode::Literal,
        }
    }
}

impl PopularityConfig {
    fn validate(&self) -> Result<(), PopularityError> {
        if self.damping <= 0.0 || self.damping >= 1.0 || self.damping.is_nan() {
            return Err(PopularityError::InvalidConfig(format!(
                "damping must lie strictly between 0 and 1, got {}",
                self.damping
            )));
        }
        if self.tolerance <= 0.0 || self.tolerance.is_nan() {
            return Err(PopularityError::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(PopularityError::InvalidConfig(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Scores plus how they were obtained.
#[derive(Debug, Clone)]
pub struct PopularityOutcome {
    pub scores: Vec<f64>,
    /// Fixed-point iterations performed; 0 for exact evaluation.
    pub iterations: usize,
    /// Final max-norm residual; 0 for exact evaluation.
    pub residual: f64,
    /// True when the scores come from the exact topological evaluation.
    pub exact: bool,
}

/// Version- and library-level scores under one configuration.
#[derive(Debug, Clone)]
pub struct PopularityScores {
    pub versions: PopularityOutcome,
    pub libraries: PopularityOutcome,
    pub config: PopularityConfig,
}

impl PopularityScores {
    pub fn compute(
        g: &DependencyGraph,
        lg: &LibraryGraph,
        config: &PopularityConfig,
        exec: Execution,
    ) -> Result<Self, PopularityError> {
        Ok(PopularityScores {
            versions: version_popularity(g, config, exec)?,
            libraries: library_popularity(lg, config, exec)?,
            config: *config,
        })
    }
}

/// Topological order in which every user precedes its dependencies, or
/// `None` when the dependency relation is cyclic.
fn user_first_order(g: &DependencyGraph) -> Option<Vec<VertexId>> {
    let n = g.vertex_count();
    let mut indegree: Vec<usize> = (0..n).map(|i| g.users(VertexId(i as u32)).len()).collect();
    let mut order = Vec::with_capacity(n);
    let mut ready: Vec<VertexId> = (0..n)
        .filter(|&i| indegree[i] == 0)
        .map(|i| VertexId(i as u32))
        .collect();
    while let Some(v) = ready.pop() {
        order.push(v);
        for &d in g.dependencies(v) {
            indegree[d.index()] -= 1;
            if indegree[d.index()] == 0 {
                ready.push(d);
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Scores for every vertex, external stubs included (they participate in
/// the recurrence; reporting filters them out).
pub fn version_popularity(
    g: &DependencyGraph,
    config: &PopularityConfig,
    exec: Execution,
) -> Result<PopularityOutcome, PopularityError> {
    config.validate()?;
    let n = g.vertex_count();
    let d = config.damping;
    let base = 1.0 - d;

    match config.mode {
        PopularityMode::Literal => {
            if let Some(order) = user_first_order(g) {
                let mut scores = vec![0.0; n];
                for v in order {
                    let sum: f64 = g.users(v).iter().map(|u| scores[u.index()]).sum();
                    scores[v.index()] = base + d * sum;
                }
                return Ok(PopularityOutcome {
                    scores,
                    iterations: 0,
                    residual: 0.0,
                    exact: true,
                });
            }
            iterate(g, config, exec, |v, x| {
                g.users(v).iter().map(|u| x[u.index()]).sum()
            })
        }
        PopularityMode::Normalized => iterate(g, config, exec, |v, x| {
            g.users(v)
                .iter()
                .map(|&u| x[u.index()] / g.dependencies(u).len() as f64)
                .sum()
        }),
    }
}

fn iterate<F>(
    g: &DependencyGraph,
    config: &PopularityConfig,
    exec: Execution,
    contribution: F,
) -> Result<PopularityOutcome, PopularityError>
where
    F: Fn(VertexId, &[f64]) -> f64 + Sync,
{
    let n = g.vertex_count();
    let d = config.damping;
    let base = 1.0 - d;
    let mut x = vec![base; n];
    let mut first_residual = None;
    let mut residual = f64::INFINITY;
    for iteration in 1..=config.max_iterations {
        let next = map_indexed(exec, n, |i| base + d * contribution(VertexId(i as u32), &x));
        residual = x
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        x = next;
        if residual <= config.tolerance {
            return Ok(PopularityOutcome {
                scores: x,
                iterations: iteration,
                residual,
                exact: false,
            });
        }
        first_residual.get_or_insert(residual);
    }
    let iterations = config.max_iterations;
    if residual > first_residual.unwrap_or(0.0) {
        Err(PopularityError::Diverged {
            iterations,
            residual,
        })
    } else {
        Err(PopularityError::NotConverged {
            iterations,
            residual,
        })
    }
}

/// Weighted PageRank over the library graph. Always solved by fixed-point
/// iteration; the update contracts in L1 norm, so it converges for any
/// graph, self-edges included.
pub fn library_popularity(
    lg: &LibraryGraph,
    config: &PopularityConfig,
    exec: Execution,
) -> Result<PopularityOutcome, PopularityError> {
    config.validate()?;
    let n = lg.node_count();
    let d = config.damping;
    let base = 1.0 - d;

    // coefficient(u -> l) = share of l in the incoming weights of D(u)
    //                     * share of l in the outgoing weights of D(u)
    let coefficients: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|li| {
            let l = crate::graph::LibraryId(li as u32);
            lg.in_edges(l)
                .iter()
                .map(|&(u, _)| {
                    let dep_count = lg.out_edges(u).len() as f64;
                    let in_total: u64 = lg.out_edges(u).iter().map(|&(p, _)| lg.in_weight(p)).sum();
                    let out_total: u64 =
                        lg.out_edges(u).iter().map(|&(p, _)| lg.out_weight(p)).sum();
                    let c_in = if in_total > 0 {
                        lg.in_weight(l) as f64 / in_total as f64
                    } else {
                        1.0 / dep_count
                    };
                    let c_out = if out_total > 0 {
                        lg.out_weight(l) as f64 / out_total as f64
                    } else {
                        1.0 / dep_count
                    };
                    (u.index(), c_in * c_out)
                })
                .collect()
        })
        .collect();

    let mut x = vec![base; n];
    let mut residual = f64::INFINITY;
    for iteration in 1..=config.max_iterations {
        let next = map_indexed(exec, n, |i| {
            let sum: f64 = coefficients[i].iter().map(|&(u, c)| x[u] * c).sum();
            base + d * sum
        });
        residual = x
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        x = next;
        if residual <= config.tolerance {
            return Ok(PopularityOutcome {
                scores: x,
                iterations: iteration,
                residual,
                exact: false,
            });
        }
    }
    Err(PopularityError::NotConverged {
        iterations: config.max_iterations,
        residual,
    })
}
