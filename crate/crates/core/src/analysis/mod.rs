//! Higher-level analyses over computed metrics: transitional status
//! patterns, outlier popularity, positional distributions, library
//! categories, the study-subject filter, rank correlation and per-library
//! summary rows.

mod histogram;
mod outliers;
mod patterns;
mod spearman;

pub use histogram::{histogram, Histogram};
pub use outliers::{
    quartiles_type7, significantly_popular, tukey_outlier_indices, SignificanceClass,
};
pub use patterns::{compress, pattern_frequencies, status_pattern, StatusPattern, StatusSymbol};
pub use spearman::{spearman, spearman_p_value, Spearman, SpearmanError};

use std::fmt;

use thiserror::Error;

use crate::exec::{map_indexed, Execution};
use crate::graph::{DependencyGraph, LibraryId, LibraryKey, VertexId};
use crate::metrics::{ActivityStatus, ActivityTable, TimelinessClass, TimelinessResult};

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("positional index is undefined for external vertex {0}")]
    ExternalVertex(String),
    #[error("positional index is undefined for the single-version library {0}")]
    SingleVersionLibrary(String),
    #[error("study filter bounds are inverted: min {min} > max {max}")]
    InvertedBounds { min: usize, max: usize },
    #[error("histogram value {0} lies outside [0, 1]")]
    ValueOutOfRange(f64),
    #[error("histogram needs at least one bin")]
    NoBins,
}

/// Release-profile category of a library.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LibraryCategory {
    SingleVersion,
    /// More than one version, all released on the same day.
    OneShot,
    MultiVersion,
}

impl fmt::Display for LibraryCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LibraryCategory::SingleVersion => "single-version",
            LibraryCategory::OneShot => "one-shot",
            LibraryCategory::MultiVersion => "multi-version",
        })
    }
}

/// Categorizes a library by its release profile; `None` when it has no
/// non-external versions.
pub fn categorize_library(g: &DependencyGraph, l: LibraryId) -> Option<LibraryCategory> {
    let chain = g.chain(l);
    let first = chain.first()?;
    if chain.len() == 1 {
        return Some(LibraryCategory::SingleVersion);
    }
    let day = g.vertex(*first).released();
    let one_shot = chain[1..].iter().all(|&v| g.vertex(v).released() == day);
    Some(if one_shot {
        LibraryCategory::OneShot
    } else {
        LibraryCategory::MultiVersion
    })
}

/// Multi-version libraries with a version count inside `[min, max]`.
pub fn study_filter(
    g: &DependencyGraph,
    min: usize,
    max: usize,
) -> Result<Vec<LibraryId>, AnalysisError> {
    if min > max {
        return Err(AnalysisError::InvertedBounds { min, max });
    }
    Ok(g.library_ids()
        .filter(|&l| {
            let n = g.chain(l).len();
            categorize_library(g, l) == Some(LibraryCategory::MultiVersion) && n >= min && n <= max
        })
        .collect())
}

/// Normalized position of a version within its library history:
/// `(rank - 1) / (n - 1)`, 0 for the first version and 1 for the latest.
/// Undefined for single-version libraries.
pub fn positional_index(g: &DependencyGraph, v: VertexId) -> Result<f64, AnalysisError> {
    let (pos, len) = g
        .chain_position(v)
        .ok_or_else(|| AnalysisError::ExternalVertex(g.vertex(v).coordinate().to_string()))?;
    if len < 2 {
        return Err(AnalysisError::SingleVersionLibrary(
            g.library_key(g.vertex(v).library()).to_string(),
        ));
    }
    Ok(pos as f64 / (len - 1) as f64)
}

/// One row of the per-library report.
#[derive(Debug, Clone)]
pub struct LibrarySummary {
    pub library: LibraryKey,
    pub category: LibraryCategory,
    pub n_versions: usize,
    pub n_active: usize,
    pub n_passive_nondormant: usize,
    pub n_dormant: usize,
    /// Percentage of active versions, 0..=100.
    pub pct_active: f64,
    pub popularity: f64,
    pub n_significantly_popular: usize,
    /// Compressed transitional pattern.
    pub pattern: StatusPattern,
    pub pct_under_timely: f64,
    pub pct_timely: f64,
    pub pct_over_timely: f64,
}

/// Everything a summary row draws on, indexed like the graph.
pub struct SummaryInputs<'a> {
    pub activity: &'a ActivityTable,
    pub version_scores: &'a [f64],
    pub library_scores: &'a [f64],
    pub timeliness: &'a [Option<TimelinessResult>],
}

/// Builds the summary row for one library; `None` when it has no
/// non-external versions.
pub fn library_summary(
    g: &DependencyGraph,
    l: LibraryId,
    inputs: &SummaryInputs<'_>,
) -> Option<LibrarySummary> {
    let chain = g.chain(l);
    if chain.is_empty() {
        return None;
    }
    let n = chain.len();
    let mut by_status = [0usize; 3];
    for &v in chain {
        if let Some(s) = inputs.activity.status(v) {
            by_status[s as usize] += 1;
        }
    }
    let mut by_class = [0usize; 3];
    for &v in chain {
        if let Some(t) = &inputs.timeliness[v.index()] {
            by_class[t.class as usize] += 1;
        }
    }
    let pct = |count: usize| 100.0 * count as f64 / n as f64;
    let (outliers, _) = significantly_popular(g, l, inputs.version_scores);
    Some(LibrarySummary {
        library: g.library_key(l).clone(),
        category: categorize_library(g, l)?,
        n_versions: n,
        n_active: by_status[ActivityStatus::Active as usize],
        n_passive_nondormant: by_status[ActivityStatus::PassiveNonDormant as usize],
        n_dormant: by_status[ActivityStatus::Dormant as usize],
        pct_active: pct(by_status[ActivityStatus::Active as usize]),
        popularity: inputs.library_scores[l.index()],
        n_significantly_popular: outliers.len(),
        pattern: status_pattern(g, l, inputs.activity, true),
        pct_under_timely: pct(by_class[TimelinessClass::UnderTimely as usize]),
        pct_timely: pct(by_class[TimelinessClass::Timely as usize]),
        pct_over_timely: pct(by_class[TimelinessClass::OverTimely as usize]),
    })
}

/// Summary rows for the given libraries, in input order, skipping
/// libraries without versions.
pub fn library_summaries(
    g: &DependencyGraph,
    libraries: &[LibraryId],
    inputs: &SummaryInputs<'_>,
    exec: Execution,
) -> Vec<LibrarySummary> {
    map_indexed(exec, libraries.len(), |i| {
        library_summary(g, libraries[i], inputs)
    })
    .into_iter()
    .flatten()
    .collect()
}
