//! Equal-width histograms over `[0, 1]` for positional distributions.

use crate::analysis::AnalysisError;

/// Bins are half-open `[lo, hi)` except the last, which includes 1 so the
/// latest-version index stays in range.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_count: usize,
    /// `bin_count + 1` edges from 0 to 1.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

pub fn histogram(values: &[f64], bins: usize) -> Result<Histogram, AnalysisError> {
    if bins == 0 {
        return Err(AnalysisError::NoBins);
    }
    let mut counts = vec![0u64; bins];
    for &v in values {
        if !(0.0..=1.0).contains(&v) {
            return Err(AnalysisError::ValueOutOfRange(v));
        }
        let bin = ((v * bins as f64) as usize).min(bins - 1);
        counts[bin] += 1;
    }
    let edges = (0..=bins).map(|i| i as f64 / bins as f64).collect();
    Ok(Histogram {
        bin_count: bins,
        edges,
        counts,
    })
}
