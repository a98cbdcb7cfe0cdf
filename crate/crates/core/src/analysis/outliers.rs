//! Significantly popular versions, detected with Tukey's fences over a
//! library's own popularity scores.
//!
//! Quartiles use type-7 linear interpolation on the sorted sample; the
//! upper fence is the classic `Q3 + 1.5 * IQR`, and only scores strictly
//! above it count as outliers.

use crate::graph::{DependencyGraph, LibraryId, VertexId};

/// How many significantly popular versions a library has.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignificanceClass {
    /// No version stands out.
    None,
    One,
    Multiple,
}

impl SignificanceClass {
    fn from_count(n: usize) -> Self {
        match n {
            0 => SignificanceClass::None,
            1 => SignificanceClass::One,
            _ => SignificanceClass::Multiple,
        }
    }
}

/// `(Q1, Q3)` by type-7 linear interpolation; `None` on an empty sample.
pub fn quartiles_type7(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let at = |p: f64| {
        let h = (sorted.len() - 1) as f64 * p;
        let lo = h.floor() as usize;
        let hi = (lo + 1).min(sorted.len() - 1);
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    };
    Some((at(0.25), at(0.75)))
}

/// Indices of values strictly above the Tukey upper fence.
pub fn tukey_outlier_indices(values: &[f64]) -> Vec<usize> {
    let Some((q1, q3)) = quartiles_type7(values) else {
        return Vec::new();
    };
    let fence = q3 + 1.5 * (q3 - q1);
    values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > fence)
        .map(|(i, _)| i)
        .collect()
}

/// The significantly popular versions of a library, given per-vertex
/// scores indexed by vertex id, plus the library's significance class.
pub fn significantly_popular(
    g: &DependencyGraph,
    l: LibraryId,
    scores: &[f64],
) -> (Vec<VertexId>, SignificanceClass) {
    let chain = g.chain(l);
    let library_scores: Vec<f64> = chain.iter().map(|&v| scores[v.index()]).collect();
    let outliers: Vec<VertexId> = tukey_outlier_indices(&library_scores)
        .into_iter()
        .map(|i| chain[i])
        .collect();
    let class = SignificanceClass::from_count(outliers.len());
    (outliers, class)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_sample_with_one_spike() {
        // Q3 = 1, IQR = 0, fence = 1: only the spike exceeds it.
        assert_eq!(tukey_outlier_indices(&[1.0, 1.0, 1.0, 1.0, 10.0]), vec![4]);
    }

    #[test]
    fn all_equal_has_no_outliers() {
        assert!(tukey_outlier_indices(&[2.5, 2.5, 2.5]).is_empty());
    }

    #[test]
    fn linear_sample_has_no_outliers() {
        // Q1 = 2, Q3 = 4, fence = 7.
        let (q1, q3) = quartiles_type7(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!((q1, q3), (2.0, 4.0));
        assert!(tukey_outlier_indices(&[1.0, 2.0, 3.0, 4.0, 5.0]).is_empty());
    }

    #[test]
    fn interpolates_between_order_statistics() {
        // n = 4: h(0.25) = 0.75, h(0.75) = 2.25.
        let (q1, q3) = quartiles_type7(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!((q1 - 1.75).abs() < 1e-12);
        assert!((q3 - 3.25).abs() < 1e-12);
    }

    #[test]
    fn singleton_sample() {
        assert_eq!(quartiles_type7(&[7.0]), Some((7.0, 7.0)));
        assert!(tukey_outlier_indices(&[7.0]).is_empty());
        assert_eq!(quartiles_type7(&[]), None);
    }
}
