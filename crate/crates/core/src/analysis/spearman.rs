//! Spearman rank correlation with tie-aware average ranks and a
//! two-sided p-value from the Student-t approximation.

use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpearmanError {
    #[error("sequences differ in length: {x} vs {y}")]
    LengthMismatch { x: usize, y: usize },
    #[error("need at least 3 paired observations, got {0}")]
    TooFew(usize),
    #[error("correlation is undefined: one sequence has zero rank variance")]
    ZeroVariance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spearman {
    pub rho: f64,
    pub p_value: f64,
    pub n: usize,
}

/// Average ranks, 1-based; tied values share the mean of their positions.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // positions i..=j (0-based) tie; average of ranks i+1 ..= j+1
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman's rho: the Pearson correlation of the rank vectors.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<Spearman, SpearmanError> {
    if x.len() != y.len() {
        return Err(SpearmanError::LengthMismatch {
            x: x.len(),
            y: y.len(),
        });
    }
    let n = x.len();
    if n < 3 {
        return Err(SpearmanError::TooFew(n));
    }
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    let mean = (n + 1) as f64 / 2.0;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for i in 0..n {
        let dx = rx[i] - mean;
        let dy = ry[i] - mean;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Err(SpearmanError::ZeroVariance);
    }
    let rho = (cov / (var_x * var_y).sqrt()).clamp(-1.0, 1.0);
    Ok(Spearman {
        rho,
        p_value: spearman_p_value(rho, n),
        n,
    })
}

/// Two-sided p-value for a given rho and sample size, via
/// `t = rho * sqrt((n - 2) / (1 - rho^2))` against Student-t with `n - 2`
/// degrees of freedom. `rho = ±1` maps to 0.
pub fn spearman_p_value(rho: f64, n: usize) -> f64 {
    debug_assert!(n >= 3);
    let denom = 1.0 - rho * rho;
    if denom <= 0.0 {
        return 0.0;
    }
    let df = (n - 2) as f64;
    let t = rho * (df / denom).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 1");
    (2.0 * (1.0 - dist.cdf(t.abs()))).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monotone_sequences() {
        let s = spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]).unwrap();
        assert_eq!(s.rho, 1.0);
        assert_eq!(s.p_value, 0.0);
        let s = spearman(&[1.0, 2.0, 3.0], &[30.0, 20.0, 10.0]).unwrap();
        assert_eq!(s.rho, -1.0);
        assert_eq!(s.p_value, 0.0);
    }

    #[test]
    fn five_point_permutations() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        // sum of squared rank differences 4 -> rho = 1 - 24/120
        let s = spearman(&x, &[1.0, 3.0, 2.0, 5.0, 4.0]).unwrap();
        assert!((s.rho - 0.8).abs() < 1e-12);
        // sum of squared rank differences 6 -> rho = 1 - 36/120
        let s = spearman(&x, &[2.0, 3.0, 1.0, 4.0, 5.0]).unwrap();
        assert!((s.rho - 0.7).abs() < 1e-12);
        // cross-checked against scipy.stats.spearmanr
        assert!((s.p_value - 0.188_120_404_374_187_3).abs() < 1e-12);
    }

    #[test]
    fn ties_take_average_ranks() {
        assert_eq!(
            average_ranks(&[10.0, 10.0, 5.0, 20.0]),
            vec![2.5, 2.5, 1.0, 4.0]
        );
    }

    #[test]
    fn errors() {
        assert_eq!(
            spearman(&[1.0, 2.0], &[1.0, 2.0, 3.0]),
            Err(SpearmanError::LengthMismatch { x: 2, y: 3 })
        );
        assert_eq!(
            spearman(&[1.0, 2.0], &[1.0, 2.0]),
            Err(SpearmanError::TooFew(2))
        );
        assert_eq!(
            spearman(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(SpearmanError::ZeroVariance)
        );
    }
}
