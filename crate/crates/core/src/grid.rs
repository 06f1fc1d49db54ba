//! Sample grids shared by the checkers and the CLI.

use crate::error::{Error, Result};

/// `n` log-uniformly spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "log grid needs 0 < lo < hi, got [{lo}, {hi}]"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidParameter("grid needs at least 2 points".into()));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (n - 1) as f64;
    let mut g: Vec<f64> = (0..n).map(|i| (a + step * i as f64).exp()).collect();
    // pin the endpoints exactly
    g[0] = lo;
    g[n - 1] = hi;
    Ok(g)
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(hi > lo && lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "linear grid needs lo < hi, got [{lo}, {hi}]"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidParameter("grid needs at least 2 points".into()));
    }
    let step = (hi - lo) / (n - 1) as f64;
    let mut g: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
    g[n - 1] = hi;
    Ok(g)
}

pub fn is_strictly_increasing(g: &[f64]) -> bool {
    g.windows(2).all(|w| w[0] < w[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid_endpoints_and_order() {
        let g = log_grid(1e-4, 1e4, 200).unwrap();
        assert_eq!(g.len(), 200);
        assert_eq!(g[0], 1e-4);
        assert_eq!(g[199], 1e4);
        assert!(is_strictly_increasing(&g));
        let ratio = g[1] / g[0];
        assert!((ratio - 10f64.powf(8.0 / 199.0)).abs() < 1e-12);
    }

    #[test]
    fn bad_grids_rejected() {
        assert!(log_grid(0.0, 1.0, 10).is_err());
        assert!(log_grid(1.0, 1.0, 10).is_err());
        assert!(linear_grid(0.0, 1.0, 1).is_err());
    }
}
