//! Finite-difference derivative estimation for measured series, which
//! carry no exact derivative field. Differences never straddle recording
//! segments.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::dynamics::TimeSeries;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivativeScheme {
    /// (x(t+1) - x(t)) / dt assigned to sample t; the last sample of each
    /// segment has no estimate.
    Forward,
    /// (x(t+1) - x(t-1)) / (2 dt) where both neighbors exist; segment
    /// endpoints have no estimate.
    Central,
}

/// Fill `deriv` and `deriv_valid` on a copy of the series. Samples without
/// an estimate are marked invalid and their derivative entries set to 0.
pub fn estimate_derivatives(ts: &TimeSeries, scheme: DerivativeScheme) -> Result<TimeSeries> {
    ts.validate()?;
    let (n, m) = (ts.n_nodes(), ts.n_samples());
    let mut deriv = Array2::zeros((n, m));
    let mut valid = vec![false; m];
    for seg in ts.segments() {
        match scheme {
            DerivativeScheme::Forward => {
                for t in seg.start..seg.end.saturating_sub(1) {
                    for i in 0..n {
                        deriv[(i, t)] = (ts.values[(i, t + 1)] - ts.values[(i, t)]) / ts.dt;
                    }
                    valid[t] = true;
                }
            }
            DerivativeScheme::Central => {
                for t in (seg.start + 1)..seg.end.saturating_sub(1) {
                    for i in 0..n {
                        deriv[(i, t)] =
                            (ts.values[(i, t + 1)] - ts.values[(i, t - 1)]) / (2.0 * ts.dt);
                    }
                    valid[t] = true;
                }
            }
        }
    }
    let mut out = ts.clone();
    out.deriv = Some(deriv);
    out.deriv_valid = Some(valid);
    out.validate()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    #[test]
    fn linear_series_has_constant_slope() {
        let values = Array2::from_shape_fn((1, 10), |(_, t)| 3.0 * t as f64);
        let ts = TimeSeries::new(values, 1.0).unwrap();
        let est = estimate_derivatives(&ts, DerivativeScheme::Forward).unwrap();
        let deriv = est.deriv.unwrap();
        let valid = est.deriv_valid.unwrap();
        for t in 0..9 {
            assert!(valid[t]);
            assert!((deriv[(0, t)] - 3.0).abs() < 1e-12);
        }
        assert!(!valid[9]);
    }

    #[test]
    fn constant_series_has_zero_slope() {
        let ts = TimeSeries::new(Array2::ones((2, 8)), 0.5).unwrap();
        let est = estimate_derivatives(&ts, DerivativeScheme::Central).unwrap();
        let deriv = est.deriv.unwrap();
        for t in 1..7 {
            assert_eq!(deriv[(0, t)], 0.0);
        }
    }

    #[test]
    fn central_difference_tracks_analytic_cosine() {
        let dt = 0.01;
        let values = Array2::from_shape_fn((1, 1000), |(_, t)| (dt * t as f64).sin());
        let ts = TimeSeries::new(values, dt).unwrap();
        let est = estimate_derivatives(&ts, DerivativeScheme::Central).unwrap();
        let deriv = est.deriv.unwrap();
        let valid = est.deriv_valid.unwrap();
        let mut max_err: f64 = 0.0;
        for t in 0..1000 {
            if valid[t] {
                max_err = max_err.max((deriv[(0, t)] - (dt * t as f64).cos()).abs());
            }
        }
        assert!(max_err < 1e-3, "central-difference error {max_err}");
    }

    #[test]
    fn estimates_respect_segment_boundaries() {
        let values = Array2::from_shape_fn((1, 10), |(_, t)| if t < 5 { 0.0 } else { 100.0 });
        let mut ts = TimeSeries::new(values, 1.0).unwrap();
        ts.segment_starts = vec![0, 5];
        let est = estimate_derivatives(&ts, DerivativeScheme::Forward).unwrap();
        let deriv = est.deriv.unwrap();
        let valid = est.deriv_valid.unwrap();
        // Sample 4 sits at a segment end: no estimate, so the jump to the
        // second segment never leaks in.
        assert!(!valid[4]);
        assert_eq!(deriv[(0, 4)], 0.0);
        assert!(valid[3] && deriv[(0, 3)] == 0.0);
        assert!(valid[5] && deriv[(0, 5)] == 0.0);
    }
}
