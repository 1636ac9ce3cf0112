//! Coupled phase-oscillator simulation with a fixed-step fourth-order
//! Runge-Kutta integrator.

use ndarray::{Array1, Array2};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use std::f64::consts::TAU;

use super::TimeSeries;
use crate::error::{Error, Result};
use crate::graphgen::Network;

/// First-harmonic (K1) or phase-lagged two-harmonic (K2) coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KuramotoVariant {
    K1,
    K2,
}

/// Phase lag of the first harmonic in the K2 coupling, in radians.
pub const K2_PHASE_LAG: f64 = 1.05;
/// Weight of the second harmonic in the K2 coupling.
pub const K2_SECOND_HARMONIC: f64 = 0.33;

fn coupling(variant: KuramotoVariant, diff: f64) -> f64 {
    match variant {
        KuramotoVariant::K1 => diff.sin(),
        KuramotoVariant::K2 => {
            (diff - K2_PHASE_LAG).sin() + K2_SECOND_HARMONIC * (2.0 * diff).sin()
        }
    }
}

/// Exact right-hand side dx_i/dt = omega_i + sum_j a_ij f(x_j - x_i).
pub fn kuramoto_rhs(
    net: &Network,
    variant: KuramotoVariant,
    x: &Array1<f64>,
    omega: &Array1<f64>,
) -> Array1<f64> {
    let n = net.n();
    let adj = net.adj();
    let mut dx = omega.clone();
    for i in 0..n {
        let xi = x[i];
        let mut acc = 0.0;
        for j in 0..n {
            let a = adj[(i, j)];
            if a != 0.0 {
                acc += a * coupling(variant, x[j] - xi);
            }
        }
        dx[i] += acc;
    }
    dx
}

/// Integrate the oscillator network from `x0`, recording `steps` samples
/// (the initial state included) at spacing `dt`. Zero-mean Gaussian noise
/// of standard deviation `xi_std` perturbs the state once per step when
/// positive. The returned series carries the exact right-hand side
/// evaluated on the recorded trajectory as its derivative field.
#[allow(clippy::too_many_arguments)]
pub fn simulate_kuramoto(
    net: &Network,
    variant: KuramotoVariant,
    x0: &[f64],
    omega: &[f64],
    dt: f64,
    steps: usize,
    xi_std: f64,
    seed: u64,
) -> Result<TimeSeries> {
    let n = net.n();
    if x0.len() != n || omega.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "x0 and omega must have length {n}"
        )));
    }
    if x0.iter().chain(omega).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "x0 and omega must be finite".into(),
        ));
    }
    if dt <= 0.0 || !dt.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "dt must be positive, got {dt}"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidParameter(
            "at least 2 samples are required".into(),
        ));
    }
    if xi_std < 0.0 {
        return Err(Error::InvalidParameter(
            "dynamical noise std must be nonnegative".into(),
        ));
    }

    let omega = Array1::from(omega.to_vec());
    let mut x = Array1::from(x0.to_vec());
    let mut values = Array2::zeros((n, steps));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = if xi_std > 0.0 {
        Some(Normal::new(0.0, xi_std).expect("valid std"))
    } else {
        None
    };

    for t in 0..steps {
        values.column_mut(t).assign(&x);
        if t + 1 == steps {
            break;
        }
        let k1 = kuramoto_rhs(net, variant, &x, &omega);
        let k2 = kuramoto_rhs(net, variant, &(&x + &(&k1 * (dt / 2.0))), &omega);
        let k3 = kuramoto_rhs(net, variant, &(&x + &(&k2 * (dt / 2.0))), &omega);
        let k4 = kuramoto_rhs(net, variant, &(&x + &(&k3 * dt)), &omega);
        x = &x + &((&k1 + &(&k2 * 2.0) + &(&k3 * 2.0) + &k4) * (dt / 6.0));
        if let Some(dist) = &normal {
            for xi in x.iter_mut() {
                *xi += dist.sample(&mut rng);
            }
        }
    }

    let mut deriv = Array2::zeros((n, steps));
    for t in 0..steps {
        let xt = values.column(t).to_owned();
        deriv
            .column_mut(t)
            .assign(&kuramoto_rhs(net, variant, &xt, &omega));
    }

    let ts = TimeSeries {
        values,
        dt,
        deriv: Some(deriv),
        deriv_valid: None,
        segment_starts: vec![0],
    };
    ts.validate()?;
    Ok(ts)
}

/// Concatenate short transients from independent random initial phases:
/// `n_segments` segments of `segment_len` samples each, a fresh uniform
/// initial condition per segment, natural frequencies drawn once from
/// U[-omega_max, omega_max]. Segment boundaries are recorded so derivative
/// estimates never straddle them.
#[allow(clippy::too_many_arguments)]
pub fn simulate_kuramoto_ensemble(
    net: &Network,
    variant: KuramotoVariant,
    n_segments: usize,
    segment_len: usize,
    dt: f64,
    xi_std: f64,
    omega_max: f64,
    seed: u64,
) -> Result<TimeSeries> {
    if n_segments == 0 {
        return Err(Error::InvalidParameter(
            "at least one segment is required".into(),
        ));
    }
    let n = net.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let omega: Vec<f64> = (0..n)
        .map(|_| rng.random_range(-omega_max..=omega_max))
        .collect();

    let total = n_segments * segment_len;
    let mut values = Array2::zeros((n, total));
    let mut deriv = Array2::zeros((n, total));
    let mut segment_starts = Vec::with_capacity(n_segments);
    for s in 0..n_segments {
        let x0: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
        let sub_seed = rng.random::<u64>();
        let seg = simulate_kuramoto(net, variant, &x0, &omega, dt, segment_len, xi_std, sub_seed)?;
        let start = s * segment_len;
        values
            .slice_mut(ndarray::s![.., start..start + segment_len])
            .assign(&seg.values);
        deriv
            .slice_mut(ndarray::s![.., start..start + segment_len])
            .assign(seg.deriv.as_ref().expect("simulator fills deriv"));
        segment_starts.push(start);
    }

    let ts = TimeSeries {
        values,
        dt,
        deriv: Some(deriv),
        deriv_valid: None,
        segment_starts,
    };
    ts.validate()?;
    Ok(ts)
}
