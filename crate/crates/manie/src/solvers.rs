//! Sample-weighted regression primitives: ridge via the weighted normal
//! equations, LASSO via cyclic coordinate descent, and sequential-threshold
//! ridge (STRidge).
//!
//! Conventions, fixed here so penalty values transfer across scenarios:
//!
//! * `weighted_ridge` solves (Phi' W Phi + alpha I) beta = Phi' W y exactly
//!   as written — the penalty acts on raw coefficients.
//! * `weighted_lasso` standardizes columns internally to unit weighted RMS
//!   norm and penalizes the standardized coefficients, i.e. it minimizes
//!   0.5 sum_t w_t (y_t - Phi_t beta)^2 + alpha sum_p s_p |beta_p| with
//!   s_p = sqrt(sum_t w_t phi_tp^2 / sum_t w_t). Returned coefficients are
//!   on the original scale.
//! * `stridge` thresholds coefficients on the original scale.
//!
//! No intercept is fitted: the dynamics models behind these problems have
//! no offset term.

use ndarray::{Array1, Array2, Axis};

use crate::error::{Error, Result};

pub const LASSO_TOL: f64 = 1e-8;
pub const LASSO_MAX_ITER: usize = 10_000;
pub const STRIDGE_ITERS: usize = 10;

/// A weighted least-squares problem: M rows, P design columns, weights in
/// [0, 1].
#[derive(Debug, Clone)]
pub struct DesignProblem {
    phi: Array2<f64>,
    y: Array1<f64>,
    w: Array1<f64>,
}

impl DesignProblem {
    pub fn new(phi: Array2<f64>, y: Array1<f64>, w: Array1<f64>) -> Result<Self> {
        let (m, p) = phi.dim();
        if y.len() != m || w.len() != m {
            return Err(Error::ShapeMismatch(format!(
                "design has {m} rows but y has {} and w has {}",
                y.len(),
                w.len()
            )));
        }
        if p == 0 {
            return Err(Error::InvalidParameter(
                "design must have at least one column".into(),
            ));
        }
        if phi.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "design and targets must be finite".into(),
            ));
        }
        if w.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
            return Err(Error::InvalidParameter(
                "weights must lie in [0, 1]".into(),
            ));
        }
        Ok(DesignProblem { phi, y, w })
    }

    pub fn n_rows(&self) -> usize {
        self.phi.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.phi.ncols()
    }

    pub fn phi(&self) -> &Array2<f64> {
        &self.phi
    }

    pub fn y(&self) -> &Array1<f64> {
        &self.y
    }

    pub fn w(&self) -> &Array1<f64> {
        &self.w
    }
}

/// Solver output. `support()` lists the indices of nonzero coefficients;
/// `converged` is false only when coordinate descent hit its sweep cap.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients {
    pub beta: Vec<f64>,
    pub converged: bool,
}

impl Coefficients {
    pub fn support(&self) -> Vec<usize> {
        self.beta
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != 0.0)
            .map(|(p, _)| p)
            .collect()
    }
}

/// Dense symmetric-positive-definite solve via Cholesky. `a` is consumed
/// as workspace. Fails on a non-positive pivot (singular system).
pub(crate) fn cholesky_solve(mut a: Array2<f64>, mut b: Array1<f64>) -> Result<Array1<f64>> {
    let p = a.nrows();
    let scale = a
        .diag()
        .iter()
        .fold(0.0f64, |acc, &d| acc.max(d.abs()))
        .max(1.0);
    for k in 0..p {
        let mut pivot = a[(k, k)];
        for j in 0..k {
            pivot -= a[(k, j)] * a[(k, j)];
        }
        if pivot <= scale * 1e-14 {
            return Err(Error::SingularSystem(format!(
                "non-positive pivot at column {k}"
            )));
        }
        let pivot = pivot.sqrt();
        a[(k, k)] = pivot;
        for i in (k + 1)..p {
            let mut v = a[(i, k)];
            for j in 0..k {
                v -= a[(i, j)] * a[(k, j)];
            }
            a[(i, k)] = v / pivot;
        }
    }
    // Forward substitution L z = b, then back substitution L' x = z.
    for i in 0..p {
        let mut v = b[i];
        for j in 0..i {
            v -= a[(i, j)] * b[j];
        }
        b[i] = v / a[(i, i)];
    }
    for i in (0..p).rev() {
        let mut v = b[i];
        for j in (i + 1)..p {
            v -= a[(j, i)] * b[j];
        }
        b[i] = v / a[(i, i)];
    }
    Ok(b)
}

fn weighted_gram(prob: &DesignProblem) -> (Array2<f64>, Array1<f64>) {
    let wphi = &prob.phi * &prob.w.view().insert_axis(Axis(1));
    let gram = prob.phi.t().dot(&wphi);
    let rhs = wphi.t().dot(&prob.y);
    (gram, rhs)
}

/// beta = argmin sum_t w_t (y_t - Phi_t beta)^2 + alpha ||beta||^2, solved
/// through the weighted normal equations with a Cholesky factorization.
pub fn weighted_ridge(prob: &DesignProblem, alpha: f64) -> Result<Coefficients> {
    if alpha < 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "ridge penalty must be nonnegative, got {alpha}"
        )));
    }
    let (mut gram, rhs) = weighted_gram(prob);
    for k in 0..gram.nrows() {
        gram[(k, k)] += alpha;
    }
    let beta = cholesky_solve(gram, rhs)?;
    Ok(Coefficients {
        beta: beta.to_vec(),
        converged: true,
    })
}

fn soft_threshold(x: f64, t: f64) -> f64 {
    if x > t {
        x - t
    } else if x < -t {
        x + t
    } else {
        0.0
    }
}

/// Weighted LASSO by cyclic coordinate descent with soft-thresholding,
/// converged when the largest standardized coordinate change in a sweep
/// falls below `tol`. Hitting `max_iter` sweeps logs a warning and returns
/// the last iterate with `converged = false`.
pub fn weighted_lasso(
    prob: &DesignProblem,
    alpha: f64,
    tol: f64,
    max_iter: usize,
) -> Result<Coefficients> {
    if alpha < 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "L1 penalty must be nonnegative, got {alpha}"
        )));
    }
    if tol <= 0.0 || max_iter == 0 {
        return Err(Error::InvalidParameter(
            "tol must be positive and max_iter at least 1".into(),
        ));
    }
    let (m, p) = (prob.n_rows(), prob.n_cols());
    let weight_sum: f64 = prob.w.sum();
    if weight_sum <= 0.0 {
        // Every row is switched off; the penalty alone decides.
        return Ok(Coefficients {
            beta: vec![0.0; p],
            converged: true,
        });
    }

    // Standardize columns to unit weighted RMS norm; dead columns (zero
    // norm under w) are pinned at zero.
    let mut scale = vec![0.0f64; p];
    for q in 0..p {
        let ms: f64 = (0..m)
            .map(|t| prob.w[t] * prob.phi[(t, q)] * prob.phi[(t, q)])
            .sum::<f64>()
            / weight_sum;
        scale[q] = ms.sqrt();
    }
    let live: Vec<usize> = (0..p).filter(|&q| scale[q] > 0.0).collect();

    let mut beta_std = vec![0.0f64; p];
    let mut residual = prob.y.clone();
    let mut converged = false;
    for _sweep in 0..max_iter {
        let mut max_delta = 0.0f64;
        for &q in &live {
            let bq = beta_std[q];
            // rho = sum_t w_t phi~_tq (r_t + phi~_tq * bq)
            let mut rho = 0.0;
            for t in 0..m {
                let col = prob.phi[(t, q)] / scale[q];
                rho += prob.w[t] * col * residual[t];
            }
            rho += bq * weight_sum;
            let new = soft_threshold(rho, alpha) / weight_sum;
            let delta = new - bq;
            if delta != 0.0 {
                for t in 0..m {
                    residual[t] -= (prob.phi[(t, q)] / scale[q]) * delta;
                }
                beta_std[q] = new;
            }
            max_delta = max_delta.max(delta.abs());
        }
        if max_delta < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!("weighted_lasso hit the sweep cap ({max_iter}) before converging");
    }
    let beta = (0..p)
        .map(|q| if scale[q] > 0.0 { beta_std[q] / scale[q] } else { 0.0 })
        .collect();
    Ok(Coefficients { beta, converged })
}

/// Objective minimized by [`weighted_lasso`], evaluated at `beta` on the
/// original coefficient scale.
pub fn lasso_objective(prob: &DesignProblem, alpha: f64, beta: &[f64]) -> f64 {
    let (m, p) = (prob.n_rows(), prob.n_cols());
    let weight_sum: f64 = prob.w.sum();
    let mut fit = 0.0;
    for t in 0..m {
        let pred: f64 = (0..p).map(|q| prob.phi[(t, q)] * beta[q]).sum();
        let r = prob.y[t] - pred;
        fit += prob.w[t] * r * r;
    }
    let mut penalty = 0.0;
    for q in 0..p {
        let ms: f64 = (0..m)
            .map(|t| prob.w[t] * prob.phi[(t, q)] * prob.phi[(t, q)])
            .sum::<f64>()
            / weight_sum.max(f64::MIN_POSITIVE);
        penalty += ms.sqrt() * beta[q].abs();
    }
    0.5 * fit + alpha * penalty
}

/// Sequential-threshold ridge: alternate a weighted ridge solve with hard
/// thresholding of small coefficients until the support stabilizes (at
/// most `iters` rounds). Thresholding everything returns the zero vector,
/// a valid sparse answer.
pub fn stridge(
    prob: &DesignProblem,
    alpha: f64,
    threshold: f64,
    iters: usize,
) -> Result<Coefficients> {
    if threshold < 0.0 || threshold.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "threshold must be nonnegative, got {threshold}"
        )));
    }
    let p = prob.n_cols();
    let mut active: Vec<usize> = (0..p).collect();
    let mut beta_active = ridge_on(prob, alpha, &active)?;
    for _ in 0..iters.max(1) {
        let survivors: Vec<usize> = active
            .iter()
            .zip(beta_active.iter())
            .filter(|(_, &b)| b.abs() >= threshold)
            .map(|(&q, _)| q)
            .collect();
        if survivors.is_empty() {
            return Ok(Coefficients {
                beta: vec![0.0; p],
                converged: true,
            });
        }
        if survivors == active {
            break;
        }
        active = survivors;
        beta_active = ridge_on(prob, alpha, &active)?;
    }
    let mut beta = vec![0.0; p];
    for (k, &q) in active.iter().enumerate() {
        beta[q] = beta_active[k];
    }
    Ok(Coefficients {
        beta,
        converged: true,
    })
}

/// Weighted ridge restricted to a column subset; returns coefficients in
/// subset order.
fn ridge_on(prob: &DesignProblem, alpha: f64, cols: &[usize]) -> Result<Vec<f64>> {
    let (m, k) = (prob.n_rows(), cols.len());
    let mut phi = Array2::zeros((m, k));
    for (c, &q) in cols.iter().enumerate() {
        for t in 0..m {
            phi[(t, c)] = prob.phi[(t, q)];
        }
    }
    let sub = DesignProblem::new(phi, prob.y.clone(), prob.w.clone())?;
    Ok(weighted_ridge(&sub, alpha)?.beta)
}
