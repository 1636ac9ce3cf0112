//! The model-agnostic enhancement loop: alternate between refitting the
//! reconstruction under fixed sample weights and re-deriving the weights
//! from per-sample losses, with a geometrically growing pace parameter.
//!
//! The weight half-step has a closed form. Minimizing
//! v * L + 0.5 * lambda * (v^2 - 2 v) over v in [0, 1] gives
//! v = 1 - L / lambda when L < lambda and v = 0 otherwise: samples whose
//! loss exceeds the pace parameter are excluded outright, cheap-to-fit
//! samples keep weights near one. Growing lambda by a constant factor each
//! outer iteration gradually re-admits costlier samples; the loop stops
//! once the weight vector hardly changes.

use crate::error::{Error, Result};
use crate::methods::{FittedModel, InferenceMethod, LossVector};

/// Lower bound for the pace parameter, guarding the all-clean case where
/// every initial loss is zero.
pub const LAMBDA_FLOOR: f64 = 1e-12;

/// Per-sample contribution weights in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct SampleWeights {
    v: Vec<f64>,
}

impl SampleWeights {
    pub fn ones(m: usize) -> Self {
        SampleWeights { v: vec![1.0; m] }
    }

    pub fn from_vec(v: Vec<f64>) -> Result<Self> {
        if v.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::InvalidParameter(
                "sample weights must lie in [0, 1]".into(),
            ));
        }
        Ok(SampleWeights { v })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.v
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.v.iter()
    }

    /// Infinity norm of the difference to another weight vector.
    pub fn max_delta(&self, other: &SampleWeights) -> f64 {
        self.v
            .iter()
            .zip(other.v.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Active-sample indices (strictly positive weight).
    pub fn support(&self) -> Vec<usize> {
        self.v
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0.0)
            .map(|(t, _)| t)
            .collect()
    }
}

impl std::ops::Index<usize> for SampleWeights {
    type Output = f64;
    fn index(&self, t: usize) -> &f64 {
        &self.v[t]
    }
}

/// Closed-form weight update: v_t = 1 - L_t / lambda when L_t < lambda,
/// else 0.
pub fn update_weights(losses: &[f64], lambda: f64) -> Result<SampleWeights> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "pace parameter lambda must be positive and finite, got {lambda}"
        )));
    }
    let mut v = Vec::with_capacity(losses.len());
    for (index, &l) in losses.iter().enumerate() {
        if !l.is_finite() {
            return Err(Error::NonFiniteLoss { index });
        }
        if l < 0.0 {
            return Err(Error::NegativeLoss { index, value: l });
        }
        v.push(if l < lambda { 1.0 - l / lambda } else { 0.0 });
    }
    SampleWeights::from_vec(v)
}

/// Pick the initial pace parameter as a quantile (linear interpolation) of
/// the losses from an all-ones-weight fit, floored at [`LAMBDA_FLOOR`] so
/// perfectly clean data stays well-posed.
pub fn init_lambda(losses: &[f64], quantile: f64) -> Result<f64> {
    if losses.is_empty() {
        return Err(Error::InvalidParameter(
            "cannot pick a pace parameter from an empty loss vector".into(),
        ));
    }
    if !(0.0..=1.0).contains(&quantile) {
        return Err(Error::InvalidParameter(format!(
            "quantile must lie in [0, 1], got {quantile}"
        )));
    }
    let mut sorted = losses.to_vec();
    if sorted.iter().any(|l| !l.is_finite() || *l < 0.0) {
        return Err(Error::InvalidParameter(
            "losses must be finite and nonnegative".into(),
        ));
    }
    sorted.sort_by(|a, b| a.total_cmp(b));
    let h = quantile * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    let q = if lo + 1 < sorted.len() {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    } else {
        sorted[lo]
    };
    Ok(q.max(LAMBDA_FLOOR))
}

/// Loop controls. `lambda0 = None` initializes the pace parameter from the
/// given quantile of the first iteration's losses.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfPacedConfig {
    pub lambda0: Option<f64>,
    pub quantile: f64,
    /// Geometric growth factor applied to lambda after every weight
    /// update; conventionally 1.05, 1.25, or 1.5.
    pub growth: f64,
    /// Convergence tolerance on the infinity norm of the weight change.
    pub eps: f64,
    pub max_outer: usize,
}

impl Default for SelfPacedConfig {
    fn default() -> Self {
        SelfPacedConfig {
            lambda0: None,
            quantile: 0.75,
            growth: 1.25,
            eps: 1e-3,
            max_outer: 50,
        }
    }
}

impl SelfPacedConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(l0) = self.lambda0 {
            if !(l0 > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "lambda0 must be positive, got {l0}"
                )));
            }
        }
        if !(0.0..=1.0).contains(&self.quantile) {
            return Err(Error::InvalidParameter(format!(
                "quantile must lie in [0, 1], got {}",
                self.quantile
            )));
        }
        if !(self.growth > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "growth factor must exceed 1, got {}",
                self.growth
            )));
        }
        if !(self.eps > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "eps must be positive, got {}",
                self.eps
            )));
        }
        if self.max_outer == 0 {
            return Err(Error::InvalidParameter(
                "max_outer must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Result of the enhancement loop: the final fit, the final weights, and
/// full per-iteration trajectories (all of length `iterations`).
pub struct SelfPacedOutcome<F> {
    pub fit: F,
    pub weights: SampleWeights,
    pub weight_history: Vec<SampleWeights>,
    pub loss_history: Vec<LossVector>,
    pub lambda_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl<F: FittedModel> SelfPacedOutcome<F> {
    pub fn scores(&self) -> &crate::methods::ScoreMatrix {
        self.fit.scores()
    }
}

/// Run the alternating loop around `method`: fit under the current
/// weights, compute per-sample losses, update the weights in closed form,
/// grow lambda, and stop when the weights hardly change (or `max_outer`
/// is reached). If an update rejects every sample, lambda is grown and the
/// update retried (without refitting) up to 10 times before aborting.
pub fn enhance<M: InferenceMethod>(
    method: &M,
    cfg: &SelfPacedConfig,
) -> Result<SelfPacedOutcome<M::Fit>> {
    cfg.validate()?;
    let m = method.n_samples();
    if m == 0 {
        return Err(Error::InvalidParameter(
            "method reports zero samples".into(),
        ));
    }

    let mut v = SampleWeights::ones(m);
    let mut lambda = cfg.lambda0;
    let mut weight_history = Vec::new();
    let mut loss_history = Vec::new();
    let mut lambda_history = Vec::new();
    let mut last_fit = None;
    let mut converged = false;
    let mut iterations = 0;

    for iter in 1..=cfg.max_outer {
        let fit = method.fit(&v).map_err(|e| e.at_iteration(iter))?;
        let losses = method
            .per_sample_loss(&fit)
            .map_err(|e| e.at_iteration(iter))?;
        if losses.len() != m {
            return Err(Error::ShapeMismatch(format!(
                "per-sample loss returned {} entries for {m} samples",
                losses.len()
            )));
        }

        let mut lam = match lambda {
            Some(l) => l,
            None => init_lambda(losses.as_slice(), cfg.quantile)?,
        };
        let mut next = update_weights(losses.as_slice(), lam)?;
        let mut retries = 0;
        while next.support().is_empty() {
            retries += 1;
            if retries > 10 {
                return Err(Error::AllSamplesRejected { retries: retries - 1 });
            }
            lam *= cfg.growth;
            next = update_weights(losses.as_slice(), lam)?;
        }

        let delta = next.max_delta(&v);
        weight_history.push(next.clone());
        loss_history.push(losses);
        lambda_history.push(lam);
        lambda = Some(lam * cfg.growth);
        v = next;
        last_fit = Some(fit);
        iterations = iter;
        if delta < cfg.eps {
            converged = true;
            break;
        }
    }

    Ok(SelfPacedOutcome {
        fit: last_fit.expect("at least one iteration ran"),
        weights: v,
        weight_history,
        loss_history,
        lambda_history,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::methods::{LossVector, ScoreMatrix};

    #[test]
    fn closed_form_examples() {
        let v = update_weights(&[0.5], 1.0).unwrap();
        assert!((v[0] - 0.5).abs() < 1e-15);

        let v = update_weights(&[2.0, 3.0, 999.0], 2.0).unwrap();
        assert!(v.iter().all(|&x| x == 0.0), "losses at or above lambda cut off");

        let v = update_weights(&[0.2, 1.0, 0.0], 1e12).unwrap();
        assert!(v.iter().all(|&x| x >= 1.0 - 1e-12));
    }

    #[test]
    fn update_matches_grid_minimization() {
        // Brute-force the per-sample objective v*L + lambda/2 (v^2 - 2v)
        // over a fine grid of v in [0, 1].
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let l = rng.random_range(0.0..4.0);
            let lambda = rng.random_range(0.1..4.0);
            let v = update_weights(&[l], lambda).unwrap()[0];
            let mut best = (f64::INFINITY, 0.0);
            for k in 0..=10_000 {
                let cand = k as f64 / 10_000.0;
                let obj = cand * l + 0.5 * lambda * (cand * cand - 2.0 * cand);
                if obj < best.0 {
                    best = (obj, cand);
                }
            }
            assert!(
                (v - best.1).abs() <= 1e-4,
                "closed form {v} vs grid {} at L={l}, lambda={lambda}",
                best.1
            );
        }
    }

    #[test]
    fn update_validates_contract() {
        assert!(matches!(
            update_weights(&[-0.1], 1.0),
            Err(Error::NegativeLoss { .. })
        ));
        assert!(matches!(
            update_weights(&[f64::NAN], 1.0),
            Err(Error::NonFiniteLoss { .. })
        ));
        assert!(update_weights(&[0.1], 0.0).is_err());
    }

    #[test]
    fn weights_monotone_in_loss_and_lambda() {
        let v = update_weights(&[0.1, 0.5, 0.9], 1.0).unwrap();
        assert!(v[0] > v[1] && v[1] > v[2]);
        let lo = update_weights(&[0.5], 0.8).unwrap()[0];
        let hi = update_weights(&[0.5], 2.0).unwrap()[0];
        assert!(hi > lo);
    }

    #[test]
    fn lambda_quantile_interpolates() {
        let l = init_lambda(&[1.0, 2.0, 3.0, 4.0], 0.75).unwrap();
        assert!((l - 3.25).abs() < 1e-12);
        let l = init_lambda(&[5.0, 5.0, 5.0], 0.75).unwrap();
        assert_eq!(l, 5.0);
        let l = init_lambda(&[0.0, 0.0], 0.75).unwrap();
        assert_eq!(l, LAMBDA_FLOOR);
    }

    /// Stub method with frozen losses: fit ignores weights.
    struct FrozenLoss {
        losses: Vec<f64>,
    }

    struct FrozenFit {
        scores: ScoreMatrix,
    }

    impl crate::methods::FittedModel for FrozenFit {
        fn scores(&self) -> &ScoreMatrix {
            &self.scores
        }
    }

    impl InferenceMethod for FrozenLoss {
        type Fit = FrozenFit;
        fn n_samples(&self) -> usize {
            self.losses.len()
        }
        fn fit(&self, _w: &SampleWeights) -> crate::error::Result<FrozenFit> {
            Ok(FrozenFit {
                scores: ScoreMatrix::zeros(2),
            })
        }
        fn per_sample_loss(&self, _fit: &FrozenFit) -> crate::error::Result<LossVector> {
            LossVector::new(self.losses.clone())
        }
    }

    #[test]
    fn support_grows_with_lambda_under_frozen_losses() {
        let losses = vec![0.1, 0.4, 1.6, 6.4, 25.6];
        let mut lambda = 0.2;
        let mut prev = update_weights(&losses, lambda).unwrap().support();
        for _ in 0..40 {
            lambda *= 1.25;
            let now = update_weights(&losses, lambda).unwrap().support();
            assert!(
                prev.iter().all(|t| now.contains(t)),
                "support must not shrink as lambda grows"
            );
            prev = now;
        }
        assert_eq!(prev.len(), losses.len());
    }

    #[test]
    fn clean_data_converges_immediately() {
        let method = FrozenLoss {
            losses: vec![1e-16; 10],
        };
        let out = enhance(&method, &SelfPacedConfig::default()).unwrap();
        assert!(out.converged);
        assert!(out.iterations <= 3);
        assert!(out.weights.iter().all(|&v| v > 0.999));
    }

    #[test]
    fn huge_lambda_degenerates_to_base_method() {
        let method = FrozenLoss {
            losses: vec![0.3, 0.9, 0.1],
        };
        let cfg = SelfPacedConfig {
            lambda0: Some(1e12),
            max_outer: 1,
            ..Default::default()
        };
        let out = enhance(&method, &cfg).unwrap();
        assert_eq!(out.iterations, 1);
        // The single fit ran with all-ones weights.
        assert_eq!(out.weight_history.len(), 1);
        assert!(out.weights.iter().all(|&v| v >= 1.0 - 1e-12));
    }

    #[test]
    fn all_rejected_retries_then_aborts() {
        let method = FrozenLoss {
            losses: vec![1e9; 4],
        };
        // lambda0 so small that even 10 growth retries cannot reach the
        // losses.
        let cfg = SelfPacedConfig {
            lambda0: Some(1e-6),
            ..Default::default()
        };
        assert!(matches!(
            enhance(&method, &cfg),
            Err(Error::AllSamplesRejected { .. })
        ));
        // A reachable loss level recovers through retries instead.
        let cfg = SelfPacedConfig {
            lambda0: Some(1e9 * 0.2),
            ..Default::default()
        };
        assert!(enhance(&method, &cfg).is_ok());
    }

    #[test]
    fn trajectories_match_iteration_count() {
        let method = FrozenLoss {
            losses: vec![0.5, 2.0, 8.0],
        };
        let cfg = SelfPacedConfig {
            lambda0: Some(1.0),
            max_outer: 30,
            ..Default::default()
        };
        let out = enhance(&method, &cfg).unwrap();
        assert_eq!(out.weight_history.len(), out.iterations);
        assert_eq!(out.loss_history.len(), out.iterations);
        assert_eq!(out.lambda_history.len(), out.iterations);
        for w in &out.weight_history {
            assert!(w.iter().all(|&v| (0.0..=1.0).contains(&v)));
        }
    }
}
