//! Propagation-network inference from binary epidemic records via sparse
//! L1-regularized regression on the first-order linearized infection
//! model: for a susceptible node, P(infected next step) ~ beta * (number
//! of infected in-neighbors). Works as the compressed-sensing surrogate
//! for both SIS and CP records.

use ndarray::{Array1, Array2};
use rayon::prelude::*;

use super::{FittedModel, InferenceMethod, LossVector, ScoreMatrix};
use crate::dynamics::BinaryTimeSeries;
use crate::error::{Error, Result};
use crate::selfpaced::SampleWeights;
use crate::solvers::{self, DesignProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpidemicModel {
    Sis,
    Cp,
}

struct NodeProblem {
    /// Transition start times t (the regression row for t predicts the
    /// state at t + 1).
    times: Vec<usize>,
    phi: Array2<f64>,
    y: Array1<f64>,
}

pub struct EpidemicInference<'a> {
    data: &'a BinaryTimeSeries,
    beta_hat: f64,
    alpha: f64,
    /// Candidate predictor nodes (non-missing), shared across rows.
    predictors: Vec<usize>,
    problems: Vec<Option<NodeProblem>>,
    unidentifiable: Vec<bool>,
}

impl<'a> EpidemicInference<'a> {
    pub fn new(
        data: &'a BinaryTimeSeries,
        model: EpidemicModel,
        beta_hat: f64,
        alpha: f64,
    ) -> Result<Self> {
        let _ = model; // both models share the linear surrogate
        data.validate()?;
        if !(beta_hat > 0.0) || !beta_hat.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "transmission estimate beta_hat must be positive, got {beta_hat}"
            )));
        }
        let (n, m) = (data.n_nodes(), data.n_samples());
        if m < 2 {
            return Err(Error::InvalidParameter(
                "at least 2 samples are required".into(),
            ));
        }
        let predictors: Vec<usize> = (0..n).filter(|&j| !data.missing[j]).collect();
        let mut problems = Vec::with_capacity(n);
        let mut unidentifiable = vec![false; n];
        for i in 0..n {
            if data.missing[i] {
                problems.push(None);
                continue;
            }
            let times: Vec<usize> = (0..m - 1).filter(|&t| data.states[(i, t)] == 0).collect();
            let cols: Vec<usize> = predictors.iter().copied().filter(|&j| j != i).collect();
            if times.is_empty() || cols.is_empty() {
                unidentifiable[i] = true;
                problems.push(None);
                continue;
            }
            let mut phi = Array2::zeros((times.len(), cols.len()));
            let mut y = Array1::zeros(times.len());
            for (r, &t) in times.iter().enumerate() {
                for (c, &j) in cols.iter().enumerate() {
                    phi[(r, c)] = data.states[(j, t)] as f64;
                }
                y[r] = data.states[(i, t + 1)] as f64;
            }
            if phi.iter().all(|&v| v == 0.0) {
                // No infected neighbor was ever observed while i was
                // susceptible; the row cannot be identified.
                unidentifiable[i] = true;
                problems.push(None);
                continue;
            }
            problems.push(Some(NodeProblem { times, phi, y }));
        }
        if unidentifiable.iter().any(|&u| u) {
            log::warn!(
                "{} node rows are unidentifiable and will be zero-filled",
                unidentifiable.iter().filter(|&&u| u).count()
            );
        }
        Ok(EpidemicInference {
            data,
            beta_hat,
            alpha,
            predictors,
            problems,
            unidentifiable,
        })
    }

    pub fn unidentifiable(&self) -> &[bool] {
        &self.unidentifiable
    }

    /// Predictor columns (node ids) used for node `i`, for inspection.
    pub fn design_columns(&self, i: usize) -> Option<Vec<usize>> {
        self.problems[i].as_ref().map(|_| {
            self.predictors
                .iter()
                .copied()
                .filter(|&j| j != i)
                .collect()
        })
    }
}

pub struct EpidemicFit {
    scores: ScoreMatrix,
    pub unidentifiable: Vec<bool>,
}

impl FittedModel for EpidemicFit {
    fn scores(&self) -> &ScoreMatrix {
        &self.scores
    }
}

impl InferenceMethod for EpidemicInference<'_> {
    type Fit = EpidemicFit;

    fn n_samples(&self) -> usize {
        self.data.n_samples()
    }

    fn fit(&self, weights: &SampleWeights) -> Result<EpidemicFit> {
        let n = self.data.n_nodes();
        if weights.len() != self.n_samples() {
            return Err(Error::ShapeMismatch(
                "weight vector length differs from sample count".into(),
            ));
        }
        let rows: Vec<Result<Option<Vec<f64>>>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let Some(node) = &self.problems[i] else {
                    return Ok(None);
                };
                let w = Array1::from_iter(node.times.iter().map(|&t| weights.as_slice()[t]));
                let prob = DesignProblem::new(node.phi.clone(), node.y.clone(), w)?;
                let coeffs = solvers::weighted_lasso(
                    &prob,
                    self.alpha,
                    solvers::LASSO_TOL,
                    solvers::LASSO_MAX_ITER,
                )?;
                Ok(Some(coeffs.beta))
            })
            .collect();
        let mut scores = Array2::zeros((n, n));
        for (i, row) in rows.into_iter().enumerate() {
            if let Some(beta) = row? {
                let cols: Vec<usize> = self
                    .predictors
                    .iter()
                    .copied()
                    .filter(|&j| j != i)
                    .collect();
                for (c, &j) in cols.iter().enumerate() {
                    // The regression estimates beta * a_ij; report a_ij.
                    scores[(i, j)] = beta[c] / self.beta_hat;
                }
            }
        }
        Ok(EpidemicFit {
            scores: ScoreMatrix::new(scores)?,
            unidentifiable: self.unidentifiable.clone(),
        })
    }

    /// loss_t = sum over non-missing nodes susceptible at t of
    /// (s_i(t+1) - clamp(beta_hat * sum_j scores_ij s_j(t), 0, 1))^2;
    /// the final sample has no outgoing transition and gets loss 0.
    fn per_sample_loss(&self, fit: &EpidemicFit) -> Result<LossVector> {
        let (n, m) = (self.data.n_nodes(), self.data.n_samples());
        let mut losses = vec![0.0f64; m];
        for t in 0..m - 1 {
            let mut acc = 0.0;
            for i in 0..n {
                if self.data.missing[i] || self.data.states[(i, t)] != 0 {
                    continue;
                }
                let mut hazard = 0.0;
                for &j in &self.predictors {
                    if j != i && self.data.states[(j, t)] == 1 {
                        hazard += fit.scores.get(i, j);
                    }
                }
                let pred = (self.beta_hat * hazard).clamp(0.0, 1.0);
                let r = self.data.states[(i, t + 1)] as f64 - pred;
                acc += r * r;
            }
            losses[t] = acc;
        }
        LossVector::new(losses)
    }
}

/// Crude plug-in transmission estimate for records whose true rate is
/// withheld: the rate of new infections per susceptible node-step, scaled
/// by the mean infected count as a stand-in for the unknown number of
/// infected neighbors.
pub fn estimate_beta(data: &BinaryTimeSeries) -> f64 {
    let (n, m) = (data.n_nodes(), data.n_samples());
    let mut transitions = 0.0;
    let mut exposure = 0.0;
    for t in 0..m - 1 {
        let infected = data.infected_count(t) as f64;
        for i in 0..n {
            if data.missing[i] || data.states[(i, t)] != 0 {
                continue;
            }
            transitions += data.states[(i, t + 1)] as f64;
            exposure += infected / (n.max(2) - 1) as f64;
        }
    }
    if exposure > 0.0 {
        (transitions / exposure).clamp(1e-6, 1.0)
    } else {
        1e-6
    }
}
