//! Base network-inference methods behind a single two-function contract:
//! fit under sample weights, and per-sample loss under a fitted
//! reconstruction. Anything honoring the contract can be wrapped by the
//! self-paced enhancement loop.

mod arni;
mod derivatives;
mod eg;
mod epidemic;

pub use arni::{ArniFit, ArniInference, BasisSpec, ARNI_IMPROVEMENT_TOL};
pub use derivatives::{estimate_derivatives, DerivativeScheme};
pub use eg::{EgFit, EgInference, EgSolver};
pub use epidemic::{estimate_beta, EpidemicFit, EpidemicInference, EpidemicModel};

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::selfpaced::SampleWeights;

/// N x N inferred coupling strengths; higher magnitude in entry (i, j)
/// means a stronger inferred link j -> i. The diagonal is held at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    scores: Array2<f64>,
}

impl ScoreMatrix {
    pub fn new(mut scores: Array2<f64>) -> Result<Self> {
        if scores.nrows() != scores.ncols() {
            return Err(Error::ShapeMismatch(
                "score matrix must be square".into(),
            ));
        }
        if scores.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "score matrix entries must be finite".into(),
            ));
        }
        for i in 0..scores.nrows() {
            scores[(i, i)] = 0.0;
        }
        Ok(ScoreMatrix { scores })
    }

    pub fn zeros(n: usize) -> Self {
        ScoreMatrix {
            scores: Array2::zeros((n, n)),
        }
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.scores
    }

    pub fn n(&self) -> usize {
        self.scores.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.scores[(i, j)]
    }
}

/// Nonnegative per-sample losses, one entry per recorded sample.
#[derive(Debug, Clone, PartialEq)]
pub struct LossVector {
    losses: Vec<f64>,
}

impl LossVector {
    pub fn new(losses: Vec<f64>) -> Result<Self> {
        for (index, &l) in losses.iter().enumerate() {
            if !l.is_finite() {
                return Err(Error::NonFiniteLoss { index });
            }
            if l < 0.0 {
                return Err(Error::NegativeLoss { index, value: l });
            }
        }
        Ok(LossVector { losses })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.losses
    }

    pub fn len(&self) -> usize {
        self.losses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.losses.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.losses.iter()
    }
}

impl std::ops::Index<usize> for LossVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.losses[i]
    }
}

/// A fitted reconstruction; concrete methods may carry extra state (e.g.
/// retained basis coefficients) needed to evaluate per-sample losses.
pub trait FittedModel {
    fn scores(&self) -> &ScoreMatrix;
}

/// The contract the enhancement loop builds on. A method instance owns its
/// data; `fit` with all-ones weights reproduces the unweighted base
/// method, and `per_sample_loss` returns exactly one nonnegative finite
/// value per sample.
pub trait InferenceMethod {
    type Fit: FittedModel;

    fn n_samples(&self) -> usize;

    fn fit(&self, weights: &SampleWeights) -> Result<Self::Fit>;

    fn per_sample_loss(&self, fit: &Self::Fit) -> Result<LossVector>;
}
