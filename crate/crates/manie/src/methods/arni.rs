//! Model-free inference by greedy basis-function regression on estimated
//! derivatives. Per target node, candidate interaction blocks (Fourier
//! functions of the phase difference to each other node) are added one at
//! a time, each step picking the block that most reduces the weighted
//! residual of a least-squares refit; a link's score is the residual
//! reduction its block achieved.

use ndarray::{Array1, Array2, Axis};
use rayon::prelude::*;

use super::{estimate_derivatives, DerivativeScheme, FittedModel, InferenceMethod, LossVector, ScoreMatrix};
use crate::dynamics::TimeSeries;
use crate::error::{Error, Result};
use crate::selfpaced::SampleWeights;
use crate::solvers::cholesky_solve;

/// Stop expanding a node's model when the best candidate improves the
/// weighted residual by less than this relative amount.
pub const ARNI_IMPROVEMENT_TOL: f64 = 1e-4;

/// Basis layout: pairwise blocks hold sin(k d) and cos(k d) of the phase
/// difference d = x_j - x_i for k = 1..=pairwise_harmonics; the self block
/// holds a constant plus sin/cos of x_i itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSpec {
    pub pairwise_harmonics: usize,
    pub include_self: bool,
    pub self_harmonics: usize,
}

impl Default for BasisSpec {
    fn default() -> Self {
        BasisSpec {
            pairwise_harmonics: 2,
            include_self: true,
            self_harmonics: 1,
        }
    }
}

impl BasisSpec {
    fn self_cols(&self) -> usize {
        if self.include_self {
            1 + 2 * self.self_harmonics
        } else {
            0
        }
    }

    fn block_len(&self) -> usize {
        2 * self.pairwise_harmonics
    }
}

struct NodeModel {
    cols: Vec<usize>,
    beta: Vec<f64>,
}

pub struct ArniInference {
    data: TimeSeries,
    basis: BasisSpec,
    kmax: usize,
    improvement_tol: f64,
    valid_rows: Vec<usize>,
    /// Per node: |valid_rows| x (self_cols + block_len * (N - 1)) design.
    designs: Vec<Array2<f64>>,
    /// Per node: derivative targets over valid rows.
    targets: Vec<Array1<f64>>,
}

impl ArniInference {
    /// Build the method over `ts`. A series without a derivative field has
    /// one estimated with `scheme`; an existing field is used as-is.
    pub fn new(
        ts: &TimeSeries,
        basis: BasisSpec,
        kmax: Option<usize>,
        improvement_tol: f64,
        scheme: DerivativeScheme,
    ) -> Result<Self> {
        ts.validate()?;
        if basis.pairwise_harmonics == 0 {
            return Err(Error::InvalidParameter(
                "at least one pairwise harmonic is required".into(),
            ));
        }
        if !(improvement_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "improvement tolerance must be positive".into(),
            ));
        }
        let data = if ts.deriv.is_some() {
            ts.clone()
        } else {
            estimate_derivatives(ts, scheme)?
        };
        let n = data.n_nodes();
        let m = data.n_samples();
        if n < 2 {
            return Err(Error::InvalidParameter(
                "at least two nodes are required".into(),
            ));
        }
        let kmax = kmax.unwrap_or(n - 1).min(n - 1);
        let valid_rows: Vec<usize> = match &data.deriv_valid {
            Some(mask) => (0..m).filter(|&t| mask[t]).collect(),
            None => (0..m).collect(),
        };
        if valid_rows.len() < 2 {
            return Err(Error::InvalidParameter(
                "too few samples with usable derivatives".into(),
            ));
        }

        let deriv = data.deriv.as_ref().expect("derivative field prepared");
        let rows = valid_rows.len();
        let self_cols = basis.self_cols();
        let p = self_cols + basis.block_len() * (n - 1);
        let mut designs = Vec::with_capacity(n);
        let mut targets = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = Array2::zeros((rows, p));
            let mut y = Array1::zeros(rows);
            for (r, &t) in valid_rows.iter().enumerate() {
                y[r] = deriv[(i, t)];
                let xi = data.values[(i, t)];
                let mut c = 0;
                if basis.include_self {
                    x[(r, c)] = 1.0;
                    c += 1;
                    for k in 1..=basis.self_harmonics {
                        x[(r, c)] = (k as f64 * xi).sin();
                        x[(r, c + 1)] = (k as f64 * xi).cos();
                        c += 2;
                    }
                }
                for j in 0..n {
                    if j == i {
                        continue;
                    }
                    let d = data.values[(j, t)] - xi;
                    for k in 1..=basis.pairwise_harmonics {
                        x[(r, c)] = (k as f64 * d).sin();
                        x[(r, c + 1)] = (k as f64 * d).cos();
                        c += 2;
                    }
                }
            }
            designs.push(x);
            targets.push(y);
        }

        Ok(ArniInference {
            data,
            basis,
            kmax,
            improvement_tol,
            valid_rows,
            designs,
            targets,
        })
    }

    pub fn data(&self) -> &TimeSeries {
        &self.data
    }

    fn candidate(&self, i: usize, block: usize) -> usize {
        if block < i {
            block
        } else {
            block + 1
        }
    }

    fn block_cols(&self, block: usize) -> std::ops::Range<usize> {
        let start = self.basis.self_cols() + block * self.basis.block_len();
        start..start + self.basis.block_len()
    }
}

/// Solve the least-squares subsystem restricted to `cols`, adding a tiny
/// ridge if the selected design is rank deficient.
fn solve_subset(gram: &Array2<f64>, rhs: &Array1<f64>, cols: &[usize]) -> Vec<f64> {
    let k = cols.len();
    let mut g = Array2::zeros((k, k));
    let mut r = Array1::zeros(k);
    for (a, &ca) in cols.iter().enumerate() {
        r[a] = rhs[ca];
        for (b, &cb) in cols.iter().enumerate() {
            g[(a, b)] = gram[(ca, cb)];
        }
    }
    match cholesky_solve(g.clone(), r.clone()) {
        Ok(beta) => beta.to_vec(),
        Err(_) => {
            for d in 0..k {
                g[(d, d)] += 1e-8;
            }
            cholesky_solve(g, r)
                .map(|b| b.to_vec())
                .unwrap_or_else(|_| vec![0.0; k])
        }
    }
}

fn residual(ywy: f64, gram: &Array2<f64>, rhs: &Array1<f64>, cols: &[usize], beta: &[f64]) -> f64 {
    let mut lin = 0.0;
    let mut quad = 0.0;
    for (a, &ca) in cols.iter().enumerate() {
        lin += beta[a] * rhs[ca];
        for (b, &cb) in cols.iter().enumerate() {
            quad += beta[a] * gram[(ca, cb)] * beta[b];
        }
    }
    (ywy - 2.0 * lin + quad).max(0.0)
}

pub struct ArniFit {
    scores: ScoreMatrix,
    models: Vec<NodeModel>,
}

impl FittedModel for ArniFit {
    fn scores(&self) -> &ScoreMatrix {
        &self.scores
    }
}

impl InferenceMethod for ArniInference {
    type Fit = ArniFit;

    fn n_samples(&self) -> usize {
        self.data.n_samples()
    }

    fn fit(&self, weights: &SampleWeights) -> Result<ArniFit> {
        let n = self.data.n_nodes();
        if weights.len() != self.n_samples() {
            return Err(Error::ShapeMismatch(
                "weight vector length differs from sample count".into(),
            ));
        }
        let w = Array1::from_iter(self.valid_rows.iter().map(|&t| weights.as_slice()[t]));

        let per_node: Vec<(Vec<f64>, NodeModel)> = (0..n)
            .into_par_iter()
            .map(|i| {
                let x = &self.designs[i];
                let y = &self.targets[i];
                let wx = x * &w.view().insert_axis(Axis(1));
                let gram = x.t().dot(&wx);
                let rhs = wx.t().dot(y);
                let ywy: f64 = y
                    .iter()
                    .zip(w.iter())
                    .map(|(&yi, &wi)| wi * yi * yi)
                    .sum();

                let mut cols: Vec<usize> = (0..self.basis.self_cols()).collect();
                let mut beta = if cols.is_empty() {
                    Vec::new()
                } else {
                    solve_subset(&gram, &rhs, &cols)
                };
                let mut resid = residual(ywy, &gram, &rhs, &cols, &beta);
                let floor = 1e-14 * ywy.max(1e-300);

                let mut scores_row = vec![0.0f64; n];
                let mut remaining: Vec<usize> = (0..n - 1).collect();
                let mut selected = 0usize;
                while selected < self.kmax && resid > floor && !remaining.is_empty() {
                    let mut best: Option<(usize, Vec<usize>, Vec<f64>, f64)> = None;
                    for (slot, &block) in remaining.iter().enumerate() {
                        let mut trial = cols.clone();
                        trial.extend(self.block_cols(block));
                        let b = solve_subset(&gram, &rhs, &trial);
                        let r = residual(ywy, &gram, &rhs, &trial, &b);
                        if best.as_ref().map_or(true, |(_, _, _, br)| r < *br) {
                            best = Some((slot, trial, b, r));
                        }
                    }
                    let (slot, trial, b, r) = best.expect("candidates remain");
                    let improvement = (resid - r) / resid.max(1e-300);
                    if improvement < self.improvement_tol {
                        break;
                    }
                    let block = remaining.remove(slot);
                    scores_row[self.candidate(i, block)] = resid - r;
                    cols = trial;
                    beta = b;
                    resid = r;
                    selected += 1;
                }
                (scores_row, NodeModel { cols, beta })
            })
            .collect();

        let mut scores = Array2::zeros((n, n));
        let mut models = Vec::with_capacity(n);
        for (i, (row, model)) in per_node.into_iter().enumerate() {
            for (j, s) in row.into_iter().enumerate() {
                scores[(i, j)] = s;
            }
            models.push(model);
        }
        Ok(ArniFit {
            scores: ScoreMatrix::new(scores)?,
            models,
        })
    }

    /// loss_t = sum_i (dx_i(t) - prediction from the retained basis
    /// coefficients)^2; samples without a usable derivative get loss 0.
    fn per_sample_loss(&self, fit: &ArniFit) -> Result<LossVector> {
        let n = self.data.n_nodes();
        let mut losses = vec![0.0f64; self.n_samples()];
        for i in 0..n {
            let x = &self.designs[i];
            let y = &self.targets[i];
            let model = &fit.models[i];
            for (r, &t) in self.valid_rows.iter().enumerate() {
                let mut pred = 0.0;
                for (k, &c) in model.cols.iter().enumerate() {
                    pred += x[(r, c)] * model.beta[k];
                }
                let e = y[r] - pred;
                losses[t] += e * e;
            }
        }
        LossVector::new(losses)
    }
}
