// Copyright 2026 The qksvm Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the
// License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either
// express or implied. See the License for the specific language governing permissions and
// limitations under the License.

//! Soft-margin SVM over precomputed kernel matrices, plus the classical
//! baseline kernels.
//!
//! Training maximizes the dual
//! `W(α) = Σ α_i - 1/2 Σ_ij α_i α_j y_i y_j K_ij` subject to `0 ≤ α_i ≤ C`
//! and `Σ α_i y_i = 0`, by sequential minimal optimization: repeatedly pick a
//! KKT-violating pair and solve its two-variable subproblem in closed form.
//! Pair selection follows the classic two-loop scheme with an error cache and
//! the max-|E1 - E2| second-choice heuristic; fallback scan origins come from
//! a seeded generator, so fits are deterministic.
//!
//! Pairs with non-positive curvature `η = K11 + K22 - 2 K12 ≤ 0` are skipped
//! rather than treated as an error; that is the safety valve that lets
//! slightly indefinite shot-sampled kernel matrices train.
//!
//! The decision function is `f(z) = Σ_i dual_coef_i K(z, x_i) + bias` with
//! `dual_coef_i = α_i y_i`; a tie at exactly 0 predicts +1.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{KernelMatrix, KernelSource, MatrixKind};

/// Classical kernel functions used as baselines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassicalKernelKind {
    /// `x · y`
    Linear,
    /// `(gamma * x·y + coef0)^degree`
    Polynomial { degree: u32, coef0: f64, gamma: f64 },
    /// `exp(-gamma * ||x - y||²)`
    Rbf { gamma: f64 },
    /// `tanh(gamma * x·y + coef0)`
    Sigmoid { gamma: f64, coef0: f64 },
}

impl ClassicalKernelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ClassicalKernelKind::Linear => "linear",
            ClassicalKernelKind::Polynomial { .. } => "polynomial",
            ClassicalKernelKind::Rbf { .. } => "rbf",
            ClassicalKernelKind::Sigmoid { .. } => "sigmoid",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let gamma = match self {
            ClassicalKernelKind::Linear => return Ok(()),
            ClassicalKernelKind::Polynomial { gamma, .. } => *gamma,
            ClassicalKernelKind::Rbf { gamma } => *gamma,
            ClassicalKernelKind::Sigmoid { gamma, .. } => *gamma,
        };
        if gamma > 0.0 && gamma.is_finite() {
            Ok(())
        } else {
            Err(Error::Config(format!("{} kernel needs gamma > 0, got {gamma}", self.name())))
        }
    }

    /// Kernel value of two feature vectors.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            ClassicalKernelKind::Linear => dot(x, y),
            ClassicalKernelKind::Polynomial { degree, coef0, gamma } => {
                (gamma * dot(x, y) + coef0).powi(*degree as i32)
            }
            ClassicalKernelKind::Rbf { gamma } => {
                let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                (-gamma * d2).exp()
            }
            ClassicalKernelKind::Sigmoid { gamma, coef0 } => (gamma * dot(x, y) + coef0).tanh(),
        }
    }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Rectangular classical kernel matrix: rows from `x`, columns from `y`.
pub fn classical_kernel_matrix(
    x: &[Vec<f64>],
    y: &[Vec<f64>],
    kind: &ClassicalKernelKind,
) -> Result<KernelMatrix> {
    kind.validate()?;
    if x.is_empty() || y.is_empty() {
        return Err(Error::InvalidArgument("kernel matrix of an empty sample list".into()));
    }
    check_dims(x)?;
    check_dims(y)?;
    if x[0].len() != y[0].len() {
        return Err(Error::InvalidArgument(format!(
            "kernel between {}-dim and {}-dim vectors",
            x[0].len(),
            y[0].len()
        )));
    }
    let (m, n) = (x.len(), y.len());
    let mut values = Vec::with_capacity(m * n);
    for xi in x {
        for yj in y {
            values.push(kind.eval(xi, yj));
        }
    }
    KernelMatrix::from_values(
        MatrixKind::Test,
        m,
        n,
        values,
        KernelSource::Classical { kind: kind.clone() },
        None,
        None,
    )
}

/// Square symmetric classical train matrix over `x`; each pair is evaluated
/// once and mirrored.
pub fn classical_train_matrix(
    x: &[Vec<f64>],
    kind: &ClassicalKernelKind,
) -> Result<KernelMatrix> {
    kind.validate()?;
    if x.is_empty() {
        return Err(Error::InvalidArgument("kernel matrix of an empty sample list".into()));
    }
    check_dims(x)?;
    let n = x.len();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = kind.eval(&x[i], &x[j]);
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    KernelMatrix::from_values(
        MatrixKind::Train,
        n,
        n,
        values,
        KernelSource::Classical { kind: kind.clone() },
        None,
        None,
    )
}

fn check_dims(x: &[Vec<f64>]) -> Result<()> {
    let d = x[0].len();
    if x.iter().any(|v| v.len() != d) {
        return Err(Error::InvalidArgument("ragged feature matrix".into()));
    }
    Ok(())
}

/// Training hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmTrainConfig {
    /// Box constraint.
    pub c: f64,
    /// KKT violation tolerance.
    pub tol: f64,
    /// Cap on optimization sweeps over the training set.
    pub max_passes: usize,
    /// Seed for the fallback pair-scan origins.
    pub seed: u64,
}

impl Default for SvmTrainConfig {
    fn default() -> Self {
        SvmTrainConfig { c: 1.0, tol: 1e-3, max_passes: 200, seed: 0 }
    }
}

/// A fitted SVM.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    /// `α_i y_i` per training sample; zeros for non-support samples.
    pub dual_coefficients: Vec<f64>,
    pub bias: f64,
    /// Indices with materially nonzero `α_i`.
    pub support_indices: Vec<usize>,
    /// Training labels, ±1.
    pub labels: Vec<i8>,
    pub config: SvmTrainConfig,
    /// Hash of the kernel source the model was trained on; predictions refuse
    /// matrices with a different hash.
    pub kernel_spec_hash: String,
}

impl SvmModel {
    pub fn num_train(&self) -> usize {
        self.dual_coefficients.len()
    }

    /// `α_i = dual_coefficients_i * y_i`.
    pub fn alphas(&self) -> Vec<f64> {
        self.dual_coefficients
            .iter()
            .zip(&self.labels)
            .map(|(&c, &y)| c * y as f64)
            .collect()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<SvmModel> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Threshold above which an α counts as a support coefficient.
const SUPPORT_EPS: f64 = 1e-10;
/// Minimum relative progress for a two-variable step to be accepted.
const STEP_EPS: f64 = 1e-12;

/// Fits the soft-margin dual on a precomputed train kernel.
pub fn fit_precomputed(
    k: &KernelMatrix,
    y: &[i8],
    config: &SvmTrainConfig,
) -> Result<SvmModel> {
    if k.kind() != MatrixKind::Train {
        return Err(Error::InvalidArgument("fit needs a train-kind kernel matrix".into()));
    }
    let n = k.rows();
    if y.len() != n {
        return Err(Error::InvalidArgument(format!(
            "kernel is {n}x{n} but {} labels were given",
            y.len()
        )));
    }
    if let Some(bad) = y.iter().find(|&&v| v != 1 && v != -1) {
        return Err(Error::InvalidArgument(format!("labels must be +1 or -1, got {bad}")));
    }
    if y.iter().all(|&v| v == 1) || y.iter().all(|&v| v == -1) {
        return Err(Error::InvalidArgument("training set has a single class".into()));
    }
    if config.c <= 0.0 || !config.c.is_finite() {
        return Err(Error::InvalidArgument(format!("C must be positive, got {}", config.c)));
    }
    if config.tol <= 0.0 || !config.tol.is_finite() {
        return Err(Error::InvalidArgument(format!("tol must be positive, got {}", config.tol)));
    }
    if config.max_passes == 0 {
        return Err(Error::InvalidArgument("max_passes must be >= 1".into()));
    }

    let mut solver = Smo {
        k,
        y: y.iter().map(|&v| v as f64).collect(),
        alpha: vec![0.0; n],
        errors: y.iter().map(|&v| -(v as f64)).collect(),
        b: 0.0,
        c: config.c,
        tol: config.tol,
        rng: ChaCha8Rng::seed_from_u64(config.seed),
    };
    solver.run(config.max_passes);

    let dual_coefficients: Vec<f64> =
        solver.alpha.iter().zip(&solver.y).map(|(&a, &yv)| a * yv).collect();
    let support_indices =
        (0..n).filter(|&i| solver.alpha[i] > SUPPORT_EPS).collect::<Vec<_>>();
    let bias = kkt_bias(k, &solver.y, &solver.alpha, config.c);
    Ok(SvmModel {
        dual_coefficients,
        bias,
        support_indices,
        labels: y.to_vec(),
        config: config.clone(),
        kernel_spec_hash: k.spec_hash(),
    })
}

/// Recomputes the bias from the final alphas via the KKT conditions.
///
/// Free support vectors pin the bias exactly, so their average is used when
/// any exist. Otherwise every point bounds the bias from one side only and
/// the midpoint of the feasible interval is taken. Either way the bias is a
/// deterministic function of the solution rather than of the optimization
/// path, unlike the running estimate the solver maintains internally.
fn kkt_bias(k: &KernelMatrix, y: &[f64], alpha: &[f64], c: f64) -> f64 {
    let n = alpha.len();
    let mut free_sum = 0.0;
    let mut free_count = 0usize;
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for i in 0..n {
        let g: f64 = (0..n).map(|j| alpha[j] * y[j] * k.get(i, j)).sum();
        let r = y[i] - g;
        let at_zero = alpha[i] <= SUPPORT_EPS;
        let at_c = alpha[i] >= c - SUPPORT_EPS;
        if !at_zero && !at_c {
            free_sum += r;
            free_count += 1;
        } else if (y[i] > 0.0) == at_zero {
            // A positive point at zero or a negative point at C demands
            // b >= r; the opposite corners demand b <= r.
            lo = lo.max(r);
        } else {
            hi = hi.min(r);
        }
    }
    if free_count > 0 {
        return free_sum / free_count as f64;
    }
    // A feasible dual with both classes always produces both bounds; the
    // fallbacks only guard against unconverged or degenerate states.
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (true, false) => lo,
        (false, true) => hi,
        (false, false) => 0.0,
    }
}

struct Smo<'a> {
    k: &'a KernelMatrix,
    y: Vec<f64>,
    alpha: Vec<f64>,
    /// `E_i = f(x_i) - y_i`, maintained incrementally.
    errors: Vec<f64>,
    b: f64,
    c: f64,
    tol: f64,
    rng: ChaCha8Rng,
}

impl Smo<'_> {
    fn run(&mut self, max_passes: usize) {
        let n = self.alpha.len();
        let mut examine_all = true;
        let mut num_changed = 1usize;
        let mut passes = 0usize;
        while (num_changed > 0 || examine_all) && passes < max_passes {
            num_changed = 0;
            if examine_all {
                for i in 0..n {
                    num_changed += self.examine(i);
                }
            } else {
                for i in 0..n {
                    if self.is_non_bound(i) {
                        num_changed += self.examine(i);
                    }
                }
            }
            if examine_all {
                examine_all = false;
            } else if num_changed == 0 {
                examine_all = true;
            }
            passes += 1;
        }
    }

    fn is_non_bound(&self, i: usize) -> bool {
        self.alpha[i] > 0.0 && self.alpha[i] < self.c
    }

    fn examine(&mut self, i2: usize) -> usize {
        let y2 = self.y[i2];
        let alph2 = self.alpha[i2];
        let e2 = self.errors[i2];
        let r2 = e2 * y2;
        let violates =
            (r2 < -self.tol && alph2 < self.c) || (r2 > self.tol && alph2 > 0.0);
        if !violates {
            return 0;
        }
        let n = self.alpha.len();

        // Second-choice heuristic: largest |E1 - E2| among non-bound points.
        let mut best: Option<(usize, f64)> = None;
        for i in 0..n {
            if self.is_non_bound(i) {
                let gap = (self.errors[i] - e2).abs();
                if best.is_none_or(|(_, g)| gap > g) {
                    best = Some((i, gap));
                }
            }
        }
        if let Some((i1, _)) = best {
            if self.take_step(i1, i2) {
                return 1;
            }
        }

        // Fallback scans from a seeded random origin.
        let start = self.rng.random_range(0..n);
        for off in 0..n {
            let i1 = (start + off) % n;
            if self.is_non_bound(i1) && self.take_step(i1, i2) {
                return 1;
            }
        }
        let start = self.rng.random_range(0..n);
        for off in 0..n {
            let i1 = (start + off) % n;
            if self.take_step(i1, i2) {
                return 1;
            }
        }
        0
    }

    fn take_step(&mut self, i1: usize, i2: usize) -> bool {
        if i1 == i2 {
            return false;
        }
        let (alph1, alph2) = (self.alpha[i1], self.alpha[i2]);
        let (y1, y2) = (self.y[i1], self.y[i2]);
        let (e1, e2) = (self.errors[i1], self.errors[i2]);
        let s = y1 * y2;
        let (l, h) = if s < 0.0 {
            ((alph2 - alph1).max(0.0), (self.c + alph2 - alph1).min(self.c))
        } else {
            ((alph1 + alph2 - self.c).max(0.0), (alph1 + alph2).min(self.c))
        };
        if l >= h {
            return false;
        }
        let k11 = self.k.get(i1, i1);
        let k12 = self.k.get(i1, i2);
        let k22 = self.k.get(i2, i2);
        let eta = k11 + k22 - 2.0 * k12;
        if eta <= 0.0 {
            // Non-positive curvature: possible on sampled matrices; skip.
            return false;
        }
        let mut a2 = alph2 + y2 * (e1 - e2) / eta;
        a2 = a2.clamp(l, h);
        if (a2 - alph2).abs() < STEP_EPS * (a2 + alph2 + STEP_EPS) {
            return false;
        }
        let a1 = (alph1 + s * (alph2 - a2)).clamp(0.0, self.c);

        let b_old = self.b;
        let d1 = y1 * (a1 - alph1);
        let d2 = y2 * (a2 - alph2);
        let b1 = self.b - e1 - d1 * k11 - d2 * k12;
        let b2 = self.b - e2 - d1 * k12 - d2 * k22;
        self.b = if a1 > 0.0 && a1 < self.c {
            b1
        } else if a2 > 0.0 && a2 < self.c {
            b2
        } else {
            (b1 + b2) / 2.0
        };

        let db = self.b - b_old;
        for i in 0..self.alpha.len() {
            self.errors[i] += d1 * self.k.get(i1, i) + d2 * self.k.get(i2, i) + db;
        }
        self.alpha[i1] = a1;
        self.alpha[i2] = a2;
        true
    }
}

/// Dual objective `Σ α_i - 1/2 Σ_ij α_i α_j y_i y_j K_ij`.
pub fn dual_objective(k: &KernelMatrix, y: &[i8], alpha: &[f64]) -> Result<f64> {
    let n = alpha.len();
    if k.rows() != n || k.cols() != n || y.len() != n {
        return Err(Error::InvalidArgument("dual objective shape mismatch".into()));
    }
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += alpha[i] * alpha[j] * (y[i] as f64) * (y[j] as f64) * k.get(i, j);
        }
    }
    Ok(alpha.iter().sum::<f64>() - 0.5 * quad)
}

/// Decision values for each row of `k_test` (test rows × train columns).
/// The matrix must come from the same kernel source the model was trained
/// on; the stored hash ignores shot counts and seeds, so exact and sampled
/// matrices of one feature map are interchangeable.
pub fn decision_function(model: &SvmModel, k_test: &KernelMatrix) -> Result<Vec<f64>> {
    if k_test.spec_hash() != model.kernel_spec_hash {
        return Err(Error::SpecHashMismatch {
            expected: model.kernel_spec_hash.clone(),
            actual: k_test.spec_hash(),
        });
    }
    if k_test.cols() != model.num_train() {
        return Err(Error::InvalidArgument(format!(
            "kernel has {} columns but the model was trained on {} samples",
            k_test.cols(),
            model.num_train()
        )));
    }
    Ok((0..k_test.rows())
        .map(|i| {
            let row = k_test.row(i);
            model
                .dual_coefficients
                .iter()
                .zip(row)
                .map(|(&c, &kv)| c * kv)
                .sum::<f64>()
                + model.bias
        })
        .collect())
}

/// Hard labels from decision values; a tie at exactly 0 goes to +1.
pub fn predict_labels(model: &SvmModel, k_test: &KernelMatrix) -> Result<Vec<i8>> {
    Ok(decision_function(model, k_test)?
        .into_iter()
        .map(|f| if f >= 0.0 { 1 } else { -1 })
        .collect())
}
