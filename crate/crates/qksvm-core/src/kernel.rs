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

//! Fidelity kernel entries and kernel-matrix assembly.
//!
//! The kernel value of two feature vectors is the state overlap of their
//! encodings, `k(x, y) = |⟨φ(x)|φ(y)⟩|²`. It is computed either exactly from
//! two statevectors, or by the compute–uncompute estimator: run
//! `adjoint(U_φ(y)) · U_φ(x)` on `|0…0⟩` and report the all-zeros shot
//! fraction.
//!
//! Train matrices are square; only the strict upper triangle is estimated,
//! the diagonal is pinned to 1 and the lower triangle mirrors the upper, so a
//! sampled train matrix is exactly symmetric by construction. Test matrices
//! are rectangular (test rows × train columns) and every entry is estimated.
//!
//! Sampled entries draw their RNG seed from [`derive_entry_seed`], a pure
//! function of the caller's base seed and the entry position. Entry
//! evaluations are therefore order-independent: the parallel evaluation here,
//! a serial loop, and the job-per-entry backend path all produce identical
//! matrices.

use std::collections::HashMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::feature_map::{build_feature_map, FeatureMapSpec};
use crate::statevector::{inner_product, sample_all_zeros, Statevector};
use crate::svm::ClassicalKernelKind;

/// How fidelities are evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelityMethod {
    /// Exact `|⟨φ(x)|φ(y)⟩|²` from two simulated states.
    ExactOverlap,
    /// Shot-sampled all-zeros fraction of the compute–uncompute circuit.
    ComputeUncompute { shots: u64, seed: u64 },
}

impl FidelityMethod {
    /// Compute–uncompute with the default shot budget of 1000.
    pub fn sampled(seed: u64) -> FidelityMethod {
        FidelityMethod::ComputeUncompute { shots: DEFAULT_SHOTS, seed }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FidelityMethod::ExactOverlap => "exact_overlap",
            FidelityMethod::ComputeUncompute { .. } => "compute_uncompute",
        }
    }

    fn validate(&self) -> Result<()> {
        if let FidelityMethod::ComputeUncompute { shots, .. } = self {
            if *shots == 0 {
                return Err(Error::InvalidArgument("compute-uncompute needs shots >= 1".into()));
            }
        }
        Ok(())
    }
}

/// Default per-entry shot budget.
pub const DEFAULT_SHOTS: u64 = 1000;

/// Train (square, symmetric) or test (rectangular) matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    Train,
    Test,
}

impl MatrixKind {
    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::Train => "train",
            MatrixKind::Test => "test",
        }
    }
}

/// What produced a kernel matrix: a quantum feature map with a fidelity
/// method, or one of the classical baseline kernels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelSource {
    Quantum { feature_map: FeatureMapSpec, method: FidelityMethod },
    Classical { kind: ClassicalKernelKind },
}

impl KernelSource {
    /// Digest identifying the kernel family for provenance checks: the
    /// feature-map spec hash for quantum sources, a hash of the kernel kind
    /// for classical ones. Method, shots and seed deliberately do not enter,
    /// so a model trained on a sampled matrix accepts an exact test matrix of
    /// the same map.
    pub fn spec_hash(&self) -> String {
        match self {
            KernelSource::Quantum { feature_map, .. } => feature_map.spec_hash(),
            KernelSource::Classical { kind } => {
                let canonical =
                    serde_json::to_string(kind).expect("kind serialization cannot fail");
                let digest = Sha256::digest(canonical.as_bytes());
                hex::encode(&digest[..8])
            }
        }
    }

    pub fn method_name(&self) -> String {
        match self {
            KernelSource::Quantum { method, .. } => method.name().to_string(),
            KernelSource::Classical { kind } => kind.name().to_string(),
        }
    }
}

/// Real matrix of pairwise kernel values with provenance metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    kind: MatrixKind,
    rows: usize,
    cols: usize,
    /// Row-major values.
    values: Vec<f64>,
    pub source: KernelSource,
    /// Shots per sampled entry; `None` for exact or classical matrices.
    pub shots_used: Option<u64>,
    /// Base seed the per-entry seeds were derived from, when sampled.
    pub seed: Option<u64>,
}

impl KernelMatrix {
    pub fn from_values(
        kind: MatrixKind,
        rows: usize,
        cols: usize,
        values: Vec<f64>,
        source: KernelSource,
        shots_used: Option<u64>,
        seed: Option<u64>,
    ) -> Result<KernelMatrix> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument("kernel matrix cannot be empty".into()));
        }
        if values.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "kernel matrix of {rows}x{cols} needs {} values, got {}",
                rows * cols,
                values.len()
            )));
        }
        if kind == MatrixKind::Train && rows != cols {
            return Err(Error::InvalidArgument(format!(
                "train kernel matrix must be square, got {rows}x{cols}"
            )));
        }
        Ok(KernelMatrix { kind, rows, cols, values, source, shots_used, seed })
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.values[i * self.cols + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn spec_hash(&self) -> String {
        self.source.spec_hash()
    }

    /// Largest absolute asymmetry `|K_ij - K_ji|`; only meaningful on square
    /// matrices.
    pub fn max_asymmetry(&self) -> Result<f64> {
        if self.rows != self.cols {
            return Err(Error::InvalidArgument("asymmetry of a non-square matrix".into()));
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        Ok(worst)
    }

    /// Smallest eigenvalue of a square matrix, for PSD checks.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        if self.rows != self.cols {
            return Err(Error::InvalidArgument("eigenvalues of a non-square matrix".into()));
        }
        let m = nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.values);
        let eigen = m.symmetric_eigen();
        Ok(eigen.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
    }

    /// Writes the matrix as CSV (one `#` metadata line, then row-major values
    /// formatted for exact round-trip) plus a `.json` provenance sidecar next
    /// to it.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = format!(
            "# kind={} method={} shots={} seed={} spec_hash={} rows={} cols={}\n",
            self.kind.name(),
            self.source.method_name(),
            self.shots_used.map_or_else(|| "none".to_string(), |s| s.to_string()),
            self.seed.map_or_else(|| "none".to_string(), |s| s.to_string()),
            self.spec_hash(),
            self.rows,
            self.cols,
        );
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v}")).collect();
            text.push_str(&row.join(","));
            text.push('\n');
        }
        std::fs::write(path, text)?;

        let sidecar = KernelSidecar {
            kind: self.kind,
            rows: self.rows,
            cols: self.cols,
            source: self.source.clone(),
            shots_used: self.shots_used,
            seed: self.seed,
            spec_hash: self.spec_hash(),
        };
        let sidecar_path = sidecar_path(path);
        std::fs::write(&sidecar_path, serde_json::to_string_pretty(&sidecar)?)?;
        Ok(())
    }

    /// Reads a matrix written by [`KernelMatrix::save`]; both the CSV and its
    /// sidecar must be present and consistent.
    pub fn load(path: &Path) -> Result<KernelMatrix> {
        let side_text = std::fs::read_to_string(sidecar_path(path)).map_err(|e| {
            Error::Parse(format!(
                "kernel sidecar {} unreadable: {e}",
                sidecar_path(path).display()
            ))
        })?;
        let sidecar: KernelSidecar = serde_json::from_str(&side_text)?;

        let text = std::fs::read_to_string(path)?;
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("{}: empty kernel file", path.display())))?;
        if !header.starts_with('#') {
            return Err(Error::Parse(format!("{}: missing metadata line", path.display())));
        }
        let mut values = Vec::with_capacity(sidecar.rows * sidecar.cols);
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            for field in line.split(',') {
                let v: f64 = field.trim().parse().map_err(|e| {
                    Error::Parse(format!("{} line {}: bad value {field:?}: {e}", path.display(), lineno + 2))
                })?;
                values.push(v);
            }
        }
        let matrix = KernelMatrix::from_values(
            sidecar.kind,
            sidecar.rows,
            sidecar.cols,
            values,
            sidecar.source,
            sidecar.shots_used,
            sidecar.seed,
        )?;
        if matrix.spec_hash() != sidecar.spec_hash {
            return Err(Error::SpecHashMismatch {
                expected: sidecar.spec_hash,
                actual: matrix.spec_hash(),
            });
        }
        Ok(matrix)
    }
}

fn sidecar_path(path: &Path) -> std::path::PathBuf {
    path.with_extension("json")
}

#[derive(Debug, Serialize, Deserialize)]
struct KernelSidecar {
    kind: MatrixKind,
    rows: usize,
    cols: usize,
    source: KernelSource,
    shots_used: Option<u64>,
    seed: Option<u64>,
    spec_hash: String,
}

/// Per-entry RNG seed for entry `(i, j)` under `base`. SplitMix64-style
/// mixing keeps distinct entries statistically independent while staying a
/// pure function, so any evaluation order (or process boundary) reproduces
/// the same stream.
pub fn derive_entry_seed(base: u64, i: usize, j: usize) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    let seeded = mix(base.wrapping_add(0x9E37_79B9_7F4A_7C15));
    mix(mix(seeded ^ i as u64) ^ j as u64)
}

/// The compute–uncompute circuit for `k(x, y)`: encode `x`, then un-encode
/// `y`. Its all-zeros probability equals the exact overlap squared.
pub fn compute_uncompute_circuit(
    spec: &FeatureMapSpec,
    x: &[f64],
    y: &[f64],
) -> Result<Circuit> {
    let mut circuit = build_feature_map(spec, x)?;
    let uncompute = build_feature_map(spec, y)?.adjoint();
    circuit.extend(&uncompute)?;
    Ok(circuit)
}

/// Single kernel value `k(x, y)` under the given method.
pub fn fidelity(
    x: &[f64],
    y: &[f64],
    spec: &FeatureMapSpec,
    method: &FidelityMethod,
) -> Result<f64> {
    method.validate()?;
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!(
            "fidelity between vectors of length {} and {}",
            x.len(),
            y.len()
        )));
    }
    match method {
        FidelityMethod::ExactOverlap => {
            let sx = encode(spec, x)?;
            let sy = encode(spec, y)?;
            Ok(inner_product(&sx, &sy)?.norm_sqr())
        }
        FidelityMethod::ComputeUncompute { shots, seed } => {
            let circuit = compute_uncompute_circuit(spec, x, y)?;
            let state = Statevector::zero_state(spec.num_qubits)?.apply_circuit(&circuit)?;
            sample_all_zeros(&state, *shots, *seed)
        }
    }
}

fn encode(spec: &FeatureMapSpec, x: &[f64]) -> Result<Statevector> {
    let circuit = build_feature_map(spec, x)?;
    Statevector::zero_state(spec.num_qubits)?.apply_circuit(&circuit)
}

/// Number of backend jobs a full evaluation costs under one job per entry:
/// `n(n-1)/2` train entries plus `m * n` test entries.
pub fn count_jobs(n_train: usize, n_test: usize) -> usize {
    n_train * (n_train - 1) / 2 + n_test * n_train
}

/// n×n train matrix over `x`. Sampled entries use per-entry seeds
/// `derive_entry_seed(base, i, j)` on the strict upper triangle.
pub fn evaluate_train_matrix(
    x: &[Vec<f64>],
    spec: &FeatureMapSpec,
    method: &FidelityMethod,
) -> Result<KernelMatrix> {
    method.validate()?;
    if x.is_empty() {
        return Err(Error::InvalidArgument("train matrix of an empty sample list".into()));
    }
    let n = x.len();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();

    let entries: Vec<((usize, usize), f64)> = match method {
        FidelityMethod::ExactOverlap => {
            let states = encode_all(spec, x)?;
            pairs
                .par_iter()
                .map(|&(i, j)| {
                    let v = inner_product(&states[i], &states[j])?.norm_sqr();
                    Ok(((i, j), v))
                })
                .collect::<Result<_>>()?
        }
        FidelityMethod::ComputeUncompute { shots, seed } => pairs
            .par_iter()
            .map(|&(i, j)| {
                let entry_method = FidelityMethod::ComputeUncompute {
                    shots: *shots,
                    seed: derive_entry_seed(*seed, i, j),
                };
                let v = fidelity(&x[i], &x[j], spec, &entry_method)?;
                Ok(((i, j), v))
            })
            .collect::<Result<_>>()?,
    };

    let map: HashMap<(usize, usize), f64> = entries.into_iter().collect();
    assemble_train_matrix(n, &map, spec, method)
}

/// m×n test matrix: rows are test samples `y`, columns train samples `x`.
/// Every entry is evaluated; sampled entries seed from their `(row, col)`.
pub fn evaluate_test_matrix(
    y: &[Vec<f64>],
    x: &[Vec<f64>],
    spec: &FeatureMapSpec,
    method: &FidelityMethod,
) -> Result<KernelMatrix> {
    method.validate()?;
    if y.is_empty() || x.is_empty() {
        return Err(Error::InvalidArgument("test matrix of an empty sample list".into()));
    }
    let (m, n) = (y.len(), x.len());
    let pairs: Vec<(usize, usize)> =
        (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();

    let entries: Vec<((usize, usize), f64)> = match method {
        FidelityMethod::ExactOverlap => {
            let states_y = encode_all(spec, y)?;
            let states_x = encode_all(spec, x)?;
            pairs
                .par_iter()
                .map(|&(i, j)| {
                    let v = inner_product(&states_y[i], &states_x[j])?.norm_sqr();
                    Ok(((i, j), v))
                })
                .collect::<Result<_>>()?
        }
        FidelityMethod::ComputeUncompute { shots, seed } => pairs
            .par_iter()
            .map(|&(i, j)| {
                let entry_method = FidelityMethod::ComputeUncompute {
                    shots: *shots,
                    seed: derive_entry_seed(*seed, i, j),
                };
                let v = fidelity(&y[i], &x[j], spec, &entry_method)?;
                Ok(((i, j), v))
            })
            .collect::<Result<_>>()?,
    };

    let map: HashMap<(usize, usize), f64> = entries.into_iter().collect();
    assemble_test_matrix(m, n, &map, spec, method)
}

fn encode_all(spec: &FeatureMapSpec, x: &[Vec<f64>]) -> Result<Vec<Statevector>> {
    x.par_iter().map(|xi| encode(spec, xi)).collect()
}

/// Builds the train matrix from strict-upper-triangle entries: diagonal
/// pinned to 1, lower triangle mirrored. Shared by the in-process path and
/// the backend collect path so both assemble identically.
pub fn assemble_train_matrix(
    n: usize,
    upper: &HashMap<(usize, usize), f64>,
    spec: &FeatureMapSpec,
    method: &FidelityMethod,
) -> Result<KernelMatrix> {
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        values[i * n + i] = 1.0;
        for j in (i + 1)..n {
            let v = *upper.get(&(i, j)).ok_or_else(|| {
                Error::InvalidArgument(format!("missing train kernel entry ({i}, {j})"))
            })?;
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    let (shots_used, seed) = method_provenance(method);
    KernelMatrix::from_values(
        MatrixKind::Train,
        n,
        n,
        values,
        KernelSource::Quantum { feature_map: spec.clone(), method: method.clone() },
        shots_used,
        seed,
    )
}

/// Builds the m×n test matrix from a full entry map; see
/// [`assemble_train_matrix`].
pub fn assemble_test_matrix(
    m: usize,
    n: usize,
    entries: &HashMap<(usize, usize), f64>,
    spec: &FeatureMapSpec,
    method: &FidelityMethod,
) -> Result<KernelMatrix> {
    let mut values = vec![0.0; m * n];
    for i in 0..m {
        for j in 0..n {
            let v = *entries.get(&(i, j)).ok_or_else(|| {
                Error::InvalidArgument(format!("missing test kernel entry ({i}, {j})"))
            })?;
            values[i * n + j] = v;
        }
    }
    let (shots_used, seed) = method_provenance(method);
    KernelMatrix::from_values(
        MatrixKind::Test,
        m,
        n,
        values,
        KernelSource::Quantum { feature_map: spec.clone(), method: method.clone() },
        shots_used,
        seed,
    )
}

fn method_provenance(method: &FidelityMethod) -> (Option<u64>, Option<u64>) {
    match method {
        FidelityMethod::ExactOverlap => (None, None),
        FidelityMethod::ComputeUncompute { shots, seed } => (Some(*shots), Some(*seed)),
    }
}

/// Compute–uncompute circuits for every strict-upper-triangle train entry,
/// ready for transpilation and one-job-per-entry submission.
pub fn prepare_train_pairs(
    x: &[Vec<f64>],
    spec: &FeatureMapSpec,
) -> Result<Vec<(usize, usize, Circuit)>> {
    if x.is_empty() {
        return Err(Error::InvalidArgument("train pairs of an empty sample list".into()));
    }
    let n = x.len();
    let mut out = Vec::with_capacity(count_jobs(n, 0));
    for i in 0..n {
        for j in (i + 1)..n {
            out.push((i, j, compute_uncompute_circuit(spec, &x[i], &x[j])?));
        }
    }
    Ok(out)
}

/// Compute–uncompute circuits for every test entry (test row, train column).
pub fn prepare_test_pairs(
    y: &[Vec<f64>],
    x: &[Vec<f64>],
    spec: &FeatureMapSpec,
) -> Result<Vec<(usize, usize, Circuit)>> {
    if y.is_empty() || x.is_empty() {
        return Err(Error::InvalidArgument("test pairs of an empty sample list".into()));
    }
    let mut out = Vec::with_capacity(y.len() * x.len());
    for (i, yi) in y.iter().enumerate() {
        for (j, xj) in x.iter().enumerate() {
            out.push((i, j, compute_uncompute_circuit(spec, yi, xj)?));
        }
    }
    Ok(out)
}
