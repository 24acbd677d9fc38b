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

//! Pauli feature-map circuits.
//!
//! A feature map encodes a classical vector `x` (in radians) as the state
//! produced by `reps` repetitions of a Hadamard layer followed by the
//! evolution `exp(i * Σ_S angle_scale * φ_S(x) * Π_{k} P_k)`, where the index
//! sets `S` are generated from the entanglement pattern and `φ_S` is the
//! data-mapping function.
//!
//! With the default `angle_scale = 1.0` the evolution angle is exactly
//! `φ_S(x)`; under the `Rz(θ) = exp(-iθZ/2)` gate convention the central
//! rotation of each block therefore receives `-2 * φ_S(x)`. Libraries that
//! insert an extra factor of two in the exponent are matched by setting
//! `angle_scale = 2.0`.
//!
//! Named map presets:
//!
//! * `z`: paulis `[Z]`, product data map;
//! * `zz`: paulis `[Z, ZZ]`, product data map (`x_i` on singletons,
//!   `Π (π - x_j)` on larger sets);
//! * `zzphi`: paulis `[Z, ZZ]` with the sine data map (`x_i` on singletons,
//!   `sin(π - x_i) sin(π - x_j)` on pairs; equal to `sin x_i sin x_j`, kept in
//!   the subtracted form deliberately);
//! * `pauli`: caller-chosen Pauli strings, product data map.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

/// Data-mapping function φ_S(x) selector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataMapKind {
    /// `x_i` on singletons, `Π_{j∈S} (π - x_j)` on larger sets.
    ProductDefault,
    /// `x_i` on singletons, `sin(π - x_i) sin(π - x_j)` on pairs; defined only
    /// for `|S| <= 2`.
    SineZZphi,
    /// A function registered under this name via [`register_data_map`].
    Custom(String),
}

type DataMapFn = dyn Fn(&[usize], &[f64]) -> f64 + Send + Sync;

static DATA_MAP_REGISTRY: Lazy<RwLock<HashMap<String, Arc<DataMapFn>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

/// Registers (or replaces) a named custom data map for use through
/// [`DataMapKind::Custom`]. The function receives the index set and the full
/// feature vector and must return radians.
pub fn register_data_map<F>(name: &str, f: F)
where
    F: Fn(&[usize], &[f64]) -> f64 + Send + Sync + 'static,
{
    DATA_MAP_REGISTRY
        .write()
        .expect("data map registry poisoned")
        .insert(name.to_string(), Arc::new(f));
}

/// Evaluates φ_S(x) for the selected data map.
pub fn data_map_value(kind: &DataMapKind, s: &[usize], x: &[f64]) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::InvalidArgument("index set must not be empty".into()));
    }
    for (pos, &i) in s.iter().enumerate() {
        if i >= x.len() {
            return Err(Error::InvalidArgument(format!(
                "index {i} out of range for a {}-feature vector",
                x.len()
            )));
        }
        if s[..pos].contains(&i) {
            return Err(Error::InvalidArgument(format!("index {i} repeated in set {s:?}")));
        }
    }
    match kind {
        DataMapKind::ProductDefault => {
            if s.len() == 1 {
                Ok(x[s[0]])
            } else {
                Ok(s.iter().map(|&j| std::f64::consts::PI - x[j]).product())
            }
        }
        DataMapKind::SineZZphi => match s {
            [i] => Ok(x[*i]),
            [i, j] => {
                Ok((std::f64::consts::PI - x[*i]).sin() * (std::f64::consts::PI - x[*j]).sin())
            }
            _ => Err(Error::InvalidArgument(format!(
                "the sine data map is defined for |S| <= 2, got |S| = {}",
                s.len()
            ))),
        },
        DataMapKind::Custom(name) => {
            let registry = DATA_MAP_REGISTRY.read().expect("data map registry poisoned");
            match registry.get(name) {
                Some(f) => Ok(f(s, x)),
                None => Err(Error::Config(format!("no data map registered under {name:?}"))),
            }
        }
    }
}

/// Validated Pauli label string over `{I, X, Y, Z}` with at least one
/// non-identity label. Label `k` of a string attaches to target `k` of the
/// block it parameterizes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PauliString(String);

impl PauliString {
    pub fn new(labels: &str) -> Result<PauliString> {
        if labels.is_empty() {
            return Err(Error::InvalidArgument("empty Pauli string".into()));
        }
        if let Some(c) = labels.chars().find(|c| !matches!(c, 'I' | 'X' | 'Y' | 'Z')) {
            return Err(Error::InvalidArgument(format!(
                "Pauli string {labels:?} contains invalid label {c:?}"
            )));
        }
        if labels.chars().all(|c| c == 'I') {
            return Err(Error::InvalidArgument(format!(
                "Pauli string {labels:?} has no non-identity label"
            )));
        }
        Ok(PauliString(labels.to_string()))
    }

    pub fn labels(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Count of non-identity labels.
    pub fn weight(&self) -> usize {
        self.0.chars().filter(|&c| c != 'I').count()
    }
}

impl TryFrom<String> for PauliString {
    type Error = Error;

    fn try_from(value: String) -> Result<PauliString> {
        PauliString::new(&value)
    }
}

impl From<PauliString> for String {
    fn from(p: PauliString) -> String {
        p.0
    }
}

impl std::fmt::Display for PauliString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Index-set generation pattern for multi-qubit Pauli blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Entanglement {
    /// All size-k combinations of qubits, in lexicographic order.
    Full,
    /// Contiguous windows `{i, .., i+k-1}`.
    Linear,
    /// Caller-given pairs; only valid for blocks of exactly two qubits.
    ExplicitPairs(Vec<(usize, usize)>),
}

/// Declarative description of a feature map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMapSpec {
    pub num_qubits: usize,
    /// Circuit depth: number of Hadamard + evolution repetitions.
    pub reps: usize,
    pub paulis: Vec<PauliString>,
    pub entanglement: Entanglement,
    pub data_map: DataMapKind,
    /// Multiplier applied to every φ_S(x) before evolution; 1.0 encodes the
    /// exponent literally, 2.0 matches libraries that double it.
    #[serde(default = "default_angle_scale")]
    pub angle_scale: f64,
}

fn default_angle_scale() -> f64 {
    1.0
}

impl FeatureMapSpec {
    /// `[Z]` map: single-qubit phases only.
    pub fn z(num_qubits: usize, reps: usize) -> FeatureMapSpec {
        FeatureMapSpec {
            num_qubits,
            reps,
            paulis: vec![PauliString::new("Z").unwrap()],
            entanglement: Entanglement::Full,
            data_map: DataMapKind::ProductDefault,
            angle_scale: 1.0,
        }
    }

    /// `[Z, ZZ]` map with the product data map.
    pub fn zz(num_qubits: usize, reps: usize) -> FeatureMapSpec {
        FeatureMapSpec {
            num_qubits,
            reps,
            paulis: vec![PauliString::new("Z").unwrap(), PauliString::new("ZZ").unwrap()],
            entanglement: Entanglement::Full,
            data_map: DataMapKind::ProductDefault,
            angle_scale: 1.0,
        }
    }

    /// `[Z, ZZ]` map with the sine data map on pairs.
    pub fn zzphi(num_qubits: usize, reps: usize) -> FeatureMapSpec {
        FeatureMapSpec { data_map: DataMapKind::SineZZphi, ..FeatureMapSpec::zz(num_qubits, reps) }
    }

    /// General Pauli map over caller-chosen strings with the product data map.
    pub fn pauli(num_qubits: usize, reps: usize, paulis: Vec<PauliString>) -> FeatureMapSpec {
        FeatureMapSpec {
            num_qubits,
            reps,
            paulis,
            entanglement: Entanglement::Full,
            data_map: DataMapKind::ProductDefault,
            angle_scale: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_qubits == 0 {
            return Err(Error::Config("feature map needs at least one qubit".into()));
        }
        if self.reps == 0 {
            return Err(Error::Config("feature map needs reps >= 1".into()));
        }
        if self.paulis.is_empty() {
            return Err(Error::Config("feature map needs at least one Pauli string".into()));
        }
        for p in &self.paulis {
            if p.len() > self.num_qubits {
                return Err(Error::Config(format!(
                    "Pauli string {p} spans {} qubits but the register has {}",
                    p.len(),
                    self.num_qubits
                )));
            }
        }
        if !self.angle_scale.is_finite() {
            return Err(Error::Config(format!("angle_scale {} is not finite", self.angle_scale)));
        }
        if let Entanglement::ExplicitPairs(pairs) = &self.entanglement {
            for &(a, b) in pairs {
                if a == b || a >= self.num_qubits || b >= self.num_qubits {
                    return Err(Error::Config(format!(
                        "entanglement pair ({a}, {b}) invalid for {} qubit(s)",
                        self.num_qubits
                    )));
                }
            }
        }
        Ok(())
    }

    /// Stable 16-hex-digit digest of the spec's canonical JSON form. Kernel
    /// matrices and models carry it so mismatched artifacts are refused.
    pub fn spec_hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("spec serialization cannot fail");
        let digest = Sha256::digest(canonical.as_bytes());
        hex::encode(&digest[..8])
    }
}

/// Index sets of size `size` over `n` qubits per the entanglement pattern.
/// Size-1 sets are always the singletons in ascending order.
pub fn index_sets(n: usize, size: usize, entanglement: &Entanglement) -> Result<Vec<Vec<usize>>> {
    if size == 0 {
        return Err(Error::InvalidArgument("index sets of size 0".into()));
    }
    if size > n {
        return Err(Error::Config(format!("index sets of size {size} over {n} qubit(s)")));
    }
    if size == 1 {
        return Ok((0..n).map(|q| vec![q]).collect());
    }
    match entanglement {
        Entanglement::Full => Ok(combinations(n, size)),
        Entanglement::Linear => Ok((0..=n - size).map(|i| (i..i + size).collect()).collect()),
        Entanglement::ExplicitPairs(pairs) => {
            if size != 2 {
                return Err(Error::Config(format!(
                    "explicit pairs cannot drive a {size}-qubit Pauli block"
                )));
            }
            pairs
                .iter()
                .map(|&(a, b)| {
                    if a == b || a >= n || b >= n {
                        Err(Error::Config(format!("entanglement pair ({a}, {b}) invalid")))
                    } else {
                        Ok(vec![a, b])
                    }
                })
                .collect()
        }
    }
}

/// All size-k subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Gate sequence implementing `exp(i * angle * Π_k P_k)` on `targets`.
///
/// One target per Pauli label; identity labels are skipped. X factors are
/// conjugated into Z by Hadamards, Y factors by `Rx(±π/2)`; the remaining
/// all-Z evolution is a CX ladder into the last active qubit, a single
/// `Rz(-2*angle)` there, and the reversed ladder back out. The decomposition
/// is exact (no global phase).
pub fn pauli_evolution_block(p: &PauliString, angle: f64, targets: &[usize]) -> Result<Vec<Gate>> {
    if targets.len() != p.len() {
        return Err(Error::InvalidArgument(format!(
            "Pauli string {p} needs {} target(s), got {}",
            p.len(),
            targets.len()
        )));
    }
    if !angle.is_finite() {
        return Err(Error::InvalidArgument(format!("evolution angle {angle} is not finite")));
    }
    let active: Vec<(usize, char)> = p
        .labels()
        .chars()
        .zip(targets.iter().copied())
        .filter(|&(c, _)| c != 'I')
        .map(|(c, t)| (t, c))
        .collect();
    if active.is_empty() {
        return Err(Error::InvalidArgument("empty Pauli string".into()));
    }

    let mut gates = Vec::new();
    for &(t, c) in &active {
        match c {
            'X' => gates.push(Gate::h(t)),
            'Y' => gates.push(Gate::rx(std::f64::consts::FRAC_PI_2, t)),
            _ => {}
        }
    }
    for w in active.windows(2) {
        gates.push(Gate::cx(w[0].0, w[1].0));
    }
    gates.push(Gate::rz(-2.0 * angle, active[active.len() - 1].0));
    for w in active.windows(2).rev() {
        gates.push(Gate::cx(w[0].0, w[1].0));
    }
    for &(t, c) in &active {
        match c {
            'X' => gates.push(Gate::h(t)),
            'Y' => gates.push(Gate::rx(-std::f64::consts::FRAC_PI_2, t)),
            _ => {}
        }
    }
    Ok(gates)
}

/// Builds the full encoding circuit for `x`.
///
/// Each repetition is a Hadamard on every qubit followed by one evolution
/// block per (Pauli string, index set) combination; Pauli strings are visited
/// in spec order, index sets in the canonical order of [`index_sets`]. Blocks
/// with zero angle are still emitted so the gate sequence, and hence the gate
/// count, depends only on the spec.
pub fn build_feature_map(spec: &FeatureMapSpec, x: &[f64]) -> Result<Circuit> {
    spec.validate()?;
    if x.len() != spec.num_qubits {
        return Err(Error::InvalidArgument(format!(
            "feature vector has {} entries but the map encodes {}",
            x.len(),
            spec.num_qubits
        )));
    }
    if let Some(bad) = x.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("feature value {bad} is not finite")));
    }

    let mut circuit = Circuit::new(spec.num_qubits)?;
    for _ in 0..spec.reps {
        for q in 0..spec.num_qubits {
            circuit.push(Gate::h(q))?;
        }
        for p in &spec.paulis {
            for s in index_sets(spec.num_qubits, p.len(), &spec.entanglement)? {
                let phi = data_map_value(&spec.data_map, &s, x)?;
                for gate in pauli_evolution_block(p, spec.angle_scale * phi, &s)? {
                    circuit.push(gate)?;
                }
            }
        }
    }
    Ok(circuit)
}

/// Closed-form gate count of [`build_feature_map`] output for this spec;
/// independent of the encoded vector.
pub fn expected_gate_count(spec: &FeatureMapSpec) -> Result<usize> {
    spec.validate()?;
    let mut per_rep = spec.num_qubits;
    for p in &spec.paulis {
        let sets = index_sets(spec.num_qubits, p.len(), &spec.entanglement)?.len();
        let m = p.weight();
        let basis_changes = p.labels().chars().filter(|&c| c == 'X' || c == 'Y').count();
        let block = 1 + 2 * (m - 1) + 2 * basis_changes;
        per_rep += sets * block;
    }
    Ok(spec.reps * per_rep)
}
