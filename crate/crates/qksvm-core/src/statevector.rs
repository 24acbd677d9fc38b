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

//! Dense statevector simulation.
//!
//! States are immutable from the caller's perspective: applying a circuit
//! returns a new state. Amplitude index bit `q` is the computational-basis
//! value of qubit `q` (little-endian), so `amplitudes[5]` of a 3-qubit state
//! is the coefficient of `|101⟩` with qubit 0 in state 1, qubit 1 in state 0,
//! qubit 2 in state 1.
//!
//! Shot sampling uses the ChaCha8 generator seeded from a caller-supplied
//! 64-bit value, giving bit-for-bit reproducible counts on every platform.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};

/// Hard cap on register width; a dense state above this is never intentional
/// in this crate.
pub const MAX_QUBITS: usize = 24;

/// Cap for [`circuit_unitary`], which materializes a 4^n-entry matrix.
pub const MAX_UNITARY_QUBITS: usize = 10;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Dense n-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// The all-zeros basis state `|0...0⟩`.
    pub fn zero_state(num_qubits: usize) -> Result<Statevector> {
        check_width(num_qubits)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Statevector { num_qubits, amplitudes })
    }

    /// The computational basis state `|index⟩`.
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Statevector> {
        check_width(num_qubits)?;
        if index >= (1 << num_qubits) {
            return Err(Error::Config(format!(
                "basis index {index} out of range for {num_qubits} qubit(s)"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Statevector { num_qubits, amplitudes })
    }

    /// Builds a state from raw amplitudes. The length must be a power of two
    /// and the vector must be unit norm within 1e-8.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Statevector> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Config(format!(
                "amplitude vector length {len} is not a power of two >= 2"
            )));
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_width(num_qubits)?;
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > 1e-8 {
            return Err(Error::Config(format!(
                "amplitudes have squared norm {norm2}, expected 1"
            )));
        }
        Ok(Statevector { num_qubits, amplitudes })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Squared 2-norm; 1 within 1e-10 after any gate application.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies `circuit` and returns the transformed state.
    pub fn apply_circuit(&self, circuit: &Circuit) -> Result<Statevector> {
        if circuit.num_qubits() != self.num_qubits {
            return Err(Error::Config(format!(
                "circuit is over {} qubit(s) but the state has {}",
                circuit.num_qubits(),
                self.num_qubits
            )));
        }
        let mut amplitudes = self.amplitudes.clone();
        for gate in circuit.gates() {
            gate.validate(self.num_qubits)?;
            apply_gate(&mut amplitudes, gate);
        }
        Ok(Statevector { num_qubits: self.num_qubits, amplitudes })
    }
}

fn check_width(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 {
        return Err(Error::Config("state needs at least one qubit".into()));
    }
    if num_qubits > MAX_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "{num_qubits} qubits exceed the dense-state cap of {MAX_QUBITS}"
        )));
    }
    Ok(())
}

/// In-place single-qubit update by the matrix [[m00, m01], [m10, m11]].
fn apply_single(
    amplitudes: &mut [Complex64],
    q: usize,
    m00: Complex64,
    m01: Complex64,
    m10: Complex64,
    m11: Complex64,
) {
    let mask = 1usize << q;
    for i in 0..amplitudes.len() {
        if i & mask == 0 {
            let a0 = amplitudes[i];
            let a1 = amplitudes[i | mask];
            amplitudes[i] = m00 * a0 + m01 * a1;
            amplitudes[i | mask] = m10 * a0 + m11 * a1;
        }
    }
}

fn apply_gate(amplitudes: &mut [Complex64], gate: &Gate) {
    match gate.kind {
        GateKind::H => {
            let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
            apply_single(amplitudes, gate.targets[0], s, s, s, -s);
        }
        GateKind::X => {
            let mask = 1usize << gate.targets[0];
            for i in 0..amplitudes.len() {
                if i & mask == 0 {
                    amplitudes.swap(i, i | mask);
                }
            }
        }
        GateKind::Sx => {
            // (1/2) [[1+i, 1-i], [1-i, 1+i]]
            let p = Complex64::new(0.5, 0.5);
            let m = Complex64::new(0.5, -0.5);
            apply_single(amplitudes, gate.targets[0], p, m, m, p);
        }
        GateKind::P => {
            let phase = Complex64::from_polar(1.0, gate.angle.unwrap());
            let mask = 1usize << gate.targets[0];
            for (i, a) in amplitudes.iter_mut().enumerate() {
                if i & mask != 0 {
                    *a *= phase;
                }
            }
        }
        GateKind::Rz => {
            let half = gate.angle.unwrap() / 2.0;
            let e0 = Complex64::from_polar(1.0, -half);
            let e1 = Complex64::from_polar(1.0, half);
            let mask = 1usize << gate.targets[0];
            for (i, a) in amplitudes.iter_mut().enumerate() {
                *a *= if i & mask == 0 { e0 } else { e1 };
            }
        }
        GateKind::Rx => {
            let half = gate.angle.unwrap() / 2.0;
            let c = Complex64::new(half.cos(), 0.0);
            let s = Complex64::new(0.0, -half.sin());
            apply_single(amplitudes, gate.targets[0], c, s, s, c);
        }
        GateKind::Ry => {
            let half = gate.angle.unwrap() / 2.0;
            let c = Complex64::new(half.cos(), 0.0);
            let s = Complex64::new(half.sin(), 0.0);
            apply_single(amplitudes, gate.targets[0], c, -s, s, c);
        }
        GateKind::Cx => {
            let cmask = 1usize << gate.targets[0];
            let tmask = 1usize << gate.targets[1];
            for i in 0..amplitudes.len() {
                if i & cmask != 0 && i & tmask == 0 {
                    amplitudes.swap(i, i | tmask);
                }
            }
        }
        GateKind::Cz => {
            let mask = (1usize << gate.targets[0]) | (1usize << gate.targets[1]);
            for (i, a) in amplitudes.iter_mut().enumerate() {
                if i & mask == mask {
                    *a = -*a;
                }
            }
        }
    }
}

/// `⟨a|b⟩`, conjugate-linear in the first argument.
pub fn inner_product(a: &Statevector, b: &Statevector) -> Result<Complex64> {
    if a.num_qubits != b.num_qubits {
        return Err(Error::Config(format!(
            "inner product between {}-qubit and {}-qubit states",
            a.num_qubits, b.num_qubits
        )));
    }
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// `|⟨0...0|state⟩|^2`, the all-zeros readout probability.
pub fn probability_all_zeros(state: &Statevector) -> f64 {
    state.amplitudes[0].norm_sqr()
}

/// Number of all-zeros outcomes over `shots` simulated measurements.
///
/// Each shot draws one uniform from a ChaCha8 stream seeded with `seed` and
/// compares it against [`probability_all_zeros`]. The count, not just the
/// fraction, is what backend jobs persist.
pub fn sample_all_zeros_count(state: &Statevector, shots: u64, seed: u64) -> Result<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_all_zeros_count_with(state, shots, &mut rng)
}

/// Like [`sample_all_zeros_count`] but drawing from a caller-owned stream, so
/// several circuits can consume one generator sequentially. A job whose only
/// circuit is sampled this way matches the seeded entry point bit for bit.
pub fn sample_all_zeros_count_with<R: Rng>(
    state: &Statevector,
    shots: u64,
    rng: &mut R,
) -> Result<u64> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be >= 1".into()));
    }
    let p = probability_all_zeros(state);
    let mut zeros = 0u64;
    for _ in 0..shots {
        if rng.random::<f64>() < p {
            zeros += 1;
        }
    }
    Ok(zeros)
}

/// All-zeros shot fraction in `[0, 1]`; see [`sample_all_zeros_count`].
pub fn sample_all_zeros(state: &Statevector, shots: u64, seed: u64) -> Result<f64> {
    Ok(sample_all_zeros_count(state, shots, seed)? as f64 / shots as f64)
}

/// Dense matrix of the whole circuit, built by applying it to every basis
/// state. Guarded to small registers; meant for tests and transpiler checks.
pub fn circuit_unitary(circuit: &Circuit) -> Result<DMatrix<Complex64>> {
    let n = circuit.num_qubits();
    if n > MAX_UNITARY_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "dense unitary requested for {n} qubits, cap is {MAX_UNITARY_QUBITS}"
        )));
    }
    let dim = 1usize << n;
    let mut u = DMatrix::<Complex64>::zeros(dim, dim);
    for col in 0..dim {
        let out = Statevector::basis_state(n, col)?.apply_circuit(circuit)?;
        for row in 0..dim {
            u[(row, col)] = out.amplitudes[row];
        }
    }
    Ok(u)
}
