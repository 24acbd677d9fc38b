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

//! Independent oracles for integration tests.
//!
//! Everything here is implemented from first principles (Kronecker products,
//! Taylor-series matrix exponential, projected-gradient quadratic
//! programming) precisely so it shares no code path with the library under
//! test.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use qksvm_core::{Circuit, Gate, GateKind};

type CMat = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// 2x2 matrix of a single-qubit gate kind.
pub fn single_qubit_matrix(kind: GateKind, angle: Option<f64>) -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match kind {
        GateKind::H => CMat::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]),
        GateKind::X => CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
        GateKind::Sx => CMat::from_row_slice(
            2,
            2,
            &[c(0.5, 0.5), c(0.5, -0.5), c(0.5, -0.5), c(0.5, 0.5)],
        ),
        GateKind::P => {
            let a = angle.unwrap();
            CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(a.cos(), a.sin())])
        }
        GateKind::Rz => {
            let h = angle.unwrap() / 2.0;
            CMat::from_row_slice(
                2,
                2,
                &[c(h.cos(), -h.sin()), c(0.0, 0.0), c(0.0, 0.0), c(h.cos(), h.sin())],
            )
        }
        GateKind::Rx => {
            let h = angle.unwrap() / 2.0;
            CMat::from_row_slice(
                2,
                2,
                &[c(h.cos(), 0.0), c(0.0, -h.sin()), c(0.0, -h.sin()), c(h.cos(), 0.0)],
            )
        }
        GateKind::Ry => {
            let h = angle.unwrap() / 2.0;
            CMat::from_row_slice(
                2,
                2,
                &[c(h.cos(), 0.0), c(-h.sin(), 0.0), c(h.sin(), 0.0), c(h.cos(), 0.0)],
            )
        }
        GateKind::Cx | GateKind::Cz => panic!("not a single-qubit gate"),
    }
}

/// Identity of dimension `2^n`.
pub fn eye(n_qubits: usize) -> CMat {
    CMat::identity(1 << n_qubits, 1 << n_qubits)
}

/// Kronecker product with little-endian qubit order: `kron(b, a)` acts with
/// `a` on the lower-index qubits.
pub fn kron(hi: &CMat, lo: &CMat) -> CMat {
    hi.kronecker(lo)
}

/// Embeds a single-qubit matrix at qubit `q` of an `n`-qubit register:
/// `I_{2^(n-1-q)} ⊗ g ⊗ I_{2^q}` (qubit 0 is the least-significant bit).
pub fn embed_single(g: &CMat, q: usize, n: usize) -> CMat {
    let lo = CMat::identity(1 << q, 1 << q);
    let hi = CMat::identity(1 << (n - 1 - q), 1 << (n - 1 - q));
    kron(&kron(&hi, g), &lo)
}

/// Full matrix of a controlled gate built entry-by-entry from basis-state
/// action: CX flips the target bit when the control bit is set; CZ applies a
/// sign when both bits are set.
pub fn embed_controlled(kind: GateKind, a: usize, b: usize, n: usize) -> CMat {
    let dim = 1 << n;
    let mut m = CMat::zeros(dim, dim);
    for basis in 0..dim {
        match kind {
            GateKind::Cx => {
                let out = if basis >> a & 1 == 1 { basis ^ (1 << b) } else { basis };
                m[(out, basis)] = c(1.0, 0.0);
            }
            GateKind::Cz => {
                let sign = if basis >> a & 1 == 1 && basis >> b & 1 == 1 { -1.0 } else { 1.0 };
                m[(basis, basis)] = c(sign, 0.0);
            }
            _ => panic!("not a controlled gate"),
        }
    }
    m
}

/// Full unitary of one gate on an `n`-qubit register.
pub fn gate_unitary(gate: &Gate, n: usize) -> CMat {
    match gate.kind {
        GateKind::Cx | GateKind::Cz => {
            embed_controlled(gate.kind, gate.targets[0], gate.targets[1], n)
        }
        _ => embed_single(&single_qubit_matrix(gate.kind, gate.angle), gate.targets[0], n),
    }
}

/// Whole-circuit unitary by multiplying per-gate embeddings, first gate
/// rightmost (applied first).
pub fn circuit_unitary_oracle(circuit: &Circuit) -> CMat {
    let n = circuit.num_qubits();
    let mut u = eye(n);
    for gate in circuit.gates() {
        u = gate_unitary(gate, n) * u;
    }
    u
}

/// 2x2 Pauli matrix by label.
pub fn pauli_matrix(label: u8) -> CMat {
    match label {
        b'I' => CMat::identity(2, 2),
        b'X' => CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
        b'Y' => CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]),
        b'Z' => CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]),
        _ => panic!("unknown Pauli label"),
    }
}

/// Full-register Pauli-string operator. `labels[k]` acts on `targets[k]`;
/// every other qubit gets identity.
pub fn pauli_string_unitary(labels: &[u8], targets: &[usize], n: usize) -> CMat {
    let mut per_qubit: Vec<CMat> = (0..n).map(|_| CMat::identity(2, 2)).collect();
    for (&label, &t) in labels.iter().zip(targets) {
        per_qubit[t] = pauli_matrix(label);
    }
    // kron from the highest qubit down so qubit 0 is least significant.
    let mut m = per_qubit[n - 1].clone();
    for q in (0..n - 1).rev() {
        m = kron(&m, &per_qubit[q]);
    }
    m
}

/// Matrix exponential by scaling and squaring over a Taylor series.
pub fn expm(a: &CMat) -> CMat {
    let norm: f64 = a.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let scale = norm.log2().ceil().max(0.0) as u32 + 1;
    let scaled = a / Complex64::new(2f64.powi(scale as i32), 0.0);
    let dim = a.nrows();
    let mut term = CMat::identity(dim, dim);
    let mut sum = CMat::identity(dim, dim);
    for k in 1..30 {
        term = &term * &scaled / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    let mut result = sum;
    for _ in 0..scale {
        result = &result * &result;
    }
    result
}

/// Max-abs entry difference after aligning global phase on `b`'s largest
/// entry.
pub fn phase_distance(a: &CMat, b: &CMat) -> f64 {
    let (mut bi, mut bj, mut best) = (0usize, 0usize, 0.0f64);
    for i in 0..b.nrows() {
        for j in 0..b.ncols() {
            if b[(i, j)].norm() > best {
                best = b[(i, j)].norm();
                bi = i;
                bj = j;
            }
        }
    }
    let phase = a[(bi, bj)] / b[(bi, bj)];
    let mut max = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            max = max.max((a[(i, j)] - phase * b[(i, j)]).norm());
        }
    }
    max
}

/// Max-abs entry difference with no phase freedom.
pub fn exact_distance(a: &CMat, b: &CMat) -> f64 {
    let mut max = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            max = max.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    max
}

/// Brute-force solver for the soft-margin SVM dual:
/// maximize `Σ α_i - 1/2 Σ α_i α_j y_i y_j K_ij` with `0 ≤ α ≤ C`,
/// `Σ α_i y_i = 0`, by projected gradient ascent with an exact projection
/// onto the box-hyperplane intersection (bisection on the multiplier).
pub struct QpOracle {
    pub alpha: Vec<f64>,
    pub objective: f64,
    pub bias: f64,
}

pub fn solve_dual_qp(k: &[Vec<f64>], y: &[i8], c_box: f64) -> QpOracle {
    let n = y.len();
    let yf: Vec<f64> = y.iter().map(|&v| v as f64).collect();
    let q = |i: usize, j: usize| yf[i] * yf[j] * k[i][j];

    // Lipschitz bound on the gradient: Frobenius norm of Q.
    let mut l = 0.0;
    for i in 0..n {
        for j in 0..n {
            l += q(i, j) * q(i, j);
        }
    }
    let step = 1.0 / (l.sqrt() + 1.0);

    let project = |v: &[f64]| -> Vec<f64> {
        // alpha_i(lambda) = clip(v_i - lambda*y_i, 0, C); the balance
        // Σ y_i alpha_i(lambda) is non-increasing in lambda, so bisect.
        let mut lo = -1e6;
        let mut hi = 1e6;
        let balance = |lambda: f64| -> f64 {
            (0..n).map(|i| yf[i] * (v[i] - lambda * yf[i]).clamp(0.0, c_box)).sum()
        };
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if balance(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let lambda = 0.5 * (lo + hi);
        (0..n).map(|i| (v[i] - lambda * yf[i]).clamp(0.0, c_box)).collect()
    };

    let objective = |alpha: &[f64]| -> f64 {
        let mut quad = 0.0;
        for i in 0..n {
            for j in 0..n {
                quad += alpha[i] * alpha[j] * q(i, j);
            }
        }
        alpha.iter().sum::<f64>() - 0.5 * quad
    };

    let mut alpha = project(&vec![0.0; n]);
    for _ in 0..200_000 {
        let grad: Vec<f64> =
            (0..n).map(|i| 1.0 - (0..n).map(|j| q(i, j) * alpha[j]).sum::<f64>()).collect();
        let trial: Vec<f64> =
            (0..n).map(|i| alpha[i] + step * grad[i]).collect();
        let next = project(&trial);
        let delta: f64 =
            next.iter().zip(&alpha).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        alpha = next;
        if delta < 1e-13 {
            break;
        }
    }

    // Bias from the KKT conditions: free vectors pin it exactly; otherwise
    // take the midpoint of the feasible interval.
    let f_no_bias = |i: usize| -> f64 { (0..n).map(|j| alpha[j] * yf[j] * k[i][j]).sum() };
    let free: Vec<usize> =
        (0..n).filter(|&i| alpha[i] > 1e-8 && alpha[i] < c_box - 1e-8).collect();
    let bias = if !free.is_empty() {
        free.iter().map(|&i| yf[i] - f_no_bias(i)).sum::<f64>() / free.len() as f64
    } else {
        // A positive point at zero needs y*f >= 1, so b >= margin; a
        // negative point at C needs y*f <= 1, which is also b >= margin.
        // The mirror corners bound the bias from above.
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for i in 0..n {
            let margin = yf[i] - f_no_bias(i);
            let at_zero = alpha[i] <= 1e-8;
            let at_c = alpha[i] >= c_box - 1e-8;
            if (at_zero && y[i] == 1) || (at_c && y[i] == -1) {
                lo = lo.max(margin);
            }
            if (at_zero && y[i] == -1) || (at_c && y[i] == 1) {
                hi = hi.min(margin);
            }
        }
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (true, false) => lo,
            (false, true) => hi,
            (false, false) => 0.0,
        }
    };

    let obj = objective(&alpha);
    QpOracle { alpha, objective: obj, bias }
}
