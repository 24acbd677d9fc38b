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

//! Cross-checks of the simulator, feature maps and transpiler against
//! independent Kronecker-product and matrix-exponential oracles.

mod common;

use common::{
    circuit_unitary_oracle, exact_distance, expm, pauli_string_unitary, phase_distance,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use qksvm_core::backend::{default_isa, transpile};
use qksvm_core::feature_map::{
    build_feature_map, pauli_evolution_block, Entanglement, FeatureMapSpec, PauliString,
};
use qksvm_core::statevector::circuit_unitary;
use qksvm_core::{Circuit, Gate, GateKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random circuit over the full gate set.
fn random_circuit(n: usize, gates: usize, rng: &mut ChaCha8Rng) -> Circuit {
    let mut c = Circuit::new(n).unwrap();
    for _ in 0..gates {
        let angle = rng.random_range(-std::f64::consts::TAU..std::f64::consts::TAU);
        let q = rng.random_range(0..n);
        match rng.random_range(0..9) {
            0 => c.h(q).unwrap(),
            1 => c.p(angle, q).unwrap(),
            2 => c.rz(angle, q).unwrap(),
            3 => c.rx(angle, q).unwrap(),
            4 => c.ry(angle, q).unwrap(),
            5 => c.x(q).unwrap(),
            6 => c.sx(q).unwrap(),
            k => {
                if n < 2 {
                    c.h(q).unwrap();
                    continue;
                }
                let mut t = rng.random_range(0..n);
                while t == q {
                    t = rng.random_range(0..n);
                }
                if k == 7 {
                    c.cx(q, t).unwrap()
                } else {
                    c.cz(q, t).unwrap()
                }
            }
        };
    }
    c
}

fn random_features(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect()
}

#[test]
fn simulator_matches_kronecker_oracle_on_random_circuits() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for trial in 0..60 {
        let n = rng.random_range(1..=4);
        let circuit = random_circuit(n, rng.random_range(1..=20), &mut rng);
        let ours = circuit_unitary(&circuit).unwrap();
        let oracle = circuit_unitary_oracle(&circuit);
        let d = exact_distance(&ours, &oracle);
        assert!(d < 1e-10, "trial {trial}: unitary differs from oracle by {d}");
    }
}

#[test]
fn adjoint_inverts_every_random_circuit() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for _ in 0..30 {
        let n = rng.random_range(1..=4);
        let circuit = random_circuit(n, rng.random_range(1..=15), &mut rng);
        let mut both = circuit.clone();
        both.extend(&circuit.adjoint()).unwrap();
        let u = circuit_unitary(&both).unwrap();
        let d = exact_distance(&u, &DMatrix::identity(1 << n, 1 << n));
        assert!(d < 1e-10, "adjoint failed to invert: {d}");
    }
}

#[test]
fn pauli_evolution_blocks_match_matrix_exponential() {
    // exp(i * angle * P) for assorted strings, target subsets and angles,
    // compared entry-for-entry (the construction is phase-exact).
    let cases: &[(&str, &[usize], usize)] = &[
        ("Z", &[0], 1),
        ("Z", &[1], 3),
        ("ZZ", &[0, 1], 2),
        ("ZZ", &[2, 0], 3),
        ("XX", &[0, 1], 2),
        ("YY", &[1, 2], 3),
        ("XY", &[0, 2], 3),
        ("ZX", &[1, 0], 2),
        ("ZZZ", &[0, 1, 2], 3),
        ("XYZ", &[2, 1, 0], 3),
        ("IZ", &[0, 1], 2),
        ("ZIZ", &[0, 1, 2], 4),
    ];
    for &(labels, targets, n) in cases {
        for angle in [0.0, 0.7, -1.9, 2.4] {
            let p = PauliString::new(labels).unwrap();
            let gates = pauli_evolution_block(&p, angle, targets).unwrap();
            let mut circuit = Circuit::new(n).unwrap();
            for g in gates {
                circuit.push(g).unwrap();
            }
            let ours = circuit_unitary(&circuit).unwrap();
            let pauli = pauli_string_unitary(labels.as_bytes(), targets, n);
            let oracle = expm(&(pauli * Complex64::new(0.0, angle)));
            let d = exact_distance(&ours, &oracle);
            assert!(d < 1e-9, "exp(i*{angle}*{labels}) on {targets:?}: differs by {d}");
        }
    }
}

#[test]
fn feature_map_circuit_matches_composed_oracle() {
    // Build the whole map unitary independently: per rep, H on all qubits
    // then one exponential per index set, matching the documented order.
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for spec in [
        FeatureMapSpec::z(3, 1),
        FeatureMapSpec::zz(3, 2),
        FeatureMapSpec::zzphi(2, 2),
        FeatureMapSpec::pauli(3, 1, vec![PauliString::new("Y").unwrap(), PauliString::new("XZ").unwrap()]),
    ] {
        let x = random_features(spec.num_qubits, &mut rng);
        let circuit = build_feature_map(&spec, &x).unwrap();
        let ours = circuit_unitary(&circuit).unwrap();

        let n = spec.num_qubits;
        let h1 = common::single_qubit_matrix(GateKind::H, None);
        let mut h_layer = common::embed_single(&h1, 0, n);
        for q in 1..n {
            h_layer = common::embed_single(&h1, q, n) * h_layer;
        }
        let mut oracle = DMatrix::identity(1 << n, 1 << n);
        for _ in 0..spec.reps {
            oracle = &h_layer * oracle;
            for p in &spec.paulis {
                let sets =
                    qksvm_core::feature_map::index_sets(n, p.len(), &spec.entanglement).unwrap();
                for set in sets {
                    let phi = qksvm_core::feature_map::data_map_value(
                        &spec.data_map,
                        &set,
                        &x,
                    )
                    .unwrap();
                    let pauli = pauli_string_unitary(p.labels().as_bytes(), &set, n);
                    oracle =
                        expm(&(pauli * Complex64::new(0.0, spec.angle_scale * phi))) * oracle;
                }
            }
        }
        let d = exact_distance(&ours, &oracle);
        assert!(d < 1e-9, "feature map differs from composed oracle by {d}");
    }
}

#[test]
fn transpiled_random_feature_maps_stay_unitary_equivalent() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let isa = default_isa();
    for trial in 0..50 {
        let n = rng.random_range(1..=4);
        let reps = rng.random_range(1..=2);
        let spec = match rng.random_range(0..4) {
            0 => FeatureMapSpec::z(n, reps),
            1 => FeatureMapSpec::zz(n.max(2), reps),
            2 => FeatureMapSpec::zzphi(n.max(2), reps),
            _ => FeatureMapSpec::pauli(
                n.max(2),
                reps,
                vec![PauliString::new("X").unwrap(), PauliString::new("YZ").unwrap()],
            ),
        };
        let x = random_features(spec.num_qubits, &mut rng);
        let circuit = build_feature_map(&spec, &x).unwrap();
        let transpiled = transpile(&circuit, &isa).unwrap();
        for gate in transpiled.gates() {
            assert!(isa.contains(&gate.kind));
        }
        let d = phase_distance(
            &circuit_unitary(&transpiled).unwrap(),
            &circuit_unitary(&circuit).unwrap(),
        );
        assert!(d < 1e-8, "trial {trial}: transpile off by {d}");
    }
}

#[test]
fn transpiled_random_circuits_stay_unitary_equivalent() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let isa = default_isa();
    for trial in 0..50 {
        let n = rng.random_range(1..=4);
        let circuit = random_circuit(n, rng.random_range(1..=25), &mut rng);
        let transpiled = transpile(&circuit, &isa).unwrap();
        let d = phase_distance(
            &circuit_unitary(&transpiled).unwrap(),
            &circuit_unitary(&circuit).unwrap(),
        );
        assert!(d < 1e-8, "trial {trial}: transpile off by {d}");
    }
}

#[test]
fn sx_adjoint_identity_holds() {
    // The adjoint of SX is emitted as the pair [SX, X]; verify against the
    // conjugate transpose.
    let mut c = Circuit::new(1).unwrap();
    c.sx(0).unwrap();
    let adj = c.adjoint();
    let u = circuit_unitary(&adj).unwrap();
    let direct = circuit_unitary(&c).unwrap().adjoint();
    assert!(exact_distance(&u, &direct) < 1e-12);
    let gates: Vec<GateKind> = adj.gates().iter().map(|g| g.kind).collect();
    assert_eq!(gates, vec![GateKind::Sx, GateKind::X]);
}

#[test]
fn explicit_pair_entanglement_follows_given_order() {
    let spec = FeatureMapSpec {
        entanglement: Entanglement::ExplicitPairs(vec![(2, 0), (1, 2)]),
        ..FeatureMapSpec::zz(3, 1)
    };
    let x = [0.4, 1.1, 2.7];
    let circuit = build_feature_map(&spec, &x).unwrap();
    // Sanity: it builds, simulates, and is reproducible.
    let u1 = circuit_unitary(&circuit).unwrap();
    let u2 = circuit_unitary(&build_feature_map(&spec, &x).unwrap()).unwrap();
    assert_eq!(exact_distance(&u1, &u2), 0.0);
    let sets = qksvm_core::feature_map::index_sets(3, 2, &spec.entanglement).unwrap();
    assert_eq!(sets, vec![vec![2, 0], vec![1, 2]]);
}

#[test]
fn gate_definitions_match_oracle_matrices() {
    // Pin each single-qubit gate matrix against the oracle definitions.
    for (kind, angle) in [
        (GateKind::H, None),
        (GateKind::X, None),
        (GateKind::Sx, None),
        (GateKind::P, Some(0.9)),
        (GateKind::Rz, Some(-1.3)),
        (GateKind::Rx, Some(2.2)),
        (GateKind::Ry, Some(0.4)),
    ] {
        let gate = Gate { kind, targets: vec![0], angle };
        let mut c = Circuit::new(1).unwrap();
        c.push(gate.clone()).unwrap();
        let ours = circuit_unitary(&c).unwrap();
        let oracle = common::single_qubit_matrix(kind, angle);
        assert!(
            exact_distance(&ours, &oracle) < 1e-12,
            "gate {kind:?} deviates from oracle"
        );
    }
}
