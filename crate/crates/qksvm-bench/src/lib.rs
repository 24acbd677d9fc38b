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

//! Shared input builders for the benchmark suite. Everything is seeded so a
//! benchmark run always measures the same workload.

use qksvm_core::kernel::KernelMatrix;
use qksvm_core::svm::{classical_train_matrix, ClassicalKernelKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Phase angle per feature, uniform over the narrow quadrant the pipeline's
/// scaler targets.
pub fn random_features(n: usize, dims: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..dims).map(|_| rng.random_range(0.0..std::f64::consts::FRAC_PI_4)).collect())
        .collect()
}

/// Alternating ±1 labels, the balanced worst case for the solver's
/// equality constraint.
pub fn alternating_labels(n: usize) -> Vec<i8> {
    (0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect()
}

/// Seeded RBF train matrix over random features.
pub fn rbf_train_matrix(n: usize, dims: usize, seed: u64) -> KernelMatrix {
    let features = random_features(n, dims, seed);
    classical_train_matrix(&features, &ClassicalKernelKind::Rbf { gamma: 1.0 / dims as f64 })
        .expect("valid RBF inputs")
}
