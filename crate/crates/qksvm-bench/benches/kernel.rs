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

//! Kernel evaluation cost: a full exact train matrix and a single sampled
//! entry at the default shot budget.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qksvm_bench::random_features;
use qksvm_core::feature_map::FeatureMapSpec;
use qksvm_core::kernel::{evaluate_train_matrix, fidelity, FidelityMethod};

fn bench_exact_train_matrix(c: &mut Criterion) {
    let spec = FeatureMapSpec::zz(4, 2);
    let x = random_features(20, 4, 21);
    c.bench_function("exact_train_matrix_20x20_4q", |b| {
        b.iter(|| {
            evaluate_train_matrix(black_box(&x), &spec, &FidelityMethod::ExactOverlap).unwrap()
        })
    });
}

fn bench_sampled_entry(c: &mut Criterion) {
    let spec = FeatureMapSpec::zz(4, 2);
    let pair = random_features(2, 4, 22);
    let method = FidelityMethod::ComputeUncompute { shots: 1000, seed: 7 };
    c.bench_function("sampled_fidelity_1000_shots_4q", |b| {
        b.iter(|| fidelity(black_box(&pair[0]), black_box(&pair[1]), &spec, &method).unwrap())
    });
}

criterion_group!(benches, bench_exact_train_matrix, bench_sampled_entry);
criterion_main!(benches);
