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

//! Quantum-kernel SVM toolkit.
//!
//! The crate covers the full pipeline for binary classification with fidelity
//! quantum kernels on a simulated backend:
//!
//! * [`statevector`]: dense simulation of the gate set used by the feature
//!   maps, exact overlaps and seeded shot sampling;
//! * [`feature_map`]: Pauli feature-map circuits (`Z`, `ZZ`, general Pauli,
//!   and the sine-product variant) with configurable depth, entanglement and
//!   data-mapping function;
//! * [`kernel`]: fidelity kernel entries and train/test matrix assembly,
//!   exact or shot-sampled;
//! * [`backend`]: a mock quantum-cloud backend with ISA transpilation, job-size
//!   limits, one job per kernel entry, a durable job store and simulated
//!   quantum-time accounting;
//! * [`svm`]: soft-margin SVM over precomputed kernels plus the classical
//!   baseline kernels;
//! * [`preprocess`]: bytes → grayscale image → resize → PCA → angle scaling
//!   → balanced splits, with a synthetic-blob generator for demos and tests;
//! * [`metrics`]: confusion counts, accuracy, precision, recall, F1.

pub mod backend;
pub mod circuit;
pub mod error;
pub mod feature_map;
pub mod kernel;
pub mod metrics;
pub mod preprocess;
pub mod statevector;
pub mod svm;

pub use backend::{
    builtin_profile, builtin_profile_names, collect_kernel_results, default_isa,
    projected_quantum_seconds, run_pending, submit_job, submit_kernel_jobs, transpile,
    BackendProfile, Job, JobStatus, JobStore, QueueModel, Session, SimClock, ZeroCount,
};
pub use circuit::{Circuit, Gate, GateKind};
pub use error::{Error, Result};
pub use feature_map::{
    build_feature_map, data_map_value, pauli_evolution_block, register_data_map, DataMapKind,
    Entanglement, FeatureMapSpec, PauliString,
};
pub use kernel::{
    count_jobs, derive_entry_seed, evaluate_test_matrix, evaluate_train_matrix, fidelity,
    prepare_test_pairs, prepare_train_pairs, FidelityMethod, KernelMatrix, KernelSource,
    MatrixKind,
};
pub use metrics::{accuracy, confusion, f1, precision, recall, ConfusionCounts, MetricsReport};
pub use preprocess::{
    balanced_split, bytes_to_image, fit_pca, generate_synthetic, load_labeled_dir,
    reconstruct_pca, resize, scale_to_angles, transform_pca, AngleScaler, Dataset,
    GrayscaleImage, PcaModel, WidthSchedule,
};
pub use statevector::{
    circuit_unitary, inner_product, probability_all_zeros, sample_all_zeros,
    sample_all_zeros_count, sample_all_zeros_count_with, Statevector,
};
pub use svm::{
    classical_kernel_matrix, classical_train_matrix, decision_function, dual_objective,
    fit_precomputed, predict_labels, ClassicalKernelKind, SvmModel, SvmTrainConfig,
};
