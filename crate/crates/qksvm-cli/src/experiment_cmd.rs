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

//! `experiment`: sweep dataset sizes, qubit counts and kernel methods,
//! collecting accuracy and F1 tables plus per-cell provenance files.
//!
//! Within one size and repeat every method sees the same split, so columns
//! of one row are directly comparable. A failing cell records its error and
//! leaves NaN in the tables; the sweep itself still exits 0.

use std::path::PathBuf;

use clap::Args;
use qksvm_core::error::{Error, Result};
use qksvm_core::feature_map::{FeatureMapSpec, PauliString};
use qksvm_core::kernel::{
    derive_entry_seed, evaluate_test_matrix, evaluate_train_matrix, FidelityMethod,
};
use qksvm_core::preprocess::{
    balanced_split, fit_pca, generate_synthetic, transform_pca, AngleScaler, Dataset,
};
use qksvm_core::svm::{
    classical_kernel_matrix, classical_train_matrix, fit_precomputed, predict_labels,
    ClassicalKernelKind, SvmTrainConfig,
};
use qksvm_core::metrics::MetricsReport;
use serde::{Deserialize, Serialize};

#[derive(Args)]
pub struct ExperimentArgs {
    /// Grid description JSON.
    #[arg(long)]
    pub grid: PathBuf,
    /// Directory for the result tables and per-cell files.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Repeats per cell with re-derived seeds; tables hold the means.
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
}

#[derive(Deserialize, Clone, Copy)]
struct SizeSpec {
    train: usize,
    test: usize,
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum DataSource {
    /// Two Gaussian blobs per repeat, regenerated from the derived seed.
    Synthetic { dims: usize, separation: f64 },
    /// A fixed dataset CSV; repeats differ only in the split.
    Dataset(PathBuf),
}

fn default_reps() -> usize {
    2
}
fn default_angle_range() -> (f64, f64) {
    (0.0, std::f64::consts::FRAC_PI_4)
}
fn default_c() -> f64 {
    1.0
}
fn default_tol() -> f64 {
    1e-4
}
fn default_max_passes() -> usize {
    2000
}

#[derive(Deserialize)]
struct GridSpec {
    sizes: Vec<SizeSpec>,
    qubits: Vec<usize>,
    methods: Vec<String>,
    data: DataSource,
    #[serde(default = "default_reps")]
    reps: usize,
    #[serde(default = "default_angle_range")]
    angle_range: (f64, f64),
    #[serde(default = "default_c")]
    c: f64,
    #[serde(default = "default_tol")]
    tol: f64,
    #[serde(default = "default_max_passes")]
    max_passes: usize,
    #[serde(default)]
    seed: u64,
}

enum MethodKind {
    Quantum(FeatureMapSpec),
    Classical(ClassicalKernelKind),
}

fn resolve_method(name: &str, qubits: usize, reps: usize) -> Result<MethodKind> {
    let gamma = 1.0 / qubits as f64;
    Ok(match name {
        "z" => MethodKind::Quantum(FeatureMapSpec::z(qubits, reps)),
        "zz" => MethodKind::Quantum(FeatureMapSpec::zz(qubits, reps)),
        "zzphi" => MethodKind::Quantum(FeatureMapSpec::zzphi(qubits, reps)),
        "pauli" => MethodKind::Quantum(FeatureMapSpec::pauli(
            qubits,
            reps,
            vec![PauliString::new("Z")?, PauliString::new("YY")?],
        )),
        "linear" => MethodKind::Classical(ClassicalKernelKind::Linear),
        "rbf" => MethodKind::Classical(ClassicalKernelKind::Rbf { gamma }),
        "poly" => MethodKind::Classical(ClassicalKernelKind::Polynomial {
            degree: 3,
            coef0: 1.0,
            gamma,
        }),
        "sigmoid" => {
            MethodKind::Classical(ClassicalKernelKind::Sigmoid { gamma, coef0: 0.0 })
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown method '{other}'; quantum: z, zz, zzphi, pauli; \
                 classical: linear, rbf, poly, sigmoid"
            )))
        }
    })
}

#[derive(Serialize)]
struct RepeatOutcome {
    seed: u64,
    accuracy: f64,
    f1: f64,
}

#[derive(Serialize)]
struct CellRecord {
    method: String,
    qubits: usize,
    train: usize,
    test: usize,
    reps: usize,
    angle_range: (f64, f64),
    c: f64,
    tol: f64,
    max_passes: usize,
    repeats: Vec<RepeatOutcome>,
    accuracy_mean: f64,
    f1_mean: f64,
    error: Option<String>,
}

/// One train-and-score pass; `data_seed` fixes the dataset and split,
/// `fit_seed` only the optimizer's scan order.
fn run_repeat(
    grid: &GridSpec,
    size: SizeSpec,
    qubits: usize,
    method: &str,
    data_seed: u64,
    fit_seed: u64,
) -> Result<(f64, f64)> {
    let pool = match &grid.data {
        DataSource::Synthetic { dims, separation } => {
            generate_synthetic(size.train + size.test, *dims, *separation, data_seed)?
        }
        DataSource::Dataset(path) => Dataset::load(path)?,
    };
    let (train, test) = balanced_split(&pool, size.train, size.test, data_seed)?;

    let dims = train.num_features();
    if dims < qubits {
        return Err(Error::InvalidArgument(format!(
            "cell needs >= {qubits} features per row, data has {dims}"
        )));
    }
    let (train_feats, test_feats) = if dims > qubits {
        let pca = fit_pca(&train.features, qubits)?;
        (transform_pca(&pca, &train.features)?, transform_pca(&pca, &test.features)?)
    } else {
        (train.features.clone(), test.features.clone())
    };
    let scaler = AngleScaler::fit(&train_feats, grid.angle_range)?;
    let train_scaled = scaler.apply(&train_feats)?;
    let test_scaled = scaler.apply(&test_feats)?;

    let (k_train, k_test) = match resolve_method(method, qubits, grid.reps)? {
        MethodKind::Quantum(spec) => (
            evaluate_train_matrix(&train_scaled, &spec, &FidelityMethod::ExactOverlap)?,
            evaluate_test_matrix(
                &test_scaled,
                &train_scaled,
                &spec,
                &FidelityMethod::ExactOverlap,
            )?,
        ),
        MethodKind::Classical(kind) => (
            classical_train_matrix(&train_scaled, &kind)?,
            classical_kernel_matrix(&test_scaled, &train_scaled, &kind)?,
        ),
    };

    let config = SvmTrainConfig {
        c: grid.c,
        tol: grid.tol,
        max_passes: grid.max_passes,
        seed: fit_seed,
    };
    let model = fit_precomputed(&k_train, &train.labels, &config)?;
    let predicted = predict_labels(&model, &k_test)?;
    let report = MetricsReport::from_labels(&test.labels, &predicted)?;
    Ok((report.accuracy, report.f1))
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        f64::NAN
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

pub fn run(args: ExperimentArgs) -> Result<()> {
    if args.repeats == 0 {
        return Err(Error::InvalidArgument("--repeats must be >= 1".into()));
    }
    let grid: GridSpec = serde_json::from_str(&std::fs::read_to_string(&args.grid)?)?;
    for name in &grid.methods {
        resolve_method(name, *grid.qubits.first().unwrap_or(&3), grid.reps)?;
    }

    let cells_dir = args.out_dir.join("cells");
    std::fs::create_dir_all(&cells_dir)?;

    // Column per (method, qubits) pair, row per size.
    let columns: Vec<(String, usize)> = grid
        .methods
        .iter()
        .flat_map(|m| grid.qubits.iter().map(move |&q| (m.clone(), q)))
        .collect();
    let header = std::iter::once("size".to_string())
        .chain(columns.iter().map(|(m, q)| format!("{m}_q{q}")))
        .collect::<Vec<_>>()
        .join(",");
    let mut accuracy_rows = vec![header.clone()];
    let mut f1_rows = vec![header];

    for (size_idx, &size) in grid.sizes.iter().enumerate() {
        let mut acc_row = vec![format!("{}/{}", size.train, size.test)];
        let mut f1_row = acc_row.clone();
        for (col_idx, (method, qubits)) in columns.iter().enumerate() {
            let cell_index = size_idx * columns.len() + col_idx;
            let mut outcomes = Vec::with_capacity(args.repeats);
            let mut cell_error = None;
            for repeat in 0..args.repeats {
                let data_seed = derive_entry_seed(grid.seed, size_idx, repeat);
                let fit_seed = derive_entry_seed(grid.seed, cell_index + 1, repeat);
                match run_repeat(&grid, size, *qubits, method, data_seed, fit_seed) {
                    Ok((accuracy, f1)) => {
                        outcomes.push(RepeatOutcome { seed: data_seed, accuracy, f1 });
                    }
                    Err(e) => {
                        cell_error = Some(e.to_string());
                        break;
                    }
                }
            }
            let (acc_mean, f1_mean) = if cell_error.is_some() {
                (f64::NAN, f64::NAN)
            } else {
                (
                    mean(&outcomes.iter().map(|o| o.accuracy).collect::<Vec<_>>()),
                    mean(&outcomes.iter().map(|o| o.f1).collect::<Vec<_>>()),
                )
            };
            let record = CellRecord {
                method: method.clone(),
                qubits: *qubits,
                train: size.train,
                test: size.test,
                reps: grid.reps,
                angle_range: grid.angle_range,
                c: grid.c,
                tol: grid.tol,
                max_passes: grid.max_passes,
                repeats: outcomes,
                accuracy_mean: acc_mean,
                f1_mean,
                error: cell_error.clone(),
            };
            let cell_path = cells_dir.join(format!(
                "{method}_q{qubits}_{}x{}.json",
                size.train, size.test
            ));
            std::fs::write(&cell_path, serde_json::to_string_pretty(&record)?)?;
            match &cell_error {
                None => println!(
                    "cell {method}_q{qubits} {}/{}: accuracy {acc_mean:.4}, f1 {f1_mean:.4}",
                    size.train, size.test
                ),
                Some(msg) => println!(
                    "cell {method}_q{qubits} {}/{} failed: {msg}",
                    size.train, size.test
                ),
            }
            acc_row.push(format!("{acc_mean}"));
            f1_row.push(format!("{f1_mean}"));
        }
        accuracy_rows.push(acc_row.join(","));
        f1_rows.push(f1_row.join(","));
    }

    let acc_path = args.out_dir.join("accuracy.csv");
    let f1_path = args.out_dir.join("f1.csv");
    std::fs::write(&acc_path, accuracy_rows.join("\n") + "\n")?;
    std::fs::write(&f1_path, f1_rows.join("\n") + "\n")?;
    println!("wrote {} and {}", acc_path.display(), f1_path.display());
    Ok(())
}
