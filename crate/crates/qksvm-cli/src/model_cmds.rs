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

//! `train`, `predict` and `evaluate`: the model side of the pipeline.
//! All three work on files so each stage can run on a different machine.

use std::path::PathBuf;

use clap::Args;
use qksvm_core::error::{Error, Result};
use qksvm_core::kernel::KernelMatrix;
use qksvm_core::metrics::MetricsReport;
use qksvm_core::preprocess::Dataset;
use qksvm_core::svm::{decision_function, fit_precomputed, SvmModel, SvmTrainConfig};

#[derive(Args)]
pub struct TrainArgs {
    /// Train kernel CSV from `kernel`.
    #[arg(long)]
    pub kernel: PathBuf,
    /// Dataset CSV supplying the training labels.
    #[arg(long)]
    pub dataset: PathBuf,
    /// Box constraint.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Optimizer tolerance on margin violations.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    /// Cap on optimization sweeps.
    #[arg(long, default_value_t = 200)]
    pub max_passes: usize,
    /// Seed for the optimizer's fallback scan order.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path for the model JSON.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run_train(args: TrainArgs) -> Result<()> {
    let kernel = KernelMatrix::load(&args.kernel)?;
    let dataset = Dataset::load(&args.dataset)?;
    let config = SvmTrainConfig {
        c: args.c,
        tol: args.tol,
        max_passes: args.max_passes,
        seed: args.seed,
    };
    let model = fit_precomputed(&kernel, &dataset.labels, &config)?;
    model.save(&args.out)?;
    println!(
        "wrote {} ({} support vectors of {}, bias {})",
        args.out.display(),
        model.support_indices.len(),
        model.num_train(),
        model.bias
    );
    Ok(())
}

#[derive(Args)]
pub struct PredictArgs {
    /// Model JSON from `train`.
    #[arg(long)]
    pub model: PathBuf,
    /// Test kernel CSV whose columns index the model's training samples.
    #[arg(long)]
    pub kernel: PathBuf,
    /// Output path for the predictions CSV.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run_predict(args: PredictArgs) -> Result<()> {
    let model = SvmModel::load(&args.model)?;
    let kernel = KernelMatrix::load(&args.kernel)?;
    let decisions = decision_function(&model, &kernel)?;
    let mut out = String::from("index,decision,label\n");
    for (i, f) in decisions.iter().enumerate() {
        let label: i8 = if *f >= 0.0 { 1 } else { -1 };
        out.push_str(&format!("{i},{f},{label}\n"));
    }
    std::fs::write(&args.out, out)?;
    println!("wrote {} ({} predictions)", args.out.display(), decisions.len());
    Ok(())
}

#[derive(Args)]
pub struct EvaluateArgs {
    /// Predictions CSV from `predict`.
    #[arg(long)]
    pub predictions: PathBuf,
    /// Dataset CSV supplying the reference labels, row for row.
    #[arg(long)]
    pub dataset: PathBuf,
    /// Output path for the metrics JSON.
    #[arg(long)]
    pub out: PathBuf,
}

fn load_predicted_labels(path: &PathBuf) -> Result<Vec<i8>> {
    let text = std::fs::read_to_string(path)?;
    let mut labels = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with("index,") {
            continue;
        }
        let label_text = line.rsplit(',').next().ok_or_else(|| {
            Error::Parse(format!("{}:{}: empty row", path.display(), lineno + 1))
        })?;
        let label: i8 = label_text.trim().parse().map_err(|_| {
            Error::Parse(format!(
                "{}:{}: bad label '{label_text}'",
                path.display(),
                lineno + 1
            ))
        })?;
        labels.push(label);
    }
    Ok(labels)
}

pub fn run_evaluate(args: EvaluateArgs) -> Result<()> {
    let predicted = load_predicted_labels(&args.predictions)?;
    let dataset = Dataset::load(&args.dataset)?;
    let report = MetricsReport::from_labels(&dataset.labels, &predicted)?;
    std::fs::write(&args.out, serde_json::to_string_pretty(&report)?)?;
    println!(
        "wrote {} (accuracy {:.4}, precision {:.4}, recall {:.4}, f1 {:.4})",
        args.out.display(),
        report.accuracy,
        report.precision,
        report.recall,
        report.f1
    );
    Ok(())
}
