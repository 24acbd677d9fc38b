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

//! Command-line front end for the quantum-kernel SVM toolkit.
//!
//! Exit codes are stable for scripting: 0 success, 2 argument or contract
//! error, 3 session has pending jobs, 4 backend rejection (job size, ISA,
//! unknown job).

mod experiment_cmd;
mod kernel_cmd;
mod lock;
mod model_cmds;
mod preprocess_cmd;

use clap::{Parser, Subcommand};
use qksvm_core::error::Error;

#[derive(Parser)]
#[command(
    name = "qksvm",
    version,
    about = "Quantum fidelity-kernel SVM pipeline: preprocess, kernel, train, predict, evaluate, experiment"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Turn labeled binary files into an angle-encoded feature dataset.
    Preprocess(preprocess_cmd::PreprocessArgs),
    /// Compute a fidelity kernel matrix, in process or through a backend.
    Kernel(kernel_cmd::KernelArgs),
    /// Fit an SVM on a precomputed train kernel.
    Train(model_cmds::TrainArgs),
    /// Score a test kernel with a trained model.
    Predict(model_cmds::PredictArgs),
    /// Compare predictions against labels and write metrics.
    Evaluate(model_cmds::EvaluateArgs),
    /// Run a grid of dataset sizes, qubit counts, and kernel methods.
    Experiment(experiment_cmd::ExperimentArgs),
}

/// Maps a core error to the documented exit code.
fn exit_code(err: &Error) -> i32 {
    match err {
        Error::IncompleteSession { .. } => 3,
        Error::MaxJobSize { .. }
        | Error::IsaViolation(_)
        | Error::UnsupportedIsa(_)
        | Error::UnknownJob(_) => 4,
        _ => 2,
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Preprocess(args) => preprocess_cmd::run(args),
        Command::Kernel(args) => kernel_cmd::run(args),
        Command::Train(args) => model_cmds::run_train(args),
        Command::Predict(args) => model_cmds::run_predict(args),
        Command::Evaluate(args) => model_cmds::run_evaluate(args),
        Command::Experiment(args) => experiment_cmd::run(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(exit_code(&err));
    }
}
