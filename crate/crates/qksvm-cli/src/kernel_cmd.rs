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

//! `kernel`: fidelity kernel matrices, in process (`--direct`) or through
//! the scheduled backend (`--backend`) with resumable submit/run/collect
//! phases sharing a session directory.
//!
//! With matched seeds the backend route reproduces the direct sampled
//! route bit for bit: both derive one sub-seed per matrix entry.

use std::path::{Path, PathBuf};

use clap::Args;
use qksvm_core::backend::{
    builtin_profile, builtin_profile_names, collect_kernel_results, projected_quantum_seconds,
    run_pending, submit_kernel_jobs, transpile, BackendProfile, JobStore, Session, SimClock,
    DEFAULT_MONTHLY_BUDGET_SECONDS,
};
use qksvm_core::circuit::Circuit;
use qksvm_core::error::{Error, Result};
use qksvm_core::feature_map::{Entanglement, FeatureMapSpec, PauliString};
use qksvm_core::kernel::{
    assemble_test_matrix, assemble_train_matrix, count_jobs, evaluate_test_matrix,
    evaluate_train_matrix, prepare_test_pairs, prepare_train_pairs, FidelityMethod,
};
use qksvm_core::preprocess::Dataset;
use serde::{Deserialize, Serialize};

use crate::lock::SessionLock;

#[derive(Args)]
pub struct KernelArgs {
    /// Training dataset CSV (rows become both matrix axes). Needed to
    /// compute or submit; run and collect read the session instead.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Optional test dataset CSV (rows become test-matrix rows).
    #[arg(long)]
    pub test: Option<PathBuf>,
    /// Output path for the train kernel CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output path for the test kernel CSV; required with --test.
    #[arg(long)]
    pub test_out: Option<PathBuf>,
    /// Feature map family.
    #[arg(long, value_parser = ["z", "zz", "zzphi", "pauli"], default_value = "zz")]
    pub feature_map: String,
    /// Pauli strings for --feature-map pauli (repeat the flag per string).
    #[arg(long = "pauli")]
    pub paulis: Vec<String>,
    /// Encoder repetitions.
    #[arg(long, default_value_t = 2)]
    pub reps: usize,
    /// Index-set pattern for multi-qubit blocks.
    #[arg(long, value_parser = ["full", "linear"], default_value = "full")]
    pub entanglement: String,
    /// Multiplier on every data-map value.
    #[arg(long, default_value_t = 1.0)]
    pub angle_scale: f64,
    /// Fidelity estimator.
    #[arg(long, value_parser = ["exact", "sampled"], default_value = "exact")]
    pub method: String,
    /// Shots per matrix entry for the sampled estimator.
    #[arg(long, default_value_t = 1000)]
    pub shots: u64,
    /// Base seed; each entry derives its own stream from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Compute in process without a session.
    #[arg(long, conflicts_with_all = ["backend", "backend_config"])]
    pub direct: bool,
    /// Named builtin backend profile.
    #[arg(long, conflicts_with = "backend_config")]
    pub backend: Option<String>,
    /// JSON file holding a custom backend profile.
    #[arg(long)]
    pub backend_config: Option<PathBuf>,
    /// Backend phase to run; `all` chains submit, run, and collect.
    #[arg(long, value_parser = ["all", "submit", "run", "collect"], default_value = "all")]
    pub mode: String,
    /// Directory holding the session manifest and job files.
    #[arg(long)]
    pub session_dir: Option<PathBuf>,
}

/// Everything `run` and `collect` need, persisted at submit time so later
/// phases cannot drift from the submitted configuration.
#[derive(Serialize, Deserialize, PartialEq, Clone)]
struct KernelRequest {
    profile: BackendProfile,
    spec: FeatureMapSpec,
    shots: u64,
    seed: u64,
    n_train: usize,
    n_test: usize,
    dataset: String,
    test_dataset: Option<String>,
    train_ids: Vec<String>,
    test_ids: Vec<String>,
}

fn build_spec(args: &KernelArgs, num_features: usize) -> Result<FeatureMapSpec> {
    let mut spec = match args.feature_map.as_str() {
        "z" => FeatureMapSpec::z(num_features, args.reps),
        "zz" => FeatureMapSpec::zz(num_features, args.reps),
        "zzphi" => FeatureMapSpec::zzphi(num_features, args.reps),
        "pauli" => {
            let labels: Vec<&str> = if args.paulis.is_empty() {
                vec!["Z", "YY"]
            } else {
                args.paulis.iter().map(String::as_str).collect()
            };
            let strings = labels
                .into_iter()
                .map(PauliString::new)
                .collect::<Result<Vec<_>>>()?;
            FeatureMapSpec::pauli(num_features, args.reps, strings)
        }
        other => return Err(Error::InvalidArgument(format!("unknown feature map '{other}'"))),
    };
    if !args.paulis.is_empty() && args.feature_map != "pauli" {
        return Err(Error::InvalidArgument(
            "--pauli only applies to --feature-map pauli".into(),
        ));
    }
    if args.entanglement == "linear" {
        spec.entanglement = Entanglement::Linear;
    }
    spec.angle_scale = args.angle_scale;
    spec.validate()?;
    Ok(spec)
}

fn load_profile(args: &KernelArgs) -> Result<BackendProfile> {
    if let Some(name) = &args.backend {
        return builtin_profile(name);
    }
    if let Some(path) = &args.backend_config {
        let text = std::fs::read_to_string(path)?;
        let profile: BackendProfile = serde_json::from_str(&text)?;
        profile.validate()?;
        return Ok(profile);
    }
    Err(Error::InvalidArgument(format!(
        "backend route needs --backend (one of {}) or --backend-config",
        builtin_profile_names().join(", ")
    )))
}

fn request_path(dir: &Path) -> PathBuf {
    dir.join("kernel_request.json")
}

fn load_request(dir: &Path) -> Result<KernelRequest> {
    let path = request_path(dir);
    if !path.exists() {
        return Err(Error::InvalidArgument(format!(
            "no submitted session under {} (run --mode submit first)",
            dir.display()
        )));
    }
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn transpile_pairs(
    pairs: Vec<(usize, usize, Circuit)>,
    profile: &BackendProfile,
) -> Result<Vec<(usize, usize, Circuit)>> {
    pairs
        .into_iter()
        .map(|(i, j, c)| Ok((i, j, transpile(&c, &profile.basis_gates)?)))
        .collect()
}

pub fn run(args: KernelArgs) -> Result<()> {
    // run and collect read everything from the submitted request; the
    // dataset flags only matter when circuits are built.
    if !args.direct && (args.mode == "run" || args.mode == "collect") {
        let session_dir = args
            .session_dir
            .clone()
            .ok_or_else(|| Error::InvalidArgument("backend route needs --session-dir".into()))?;
        let _lock = SessionLock::acquire(&session_dir)?;
        return match args.mode.as_str() {
            "run" => run_jobs(&session_dir),
            _ => collect(&args, &session_dir),
        };
    }

    let dataset = args.dataset.as_ref().ok_or_else(|| {
        Error::InvalidArgument("--dataset is required to compute or submit a kernel".into())
    })?;
    let train = Dataset::load(dataset)?;
    let test = args.test.as_ref().map(|p| Dataset::load(p)).transpose()?;
    if let Some(t) = &test {
        if t.num_features() != train.num_features() {
            return Err(Error::InvalidArgument(format!(
                "test rows have {} features but train rows have {}",
                t.num_features(),
                train.num_features()
            )));
        }
    }
    // Submit alone writes no matrices, so the output pairing only binds
    // invocations that will.
    let writes_output = args.direct || args.mode == "all";
    if writes_output {
        match (&test, &args.test_out) {
            (Some(_), None) => {
                return Err(Error::InvalidArgument("--test needs --test-out".into()));
            }
            (None, Some(_)) => {
                return Err(Error::InvalidArgument("--test-out needs --test".into()));
            }
            _ => {}
        }
    }
    let spec = build_spec(&args, train.num_features())?;

    if args.direct {
        if args.mode != "all" {
            return Err(Error::InvalidArgument(
                "--direct computes in one shot; --mode only applies to backends".into(),
            ));
        }
        let out = args
            .out
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("--direct needs --out".into()))?;
        let method = match args.method.as_str() {
            "exact" => FidelityMethod::ExactOverlap,
            _ => FidelityMethod::ComputeUncompute { shots: args.shots, seed: args.seed },
        };
        let k_train = evaluate_train_matrix(&train.features, &spec, &method)?;
        k_train.save(out)?;
        println!("wrote {} ({}x{})", out.display(), k_train.rows(), k_train.cols());
        if let (Some(t), Some(test_out)) = (&test, &args.test_out) {
            let k_test = evaluate_test_matrix(&t.features, &train.features, &spec, &method)?;
            k_test.save(test_out)?;
            println!("wrote {} ({}x{})", test_out.display(), k_test.rows(), k_test.cols());
        }
        return Ok(());
    }

    // Backend route.
    if args.method == "exact" {
        return Err(Error::InvalidArgument(
            "backends estimate by sampling; use --method sampled or --direct".into(),
        ));
    }
    let session_dir = args
        .session_dir
        .clone()
        .ok_or_else(|| Error::InvalidArgument("backend route needs --session-dir".into()))?;
    let _lock = SessionLock::acquire(&session_dir)?;

    let profile = load_profile(&args)?;
    submit(&args, &train, test.as_ref(), &spec, &profile, &session_dir)?;
    if args.mode == "all" {
        run_jobs(&session_dir)?;
        collect(&args, &session_dir)?;
    }
    Ok(())
}

fn submit(
    args: &KernelArgs,
    train: &Dataset,
    test: Option<&Dataset>,
    spec: &FeatureMapSpec,
    profile: &BackendProfile,
    dir: &Path,
) -> Result<()> {
    let store = JobStore::open(dir)?;
    let mut request = KernelRequest {
        profile: profile.clone(),
        spec: spec.clone(),
        shots: args.shots,
        seed: args.seed,
        n_train: train.len(),
        n_test: test.map_or(0, Dataset::len),
        dataset: args
            .dataset
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_default(),
        test_dataset: args.test.as_ref().map(|p| p.display().to_string()),
        train_ids: Vec::new(),
        test_ids: Vec::new(),
    };

    if request_path(dir).exists() {
        let existing = load_request(dir)?;
        let mut comparable = existing.clone();
        comparable.train_ids = Vec::new();
        comparable.test_ids = Vec::new();
        if comparable == request {
            println!(
                "session already submitted: {} jobs under {}",
                existing.train_ids.len() + existing.test_ids.len(),
                dir.display()
            );
            return Ok(());
        }
        return Err(Error::InvalidArgument(format!(
            "session directory {} holds a different request; \
             use a fresh directory",
            dir.display()
        )));
    }

    let mut session = Session::new("session", profile.name.clone());
    let train_pairs =
        transpile_pairs(prepare_train_pairs(&train.features, spec)?, profile)?;
    request.train_ids =
        submit_kernel_jobs(&train_pairs, profile, args.shots, args.seed, &store, &mut session)?;
    if let Some(t) = test {
        let test_pairs =
            transpile_pairs(prepare_test_pairs(&t.features, &train.features, spec)?, profile)?;
        request.test_ids = submit_kernel_jobs(
            &test_pairs,
            profile,
            args.shots,
            args.seed,
            &store,
            &mut session,
        )?;
    }
    store.save_session(&session)?;
    std::fs::write(request_path(dir), serde_json::to_string_pretty(&request)?)?;
    let total = request.train_ids.len() + request.test_ids.len();
    debug_assert_eq!(total, count_jobs(request.n_train, request.n_test));
    println!("submitted {total} jobs to {} under {}", profile.name, dir.display());
    let projected = projected_quantum_seconds(total, profile);
    if projected > DEFAULT_MONTHLY_BUDGET_SECONDS {
        eprintln!(
            "warning: session projects {:.0} s of quantum time, over the {:.0} s monthly allowance",
            projected, DEFAULT_MONTHLY_BUDGET_SECONDS
        );
    }
    Ok(())
}

fn run_jobs(dir: &Path) -> Result<()> {
    let request = load_request(dir)?;
    let store = JobStore::open(dir)?;
    let mut clock = SimClock::new();
    let finished = run_pending(&store, &request.profile, &mut clock)?;
    let session = store.load_session()?;
    println!(
        "ran {finished} jobs; quantum time {} s, wall time {} s",
        session.quantum_seconds, session.wall_seconds
    );
    Ok(())
}

fn collect(args: &KernelArgs, dir: &Path) -> Result<()> {
    let request = load_request(dir)?;
    let out = args
        .out
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("collect needs --out".into()))?;
    let store = JobStore::open(dir)?;
    let method =
        FidelityMethod::ComputeUncompute { shots: request.shots, seed: request.seed };

    let train_entries = collect_kernel_results(&request.train_ids, &store)?;
    let k_train =
        assemble_train_matrix(request.n_train, &train_entries, &request.spec, &method)?;
    k_train.save(out)?;
    println!("wrote {} ({}x{})", out.display(), k_train.rows(), k_train.cols());

    if !request.test_ids.is_empty() {
        let test_out = args.test_out.as_ref().ok_or_else(|| {
            Error::InvalidArgument("session holds a test matrix; pass --test-out".into())
        })?;
        let test_entries = collect_kernel_results(&request.test_ids, &store)?;
        let k_test = assemble_test_matrix(
            request.n_test,
            request.n_train,
            &test_entries,
            &request.spec,
            &method,
        )?;
        k_test.save(test_out)?;
        println!("wrote {} ({}x{})", test_out.display(), k_test.rows(), k_test.cols());
    }
    Ok(())
}
