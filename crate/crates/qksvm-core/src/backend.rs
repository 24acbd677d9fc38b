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

//! Mock quantum-cloud backend: ISA transpilation, job-size limits, a durable
//! directory-backed job store, one-job-per-kernel-entry submission and
//! simulated quantum-time accounting.
//!
//! The flow mirrors a cloud round trip while staying local and deterministic:
//!
//! 1. [`transpile`] rewrites circuits into the backend's basis-gate set;
//! 2. [`submit_kernel_jobs`] persists one `Queued` job per kernel entry;
//! 3. [`run_pending`], possibly in a different process, simulates each job
//!    and advances a simulated clock by `seconds_per_job`;
//! 4. [`collect_kernel_results`] turns `Done` jobs back into kernel entries
//!    that assemble into the same matrix the in-process path produces.
//!
//! Job and session files are written via temp-file rename, so a submit in one
//! process and a collect in another observe identical content. The store
//! assumes a single writer per session directory; reads are freely
//! concurrent. Jobs are executed sequentially in submission order, each with
//! its own seeded generator, so results do not depend on scheduling.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateKind};
use crate::error::{Error, Result};
use crate::kernel::derive_entry_seed;
use crate::statevector::{sample_all_zeros_count_with, Statevector};

/// Queue-delay model; delays add simulated wall time but never quantum time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueueModel {
    /// Jobs start as soon as they are picked up.
    Immediate,
    /// Fixed wait in seconds before every job.
    FixedDelay(f64),
    /// Wait proportional to the job's own execution time.
    LoadFactor(f64),
}

impl QueueModel {
    fn delay_seconds(&self, seconds_per_job: f64) -> f64 {
        match self {
            QueueModel::Immediate => 0.0,
            QueueModel::FixedDelay(s) => *s,
            QueueModel::LoadFactor(m) => m * seconds_per_job,
        }
    }

    fn validate(&self) -> Result<()> {
        let v = match self {
            QueueModel::Immediate => return Ok(()),
            QueueModel::FixedDelay(s) => *s,
            QueueModel::LoadFactor(m) => *m,
        };
        if v >= 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(Error::Config(format!("queue model parameter must be >= 0, got {v}")))
        }
    }
}

/// Static description of a backend: its ISA, job-size limit and timing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackendProfile {
    pub name: String,
    /// The ISA: the only gate kinds jobs may contain.
    pub basis_gates: BTreeSet<GateKind>,
    pub max_circuits_per_job: usize,
    /// Simulated quantum seconds consumed by one job.
    pub seconds_per_job: f64,
    pub queue_model: QueueModel,
}

impl BackendProfile {
    pub fn validate(&self) -> Result<()> {
        if self.basis_gates.is_empty() {
            return Err(Error::Config(format!("backend '{}' declares an empty ISA", self.name)));
        }
        if self.max_circuits_per_job == 0 {
            return Err(Error::Config(format!(
                "backend '{}' needs max_circuits_per_job >= 1",
                self.name
            )));
        }
        if self.seconds_per_job <= 0.0 || !self.seconds_per_job.is_finite() {
            return Err(Error::Config(format!(
                "backend '{}' needs seconds_per_job > 0, got {}",
                self.name, self.seconds_per_job
            )));
        }
        self.queue_model.validate()
    }
}

/// Gate kinds every accepted ISA must contain; [`transpile`] targets these.
pub const REQUIRED_ISA: [GateKind; 4] = [GateKind::Rz, GateKind::Sx, GateKind::X, GateKind::Cx];

/// The default ISA `{rz, sx, x, cx}` used by all built-in profiles.
pub fn default_isa() -> BTreeSet<GateKind> {
    REQUIRED_ISA.into_iter().collect()
}

pub fn builtin_profile_names() -> &'static [&'static str] {
    &["torino", "algiers", "cairo", "kyoto"]
}

/// A built-in profile by name; all share the default ISA, a 300-circuit job
/// limit and an immediate queue, and differ in seconds per job.
pub fn builtin_profile(name: &str) -> Result<BackendProfile> {
    let seconds_per_job = match name {
        "torino" => 15.0,
        "algiers" => 18.0,
        "cairo" => 16.0,
        "kyoto" => 17.0,
        _ => {
            return Err(Error::Config(format!(
                "unknown backend '{name}'; built-in profiles: {}",
                builtin_profile_names().join(", ")
            )))
        }
    };
    Ok(BackendProfile {
        name: name.to_string(),
        basis_gates: default_isa(),
        max_circuits_per_job: 300,
        seconds_per_job,
        queue_model: QueueModel::Immediate,
    })
}

/// Rewrites a circuit so every gate lies in `isa`, preserving the unitary up
/// to global phase. Gates already in the ISA pass through untouched; the
/// rest expand via a fixed substitution table. Connectivity is assumed
/// all-to-all, so no routing or layout happens here.
pub fn transpile(circuit: &Circuit, isa: &BTreeSet<GateKind>) -> Result<Circuit> {
    for kind in REQUIRED_ISA {
        if !isa.contains(&kind) {
            return Err(Error::UnsupportedIsa(format!(
                "ISA must contain rz, sx, x and cx; missing '{}'",
                kind.name()
            )));
        }
    }
    let mut out = Circuit::new(circuit.num_qubits())?;
    for gate in circuit.gates() {
        if isa.contains(&gate.kind) {
            out.push(gate.clone())?;
            continue;
        }
        let angle = gate.angle;
        match gate.kind {
            GateKind::H => {
                push_h(&mut out, gate.targets[0])?;
            }
            GateKind::P => {
                // P(a) = e^{ia/2} RZ(a).
                out.rz(require_angle(angle)?, gate.targets[0])?;
            }
            GateKind::Rx => {
                // RX(a) = i RZ(pi/2) SX RZ(a + pi) SX RZ(pi/2), applied left
                // to right in list order.
                let q = gate.targets[0];
                let a = require_angle(angle)?;
                out.rz(std::f64::consts::FRAC_PI_2, q)?
                    .sx(q)?
                    .rz(a + std::f64::consts::PI, q)?
                    .sx(q)?
                    .rz(std::f64::consts::FRAC_PI_2, q)?;
            }
            GateKind::Ry => {
                // RY(a) = X SX RZ(a) SX exactly, applied left to right in
                // list order.
                let q = gate.targets[0];
                out.sx(q)?.rz(require_angle(angle)?, q)?.sx(q)?.x(q)?;
            }
            GateKind::Cz => {
                // CZ = (I ⊗ H) CX (I ⊗ H) with both H expanded in basis.
                let (a, b) = (gate.targets[0], gate.targets[1]);
                push_h(&mut out, b)?;
                out.cx(a, b)?;
                push_h(&mut out, b)?;
            }
            GateKind::Rz | GateKind::Sx | GateKind::X | GateKind::Cx => {
                unreachable!("required ISA gates pass through above")
            }
        }
    }
    Ok(out)
}

fn push_h(out: &mut Circuit, q: usize) -> Result<()> {
    // H = e^{i pi/4} RZ(pi/2) SX RZ(pi/2).
    out.rz(std::f64::consts::FRAC_PI_2, q)?.sx(q)?.rz(std::f64::consts::FRAC_PI_2, q)?;
    Ok(())
}

fn require_angle(angle: Option<f64>) -> Result<f64> {
    angle.ok_or_else(|| Error::InvalidArgument("rotation gate without an angle".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JobStatus {
    Queued,
    Running,
    Done,
    Failed,
}

/// All-zeros outcome count of one circuit at a fixed shot budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCount {
    pub zeros: u64,
    pub shots: u64,
}

/// One backend job. Status moves `Queued -> Running -> Done | Failed`;
/// `result` is present exactly when the job is `Done`, `error` exactly when
/// it is `Failed`. Timestamps are simulated-clock seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Job {
    pub id: String,
    pub circuits: Vec<Circuit>,
    pub shots: u64,
    pub status: JobStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Vec<ZeroCount>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Seeds the job's sample stream; circuits draw from it sequentially.
    pub seed: u64,
    /// Kernel-matrix position for one-job-per-entry submissions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entry: Option<(usize, usize)>,
    pub submitted_at: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub completed_at: Option<f64>,
}

/// Session manifest: which backend, which jobs in submission order, and the
/// accumulated clock totals. `quantum_seconds` always equals the number of
/// `Done` jobs times the profile's `seconds_per_job`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub backend: String,
    pub job_ids: Vec<String>,
    pub quantum_seconds: f64,
    pub wall_seconds: f64,
}

impl Session {
    pub fn new(id: impl Into<String>, backend: impl Into<String>) -> Session {
        Session {
            id: id.into(),
            backend: backend.into(),
            job_ids: Vec::new(),
            quantum_seconds: 0.0,
            wall_seconds: 0.0,
        }
    }
}

/// Simulated wall clock in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SimClock {
    seconds: f64,
}

impl SimClock {
    pub fn new() -> SimClock {
        SimClock::default()
    }

    /// A clock already advanced to `seconds`, e.g. a session's saved total.
    pub fn at(seconds: f64) -> SimClock {
        SimClock { seconds }
    }

    pub fn seconds(&self) -> f64 {
        self.seconds
    }

    pub fn advance(&mut self, delta: f64) {
        self.seconds += delta;
    }
}

/// Directory-backed job store: `jobs/<id>.json` per job plus `session.json`.
/// All writes go through a temp-file rename, so files are never observed
/// half-written.
#[derive(Debug, Clone)]
pub struct JobStore {
    dir: PathBuf,
}

impl JobStore {
    /// Opens (creating if needed) a store rooted at `dir`.
    pub fn open(dir: impl AsRef<Path>) -> Result<JobStore> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(dir.join("jobs"))?;
        Ok(JobStore { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn job_path(&self, id: &str) -> Result<PathBuf> {
        if id.is_empty() || !id.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'-') {
            return Err(Error::InvalidArgument(format!("malformed job id '{id}'")));
        }
        Ok(self.dir.join("jobs").join(format!("{id}.json")))
    }

    pub fn put_job(&self, job: &Job) -> Result<()> {
        write_atomic(&self.job_path(&job.id)?, &serde_json::to_string_pretty(job)?)
    }

    pub fn get_job(&self, id: &str) -> Result<Job> {
        let path = self.job_path(id)?;
        let text = fs::read_to_string(&path).map_err(|e| {
            if e.kind() == std::io::ErrorKind::NotFound {
                Error::UnknownJob(id.to_string())
            } else {
                Error::Io(e)
            }
        })?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Ids of every stored job, sorted; zero-padded ids sort in submission
    /// order.
    pub fn job_ids(&self) -> Result<Vec<String>> {
        let mut ids = Vec::new();
        for entry in fs::read_dir(self.dir.join("jobs"))? {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) == Some("json") {
                if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                    ids.push(stem.to_string());
                }
            }
        }
        ids.sort();
        Ok(ids)
    }

    pub fn save_session(&self, session: &Session) -> Result<()> {
        write_atomic(&self.dir.join("session.json"), &serde_json::to_string_pretty(session)?)
    }

    pub fn load_session(&self) -> Result<Session> {
        let path = self.dir.join("session.json");
        let text = fs::read_to_string(&path).map_err(|e| {
            if e.kind() == std::io::ErrorKind::NotFound {
                Error::Config(format!("no session manifest in store '{}'", self.dir.display()))
            } else {
                Error::Io(e)
            }
        })?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn has_session(&self) -> bool {
        self.dir.join("session.json").exists()
    }
}

fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Enqueues one job. Every gate must already lie in the profile's ISA and
/// the circuit count must respect `max_circuits_per_job`; violations reject
/// the job before anything is written.
pub fn submit_job(
    circuits: Vec<Circuit>,
    profile: &BackendProfile,
    shots: u64,
    seed: u64,
    entry: Option<(usize, usize)>,
    store: &JobStore,
    session: &mut Session,
) -> Result<String> {
    profile.validate()?;
    check_session_backend(session, profile)?;
    if circuits.is_empty() {
        return Err(Error::InvalidArgument("job with no circuits".into()));
    }
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be >= 1".into()));
    }
    if circuits.len() > profile.max_circuits_per_job {
        return Err(Error::MaxJobSize {
            requested: circuits.len(),
            limit: profile.max_circuits_per_job,
        });
    }
    for circuit in &circuits {
        check_isa(circuit, profile)?;
    }
    let id = next_job_id(session);
    let job = Job {
        id: id.clone(),
        circuits,
        shots,
        status: JobStatus::Queued,
        result: None,
        error: None,
        seed,
        entry,
        submitted_at: session.wall_seconds,
        completed_at: None,
    };
    store.put_job(&job)?;
    session.job_ids.push(id.clone());
    store.save_session(session)?;
    Ok(id)
}

/// Enqueues one single-circuit job per kernel entry, seeded per position
/// from `base_seed`, returning job ids in pair order. All circuits are
/// validated against the ISA before the first job is written, so a rejected
/// submission enqueues nothing.
pub fn submit_kernel_jobs(
    pairs: &[(usize, usize, Circuit)],
    profile: &BackendProfile,
    shots: u64,
    base_seed: u64,
    store: &JobStore,
    session: &mut Session,
) -> Result<Vec<String>> {
    profile.validate()?;
    check_session_backend(session, profile)?;
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be >= 1".into()));
    }
    for (_, _, circuit) in pairs {
        check_isa(circuit, profile)?;
    }
    let mut ids = Vec::with_capacity(pairs.len());
    for (i, j, circuit) in pairs {
        let id = next_job_id(session);
        let job = Job {
            id: id.clone(),
            circuits: vec![circuit.clone()],
            shots,
            status: JobStatus::Queued,
            result: None,
            error: None,
            seed: derive_entry_seed(base_seed, *i, *j),
            entry: Some((*i, *j)),
            submitted_at: session.wall_seconds,
            completed_at: None,
        };
        store.put_job(&job)?;
        session.job_ids.push(id.clone());
        ids.push(id);
    }
    if !ids.is_empty() {
        store.save_session(session)?;
    }
    Ok(ids)
}

fn next_job_id(session: &Session) -> String {
    format!("job-{:05}", session.job_ids.len())
}

fn check_session_backend(session: &Session, profile: &BackendProfile) -> Result<()> {
    if session.backend != profile.name {
        return Err(Error::Config(format!(
            "session '{}' belongs to backend '{}', not '{}'",
            session.id, session.backend, profile.name
        )));
    }
    Ok(())
}

fn check_isa(circuit: &Circuit, profile: &BackendProfile) -> Result<()> {
    for gate in circuit.gates() {
        if !profile.basis_gates.contains(&gate.kind) {
            return Err(Error::IsaViolation(format!(
                "gate '{}' is outside the '{}' ISA; transpile before submitting",
                gate.kind.name(),
                profile.name
            )));
        }
    }
    Ok(())
}

/// Executes every `Queued` job in submission order and returns how many
/// finished `Done`. A job that fails to simulate is marked `Failed` with a
/// reason and processing continues. The clock gains the queue delay plus
/// `seconds_per_job` per attempted job; the session's quantum seconds count
/// `Done` jobs only and are recomputed from the store, so a rerun after an
/// interrupted pass leaves totals exact.
pub fn run_pending(
    store: &JobStore,
    profile: &BackendProfile,
    clock: &mut SimClock,
) -> Result<usize> {
    profile.validate()?;
    let mut session = store.load_session()?;
    check_session_backend(&session, profile)?;

    let mut done_total = 0usize;
    for id in &session.job_ids {
        if store.get_job(id)?.status == JobStatus::Done {
            done_total += 1;
        }
    }

    let mut completed = 0usize;
    for id in session.job_ids.clone() {
        let mut job = store.get_job(&id)?;
        if job.status != JobStatus::Queued {
            continue;
        }
        job.status = JobStatus::Running;
        store.put_job(&job)?;

        clock.advance(profile.queue_model.delay_seconds(profile.seconds_per_job));
        clock.advance(profile.seconds_per_job);
        match execute_job(&job) {
            Ok(counts) => {
                job.status = JobStatus::Done;
                job.result = Some(counts);
                job.completed_at = Some(clock.seconds());
                done_total += 1;
                completed += 1;
            }
            Err(e) => {
                job.status = JobStatus::Failed;
                job.error = Some(e.to_string());
                job.completed_at = Some(clock.seconds());
            }
        }
        store.put_job(&job)?;
        session.quantum_seconds = done_total as f64 * profile.seconds_per_job;
        session.wall_seconds = clock.seconds();
        store.save_session(&session)?;
    }
    Ok(completed)
}

fn execute_job(job: &Job) -> Result<Vec<ZeroCount>> {
    let mut rng = ChaCha8Rng::seed_from_u64(job.seed);
    let mut counts = Vec::with_capacity(job.circuits.len());
    for circuit in &job.circuits {
        let state = Statevector::zero_state(circuit.num_qubits())?.apply_circuit(circuit)?;
        let zeros = sample_all_zeros_count_with(&state, job.shots, &mut rng)?;
        counts.push(ZeroCount { zeros, shots: job.shots });
    }
    Ok(counts)
}

/// Fidelities `zeros/shots` of finished kernel-entry jobs, keyed by matrix
/// position. Any referenced job that is not `Done` makes the whole call fail
/// with the offending ids, so partial results are never mistaken for a
/// complete matrix.
pub fn collect_kernel_results(
    job_ids: &[String],
    store: &JobStore,
) -> Result<HashMap<(usize, usize), f64>> {
    let mut not_done = Vec::new();
    let mut finished = Vec::with_capacity(job_ids.len());
    for id in job_ids {
        let job = store.get_job(id)?;
        if job.status == JobStatus::Done {
            finished.push(job);
        } else {
            not_done.push(job.id);
        }
    }
    if !not_done.is_empty() {
        return Err(Error::IncompleteSession { ids: not_done });
    }
    let mut entries = HashMap::with_capacity(finished.len());
    for job in finished {
        let (i, j) = job.entry.ok_or_else(|| {
            Error::InvalidArgument(format!("job '{}' carries no kernel-entry position", job.id))
        })?;
        let result = job.result.as_ref().ok_or_else(|| {
            Error::Config(format!("job '{}' is done but stores no result", job.id))
        })?;
        if result.len() != 1 {
            return Err(Error::InvalidArgument(format!(
                "kernel-entry job '{}' stores {} circuit results, expected 1",
                job.id,
                result.len()
            )));
        }
        let count = result[0];
        if entries.insert((i, j), count.zeros as f64 / count.shots as f64).is_some() {
            return Err(Error::InvalidArgument(format!(
                "duplicate kernel entry ({i}, {j}) among collected jobs"
            )));
        }
    }
    Ok(entries)
}

/// Simulated quantum seconds a batch of jobs will consume.
pub fn projected_quantum_seconds(num_jobs: usize, profile: &BackendProfile) -> f64 {
    num_jobs as f64 * profile.seconds_per_job
}

/// Advisory monthly quantum-time budget (400 minutes); nothing enforces it,
/// callers may warn when a projection exceeds it.
pub const DEFAULT_MONTHLY_BUDGET_SECONDS: f64 = 400.0 * 60.0;
