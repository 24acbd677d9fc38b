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

//! Crate-wide error type and result alias.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violates an operation's contract.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Structural problem: dimension mismatch, out-of-range qubit index, bad spec.
    #[error("configuration error: {0}")]
    Config(String),

    /// Request exceeds a hard resource guard (e.g. dense unitary of a large circuit).
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// The target ISA is missing gates required for universal rewriting.
    #[error("unsupported ISA: {0}")]
    UnsupportedIsa(String),

    /// A submitted circuit contains a gate outside the backend's ISA.
    #[error("ISA violation: {0}")]
    IsaViolation(String),

    /// A single job carries more circuits than the backend permits.
    #[error("job of {requested} circuits exceeds backend limit of {limit}")]
    MaxJobSize { requested: usize, limit: usize },

    /// Results were requested while some jobs are not Done.
    #[error("incomplete session: jobs not done: {}", ids.join(", "))]
    IncompleteSession { ids: Vec<String> },

    #[error("unknown job: {0}")]
    UnknownJob(String),

    /// Provenance hashes of a kernel matrix and a model disagree.
    #[error("spec hash mismatch: expected {expected}, got {actual}")]
    SpecHashMismatch { expected: String, actual: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    /// Malformed on-disk content (CSV fields, serialized angles, labels).
    #[error("parse error: {0}")]
    Parse(String),
}
