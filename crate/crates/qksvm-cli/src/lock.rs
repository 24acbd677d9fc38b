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

//! Single-process guard for a session directory.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use qksvm_core::error::{Error, Result};

/// Exclusive lock file inside a session directory. Created with
/// `create_new`, removed on drop. Concurrent invocations on the same
/// directory fail fast instead of corrupting the job store.
pub struct SessionLock {
    path: PathBuf,
}

impl SessionLock {
    pub fn acquire(dir: &Path) -> Result<SessionLock> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join("session.lock");
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut file) => {
                let _ = writeln!(file, "{}", std::process::id());
                Ok(SessionLock { path })
            }
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                Err(Error::InvalidArgument(format!(
                    "session directory is locked by another invocation \
                     (remove {} if that process is gone)",
                    path.display()
                )))
            }
            Err(e) => Err(e.into()),
        }
    }
}

impl Drop for SessionLock {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.path);
    }
}
