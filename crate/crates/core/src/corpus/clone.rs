use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::repo::{FilterVerdict, RepoRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CloneFailure {
    Network,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CloneStatus {
    Cloned,
    AlreadyPresent,
    Failed { reason: CloneFailure, message: String },
}

/// Directory name for a repository, `owner/name` becoming `owner__name`.
pub fn clone_dir_name(name: &str) -> String {
    name.trim_matches('/')
        .replace('/', "__")
        .chars()
        .map(|c| if c.is_alphanumeric() || matches!(c, '_' | '-' | '.') { c } else { '_' })
        .collect()
}

const NETWORK_MARKERS: &[&str] = &[
    "could not resolve host",
    "unable to access",
    "could not read from remote repository",
    "does not appear to be a git repository",
    "connection refused",
    "connection timed out",
    "repository not found",
    "network is unreachable",
];

fn classify_failure(stderr: &str) -> CloneFailure {
    let lower = stderr.to_lowercase();
    if NETWORK_MARKERS.iter().any(|m| lower.contains(m)) {
        CloneFailure::Network
    } else {
        CloneFailure::Other
    }
}

fn clone_one(record: &RepoRecord, target: &Path) -> CloneStatus {
    if target.join(".git").exists() || target.join("HEAD").is_file() {
        return CloneStatus::AlreadyPresent;
    }
    let output = Command::new("git")
        .args(["clone", "--quiet", "--depth", "1", "--", &record.url])
        .arg(target)
        .env("GIT_TERMINAL_PROMPT", "0")
        .stdin(Stdio::null())
        .output();
    match output {
        Ok(out) if out.status.success() => CloneStatus::Cloned,
        Ok(out) => {
            let message = String::from_utf8_lossy(&out.stderr).trim().to_string();
            let _ = std::fs::remove_dir_all(target);
            CloneStatus::Failed { reason: classify_failure(&message), message }
        }
        Err(e) => CloneStatus::Failed { reason: CloneFailure::Other, message: format!("cannot run git: {e}") },
    }
}

/// Clones every kept (or unfiltered) record into `dest` with at most `parallelism` workers.
/// Output order follows input order; failures never stop the batch.
pub fn clone_repositories(records: &[RepoRecord], dest: &Path, parallelism: usize) -> Vec<(RepoRecord, CloneStatus)> {
    let todo: Vec<&RepoRecord> =
        records.iter().filter(|r| matches!(r.filter_verdict, None | Some(FilterVerdict::Kept))).collect();
    let results: Mutex<Vec<Option<(RepoRecord, CloneStatus)>>> = Mutex::new(vec![None; todo.len()]);
    let next = AtomicUsize::new(0);
    let workers = parallelism.clamp(1, todo.len().max(1));
    if let Err(e) = std::fs::create_dir_all(dest) {
        return todo
            .into_iter()
            .map(|r| {
                let status =
                    CloneStatus::Failed { reason: CloneFailure::Other, message: format!("{}: {e}", dest.display()) };
                (r.clone(), status)
            })
            .collect();
    }
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(record) = todo.get(i) else { break };
                let target: PathBuf = dest.join(clone_dir_name(&record.name));
                let status = clone_one(record, &target);
                let mut record = (*record).clone();
                if matches!(status, CloneStatus::Cloned | CloneStatus::AlreadyPresent) {
                    record.local_path = Some(target);
                }
                results.lock().expect("no worker panics while holding the lock")[i] = Some((record, status));
            });
        }
    });
    results.into_inner().expect("workers joined").into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dir_names_are_flat() {
        assert_eq!(clone_dir_name("ceph/go-ceph"), "ceph__go-ceph");
        assert_eq!(clone_dir_name("a b/c"), "a_b__c");
    }

    #[test]
    fn failure_classes() {
        assert_eq!(
            classify_failure("fatal: unable to access 'https://x/': Could not resolve host: x"),
            CloneFailure::Network
        );
        assert_eq!(classify_failure("fatal: destination path exists"), CloneFailure::Other);
    }
}
