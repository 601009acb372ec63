use std::path::Path;
use std::process::Command;

use cgoscope_core::corpus::{clone_repositories, CloneStatus, FilterVerdict, RepoRecord};
use chrono::NaiveDate;

fn git(dir: &Path, args: &[&str]) {
    let out = Command::new("git").args(args).current_dir(dir).output().expect("git runs");
    assert!(out.status.success(), "git {args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn record(name: &str, url: String) -> RepoRecord {
    RepoRecord::new(name, &url, 1, false, NaiveDate::from_ymd_opt(2024, 1, 1).unwrap())
}

#[test]
fn clones_local_repositories_and_reports_failures() {
    let tmp = tempfile::tempdir().unwrap();
    let work = tmp.path().join("work");
    std::fs::create_dir(&work).unwrap();
    git(&work, &["init", "-q"]);
    std::fs::write(work.join("main.go"), "package main\n\nfunc main() {}\n").unwrap();
    git(&work, &["add", "."]);
    git(&work, &["-c", "user.name=t", "-c", "user.email=t@example.invalid", "commit", "-q", "-m", "init"]);
    git(tmp.path(), &["clone", "-q", "--bare", "work", "origin.git"]);
    let url = format!("file://{}", tmp.path().join("origin.git").display());

    let mut dropped = record("skip/me", url.clone());
    dropped.filter_verdict = Some(FilterVerdict::DroppedArchived);
    let records = vec![
        record("acme/one", url.clone()),
        dropped,
        record("acme/missing", format!("file://{}", tmp.path().join("nope.git").display())),
        record("acme/two", url),
    ];
    let dest = tmp.path().join("clones");
    let results = clone_repositories(&records, &dest, 3);
    let names: Vec<&str> = results.iter().map(|(r, _)| r.name.as_str()).collect();
    assert_eq!(names, ["acme/one", "acme/missing", "acme/two"]);
    assert_eq!(results[0].1, CloneStatus::Cloned);
    assert!(matches!(results[1].1, CloneStatus::Failed { .. }));
    assert!(results[1].0.local_path.is_none());
    assert_eq!(results[2].1, CloneStatus::Cloned);
    assert!(dest.join("acme__one/main.go").is_file());
    assert_eq!(results[0].0.local_path.as_deref(), Some(dest.join("acme__one").as_path()));

    let again = clone_repositories(&records[..1], &dest, 1);
    assert_eq!(again[0].1, CloneStatus::AlreadyPresent);
}
