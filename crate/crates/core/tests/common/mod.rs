#![allow(dead_code)]

use std::path::{Path, PathBuf};

use cgoscope_core::frontend::{parse_source, SyntaxFacts};
use cgoscope_core::metrics::{aggregate_corpus, emit_report, scan_corpus, ReportFormat};
use cgoscope_core::patterns::pattern_frequencies;
use cgoscope_core::ptrcheck::{analyze_module, CheckDecision, CheckReport};

pub fn fixture_dir(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(sub)
}

pub fn load(sub: &str, name: &str) -> SyntaxFacts {
    let path = fixture_dir(sub).join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let facts = parse_source(name, &text);
    assert!(facts.parse_ok, "{name}: {:?}", facts.parse_errors);
    facts
}

pub fn listing_report(name: &str) -> CheckReport {
    analyze_module(name, &[load("listings", name)])
}

pub fn conservative(report: &CheckReport) -> Vec<&CheckDecision> {
    report.decisions.iter().filter(|d| d.conservative_insert).collect()
}

/// Full corpus report over `fixtures/corpus`, as the `scan --corpus` command builds it.
pub fn corpus_report(format: ReportFormat) -> Vec<u8> {
    let scans = scan_corpus(&fixture_dir("corpus")).expect("corpus scans");
    let metrics: Vec<_> = scans.iter().map(|s| s.metrics.clone()).collect();
    let summary = aggregate_corpus(&metrics).unwrap();
    let files: Vec<_> = scans.iter().flat_map(|s| s.pattern_reports()).collect();
    let freqs = pattern_frequencies(&files).unwrap();
    let checks: Vec<_> = scans.iter().flat_map(|s| s.check_reports.iter().cloned()).collect();
    emit_report(&summary, &freqs, &checks, format).unwrap()
}
