use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use crate::corpus::is_excluded;
use crate::error::{Error, Result};
use crate::features::{collect_features_with, detect_cgo_import, CgoFeature, CgoPreamble, FeatureKind};
use crate::frontend::{parse_bytes, ParseDiagnostic, SyntaxFacts};
use crate::patterns::{classify_file, round2, FilePatternReport};
use crate::ptrcheck::{analyze_module, CheckReport};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ProjectMetrics {
    pub repo: String,
    pub uses_cgo: bool,
    /// Go-to-C calls, cgo helper calls included.
    pub call_sites: usize,
    pub c_type_conversions: usize,
    pub exported_funcs: usize,
    pub preamble_directives: usize,
    pub cgo_files: usize,
    pub cgo_packages: usize,
    pub go_files: usize,
    pub go_packages: usize,
    pub c_files: usize,
    /// Non-blank Go and C lines.
    pub loc_total: usize,
    /// Non-blank lines carrying at least one cgo feature.
    pub loc_cgo: usize,
    pub loc_c: usize,
    pub p_cgo: f64,
    pub p_c: f64,
}

impl ProjectMetrics {
    pub fn total_files(&self) -> usize {
        self.go_files + self.c_files
    }

    fn finish(&mut self) {
        self.uses_cgo = self.cgo_files > 0;
        self.p_cgo = percent(self.loc_cgo, self.loc_total);
        self.p_c = percent(self.loc_c, self.loc_total);
    }
}

fn percent(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        round2(100.0 * part as f64 / whole as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileAnalysis {
    pub rel_path: PathBuf,
    pub package: String,
    pub facts: SyntaxFacts,
    pub preamble: Option<CgoPreamble>,
    pub features: Vec<CgoFeature>,
    pub patterns: Option<FilePatternReport>,
}

impl FileAnalysis {
    pub fn from_facts(rel_path: PathBuf, facts: SyntaxFacts) -> Self {
        let preamble = detect_cgo_import(&facts);
        let features = preamble.as_ref().map(|p| collect_features_with(&facts, p)).unwrap_or_default();
        let patterns = preamble.as_ref().map(|p| classify_file(&facts, &features, p));
        FileAnalysis { rel_path, package: facts.package_name.clone(), facts, preamble, features, patterns }
    }

    pub fn uses_cgo(&self) -> bool {
        self.preamble.is_some()
    }

    pub fn dir(&self) -> PathBuf {
        self.rel_path.parent().map(Path::to_path_buf).unwrap_or_default()
    }

    /// Lines carrying a cgo feature; export features count at their directive line.
    pub fn cgo_lines(&self) -> BTreeSet<u32> {
        let mut lines: BTreeSet<u32> =
            self.features.iter().filter(|f| f.kind != FeatureKind::ExportedFunc).map(|f| f.location.line).collect();
        let exported: BTreeSet<_> =
            self.features.iter().filter(|f| f.kind == FeatureKind::ExportedFunc).map(|f| f.location).collect();
        for d in &self.facts.func_decls {
            if exported.contains(&d.location) {
                if let Some(g) = d.doc.and_then(|g| self.facts.comment_groups.get(g)) {
                    if let Some(c) = g.comments.iter().find(|c| c.raw.starts_with("//export ")) {
                        lines.insert(c.start.line);
                    }
                }
            }
        }
        lines
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseFailure {
    pub path: PathBuf,
    pub errors: Vec<ParseDiagnostic>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectScan {
    pub metrics: ProjectMetrics,
    pub files: Vec<FileAnalysis>,
    pub check_reports: Vec<CheckReport>,
    pub parse_failures: Vec<ParseFailure>,
}

impl ProjectScan {
    pub fn pattern_reports(&self) -> Vec<FilePatternReport> {
        self.files.iter().filter_map(|f| f.patterns.clone()).collect()
    }

    pub fn features(&self) -> impl Iterator<Item = &CgoFeature> {
        self.files.iter().flat_map(|f| f.features.iter())
    }
}

fn non_blank_lines(text: &str) -> usize {
    text.lines().filter(|l| !l.trim().is_empty()).count()
}

fn is_hidden(entry: &walkdir::DirEntry) -> bool {
    entry.depth() > 0 && entry.file_name().to_str().is_some_and(|s| s.starts_with('.'))
}

enum SourceKind {
    Go,
    C,
}

fn source_kind(path: &Path) -> Option<SourceKind> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("go") => Some(SourceKind::Go),
        Some("c" | "h") => Some(SourceKind::C),
        _ => None,
    }
}

/// Analyzes every Go and C source under `root` as one project named `repo`.
pub fn scan_project(root: &Path, repo: &str) -> Result<ProjectScan> {
    let mut go_paths = Vec::new();
    let mut c_paths = Vec::new();
    for entry in WalkDir::new(root).follow_links(false).sort_by_file_name().into_iter().filter_entry(|e| !is_hidden(e))
    {
        let entry = entry.map_err(|e| {
            let path = e.path().map(Path::to_path_buf).unwrap_or_else(|| root.to_path_buf());
            Error::io(path, e.into_io_error().unwrap_or_else(|| std::io::Error::other("walk error")))
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        let rel = entry.path().strip_prefix(root).unwrap_or(entry.path()).to_path_buf();
        match source_kind(&rel) {
            Some(SourceKind::Go) => go_paths.push(rel),
            Some(SourceKind::C) if !is_excluded(&rel, "") => c_paths.push(rel),
            _ => {}
        }
    }

    let parsed: Vec<(PathBuf, SyntaxFacts, usize)> = go_paths
        .par_iter()
        .map(|rel| {
            let full = root.join(rel);
            let bytes = std::fs::read(&full).map_err(|e| Error::io(&full, e))?;
            let facts = parse_bytes(rel.clone(), &bytes);
            let loc = non_blank_lines(&String::from_utf8_lossy(&bytes));
            Ok((rel.clone(), facts, loc))
        })
        .collect::<Result<_>>()?;

    let mut metrics = ProjectMetrics { repo: repo.to_string(), ..ProjectMetrics::default() };
    let mut failures = Vec::new();
    let mut kept = Vec::new();
    for (rel, facts, loc) in parsed {
        if is_excluded(&rel, &facts.package_name) {
            continue;
        }
        metrics.go_files += 1;
        metrics.loc_total += loc;
        if facts.parse_ok {
            kept.push((rel, facts));
        } else {
            failures.push(ParseFailure { path: rel, errors: facts.parse_errors });
        }
    }

    for rel in &c_paths {
        let full = root.join(rel);
        let bytes = std::fs::read(&full).map_err(|e| Error::io(&full, e))?;
        let loc = non_blank_lines(&String::from_utf8_lossy(&bytes));
        metrics.c_files += 1;
        metrics.loc_c += loc;
        metrics.loc_total += loc;
    }

    let files: Vec<FileAnalysis> =
        kept.into_par_iter().map(|(rel, facts)| FileAnalysis::from_facts(rel, facts)).collect();

    let mut packages: BTreeMap<(PathBuf, String), Vec<usize>> = BTreeMap::new();
    for (i, f) in files.iter().enumerate() {
        packages.entry((f.dir(), f.package.clone())).or_default().push(i);
    }
    metrics.go_packages = packages.len();

    let mut check_reports = Vec::new();
    for ((dir, _), members) in &packages {
        if !members.iter().any(|&i| files[i].uses_cgo()) {
            continue;
        }
        metrics.cgo_packages += 1;
        let module = module_path(repo, dir);
        let facts: Vec<SyntaxFacts> = members.iter().map(|&i| files[i].facts.clone()).collect();
        check_reports.push(analyze_module(&module, &facts));
    }
    check_reports.sort_by(|a, b| a.module_path.cmp(&b.module_path));

    for f in files.iter().filter(|f| f.uses_cgo()) {
        metrics.cgo_files += 1;
        metrics.loc_cgo += f.cgo_lines().len();
        for feature in &f.features {
            match feature.kind {
                FeatureKind::GoToCCall => metrics.call_sites += 1,
                FeatureKind::CTypeConversion => metrics.c_type_conversions += 1,
                FeatureKind::ExportedFunc => metrics.exported_funcs += 1,
                FeatureKind::PreambleDirective => metrics.preamble_directives += 1,
                FeatureKind::CgoImport => {}
            }
        }
    }
    metrics.finish();
    Ok(ProjectScan { metrics, files, check_reports, parse_failures: failures })
}

/// `repo/dir` with forward slashes; the repository root maps to `repo`.
pub fn module_path(repo: &str, dir: &Path) -> String {
    let rel = dir.to_string_lossy().replace('\\', "/");
    let rel = rel.trim_matches('/');
    if rel.is_empty() {
        repo.to_string()
    } else {
        format!("{repo}/{rel}")
    }
}

/// Scans every immediate subdirectory of `root` as its own project, in name order.
pub fn scan_corpus(root: &Path) -> Result<Vec<ProjectScan>> {
    let mut dirs: Vec<PathBuf> = std::fs::read_dir(root)
        .map_err(|e| Error::io(root, e))?
        .filter_map(|e| e.ok())
        .filter(|e| e.file_type().is_ok_and(|t| t.is_dir()))
        .filter(|e| !e.file_name().to_string_lossy().starts_with('.'))
        .map(|e| e.path())
        .collect();
    dirs.sort();
    dirs.iter()
        .map(|d| scan_project(d, &d.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()))
        .collect()
}
