//! File-level usage pattern labels.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::cnames;
use crate::error::Error;
use crate::features::{classify_c_selector_call, CallClass, CgoFeature, CgoPreamble, DirectiveKind, FeatureKind};
use crate::frontend::{Callee, ExprKind, ExprRef, Pos, SelectorRole, SyntaxFacts, TypeExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PatternLabel {
    CType,
    CVar,
    Export,
    Malloc,
    Unsafe,
    TypCast,
    StdCast,
    #[serde(rename = "LDFLAG")]
    LdFlag,
    #[serde(rename = "CFLAG")]
    CFlag,
    #[serde(rename = "CPPFLAG")]
    CppFlag,
    PkgConfig,
    #[serde(rename = "CXXFLAG")]
    CxxFlag,
    Wrapper,
    Embedded,
    None,
}

impl PatternLabel {
    pub const ALL: [PatternLabel; 15] = [
        PatternLabel::CType,
        PatternLabel::CVar,
        PatternLabel::Export,
        PatternLabel::Malloc,
        PatternLabel::Unsafe,
        PatternLabel::TypCast,
        PatternLabel::StdCast,
        PatternLabel::LdFlag,
        PatternLabel::CFlag,
        PatternLabel::CppFlag,
        PatternLabel::PkgConfig,
        PatternLabel::CxxFlag,
        PatternLabel::Wrapper,
        PatternLabel::Embedded,
        PatternLabel::None,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PatternLabel::CType => "CType",
            PatternLabel::CVar => "CVar",
            PatternLabel::Export => "Export",
            PatternLabel::Malloc => "Malloc",
            PatternLabel::Unsafe => "Unsafe",
            PatternLabel::TypCast => "TypCast",
            PatternLabel::StdCast => "StdCast",
            PatternLabel::LdFlag => "LDFLAG",
            PatternLabel::CFlag => "CFLAG",
            PatternLabel::CppFlag => "CPPFLAG",
            PatternLabel::PkgConfig => "PkgConfig",
            PatternLabel::CxxFlag => "CXXFLAG",
            PatternLabel::Wrapper => "Wrapper",
            PatternLabel::Embedded => "Embedded",
            PatternLabel::None => "None",
        }
    }

    /// Categories of the label; `Unsafe` and `TypCast` belong to two.
    pub fn categories(self) -> &'static [&'static str] {
        match self {
            PatternLabel::CType | PatternLabel::CVar | PatternLabel::Export | PatternLabel::Malloc => {
                &["Communication"]
            }
            PatternLabel::Unsafe => &["Communication", "Performance"],
            PatternLabel::TypCast => &["Performance", "Type Casting"],
            PatternLabel::StdCast => &["Type Casting"],
            PatternLabel::LdFlag
            | PatternLabel::CFlag
            | PatternLabel::CppFlag
            | PatternLabel::PkgConfig
            | PatternLabel::CxxFlag => &["Build"],
            PatternLabel::Wrapper | PatternLabel::Embedded => &["Productivity"],
            PatternLabel::None => &["Other"],
        }
    }

    fn for_directive(kind: DirectiveKind) -> PatternLabel {
        match kind {
            DirectiveKind::CFlags => PatternLabel::CFlag,
            DirectiveKind::CppFlags => PatternLabel::CppFlag,
            DirectiveKind::CxxFlags => PatternLabel::CxxFlag,
            DirectiveKind::LdFlags => PatternLabel::LdFlag,
            DirectiveKind::PkgConfig => PatternLabel::PkgConfig,
        }
    }
}

impl fmt::Display for PatternLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PatternLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        PatternLabel::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Invalid(format!("unknown pattern label `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub label: PatternLabel,
    pub location: Pos,
    pub excerpt: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilePatternReport {
    pub file_path: PathBuf,
    pub labels: BTreeSet<PatternLabel>,
    pub evidence: Vec<Evidence>,
}

/// Which detectors run. `None` is always derived from the others.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectorConfig {
    pub enabled: BTreeSet<PatternLabel>,
    /// Upper bound on statements in a wrapper body.
    pub wrapper_max_statements: usize,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            enabled: PatternLabel::ALL.into_iter().filter(|l| *l != PatternLabel::None).collect(),
            wrapper_max_statements: 8,
        }
    }
}

impl DetectorConfig {
    pub fn without(mut self, label: PatternLabel) -> Self {
        self.enabled.remove(&label);
        self
    }
}

struct Collector<'a> {
    facts: &'a SyntaxFacts,
    config: &'a DetectorConfig,
    evidence: Vec<Evidence>,
}

impl Collector<'_> {
    fn add(&mut self, label: PatternLabel, location: Pos, excerpt: String) {
        if self.config.enabled.contains(&label) {
            self.evidence.push(Evidence { label, location, excerpt });
        }
    }

    fn line(&self, pos: Pos) -> String {
        self.facts.line_text(pos.line).trim().to_string()
    }
}

fn squash(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Labels one cgo file with the default detectors.
pub fn classify_file(facts: &SyntaxFacts, features: &[CgoFeature], preamble: &CgoPreamble) -> FilePatternReport {
    classify_file_with(facts, features, preamble, &DetectorConfig::default())
}

pub fn classify_file_with(
    facts: &SyntaxFacts,
    features: &[CgoFeature],
    preamble: &CgoPreamble,
    config: &DetectorConfig,
) -> FilePatternReport {
    let mut c = Collector { facts, config, evidence: Vec::new() };

    for s in &facts.selectors {
        if s.base == "C" {
            match s.role {
                SelectorRole::Type => c.add(PatternLabel::CType, s.location, c.line(s.location)),
                SelectorRole::Value if !cnames::is_cgo_builtin(&s.member) => {
                    c.add(PatternLabel::CVar, s.location, c.line(s.location))
                }
                _ => {}
            }
        } else if s.base == "unsafe" {
            c.add(PatternLabel::Unsafe, s.location, c.line(s.location));
        }
    }

    for f in features {
        match f.kind {
            FeatureKind::CTypeConversion => c.add(PatternLabel::CType, f.location, c.line(f.location)),
            FeatureKind::ExportedFunc => {
                let line = facts
                    .func_decls
                    .iter()
                    .find(|d| d.location == f.location)
                    .and_then(|d| d.doc)
                    .and_then(|g| facts.comment_groups.get(g))
                    .and_then(|g| g.comments.iter().find(|cm| cm.raw.starts_with("//export ")))
                    .map(|cm| (cm.start, cm.raw.trim().to_string()));
                if let Some((at, raw)) = line {
                    c.add(PatternLabel::Export, at, raw);
                }
            }
            _ => {}
        }
    }

    let allocates = facts
        .calls
        .iter()
        .any(|call| matches!(call.callee.c_member(), Some("malloc" | "calloc" | "CString" | "CBytes")));
    for call in &facts.calls {
        let Some(member) = call.callee.c_member() else { continue };
        if classify_c_selector_call(call) != CallClass::GoToCCall {
            continue;
        }
        let text = squash(&call.text);
        match member {
            "malloc" | "calloc" => c.add(PatternLabel::Malloc, call.location, text.clone()),
            "free" if allocates => c.add(PatternLabel::Malloc, call.location, text.clone()),
            _ => {}
        }
        if cnames::STD_CAST_FUNCS.contains(&member) {
            c.add(PatternLabel::StdCast, call.location, text);
        }
    }

    for conv in &facts.conversions {
        if let ExprKind::Conversion(target, inner) = &conv.kind {
            if matches!(target, TypeExpr::Pointer(_)) && inner.unsafe_pointer_operand().is_some() {
                c.add(PatternLabel::TypCast, conv.location, squash(&conv.text));
            }
        }
    }

    for d in &preamble.directives {
        let line = preamble.file_line(d.line);
        c.add(PatternLabel::for_directive(d.kind), Pos::new(line, 1), d.render());
    }
    for f in &preamble.c_functions {
        let line = preamble.file_line(f.line);
        c.add(PatternLabel::Embedded, Pos::new(line, 1), f.header.clone());
    }

    for (idx, f) in facts.func_decls.iter().enumerate() {
        if is_wrapper(facts, idx, config.wrapper_max_statements) {
            let body: Vec<&str> = (f.location.line..=f.end_line).map(|l| facts.line_text(l)).collect();
            c.add(PatternLabel::Wrapper, f.location, squash(&body.join("\n")));
        }
    }

    let mut evidence = c.evidence;
    evidence.sort_by(|a, b| (a.label, a.location, &a.excerpt).cmp(&(b.label, b.location, &b.excerpt)));
    evidence.dedup();
    let mut labels: BTreeSet<PatternLabel> = evidence.iter().map(|e| e.label).collect();
    if labels.is_empty() {
        labels.insert(PatternLabel::None);
    }
    FilePatternReport { file_path: facts.file_path.clone(), labels, evidence }
}

fn is_plain_c_call(callee: &Callee) -> bool {
    match callee.c_member() {
        Some(m) => !cnames::is_c_type_name(m) && !cnames::is_cgo_builtin(m) && !m.starts_with("sizeof_"),
        None => false,
    }
}

fn is_wrapper(facts: &SyntaxFacts, idx: usize, max_statements: usize) -> bool {
    let f = &facts.func_decls[idx];
    if f.body_scope.is_none() || f.statement_count == 0 || f.statement_count > max_statements {
        return false;
    }
    let c_calls: Vec<_> =
        facts.calls.iter().filter(|call| call.func == Some(idx) && is_plain_c_call(&call.callee)).collect();
    let [call] = c_calls.as_slice() else { return false };
    let converted_arg = call.args.iter().any(|a| matches!(a.kind, ExprKind::Conversion(..) | ExprKind::Call(..)));
    let converted_result = f.return_values.iter().any(ExprRef::is_conversion_or_call);
    converted_result || f.writes_through_param || converted_arg
}

fn evidence_re(label: PatternLabel) -> Option<&'static Regex> {
    static TABLE: OnceLock<BTreeMap<PatternLabel, Regex>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let rules = [
            (PatternLabel::CType, r"\bC\.[A-Za-z_]\w*"),
            (PatternLabel::CVar, r"\bC\.[A-Za-z_]\w*"),
            (PatternLabel::Export, r"^//export [A-Za-z_]\w*"),
            (PatternLabel::Malloc, r"\bC\.(malloc|calloc|free)\s*\("),
            (PatternLabel::Unsafe, r"\bunsafe\.[A-Za-z_]\w*"),
            (PatternLabel::TypCast, r"\(\s*\*[^()]*\)\s*\(\s*unsafe\.Pointer\s*\("),
            (PatternLabel::StdCast, r"\bC\.(CString|CBytes|GoStringN|GoString|GoBytes)\s*\("),
            (PatternLabel::LdFlag, r"^#cgo\b[^:]*\bLDFLAGS\s*:"),
            (PatternLabel::CFlag, r"^#cgo\b[^:]*\bCFLAGS\s*:"),
            (PatternLabel::CppFlag, r"^#cgo\b[^:]*\bCPPFLAGS\s*:"),
            (PatternLabel::PkgConfig, r"^#cgo\b[^:]*\bpkg-config\s*:"),
            (PatternLabel::CxxFlag, r"^#cgo\b[^:]*\bCXXFLAGS\s*:"),
            (PatternLabel::Wrapper, r"^func\b.*\bC\.[A-Za-z_]\w*\s*\("),
            (PatternLabel::Embedded, r"[A-Za-z_]\w*\s*\([^;{}()]*\)\s*\{$"),
        ];
        rules.into_iter().map(|(l, re)| (l, Regex::new(re).expect("valid evidence regex"))).collect()
    });
    table.get(&label)
}

/// Checks that an evidence excerpt on its own supports its label.
pub fn verify_evidence(e: &Evidence) -> bool {
    evidence_re(e.label).is_some_and(|re| re.is_match(&e.excerpt))
}

/// Percentage of files carrying each label, all 15 labels present, 2 decimals.
pub fn pattern_frequencies(reports: &[FilePatternReport]) -> Result<BTreeMap<PatternLabel, f64>, Error> {
    if reports.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let n = reports.len() as f64;
    Ok(PatternLabel::ALL
        .into_iter()
        .map(|label| {
            let hits = reports.iter().filter(|r| r.labels.contains(&label)).count() as f64;
            (label, round2(100.0 * hits / n))
        })
        .collect())
}

pub(crate) fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{collect_features_with, detect_cgo_import};
    use crate::frontend::parse_source;

    fn classify(src: &str) -> FilePatternReport {
        let facts = parse_source("f.go", src);
        assert!(facts.parse_ok, "{:?}", facts.parse_errors);
        let preamble = detect_cgo_import(&facts).expect("cgo file");
        let features = collect_features_with(&facts, &preamble);
        classify_file(&facts, &features, &preamble)
    }

    fn labels(names: &[&str]) -> BTreeSet<PatternLabel> {
        names.iter().map(|n| n.parse().unwrap()).collect()
    }

    #[test]
    fn cstring_free_combination() {
        let src = "package p\n\n// #include <stdlib.h>\nimport \"C\"\nimport \"unsafe\"\n\nfunc show(s string) {\n\tcs := C.CString(s)\n\tdefer C.free(unsafe.Pointer(cs))\n\tC.puts(cs)\n}\n";
        let r = classify(src);
        for l in ["StdCast", "Unsafe", "Malloc"] {
            assert!(r.labels.contains(&l.parse().unwrap()), "{l} missing from {:?}", r.labels);
        }
        assert!(r.evidence.iter().all(verify_evidence), "{:?}", r.evidence);
    }

    #[test]
    fn bare_import_is_none() {
        let r = classify("package p\n\nimport \"C\"\n");
        assert_eq!(r.labels, labels(&["None"]));
        assert!(r.evidence.is_empty());
    }

    #[test]
    fn toggled_detector_is_silent() {
        let src = "package p\n\n// #cgo LDFLAGS: -lpng\nimport \"C\"\n";
        let facts = parse_source("f.go", src);
        let preamble = detect_cgo_import(&facts).unwrap();
        let features = collect_features_with(&facts, &preamble);
        let on = classify_file(&facts, &features, &preamble);
        assert_eq!(on.labels, labels(&["LDFLAG"]));
        let off =
            classify_file_with(&facts, &features, &preamble, &DetectorConfig::default().without(PatternLabel::LdFlag));
        assert_eq!(off.labels, labels(&["None"]));
    }

    #[test]
    fn frequencies_two_files() {
        let a = FilePatternReport { file_path: "a.go".into(), labels: labels(&["CType"]), evidence: vec![] };
        let b = FilePatternReport { file_path: "b.go".into(), labels: labels(&["CType", "Unsafe"]), evidence: vec![] };
        let f = pattern_frequencies(&[a, b]).unwrap();
        assert_eq!(f[&PatternLabel::CType], 100.00);
        assert_eq!(f[&PatternLabel::Unsafe], 50.00);
        assert_eq!(f[&PatternLabel::Wrapper], 0.00);
        assert_eq!(f.len(), 15);
        assert!(matches!(pattern_frequencies(&[]), Err(Error::EmptyCorpus)));
    }
}
