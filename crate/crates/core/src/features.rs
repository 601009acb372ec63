//! Detection of cgo language features in one parsed file.

use std::fmt;
use std::path::PathBuf;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::cnames;
use crate::frontend::{CallSite, Pos, SyntaxFacts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DirectiveKind {
    #[serde(rename = "CFLAGS")]
    CFlags,
    #[serde(rename = "CPPFLAGS")]
    CppFlags,
    #[serde(rename = "CXXFLAGS")]
    CxxFlags,
    #[serde(rename = "LDFLAGS")]
    LdFlags,
    #[serde(rename = "PKGCONFIG")]
    PkgConfig,
}

impl DirectiveKind {
    pub const ALL: [DirectiveKind; 5] = [
        DirectiveKind::CFlags,
        DirectiveKind::CppFlags,
        DirectiveKind::CxxFlags,
        DirectiveKind::LdFlags,
        DirectiveKind::PkgConfig,
    ];

    /// Spelling inside a `#cgo` line.
    pub fn keyword(self) -> &'static str {
        match self {
            DirectiveKind::CFlags => "CFLAGS",
            DirectiveKind::CppFlags => "CPPFLAGS",
            DirectiveKind::CxxFlags => "CXXFLAGS",
            DirectiveKind::LdFlags => "LDFLAGS",
            DirectiveKind::PkgConfig => "pkg-config",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        DirectiveKind::ALL.into_iter().find(|k| k.keyword() == s)
    }
}

impl fmt::Display for DirectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CgoDirective {
    pub kind: DirectiveKind,
    /// Build constraint before the kind, e.g. `linux,amd64`.
    pub constraint: Option<String>,
    pub value: String,
    /// 1-based line within the preamble text.
    pub line: u32,
}

impl CgoDirective {
    pub fn render(&self) -> String {
        match &self.constraint {
            Some(c) => format!("#cgo {c} {}: {}", self.kind, self.value),
            None => format!("#cgo {}: {}", self.kind, self.value),
        }
    }
}

/// An embedded C function definition found in the preamble.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CFunction {
    pub name: String,
    /// 1-based line of the name within the preamble text.
    pub line: u32,
    /// Signature through the opening brace.
    pub header: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreambleDiagnostic {
    pub line: u32,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CgoPreamble {
    pub raw_c_text: String,
    /// Header paths without delimiters, in source order.
    pub includes: Vec<String>,
    pub directives: Vec<CgoDirective>,
    pub embedded_c_functions: usize,
    pub c_functions: Vec<CFunction>,
    pub diagnostics: Vec<PreambleDiagnostic>,
    /// File line of each preamble line, when taken from a file.
    #[serde(skip)]
    pub file_lines: Vec<u32>,
}

impl CgoPreamble {
    /// File line for a 1-based preamble line, falling back to the preamble line itself.
    pub fn file_line(&self, preamble_line: u32) -> u32 {
        preamble_line.checked_sub(1).and_then(|i| self.file_lines.get(i as usize).copied()).unwrap_or(preamble_line)
    }

    pub fn has_directive(&self, kind: DirectiveKind) -> bool {
        self.directives.iter().any(|d| d.kind == kind)
    }

    /// The directives, one `#cgo` line each.
    pub fn render_directives(&self) -> String {
        let mut out = String::new();
        for d in &self.directives {
            out.push_str(&d.render());
            out.push('\n');
        }
        out
    }
}

fn include_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r#"^\s*#\s*include\s*(?:<([^<>]+)>|"([^"]+)")"#).unwrap())
}

fn cgo_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^\s*#cgo\b(.*)$").unwrap())
}

fn c_function_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"(?m)^[ \t]*(?:[A-Za-z_]\w*[\s\*]+)+\**[ \t]*([A-Za-z_]\w*)[ \t]*\([^;{}()]*\)[ \t\r\n]*\{")
            .unwrap()
    })
}

const C_KEYWORDS: &[&str] = &["if", "while", "for", "switch", "return", "sizeof", "else"];

/// Parses preamble text (comment markers already stripped).
pub fn parse_preamble(raw: &str) -> CgoPreamble {
    let mut p = CgoPreamble { raw_c_text: raw.to_string(), ..CgoPreamble::default() };
    let mut c_only = String::with_capacity(raw.len());
    for (i, line) in raw.lines().enumerate() {
        let n = i as u32 + 1;
        if let Some(cap) = include_re().captures(line) {
            let path = cap.get(1).or_else(|| cap.get(2)).map(|m| m.as_str().trim()).unwrap_or("");
            if path.is_empty() {
                p.diagnostics.push(PreambleDiagnostic { line: n, message: "empty #include".into() });
            } else {
                p.includes.push(path.to_string());
            }
        } else if let Some(cap) = cgo_re().captures(line) {
            match parse_cgo_directive(&cap[1], n) {
                Ok(d) => p.directives.push(d),
                Err(message) => p.diagnostics.push(PreambleDiagnostic { line: n, message }),
            }
        } else if !line.trim_start().starts_with('#') {
            c_only.push_str(line);
        }
        c_only.push('\n');
    }
    let stripped = strip_c_comments(&c_only);
    for cap in c_function_re().captures_iter(&stripped) {
        let name = cap.get(1).expect("name group");
        if C_KEYWORDS.contains(&name.as_str()) {
            continue;
        }
        let line = stripped[..name.start()].matches('\n').count() as u32 + 1;
        let header = cap[0].split_whitespace().collect::<Vec<_>>().join(" ");
        p.c_functions.push(CFunction { name: name.as_str().to_string(), line, header });
    }
    p.embedded_c_functions = p.c_functions.len();
    p
}

fn parse_cgo_directive(rest: &str, line: u32) -> Result<CgoDirective, String> {
    let Some((head, value)) = rest.split_once(':') else {
        return Err(format!("malformed #cgo line: missing ':' in `#cgo{rest}`"));
    };
    let mut words: Vec<&str> = head.split_whitespace().collect();
    let Some(kind_word) = words.pop() else {
        return Err("malformed #cgo line: missing directive kind".into());
    };
    let Some(kind) = DirectiveKind::from_keyword(kind_word) else {
        return Err(format!("unknown #cgo directive kind `{kind_word}`"));
    };
    let constraint = (!words.is_empty()).then(|| words.join(" "));
    Ok(CgoDirective { kind, constraint, value: value.trim().to_string(), line })
}

fn strip_c_comments(src: &str) -> String {
    let mut out = String::with_capacity(src.len());
    let mut rest = src;
    while let Some(i) = rest.find("/*") {
        out.push_str(&rest[..i]);
        match rest[i + 2..].find("*/") {
            Some(j) => {
                out.extend(rest[i..i + 2 + j + 2].chars().filter(|&c| c == '\n'));
                rest = &rest[i + 2 + j + 2..];
            }
            None => {
                rest = "";
            }
        }
    }
    out.push_str(rest);
    out.lines().map(|l| l.split("//").next().unwrap_or("")).collect::<Vec<_>>().join("\n")
}

/// Preamble of the file, present iff it imports `"C"`.
pub fn detect_cgo_import(facts: &SyntaxFacts) -> Option<CgoPreamble> {
    let import = facts.imports.iter().find(|i| i.path == "C")?;
    let Some(group) = import.comment.and_then(|g| facts.comment_groups.get(g)) else {
        return Some(CgoPreamble::default());
    };
    let lines = group.lines();
    let text: Vec<&str> = lines.iter().map(|(_, l)| l.as_str()).collect();
    let mut preamble = parse_preamble(&text.join("\n"));
    preamble.file_lines = lines.iter().map(|(n, _)| *n).collect();
    Some(preamble)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CallClass {
    GoToCCall,
    CTypeConversion,
    NotCgo,
}

pub fn classify_c_selector_call(call: &CallSite) -> CallClass {
    match call.callee.c_member() {
        Some(member) if cnames::is_c_type_name(member) => CallClass::CTypeConversion,
        Some(_) => CallClass::GoToCCall,
        None => CallClass::NotCgo,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportedFunc {
    pub go_name: String,
    pub exported_name: String,
    pub location: Pos,
    pub directive_line: u32,
    /// The directive names a different function.
    pub name_mismatch: bool,
}

pub fn detect_exported_functions(facts: &SyntaxFacts) -> Vec<ExportedFunc> {
    let mut out = Vec::new();
    for f in &facts.func_decls {
        let Some(group) = f.doc.and_then(|g| facts.comment_groups.get(g)) else { continue };
        for c in &group.comments {
            let Some(rest) = c.raw.strip_prefix("//export ") else { continue };
            let name: String = rest.chars().take_while(|ch| ch.is_alphanumeric() || *ch == '_').collect();
            if name.is_empty() || name.starts_with(|ch: char| ch.is_ascii_digit()) {
                continue;
            }
            out.push(ExportedFunc {
                name_mismatch: name != f.name,
                go_name: f.name.clone(),
                exported_name: name,
                location: f.location,
                directive_line: c.start.line,
            });
            break;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FeatureKind {
    CgoImport,
    GoToCCall,
    CTypeConversion,
    ExportedFunc,
    PreambleDirective,
}

impl FeatureKind {
    pub const ALL: [FeatureKind; 5] = [
        FeatureKind::CgoImport,
        FeatureKind::GoToCCall,
        FeatureKind::CTypeConversion,
        FeatureKind::ExportedFunc,
        FeatureKind::PreambleDirective,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CgoFeature {
    pub kind: FeatureKind,
    pub location: Pos,
    pub name: String,
    pub file_path: PathBuf,
    /// Extra classification detail, e.g. `sizeof` for `C.sizeof_T(...)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// All features of one file, ordered by location.
pub fn collect_features(facts: &SyntaxFacts) -> Vec<CgoFeature> {
    let Some(preamble) = detect_cgo_import(facts) else { return Vec::new() };
    collect_features_with(facts, &preamble)
}

/// Same as [`collect_features`] with an already detected preamble.
pub fn collect_features_with(facts: &SyntaxFacts, preamble: &CgoPreamble) -> Vec<CgoFeature> {
    let feature = |kind, location, name: &str, note: Option<&str>| CgoFeature {
        kind,
        location,
        name: name.to_string(),
        file_path: facts.file_path.clone(),
        note: note.map(str::to_string),
    };
    let mut out = Vec::new();
    for import in facts.imports.iter().filter(|i| i.path == "C") {
        out.push(feature(FeatureKind::CgoImport, import.location, "C", None));
    }
    for d in &preamble.directives {
        let line = preamble.file_line(d.line);
        out.push(feature(FeatureKind::PreambleDirective, Pos::new(line, 1), d.kind.keyword(), None));
    }
    for call in &facts.calls {
        let Some(member) = call.callee.c_member() else { continue };
        match classify_c_selector_call(call) {
            CallClass::GoToCCall => {
                let note = member.starts_with("sizeof_").then_some("sizeof");
                out.push(feature(FeatureKind::GoToCCall, call.location, member, note));
            }
            CallClass::CTypeConversion => out.push(feature(FeatureKind::CTypeConversion, call.location, member, None)),
            CallClass::NotCgo => {}
        }
    }
    for e in detect_exported_functions(facts) {
        let note = e.name_mismatch.then_some("export name differs from function name");
        out.push(feature(FeatureKind::ExportedFunc, e.location, &e.exported_name, note));
    }
    out.sort_by(|a, b| (&a.file_path, a.location, a.kind).cmp(&(&b.file_path, b.location, b.kind)));
    out
}
