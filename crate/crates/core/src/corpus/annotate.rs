use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IssueCategory {
    Build,
    Bug,
    #[serde(rename = "CGO-decision")]
    CgoDecision,
    Perf,
    Misc,
}

impl IssueCategory {
    pub const ALL: [IssueCategory; 5] = [
        IssueCategory::Build,
        IssueCategory::Bug,
        IssueCategory::CgoDecision,
        IssueCategory::Perf,
        IssueCategory::Misc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IssueCategory::Build => "Build",
            IssueCategory::Bug => "Bug",
            IssueCategory::CgoDecision => "CGO-decision",
            IssueCategory::Perf => "Perf",
            IssueCategory::Misc => "Misc",
        }
    }
}

impl fmt::Display for IssueCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IssueCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IssueCategory::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Invalid(format!("unknown issue category `{s}`")))
    }
}

/// Labels named in the issue study with their categories. The full label set is
/// larger; callers supply the rest through `category_map`.
pub fn known_label_categories() -> BTreeMap<String, IssueCategory> {
    [
        ("Version", IssueCategory::Build),
        ("Platform", IssueCategory::Build),
        ("Dependency", IssueCategory::Build),
        ("ProjBug", IssueCategory::Bug),
        ("GoBug", IssueCategory::Bug),
        ("Memory", IssueCategory::Bug),
        ("CGOPointer", IssueCategory::Bug),
        ("NoCGO", IssueCategory::CgoDecision),
        ("UseCGO", IssueCategory::CgoDecision),
        ("Performance", IssueCategory::Perf),
        ("Educational", IssueCategory::Misc),
        ("Question", IssueCategory::Misc),
        ("None", IssueCategory::Misc),
    ]
    .into_iter()
    .map(|(l, c)| (l.to_string(), c))
    .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelAnnotation {
    pub issue_ref: String,
    pub annotator_id: String,
    pub labels: BTreeSet<String>,
    pub category_map: BTreeMap<String, IssueCategory>,
}

impl LabelAnnotation {
    /// Every label must have a category.
    pub fn validate(&self) -> Result<()> {
        match self.labels.iter().find(|l| !self.category_map.contains_key(*l)) {
            Some(l) => Err(Error::UnmappedLabel(l.clone())),
            None => Ok(()),
        }
    }
}

/// Reads one JSON annotation per non-empty line, validating each.
pub fn read_annotations(input: impl BufRead) -> Result<Vec<LabelAnnotation>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<annotations>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let a: LabelAnnotation =
            serde_json::from_str(&line).map_err(|e| Error::Invalid(format!("annotation line {}: {e}", i + 1)))?;
        a.validate()?;
        out.push(a);
    }
    Ok(out)
}

pub fn write_annotations(annotations: &[LabelAnnotation], mut output: impl Write) -> Result<()> {
    for a in annotations {
        serde_json::to_writer(&mut output, a)?;
        output.write_all(b"\n").map_err(|e| Error::io("<annotations>", e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_round_trip() {
        let a = LabelAnnotation {
            issue_ref: "o/r#1".into(),
            annotator_id: "a1".into(),
            labels: ["Version".to_string()].into(),
            category_map: known_label_categories(),
        };
        let mut buf = Vec::new();
        write_annotations(std::slice::from_ref(&a), &mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).contains("\"CGO-decision\""));
        assert_eq!(read_annotations(buf.as_slice()).unwrap(), vec![a]);
    }

    #[test]
    fn unmapped_label_is_rejected() {
        let line = r#"{"issue_ref":"x","annotator_id":"a","labels":["Mystery"],"category_map":{}}"#;
        assert!(matches!(read_annotations(line.as_bytes()), Err(Error::UnmappedLabel(l)) if l == "Mystery"));
    }
}
