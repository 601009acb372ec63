use std::collections::{BTreeSet, HashSet};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, NaiveDate};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FilterVerdict {
    Kept,
    DroppedArchived,
    DroppedEducational,
    DroppedOutdated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepoRecord {
    pub name: String,
    pub url: String,
    pub stars: u64,
    pub archived: bool,
    #[serde(rename = "updated_at", serialize_with = "ser_date", deserialize_with = "de_date")]
    pub last_updated: NaiveDate,
    #[serde(skip)]
    pub local_path: Option<PathBuf>,
    #[serde(skip)]
    pub filter_verdict: Option<FilterVerdict>,
}

impl RepoRecord {
    pub fn new(name: &str, url: &str, stars: u64, archived: bool, last_updated: NaiveDate) -> Self {
        RepoRecord {
            name: name.to_string(),
            url: url.to_string(),
            stars,
            archived,
            last_updated,
            local_path: None,
            filter_verdict: None,
        }
    }

    pub fn is_kept(&self) -> bool {
        self.filter_verdict == Some(FilterVerdict::Kept)
    }
}

fn ser_date<S: Serializer>(d: &NaiveDate, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&d.format("%Y-%m-%d").to_string())
}

fn de_date<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<NaiveDate, D::Error> {
    let raw = String::deserialize(d)?;
    parse_date(&raw).ok_or_else(|| serde::de::Error::custom(format!("invalid ISO-8601 date `{raw}`")))
}

/// Accepts `YYYY-MM-DD` or an RFC 3339 timestamp.
pub(crate) fn parse_date(raw: &str) -> Option<NaiveDate> {
    let raw = raw.trim();
    NaiveDate::parse_from_str(raw, "%Y-%m-%d")
        .ok()
        .or_else(|| DateTime::parse_from_rfc3339(raw).ok().map(|t| t.date_naive()))
}

/// Reads the `name,url,stars,archived,updated_at` list.
pub fn read_repo_csv(input: impl Read) -> Result<Vec<RepoRecord>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let mut out = Vec::new();
    for row in reader.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

pub fn write_repo_csv(records: &[RepoRecord], output: impl Write) -> Result<()> {
    let mut writer = csv::Writer::from_writer(output);
    for r in records {
        writer.serialize(r)?;
    }
    writer.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}

/// Keeps the first record of every name.
pub fn dedup_by_name(records: Vec<RepoRecord>) -> Vec<RepoRecord> {
    let mut seen = HashSet::new();
    records.into_iter().filter(|r| seen.insert(r.name.clone())).collect()
}

/// Assigns a verdict to every record, checking archived, educational, then outdated.
/// Records updated strictly before `cutoff` are outdated.
pub fn filter_repositories(
    records: Vec<RepoRecord>,
    cutoff: NaiveDate,
    educational: &BTreeSet<String>,
) -> Vec<RepoRecord> {
    records
        .into_iter()
        .map(|mut r| {
            let verdict = if r.archived {
                FilterVerdict::DroppedArchived
            } else if educational.contains(&r.name) {
                FilterVerdict::DroppedEducational
            } else if r.last_updated < cutoff {
                FilterVerdict::DroppedOutdated
            } else {
                FilterVerdict::Kept
            };
            r.filter_verdict = Some(verdict);
            r
        })
        .collect()
}

/// Vendored code, `test` folders and `_test` packages are left out of the analysis.
pub fn is_excluded(relative_path: &Path, package_name: &str) -> bool {
    if package_name.ends_with("_test") {
        return true;
    }
    let raw = relative_path.to_string_lossy().replace('\\', "/");
    raw.split('/').any(|seg| seg == "vendor" || seg == "test")
}
