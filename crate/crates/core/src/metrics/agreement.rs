use std::collections::{BTreeMap, BTreeSet};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::corpus::IssueCategory;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IssueClass {
    /// 1L1C
    OneLabelOneCategory,
    /// NL1C
    ManyLabelsOneCategory,
    Other,
}

impl IssueClass {
    pub fn short_name(self) -> &'static str {
        match self {
            IssueClass::OneLabelOneCategory => "1L1C",
            IssueClass::ManyLabelsOneCategory => "NL1C",
            IssueClass::Other => "Other",
        }
    }
}

pub fn classify_issue(labels: &BTreeSet<String>, category_map: &BTreeMap<String, IssueCategory>) -> Result<IssueClass> {
    if labels.is_empty() {
        return Err(Error::Invalid("an annotated issue needs at least one label".into()));
    }
    let mut categories = BTreeSet::new();
    for l in labels {
        categories.insert(category_map.get(l).ok_or_else(|| Error::UnmappedLabel(l.clone()))?);
    }
    Ok(match (labels.len(), categories.len()) {
        (1, _) => IssueClass::OneLabelOneCategory,
        (_, 1) => IssueClass::ManyLabelsOneCategory,
        _ => IssueClass::Other,
    })
}

/// Cohen's kappa for two annotators labelling the same items in the same order.
pub fn cohen_kappa<T: Eq + Hash + Ord>(a: &[T], b: &[T]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(Error::Invalid("cohen_kappa needs at least one item".into()));
    }
    let n = a.len() as f64;
    let p_o = a.iter().zip(b).filter(|(x, y)| x == y).count() as f64 / n;
    let mut freq_a: BTreeMap<&T, f64> = BTreeMap::new();
    let mut freq_b: BTreeMap<&T, f64> = BTreeMap::new();
    for x in a {
        *freq_a.entry(x).or_default() += 1.0;
    }
    for y in b {
        *freq_b.entry(y).or_default() += 1.0;
    }
    let p_e: f64 = freq_a.iter().map(|(k, ca)| ca * freq_b.get(k).copied().unwrap_or(0.0)).sum::<f64>() / (n * n);
    if (1.0 - p_e).abs() < f64::EPSILON {
        return if p_o == 1.0 {
            Ok(1.0)
        } else {
            Err(Error::Invalid("chance agreement is 1 but observed agreement is not".into()))
        };
    }
    Ok((p_o - p_e) / (1.0 - p_e))
}
