use serde::{Deserialize, Serialize};

use super::project::ProjectMetrics;
use crate::error::{Error, Result};
use crate::patterns::round2;

/// Projects with more call sites than this count as heavy users.
pub const HEAVY_CALL_SITES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CountPct {
    pub count: usize,
    /// Percentage of all projects, 1 decimal.
    pub pct: f64,
}

/// One row of per-project means: total, cgo-related, C, and their shares of the total.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AverageRow {
    pub total: f64,
    pub cgo: f64,
    pub c: Option<f64>,
    pub p_cgo: f64,
    pub p_c: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Averages {
    pub loc: AverageRow,
    pub packages: AverageRow,
    pub files: AverageRow,
    pub call_sites: f64,
    pub exported_funcs: f64,
}

/// Per-project values for cgo-using projects, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Distributions {
    pub call_sites: Vec<usize>,
    pub files: Vec<usize>,
    pub packages: Vec<usize>,
    pub exports: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub total_projects: usize,
    pub projects_using_cgo: CountPct,
    pub projects_over_100_calls: CountPct,
    pub averages: Averages,
    pub distributions: Distributions,
}

fn share(part: f64, whole: f64) -> f64 {
    if whole == 0.0 {
        0.0
    } else {
        round2(100.0 * part / whole)
    }
}

fn count_pct(count: usize, total: usize) -> CountPct {
    let pct = if total == 0 { 0.0 } else { (1000.0 * count as f64 / total as f64).round() / 10.0 };
    CountPct { count, pct }
}

/// Table-style corpus aggregates. Input order does not matter.
pub fn aggregate_corpus(per_project: &[ProjectMetrics]) -> Result<CorpusSummary> {
    if per_project.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut projects: Vec<&ProjectMetrics> = per_project.iter().collect();
    projects.sort_by(|a, b| a.repo.cmp(&b.repo));
    let n = projects.len();
    let using: Vec<&&ProjectMetrics> = projects.iter().filter(|p| p.uses_cgo).collect();
    let heavy = using.iter().filter(|p| p.call_sites > HEAVY_CALL_SITES).count();

    let mean = |f: &dyn Fn(&ProjectMetrics) -> usize| projects.iter().map(|p| f(p) as f64).sum::<f64>() / n as f64;
    let row = |total: f64, cgo: f64, c: Option<f64>| AverageRow {
        total: round2(total),
        cgo: round2(cgo),
        c: c.map(round2),
        p_cgo: share(cgo, total),
        p_c: c.map(|c| share(c, total)),
    };
    let averages = Averages {
        loc: row(mean(&|p| p.loc_total), mean(&|p| p.loc_cgo), Some(mean(&|p| p.loc_c))),
        packages: row(mean(&|p| p.go_packages), mean(&|p| p.cgo_packages), None),
        files: row(mean(&|p| p.total_files()), mean(&|p| p.cgo_files), Some(mean(&|p| p.c_files))),
        call_sites: round2(mean(&|p| p.call_sites)),
        exported_funcs: round2(mean(&|p| p.exported_funcs)),
    };

    let sorted = |f: &dyn Fn(&ProjectMetrics) -> usize| {
        let mut v: Vec<usize> = using.iter().map(|p| f(p)).collect();
        v.sort_unstable();
        v
    };
    let distributions = Distributions {
        call_sites: sorted(&|p| p.call_sites),
        files: sorted(&|p| p.cgo_files),
        packages: sorted(&|p| p.cgo_packages),
        exports: sorted(&|p| p.exported_funcs),
    };

    Ok(CorpusSummary {
        total_projects: n,
        projects_using_cgo: count_pct(using.len(), n),
        projects_over_100_calls: count_pct(heavy, n),
        averages,
        distributions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn project(name: &str, calls: usize) -> ProjectMetrics {
        ProjectMetrics {
            repo: name.into(),
            uses_cgo: calls > 0,
            call_sites: calls,
            cgo_files: usize::from(calls > 0),
            ..ProjectMetrics::default()
        }
    }

    #[test]
    fn ten_projects_three_cgo_one_heavy() {
        let mut ps: Vec<_> = (0..7).map(|i| project(&format!("plain{i}"), 0)).collect();
        ps.push(project("light1", 5));
        ps.push(project("light2", 100));
        ps.push(project("heavy", 150));
        let s = aggregate_corpus(&ps).unwrap();
        assert_eq!(s.total_projects, 10);
        assert_eq!(s.projects_using_cgo, CountPct { count: 3, pct: 30.0 });
        assert_eq!(s.projects_over_100_calls, CountPct { count: 1, pct: 10.0 });
        assert_eq!(s.distributions.call_sites, vec![5, 100, 150]);
    }

    #[test]
    fn cgo_free_corpus_and_empty_input() {
        let s = aggregate_corpus(&[project("a", 0), project("b", 0)]).unwrap();
        assert_eq!(s.projects_using_cgo, CountPct { count: 0, pct: 0.0 });
        assert!(matches!(aggregate_corpus(&[]), Err(Error::EmptyCorpus)));
    }

    #[test]
    fn table_two_shares_are_ratio_of_means() {
        let row = AverageRow { total: 40422.81, cgo: 62.84, c: Some(3023.74), ..AverageRow::default() };
        assert_eq!(share(row.cgo, row.total), 0.16);
        assert_eq!(share(row.c.unwrap(), row.total), 7.48);
        assert_eq!(share(0.41, 58.26), 0.70);
    }
}
