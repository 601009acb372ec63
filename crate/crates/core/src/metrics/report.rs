use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::kde::{kde_curve_with, KdeOptions};
use super::summary::{AverageRow, CorpusSummary};
use crate::error::{Error, Result};
use crate::patterns::{round2, PatternLabel};
use crate::ptrcheck::CheckReport;

pub const SCHEMA: &str = "cgoscope/1";

/// Abscissae per exported KDE curve.
pub const KDE_POINTS: usize = 64;

/// CSV header. Every row is one scalar keyed by `(section, key, field)`.
pub const CSV_COLUMNS: [&str; 4] = ["section", "key", "field", "value"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PuRow {
    pub module: String,
    pub n_o: usize,
    pub n_u: usize,
    pub p_u: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KdeSeries {
    pub bandwidth: f64,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub loc_basis: String,
    pub loc_cgo_definition: String,
    pub call_site_definition: String,
    pub kde_bandwidth: String,
    pub p_u_definition: String,
}

impl Default for ReportMetadata {
    fn default() -> Self {
        ReportMetadata {
            loc_basis: "non-blank lines of non-test, non-vendored .go files plus .c/.h files".into(),
            loc_cgo_definition: "lines of cgo files containing at least one cgo feature reference: \
                                 the \"C\" import, a C call or conversion, an //export directive, or a #cgo line"
                .into(),
            call_site_definition: "Go-to-C calls including cgo helper calls".into(),
            kde_bandwidth: "Gaussian kernel on ln(count), Silverman h = 0.9*min(sd, IQR/1.34)*n^(-1/5), \
                            0.1 when the spread is zero; zero counts omitted"
                .into(),
            p_u_definition: "100*N_u/N_o per cgo package, N_o conservative and N_u unnecessary pointer checks; \
                             the mean covers packages with N_o > 0"
                .into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: String,
    pub metadata: ReportMetadata,
    pub summary: CorpusSummary,
    pub kde: BTreeMap<String, Option<KdeSeries>>,
    pub pattern_frequencies: BTreeMap<PatternLabel, f64>,
    pub p_u_rows: Vec<PuRow>,
    pub mean_p_u: f64,
}

impl ReportDocument {
    pub fn build(
        summary: &CorpusSummary,
        pattern_freqs: &BTreeMap<PatternLabel, f64>,
        check_reports: &[CheckReport],
    ) -> Result<Self> {
        let mut p_u_rows: Vec<PuRow> = check_reports
            .iter()
            .map(|r| PuRow { module: r.module_path.clone(), n_o: r.n_o, n_u: r.n_u, p_u: r.p_u })
            .collect();
        p_u_rows.sort_by(|a, b| a.module.cmp(&b.module).then(a.n_o.cmp(&b.n_o)).then(a.n_u.cmp(&b.n_u)));
        let checked: Vec<f64> = p_u_rows.iter().filter(|r| r.n_o > 0).map(|r| r.p_u).collect();
        let mean_p_u =
            if checked.is_empty() { 0.0 } else { round2(checked.iter().sum::<f64>() / checked.len() as f64) };

        let d = &summary.distributions;
        let mut kde = BTreeMap::new();
        for (name, values) in
            [("call_sites", &d.call_sites), ("files", &d.files), ("packages", &d.packages), ("exports", &d.exports)]
        {
            let positive: Vec<f64> = values.iter().filter(|v| **v > 0).map(|v| *v as f64).collect();
            let series = if positive.is_empty() {
                None
            } else {
                let c = kde_curve_with(&positive, KDE_POINTS, &KdeOptions::default())?;
                Some(KdeSeries { bandwidth: c.bandwidth, points: c.points })
            };
            kde.insert(name.to_string(), series);
        }

        Ok(ReportDocument {
            schema: SCHEMA.to_string(),
            metadata: ReportMetadata::default(),
            summary: summary.clone(),
            kde,
            pattern_frequencies: pattern_freqs.clone(),
            p_u_rows,
            mean_p_u,
        })
    }

    pub fn csv_rows(&self) -> Vec<[String; 4]> {
        let mut rows = Vec::new();
        let mut push = |section: &str, key: &str, field: &str, value: String| {
            rows.push([section.to_string(), key.to_string(), field.to_string(), value]);
        };
        push("metadata", "schema", "version", self.schema.clone());
        let m = &self.metadata;
        for (k, v) in [
            ("loc_basis", &m.loc_basis),
            ("loc_cgo", &m.loc_cgo_definition),
            ("call_sites", &m.call_site_definition),
            ("kde_bandwidth", &m.kde_bandwidth),
            ("p_u", &m.p_u_definition),
        ] {
            push("metadata", k, "definition", v.clone());
        }

        let s = &self.summary;
        push("summary", "total_projects", "count", s.total_projects.to_string());
        for (k, cp) in
            [("projects_using_cgo", s.projects_using_cgo), ("projects_over_100_calls", s.projects_over_100_calls)]
        {
            push("summary", k, "count", cp.count.to_string());
            push("summary", k, "pct", cp.pct.to_string());
        }

        let a = &s.averages;
        let mut avg_row = |key: &str, r: &AverageRow| {
            push("averages", key, "total", r.total.to_string());
            push("averages", key, "cgo", r.cgo.to_string());
            push("averages", key, "c", r.c.map(|v| v.to_string()).unwrap_or_default());
            push("averages", key, "p_cgo", r.p_cgo.to_string());
            push("averages", key, "p_c", r.p_c.map(|v| v.to_string()).unwrap_or_default());
        };
        avg_row("loc", &a.loc);
        avg_row("packages", &a.packages);
        avg_row("files", &a.files);
        push("averages", "call_sites", "mean", a.call_sites.to_string());
        push("averages", "exported_funcs", "mean", a.exported_funcs.to_string());

        let d = &s.distributions;
        for (k, v) in
            [("call_sites", &d.call_sites), ("files", &d.files), ("packages", &d.packages), ("exports", &d.exports)]
        {
            let joined: Vec<String> = v.iter().map(ToString::to_string).collect();
            push("distribution", k, "values", joined.join(";"));
        }

        for (k, series) in &self.kde {
            push("kde", k, "bandwidth", series.as_ref().map(|c| c.bandwidth.to_string()).unwrap_or_default());
        }

        for (label, pct) in &self.pattern_frequencies {
            push("pattern_frequency", label.name(), "pct", pct.to_string());
        }

        for r in &self.p_u_rows {
            push("p_u", &r.module, "n_o", r.n_o.to_string());
            push("p_u", &r.module, "n_u", r.n_u.to_string());
            push("p_u", &r.module, "p_u", r.p_u.to_string());
        }
        push("p_u", "*", "mean", self.mean_p_u.to_string());
        rows
    }
}

/// Serializes the corpus report. Output depends only on the inputs' contents, not their order.
pub fn emit_report(
    summary: &CorpusSummary,
    pattern_freqs: &BTreeMap<PatternLabel, f64>,
    check_reports: &[CheckReport],
    format: ReportFormat,
) -> Result<Vec<u8>> {
    let doc = ReportDocument::build(summary, pattern_freqs, check_reports)?;
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(&doc)?;
            out.push(b'\n');
            Ok(out)
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_COLUMNS)?;
            for row in doc.csv_rows() {
                w.write_record(&row)?;
            }
            w.into_inner().map_err(|e| Error::io("<report>", e.into_error()))
        }
    }
}
