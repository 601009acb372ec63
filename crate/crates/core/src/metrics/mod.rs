//! Corpus aggregation and report output.

mod agreement;
mod kde;
mod project;
mod report;
mod summary;

pub use agreement::{classify_issue, cohen_kappa, IssueClass};
pub use kde::{kde_curve, kde_curve_with, quantile, silverman_bandwidth, trapezoid, KdeCurve, KdeOptions};
pub use project::{module_path, scan_corpus, scan_project, FileAnalysis, ParseFailure, ProjectMetrics, ProjectScan};
pub use report::{
    emit_report, KdeSeries, PuRow, ReportDocument, ReportFormat, ReportMetadata, CSV_COLUMNS, KDE_POINTS, SCHEMA,
};
pub use summary::{aggregate_corpus, AverageRow, Averages, CorpusSummary, CountPct, Distributions, HEAVY_CALL_SITES};
