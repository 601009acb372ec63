mod github;

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use cgoscope_core::corpus::{
    clone_repositories, dedup_by_name, filter_repositories, read_annotations, read_repo_csv, search_cgo_issues,
    write_repo_csv, CloneStatus, IssueKind, RepoRecord, SearchOptions, DEFAULT_KEYWORDS,
};
use cgoscope_core::metrics::{
    aggregate_corpus, classify_issue, cohen_kappa, emit_report, scan_corpus, scan_project, ProjectScan, ReportFormat,
};
use cgoscope_core::patterns::pattern_frequencies;
use cgoscope_core::ptrcheck::rewrite_preview;
use cgoscope_core::Error;
use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};

const EXIT_USAGE: u8 = 1;
const EXIT_PARTIAL: u8 = 2;
const EXIT_ENV: u8 = 3;

#[derive(Parser)]
#[command(name = "cgoscope", version, about = "Static analysis of cgo usage in Go projects")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Corpus statistics report for one project, or a directory of projects with --corpus.
    Scan(ScanArgs),
    /// Usage patterns per cgo file.
    Patterns {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Pointer-check insertion counts per cgo package.
    Ptrcheck {
        path: PathBuf,
        #[arg(long)]
        rewrite_preview: bool,
        #[arg(long)]
        json: bool,
    },
    #[command(subcommand)]
    Corpus(CorpusCommand),
    #[command(subcommand)]
    Issues(IssuesCommand),
    /// Cohen's kappa between two label files, one label per line.
    Kappa {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
}

#[derive(Args)]
struct ScanArgs {
    path: PathBuf,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Treat every subdirectory of PATH as a separate project.
    #[arg(long)]
    corpus: bool,
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// Drop archived, educational and outdated repositories; writes the kept rows as CSV.
    Filter {
        #[arg(long)]
        list: PathBuf,
        #[arg(long)]
        cutoff: NaiveDate,
        /// Repository names known to be educational (repeatable or comma-separated).
        #[arg(long, value_delimiter = ',')]
        educational: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shallow-clone every repository of a list.
    Clone {
        #[arg(long)]
        list: PathBuf,
        #[arg(long)]
        dest: PathBuf,
        #[arg(long, default_value_t = 4)]
        jobs: usize,
    },
}

#[derive(Subcommand)]
enum IssuesCommand {
    /// Search issues and commits mentioning cgo; needs CGOSCOPE_API_TOKEN.
    Search {
        #[arg(long)]
        repo: String,
        #[arg(long, value_delimiter = ',')]
        keywords: Vec<String>,
        #[arg(long)]
        no_commits: bool,
        #[arg(long)]
        api_url: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Class (1L1C, NL1C, Other) of each annotated issue in a JSON-lines file.
    Classify { annotations: PathBuf },
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn open(path: &Path) -> anyhow::Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?))
}

fn project_name(path: &Path) -> String {
    path.canonicalize()
        .ok()
        .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .unwrap_or_else(|| path.display().to_string())
}

fn report_failures(scans: &[ProjectScan]) -> u8 {
    let mut partial = false;
    for s in scans {
        for f in &s.parse_failures {
            partial = true;
            let first = f.errors.first().map(|e| e.message.as_str()).unwrap_or("syntax error");
            eprintln!("warning: {}: {}: could not parse: {first}", s.metrics.repo, f.path.display());
        }
    }
    if partial {
        EXIT_PARTIAL
    } else {
        0
    }
}

fn scan(args: ScanArgs) -> anyhow::Result<u8> {
    let scans =
        if args.corpus { scan_corpus(&args.path)? } else { vec![scan_project(&args.path, &project_name(&args.path))?] };
    if scans.is_empty() {
        return Err(Error::EmptyCorpus.into());
    }
    let metrics: Vec<_> = scans.iter().map(|s| s.metrics.clone()).collect();
    let summary = aggregate_corpus(&metrics)?;
    let reports: Vec<_> = scans.iter().flat_map(|s| s.pattern_reports()).collect();
    let freqs = match pattern_frequencies(&reports) {
        Ok(f) => f,
        Err(Error::EmptyCorpus) => BTreeMap::new(),
        Err(e) => return Err(e.into()),
    };
    let checks: Vec<_> = scans.iter().flat_map(|s| s.check_reports.iter().cloned()).collect();
    let format = if args.csv { ReportFormat::Csv } else { ReportFormat::Json };
    let bytes = emit_report(&summary, &freqs, &checks, format)?;
    output(args.out.as_deref())?.write_all(&bytes)?;
    Ok(report_failures(&scans))
}

fn patterns(path: &Path, json: bool) -> anyhow::Result<u8> {
    let scan = scan_project(path, &project_name(path))?;
    let reports = scan.pattern_reports();
    let mut out = io::stdout().lock();
    if json {
        serde_json::to_writer_pretty(&mut out, &reports)?;
        writeln!(out)?;
    } else {
        for r in &reports {
            let labels: Vec<&str> = r.labels.iter().map(|l| l.name()).collect();
            writeln!(out, "{}\t{}", r.file_path.display(), labels.join(","))?;
        }
        if let Ok(freqs) = pattern_frequencies(&reports) {
            writeln!(out)?;
            for (label, pct) in freqs {
                writeln!(out, "{label}\t{pct:.2}%")?;
            }
        }
    }
    Ok(report_failures(std::slice::from_ref(&scan)))
}

fn ptrcheck(path: &Path, preview: bool, json: bool) -> anyhow::Result<u8> {
    let scan = scan_project(path, &project_name(path))?;
    let mut out = io::stdout().lock();
    if json {
        serde_json::to_writer_pretty(&mut out, &scan.check_reports)?;
        writeln!(out)?;
    } else if preview {
        let facts: Vec<_> = scan.files.iter().map(|f| f.facts.clone()).collect();
        for r in &scan.check_reports {
            writeln!(out, "{}", rewrite_preview(r, &facts))?;
        }
    } else {
        writeln!(out, "module\tN_o\tN_u\tP_u")?;
        for r in &scan.check_reports {
            writeln!(out, "{}\t{}\t{}\t{:.2}", r.module_path, r.n_o, r.n_u, r.p_u)?;
        }
    }
    Ok(report_failures(std::slice::from_ref(&scan)))
}

fn read_list(path: &Path) -> anyhow::Result<Vec<RepoRecord>> {
    Ok(dedup_by_name(read_repo_csv(open(path)?)?))
}

fn corpus(cmd: CorpusCommand) -> anyhow::Result<u8> {
    match cmd {
        CorpusCommand::Filter { list, cutoff, educational, out } => {
            let educational: BTreeSet<String> = educational.into_iter().map(|s| s.trim().to_string()).collect();
            let judged = filter_repositories(read_list(&list)?, cutoff, &educational);
            let mut counts: BTreeMap<String, usize> = BTreeMap::new();
            for r in &judged {
                *counts.entry(format!("{:?}", r.filter_verdict.expect("verdict assigned"))).or_default() += 1;
            }
            for (verdict, n) in counts {
                eprintln!("{verdict}: {n}");
            }
            let kept: Vec<_> = judged.into_iter().filter(RepoRecord::is_kept).collect();
            write_repo_csv(&kept, output(out.as_deref())?)?;
            Ok(0)
        }
        CorpusCommand::Clone { list, dest, jobs } => {
            std::fs::create_dir_all(&dest).with_context(|| format!("creating {}", dest.display()))?;
            let mut failed = 0;
            for (record, status) in clone_repositories(&read_list(&list)?, &dest, jobs.max(1)) {
                match status {
                    CloneStatus::Cloned => println!("cloned\t{}", record.name),
                    CloneStatus::AlreadyPresent => println!("present\t{}", record.name),
                    CloneStatus::Failed { reason, message } => {
                        failed += 1;
                        println!("failed\t{}\t{reason:?}", record.name);
                        eprintln!("{}: {message}", record.name);
                    }
                }
            }
            Ok(if failed > 0 { EXIT_PARTIAL } else { 0 })
        }
    }
}

fn issues(cmd: IssuesCommand) -> anyhow::Result<u8> {
    match cmd {
        IssuesCommand::Search { repo, keywords, no_commits, api_url, out } => {
            let Some(token) = std::env::var("CGOSCOPE_API_TOKEN").ok().filter(|t| !t.trim().is_empty()) else {
                eprintln!("error: CGOSCOPE_API_TOKEN is not set");
                return Ok(EXIT_ENV);
            };
            let keywords: Vec<String> =
                if keywords.is_empty() { DEFAULT_KEYWORDS.iter().map(|k| k.to_string()).collect() } else { keywords };
            let record = RepoRecord::new(&repo, &format!("https://github.com/{repo}"), 0, false, NaiveDate::MIN);
            let mut api = github::GitHubSearch::new(token, api_url)?;
            let mut options = SearchOptions::default();
            if no_commits {
                options.kinds = vec![IssueKind::Issue];
            }
            let outcome = match search_cgo_issues(&record, &keywords, &mut api, &options) {
                Err(Error::Auth(msg)) => {
                    eprintln!("error: authentication failed: {msg}");
                    return Ok(EXIT_ENV);
                }
                other => other?,
            };
            let mut w = output(out.as_deref())?;
            for r in &outcome.records {
                serde_json::to_writer(&mut w, r)?;
                writeln!(w)?;
            }
            for f in &outcome.failures {
                eprintln!("warning: {f}");
            }
            if outcome.incomplete {
                eprintln!("warning: some queries gave up after repeated failures; results are incomplete");
                return Ok(EXIT_PARTIAL);
            }
            Ok(0)
        }
        IssuesCommand::Classify { annotations } => {
            let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
            for a in read_annotations(open(&annotations)?)? {
                let class = classify_issue(&a.labels, &a.category_map)?;
                println!("{}\t{}\t{}", a.issue_ref, a.annotator_id, class.short_name());
                *counts.entry(class.short_name()).or_default() += 1;
            }
            for (class, n) in counts {
                eprintln!("{class}: {n}");
            }
            Ok(0)
        }
    }
}

fn read_labels(path: &Path) -> anyhow::Result<Vec<String>> {
    let mut labels = Vec::new();
    for line in open(path)?.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            labels.push(line.trim().to_string());
        }
    }
    Ok(labels)
}

fn kappa(a: &Path, b: &Path) -> anyhow::Result<u8> {
    let (a, b) = (read_labels(a)?, read_labels(b)?);
    if a.is_empty() {
        bail!("no labels in the first file");
    }
    println!("{:.4}", cohen_kappa(&a, &b)?);
    Ok(0)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Scan(args) => scan(args),
        Command::Patterns { path, json } => patterns(&path, json),
        Command::Ptrcheck { path, rewrite_preview, json } => ptrcheck(&path, rewrite_preview, json),
        Command::Corpus(cmd) => corpus(cmd),
        Command::Issues(cmd) => issues(cmd),
        Command::Kappa { a, b } => kappa(&a, &b),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
