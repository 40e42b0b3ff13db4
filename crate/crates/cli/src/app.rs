//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use quist_bench::{run_scaling, write_csv, BenchError, SyntheticKind, SyntheticSpec};
use quist_core::{build_dataset, run_quist, ClusteringResult, QuistError, RawConfig};

use crate::document::emit_json;
use crate::ingest::{ingest, ColumnSelector, IngestError, IngestOptions, InputFormat, Source};
use crate::report::emit_report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "quist",
    version,
    about = "Divisive clustering of univariate data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cluster one column of values.
    Cluster(ClusterArgs),
    /// Time clustering on synthetic data of increasing size.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Jsonl,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct ClusterArgs {
    /// Input file, or `-` for standard input.
    #[arg(long)]
    input: String,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Column name (needs --header) or zero-based index.
    #[arg(long)]
    column: Option<String>,
    /// The first CSV row is a header.
    #[arg(long)]
    header: bool,
    /// Upper bound on the number of clusters (defaults to the input size).
    #[arg(long)]
    max_clusters: Option<i64>,
    /// Clusters of this size or smaller are not split.
    #[arg(long)]
    min_size: Option<i64>,
    /// Split only clusters whose spreadness exceeds this [default: 1.0].
    #[arg(long)]
    threshold: Option<f64>,
    /// JSON output path; standard output when omitted or `-`.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Per-cluster statistics table.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Flat `id,leaf` CSV of cluster assignments.
    #[arg(long)]
    assignments: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Comma-separated input sizes, ascending.
    #[arg(long, value_delimiter = ',', default_value = "10000,100000")]
    sizes: Vec<usize>,
    /// uniform, gaussian_mixture or outlier_heavy.
    #[arg(long, default_value = "outlier_heavy")]
    kind: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    /// Write the timing rows as CSV.
    #[arg(long)]
    csv_out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Config(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Config(_) => EXIT_CONFIG,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Config(m) => m,
        }
    }
}

impl From<IngestError> for Failure {
    fn from(e: IngestError) -> Self {
        if e.is_config_error() {
            Failure::Config(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<QuistError> for Failure {
    fn from(e: QuistError) -> Self {
        match e {
            QuistError::InvalidConfig(_) => Failure::Config(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        Failure::Config(e.to_string())
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let outcome = match cli.command {
        Command::Cluster(args) => cluster(args),
        Command::Bench(args) => bench(args),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("quist: {}", f.message());
            f.code()
        }
    }
}

fn write_target(path: &Path, contents: &str) -> Result<(), Failure> {
    if path.as_os_str() == "-" {
        io::stdout()
            .write_all(contents.as_bytes())
            .map_err(|e| Failure::Input(format!("cannot write to standard output: {e}")))
    } else {
        fs::write(path, contents)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
    }
}

fn assignment_csv(result: &ClusteringResult) -> String {
    let mut s = String::from("id,leaf\n");
    for (id, leaf) in result.assignment().iter().enumerate() {
        s.push_str(&format!("{id},{leaf}\n"));
    }
    s
}

fn cluster(args: ClusterArgs) -> Result<(), Failure> {
    let raw = RawConfig {
        max_clusters: args.max_clusters,
        min_cluster_size: args.min_size,
        spreadness_threshold: args.threshold,
    };
    // Reject bad options before touching the input.
    raw.validate(1)?;

    let opts = IngestOptions {
        source: Source::from_arg(&args.input),
        format: match args.format {
            FormatArg::Csv => InputFormat::Csv,
            FormatArg::Jsonl => InputFormat::Jsonl,
        },
        column: args.column.as_deref().map(ColumnSelector::from_arg),
        has_header: args.header,
    };
    let instances = ingest(&opts)?;
    let dataset = build_dataset(&instances)?;
    let config = raw.validate(dataset.len())?;
    let result = run_quist(&dataset, &config);

    let json = emit_json(&result);
    match &args.output {
        Some(path) => write_target(path, &json)?,
        None => write_target(Path::new("-"), &json)?,
    }
    if let Some(path) = &args.report {
        write_target(path, &emit_report(&result))?;
    }
    if let Some(path) = &args.assignments {
        write_target(path, &assignment_csv(&result))?;
    }
    Ok(())
}

fn bench(args: BenchArgs) -> Result<(), Failure> {
    let kind = SyntheticKind::from_name(&args.kind)
        .ok_or_else(|| Failure::Config(format!("unknown data kind {:?}", args.kind)))?;
    let template = SyntheticSpec::new(kind, 1, args.seed);
    let report = run_scaling(&args.sizes, &template, args.reps)?;
    print!("{}", report.summary());
    if let Some(path) = &args.csv_out {
        let mut buf = Vec::new();
        write_csv(&mut buf, &report.rows).expect("writing to memory");
        write_target(path, &String::from_utf8(buf).expect("ascii csv"))?;
    }
    Ok(())
}
