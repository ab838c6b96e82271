//! Command-line front end: argument parsing, config-file merging, and the
//! subcommand drivers behind the `miscluster` binary.
//!
//! Precedence for every setting is flag, then config file, then built-in
//! default. Thread count also honors `MISCLUSTER_THREADS` between flag and
//! config.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::engine::{cluster, EngineConfig, EngineWarning, ResultDocument, DEFAULT_AUTO_STOP_RATIO};
use crate::error::{Error, Result};
use crate::eval::{purity, run_benchmark, BenchAlgorithm, BenchmarkOptions, DEFAULT_N_INIT};
use crate::ingest::{
    load_delimited, synth_missingness, write_delimited, IngestOptions, Manifest, PlantedMissingnessSpec,
};
use crate::summarize::{render_report, summarize_result, ReportOptions};

pub const THREADS_ENV: &str = "MISCLUSTER_THREADS";
pub const LOG_ENV: &str = "MISCLUSTER_LOG";

#[derive(Debug, Parser)]
#[command(name = "miscluster", version, about = "Cluster categorical data by mutual-information significance")]
pub struct Cli {
    /// TOML file with default settings; flags override it
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Worker threads (default: MISCLUSTER_THREADS, then the config file, then all cores)
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// More log output on stderr (repeatable)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Cluster a delimited file and write the result document
    Cluster(ClusterArgs),
    /// Profile each cluster of a result against the whole dataset
    Summarize(SummarizeArgs),
    /// Purity of a result against class labels
    Evaluate(EvaluateArgs),
    /// Run the benchmark over a dataset manifest
    Bench(BenchArgs),
    /// Generate a dataset with planted missingness
    Synth(SynthArgs),
}

/// Class column argument: an index or `none`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassCol {
    None,
    Index(usize),
}

fn parse_class_col(s: &str) -> std::result::Result<ClassCol, String> {
    if s.eq_ignore_ascii_case("none") {
        return Ok(ClassCol::None);
    }
    s.parse()
        .map(ClassCol::Index)
        .map_err(|_| format!("expected a column index or 'none', got {s:?}"))
}

fn parse_delimiter(s: &str) -> std::result::Result<char, String> {
    match s {
        "tab" | "\\t" => Ok('\t'),
        _ => {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) if c.is_ascii() => Ok(c),
                _ => Err(format!("delimiter must be one ASCII character or 'tab', got {s:?}")),
            }
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct IngestArgs {
    /// Field delimiter: one character, or 'tab'
    #[arg(long, value_name = "C", value_parser = parse_delimiter)]
    pub delimiter: Option<char>,
    /// First line holds column names
    #[arg(long)]
    pub header: bool,
    /// Column holding class labels, or 'none'
    #[arg(long, value_name = "N|none", value_parser = parse_class_col)]
    pub class_col: Option<ClassCol>,
    /// Comma-separated column indices to drop
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    pub ignore_cols: Option<Vec<usize>>,
    /// Comma-separated tokens read as missing
    #[arg(long, value_name = "TOKENS", value_delimiter = ',')]
    pub missing: Option<Vec<String>>,
    /// Strip whitespace around fields
    #[arg(long)]
    pub trim: bool,
    /// Comma-separated attribute names, overriding the header
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    pub names: Option<Vec<String>>,
}

impl IngestArgs {
    fn is_empty(&self) -> bool {
        self.delimiter.is_none()
            && !self.header
            && self.class_col.is_none()
            && self.ignore_cols.is_none()
            && self.missing.is_none()
            && !self.trim
            && self.names.is_none()
    }

    fn apply(&self, mut base: IngestOptions) -> IngestOptions {
        if let Some(d) = self.delimiter {
            base.delimiter = d;
        }
        if self.header {
            base.has_header = true;
        }
        match self.class_col {
            Some(ClassCol::None) => base.class_column = None,
            Some(ClassCol::Index(i)) => base.class_column = Some(i),
            None => {}
        }
        if let Some(cols) = &self.ignore_cols {
            base.ignore_columns = cols.clone();
        }
        if let Some(m) = &self.missing {
            base.missing_tokens = m.clone();
        }
        if self.trim {
            base.trim = true;
        }
        if let Some(n) = &self.names {
            base.attribute_names = Some(n.clone());
        }
        base
    }
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// Input data file
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    #[command(flatten)]
    pub ingest: IngestArgs,
    /// Number of clusters
    #[arg(long, value_name = "K", conflicts_with = "auto")]
    pub k: Option<usize>,
    /// Choose the number of clusters automatically
    #[arg(long)]
    pub auto: bool,
    /// Auto mode: stop once the best partition keeps more than this fraction of the working entropy
    #[arg(long, value_name = "T")]
    pub theta: Option<f64>,
    /// Auto mode: stop once the working set falls below this fraction of all rows
    #[arg(long, value_name = "F")]
    pub min_cluster_fraction: Option<f64>,
    /// Result document path (default: stdout)
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SummarizeArgs {
    /// Data file the result was computed on
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Result document from `cluster`
    #[arg(long, value_name = "FILE")]
    pub result: PathBuf,
    /// Parsing flags; when none are given the result document's settings are reused
    #[command(flatten)]
    pub ingest: IngestArgs,
    /// Attributes shown per cluster
    #[arg(long, value_name = "N")]
    pub top: Option<usize>,
    /// Categories shown per attribute (default: all)
    #[arg(long, value_name = "N")]
    pub top_categories: Option<usize>,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<ReportFormat>,
    /// Report path (default: stdout)
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Result document from `cluster`
    #[arg(long, value_name = "FILE")]
    pub result: PathBuf,
    /// File holding the class labels, row-aligned with the clustered data
    #[arg(long, value_name = "FILE")]
    pub labels_from: PathBuf,
    /// Parsing flags; --class-col picks the label column
    #[command(flatten)]
    pub ingest: IngestArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Dataset manifest (TOML)
    #[arg(long, value_name = "FILE")]
    pub manifest: PathBuf,
    /// Comma-separated algorithms: mis, mis-auto, kmodes
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    pub algorithms: Option<Vec<BenchAlgorithm>>,
    /// k-modes seed
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// k-modes restarts
    #[arg(long, value_name = "N")]
    pub n_init: Option<usize>,
    /// Auto-mode stop ratio
    #[arg(long, value_name = "T")]
    pub theta: Option<f64>,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<BenchFormat>,
    /// Report path (default: stdout)
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

impl clap::ValueEnum for BenchAlgorithm {
    fn value_variants<'a>() -> &'a [Self] {
        &BenchAlgorithm::ALL
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(self.name()))
    }
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Generator spec (TOML)
    #[arg(long, value_name = "FILE")]
    pub spec: PathBuf,
    /// Random seed
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// Output field delimiter
    #[arg(long, value_name = "C", value_parser = parse_delimiter)]
    pub delimiter: Option<char>,
    /// Data path (default: stdout)
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

/// Config file layout. Every key is optional and defaults to the built-in
/// value, so an empty file and a file listing the defaults behave the same.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub threads: Option<usize>,
    /// Parsing settings for `cluster`.
    pub ingest: IngestOptions,
    pub cluster: ClusterSection,
    pub summarize: SummarizeSection,
    pub bench: BenchSection,
    pub synth: SynthSection,
}

impl Default for ConfigFile {
    fn default() -> Self {
        ConfigFile {
            threads: None,
            ingest: IngestOptions::default(),
            cluster: ClusterSection::default(),
            summarize: SummarizeSection::default(),
            bench: BenchSection::default(),
            synth: SynthSection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClusterSection {
    pub k: Option<usize>,
    pub auto: bool,
    pub theta: f64,
    pub min_cluster_fraction: f64,
}

impl Default for ClusterSection {
    fn default() -> Self {
        ClusterSection {
            k: None,
            auto: false,
            theta: DEFAULT_AUTO_STOP_RATIO,
            min_cluster_fraction: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SummarizeSection {
    pub top: usize,
    pub top_categories: Option<usize>,
    pub format: ReportFormat,
}

impl Default for SummarizeSection {
    fn default() -> Self {
        let r = ReportOptions::default();
        SummarizeSection {
            top: r.top_attributes,
            top_categories: r.top_categories,
            format: ReportFormat::Text,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchSection {
    pub algorithms: Vec<BenchAlgorithm>,
    pub seed: u64,
    pub n_init: usize,
    pub theta: f64,
    pub format: BenchFormat,
}

impl Default for BenchSection {
    fn default() -> Self {
        BenchSection {
            algorithms: BenchAlgorithm::ALL.to_vec(),
            seed: 0,
            n_init: DEFAULT_N_INIT,
            theta: DEFAULT_AUTO_STOP_RATIO,
            format: BenchFormat::Text,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSection {
    pub seed: u64,
    pub delimiter: char,
}

impl Default for SynthSection {
    fn default() -> Self {
        SynthSection { seed: 0, delimiter: ',' }
    }
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Parse {
            what: format!("config file {}", path.display()),
            message: e.to_string(),
        })
    }
}

/// Fully resolved invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub threads: Option<usize>,
    pub verbosity: u8,
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Cluster {
        input: PathBuf,
        ingest: IngestOptions,
        engine: EngineConfig,
        out: Option<PathBuf>,
    },
    Summarize {
        input: PathBuf,
        result: PathBuf,
        /// `None` reuses the result document's parsing settings.
        ingest: Option<IngestArgsResolved>,
        report: ReportOptions,
        format: ReportFormat,
        out: Option<PathBuf>,
    },
    Evaluate {
        result: PathBuf,
        labels_from: PathBuf,
        ingest: Option<IngestArgsResolved>,
    },
    Bench {
        manifest: PathBuf,
        options: BenchmarkOptions,
        format: BenchFormat,
        out: Option<PathBuf>,
    },
    Synth {
        spec: PathBuf,
        seed: u64,
        delimiter: char,
        out: Option<PathBuf>,
    },
}

/// Parsing flags to layer over whatever settings the result document recorded.
#[derive(Debug, Clone, PartialEq)]
pub struct IngestArgsResolved {
    pub delimiter: Option<char>,
    pub header: bool,
    pub class_col: Option<ClassCol>,
    pub ignore_cols: Option<Vec<usize>>,
    pub missing: Option<Vec<String>>,
    pub trim: bool,
    pub names: Option<Vec<String>>,
}

impl IngestArgsResolved {
    fn from_args(a: &IngestArgs) -> Option<Self> {
        (!a.is_empty()).then(|| IngestArgsResolved {
            delimiter: a.delimiter,
            header: a.header,
            class_col: a.class_col,
            ignore_cols: a.ignore_cols.clone(),
            missing: a.missing.clone(),
            trim: a.trim,
            names: a.names.clone(),
        })
    }

    fn apply(&self, base: IngestOptions) -> IngestOptions {
        IngestArgs {
            delimiter: self.delimiter,
            header: self.header,
            class_col: self.class_col,
            ignore_cols: self.ignore_cols.clone(),
            missing: self.missing.clone(),
            trim: self.trim,
            names: self.names.clone(),
        }
        .apply(base)
    }
}

fn layer(doc: Option<&IngestOptions>, flags: Option<&IngestArgsResolved>) -> IngestOptions {
    let base = doc.cloned().unwrap_or_default();
    match flags {
        Some(f) => f.apply(base),
        None => base,
    }
}

fn require_file(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Error::io(
            path,
            io::Error::new(io::ErrorKind::NotFound, "no such file"),
        ))
    }
}

fn require_out_dir(path: &Option<PathBuf>) -> Result<()> {
    if let Some(p) = path {
        let parent = p.parent().filter(|d| !d.as_os_str().is_empty());
        if let Some(dir) = parent {
            if !dir.is_dir() {
                return Err(Error::io(
                    dir,
                    io::Error::new(io::ErrorKind::NotFound, "output directory does not exist"),
                ));
            }
        }
    }
    Ok(())
}

impl RunConfig {
    /// Merge parsed flags with the config file (if any) and the environment.
    pub fn resolve(cli: Cli, env_threads: Option<&str>) -> Result<Self> {
        let file = match &cli.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let env_threads = env_threads
            .map(|s| {
                s.trim().parse::<usize>().map_err(|_| {
                    Error::InvalidConfig(format!("{THREADS_ENV} must be a positive integer, got {s:?}"))
                })
            })
            .transpose()?;
        let threads = cli.threads.or(env_threads).or(file.threads);
        if threads == Some(0) {
            return Err(Error::InvalidConfig("--threads must be at least 1".into()));
        }

        let command = match cli.command {
            CliCommand::Cluster(a) => {
                let ingest = a.ingest.apply(file.ingest.clone());
                let mode_k = match (a.k, a.auto) {
                    (Some(k), _) => Some(k),
                    (None, true) => None,
                    (None, false) => match (file.cluster.k, file.cluster.auto) {
                        (Some(_), true) => {
                            return Err(Error::InvalidConfig(
                                "config sets both cluster.k and cluster.auto".into(),
                            ))
                        }
                        (Some(k), false) => Some(k),
                        (None, true) => None,
                        (None, false) => {
                            return Err(Error::InvalidConfig("cluster needs --k K or --auto".into()))
                        }
                    },
                };
                let mut engine = match mode_k {
                    Some(k) => EngineConfig::fixed_k(k),
                    None => EngineConfig::auto(),
                };
                engine.auto_stop_ratio = a.theta.unwrap_or(file.cluster.theta);
                engine.min_cluster_fraction = a.min_cluster_fraction.unwrap_or(file.cluster.min_cluster_fraction);
                engine.validate()?;
                Command::Cluster {
                    input: a.input,
                    ingest,
                    engine,
                    out: a.out,
                }
            }
            CliCommand::Summarize(a) => Command::Summarize {
                input: a.input,
                result: a.result,
                ingest: IngestArgsResolved::from_args(&a.ingest),
                report: ReportOptions {
                    top_attributes: a.top.unwrap_or(file.summarize.top),
                    top_categories: a.top_categories.or(file.summarize.top_categories),
                },
                format: a.format.unwrap_or(file.summarize.format),
                out: a.out,
            },
            CliCommand::Evaluate(a) => Command::Evaluate {
                result: a.result,
                labels_from: a.labels_from,
                ingest: IngestArgsResolved::from_args(&a.ingest),
            },
            CliCommand::Bench(a) => {
                let options = BenchmarkOptions {
                    algorithms: a.algorithms.unwrap_or(file.bench.algorithms),
                    seed: a.seed.unwrap_or(file.bench.seed),
                    n_init: a.n_init.unwrap_or(file.bench.n_init),
                    auto_stop_ratio: a.theta.unwrap_or(file.bench.theta),
                    ..BenchmarkOptions::default()
                };
                if options.n_init == 0 {
                    return Err(Error::InvalidConfig("--n-init must be at least 1".into()));
                }
                Command::Bench {
                    manifest: a.manifest,
                    options,
                    format: a.format.unwrap_or(file.bench.format),
                    out: a.out,
                }
            }
            CliCommand::Synth(a) => Command::Synth {
                spec: a.spec,
                seed: a.seed.unwrap_or(file.synth.seed),
                delimiter: a.delimiter.unwrap_or(file.synth.delimiter),
                out: a.out,
            },
        };
        let config = RunConfig {
            threads,
            verbosity: cli.verbose,
            command,
        };
        config.validate_paths()?;
        Ok(config)
    }

    /// Inputs must exist and output directories must be present.
    pub fn validate_paths(&self) -> Result<()> {
        match &self.command {
            Command::Cluster { input, out, .. } => {
                require_file(input)?;
                require_out_dir(out)
            }
            Command::Summarize { input, result, out, .. } => {
                require_file(input)?;
                require_file(result)?;
                require_out_dir(out)
            }
            Command::Evaluate { result, labels_from, .. } => {
                require_file(result)?;
                require_file(labels_from)
            }
            Command::Bench { manifest, out, .. } => {
                require_file(manifest)?;
                require_out_dir(out)
            }
            Command::Synth { spec, out, .. } => {
                require_file(spec)?;
                require_out_dir(out)
            }
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    /// Output was written but the engine fell short of the requested k.
    Shortfall,
}

/// Execute a resolved command.
pub fn execute(config: &RunConfig) -> Result<Outcome> {
    match &config.command {
        Command::Cluster {
            input,
            ingest,
            engine,
            out,
        } => {
            let dataset = load_delimited(input, ingest)?;
            log::info!(
                "event=loaded file={} rows={} attributes={}",
                input.display(),
                dataset.n_rows(),
                dataset.n_attributes()
            );
            let result = cluster(&dataset, engine)?;
            if let Some(labels) = dataset.labels() {
                log::info!("event=purity value={:.6}", purity(&result, labels)?);
            }
            emit(out, &ResultDocument::from_result(&dataset, &result, Some(ingest)).to_json())?;
            Ok(match result.warning {
                Some(EngineWarning::Shortfall { .. }) => Outcome::Shortfall,
                None => Outcome::Done,
            })
        }
        Command::Summarize {
            input,
            result,
            ingest,
            report,
            format,
            out,
        } => {
            let doc = ResultDocument::load(result)?;
            let options = layer(doc.ingest.as_ref(), ingest.as_ref());
            let dataset = load_delimited(input, &options)?;
            let result = doc.to_result(&dataset)?;
            let summaries = summarize_result(&dataset, &result)?;
            let text = match format {
                ReportFormat::Text => render_report(&summaries, report).text,
                ReportFormat::Csv => render_report(&summaries, report).records,
                ReportFormat::Json => {
                    let mut s = serde_json::to_string_pretty(&summaries).expect("summaries serialize");
                    s.push('\n');
                    s
                }
            };
            emit(out, &text)?;
            Ok(Outcome::Done)
        }
        Command::Evaluate {
            result,
            labels_from,
            ingest,
        } => {
            let doc = ResultDocument::load(result)?;
            let options = layer(doc.ingest.as_ref(), ingest.as_ref());
            if options.class_column.is_none() {
                return Err(Error::MissingLabels);
            }
            let dataset = load_delimited(labels_from, &options)?;
            let labels = dataset.labels().ok_or(Error::MissingLabels)?;
            if labels.ids().len() != doc.n_rows {
                return Err(Error::ArityMismatch {
                    expected: doc.n_rows,
                    found: labels.ids().len(),
                });
            }
            let clusters: Vec<Vec<usize>> = doc.clusters.iter().map(|c| c.rows.clone()).collect();
            let p = crate::eval::purity_of_clusters(&clusters, labels.ids(), labels.n_classes())?;
            emit(
                &None,
                &format!("purity={p:.6} clusters={} rows={}\n", clusters.len(), doc.n_rows),
            )?;
            Ok(Outcome::Done)
        }
        Command::Bench {
            manifest,
            options,
            format,
            out,
        } => {
            let manifest = Manifest::load(manifest)?;
            let report = run_benchmark(&manifest, options)?;
            let text = match format {
                BenchFormat::Text => report.to_text(),
                BenchFormat::Json => report.to_json(),
            };
            emit(out, &text)?;
            Ok(Outcome::Done)
        }
        Command::Synth {
            spec,
            seed,
            delimiter,
            out,
        } => {
            let spec = PlantedMissingnessSpec::load(spec)?;
            let dataset = synth_missingness(&spec, *seed)?;
            let options = IngestOptions {
                delimiter: *delimiter,
                has_header: true,
                ..IngestOptions::default()
            };
            let mut buf = Vec::new();
            write_delimited(&dataset, &mut buf, &options)?;
            emit(out, &String::from_utf8(buf).expect("utf-8 output"))?;
            Ok(Outcome::Done)
        }
    }
}

fn init_logging(verbosity: u8) {
    let level = match verbosity {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().filter_or(LOG_ENV, level))
        .format(|buf, record| {
            writeln!(
                buf,
                "level={} target={} {}",
                record.level().as_str().to_ascii_lowercase(),
                record.target(),
                record.args()
            )
        })
        .target(env_logger::Target::Stderr)
        .try_init();
}

/// Exit code for an error: 1 for bad input or usage, 2 for algorithm failures.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_input_error() {
        1
    } else {
        2
    }
}

/// Entry point used by the binary. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    init_logging(cli.verbose);
    let env_threads = std::env::var(THREADS_ENV).ok();
    let config = match RunConfig::resolve(cli, env_threads.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    if let Some(n) = config.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("event=thread_pool_unchanged reason=\"{e}\"");
        }
    }
    match execute(&config) {
        Ok(Outcome::Done) => 0,
        Ok(Outcome::Shortfall) => {
            eprintln!("error: fewer clusters than requested; result written anyway");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
