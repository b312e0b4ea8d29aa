//! Command-line driver: ingestion, metrics, entropy and reporting, with
//! CI-gate exit codes.
//!
//! Exit codes are a stable contract: [`EXIT_OK`], [`EXIT_ERROR`] for input or
//! parse failures, [`EXIT_GATE`] when a configured gate is exceeded.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use thiserror::Error;

use crate::entropy::{EntropyError, ThresholdTable};
use crate::ingest::{self, IngestError, InterchangeError};
use crate::metrics::WmcWeighting;
use crate::model::ClassModel;
use crate::report::{analyze_model, counts_report, trend, Format, Render};
use crate::weyuker::{self, Population, RandomClasses, SuiteConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_GATE: i32 = 2;

/// Environment variable naming a default config file.
pub const CONFIG_ENV: &str = "ENTROPIA_CONFIG";

/// Random classes added to the weyuker population when not configured.
pub const DEFAULT_GENERATED_CLASSES: usize = 40;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Interchange(#[from] InterchangeError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error("config {path}: {message}")]
    Config { path: String, message: String },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputKind {
    Source,
    Interchange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum WeightArg {
    Unit,
    Cyclomatic,
}

impl From<WeightArg> for WmcWeighting {
    fn from(w: WeightArg) -> Self {
        match w {
            WeightArg::Unit => WmcWeighting::Unit,
            WeightArg::Cyclomatic => WmcWeighting::Cyclomatic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum FormatArg {
    Text,
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "entropia",
    version,
    about = "CK metrics and entropy-based design degradation"
)]
struct Cli {
    /// Config file (TOML) with defaults for any flag.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute metrics and the degradation score for one project.
    Analyze {
        /// Source files/directories, or one interchange file.
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Project label used in reports.
        #[arg(long)]
        project: Option<String>,
        #[command(flatten)]
        opts: Flags,
    },
    /// Score category counts directly (no source needed).
    Entropy {
        /// Category counts F_1 .. F_k.
        #[arg(required = true)]
        counts: Vec<u64>,
        /// Stated class total N; repeat to check several.
        #[arg(long = "total", value_name = "N")]
        totals: Vec<u64>,
        #[command(flatten)]
        opts: Flags,
    },
    /// Check Weyuker properties 1-6 for the CK metrics.
    Weyuker {
        /// Optional inputs joined into the population.
        paths: Vec<PathBuf>,
        /// Random classes added to the population.
        #[arg(long)]
        generated: Option<usize>,
        #[command(flatten)]
        opts: Flags,
    },
    /// Entropy and score across ordered versions of a project.
    Trend {
        #[arg(required = true, num_args = 2..)]
        paths: Vec<PathBuf>,
        /// Flag versions whose entropy rises by more than this.
        #[arg(long)]
        step: Option<f64>,
        #[command(flatten)]
        opts: Flags,
    },
    /// Write the interchange JSON for parsed sources.
    Dump {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[command(flatten)]
        opts: Flags,
    },
}

#[derive(Debug, Clone, Default, Args)]
struct Flags {
    #[arg(long, value_enum)]
    input_kind: Option<InputKind>,
    #[arg(long, value_enum)]
    wmc_weight: Option<WeightArg>,
    /// Threshold table (TOML, or JSON by extension).
    #[arg(long, value_name = "FILE")]
    thresholds: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Fail with exit 2 when N·H exceeds this.
    #[arg(long, value_name = "X")]
    gate_score: Option<f64>,
    /// Fail with exit 2 when H exceeds this.
    #[arg(long, value_name = "X")]
    gate_entropy: Option<f64>,
    /// Reject classes whose WMC is below the threshold table.
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    budget: Option<u64>,
    /// Write output here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

/// Config-file mirror of the flags. Flags win on conflict.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    input_kind: Option<InputKind>,
    wmc_weight: Option<WeightArg>,
    thresholds: Option<PathBuf>,
    format: Option<FormatArg>,
    gate_score: Option<f64>,
    gate_entropy: Option<f64>,
    strict: Option<bool>,
    seed: Option<u64>,
    budget: Option<u64>,
    out: Option<PathBuf>,
    step: Option<f64>,
    generated: Option<usize>,
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub input_kind: Option<InputKind>,
    pub weighting: WmcWeighting,
    pub thresholds: Option<PathBuf>,
    pub format: Format,
    pub gate_score: Option<f64>,
    pub gate_entropy: Option<f64>,
    pub strict: bool,
    pub seed: u64,
    pub budget: u64,
    pub out: Option<PathBuf>,
    pub step: f64,
    pub generated: usize,
}

impl CliConfig {
    fn resolve(flags: Flags, file: ConfigFile) -> Result<Self, CliError> {
        let cfg = CliConfig {
            input_kind: flags.input_kind.or(file.input_kind),
            weighting: flags
                .wmc_weight
                .or(file.wmc_weight)
                .map(Into::into)
                .unwrap_or_default(),
            thresholds: flags.thresholds.or(file.thresholds),
            format: flags
                .format
                .or(file.format)
                .map(Into::into)
                .unwrap_or_default(),
            gate_score: flags.gate_score.or(file.gate_score),
            gate_entropy: flags.gate_entropy.or(file.gate_entropy),
            strict: flags.strict || file.strict.unwrap_or(false),
            seed: flags.seed.or(file.seed).unwrap_or(0),
            budget: flags.budget.or(file.budget).unwrap_or(1000),
            out: flags.out.or(file.out),
            step: file.step.unwrap_or(0.0),
            generated: file.generated.unwrap_or(DEFAULT_GENERATED_CLASSES),
        };
        for (name, v) in [
            ("gate-score", cfg.gate_score),
            ("gate-entropy", cfg.gate_entropy),
        ] {
            if v.is_some_and(|v| v.is_nan() || v < 0.0) {
                return Err(CliError::Usage(format!("--{name} must be >= 0")));
            }
        }
        Ok(cfg)
    }

    fn thresholds(&self) -> Result<ThresholdTable, CliError> {
        match &self.thresholds {
            Some(p) => Ok(ThresholdTable::load(p)?),
            None => Ok(ThresholdTable::default()),
        }
    }

    /// Gate message when entropy or score exceed their limits.
    fn gate(&self, entropy: f64, score: f64) -> Option<String> {
        if let Some(limit) = self.gate_score.filter(|&l| score > l) {
            return Some(format!("degradation score {score:.6} exceeds gate {limit}"));
        }
        if let Some(limit) = self.gate_entropy.filter(|&l| entropy > l) {
            return Some(format!("entropy {entropy:.6} exceeds gate {limit}"));
        }
        None
    }
}

fn load_config(explicit: Option<&Path>) -> Result<ConfigFile, CliError> {
    let env_path = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    let Some(path) = explicit.map(Path::to_path_buf).or(env_path) else {
        return Ok(ConfigFile::default());
    };
    let err = |message: String| CliError::Config {
        path: path.display().to_string(),
        message,
    };
    let text = std::fs::read_to_string(&path).map_err(|e| err(e.to_string()))?;
    toml::from_str(&text).map_err(|e| err(e.to_string()))
}

/// Loads a model from paths: one interchange file, or MiniOO sources.
/// Without an explicit kind, a single `.json` path is read as interchange.
pub fn load_model(paths: &[PathBuf], kind: Option<InputKind>) -> Result<ClassModel, CliError> {
    let kind = kind.unwrap_or_else(|| match paths {
        [one] if one.extension().is_some_and(|e| e == "json") => InputKind::Interchange,
        _ => InputKind::Source,
    });
    match kind {
        InputKind::Source => Ok(ingest::parse_paths(paths)?),
        InputKind::Interchange => {
            let mut model = ClassModel::empty();
            for p in paths {
                let m = ingest::load_interchange(p)?;
                model = model.merge(&m).map_err(InterchangeError::from)?;
            }
            Ok(model)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Write {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Outcome of a command before it becomes an exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    GateBreached(String),
}

fn gate_outcome(cfg: &CliConfig, entropy: f64, score: f64) -> Outcome {
    cfg.gate(entropy, score)
        .map(Outcome::GateBreached)
        .unwrap_or(Outcome::Ok)
}

pub fn cmd_analyze(
    paths: &[PathBuf],
    project: Option<&str>,
    cfg: &CliConfig,
) -> Result<Outcome, CliError> {
    let model = load_model(paths, cfg.input_kind)?;
    let label = project.map(str::to_string).unwrap_or_else(|| {
        paths
            .iter()
            .map(|p| p.display().to_string())
            .collect::<Vec<_>>()
            .join(",")
    });
    let report = analyze_model(
        &label,
        &model,
        cfg.weighting,
        &cfg.thresholds()?,
        cfg.strict,
    )?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    emit(cfg.out.as_deref(), &report.render(cfg.format))?;
    Ok(gate_outcome(cfg, report.entropy, report.score))
}

pub fn cmd_entropy(counts: &[u64], totals: &[u64], cfg: &CliConfig) -> Result<Outcome, CliError> {
    let report = counts_report(counts, totals)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    emit(cfg.out.as_deref(), &report.render(cfg.format))?;
    Ok(gate_outcome(cfg, report.entropy, report.score))
}

/// Verdicts are findings, not failures: the outcome is always `Ok` once the
/// population loads.
pub fn cmd_weyuker(paths: &[PathBuf], cfg: &CliConfig) -> Result<Outcome, CliError> {
    let base = if paths.is_empty() {
        ClassModel::empty()
    } else {
        load_model(paths, cfg.input_kind)?
    };
    let population = RandomClasses::new(cfg.seed)
        .population(Population::with_interface_twins(base), cfg.generated)
        .map_err(IngestError::from)?;
    let config = SuiteConfig {
        seed: cfg.seed,
        budget: cfg.budget,
        weighting: cfg.weighting,
    };
    let verdicts = weyuker::run_weyuker_suite(&population, config);
    emit(cfg.out.as_deref(), &verdicts.render(cfg.format))?;
    Ok(Outcome::Ok)
}

/// Each path is one version; the gate applies to the last.
pub fn cmd_trend(paths: &[PathBuf], cfg: &CliConfig) -> Result<Outcome, CliError> {
    let thresholds = cfg.thresholds()?;
    let mut reports = Vec::with_capacity(paths.len());
    for p in paths {
        let model = load_model(std::slice::from_ref(p), cfg.input_kind)?;
        let report = analyze_model(
            &p.display().to_string(),
            &model,
            cfg.weighting,
            &thresholds,
            cfg.strict,
        )?;
        for w in &report.warnings {
            eprintln!("warning: {}: {w}", p.display());
        }
        reports.push(report);
    }
    let t = trend(&reports, cfg.step);
    emit(cfg.out.as_deref(), &t.render(cfg.format))?;
    let last = reports.last().expect("at least two versions");
    Ok(gate_outcome(cfg, last.entropy, last.score))
}

pub fn cmd_dump(paths: &[PathBuf], cfg: &CliConfig) -> Result<Outcome, CliError> {
    let model = load_model(paths, cfg.input_kind)?;
    emit(cfg.out.as_deref(), &ingest::to_interchange_string(&model))?;
    Ok(Outcome::Ok)
}

fn dispatch(cli: Cli) -> Result<Outcome, CliError> {
    let file = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Analyze {
            paths,
            project,
            opts,
        } => cmd_analyze(&paths, project.as_deref(), &CliConfig::resolve(opts, file)?),
        Command::Entropy {
            counts,
            totals,
            opts,
        } => cmd_entropy(&counts, &totals, &CliConfig::resolve(opts, file)?),
        Command::Weyuker {
            paths,
            generated,
            opts,
        } => {
            let mut cfg = CliConfig::resolve(opts, file)?;
            if let Some(n) = generated {
                cfg.generated = n;
            }
            cmd_weyuker(&paths, &cfg)
        }
        Command::Trend { paths, step, opts } => {
            let mut cfg = CliConfig::resolve(opts, file)?;
            if let Some(s) = step {
                cfg.step = s;
            }
            cmd_trend(&paths, &cfg)
        }
        Command::Dump { paths, opts } => cmd_dump(&paths, &CliConfig::resolve(opts, file)?),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(Outcome::Ok) => EXIT_OK,
        Ok(Outcome::GateBreached(msg)) => {
            eprintln!("gate: {msg}");
            EXIT_GATE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_config() {
        let flags = Flags {
            gate_score: Some(40.0),
            format: Some(FormatArg::Json),
            ..Flags::default()
        };
        let file: ConfigFile = toml::from_str(
            "gate_score = 10.0\nformat = \"csv\"\nwmc_weight = \"cyclomatic\"\nstrict = true\n",
        )
        .unwrap();
        let cfg = CliConfig::resolve(flags, file).unwrap();
        assert_eq!(cfg.gate_score, Some(40.0));
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.weighting, WmcWeighting::Cyclomatic);
        assert!(cfg.strict);
    }

    #[test]
    fn negative_gate_rejected() {
        let flags = Flags {
            gate_entropy: Some(-1.0),
            ..Flags::default()
        };
        assert!(CliConfig::resolve(flags, ConfigFile::default()).is_err());
    }

    #[test]
    fn unknown_config_keys_rejected() {
        assert!(toml::from_str::<ConfigFile>("gate = 1.0").is_err());
    }

    #[test]
    fn gate_semantics() {
        let cfg = CliConfig::resolve(
            Flags {
                gate_score: Some(40.0),
                ..Flags::default()
            },
            ConfigFile::default(),
        )
        .unwrap();
        assert_eq!(cfg.gate(0.8, 37.15), None);
        assert!(cfg.gate(0.8, 40.01).is_some());
    }
}
