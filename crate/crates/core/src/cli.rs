//! `gospa` command-line front end.
//!
//! ```text
//! gospa compute truth.json estimate.json --c 8 --alpha 2 --p 1 --metric gospa
//! gospa mean truth_model.json estimate_model.json --c 8 --p 2 --samples 1000 --seed 7
//! gospa table1 --samples 1000 --seed 7 --format text
//! ```
//!
//! Exit codes: 0 on success, 2 for usage or input errors, 1 for internal
//! failures. Results go to stdout, diagnostics to stderr.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::GospaError;
use crate::metrics::{gospa, BaseDistance, GospaParams, TargetSet};
use crate::rfs::{
    estimate_metric_with, run_table1, BernoulliComponent, EstimatorConfig, Execution,
    MetricEstimate, MetricVariant, MultiBernoulli, PairSampler, Table1, DEFAULT_SAMPLES,
    TABLE1_EXPONENTS, TABLE1_FALSE, TABLE1_MISSED,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gospa", version, about = "GOSPA / OSPA metrics between finite sets and random finite sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distance between two point-set files.
    Compute(ComputeArgs),
    /// Monte Carlo mean / root-mean-power metric between two multi-Bernoulli model files.
    Mean(MeanArgs),
    /// Missed/false target scenario grid for GOSPA, OSPA and unnormalized OSPA.
    Table1(Table1Args),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaseMetric {
    Euclidean,
    Manhattan,
}

#[derive(Debug, Args)]
pub struct MetricArgs {
    /// Cut-off distance.
    #[arg(long)]
    pub c: f64,
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[arg(long, value_enum, default_value_t = MetricVariant::Gospa)]
    pub metric: MetricVariant,
    #[arg(long, value_enum, default_value_t = BaseMetric::Euclidean)]
    pub base: BaseMetric,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Significant digits in printed numbers.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub precision: u8,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// Ground-truth point set (JSON document, or CSV with one point per line).
    pub truth: PathBuf,
    /// Estimated point set.
    pub estimate: PathBuf,
    #[command(flatten)]
    pub metric: MetricArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SamplingArgs {
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 1 runs serially, 0 uses every core. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct MeanArgs {
    /// Ground-truth multi-Bernoulli model (JSON).
    pub truth: PathBuf,
    /// Estimate multi-Bernoulli model (JSON).
    pub estimate: PathBuf,
    #[command(flatten)]
    pub metric: MetricArgs,
    /// Outer exponent p'; defaults to p.
    #[arg(long = "p-prime")]
    pub p_prime: Option<f64>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Point-set file: `{"dimension": 2, "points": [[x, y], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSetDocument {
    pub dimension: usize,
    pub points: Vec<Vec<f64>>,
}

impl PointSetDocument {
    pub fn from_target_set(set: &TargetSet<f64>) -> Self {
        Self {
            dimension: set.dimension(),
            points: set.to_points(),
        }
    }

    pub fn to_target_set(&self) -> Result<TargetSet<f64>, GospaError> {
        if self.dimension == 0 && !self.points.is_empty() {
            return Err(GospaError::InvalidInput("dimension must be >= 1".into()));
        }
        for (i, point) in self.points.iter().enumerate() {
            if point.len() != self.dimension {
                return Err(GospaError::InvalidInput(format!(
                    "point {i} has {} coordinates, document declares dimension {}",
                    point.len(),
                    self.dimension
                )));
            }
        }
        TargetSet::new(self.dimension, &self.points)
    }

    pub fn parse_json(text: &str) -> Result<Self, GospaError> {
        serde_json::from_str(text).map_err(|e| GospaError::InvalidInput(format!("malformed point set: {e}")))
    }

    /// One point per line, comma separated, no header. Blank lines are skipped.
    pub fn parse_csv(text: &str) -> Result<Self, GospaError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut points = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| GospaError::InvalidInput(format!("csv: {e}")))?;
            if record.iter().all(str::is_empty) {
                continue;
            }
            let point = record
                .iter()
                .map(|field| {
                    field.parse::<f64>().map_err(|_| {
                        GospaError::InvalidInput(format!("csv line {}: `{field}` is not a number", line + 1))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            points.push(point);
        }
        let dimension = points.first().map_or(0, Vec::len);
        Ok(Self { dimension, points })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("point sets serialize")
    }
}

/// Multi-Bernoulli model file:
/// `{"components": [{"existence": 1.0, "mean": [..], "covariance": [[..]]}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub components: Vec<ComponentDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentDocument {
    pub existence: f64,
    pub mean: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
}

impl ModelDocument {
    pub fn from_model(model: &MultiBernoulli<f64>) -> Self {
        Self {
            components: model
                .components()
                .iter()
                .map(|c| ComponentDocument {
                    existence: c.existence(),
                    mean: c.mean().to_vec(),
                    covariance: c.covariance().to_vec(),
                })
                .collect(),
        }
    }

    pub fn to_model(&self) -> Result<MultiBernoulli<f64>, GospaError> {
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(index, c)| {
                BernoulliComponent::new(c.existence, c.mean.clone(), c.covariance.clone()).map_err(|e| match e {
                    GospaError::NotPositiveSemidefinite { .. } => {
                        GospaError::NotPositiveSemidefinite { component: index }
                    }
                    GospaError::InvalidInput(msg) => GospaError::InvalidInput(format!("component {index}: {msg}")),
                    other => other,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        MultiBernoulli::new(components)
    }

    pub fn parse_json(text: &str) -> Result<Self, GospaError> {
        serde_json::from_str(text).map_err(|e| GospaError::InvalidInput(format!("malformed model: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("models serialize")
    }
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Internal(String),
}

impl From<GospaError> for CliError {
    fn from(e: GospaError) -> Self {
        Self::Input(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            Self::Input(_) => EXIT_USAGE,
            Self::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Input(m) | Self::Internal(m) => m,
        }
    }
}

/// Configuration echoed back in every report.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub c: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_prime: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricVariant>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub localization_cost_p: f64,
    pub missed_count: usize,
    pub false_count: usize,
    pub missed_cost_p: f64,
    pub false_cost_p: f64,
    /// (truth index, estimate index)
    pub assignment: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComputeReport {
    pub config: ConfigEcho,
    pub total: f64,
    pub decomposition: Option<DecompositionReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeanReport {
    pub config: ConfigEcho,
    pub estimate: MetricEstimate<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table1Report {
    pub config: ConfigEcho,
    pub table: Table1<f64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum RunReport {
    Compute(ComputeReport),
    Mean(MeanReport),
    Table1(Table1Report),
}

/// Parses `args` (including the program name), runs the command and writes
/// the report to `out`. Returns the process exit code.
pub fn run<I, A>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    match execute(&cli.command) {
        Ok(text) => match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "error: writing output: {e}");
                EXIT_INTERNAL
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

/// Runs a parsed command and returns the rendered report.
fn execute(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Compute(args) => {
            let report = cmd_compute(args)?;
            Ok(render(&RunReport::Compute(report), &args.output))
        }
        Command::Mean(args) => {
            let report = cmd_mean(args)?;
            Ok(render(&RunReport::Mean(report), &args.output))
        }
        Command::Table1(args) => {
            let report = cmd_table1(args)?;
            Ok(render(&RunReport::Table1(report), &args.output))
        }
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn load_point_set(path: &Path) -> Result<TargetSet<f64>, GospaError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| GospaError::InvalidInput(format!("{}: {e}", path.display())))?;
    let is_csv = path
        .extension()
        .is_some_and(|ext| ext.eq_ignore_ascii_case("csv"));
    let doc = if is_csv {
        PointSetDocument::parse_csv(&text)?
    } else {
        PointSetDocument::parse_json(&text)?
    };
    doc.to_target_set()
        .map_err(|e| GospaError::InvalidInput(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<MultiBernoulli<f64>, CliError> {
    let doc = ModelDocument::parse_json(&read_text(path)?)?;
    doc.to_model()
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn params_from(args: &MetricArgs) -> Result<GospaParams<f64>, GospaError> {
    let base = match args.base {
        BaseMetric::Euclidean => BaseDistance::Euclidean,
        BaseMetric::Manhattan => BaseDistance::Manhattan,
    };
    Ok(GospaParams::new(args.c, args.alpha, args.p)?.with_base(base))
}

fn with_threads<R: Send>(threads: usize, f: impl FnOnce(Execution) -> R + Send) -> Result<R, CliError> {
    match threads {
        0 => Ok(f(Execution::Parallel)),
        1 => Ok(f(Execution::Serial)),
        n => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
            Ok(pool.install(|| f(Execution::Parallel)))
        }
    }
}

fn cmd_compute(args: &ComputeArgs) -> Result<ComputeReport, CliError> {
    let params = params_from(&args.metric)?;
    let truth = load_point_set(&args.truth)?;
    let estimate = load_point_set(&args.estimate)?;
    let config = ConfigEcho {
        c: args.metric.c,
        alpha: (args.metric.metric == MetricVariant::Gospa).then_some(args.metric.alpha),
        p: Some(args.metric.p),
        p_prime: None,
        seed: None,
        samples: None,
        metric: Some(args.metric.metric),
    };
    let (total, decomposition) = match args.metric.metric {
        MetricVariant::Gospa => {
            let breakdown = gospa(&truth, &estimate, &params)?;
            let decomposition = breakdown.decomposition.map(|d| DecompositionReport {
                localization_cost_p: d.localization_cost_p,
                missed_count: d.missed_count,
                false_count: d.false_count,
                missed_cost_p: d.missed_cost_p,
                false_cost_p: d.false_cost_p,
                assignment: d.assignment.pairs().to_vec(),
            });
            (breakdown.total, decomposition)
        }
        other => (other.evaluate(&truth, &estimate, &params)?, None),
    };
    Ok(ComputeReport {
        config,
        total,
        decomposition,
    })
}

fn cmd_mean(args: &MeanArgs) -> Result<MeanReport, CliError> {
    let params = params_from(&args.metric)?;
    let p_prime = args.p_prime.unwrap_or(args.metric.p);
    let cfg = EstimatorConfig::new(p_prime, args.sampling.samples, args.sampling.seed)?;
    let sampler = PairSampler::independent(load_model(&args.truth)?, load_model(&args.estimate)?);
    let metric = args.metric.metric;
    let estimate = with_threads(args.sampling.threads, |execution| {
        estimate_metric_with(&sampler, &params, &cfg, metric, execution)
    })??;
    Ok(MeanReport {
        config: ConfigEcho {
            c: args.metric.c,
            alpha: (metric == MetricVariant::Gospa).then_some(args.metric.alpha),
            p: Some(args.metric.p),
            p_prime: Some(p_prime),
            seed: Some(args.sampling.seed),
            samples: Some(args.sampling.samples),
            metric: Some(metric),
        },
        estimate,
    })
}

fn cmd_table1(args: &Table1Args) -> Result<Table1Report, CliError> {
    if args.sampling.samples == 0 {
        return Err(CliError::Input("samples must be >= 1".into()));
    }
    let (samples, seed) = (args.sampling.samples, args.sampling.seed);
    let table = with_threads(args.sampling.threads, |execution| {
        run_table1::<f64>(samples, seed, execution)
    })??;
    Ok(Table1Report {
        config: ConfigEcho {
            c: table.cutoff,
            alpha: Some(2.0),
            p: None,
            p_prime: None,
            seed: Some(seed),
            samples: Some(samples),
            metric: None,
        },
        table,
    })
}

/// `value` with `digits` significant digits, trailing zeros removed.
pub fn format_significant(value: f64, digits: u8) -> String {
    if value == 0.0 || !value.is_finite() {
        return if value == 0.0 { "0".into() } else { value.to_string() };
    }
    let magnitude = value.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    let mut s = format!("{value:.decimals$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

fn round_significant(value: f64, digits: u8) -> f64 {
    format_significant(value, digits).parse().unwrap_or(value)
}

fn render(report: &RunReport, output: &OutputArgs) -> String {
    let digits = output.precision;
    let f = |v: f64| format_significant(v, digits);
    match output.format {
        OutputFormat::Json => {
            let mut value = serde_json::to_value(report).expect("reports serialize");
            round_json_numbers(&mut value, digits);
            let mut s = serde_json::to_string_pretty(&value).expect("json values serialize");
            s.push('\n');
            s
        }
        OutputFormat::Csv => render_csv(report, &f),
        OutputFormat::Text => render_text(report, &f),
    }
}

fn round_json_numbers(value: &mut serde_json::Value, digits: u8) {
    use serde_json::Value;
    match value {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(|v| round_significant(v, digits)) {
                if let Some(rounded) = serde_json::Number::from_f64(r) {
                    *n = rounded;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|v| round_json_numbers(v, digits)),
        Value::Object(map) => map.values_mut().for_each(|v| round_json_numbers(v, digits)),
        _ => {}
    }
}

fn pairs_text(pairs: &[(usize, usize)], sep: &str) -> String {
    pairs
        .iter()
        .map(|(i, j)| format!("{i}-{j}"))
        .collect::<Vec<_>>()
        .join(sep)
}

fn render_csv(report: &RunReport, f: &dyn Fn(f64) -> String) -> String {
    let mut s = String::new();
    match report {
        RunReport::Compute(r) => {
            s.push_str("metric,total,localization_cost_p,missed_count,false_count,missed_cost_p,false_cost_p,assignment\n");
            let metric = r.config.metric.map_or("gospa", MetricVariant::name);
            match &r.decomposition {
                Some(d) => {
                    let _ = writeln!(
                        s,
                        "{metric},{},{},{},{},{},{},{}",
                        f(r.total),
                        f(d.localization_cost_p),
                        d.missed_count,
                        d.false_count,
                        f(d.missed_cost_p),
                        f(d.false_cost_p),
                        pairs_text(&d.assignment, ";")
                    );
                }
                None => {
                    let _ = writeln!(s, "{metric},{},,,,,,", f(r.total));
                }
            }
        }
        RunReport::Mean(r) => {
            s.push_str("metric,value,standard_error,samples\n");
            let metric = r.config.metric.map_or("gospa", MetricVariant::name);
            let _ = writeln!(
                s,
                "{metric},{},{},{}",
                f(r.estimate.value),
                f(r.estimate.standard_error),
                r.estimate.samples
            );
        }
        RunReport::Table1(r) => {
            s.push_str("exponent,metric,n_missed,n_false,value,standard_error,samples\n");
            for cell in &r.table.cells {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    cell.exponent,
                    cell.metric.name(),
                    cell.n_missed,
                    cell.n_false,
                    f(cell.estimate.value),
                    f(cell.estimate.standard_error),
                    cell.estimate.samples
                );
            }
        }
    }
    s
}

fn render_text(report: &RunReport, f: &dyn Fn(f64) -> String) -> String {
    let mut s = String::new();
    match report {
        RunReport::Compute(r) => {
            let metric = r.config.metric.map_or("gospa", MetricVariant::name);
            let _ = writeln!(s, "metric: {metric}");
            let _ = writeln!(s, "total: {}", f(r.total));
            if let Some(d) = &r.decomposition {
                let _ = writeln!(s, "localization_cost_p: {}", f(d.localization_cost_p));
                let _ = writeln!(s, "missed: {} (cost_p {})", d.missed_count, f(d.missed_cost_p));
                let _ = writeln!(s, "false: {} (cost_p {})", d.false_count, f(d.false_cost_p));
                let _ = writeln!(s, "assignment: {}", pairs_text(&d.assignment, " "));
            }
        }
        RunReport::Mean(r) => {
            let metric = r.config.metric.map_or("gospa", MetricVariant::name);
            let _ = writeln!(s, "metric: {metric}");
            let _ = writeln!(s, "value: {}", f(r.estimate.value));
            let _ = writeln!(s, "standard_error: {}", f(r.estimate.standard_error));
            let _ = writeln!(s, "samples: {}", r.estimate.samples);
        }
        RunReport::Table1(r) => {
            let t = &r.table;
            let _ = writeln!(
                s,
                "c = {}, samples = {}, seed = {}",
                f(t.cutoff),
                t.samples,
                t.master_seed
            );
            for exponent in TABLE1_EXPONENTS {
                let _ = writeln!(s, "\np' = p = {exponent}");
                let _ = write!(s, "{:<8}{:>8}", "metric", "false");
                for m in TABLE1_MISSED {
                    let _ = write!(s, "{:>22}", format!("missed {m}"));
                }
                s.push('\n');
                for metric in MetricVariant::ALL {
                    let label = match metric {
                        MetricVariant::Gospa => "GOSPA",
                        MetricVariant::Ospa => "OSPA",
                        MetricVariant::UnnormalizedOspa => "UOSPA",
                    };
                    for n_false in TABLE1_FALSE {
                        let _ = write!(s, "{label:<8}{n_false:>8}");
                        for n_missed in TABLE1_MISSED {
                            let cell = t
                                .get(exponent, metric, n_missed, n_false)
                                .expect("every grid cell is computed");
                            let entry = format!(
                                "{} ± {}",
                                f(cell.estimate.value),
                                f(cell.estimate.standard_error)
                            );
                            let _ = write!(s, "{entry:>22}");
                        }
                        s.push('\n');
                    }
                }
            }
        }
    }
    s
}
