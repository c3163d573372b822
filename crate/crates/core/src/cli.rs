//! Command-line front end.
//!
//! Table-shaped commands emit CSV (header row, 10 significant digits) or JSON;
//! scalar reports are JSON with a top-level `schema_version`. Exit codes:
//! 0 success, 2 usage error, 3 infeasible or degenerate parameters, 4 I/O.

use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::decision_cost::{
    alpha_from_critical, closed_form_minimizer, critical_from_alpha, expected_cost, numeric_minimizer,
    CostParams,
};
use crate::error::Error;
use crate::error_tradeoff::{type2_error, GaussianTestModel};
use crate::mc_oracle::{self, Execution, SimConfig, CHUNK_SIZE, RNG_ALGORITHM};
use crate::pvalue_dist::{
    cdf_under_alternative, pdf_under_alternative, reproducibility_probability, AlternativeSpec,
    ObservedResult,
};
use crate::screening::{
    combined_fpr_curve, false_positive_rate, gamma_for_factor, replication_threshold_factor, PriorOdds,
    ScreeningParams,
};
use crate::severity::{
    confidence_lower_limit, p_value_from_summary, severity, severity_curve, ReferenceDist, SeverityClaim,
    SummaryStats,
};
use crate::timeseries::{autocorrelation, lag_regression, t_from_correlation, Series};
use crate::Tail;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 42;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "errstat", version, about = "Error-statistics calculations")]
pub struct Cli {
    /// Output format; table commands default to csv, reports to json.
    #[arg(long, value_enum, global = true)]
    pub format: Option<OutputFormat>,
    /// Write output to this file instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TailArg {
    OneSided,
    TwoSided,
}

impl From<TailArg> for Tail {
    fn from(t: TailArg) -> Tail {
        match t {
            TailArg::OneSided => Tail::OneSidedUpper,
            TailArg::TwoSided => Tail::TwoSided,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Type II error against type I error for several effect sizes.
    Tradeoff(TradeoffArgs),
    /// False positive rate of the screening model.
    Screening(ScreeningArgs),
    /// Threshold factor needed to raise the true positive rate n-fold.
    Replication(ReplicationArgs),
    /// Expected cost of a critical value and its minimizer.
    Cost(CostArgs),
    /// p-value density and CDF under the alternative, or the reproducibility probability.
    Pdist(PdistArgs),
    /// Significance, confidence limit, severity and reproducibility report.
    Analyze(AnalyzeArgs),
    /// Monte Carlo check of the screening model.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct TradeoffArgs {
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.2, 0.5, 0.8])]
    pub effect_sizes: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Significance levels; defaults to 0.001, 0.005 and 0.01 to 0.99 in steps of 0.01.
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = TailArg::OneSided)]
    pub tail: TailArg,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("prior").args(["phi", "odds"])))]
#[command(group(ArgGroup::new("beta_source").args(["power", "coupled"]).required(true)))]
pub struct ScreeningArgs {
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.05], conflicts_with = "curve")]
    pub alpha: Vec<f64>,
    /// Use the default significance grid instead of --alpha.
    #[arg(long)]
    pub curve: bool,
    /// Power 1 − β, held fixed across α.
    #[arg(long)]
    pub power: Option<f64>,
    /// Take β from a one-sided Gaussian test at each α.
    #[arg(long)]
    pub coupled: bool,
    #[arg(long, default_value_t = 0.5, requires = "coupled")]
    pub effect_size: f64,
    #[arg(long, default_value_t = 1, requires = "coupled")]
    pub n: u32,
    /// Prior probabilities of the null.
    #[arg(long, value_delimiter = ',')]
    pub phi: Option<Vec<f64>>,
    /// Prior odds R = (1 − φ)/φ of the alternative.
    #[arg(long, value_delimiter = ',')]
    pub odds: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").args(["gamma", "factor", "self_test"]).required(true)))]
pub struct ReplicationArgs {
    /// Current true positive rate; reports the threshold factor.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Threshold factor; reports the true positive rate it requires.
    #[arg(long)]
    pub factor: Option<f64>,
    #[arg(long, default_value_t = 2.0)]
    pub n_fold: f64,
    /// Check γ = 4/9, n = 2 → r = 10 and the r = 10 inversion for n = 2..9.
    #[arg(long)]
    pub self_test: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").args(["curve", "minimize", "alpha_map"]).required(true)))]
pub struct CostArgs {
    #[arg(long, default_value_t = 1.0)]
    pub p0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub p1: f64,
    /// Cost ratios Ψ = P1/P0; overrides --p1 with Ψ·P0, one block per value.
    #[arg(long, value_delimiter = ',')]
    pub psi: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.5)]
    pub phi: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu0: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub mu1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Expected cost over a grid of critical values.
    #[arg(long)]
    pub curve: bool,
    /// Closed-form and numeric minimizers.
    #[arg(long)]
    pub minimize: bool,
    /// Critical value as a function of significance level.
    #[arg(long)]
    pub alpha_map: bool,
    #[arg(long, allow_negative_numbers = true)]
    pub c_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c_max: Option<f64>,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct PdistArgs {
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub delta: f64,
    #[arg(long, default_value_t = 10)]
    pub n: u32,
    /// p values at which to evaluate the density and CDF; defaults to 0.01..0.99.
    #[arg(long, value_delimiter = ',', conflicts_with = "reproducibility")]
    pub grid: Option<Vec<f64>>,
    /// Report the reproducibility probability of an observed result instead.
    #[arg(long)]
    pub reproducibility: bool,
    /// Observed two-sided p-value.
    #[arg(long, requires = "reproducibility", conflicts_with = "d_obs")]
    pub p_obs: Option<f64>,
    /// Observed standardized statistic.
    #[arg(long, requires = "reproducibility", allow_negative_numbers = true)]
    pub d_obs: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").args(["csv", "estimate"]).required(true)))]
pub struct AnalyzeArgs {
    /// Series file with a `label,value` header.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, default_value_t = 1, requires = "csv")]
    pub tau: usize,
    #[arg(long, requires = "stderr", allow_negative_numbers = true)]
    pub estimate: Option<f64>,
    #[arg(long, requires = "estimate")]
    pub stderr: Option<f64>,
    /// Observation count behind the summary; enables Student-t fields with df = n − 2.
    #[arg(long, conflicts_with = "csv")]
    pub n: Option<u32>,
    /// Degrees of freedom override for Student-t fields.
    #[arg(long)]
    pub df: Option<u32>,
    /// Bound b of the claim θ > b; defaults to the lower confidence limit.
    #[arg(long, allow_negative_numbers = true)]
    pub claim: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    /// Bounds at which to report a severity curve.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub sev_grid: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    /// Seed; falls back to ERRSTAT_SEED, then 42.
    #[arg(long, env = "ERRSTAT_SEED")]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 0.5)]
    pub phi: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub delta: f64,
    #[arg(long, default_value_t = 10)]
    pub n: u32,
    #[arg(long, value_enum, default_value_t = TailArg::OneSided)]
    pub tail: TailArg,
    /// Run chunks on one thread.
    #[arg(long)]
    pub serial: bool,
    /// Summarize simulated p-values instead of the confusion counts.
    #[arg(long)]
    pub pvalues: bool,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) => EXIT_USAGE,
            Error::Infeasible(_) | Error::Degenerate(_) => EXIT_INFEASIBLE,
            Error::Parse { .. } | Error::Io(_) => EXIT_IO,
        };
        CliError { code, message: e.to_string() }
    }
}

type CmdResult<T> = std::result::Result<T, CliError>;

/// Rendered command output.
pub enum Output {
    Table(Table),
    Report(Value),
}

/// Named numeric columns, one row per grid point.
pub struct Table {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Table { command, columns, rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_sig10(v)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, v)| ((*k).to_string(), json!(v)))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        json!({
            "schema_version": SCHEMA_VERSION,
            "generator": generator(),
            "command": self.command,
            "rows": rows,
        })
    }
}

fn generator() -> String {
    format!("errstat {}", env!("CARGO_PKG_VERSION"))
}

/// Formats with 10 significant digits in positional notation for
/// magnitudes in [1e-5, 1e10), scientific otherwise.
pub fn format_sig10(x: f64) -> String {
    if x == 0.0 {
        return "0.000000000".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // `{:.9e}` rounds to 10 significant digits: "d.ddddddddde<exp>"
    let sci = format!("{x:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..10).contains(&exp) {
        return sci;
    }
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let body = if exp >= 0 {
        let point = exp as usize + 1;
        format!("{}.{}", &digits[..point], &digits[point..])
            .trim_end_matches('.')
            .to_string()
    } else {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    };
    format!("{sign}{body}")
}

fn default_alpha_grid() -> Vec<f64> {
    let mut grid = vec![0.001, 0.005];
    grid.extend((1..=99).map(|k| k as f64 / 100.0));
    grid
}

fn default_p_grid() -> Vec<f64> {
    (1..=99).map(|k| k as f64 / 100.0).collect()
}

fn require_nonempty(name: &str, v: &[f64]) -> CmdResult<()> {
    if v.is_empty() {
        Err(CliError::usage(format!("--{name} must list at least one value")))
    } else {
        Ok(())
    }
}

fn require_open_unit(name: &str, values: &[f64]) -> CmdResult<()> {
    for &v in values {
        if !(v > 0.0 && v < 1.0) {
            return Err(CliError::usage(format!("--{name} values must lie in (0, 1), got {v}")));
        }
    }
    Ok(())
}

pub fn cmd_tradeoff(args: &TradeoffArgs) -> CmdResult<Table> {
    let alphas = args.alphas.clone().unwrap_or_else(default_alpha_grid);
    require_nonempty("alphas", &alphas)?;
    require_nonempty("effect-sizes", &args.effect_sizes)?;
    require_open_unit("alphas", &alphas)?;
    let mut table = Table::new("tradeoff", vec!["alpha", "effect_size", "beta"]);
    for &delta in &args.effect_sizes {
        let model = GaussianTestModel::new(delta, args.n, args.tail.into())?;
        for &alpha in &alphas {
            table.push(vec![alpha, delta, type2_error(alpha, &model)?]);
        }
    }
    Ok(table)
}

pub fn cmd_screening(args: &ScreeningArgs) -> CmdResult<Table> {
    let alphas = if args.curve { default_alpha_grid() } else { args.alpha.clone() };
    require_nonempty("alpha", &alphas)?;
    require_open_unit("alpha", &alphas)?;
    let phis: Vec<f64> = match (&args.phi, &args.odds) {
        (Some(phi), _) => {
            require_nonempty("phi", phi)?;
            require_open_unit("phi", phi)?;
            phi.clone()
        }
        (None, Some(odds)) => {
            require_nonempty("odds", odds)?;
            odds.iter()
                .map(|&r| PriorOdds::new(r).map(PriorOdds::prior_null))
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::usage(e.to_string()))?
        }
        (None, None) => vec![0.2, 0.5, 0.8],
    };
    let mut table = Table::new("screening", vec!["alpha", "beta", "phi", "fpr"]);
    for &phi in &phis {
        if args.coupled {
            for pt in combined_fpr_curve(args.effect_size, args.n, phi, &alphas)? {
                table.push(vec![pt.alpha, pt.beta, phi, pt.fpr]);
            }
        } else {
            let power = args.power.expect("clap requires --power or --coupled");
            for &alpha in &alphas {
                let params = ScreeningParams::new(alpha, power, phi)
                    .map_err(|e| CliError::usage(e.to_string()))?;
                table.push(vec![alpha, params.beta(), phi, false_positive_rate(&params)]);
            }
        }
    }
    Ok(table)
}

pub fn cmd_replication(args: &ReplicationArgs) -> CmdResult<Value> {
    if args.self_test {
        let r = replication_threshold_factor(4.0 / 9.0, 2.0)?;
        let mut inversions = Vec::new();
        let mut passed = (r - 10.0).abs() <= 1e-12;
        for n in 2..=9 {
            let n = f64::from(n);
            let gamma = gamma_for_factor(10.0, n)?;
            let expected = (10.0 - n) / (9.0 * n);
            let ok = (gamma - expected).abs() <= 1e-12;
            passed &= ok;
            inversions.push(json!({"n_fold": n, "gamma": gamma, "expected": expected, "ok": ok}));
        }
        return Ok(json!({
            "schema_version": SCHEMA_VERSION,
            "generator": generator(),
            "command": "replication",
            "mode": "self_test",
            "factor_at_gamma_4_9_n_2": r,
            "inversions_r_10": inversions,
            "passed": passed,
        }));
    }
    if let Some(gamma) = args.gamma {
        let r = replication_threshold_factor(gamma, args.n_fold)?;
        return Ok(json!({
            "schema_version": SCHEMA_VERSION,
            "generator": generator(),
            "command": "replication",
            "mode": "factor",
            "gamma": gamma,
            "n_fold": args.n_fold,
            "factor": r,
        }));
    }
    let r = args.factor.expect("clap requires one mode");
    let gamma = gamma_for_factor(r, args.n_fold)?;
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "generator": generator(),
        "command": "replication",
        "mode": "gamma",
        "factor": r,
        "n_fold": args.n_fold,
        "gamma": gamma,
    }))
}

fn cost_blocks(args: &CostArgs) -> CmdResult<Vec<(f64, CostParams)>> {
    let ratios = match &args.psi {
        Some(psi) => {
            require_nonempty("psi", psi)?;
            psi.clone()
        }
        None => vec![args.p1 / args.p0],
    };
    ratios
        .into_iter()
        .map(|psi| {
            let p1 = if args.psi.is_some() { psi * args.p0 } else { args.p1 };
            let params = CostParams::new(args.p0, p1, args.phi, args.mu0, args.mu1, args.sigma)?;
            Ok((psi, params))
        })
        .collect()
}

pub fn cmd_cost(args: &CostArgs) -> CmdResult<Table> {
    let blocks = cost_blocks(args)?;
    if args.curve {
        if args.steps < 2 {
            return Err(CliError::usage("--steps must be at least 2"));
        }
        let lo = args.c_min.unwrap_or(args.mu0.min(args.mu1) - 4.0 * args.sigma);
        let hi = args.c_max.unwrap_or(args.mu0.max(args.mu1) + 4.0 * args.sigma);
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(CliError::usage(format!("--c-min ({lo}) must be below --c-max ({hi})")));
        }
        let mut table = Table::new("cost", vec!["psi", "c", "cost", "alpha"]);
        for (psi, params) in &blocks {
            for i in 0..args.steps {
                let c = lo + (hi - lo) * i as f64 / (args.steps - 1) as f64;
                table.push(vec![*psi, c, expected_cost(c, params), alpha_from_critical(c, params)]);
            }
        }
        Ok(table)
    } else if args.minimize {
        let mut table = Table::new(
            "cost",
            vec!["psi", "closed_form_c", "numeric_c", "gap", "min_cost", "alpha_at_min"],
        );
        for (psi, params) in &blocks {
            let closed = closed_form_minimizer(params)?;
            let numeric = numeric_minimizer(params)?;
            table.push(vec![
                *psi,
                closed,
                numeric.critical_value,
                (closed - numeric.critical_value).abs(),
                expected_cost(closed, params),
                alpha_from_critical(closed, params),
            ]);
        }
        Ok(table)
    } else {
        let alphas = args.alphas.clone().unwrap_or_else(default_p_grid);
        require_nonempty("alphas", &alphas)?;
        require_open_unit("alphas", &alphas)?;
        let (_, params) = &blocks[0];
        let mut table = Table::new("cost", vec!["alpha", "critical_value"]);
        for &alpha in &alphas {
            table.push(vec![alpha, critical_from_alpha(alpha, params)?]);
        }
        Ok(table)
    }
}

pub fn cmd_pdist(args: &PdistArgs, warn: &mut dyn Write) -> CmdResult<Output> {
    if args.reproducibility {
        let observed = match (args.p_obs, args.d_obs) {
            (Some(p), _) => ObservedResult::PValue(p),
            (None, Some(d)) => ObservedResult::Statistic(d),
            (None, None) => return Err(CliError::usage("--reproducibility needs --p-obs or --d-obs")),
        };
        let d = observed.statistic()?;
        let prob = reproducibility_probability(&observed, args.alpha)?;
        return Ok(Output::Report(json!({
            "schema_version": SCHEMA_VERSION,
            "generator": generator(),
            "command": "pdist",
            "mode": "reproducibility",
            "d_obs": d,
            "p_obs_two_sided": observed.p_value()?,
            "alpha": args.alpha,
            "reproducibility_probability": prob,
            "convention": "two-sided test at alpha; true effect fixed at the observed value",
        })));
    }
    let raw = args.grid.clone().unwrap_or_else(default_p_grid);
    let mut grid = Vec::with_capacity(raw.len());
    for p in raw {
        if p == 0.0 || p == 1.0 {
            let _ = writeln!(warn, "warning: dropping p = {p} from the grid (density is unbounded there)");
        } else if !(p > 0.0 && p < 1.0) {
            return Err(CliError::usage(format!("--grid values must lie in [0, 1], got {p}")));
        } else {
            grid.push(p);
        }
    }
    require_nonempty("grid", &grid)?;
    let spec = AlternativeSpec::new(args.delta, args.n)?;
    let mut table = Table::new("pdist", vec!["p", "density", "cdf"]);
    for p in grid {
        table.push(vec![p, pdf_under_alternative(p, &spec)?, cdf_under_alternative(p, &spec)?]);
    }
    Ok(Output::Table(table))
}

#[derive(Serialize)]
struct Labeled {
    value: f64,
    convention: &'static str,
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> CmdResult<Value> {
    let mut report = Map::new();
    report.insert("schema_version".into(), json!(SCHEMA_VERSION));
    report.insert("generator".into(), json!(generator()));
    report.insert("command".into(), json!("analyze"));

    let stats: SummaryStats;
    let mut t_df: Option<u32> = args.df;
    if let Some(path) = &args.csv {
        let series = Series::from_csv_path(path)?;
        let fit = lag_regression(&series, args.tau)?;
        let r = autocorrelation(&series, args.tau)?;
        let n_pairs = fit.n_pairs as u32;
        let by_pairs = t_from_correlation(r, n_pairs)?;
        let by_length = t_from_correlation(r, series.len() as u32)?;
        report.insert("source".into(), json!("csv"));
        report.insert(
            "series".into(),
            json!({"path": path.display().to_string(), "length": series.len(), "start_label": series.start_label()}),
        );
        report.insert("fit".into(), serde_json::to_value(fit).expect("serializable"));
        report.insert(
            "correlation_t".into(),
            json!({
                "r": r,
                "n_pairs": {"n": n_pairs, "t": by_pairs.t, "df": by_pairs.df, "p_two_sided": by_pairs.p_two_sided},
                "n_series_length": {"n": series.len(), "t": by_length.t, "df": by_length.df, "p_two_sided": by_length.p_two_sided},
            }),
        );
        t_df = t_df.or(Some(n_pairs - 2));
        stats = SummaryStats::new(fit.beta1, fit.stderr_beta1, n_pairs, t_df.unwrap_or(1))?;
    } else {
        let estimate = args.estimate.expect("clap requires a source");
        let stderr = args.stderr.expect("clap requires --stderr with --estimate");
        if t_df.is_none() {
            if let Some(n) = args.n {
                if n < 3 {
                    return Err(CliError::usage("--n must be at least 3 for df = n − 2"));
                }
                t_df = Some(n - 2);
            }
        }
        stats = SummaryStats::new(estimate, stderr, args.n.unwrap_or(1).max(1), t_df.unwrap_or(1))?;
        report.insert("source".into(), json!("summary"));
    }

    let with_t = t_df.is_some();
    let t_or_null = |f: &dyn Fn() -> crate::Result<f64>| -> CmdResult<Value> {
        if with_t {
            Ok(json!(f()?))
        } else {
            Ok(Value::Null)
        }
    };

    report.insert("estimate".into(), json!(stats.estimate()));
    report.insert("stderr".into(), json!(stats.stderr()));
    report.insert("n".into(), if args.csv.is_some() || args.n.is_some() { json!(stats.n()) } else { Value::Null });
    report.insert("df".into(), match t_df { Some(df) => json!(df), None => Value::Null });
    report.insert(
        "statistic".into(),
        serde_json::to_value(Labeled { value: stats.statistic(), convention: "estimate / stderr" }).expect("serializable"),
    );
    report.insert(
        "p_value".into(),
        json!({
            "one_sided_normal": p_value_from_summary(&stats, Tail::OneSidedUpper, ReferenceDist::Normal),
            "two_sided_normal": p_value_from_summary(&stats, Tail::TwoSided, ReferenceDist::Normal),
            "two_sided_t": t_or_null(&|| Ok(p_value_from_summary(&stats, Tail::TwoSided, ReferenceDist::StudentT)))?,
            "null_hypothesis": "parameter = 0",
        }),
    );
    let lcl_normal = confidence_lower_limit(&stats, args.level, ReferenceDist::Normal)?;
    report.insert(
        "confidence_lower_limit".into(),
        json!({
            "level": args.level,
            "normal": lcl_normal,
            "student_t": t_or_null(&|| confidence_lower_limit(&stats, args.level, ReferenceDist::StudentT))?,
        }),
    );
    let bound = args.claim.unwrap_or(lcl_normal);
    let claim = SeverityClaim::greater_than(bound);
    report.insert(
        "severity".into(),
        json!({
            "claim": format!("parameter > {bound}"),
            "bound": bound,
            "normal": severity(&stats, &claim, ReferenceDist::Normal)?,
            "student_t": t_or_null(&|| severity(&stats, &claim, ReferenceDist::StudentT))?,
            "convention": "probability of an estimate below the observed one if the parameter equalled the bound",
        }),
    );
    if let Some(bounds) = &args.sev_grid {
        let curve = severity_curve(&stats, bounds, ReferenceDist::Normal)?;
        report.insert("severity_curve".into(), serde_json::to_value(curve).expect("serializable"));
    }
    let observed = ObservedResult::Estimate { estimate: stats.estimate(), stderr: stats.stderr() };
    report.insert(
        "reproducibility".into(),
        json!({
            "alpha": args.alpha,
            "probability": reproducibility_probability(&observed, args.alpha)?,
            "convention": "two-sided normal test; true effect fixed at the observed value",
        }),
    );
    Ok(Value::Object(report))
}

pub fn cmd_simulate(args: &SimulateArgs) -> CmdResult<Value> {
    if args.trials == 0 {
        return Err(CliError::usage("--trials must be positive"));
    }
    let config = SimConfig {
        num_trials: args.trials,
        seed: args.seed.unwrap_or(DEFAULT_SEED),
        prior_null: args.phi,
        alpha: args.alpha,
        effect_size: args.delta,
        n_per_study: args.n,
        tail: args.tail.into(),
    };
    config.validate().map_err(|e| CliError::usage(e.to_string()))?;
    let execution = if args.serial { Execution::Serial } else { Execution::Parallel };
    let rng = json!({"algorithm": RNG_ALGORITHM, "chunk_size": CHUNK_SIZE, "seed": config.seed});
    let model = GaussianTestModel::new(config.effect_size, config.n_per_study, config.tail)?;

    if args.pvalues {
        let summary = mc_oracle::simulate_pvalues_with(&config, execution)?;
        let z: Vec<Value> = summary
            .ecdf_at_deciles
            .iter()
            .zip(&summary.reference_at_deciles)
            .zip(&summary.stderr_at_deciles)
            .map(|((e, r), s)| z_score(*e, *r, *s))
            .collect();
        return Ok(json!({
            "schema_version": SCHEMA_VERSION,
            "generator": generator(),
            "command": "simulate",
            "mode": "pvalues",
            "rng": rng,
            "config": config,
            "summary": summary,
            "z_scores_at_deciles": z,
        }));
    }

    let outcome = mc_oracle::simulate_studies_with(&config, execution)?;
    let power = crate::error_tradeoff::power(config.alpha, &model)?;
    let phi = config.prior_null;
    let fp = config.alpha * phi;
    let tp = power * (1.0 - phi);
    let analytic_fpr = if fp + tp > 0.0 { Some(fp / (fp + tp)) } else { None };
    let z = |emp: Option<f64>, se: Option<f64>, analytic: Option<f64>| match (emp, se, analytic) {
        (Some(e), Some(s), Some(a)) => z_score(e, a, s),
        _ => Value::Null,
    };
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "generator": generator(),
        "command": "simulate",
        "mode": "studies",
        "rng": rng,
        "config": config,
        "outcome": outcome,
        "analytic": {"fpr": analytic_fpr, "power": power, "size": config.alpha},
        "z_scores": {
            "fpr": z(outcome.empirical_fpr, outcome.mc_stderr_fpr, analytic_fpr),
            "power": z(outcome.empirical_power, outcome.mc_stderr_power, Some(power)),
            "size": z(outcome.empirical_size, outcome.mc_stderr_size, Some(config.alpha)),
        },
    }))
}

fn z_score(empirical: f64, analytic: f64, stderr: f64) -> Value {
    if stderr > 0.0 {
        json!((empirical - analytic) / stderr)
    } else {
        Value::Null
    }
}

/// Executes a parsed command and renders it in the requested format.
pub fn execute(cli: &Cli, warn: &mut dyn Write) -> CmdResult<String> {
    let output = match &cli.command {
        Command::Tradeoff(a) => Output::Table(cmd_tradeoff(a)?),
        Command::Screening(a) => Output::Table(cmd_screening(a)?),
        Command::Cost(a) => Output::Table(cmd_cost(a)?),
        Command::Pdist(a) => cmd_pdist(a, warn)?,
        Command::Replication(a) => Output::Report(cmd_replication(a)?),
        Command::Analyze(a) => Output::Report(cmd_analyze(a)?),
        Command::Simulate(a) => Output::Report(cmd_simulate(a)?),
    };
    match (output, cli.format) {
        (Output::Table(t), None | Some(OutputFormat::Csv)) => Ok(t.to_csv()),
        (Output::Table(t), Some(OutputFormat::Json)) => Ok(render_json(&t.to_json())),
        (Output::Report(v), None | Some(OutputFormat::Json)) => Ok(render_json(&v)),
        (Output::Report(_), Some(OutputFormat::Csv)) => {
            Err(CliError::usage("this command only produces a JSON report"))
        }
    }
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Parses `args`, runs the command and writes to `out` (or `--output`).
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let rendered = match execute(&cli, err) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            return e.code;
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, rendered.as_bytes())
            .map_err(|e| format!("{}: {e}", path.display())),
        None => out.write_all(rendered.as_bytes()).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(msg) => {
            let _ = writeln!(err, "error: i/o error: {msg}");
            EXIT_IO
        }
    }
}
