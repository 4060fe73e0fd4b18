//! Command-line front end.
//!
//! Each subcommand produces a [`Table`]; the same table is rendered either as
//! CSV (header row, `#` comment lines for metadata and warnings) or as a JSON
//! object `{"meta": …, "data": […], "warnings": […]}`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::bessel::{bessel_j, bessel_j_derivative, bessel_zeros, BesselOrder, DEFAULT_ZERO_TOL};
use crate::bridge::{
    simulate_batch, simulate_euler_path, simulate_spacetime_path, BridgeParams, PathSample,
    TimeGrid, DEFAULT_END_FRACTION,
};
use crate::error::Error;
use crate::kl::{
    default_truncation, eigen_unweighted, eigen_weighted, kl_sample_batch,
    DEFAULT_VARIANCE_FRACTION,
};
use crate::normsq::{
    laplace_transform, laplace_weighted_half, laplace_weighted_half_product, large_deviation_tail,
    rayleigh_sum, rayleigh_tail_estimate, small_deviation, survival, NormSqDistribution,
    SurvivalSeriesConfig, TailConstantForm, DEFAULT_ZERO_COUNT,
};
use crate::verify::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const GRAMMAR: &str =
    "usage: alpha-bridge <bessel|eigen|simulate|laplace|survival|tails|rayleigh|verify> \
--alpha <f> --T <f> [--S <f>] [--count <n>] [--x <f>|--c <f>] [--N <n>] [--paths <n>] [--grid <n>] \
[--method euler|spacetime|kl|weighted-kl] [--seed <u64>] [--format csv|json] [--out <path>] \
[--suite bessel|kl|normsq|all]";

#[derive(Parser, Debug)]
#[command(
    name = "alpha-bridge",
    version,
    about = "Numerics for α-Wiener bridges"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum CommandKind {
    Bessel,
    Eigen,
    Simulate,
    Laplace,
    Survival,
    Tails,
    Rayleigh,
    Verify,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Zeros of J_ν (ν = α − 1/2), or J_ν and J_ν' at --x.
    Bessel(Flags),
    /// Eigenvalues λ_k, or κ_k of the weighted expansion when --S is given.
    Eigen(Flags),
    /// Sample paths on a uniform grid.
    Simulate(Flags),
    /// Laplace transform of ∫X², or of the weighted α = 1/2 functional when --S is given.
    Laplace(Flags),
    /// P(∫X² > x) from the alternating series; --N sets the number of arcs.
    Survival(Flags),
    /// Survival value next to the large- and small-deviation asymptotes.
    Tails(Flags),
    /// Partial Rayleigh sum over --N zeros and the exact value.
    Rayleigh(Flags),
    /// Invariant suites.
    Verify(Flags),
}

impl Command {
    fn split(self) -> (CommandKind, Flags) {
        match self {
            Command::Bessel(f) => (CommandKind::Bessel, f),
            Command::Eigen(f) => (CommandKind::Eigen, f),
            Command::Simulate(f) => (CommandKind::Simulate, f),
            Command::Laplace(f) => (CommandKind::Laplace, f),
            Command::Survival(f) => (CommandKind::Survival, f),
            Command::Tails(f) => (CommandKind::Tails, f),
            Command::Rayleigh(f) => (CommandKind::Rayleigh, f),
            Command::Verify(f) => (CommandKind::Verify, f),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    Euler,
    Spacetime,
    Kl,
    WeightedKl,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum SuiteArg {
    Bessel,
    Kl,
    Normsq,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Bessel => Suite::Bessel,
            SuiteArg::Kl => Suite::Kl,
            SuiteArg::Normsq => Suite::Normsq,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(clap::Args, Debug, Clone)]
struct Flags {
    /// Bridge parameter α > 0 (defaults to 1 for verify).
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Horizon T > 0.
    #[arg(long = "T", default_value_t = 1.0, allow_negative_numbers = true)]
    horizon: f64,
    /// Weighted-expansion horizon S ∈ (0, T).
    #[arg(long = "S", allow_negative_numbers = true)]
    horizon_s: Option<f64>,
    /// Number of zeros or eigenvalues.
    #[arg(long)]
    count: Option<usize>,
    /// Evaluation points (comma separated).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    x: Vec<f64>,
    /// Laplace arguments (comma separated).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    c: Vec<f64>,
    /// Truncation: product factors, Rayleigh terms, series arcs or KL terms.
    #[arg(long = "N")]
    truncation: Option<usize>,
    #[arg(long, default_value_t = 1)]
    paths: usize,
    /// Number of grid points.
    #[arg(long, default_value_t = 101)]
    grid: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Spacetime)]
    method: MethodArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,
}

/// The fully resolved configuration echoed in every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub subcommand: &'static str,
    pub version: &'static str,
    pub alpha: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    #[serde(rename = "S")]
    pub horizon_s: Option<f64>,
    pub count: Option<usize>,
    pub x: Vec<f64>,
    pub c: Vec<f64>,
    #[serde(rename = "N")]
    pub truncation: Option<usize>,
    pub paths: usize,
    pub grid: usize,
    pub method: MethodArg,
    pub seed: u64,
    pub format: FormatArg,
    pub out: Option<String>,
    pub suite: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Shortest round-trip decimal, switching to exponent form outside [1e-4, 1e15).
fn format_float(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Column-oriented result shared by both output formats.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub warnings: Vec<String>,
    /// Values derived during the run (e.g. the chosen truncation).
    pub derived: Map<String, Value>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            ..Default::default()
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn meta(&self, config: &RunConfig) -> Value {
        let mut meta = serde_json::to_value(config).expect("config serializes");
        if let Value::Object(m) = &mut meta {
            for (k, v) in &self.derived {
                m.insert(k.clone(), v.clone());
            }
        }
        meta
    }

    pub fn write_csv<W: Write>(&self, config: &RunConfig, out: W) -> io::Result<()> {
        let mut out = out;
        writeln!(out, "# meta: {}", self.meta(config))?;
        for w in &self.warnings {
            writeln!(out, "# warning: {w}")?;
        }
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(&self.columns)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(Cell::to_csv))?;
        }
        writer.flush()
    }

    pub fn write_json<W: Write>(&self, config: &RunConfig, mut out: W) -> io::Result<()> {
        let data: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.to_json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let doc = json!({
            "meta": self.meta(config),
            "data": data,
            "warnings": self.warnings,
        });
        serde_json::to_writer_pretty(&mut out, &doc)?;
        writeln!(out)
    }
}

enum Failure {
    Usage(String),
    Numeric(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { .. } => Failure::Usage(e.to_string()),
            Error::Convergence { .. } => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parses `args` (including the program name), runs the subcommand and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let _ = write!(stderr, "{e}");
            let _ = writeln!(stderr, "{GRAMMAR}");
            return EXIT_USAGE;
        }
    };
    let (kind, flags) = cli.command.split();
    match execute(kind, &flags, stdout) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}\n{GRAMMAR}");
            EXIT_USAGE
        }
        Err(Failure::Numeric(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_NUMERIC
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_NUMERIC
        }
    }
}

fn resolve(kind: CommandKind, flags: &Flags) -> Result<RunConfig, Failure> {
    let name = match kind {
        CommandKind::Bessel => "bessel",
        CommandKind::Eigen => "eigen",
        CommandKind::Simulate => "simulate",
        CommandKind::Laplace => "laplace",
        CommandKind::Survival => "survival",
        CommandKind::Tails => "tails",
        CommandKind::Rayleigh => "rayleigh",
        CommandKind::Verify => "verify",
    };
    let alpha = match (flags.alpha, kind) {
        (Some(a), _) => a,
        (None, CommandKind::Verify) => 1.0,
        (None, _) => return Err(usage(format!("--alpha is required for {name}"))),
    };
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(usage(format!("--alpha {alpha}: must be > 0")));
    }
    let horizon = flags.horizon;
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(usage(format!("--T {horizon}: must be > 0")));
    }
    let horizon_s = match (flags.horizon_s, kind) {
        (Some(s), _) => Some(s),
        (None, CommandKind::Verify) => Some(0.5 * horizon),
        (None, _) => None,
    };
    if let Some(s) = horizon_s {
        if !(s > 0.0 && s < horizon) {
            return Err(usage(format!("--S {s}: must lie in (0, {horizon})")));
        }
    }
    if flags.count == Some(0) {
        return Err(usage("--count must be at least 1"));
    }
    if flags.truncation == Some(0) {
        return Err(usage("--N must be at least 1"));
    }
    if flags.paths == 0 {
        return Err(usage("--paths must be at least 1"));
    }
    if flags.grid < 2 {
        return Err(usage("--grid must be at least 2"));
    }
    Ok(RunConfig {
        subcommand: name,
        version: env!("CARGO_PKG_VERSION"),
        alpha,
        horizon,
        horizon_s,
        count: flags.count,
        x: flags.x.clone(),
        c: flags.c.clone(),
        truncation: flags.truncation,
        paths: flags.paths,
        grid: flags.grid,
        method: flags.method,
        seed: flags.seed,
        format: flags.format,
        out: flags.out.as_ref().map(|p| p.display().to_string()),
        suite: (kind == CommandKind::Verify).then(|| Suite::from(flags.suite).as_str()),
    })
}

fn execute(kind: CommandKind, flags: &Flags, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let config = resolve(kind, flags)?;
    let params = BridgeParams::new(config.alpha, config.horizon)?;
    let (table, code) = match kind {
        CommandKind::Bessel => (bessel_table(&config, &params)?, EXIT_OK),
        CommandKind::Eigen => (eigen_table(&config, &params)?, EXIT_OK),
        CommandKind::Simulate => (simulate_table(&config, &params)?, EXIT_OK),
        CommandKind::Laplace => (laplace_table(&config, &params)?, EXIT_OK),
        CommandKind::Survival => (survival_table(&config, &params)?, EXIT_OK),
        CommandKind::Tails => (tails_table(&config, &params)?, EXIT_OK),
        CommandKind::Rayleigh => (rayleigh_table(&config, &params)?, EXIT_OK),
        CommandKind::Verify => verify_table(&config, &params, flags.suite.into())?,
    };
    match &flags.out {
        Some(path) => {
            let file = io::BufWriter::new(File::create(path)?);
            emit(&table, &config, file)?;
        }
        None => emit(&table, &config, stdout)?,
    }
    Ok(code)
}

fn emit<W: Write>(table: &Table, config: &RunConfig, out: W) -> io::Result<()> {
    match config.format {
        FormatArg::Csv => table.write_csv(config, out),
        FormatArg::Json => table.write_json(config, out),
    }
}

fn require(values: &[f64], flag: &str, name: &str) -> Result<(), Failure> {
    if values.is_empty() {
        return Err(usage(format!("{flag} is required for {name}")));
    }
    Ok(())
}

fn bessel_table(config: &RunConfig, params: &BridgeParams) -> Result<Table, Failure> {
    let order = BesselOrder::new(params.nu())?;
    let mut table;
    if config.x.is_empty() {
        table = Table::new(&["k", "zero", "j_nu_plus_1"]);
        let zeros = bessel_zeros(order, config.count.unwrap_or(10), DEFAULT_ZERO_TOL)?;
        let next = BesselOrder::new(params.nu() + 1.0)?;
        for (i, &z) in zeros.zeros().iter().enumerate() {
            table.push(vec![(i + 1).into(), z.into(), bessel_j(next, z)?.into()]);
        }
    } else {
        table = Table::new(&["x", "j_nu", "j_nu_derivative"]);
        for &x in &config.x {
            table.push(vec![
                x.into(),
                bessel_j(order, x)?.into(),
                bessel_j_derivative(order, x)?.into(),
            ]);
        }
    }
    table.derived.insert("nu".into(), json!(params.nu()));
    Ok(table)
}

fn eigen_table(config: &RunConfig, params: &BridgeParams) -> Result<Table, Failure> {
    let count = config.count.unwrap_or(10);
    let (system, mut table) = match config.horizon_s {
        Some(s) => (
            eigen_weighted(params, s, count)?,
            Table::new(&["k", "kappa"]),
        ),
        None => (
            eigen_unweighted(params, count)?,
            Table::new(&["k", "lambda"]),
        ),
    };
    for (i, &v) in system.eigenvalues().iter().enumerate() {
        table.push(vec![(i + 1).into(), v.into()]);
    }
    table.derived.insert("kind".into(), json!(system.kind()));
    Ok(table)
}

fn simulate_table(config: &RunConfig, params: &BridgeParams) -> Result<Table, Failure> {
    let big_t = params.horizon();
    let seed = config.seed;
    let paths: Vec<PathSample> = match config.method {
        MethodArg::Euler | MethodArg::Spacetime => {
            let grid = TimeGrid::uniform(big_t * DEFAULT_END_FRACTION, config.grid)?;
            let euler = config.method == MethodArg::Euler;
            let mut paths = simulate_batch(config.paths, seed, |s, i| {
                if euler {
                    simulate_euler_path(params, &grid, s, i)
                } else {
                    simulate_spacetime_path(params, &grid, s, i)
                }
            })?;
            for p in &mut paths {
                p.extend_to_horizon(big_t)?;
            }
            paths
        }
        MethodArg::Kl => {
            let n = match config.truncation {
                Some(n) => n,
                None => default_truncation(params, DEFAULT_VARIANCE_FRACTION)?,
            };
            let system = eigen_unweighted(params, n)?;
            let grid = TimeGrid::uniform(big_t, config.grid)?;
            kl_sample_batch(&system, &grid, seed, config.paths)?
        }
        MethodArg::WeightedKl => {
            let s = config
                .horizon_s
                .ok_or_else(|| usage("--S is required for --method weighted-kl"))?;
            let n = config.truncation.unwrap_or(DEFAULT_ZERO_COUNT);
            let system = eigen_weighted(params, s, n)?;
            let grid = TimeGrid::uniform(s, config.grid)?;
            kl_sample_batch(&system, &grid, seed, config.paths)?
        }
    };
    let mut table = Table::new(&["path", "t", "x"]);
    if let Some(first) = paths.first() {
        table
            .derived
            .insert("method_name".into(), json!(first.method.as_str()));
        table
            .derived
            .insert("truncation".into(), json!(first.truncation));
        table.derived.insert(
            "extended_to_horizon".into(),
            json!(first.extended_to_horizon),
        );
    }
    for p in &paths {
        for (&t, &x) in p.grid.points().iter().zip(&p.values) {
            table.push(vec![p.path_index.into(), t.into(), x.into()]);
        }
    }
    Ok(table)
}

fn laplace_table(config: &RunConfig, params: &BridgeParams) -> Result<Table, Failure> {
    require(&config.c, "--c", "laplace")?;
    let n = config.truncation.unwrap_or(1000);
    let mut table;
    if let Some(s) = config.horizon_s {
        table = Table::new(&["c", "closed_form", "product"]);
        for &c in &config.c {
            table.push(vec![
                c.into(),
                laplace_weighted_half(params, s, c)?.into(),
                laplace_weighted_half_product(params, s, c, n, true)?.into(),
            ]);
        }
        table
            .derived
            .insert("functional".into(), json!("weighted_half"));
    } else {
        table = Table::new(&["c", "value", "error_bound"]);
        let dist = NormSqDistribution::with_zero_count(params, n)?;
        for &c in &config.c {
            let v = laplace_transform(&dist, c, n)?;
            table.push(vec![c.into(), v.value.into(), v.error.into()]);
        }
        table.derived.insert("functional".into(), json!("norm_sq"));
    }
    table.derived.insert("factors".into(), json!(n));
    Ok(table)
}

fn survival_config(config: &RunConfig) -> SurvivalSeriesConfig {
    SurvivalSeriesConfig {
        num_terms: config
            .truncation
            .unwrap_or(SurvivalSeriesConfig::default().num_terms),
        ..Default::default()
    }
}

fn survival_table(config: &RunConfig, params: &BridgeParams) -> Result<Table, Failure> {
    require(&config.x, "--x", "survival")?;
    let cfg = survival_config(config);
    let dist = NormSqDistribution::with_zero_count(params, 2 * cfg.num_terms + 2)?;
    let mut table = Table::new(&["x", "survival", "error_estimate", "status", "warning"]);
    for &x in &config.x {
        let s = survival(&dist, x, &cfg)?;
        let warning = s.warning().unwrap_or_default();
        if !warning.is_empty() {
            table
                .warnings
                .push(format!("x={}: {warning}", format_float(x)));
        }
        let status = serde_json::to_value(s.status).expect("status serializes");
        table.push(vec![
            x.into(),
            s.value.into(),
            s.error_estimate.into(),
            status.as_str().unwrap_or_default().into(),
            warning.into(),
        ]);
    }
    table.derived.insert("series".into(), json!(cfg));
    Ok(table)
}

fn tails_table(config: &RunConfig, params: &BridgeParams) -> Result<Table, Failure> {
    require(&config.x, "--x", "tails")?;
    let cfg = survival_config(config);
    let dist = NormSqDistribution::with_zero_count(
        params,
        config
            .truncation
            .map_or(10_000, |n| n.max(2 * cfg.num_terms + 2)),
    )?;
    let mut table = Table::new(&[
        "x",
        "survival",
        "large_deviation_bessel",
        "large_deviation_product",
        "small_deviation",
        "small_constant_known",
    ]);
    for &x in &config.x {
        let s = survival(&dist, x, &cfg)?;
        if let Some(w) = s.warning() {
            table.warnings.push(format!("x={}: {w}", format_float(x)));
        }
        let small = small_deviation(&dist, x)?;
        table.push(vec![
            x.into(),
            s.value.into(),
            large_deviation_tail(&dist, x, TailConstantForm::BesselConstant)?.into(),
            large_deviation_tail(&dist, x, TailConstantForm::ProductConstant)?.into(),
            small.asymptote.into(),
            small.constant_known.into(),
        ]);
    }
    Ok(table)
}

fn rayleigh_table(config: &RunConfig, params: &BridgeParams) -> Result<Table, Failure> {
    let n = config.truncation.unwrap_or(1000);
    let r = rayleigh_sum(BesselOrder::new(params.nu())?, n)?;
    let mut table = Table::new(&["N", "partial", "exact", "tail_estimate"]);
    table.push(vec![
        n.into(),
        r.partial.into(),
        r.exact.into(),
        rayleigh_tail_estimate(params.nu(), n).into(),
    ]);
    table.derived.insert("nu".into(), json!(params.nu()));
    Ok(table)
}

fn verify_table(
    config: &RunConfig,
    params: &BridgeParams,
    suite: Suite,
) -> Result<(Table, i32), Failure> {
    let s = config.horizon_s.expect("verify resolves S");
    let checks = run_suite(suite, params, s)?;
    let mut table = Table::new(&["suite", "check", "measured", "tolerance", "passed"]);
    let mut failed = Vec::new();
    for c in &checks {
        if !c.passed {
            failed.push(c.name.clone());
        }
        table.push(vec![
            c.suite.into(),
            c.name.clone().into(),
            c.measured.into(),
            c.tolerance.into(),
            c.passed.into(),
        ]);
    }
    for name in &failed {
        table.warnings.push(format!("FAILED: {name}"));
    }
    let code = if failed.is_empty() {
        EXIT_OK
    } else {
        EXIT_NUMERIC
    };
    Ok((table, code))
}
