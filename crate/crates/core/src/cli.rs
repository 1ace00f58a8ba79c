//! Command-line front end: curve sweeps and figure data as CSV, simulation
//! statistics as JSON.

use std::fmt;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::{capacity, e_ex, e_low, e_r, e_sp, r_crit, ListSize};
use crate::feedback::{
    f1_noiseless, f1_noisy, gamma0, ln_p0, p0, p11, t0, t1, BoundBreakdown, ChannelPair,
};
use crate::math::{Nats, Prob};
use crate::simulator::{estimate, exponent_trend, SimConfig, SimStats};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SIM_SCHEMA: &str = "simstats-v1";

#[derive(Debug, Parser)]
#[command(
    name = "bscfb",
    version,
    about = "Error exponents and protocol simulation for the BSC with noisy feedback"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one quantity over a grid of rates (of alpha for p11).
    Sweep(SweepArgs),
    /// Emit the data behind one of the reference figures.
    Figure(FigureArgs),
    /// Run the protocol simulator and print statistics as JSON.
    Sim(SimArgs),
    /// Simulate several blocklengths at a fixed rate and fit the error decay.
    Trend(TrendArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[value(rename_all = "snake_case")]
#[serde(rename_all = "snake_case")]
pub enum SweepQuantity {
    ER,
    EEx,
    ESp,
    ELow,
    F1Noiseless,
    F1Noisy,
    P0,
    T0,
    T1,
    P11,
}

impl SweepQuantity {
    pub fn name(self) -> &'static str {
        match self {
            SweepQuantity::ER => "e_r",
            SweepQuantity::EEx => "e_ex",
            SweepQuantity::ESp => "e_sp",
            SweepQuantity::ELow => "e_low",
            SweepQuantity::F1Noiseless => "f1_noiseless",
            SweepQuantity::F1Noisy => "f1_noisy",
            SweepQuantity::P0 => "p0",
            SweepQuantity::T0 => "t0",
            SweepQuantity::T1 => "t1",
            SweepQuantity::P11 => "p11",
        }
    }

    /// Name of the swept variable.
    pub fn axis(self) -> &'static str {
        match self {
            SweepQuantity::P11 => "alpha",
            _ => "R",
        }
    }

    fn extra_columns(self) -> &'static [&'static str] {
        match self {
            SweepQuantity::F1Noisy => &["branch_list2", "branch_pair", "gamma_star", "t_star"],
            SweepQuantity::F1Noiseless => &["gamma0"],
            _ => &[],
        }
    }
}

impl fmt::Display for SweepQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A rate given as a number or as a named point of the channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateBound {
    Value(f64),
    Capacity,
    Rcrit,
}

impl FromStr for RateBound {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "capacity" | "C" => Ok(RateBound::Capacity),
            "rcrit" => Ok(RateBound::Rcrit),
            _ => s
                .parse::<f64>()
                .map(RateBound::Value)
                .map_err(|_| format!("expected a number, `capacity` or `rcrit`, got `{s}`")),
        }
    }
}

impl RateBound {
    fn resolve(self, p: f64, list: ListSize) -> Result<f64> {
        match self {
            RateBound::Value(v) => Ok(v),
            RateBound::Capacity => capacity(p),
            RateBound::Rcrit => r_crit(p, list),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub quantity: SweepQuantity,
    /// Forward crossover probability.
    #[arg(long)]
    pub p: f64,
    /// Feedback crossover probability (f1_noisy, t1).
    #[arg(long)]
    pub p1: Option<f64>,
    /// Decoder list size (e_r, e_ex, e_low); defaults to 1.
    #[arg(long = "list-size")]
    pub list_size: Option<u32>,
    /// First grid point: a number, `capacity` or `rcrit`.
    #[arg(long = "rate-min")]
    pub rate_min: RateBound,
    /// Last grid point: a number, `capacity` or `rcrit`.
    #[arg(long = "rate-max")]
    pub rate_max: RateBound,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    /// Output path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4,
}

impl FigureId {
    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    #[arg(long, value_enum)]
    pub figure: FigureId,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    /// Total blocklength.
    #[arg(long)]
    pub n: usize,
    /// Number of messages M.
    #[arg(long)]
    pub messages: usize,
    /// Phase-I fraction; m = round(gamma n).
    #[arg(long)]
    pub gamma: f64,
    /// Decision threshold as a fraction of m.
    #[arg(long)]
    pub t: f64,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 0.0)]
    pub p1: f64,
    #[arg(long)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl SimArgs {
    pub fn config(&self) -> SimConfig {
        SimConfig {
            n: self.n,
            messages: self.messages,
            gamma: self.gamma,
            t: self.t,
            p: self.p,
            p1: self.p1,
            trials: self.trials,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct TrendArgs {
    /// Comma-separated blocklengths.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Rate in nats; M = round(e^(R n)) at each blocklength.
    #[arg(long)]
    pub rate: RateBound,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub t: f64,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 0.0)]
    pub p1: f64,
    #[arg(long)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A validated sweep request.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSpec {
    pub quantity: SweepQuantity,
    pub p: Prob,
    pub p1: Option<Prob>,
    #[serde(rename = "L")]
    pub list: Option<ListSize>,
    pub r_min: Nats,
    pub r_max: Nats,
    pub steps: usize,
}

impl SweepSpec {
    pub fn new(
        quantity: SweepQuantity,
        p: f64,
        p1: Option<f64>,
        list: Option<u32>,
        r_min: f64,
        r_max: f64,
        steps: usize,
    ) -> Result<Self> {
        if !(r_min < r_max) {
            return Err(Error::Config(format!(
                "need rate-min < rate-max, got {r_min} and {r_max}"
            )));
        }
        if steps < 2 {
            return Err(Error::Config(format!("need at least 2 steps, got {steps}")));
        }
        let needs_p1 = matches!(quantity, SweepQuantity::F1Noisy | SweepQuantity::T1);
        if needs_p1 && p1.is_none() {
            return Err(Error::Config(format!("quantity {quantity} needs --p1")));
        }
        let uses_list = matches!(
            quantity,
            SweepQuantity::ER | SweepQuantity::EEx | SweepQuantity::ELow
        );
        if list.is_some() && !uses_list {
            return Err(Error::Config(format!(
                "quantity {quantity} takes no --list-size"
            )));
        }
        let list = if uses_list {
            Some(ListSize::new(list.unwrap_or(1)).map_err(|e| Error::Config(e.to_string()))?)
        } else {
            None
        };
        let p = Prob::new(p).map_err(|e| Error::Config(e.to_string()))?;
        let p1 = p1
            .map(Prob::new)
            .transpose()
            .map_err(|e| Error::Config(e.to_string()))?;
        Ok(SweepSpec {
            quantity,
            p,
            p1,
            list,
            r_min,
            r_max,
            steps,
        })
    }

    fn from_args(a: &SweepArgs) -> Result<Self> {
        let list =
            ListSize::new(a.list_size.unwrap_or(1)).map_err(|e| Error::Config(e.to_string()))?;
        let resolve = |b: RateBound| {
            b.resolve(a.p, list)
                .map_err(|e| Error::Config(e.to_string()))
        };
        SweepSpec::new(
            a.quantity,
            a.p,
            a.p1,
            a.list_size,
            resolve(a.rate_min)?,
            resolve(a.rate_max)?,
            a.steps,
        )
    }

    /// Grid point `i` of `steps`, with both ends hit exactly.
    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.r_max
        } else {
            self.r_min + (self.r_max - self.r_min) * i as f64 / (self.steps - 1) as f64
        }
    }

    fn metadata(&self) -> Vec<(String, String)> {
        let mut m = vec![
            ("quantity".into(), self.quantity.name().into()),
            ("p".into(), fmt_real(self.p.get())),
        ];
        if let Some(p1) = self.p1 {
            m.push(("p1".into(), fmt_real(p1.get())));
        }
        if let Some(l) = self.list {
            m.push(("list_size".into(), l.to_string()));
        }
        m.push((
            format!("{}_min", self.quantity.axis()),
            fmt_real(self.r_min),
        ));
        m.push((
            format!("{}_max", self.quantity.axis()),
            fmt_real(self.r_max),
        ));
        m.push(("steps".into(), self.steps.to_string()));
        m.push(("units".into(), "nats".into()));
        m
    }
}

/// Result of evaluating one sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointValue {
    Plain(f64),
    WithGamma(f64, f64),
    Breakdown(BoundBreakdown),
}

impl PointValue {
    pub fn value(&self) -> f64 {
        match *self {
            PointValue::Plain(v) | PointValue::WithGamma(v, _) => v,
            PointValue::Breakdown(b) => b.value,
        }
    }
}

/// One row of a sweep: the grid point and its value or why it has none.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub result: std::result::Result<PointValue, Error>,
}

impl SweepRow {
    pub fn status(&self) -> String {
        match &self.result {
            Ok(_) => "ok".into(),
            Err(e) => e.status_tag(),
        }
    }
}

/// Evaluate `spec.quantity` at a single grid point.
pub fn sweep_point(spec: &SweepSpec, x: f64) -> Result<PointValue> {
    let p = spec.p.get();
    let list = spec.list.unwrap_or(ListSize::ONE);
    let p1 = || {
        spec.p1
            .map(Prob::get)
            .ok_or_else(|| Error::Config("missing p1".into()))
    };
    Ok(match spec.quantity {
        SweepQuantity::ER => PointValue::Plain(e_r(x, p, list)?),
        SweepQuantity::EEx => PointValue::Plain(e_ex(x, p, list)?),
        SweepQuantity::ESp => PointValue::Plain(e_sp(x, p)?),
        SweepQuantity::ELow => PointValue::Plain(e_low(x, p, list)?),
        SweepQuantity::F1Noiseless => PointValue::WithGamma(f1_noiseless(x, p)?, gamma0(x, p)?),
        SweepQuantity::F1Noisy => PointValue::Breakdown(f1_noisy(x, ChannelPair::new(p, p1()?)?)?),
        SweepQuantity::P0 => PointValue::Plain(p0(x, p)?),
        SweepQuantity::T0 => PointValue::Plain(t0(x, p)?),
        SweepQuantity::T1 => PointValue::Plain(t1(x, p1()?)?),
        SweepQuantity::P11 => PointValue::Plain(p11(p, x)?),
    })
}

/// Evaluate every grid point; rows come back in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Vec<SweepRow> {
    (0..spec.steps)
        .into_par_iter()
        .map(|i| {
            let x = spec.point(i);
            SweepRow {
                x,
                result: sweep_point(spec, x),
            }
        })
        .collect()
}

/// A CSV artifact: metadata, header and rows of preformatted cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub artifact: String,
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# artifact={} version={}", self.artifact, VERSION)?;
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}={v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

/// `%.12g`: twelve significant digits, trailing zeros dropped, scientific
/// notation outside `[1e-5, 1e12)`.
pub fn fmt_real(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let m = trim_zeros(mantissa.to_string());
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn sweep_table(spec: &SweepSpec, rows: &[SweepRow]) -> Table {
    let mut header = vec![
        spec.quantity.axis().to_string(),
        "value".into(),
        "status".into(),
    ];
    header.extend(spec.quantity.extra_columns().iter().map(|s| s.to_string()));
    let width = header.len();
    let rows = rows
        .iter()
        .map(|r| {
            let mut cells = vec![fmt_real(r.x)];
            match &r.result {
                Ok(v) => {
                    cells.push(fmt_real(v.value()));
                    cells.push(r.status());
                    match *v {
                        PointValue::Plain(_) => {}
                        PointValue::WithGamma(_, g) => cells.push(fmt_real(g)),
                        PointValue::Breakdown(b) => cells.extend(
                            [b.branch_list2, b.branch_pair, b.gamma_star, b.t_star].map(fmt_real),
                        ),
                    }
                }
                Err(_) => {
                    cells.push(String::new());
                    cells.push(r.status());
                }
            }
            cells.resize(width, String::new());
            cells
        })
        .collect();
    Table {
        artifact: format!("sweep-{}", spec.quantity.name()),
        metadata: spec.metadata(),
        header,
        rows,
    }
}

/// Forward crossover used by the rate figures.
pub const FIGURE_P: f64 = 0.01;
/// Fraction of the zero-rate improvement kept in the p11 figure.
pub const FIGURE_ALPHA: f64 = 0.1;

/// Abscissae of a figure: rates `R_crit(0.01) i / 100` for `i = 0..100`, or
/// crossovers `0.5 i / 200` for `i = 1..200` in the p11 figure.
pub fn figure_grid(fig: FigureId) -> Result<Vec<f64>> {
    Ok(match fig {
        FigureId::Fig2 | FigureId::Fig3 => {
            let rc = r_crit(FIGURE_P, ListSize::ONE)?;
            (0..100).map(|i| rc * i as f64 / 100.0).collect()
        }
        FigureId::Fig4 => (1..200).map(|i| 0.5 * i as f64 / 200.0).collect(),
    })
}

/// Values of the figure's curves at one abscissa.
pub fn figure_point(fig: FigureId, x: f64) -> Vec<Result<f64>> {
    match fig {
        FigureId::Fig2 => vec![p0(x, FIGURE_P), ln_p0(x, FIGURE_P)],
        FigureId::Fig3 => vec![f1_noiseless(x, FIGURE_P), e_ex(x, FIGURE_P, ListSize::ONE)],
        FigureId::Fig4 => vec![p11(x, FIGURE_ALPHA)],
    }
}

/// One abscissa of a figure with its unformatted curve values.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureRow {
    pub x: f64,
    pub values: Vec<Result<f64>>,
}

pub fn figure_rows(fig: FigureId) -> Result<Vec<FigureRow>> {
    Ok(figure_grid(fig)?
        .into_par_iter()
        .map(|x| FigureRow {
            x,
            values: figure_point(fig, x),
        })
        .collect())
}

pub fn figure_table(fig: FigureId) -> Result<Table> {
    let (header, metadata): (Vec<&str>, Vec<(String, String)>) = match fig {
        FigureId::Fig2 => (
            vec!["R", "p0", "ln_p0", "status"],
            vec![
                ("p".into(), fmt_real(FIGURE_P)),
                ("R_grid".into(), "R_crit(p) i/100, i=0..99".into()),
            ],
        ),
        FigureId::Fig3 => (
            vec!["R", "f1_noiseless", "e_ex", "status"],
            vec![
                ("p".into(), fmt_real(FIGURE_P)),
                ("R_grid".into(), "R_crit(p) i/100, i=0..99".into()),
            ],
        ),
        FigureId::Fig4 => (
            vec!["p", "p11", "status"],
            vec![
                ("alpha".into(), fmt_real(FIGURE_ALPHA)),
                ("p_grid".into(), "0.5 i/200, i=1..199".into()),
            ],
        ),
    };
    let rows = figure_rows(fig)?
        .iter()
        .map(|r| {
            let status = r
                .values
                .iter()
                .find_map(|v| v.as_ref().err().map(Error::status_tag))
                .unwrap_or_else(|| "ok".into());
            let mut cells = vec![fmt_real(r.x)];
            cells.extend(
                r.values
                    .iter()
                    .map(|v| v.as_ref().map_or(String::new(), |v| fmt_real(*v))),
            );
            cells.push(status);
            cells
        })
        .collect();
    let mut meta = metadata;
    meta.push(("units".into(), "nats".into()));
    Ok(Table {
        artifact: fig.name().into(),
        metadata: meta,
        header: header.into_iter().map(String::from).collect(),
        rows,
    })
}

/// JSON document printed by `sim`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub config: SimConfig,
    pub stats: SimStats,
    pub schema: &'static str,
}

pub fn sim_report(cfg: &SimConfig) -> Result<SimReport> {
    Ok(SimReport {
        config: *cfg,
        stats: estimate(cfg)?,
        schema: SIM_SCHEMA,
    })
}

pub fn sim_json(cfg: &SimConfig) -> Result<String> {
    let report = sim_report(cfg)?;
    Ok(serde_json::to_string_pretty(&report).expect("report serializes") + "\n")
}

pub fn trend_table(args: &TrendArgs) -> Result<Table> {
    let rate = match args.rate {
        RateBound::Value(v) => v,
        b => b
            .resolve(args.p, ListSize::ONE)
            .map_err(|e| Error::Config(e.to_string()))?,
    };
    let base = SimConfig {
        n: args.n[0],
        messages: 2,
        gamma: args.gamma,
        t: args.t,
        p: args.p,
        p1: args.p1,
        trials: args.trials,
        seed: args.seed,
    };
    let table = exponent_trend(&base, rate, &args.n)?;
    let metadata = vec![
        ("rate".into(), fmt_real(rate)),
        ("gamma".into(), fmt_real(args.gamma)),
        ("t".into(), fmt_real(args.t)),
        ("p".into(), fmt_real(args.p)),
        ("p1".into(), fmt_real(args.p1)),
        ("trials".into(), args.trials.to_string()),
        ("seed".into(), args.seed.to_string()),
        ("slope".into(), table.slope.map_or("none".into(), fmt_real)),
    ];
    let header = [
        "n",
        "M",
        "errors",
        "error_rate",
        "wilson_lo",
        "wilson_hi",
        "neg_log_rate_per_n",
        "status",
    ];
    let rows = table
        .rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.messages.to_string(),
                r.stats.errors_total.to_string(),
                fmt_real(r.error_rate),
                fmt_real(r.wilson_lo),
                fmt_real(r.wilson_hi),
                r.normalized_log_error.map_or(String::new(), fmt_real),
                if r.degenerate {
                    "degenerate:no-errors".into()
                } else {
                    "ok".into()
                },
            ]
        })
        .collect();
    Ok(Table {
        artifact: "trend".into(),
        metadata,
        header: header.iter().map(|s| s.to_string()).collect(),
        rows,
    })
}

fn emit(out: &Option<PathBuf>, content: &str) -> io::Result<()> {
    match out {
        Some(path) => File::create(path)?.write_all(content.as_bytes()),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(content.as_bytes())?;
            lock.flush()
        }
    }
}

/// Failure of a CLI command: bad arguments, or a failed write.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Run(Error),
    Io(io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "{s}"),
            CliError::Run(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(s) => CliError::Usage(s),
            other => CliError::Run(other),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

pub fn run(cli: Cli) -> std::result::Result<(), CliError> {
    match cli.command {
        Command::Sweep(a) => {
            let spec = SweepSpec::from_args(&a)?;
            let rows = run_sweep(&spec);
            emit(&a.out, &sweep_table(&spec, &rows).to_csv_string())?;
        }
        Command::Figure(a) => emit(&a.out, &figure_table(a.figure)?.to_csv_string())?,
        Command::Sim(a) => emit(&a.out, &sim_json(&a.config())?)?,
        Command::Trend(a) => emit(&a.out, &trend_table(&a)?.to_csv_string())?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_real(0.0), "0");
        assert_eq!(fmt_real(1.0), "1");
        assert_eq!(fmt_real(0.1), "0.1");
        assert_eq!(fmt_real(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_real(-2.5e-7), "-2.5e-07");
        assert_eq!(fmt_real(1.234e15), "1.234e+15");
        assert_eq!(fmt_real(123456.0), "123456");
        assert_eq!(fmt_real(0.000123456789012345), "0.000123456789012");
        assert_eq!(fmt_real(999999999999.5), "1e+12");
        assert_eq!(fmt_real(f64::NAN), "nan");
    }

    #[test]
    fn spec_validation() {
        let ok = SweepSpec::new(SweepQuantity::ESp, 0.01, None, None, 0.0, 0.5, 3);
        assert!(ok.is_ok());
        assert!(SweepSpec::new(SweepQuantity::ESp, 0.01, None, None, 0.5, 0.5, 3).is_err());
        assert!(SweepSpec::new(SweepQuantity::ESp, 0.01, None, None, 0.0, 0.5, 1).is_err());
        assert!(SweepSpec::new(SweepQuantity::F1Noisy, 0.01, None, None, 0.0, 0.3, 3).is_err());
        assert!(SweepSpec::new(SweepQuantity::T0, 0.01, None, Some(2), 0.0, 0.3, 3).is_err());
        assert!(SweepSpec::new(SweepQuantity::ER, 0.01, None, Some(0), 0.0, 0.3, 3).is_err());
        assert_eq!(
            SweepSpec::new(SweepQuantity::ELow, 0.01, None, None, 0.0, 0.3, 3)
                .unwrap()
                .list,
            Some(ListSize::ONE)
        );
    }

    #[test]
    fn grid_hits_both_ends() {
        let spec = SweepSpec::new(SweepQuantity::ESp, 0.01, None, None, 0.1, 0.3, 7).unwrap();
        assert_eq!(spec.point(0), 0.1);
        assert_eq!(spec.point(6), 0.3);
    }

    #[test]
    fn infeasible_points_get_a_status() {
        let spec = SweepSpec::new(SweepQuantity::T1, 0.01, Some(0.1), None, 0.0, 2.0, 5).unwrap();
        let rows = run_sweep(&spec);
        assert_eq!(rows[0].status(), "ok");
        assert_eq!(rows[4].status(), "infeasible:no-solution:t1");
        let t = sweep_table(&spec, &rows);
        assert_eq!(t.rows[4][1], "");
    }

    #[test]
    fn rate_keywords() {
        assert_eq!(
            "capacity".parse::<RateBound>().unwrap(),
            RateBound::Capacity
        );
        assert_eq!("0.25".parse::<RateBound>().unwrap(), RateBound::Value(0.25));
        assert!("fast".parse::<RateBound>().is_err());
    }
}
