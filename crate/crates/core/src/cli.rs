//! Command-line front end: densities, moment series, autocorrelations and the
//! validation report, written as CSV or JSON.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{Map, Number, Value};

use crate::error::Error;
use crate::free::{autocorrelation_free, free_moments, psi_free};
use crate::oracle::{self, bouncer_x_min, sample, GridSpec, GridState};
use crate::params::{Moments, PacketParams};
use crate::special::{gprime_moments, psi0_bouncer, psi0_moments, psi_gprime, SpecialParams};
use crate::validation::{self, ValidationConfig};
use crate::BouncerParams;

/// Version of the CSV/JSON output layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "bouncer", version, about = "Gaussian wave packets bouncing off an infinite wall")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// |ψ(x,t)|² snapshots, one row per (t, x).
    Density(RunArgs),
    /// Closed-form and quadrature moments, one row per t.
    Moments(RunArgs),
    /// Autocorrelation A(t) = ∫ψ*(x,0)ψ(x,t)dx, closed form and quadrature.
    Autocorr(RunArgs),
    /// Run every acceptance check; exits 1 if any fails. Physical flags set
    /// the demo packet, --xmin/--nx override its grid.
    Validate(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Free Gaussian on the whole line.
    Free,
    /// Free odd-prefactor Gaussian on the whole line.
    FreeGprime,
    /// Mirror solution on x < 0.
    Bouncer,
    /// Wall solution built from the odd-prefactor packet, x₀ = p₀ = 0.
    Psi0,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Free => "free",
            Kind::FreeGprime => "free-gprime",
            Kind::Bouncer => "bouncer",
            Kind::Psi0 => "psi0",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Raw flags. Every field is optional so a config file can fill the gaps.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// key=value file with the same keys as the flags; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    #[arg(long, allow_negative_numbers = true)]
    pub x0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub p0: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tmax: Option<f64>,
    /// Number of time samples.
    #[arg(long)]
    pub nt: Option<usize>,
    /// Left grid edge (default: packet reach plus 12 widths).
    #[arg(long, allow_negative_numbers = true)]
    pub xmin: Option<f64>,
    /// Grid points (default: spacing β/100).
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or parameters.
    Usage(String),
    /// The computation or a check failed.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_)
            | Error::WrongSide(_)
            | Error::Degenerate
            | Error::NoCollision
            | Error::InvalidGrid(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Failure(format!("write failed: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Failure(format!("write failed: {e}"))
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

impl RunArgs {
    /// Fills unset fields from a key=value config text.
    pub fn merge_config(mut self, text: &str) -> CliResult<Self> {
        fn parse<T: FromStr>(key: &str, value: &str) -> CliResult<Option<T>> {
            value
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config: bad value {value:?} for {key}")))
        }
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", n + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "kind" => {
                    let kind = Kind::from_str(value, true).map_err(|e| CliError::Usage(format!("config: {e}")))?;
                    self.kind = self.kind.or(Some(kind));
                }
                "format" => {
                    let format = Format::from_str(value, true).map_err(|e| CliError::Usage(format!("config: {e}")))?;
                    self.format = self.format.or(Some(format));
                }
                "x0" => self.x0 = self.x0.or(parse(key, value)?),
                "p0" => self.p0 = self.p0.or(parse(key, value)?),
                "alpha" => self.alpha = self.alpha.or(parse(key, value)?),
                "hbar" => self.hbar = self.hbar.or(parse(key, value)?),
                "mass" => self.mass = self.mass.or(parse(key, value)?),
                "tmin" => self.tmin = self.tmin.or(parse(key, value)?),
                "tmax" => self.tmax = self.tmax.or(parse(key, value)?),
                "nt" => self.nt = self.nt.or(parse(key, value)?),
                "xmin" => self.xmin = self.xmin.or(parse(key, value)?),
                "nx" => self.nx = self.nx.or(parse(key, value)?),
                "out" => self.out = self.out.or_else(|| Some(PathBuf::from(value))),
                _ => return Err(CliError::Usage(format!("config line {}: unknown key {key:?}", n + 1))),
            }
        }
        Ok(self)
    }

    fn with_config_file(self) -> CliResult<Self> {
        match self.config.clone() {
            None => Ok(self),
            Some(path) => {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                self.merge_config(&text)
            }
        }
    }

    pub fn resolve(self, command: &Command) -> CliResult<RunConfig> {
        let args = self.with_config_file()?;
        let kind = args.kind.unwrap_or(Kind::Bouncer);
        let (dx0, dp0) = match kind {
            Kind::Psi0 => (0.0, 0.0),
            _ => (-10.0, 5.0),
        };
        let (x0, p0) = (args.x0.unwrap_or(dx0), args.p0.unwrap_or(dp0));
        if kind == Kind::Psi0 && (x0 != 0.0 || p0 != 0.0) {
            return Err(CliError::Usage("kind psi0 requires x0 = p0 = 0".into()));
        }
        let params = PacketParams::new(
            x0,
            p0,
            args.alpha.unwrap_or(1.0),
            args.hbar.unwrap_or(1.0),
            args.mass.unwrap_or(1.0),
        )?;
        let bouncer = match kind {
            Kind::Bouncer => Some(BouncerParams::new(params)?),
            _ => None,
        };
        let t_min = args.tmin.unwrap_or(0.0);
        let t_max = args.tmax.unwrap_or_else(|| {
            match bouncer.and_then(|b| b.collision_time()) {
                Some(tc) => (2.0 * tc).max(t_min),
                None => (t_min + 3.0 * params.t0()).max(3.0 * params.t0()),
            }
        });
        if !(t_min.is_finite() && t_max.is_finite() && t_min <= t_max) {
            return Err(CliError::Usage(format!("need finite tmin ≤ tmax, got {t_min}, {t_max}")));
        }
        let n_times = args.nt.unwrap_or(match command {
            Command::Density(_) => 5,
            _ => 41,
        });
        if n_times == 0 {
            return Err(CliError::Usage("nt must be at least 1".into()));
        }
        Ok(RunConfig {
            kind,
            params,
            t_min,
            t_max,
            n_times,
            x_min: args.xmin,
            n_points: args.nx,
            format: args.format.unwrap_or(Format::Csv),
            out: args.out,
        })
    }
}

/// Fully resolved run parameters.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub kind: Kind,
    pub params: PacketParams,
    pub t_min: f64,
    pub t_max: f64,
    pub n_times: usize,
    pub x_min: Option<f64>,
    pub n_points: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

/// A state that can be evaluated pointwise.
#[derive(Debug, Clone, Copy)]
enum Solution {
    Free(PacketParams),
    Gprime(SpecialParams),
    Bouncer(BouncerParams),
    Psi0(SpecialParams),
}

impl Solution {
    fn psi(&self, x: f64, t: f64) -> crate::ComplexAmplitude {
        match self {
            Solution::Free(p) => psi_free(p, x, t),
            Solution::Gprime(sp) => psi_gprime(sp, x, t),
            Solution::Bouncer(bp) => bp.psi(x, t),
            Solution::Psi0(sp) => psi0_bouncer(sp, x, t),
        }
    }

    fn exact_moments(&self, t: f64) -> Moments {
        match self {
            Solution::Free(p) => free_moments(p, t),
            Solution::Gprime(sp) => gprime_moments(sp, t),
            Solution::Psi0(sp) => psi0_moments(sp, t),
            // Only the even moments have closed forms for all t.
            Solution::Bouncer(bp) => Moments::from_raw(t, f64::NAN, bp.x2_expect(t), f64::NAN, bp.p2_expect()),
        }
    }
}

impl RunConfig {
    pub fn times(&self) -> Vec<f64> {
        if self.n_times == 1 {
            return vec![self.t_min];
        }
        let span = self.t_max - self.t_min;
        (0..self.n_times)
            .map(|i| {
                if i + 1 == self.n_times {
                    self.t_max
                } else {
                    self.t_min + span * i as f64 / (self.n_times - 1) as f64
                }
            })
            .collect()
    }

    fn solution(&self) -> CliResult<Solution> {
        let p = self.params;
        Ok(match self.kind {
            Kind::Free => Solution::Free(p),
            Kind::FreeGprime => Solution::Gprime(p.into()),
            Kind::Bouncer => Solution::Bouncer(BouncerParams::new(p)?),
            Kind::Psi0 => Solution::Psi0(p.into()),
        })
    }

    /// Grid covering every requested time and, if `with_origin`, t = 0.
    fn grid(&self, with_origin: bool) -> CliResult<GridSpec> {
        let p = &self.params;
        let (mut a, mut b) = (self.t_min, self.t_max);
        if with_origin {
            a = a.min(0.0);
            b = b.max(0.0);
        }
        let spacing = p.beta() / oracle::POINTS_PER_BETA;
        let reach = oracle::TAIL_WIDTHS * p.beta_t(a).max(p.beta_t(b));
        let half_line = |auto: f64| -> CliResult<GridSpec> {
            let x_min = self.x_min.unwrap_or(auto);
            Ok(match self.n_points {
                Some(n) => GridSpec::half_line(x_min, n)?,
                None => GridSpec::half_line_with_spacing(x_min, spacing)?,
            })
        };
        match self.kind {
            Kind::Bouncer => half_line(bouncer_x_min(p, a).min(bouncer_x_min(p, b))),
            Kind::Psi0 => half_line(-reach),
            Kind::Free | Kind::FreeGprime => {
                let auto = GridSpec::for_free(p, a, b)?;
                let x_min = self.x_min.unwrap_or(auto.x_min());
                if x_min >= auto.x_max() {
                    return Err(CliError::Usage(format!("xmin {x_min} is right of the packet")));
                }
                Ok(match self.n_points {
                    Some(n) => GridSpec::interval(x_min, auto.x_max(), n)?,
                    None => GridSpec::interval_with_spacing(x_min, auto.x_max(), spacing)?,
                })
            }
        }
    }
}

/// One output cell.
#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn opt(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

/// 17 significant digits, so identical inputs give byte-identical files.
fn fmt_float(v: f64) -> String {
    // Adding zero folds −0 into +0.
    format!("{:.16e}", v + 0.0)
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) if v.is_finite() => fmt_float(*v),
            Cell::Num(_) | Cell::Empty => String::new(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => json_number(*v),
            Cell::Num(_) | Cell::Empty => Value::Null,
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

fn json_number(v: f64) -> Value {
    Number::from_str(&fmt_float(v)).map_or(Value::Null, Value::Number)
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

/// Run description written ahead of the data.
struct Metadata {
    command: &'static str,
    kind: Option<Kind>,
    params: PacketParams,
}

impl Metadata {
    fn pairs(&self) -> Vec<(&'static str, f64)> {
        let p = &self.params;
        vec![("x0", p.x0()), ("p0", p.p0()), ("alpha", p.alpha()), ("hbar", p.hbar()), ("mass", p.mass())]
    }

    fn json(&self) -> Value {
        let mut params = Map::new();
        for (k, v) in self.pairs() {
            params.insert(k.into(), json_number(v));
        }
        let mut units = Map::new();
        units.insert("hbar".into(), json_number(self.params.hbar()));
        units.insert("mass".into(), json_number(self.params.mass()));
        let mut meta = Map::new();
        meta.insert("schema_version".into(), SCHEMA_VERSION.into());
        meta.insert("command".into(), self.command.into());
        if let Some(kind) = self.kind {
            meta.insert("kind".into(), kind.name().into());
        }
        meta.insert("params".into(), Value::Object(params));
        meta.insert("units".into(), Value::Object(units));
        Value::Object(meta)
    }
}

fn write_table(out: impl Write, format: Format, meta: &Metadata, table: &Table) -> CliResult<()> {
    let mut out = out;
    match format {
        Format::Csv => {
            writeln!(out, "# schema_version={SCHEMA_VERSION}")?;
            writeln!(out, "# command={}", meta.command)?;
            if let Some(kind) = meta.kind {
                writeln!(out, "# kind={}", kind.name())?;
            }
            let params: Vec<String> = meta.pairs().iter().map(|(k, v)| format!("{k}={}", fmt_float(*v))).collect();
            writeln!(out, "# params {}", params.join(" "))?;
            writeln!(
                out,
                "# units hbar={} mass={}",
                fmt_float(meta.params.hbar()),
                fmt_float(meta.params.mass())
            )?;
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&table.columns)?;
            for row in &table.rows {
                w.write_record(row.iter().map(Cell::csv))?;
            }
            w.flush()?;
        }
        Format::Json => {
            let records: Vec<Value> = table
                .rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        table.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect();
                    Value::Object(obj)
                })
                .collect();
            let mut doc = Map::new();
            doc.insert("schema_version".into(), SCHEMA_VERSION.into());
            doc.insert("metadata".into(), meta.json());
            doc.insert("records".into(), Value::Array(records));
            serde_json::to_writer_pretty(&mut out, &Value::Object(doc)).map_err(io::Error::from)?;
            writeln!(out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn emit(cfg_out: Option<&Path>, format: Format, meta: &Metadata, table: &Table) -> CliResult<()> {
    match cfg_out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Failure(format!("cannot create {}: {e}", path.display())))?;
            write_table(BufWriter::new(file), format, meta, table)
        }
        None => write_table(io::stdout().lock(), format, meta, table),
    }
}

fn state_at(sol: &Solution, grid: GridSpec, t: f64, cfg: &RunConfig) -> GridState {
    sample(|x, t| sol.psi(x, t), grid, t, cfg.params.units())
}

pub fn density_table(cfg: &RunConfig) -> CliResult<Table> {
    let sol = cfg.solution()?;
    let grid = cfg.grid(false)?;
    let blocks: Vec<Vec<Vec<Cell>>> = cfg
        .times()
        .into_par_iter()
        .map(|t| {
            let state = state_at(&sol, grid, t, cfg);
            if let Err(e) = oracle::check_tails(&state) {
                eprintln!("warning: t = {t}: {e}");
            }
            grid.points()
                .zip(state.densities())
                .map(|(x, d)| vec![Cell::Num(t), Cell::Num(x), Cell::Num(d)])
                .collect()
        })
        .collect();
    Ok(Table { columns: vec!["t", "x", "density"], rows: blocks.into_iter().flatten().collect() })
}

pub fn moments_table(cfg: &RunConfig) -> CliResult<Table> {
    let sol = cfg.solution()?;
    let grid = cfg.grid(false)?;
    let rows = cfg
        .times()
        .into_par_iter()
        .map(|t| -> CliResult<Vec<Cell>> {
            let state = state_at(&sol, grid, t, cfg);
            let exact = sol.exact_moments(t);
            let (classical, approx) = match &sol {
                Solution::Bouncer(bp) => {
                    let near = bp.x_mean_near_collision(t);
                    (bp.x_classical(t), near.in_window.then_some(near.value))
                }
                Solution::Psi0(_) => (0.0, None),
                Solution::Free(p) => (p.center(t), None),
                Solution::Gprime(sp) => (sp.packet().center(t), None),
            };
            Ok(vec![
                Cell::Num(t),
                Cell::Num(oracle::moment_x(&state, 1)?),
                Cell::Num(classical),
                Cell::opt(approx),
                Cell::Num(oracle::moment_p(&state, 1)?),
                Cell::Num(exact.x2_mean),
                Cell::Num(exact.p2_mean),
                Cell::Num(oracle::moment_x(&state, 2)?),
                Cell::Num(oracle::moment_p(&state, 2)?),
            ])
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Table {
        columns: vec![
            "t",
            "x_mean_numeric",
            "x_mean_classical",
            "x_mean_approx",
            "p_mean_numeric",
            "x2_exact",
            "p2_exact",
            "x2_numeric",
            "p2_numeric",
        ],
        rows,
    })
}

pub fn autocorr_table(cfg: &RunConfig) -> CliResult<Table> {
    let sol = cfg.solution()?;
    let closed = |t: f64| match &sol {
        Solution::Free(p) => Ok(autocorrelation_free(p, t)),
        Solution::Bouncer(bp) => Ok(bp.autocorrelation(t)),
        _ => Err(CliError::Usage(format!("autocorr supports kinds free and bouncer, not {}", cfg.kind.name()))),
    };
    closed(0.0)?;
    let grid = cfg.grid(true)?;
    let initial = state_at(&sol, grid, 0.0, cfg);
    oracle::check_tails(&initial)?;
    let rows = cfg
        .times()
        .into_par_iter()
        .map(|t| -> CliResult<Vec<Cell>> {
            let a = closed(t)?;
            let state = state_at(&sol, grid, t, cfg);
            oracle::check_tails(&state)?;
            let numeric = oracle::overlap(&initial, &state)?;
            Ok(vec![
                Cell::Num(t),
                Cell::Num(a.re),
                Cell::Num(a.im),
                Cell::Num(a.norm_sqr()),
                Cell::Num(numeric.re),
                Cell::Num(numeric.im),
                Cell::Num(numeric.norm_sqr()),
            ])
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Table {
        columns: vec!["t", "re_a", "im_a", "abs2_a", "re_a_numeric", "im_a_numeric", "abs2_a_numeric"],
        rows,
    })
}

fn validate(cfg: &RunConfig) -> CliResult<()> {
    if cfg.kind != Kind::Bouncer {
        return Err(CliError::Usage("validate uses the bouncer kind".into()));
    }
    let vcfg = ValidationConfig { demo: cfg.params, x_min: cfg.x_min, n_points: cfg.n_points };
    let ids: Vec<&str> = validation::criterion_ids().collect();
    let outcomes: Vec<_> = ids.par_iter().filter_map(|id| validation::run(id, &vcfg)).collect();
    for o in &outcomes {
        eprintln!("{o}");
    }
    let table = Table {
        columns: vec!["id", "title", "passed", "detail"],
        rows: outcomes
            .iter()
            .map(|o| vec![Cell::Text(o.id.into()), Cell::Text(o.title.into()), Cell::Bool(o.passed), Cell::Text(o.detail.clone())])
            .collect(),
    };
    let meta = Metadata { command: "validate", kind: None, params: cfg.params };
    emit(cfg.out.as_deref(), cfg.format, &meta, &table)?;
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed > 0 {
        return Err(CliError::Failure(format!("{failed} of {} checks failed", outcomes.len())));
    }
    Ok(())
}

pub fn run(cli: Cli) -> CliResult<()> {
    let command = cli.command;
    let args = match &command {
        Command::Density(a) | Command::Moments(a) | Command::Autocorr(a) | Command::Validate(a) => a.clone(),
    };
    let cfg = args.resolve(&command)?;
    let (name, table) = match command {
        Command::Density(_) => ("density", density_table(&cfg)?),
        Command::Moments(_) => ("moments", moments_table(&cfg)?),
        Command::Autocorr(_) => ("autocorr", autocorr_table(&cfg)?),
        Command::Validate(_) => return validate(&cfg),
    };
    let meta = Metadata { command: name, kind: Some(cfg.kind), params: cfg.params };
    emit(cfg.out.as_deref(), cfg.format, &meta, &table)
}
