//! Command-line front end: configuration, subcommands and report rendering.
//!
//! The binary only forwards `std::env::args_os()` to [`main_with_args`], so
//! everything here is reachable from library code and tests.

mod validate;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::control::Protocol;
use crate::dynamics::{work_exact, BathContext};
use crate::error::Error;
use crate::geodesic::{landauer_constant, shoot, ShootOptions};
use crate::geometry::{excess_work, metric, metric_polygamma, metric_quadrature_with, MetricMethod};
use crate::protocols::plan;
use crate::special::QuadratureSpec;

pub use validate::{metric_consistency, run_suite, Check, ValidationReport};

/// Exit codes of the binary.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Tolerances forwarded to the numerical kernels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// relative tolerance of frequency quadratures
    pub quadrature: f64,
    /// relative and absolute tolerance of geodesic integration
    pub ode: f64,
    /// relative tolerance on the shooting target
    pub shooting: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { quadrature: 1e-11, ode: 1e-12, shooting: 1e-6 }
    }
}

/// Settings shared by all subcommands.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    /// inverse temperature; energies are in units of 1/β when absent
    pub beta: Option<f64>,
    pub tau: Option<f64>,
    pub tolerances: Tolerances,
    pub omega_max: Option<f64>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub quiet: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            beta: None,
            tau: None,
            tolerances: Tolerances::default(),
            omega_max: None,
            format: OutputFormat::Json,
            out: None,
            quiet: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let t = &self.tolerances;
        if !(t.quadrature > 0.0 && t.ode > 0.0 && t.shooting > 0.0) {
            return Err(CliError::Usage("all tolerances must be > 0".into()));
        }
        for (name, v) in [("beta", self.beta), ("tau", self.tau), ("omega-max", self.omega_max)] {
            if let Some(x) = v {
                if !(x > 0.0 && x.is_finite()) {
                    return Err(CliError::Usage(format!("--{name} must be positive and finite, got {x}")));
                }
            }
        }
        Ok(())
    }

    pub fn beta(&self) -> f64 {
        self.beta.unwrap_or(1.0)
    }

    pub fn tau(&self) -> f64 {
        self.tau.unwrap_or(1.0)
    }

    fn shoot_options(&self, t0: f64) -> ShootOptions {
        let mut o = ShootOptions { t0, rel_tol: self.tolerances.shooting, ..ShootOptions::default() };
        o.geodesic.rtol = self.tolerances.ode;
        o.geodesic.atol = self.tolerances.ode;
        o.geodesic.tau = self.tau();
        o
    }
}

/// A number (or structure) with the method that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Labeled {
    pub value: Value,
    pub method: &'static str,
}

fn labeled(value: impl Serialize, method: &'static str) -> Labeled {
    Labeled { value: serde_json::to_value(value).unwrap_or(Value::Null), method }
}

/// Column table; missing cells are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|c| c.map(|v| format!("{v:e}")).unwrap_or_default()).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

const PROTOCOL_COLUMNS: [&str; 6] = ["t", "eps", "mu", "p", "v", "speed"];

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub results: BTreeMap<String, Labeled>,
    pub diagnostics: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Table>,
    pub version: &'static str,
    pub timestamp: String,
}

impl RunReport {
    fn new(command: &str, inputs: Value) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            results: BTreeMap::new(),
            diagnostics: Value::Null,
            samples: None,
            version: env!("CARGO_PKG_VERSION"),
            timestamp: chrono::Utc::now().to_rfc3339(),
        }
    }

    fn put(&mut self, name: &str, value: impl Serialize, method: &'static str) {
        self.results.insert(name.to_string(), labeled(value, method));
    }

    /// Numeric value of a scalar result.
    pub fn number(&self, name: &str) -> Option<f64> {
        self.results.get(name).and_then(|l| l.value.as_f64())
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            OutputFormat::Csv => match &self.samples {
                Some(t) => t.to_csv(),
                None => {
                    let mut s = String::from("quantity,value,method\n");
                    for (k, l) in &self.results {
                        let v = match &l.value {
                            Value::Number(n) => n.to_string(),
                            other => format!("\"{}\"", other.to_string().replace('"', "'")),
                        };
                        s.push_str(&format!("{k},{v},{}\n", l.method));
                    }
                    s
                }
            },
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0} validation check(s) failed")]
    Validation(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Lib(e) if e.is_usage() => EXIT_USAGE,
            CliError::Lib(_) | CliError::Validation(_) => EXIT_NUMERICAL,
        }
    }
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// 2×2 tensor, eigenvalues and condition number at one control point.
pub fn cmd_metric(cfg: &RunConfig, eps: f64, mu: f64, method: MetricMethod) -> Result<RunReport, CliError> {
    let beta = cfg.beta();
    let m = match method {
        MetricMethod::Quadrature => {
            metric_quadrature_with(eps, mu, beta, &QuadratureSpec::default().with_tol(cfg.tolerances.quadrature, 0.0))?
        }
        other => metric(eps, mu, beta, other)?,
    };
    let mut r = RunReport::new("metric", json!({ "beta": beta, "eps": eps, "mu": mu, "method": method.name() }));
    let name = method.name();
    r.put("m_ee", m.m_ee, name);
    r.put("m_em", m.m_em, name);
    r.put("m_mm", m.m_mm, name);
    r.put("tensor", m.as_matrix(), name);
    r.put("eigenvalues", m.eigenvalues(), name);
    r.put("condition_number", m.condition_number(), name);
    Ok(r)
}

/// Shoots the erasure geodesic to ε(1) = `target_eps` and tabulates it.
pub fn cmd_geodesic(cfg: &RunConfig, target_eps: f64, k: u32, t0: f64) -> Result<(RunReport, Protocol), CliError> {
    if !(target_eps > 0.0 && target_eps.is_finite()) {
        return Err(CliError::Usage("--target-eps must be positive".into()));
    }
    if k == 0 {
        return Err(CliError::Usage("--k must be >= 1".into()));
    }
    let beta = cfg.beta();
    let shot = shoot(beta * target_eps, k, beta, &cfg.shoot_options(t0))?;
    let sol = &shot.solution;
    let mut r = RunReport::new(
        "geodesic",
        json!({ "beta": beta, "target_eps": target_eps, "k": k, "t0": t0, "tau": cfg.tau(), "tolerances": cfg.tolerances }),
    );
    r.put("length", sol.length, "polygamma");
    r.put("sigma_tau", sol.sigma_tau, "polygamma");
    r.put("sigma_kbt", sol.sigma_kbt, "polygamma");
    r.put("eps_star", shot.eps_star, "polygamma");
    r.put("beta_eps_final", shot.achieved, "polygamma");
    r.put("tail_bound", sol.diagnostics.tail_bound, "zero_t");
    r.diagnostics = json!({
        "termination": sol.termination,
        "iterations": shot.iterations,
        "speed_variation": sol.diagnostics.speed_variation,
        "t_end_raw": sol.diagnostics.t_end_raw,
        "ode": sol.diagnostics.ode,
        "scan": shot.scan,
    });
    let speeds: BTreeMap<u64, f64> = sol.speed_profile.iter().map(|&(t, s)| (t.to_bits(), s)).collect();
    let p = &sol.protocol;
    let mut table = Table::new(&PROTOCOL_COLUMNS);
    for i in 0..p.knots.len() {
        let t = p.knots[i];
        table.rows.push(vec![Some(t), Some(p.eps[i]), Some(p.mu[i]), None, None, speeds.get(&t.to_bits()).copied()]);
    }
    r.samples = Some(table);
    Ok((r, sol.protocol.clone()))
}

/// Either one u = βμ* or a log grid `lo:hi:n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OneParamInput {
    Single(f64),
    Grid { lo: f64, hi: f64, n: usize },
}

impl std::str::FromStr for OneParamInput {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || CliError::Usage(format!("--grid expects lo:hi:n with 0 < lo < hi and n >= 2, got '{s}'"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = parts[0].parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].parse().map_err(|_| bad())?;
        let n: usize = parts[2].parse().map_err(|_| bad())?;
        if !(lo > 0.0 && hi > lo && hi.is_finite() && n >= 2) {
            return Err(bad());
        }
        Ok(OneParamInput::Grid { lo, hi, n })
    }
}

/// Sequential three-step plan: L1, L2, the time split and the total cost.
pub fn cmd_one_param(cfg: &RunConfig, input: OneParamInput, samples: usize) -> Result<RunReport, CliError> {
    let beta = cfg.beta();
    let tau = cfg.tau();
    match input {
        OneParamInput::Single(u) => {
            let pl = plan(u, beta, tau, samples)?;
            let mut r =
                RunReport::new("one-param", json!({ "beta": beta, "tau": tau, "beta_mu_star": u, "samples": samples }));
            r.put("l1", pl.l1, "polygamma");
            r.put("l2", pl.l2, "polygamma");
            r.put("tau1_fraction", pl.tau1_fraction, "polygamma");
            r.put("sigma_tau", pl.sigma_tau_beta, "polygamma");
            r.put("sigma_kbt", pl.sigma_kbt, "polygamma");
            r.diagnostics = json!({ "l2": pl.l2_detail });
            if samples > 0 {
                let p = pl.protocol()?;
                let mut table = Table::new(&PROTOCOL_COLUMNS);
                for i in 0..p.knots.len() {
                    table.rows.push(vec![Some(p.knots[i]), Some(p.eps[i]), Some(p.mu[i]), None, None, None]);
                }
                r.samples = Some(table);
            }
            Ok(r)
        }
        OneParamInput::Grid { lo, hi, n } => {
            let us: Vec<f64> = (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect();
            // collect keeps input order
            let plans: Vec<_> = us.par_iter().map(|&u| plan(u, beta, tau, 0)).collect::<Result<_, _>>()?;
            let mut r = RunReport::new(
                "one-param",
                json!({ "beta": beta, "tau": tau, "grid": { "lo": lo, "hi": hi, "n": n } }),
            );
            let mut table = Table::new(&["beta_mu_star", "l1", "l2", "tau1_fraction", "sigma_tau"]);
            let mut best = (f64::INFINITY, 0.0);
            for pl in &plans {
                table.rows.push(vec![
                    Some(pl.u),
                    Some(pl.l1),
                    Some(pl.l2),
                    Some(pl.tau1_fraction),
                    Some(pl.sigma_tau_beta),
                ]);
                if pl.sigma_tau_beta < best.0 {
                    best = (pl.sigma_tau_beta, pl.u);
                }
            }
            r.put("min_sigma_tau", best.0, "polygamma");
            r.put("argmin_beta_mu_star", best.1, "polygamma");
            r.diagnostics = json!({ "step2_bound": PI / 4.0, "bound_holds": plans.iter().all(|p| p.sigma_tau_beta >= PI / 4.0 - 1e-6) });
            r.samples = Some(table);
            Ok(r)
        }
    }
}

/// Exact p(t), v(t) and work of a protocol read from a file.
pub fn cmd_dynamics(cfg: &RunConfig, mut proto: Protocol, p0: Option<f64>, rows: usize) -> Result<RunReport, CliError> {
    if let Some(t) = cfg.tau {
        proto = proto.with_tau(t)?;
    }
    let beta = cfg.beta.unwrap_or(proto.beta);
    let mut ctx = BathContext::new(beta);
    if let Some(w) = cfg.omega_max {
        ctx = ctx.with_omega_max(w);
    }
    if let Some(p) = p0 {
        ctx = ctx.with_p0(p);
    }
    let res = work_exact(&proto, &ctx)?;
    let mut r = RunReport::new(
        "dynamics",
        json!({ "beta": beta, "tau": proto.tau, "p0": p0, "omega_max": res.diagnostics.omega_max, "interpolation": proto.interpolation.to_string(), "knots": proto.knots.len() }),
    );
    r.put("work", res.work, "exact_dynamics");
    r.put("delta_f", res.delta_f, "quadrature");
    r.put("sigma_kbt", res.sigma_kbt, "exact_dynamics");
    if let Ok(geo) = excess_work(&proto, beta, MetricMethod::Polygamma) {
        r.put("sigma_kbt_geometry", geo.sigma_kbt, "polygamma");
        r.put("length", geo.length, "polygamma");
    }
    r.diagnostics = serde_json::to_value(&res.diagnostics).unwrap_or(Value::Null);
    let stride = (res.t.len().saturating_sub(1) / rows.max(1)).max(1);
    let mut table = Table::new(&PROTOCOL_COLUMNS);
    for i in (0..res.t.len()).step_by(stride) {
        let s = proto.sample(res.t[i]);
        let speed = metric_polygamma(s.eps, s.mu, beta).ok().map(|m| m.quadratic_form(s.deps, s.dmu));
        table.rows.push(vec![Some(res.t[i]), Some(s.eps), Some(s.mu), Some(res.p[i]), Some(res.v[i]), speed]);
    }
    r.samples = Some(table);
    Ok(r)
}

/// Saturation of τ·kBTΣ of the erasure geodesic over increasing targets βε(1).
pub fn cmd_erasure_constant(cfg: &RunConfig, targets: &[f64], t0: f64) -> Result<RunReport, CliError> {
    let beta = cfg.beta();
    let est = landauer_constant(targets, beta, &cfg.shoot_options(t0))?;
    let mut r = RunReport::new(
        "erasure-constant",
        json!({ "beta": beta, "targets": targets, "t0": t0, "tolerances": cfg.tolerances }),
    );
    r.put("a_estimate", est.a, "polygamma");
    r.put("uncertainty", est.uncertainty, "polygamma");
    r.put("saturating", est.saturating, "polygamma");
    r.diagnostics = json!({ "seed_time_delta": est.seed_time_delta });
    let mut table = Table::new(&["target", "achieved", "sigma_tau", "tail_bound", "eps_star"]);
    for &(t, a, s, b, e) in &est.per_target {
        table.rows.push(vec![Some(t), Some(a), Some(s), Some(b), Some(e)]);
    }
    r.samples = Some(table);
    Ok(r)
}

/// Invariant suite and desk-scale acceptance checks.
pub fn cmd_validate(strict: bool) -> (RunReport, bool) {
    let v = run_suite(strict);
    let mut r = RunReport::new("validate", json!({ "strict": strict }));
    for c in &v.checks {
        r.results.insert(
            c.name.clone(),
            labeled(json!({ "passed": c.passed, "observed": c.observed, "tolerance": c.tolerance }), c.method),
        );
    }
    let failed = v.checks.iter().filter(|c| !c.passed).count();
    r.diagnostics = json!({ "seconds": v.seconds, "failed": failed, "checks": v.checks });
    (r, failed == 0)
}

#[derive(Debug, Parser)]
#[command(name = "landauer-geo", version, about = "Finite-time erasure in the driven resonant-level model")]
pub struct Cli {
    /// write the report here as well as to stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: OutputFormat,
    /// suppress stdout
    #[arg(long, global = true)]
    pub quiet: bool,
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    #[arg(long, global = true)]
    pub tau: Option<f64>,
    #[arg(long = "omega-max", global = true)]
    pub omega_max: Option<f64>,
    #[arg(long = "quad-tol", global = true, default_value_t = 1e-11)]
    pub quad_tol: f64,
    #[arg(long = "ode-tol", global = true, default_value_t = 1e-12)]
    pub ode_tol: f64,
    #[arg(long = "shoot-tol", global = true, default_value_t = 1e-6)]
    pub shoot_tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Metric tensor at one control point
    Metric {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        eps: f64,
        #[arg(long)]
        mu: f64,
        /// polygamma | quadrature | high-t | zero-t
        #[arg(long, default_value = "polygamma")]
        method: String,
    },
    /// Optimal erasure geodesic to a final level energy
    Geodesic {
        #[arg(long = "target-eps")]
        target_eps: f64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 1e-3)]
        t0: f64,
        /// also write the protocol file here
        #[arg(long = "protocol-out")]
        protocol_out: Option<PathBuf>,
    },
    /// Sequential one-parameter plan
    OneParam {
        #[arg(long = "beta-mu-star", conflicts_with = "grid", required_unless_present = "grid")]
        beta_mu_star: Option<f64>,
        /// log grid lo:hi:n of βμ*
        #[arg(long)]
        grid: Option<String>,
        /// schedule samples per step (0: lengths only)
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Exact dynamics and work for a protocol file
    Dynamics {
        #[arg(long)]
        protocol: PathBuf,
        #[arg(long)]
        p0: Option<f64>,
        /// maximum table rows
        #[arg(long, default_value_t = 1024)]
        rows: usize,
    },
    /// Finite-time Landauer constant from the saturation of τ·kBTΣ
    ErasureConstant {
        #[arg(long, value_delimiter = ',', default_value = "10,20,50")]
        targets: Vec<f64>,
        #[arg(long, default_value_t = 1e-3)]
        t0: f64,
    },
    /// Invariant suite and acceptance checks
    Validate {
        /// tightened tolerances
        #[arg(long)]
        strict: bool,
    },
}

impl Cli {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            beta: self.beta,
            tau: self.tau,
            tolerances: Tolerances { quadrature: self.quad_tol, ode: self.ode_tol, shooting: self.shoot_tol },
            omega_max: self.omega_max,
            format: self.format,
            out: self.out.clone(),
            quiet: self.quiet,
        }
    }
}

/// Runs one parsed command and returns the report.
pub fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let cfg = cli.config();
    cfg.validate()?;
    match &cli.command {
        Command::Metric { eps, mu, method } => {
            let m: MetricMethod = method.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
            cmd_metric(&cfg, *eps, *mu, m)
        }
        Command::Geodesic { target_eps, k, t0, protocol_out } => {
            let (r, p) = cmd_geodesic(&cfg, *target_eps, *k, *t0)?;
            if let Some(path) = protocol_out {
                write_file(path, &p.to_json())?;
            }
            Ok(r)
        }
        Command::OneParam { beta_mu_star, grid, samples } => {
            let input = match (beta_mu_star, grid) {
                (Some(u), None) => OneParamInput::Single(*u),
                (None, Some(g)) => g.parse()?,
                _ => return Err(CliError::Usage("give exactly one of --beta-mu-star and --grid".into())),
            };
            cmd_one_param(&cfg, input, *samples)
        }
        Command::Dynamics { protocol, p0, rows } => {
            let body =
                std::fs::read_to_string(protocol).map_err(|source| CliError::Io { path: protocol.clone(), source })?;
            let proto = Protocol::from_json(&body)?;
            cmd_dynamics(&cfg, proto, *p0, *rows)
        }
        Command::ErasureConstant { targets, t0 } => cmd_erasure_constant(&cfg, targets, *t0),
        Command::Validate { strict } => {
            let (r, ok) = cmd_validate(*strict);
            if !cfg.quiet {
                if let Some(checks) = r.diagnostics["checks"].as_array() {
                    for c in checks {
                        let pass = c["passed"].as_bool().unwrap_or(false);
                        eprintln!(
                            "{} {} observed {} tolerance {}",
                            if pass { "PASS" } else { "FAIL" },
                            c["name"].as_str().unwrap_or("?"),
                            c["observed"],
                            c["tolerance"]
                        );
                    }
                }
            }
            if !ok {
                let failed = r.diagnostics["failed"].as_u64().unwrap_or(1) as usize;
                emit(&cfg, &r)?;
                return Err(CliError::Validation(failed));
            }
            Ok(r)
        }
    }
}

fn emit(cfg: &RunConfig, r: &RunReport) -> Result<(), CliError> {
    let body = r.render(cfg.format);
    if let Some(path) = &cfg.out {
        write_file(path, &body)?;
    }
    if !cfg.quiet {
        use std::io::Write;
        // a closed pipe (`| head`) is not an error worth reporting
        let _ = std::io::stdout().lock().write_all(body.as_bytes());
    }
    Ok(())
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or("LANDAUER_GEO_LOG", "error");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

/// Parses `args`, runs the command, prints or writes the report and returns
/// the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let cfg = cli.config();
    match run(&cli).and_then(|r| emit(&cfg, &r)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
