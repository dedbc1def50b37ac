//! Command-line front end.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success, or a solvability verdict |
//! | 1 | I/O failure |
//! | 2 | flow choked |
//! | 3 | no subsonic exit state |
//! | 4 | invalid configuration or arguments |
//! | 5 | exit speed varies with the shock location beyond the threshold |
//! | 6 | a verification check failed |

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::branch::{integrate_ode, DEFAULT_ODE_STEP, DEFAULT_ROOT_TOL};
use crate::error::Error;
use crate::family::{
    build_solution, solvability, sweep, NozzleProblem, SolverOptions, SweepReport,
    TransonicSolution, Verdict, DEFAULT_PANELS,
};
use crate::gas::GasParams;
use crate::geometry::{MetricProfile, Table};
use crate::residual::{classify_field, convergence_study, residual_report};
use crate::shock::jump_identity_residual;
use crate::svg;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CHOKED: i32 = 2;
pub const EXIT_NO_SUBSONIC_ROOT: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;
pub const EXIT_INVARIANCE: i32 = 5;
pub const EXIT_CHECK_FAILED: i32 = 6;

pub const DEFAULT_SPREAD_THRESHOLD: f64 = 1e-9;
const DEFAULT_SWEEP_COUNT: usize = 100;
const DEFAULT_PRECISION: usize = 12;
const DEFAULT_RESIDUAL_STEP: f64 = 0.04;

// check thresholds
const IDENTITY_TOL: f64 = 1e-11;
const RELATION_TOL: f64 = 1e-12;
const FLUX_JUMP_TOL: f64 = 1e-12;
const FLUX_GLOBAL_TOL: f64 = 1e-10;
const RESIDUAL_PROBE_STEP: f64 = 1e-3;
const RESIDUAL_PROBE_TOL: f64 = 1e-4;
const RATIO_BAND: (f64, f64) = (3.5, 4.5);
const REFINEMENTS: usize = 3;
const ORACLE_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "transonic",
    version,
    about = "Transonic shock families on axisymmetric surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the solution with the shock at a given location.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Shock coordinate.
        #[arg(long = "shock")]
        shock: f64,
    },
    /// Sweep the shock across the duct and measure the exit-speed spread.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Largest admissible relative spread of the exit speed.
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Verify residuals, jump identities and the ODE cross-check.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long = "shock")]
        shock: f64,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Directory receiving the output files, overriding the configured paths.
    #[arg(long = "out-dir")]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub gas: GasConfig,
    pub geometry: GeometryConfig,
    pub problem: ProblemConfig,
    #[serde(default)]
    pub numerics: NumericsConfig,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasConfig {
    pub gamma: f64,
    pub c0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometryKind {
    Sphere,
    Linear,
    CoshLike,
    Tabulated,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub kind: GeometryKind,
    pub a: Option<f64>,
    pub b: Option<f64>,
    /// Two-column `x n` table, relative to the config file.
    pub table: Option<PathBuf>,
    /// Defaults to the problem's entry/exit (or the table range).
    pub x_lo: Option<f64>,
    pub x_hi: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub x0: f64,
    pub x1: f64,
    pub u0: f64,
    pub c_exit: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsConfig {
    pub root_tol: f64,
    pub ode_step: f64,
    pub quadrature_panels: usize,
    pub sweep_count: usize,
    /// Coarsest step of the residual convergence study.
    pub residual_step: f64,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        Self {
            root_tol: DEFAULT_ROOT_TOL,
            ode_step: DEFAULT_ODE_STEP,
            quadrature_panels: DEFAULT_PANELS,
            sweep_count: DEFAULT_SWEEP_COUNT,
            residual_step: DEFAULT_RESIDUAL_STEP,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub csv_path: PathBuf,
    pub svg_path: Option<PathBuf>,
    #[serde(default = "default_precision")]
    pub precision: usize,
}

fn default_precision() -> usize {
    DEFAULT_PRECISION
}

/// A configuration that passed validation.
#[derive(Debug, Clone)]
pub struct Run {
    pub problem: NozzleProblem,
    pub opts: SolverOptions,
    pub ode_step: f64,
    pub residual_step: f64,
    pub sweep_count: usize,
    pub csv_path: PathBuf,
    pub svg_path: Option<PathBuf>,
    pub precision: usize,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Choked { .. } => EXIT_CHOKED,
            Error::NoSubsonicRoot { .. } => EXIT_NO_SUBSONIC_ROOT,
            Error::InvariantViolation(_) => EXIT_CHECK_FAILED,
            _ => EXIT_VALIDATION,
        };
        Self::new(code, e.to_string())
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::new(EXIT_IO, format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::new(EXIT_VALIDATION, format!("{}: {e}", path.display())))
    }

    /// Checks every field and builds the problem, collecting all issues into
    /// one report. Relative paths resolve against `base_dir`.
    pub fn validate(&self, base_dir: &Path) -> Result<Run, Vec<String>> {
        let mut issues = Vec::new();
        let gas = GasParams::new(self.gas.gamma, self.gas.c0)
            .map_err(|e| issues.push(e.to_string()))
            .ok();
        let geom = self
            .geometry(base_dir)
            .map_err(|e| issues.push(e.to_string()))
            .ok();

        let n = &self.numerics;
        if !(n.root_tol > 0.0 && n.root_tol < 1e-3) {
            issues.push(format!(
                "numerics.root_tol must lie in (0, 1e-3), got {}",
                n.root_tol
            ));
        }
        if !(n.ode_step > 0.0 && n.ode_step.is_finite()) {
            issues.push(format!(
                "numerics.ode_step must be positive, got {}",
                n.ode_step
            ));
        }
        if n.quadrature_panels < 2 {
            issues.push(format!(
                "numerics.quadrature_panels must be at least 2, got {}",
                n.quadrature_panels
            ));
        }
        if n.sweep_count < 2 {
            issues.push(format!(
                "numerics.sweep_count must be at least 2, got {}",
                n.sweep_count
            ));
        }
        if !(n.residual_step > 0.0 && n.residual_step.is_finite()) {
            issues.push(format!(
                "numerics.residual_step must be positive, got {}",
                n.residual_step
            ));
        }
        if !(1..=17).contains(&self.output.precision) {
            issues.push(format!(
                "output.precision must lie in 1..=17, got {}",
                self.output.precision
            ));
        }

        let p = &self.problem;
        if !(p.x1 > p.x0) {
            issues.push(format!(
                "problem.x1 = {} must exceed problem.x0 = {}",
                p.x1, p.x0
            ));
        }
        if let Some(gas) = &gas {
            if !(p.u0 > gas.critical_speed() && p.u0 < gas.max_speed()) {
                issues.push(format!(
                    "problem.u0 = {} must be supersonic, inside ({}, {})",
                    p.u0,
                    gas.critical_speed(),
                    gas.max_speed()
                ));
            }
            if let Some(c) = p.c_exit {
                if !(c > 0.0 && c < gas.critical_speed()) {
                    issues.push(format!(
                        "problem.c_exit = {c} must be subsonic, inside (0, {})",
                        gas.critical_speed()
                    ));
                }
            }
        }
        if let Some(geom) = &geom {
            for (name, x) in [("x0", p.x0), ("x1", p.x1)] {
                if !geom.contains(x) {
                    let (lo, hi) = geom.domain();
                    issues.push(format!(
                        "problem.{name} = {x} outside the geometry domain [{lo}, {hi}]"
                    ));
                }
            }
        }
        let problem = match (gas, geom) {
            (Some(gas), Some(geom)) if issues.is_empty() => {
                NozzleProblem::new(gas, geom, p.x0, p.x1, p.u0, p.c_exit)
                    .map_err(|e| issues.push(e.to_string()))
                    .ok()
            }
            _ => None,
        };

        match problem {
            Some(problem) if issues.is_empty() => Ok(Run {
                problem,
                opts: SolverOptions {
                    root_tol: n.root_tol,
                    panels: n.quadrature_panels,
                },
                ode_step: n.ode_step,
                residual_step: n.residual_step,
                sweep_count: n.sweep_count,
                csv_path: base_dir.join(&self.output.csv_path),
                svg_path: self.output.svg_path.as_ref().map(|p| base_dir.join(p)),
                precision: self.output.precision,
            }),
            _ => Err(issues),
        }
    }

    fn geometry(&self, base_dir: &Path) -> crate::Result<MetricProfile> {
        let g = &self.geometry;
        let lo = g.x_lo.unwrap_or(self.problem.x0);
        let hi = g.x_hi.unwrap_or(self.problem.x1);
        let param = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::InvalidProfile(format!("geometry.{name} is required")))
        };
        match g.kind {
            GeometryKind::Sphere => MetricProfile::sphere(lo, hi),
            GeometryKind::Linear => {
                MetricProfile::linear(param(g.a, "a")?, param(g.b, "b")?, lo, hi)
            }
            GeometryKind::CoshLike => {
                MetricProfile::cosh_like(param(g.a, "a")?, param(g.b, "b")?, lo, hi)
            }
            GeometryKind::Tabulated => {
                let path = g
                    .table
                    .as_ref()
                    .ok_or_else(|| Error::InvalidProfile("geometry.table is required".into()))?;
                Ok(MetricProfile::tabulated(Table::load(&base_dir.join(path))?))
            }
        }
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
            return if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Solve { common, shock } => prepare(&common).and_then(|run| cmd_solve(&run, shock)),
        Command::Sweep { common, threshold } => prepare(&common)
            .and_then(|run| cmd_sweep(&run, threshold.unwrap_or(DEFAULT_SPREAD_THRESHOLD))),
        Command::Check { common, shock } => prepare(&common).and_then(|run| cmd_check(&run, shock)),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn prepare(common: &Common) -> Result<Run, Failure> {
    let config = RunConfig::load(&common.config)?;
    let base = common
        .config
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_default();
    let mut run = config.validate(&base).map_err(|issues| {
        let mut msg = String::from("invalid configuration:");
        for i in issues {
            let _ = write!(msg, "\n  - {i}");
        }
        Failure::new(EXIT_VALIDATION, msg)
    })?;
    if let Some(dir) = &common.out_dir {
        run.csv_path = rebase(dir, &run.csv_path);
        run.svg_path = run.svg_path.as_deref().map(|p| rebase(dir, p));
    }
    Ok(run)
}

fn rebase(dir: &Path, p: &Path) -> PathBuf {
    dir.join(p.file_name().unwrap_or(p.as_os_str()))
}

fn check_shock(run: &Run, x_b: f64) -> Result<(), Failure> {
    let p = &run.problem;
    if !(x_b >= p.x0 && x_b <= p.x1) {
        return Err(Failure::new(
            EXIT_VALIDATION,
            format!("shock location {x_b} outside [{}, {}]", p.x0, p.x1),
        ));
    }
    Ok(())
}

fn num(v: f64, precision: usize) -> String {
    format!("{:.*e}", precision - 1, v)
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let io =
        |e: std::io::Error| Failure::new(EXIT_IO, format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// CSV of the solution's nodes preceded by `#` lines describing the jump.
pub fn solution_csv(run: &Run, s: &TransonicSolution) -> String {
    let p = run.precision;
    let j = &s.jump;
    let gas = &run.problem.gas;
    let mut out = String::new();
    let _ = writeln!(out, "# transonic shock solution");
    for (k, v) in [
        ("x_b", j.x_b),
        ("u_minus", j.u_minus),
        ("u_plus", j.u_plus),
        ("rho_minus", j.rho_minus),
        ("rho_plus", j.rho_plus),
        ("p_minus", j.p_minus),
        ("p_plus", j.p_plus),
        ("c_minus", j.c_minus),
        ("c_plus", j.c_plus),
        ("u1", s.u1),
    ] {
        let _ = writeln!(out, "# {k},{}", num(v, p));
    }
    out.push_str("x,u,rho,c,p,regime,phi\n");
    let pieces = [
        (&s.supersonic_profile, &s.phi.supersonic),
        (&s.subsonic_profile, &s.phi.subsonic),
    ];
    for (profile, phi) in pieces {
        for ((x, st), f) in profile.grid.iter().zip(&profile.states).zip(phi.iter()) {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                num(*x, p),
                num(st.u, p),
                num(st.rho, p),
                num(st.c, p),
                num(st.pressure(gas), p),
                st.regime,
                num(*f, p)
            );
        }
    }
    out
}

pub fn cmd_solve(run: &Run, x_b: f64) -> Result<(), Failure> {
    check_shock(run, x_b)?;
    let s = build_solution(&run.problem, x_b, &run.opts)?;
    write_atomic(&run.csv_path, &solution_csv(run, &s))?;
    if let Some(svg_path) = &run.svg_path {
        let doc = svg::render(&[profile_panel(&[&s])]);
        write_atomic(svg_path, &doc)?;
    }
    println!(
        "shock at {}: u- = {}, u+ = {}, exit speed u1 = {}",
        x_b, s.jump.u_minus, s.jump.u_plus, s.u1
    );
    Ok(())
}

fn profile_panel(solutions: &[&TransonicSolution]) -> svg::Panel {
    svg::Panel {
        title: "speed profiles".into(),
        x_label: "x".into(),
        y_label: "u".into(),
        series: solutions
            .iter()
            .map(|s| svg::Series {
                label: format!("shock at {:.4}", s.jump.x_b),
                points: s
                    .supersonic_profile
                    .grid
                    .iter()
                    .zip(&s.supersonic_profile.speeds)
                    .chain(
                        s.subsonic_profile
                            .grid
                            .iter()
                            .zip(&s.subsonic_profile.speeds),
                    )
                    .map(|(x, u)| (*x, *u))
                    .collect(),
            })
            .collect(),
    }
}

pub fn sweep_csv(run: &Run, report: &SweepReport) -> String {
    let p = run.precision;
    let mut out = String::new();
    let _ = writeln!(out, "# relative_spread,{}", num(report.relative_spread, p));
    let _ = writeln!(
        out,
        "# max_discrete_derivative,{}",
        num(report.max_discrete_derivative, p)
    );
    out.push_str("x_b,u1,u_minus,u_plus,identity_residual\n");
    for (x_b, pt) in report.points() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            num(x_b, p),
            num(pt.u1, p),
            num(pt.u_minus, p),
            num(pt.u_plus, p),
            num(pt.identity.cancellation, p)
        );
    }
    out
}

pub fn cmd_sweep(run: &Run, threshold: f64) -> Result<(), Failure> {
    if !(threshold > 0.0) {
        return Err(Failure::new(
            EXIT_VALIDATION,
            format!("threshold must be positive, got {threshold}"),
        ));
    }
    let report = sweep(&run.problem, run.sweep_count, &run.opts)?;
    for (x_b, e) in report.failures() {
        eprintln!("warning: shock at {x_b} failed: {e}");
    }
    write_atomic(&run.csv_path, &sweep_csv(run, &report))?;
    if let Some(svg_path) = &run.svg_path {
        let p = &run.problem;
        let mut reps = Vec::new();
        for frac in [0.25, 0.5, 0.75] {
            reps.push(build_solution(p, p.x0 + frac * (p.x1 - p.x0), &run.opts)?);
        }
        let exit_panel = svg::Panel {
            title: "exit speed against shock location".into(),
            x_label: "shock location".into(),
            y_label: "u1".into(),
            series: vec![svg::Series {
                label: "u1".into(),
                points: report.points().map(|(x, pt)| (x, pt.u1)).collect(),
            }],
        };
        let refs: Vec<&TransonicSolution> = reps.iter().collect();
        write_atomic(svg_path, &svg::render(&[exit_panel, profile_panel(&refs)]))?;
    }
    println!(
        "relative_spread = {:e} over {} locations (threshold {:e}), max |du1/dx_b| = {:e}",
        report.relative_spread,
        report.points().count(),
        threshold,
        report.max_discrete_derivative
    );
    if report.relative_spread < threshold {
        Ok(())
    } else {
        Err(Failure::new(
            EXIT_INVARIANCE,
            format!(
                "exit speed spread {:e} exceeds threshold {threshold:e}",
                report.relative_spread
            ),
        ))
    }
}

struct CheckRow {
    name: String,
    value: f64,
    bound: String,
    pass: bool,
}

fn row(name: impl Into<String>, value: f64, bound: impl Into<String>, pass: bool) -> CheckRow {
    CheckRow {
        name: name.into(),
        value,
        bound: bound.into(),
        pass,
    }
}

fn below(name: &str, value: f64, limit: f64) -> CheckRow {
    row(name, value, format!("<{limit:e}"), value < limit)
}

pub fn cmd_check(run: &Run, x_b: f64) -> Result<(), Failure> {
    check_shock(run, x_b)?;
    let problem = &run.problem;
    let gas = &problem.gas;
    let geom = &problem.geom;
    let s = build_solution(problem, x_b, &run.opts)?;
    let mut rows = Vec::new();

    let identity = jump_identity_residual(gas, &s.jump);
    rows.push(below(
        "jump_identity",
        identity.cancellation.abs(),
        IDENTITY_TOL,
    ));
    rows.push(below("jump_relation", identity.relation, RELATION_TOL));
    let (m_minus, m_plus) = s.jump.mass_fluxes();
    rows.push(below(
        "jump_mass_flux",
        ((m_minus - m_plus) / m_minus).abs(),
        FLUX_JUMP_TOL,
    ));
    rows.push(row(
        "entropy",
        s.jump.p_plus - s.jump.p_minus,
        ">0",
        s.jump.satisfies_entropy(),
    ));
    rows.push(below(
        "mass_flux_conservation",
        s.mass_flux_deviation(geom)?,
        FLUX_GLOBAL_TOL,
    ));
    rows.push(row(
        "type_flags",
        0.0,
        "piecewise regimes",
        classify_field(gas, &s).is_ok(),
    ));

    match residual_report(gas, geom, &s, RESIDUAL_PROBE_STEP) {
        Ok(r) => {
            rows.push(below("ode_residual_max", r.max_abs_ode, RESIDUAL_PROBE_TOL));
            rows.push(below("pde_residual_max", r.max_abs_pde, RESIDUAL_PROBE_TOL));
        }
        Err(_) => rows.push(row("residual_probe", f64::NAN, "evaluable", false)),
    }
    match convergence_study(gas, geom, &s, run.residual_step, REFINEMENTS) {
        Ok(study) => {
            let band = format!("{}..{}", RATIO_BAND.0, RATIO_BAND.1);
            for (i, r) in study.ode_ratios.iter().enumerate() {
                rows.push(row(
                    format!("ode_ratio_{i}"),
                    *r,
                    &band,
                    (RATIO_BAND.0..=RATIO_BAND.1).contains(r),
                ));
            }
            for (i, r) in study.pde_ratios.iter().enumerate() {
                rows.push(row(
                    format!("pde_ratio_{i}"),
                    *r,
                    &band,
                    (RATIO_BAND.0..=RATIO_BAND.1).contains(r),
                ));
            }
        }
        Err(_) => rows.push(row("residual_convergence", f64::NAN, "evaluable", false)),
    }

    // RK4 cross-check of each non-degenerate piece
    if x_b > problem.x0 {
        let ode = integrate_ode(gas, geom, problem.u0, problem.x0, x_b, run.ode_step)
            .map(|p| p.last_speed().unwrap_or(f64::NAN));
        let diff = ode.map(|u| (u - s.jump.u_minus).abs()).unwrap_or(f64::NAN);
        rows.push(row(
            "ode_oracle_supersonic",
            diff,
            format!("<{ORACLE_TOL:e}"),
            diff < ORACLE_TOL,
        ));
    }
    if x_b < problem.x1 {
        let ode = integrate_ode(gas, geom, s.jump.u_plus, x_b, problem.x1, run.ode_step)
            .map(|p| p.last_speed().unwrap_or(f64::NAN));
        let diff = ode.map(|u| (u - s.u1).abs()).unwrap_or(f64::NAN);
        rows.push(row(
            "ode_oracle_subsonic",
            diff,
            format!("<{ORACLE_TOL:e}"),
            diff < ORACLE_TOL,
        ));
    }

    let p = run.precision;
    let mut csv = String::from("check,value,bound,pass\n");
    for r in &rows {
        let _ = writeln!(csv, "{},{},{},{}", r.name, num(r.value, p), r.bound, r.pass);
    }
    write_atomic(&run.csv_path, &csv)?;

    match solvability(problem, &run.opts)? {
        Verdict::Unconstrained { u1 } => println!("verdict: Unconstrained (exit speed u1 = {u1})"),
        Verdict::Solvable { u1 } => println!("verdict: Solvable (c_exit matches u1 = {u1})"),
        Verdict::NoSolution {
            c_exit,
            admissible_u1,
        } => println!("verdict: NoSolution (c_exit = {c_exit}, admissible u1 = {admissible_u1})"),
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    println!("{} of {} checks passed", rows.len() - failed, rows.len());
    match rows.iter().find(|r| !r.pass) {
        None => Ok(()),
        Some(r) => Err(Failure::new(
            EXIT_CHECK_FAILED,
            format!("check {} failed: {} (bound {})", r.name, r.value, r.bound),
        )),
    }
}
