//! The one-parameter family of symmetric transonic shock solutions.
//!
//! A problem fixes the gas, the surface, the entry and exit sections and the
//! supersonic entry speed. Mass-flux conservation `ρ u n = const` holds along
//! each smooth piece and across the shock, so the subsonic exit speed is fixed
//! by the entry data alone. A shock may sit anywhere in `[x0, x1]` and every
//! location produces that same exit speed.

use rayon::prelude::*;

use crate::branch::{self, branch_profile, sonic_maximum, Branch, BranchConstant, SpeedProfile};
use crate::error::{Error, Result};
use crate::gas::GasParams;
use crate::geometry::MetricProfile;
use crate::roots::bracketed_root;
use crate::shock::{jump_identity_residual, make_jump, JumpIdentity, ShockJump};

/// Default number of panels per smooth piece.
pub const DEFAULT_PANELS: usize = 10_000;
/// Relative tolerance for the exit-speed agreement and the solvability verdict.
pub const EXIT_SPEED_TOL: f64 = 1e-9;
/// Relative tolerance for a profile meeting the jump state.
const MATCH_TOL: f64 = 1e-10;
/// Sample count for the choking scan along `[x0, x1]`.
const CHOKE_SCAN_POINTS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Relative tolerance of every speed root.
    pub root_tol: f64,
    /// Panels per smooth piece for profiles and quadrature; rounded up to even.
    pub panels: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            root_tol: branch::DEFAULT_ROOT_TOL,
            panels: DEFAULT_PANELS,
        }
    }
}

impl SolverOptions {
    fn even_panels(&self) -> usize {
        let p = self.panels.max(2);
        p + p % 2
    }
}

/// Duct, gas and boundary data for one family of solutions.
#[derive(Debug, Clone, PartialEq)]
pub struct NozzleProblem {
    pub gas: GasParams,
    pub geom: MetricProfile,
    pub x0: f64,
    pub x1: f64,
    /// Supersonic entry speed.
    pub u0: f64,
    /// Prescribed exit speed, if any.
    pub exit_speed_condition: Option<f64>,
}

impl NozzleProblem {
    pub fn new(
        gas: GasParams,
        geom: MetricProfile,
        x0: f64,
        x1: f64,
        u0: f64,
        exit_speed_condition: Option<f64>,
    ) -> Result<Self> {
        geom.width(x0)?;
        geom.width(x1)?;
        if x1 == x0 {
            // entry and exit coincide: the only exit state is the supersonic entry itself
            return Err(Error::NoSubsonicRoot { x: x1 });
        }
        if x1 < x0 {
            return Err(Error::InvalidProblem(format!(
                "exit {x1} lies before entry {x0}"
            )));
        }
        let critical = gas.critical_speed();
        if !(u0 > critical) {
            return Err(Error::NotSupersonic {
                speed: u0,
                critical,
            });
        }
        if !(u0 < gas.max_speed()) {
            return Err(Error::SpeedOutOfRange {
                speed: u0,
                max_speed: gas.max_speed(),
            });
        }
        if let Some(c) = exit_speed_condition {
            if !(c > 0.0 && c < critical) {
                return Err(Error::InvalidProblem(format!(
                    "prescribed exit speed {c} must lie in (0, {critical})"
                )));
            }
        }
        Ok(Self {
            gas,
            geom,
            x0,
            x1,
            u0,
            exit_speed_condition,
        })
    }

    /// First-integral constant of the entry state.
    pub fn entry_constant(&self) -> Result<BranchConstant> {
        BranchConstant::through(&self.gas, self.u0, self.geom.width(self.x0)?)
    }

    /// Start of the choked region on `[x0, x1)`, if any.
    pub fn first_choked(&self) -> Result<Option<(f64, f64)>> {
        let constant = self.entry_constant()?.value();
        let margin = |x: f64| -> Result<f64> {
            Ok(sonic_maximum(&self.gas, self.geom.width(x)?) - constant)
        };
        let h = (self.x1 - self.x0) / CHOKE_SCAN_POINTS as f64;
        let mut prev = self.x0;
        for i in 1..CHOKE_SCAN_POINTS {
            let x = self.x0 + i as f64 * h;
            if margin(x)? < 0.0 {
                let edge =
                    bracketed_root(|x| margin(x).unwrap_or(f64::NAN), prev, x, 1e-14).unwrap_or(x);
                return Ok(Some((edge, self.geom.width(edge)?)));
            }
            prev = x;
        }
        Ok(None)
    }
}

/// Subsonic exit speed fixed by the mass flux of the entry state.
pub fn exit_speed(problem: &NozzleProblem, opts: &SolverOptions) -> Result<f64> {
    if let Some((x, width)) = problem.first_choked()? {
        return Err(Error::Choked { x: Some(x), width });
    }
    let constant = problem.entry_constant()?;
    let n1 = problem.geom.width(problem.x1)?;
    branch::solve_speed(&problem.gas, constant, n1, Branch::Subsonic, opts.root_tol).map_err(|e| {
        match e {
            Error::Choked { .. } => Error::NoSubsonicRoot { x: problem.x1 },
            other => other,
        }
    })
}

/// Potential samples aligned with the two profile grids.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    pub supersonic: Vec<f64>,
    pub subsonic: Vec<f64>,
}

/// One member of the family: supersonic piece, shock, subsonic piece.
#[derive(Debug, Clone, PartialEq)]
pub struct TransonicSolution {
    pub jump: ShockJump,
    pub supersonic_profile: SpeedProfile,
    pub subsonic_profile: SpeedProfile,
    pub u1: f64,
    pub phi: Potential,
}

impl TransonicSolution {
    /// Shock placed exactly at the entry or the exit section.
    pub fn is_boundary_member(&self) -> bool {
        self.supersonic_profile.len() == 1 || self.subsonic_profile.len() == 1
    }

    /// Largest relative deviation of `ρ u n` from its entry value over every node.
    pub fn mass_flux_deviation(&self, geom: &MetricProfile) -> Result<f64> {
        let nodes = self
            .supersonic_profile
            .grid
            .iter()
            .zip(&self.supersonic_profile.states)
            .chain(
                self.subsonic_profile
                    .grid
                    .iter()
                    .zip(&self.subsonic_profile.states),
            );
        let mut reference = None;
        let mut worst: f64 = 0.0;
        for (&x, s) in nodes {
            let flux = s.mass_flux() * geom.width(x)?;
            let r = *reference.get_or_insert(flux);
            worst = worst.max(((flux - r) / r).abs());
        }
        Ok(worst)
    }
}

fn uniform_grid(a: f64, b: f64, panels: usize) -> Vec<f64> {
    if a == b {
        return vec![a];
    }
    let h = (b - a) / panels as f64;
    (0..=panels)
        .map(|i| if i == panels { b } else { a + i as f64 * h })
        .collect()
}

/// Running integral of uniformly sampled `f`, starting from `start`.
///
/// Even nodes carry composite Simpson sums; odd nodes add the quadratic
/// half-panel rule to the preceding even node.
pub(crate) fn cumulative_simpson(xs: &[f64], fs: &[f64], start: f64) -> Vec<f64> {
    let n = xs.len();
    let mut out = vec![start; n];
    if n < 2 {
        return out;
    }
    if n == 2 {
        out[1] = start + 0.5 * (xs[1] - xs[0]) * (fs[0] + fs[1]);
        return out;
    }
    let h = (xs[n - 1] - xs[0]) / (n - 1) as f64;
    let mut k = 0;
    while k + 2 < n {
        let (f0, f1, f2) = (fs[k], fs[k + 1], fs[k + 2]);
        out[k + 1] = out[k] + h / 12.0 * (5.0 * f0 + 8.0 * f1 - f2);
        out[k + 2] = out[k] + h / 3.0 * (f0 + 4.0 * f1 + f2);
        k += 2;
    }
    if k + 1 < n {
        // odd panel count: close with the mirrored half-panel rule
        out[k + 1] = out[k] + h / 12.0 * (-fs[k - 1] + 8.0 * fs[k] + 5.0 * fs[k + 1]);
    }
    out
}

/// Potential `φ(x) = ∫ u dx` with `φ(x0) = 0`, continuous at the shock.
pub fn potential(supersonic: &SpeedProfile, subsonic: &SpeedProfile) -> Potential {
    let sup = cumulative_simpson(&supersonic.grid, &supersonic.speeds, 0.0);
    let start = sup.last().copied().unwrap_or(0.0);
    let sub = cumulative_simpson(&subsonic.grid, &subsonic.speeds, start);
    Potential {
        supersonic: sup,
        subsonic: sub,
    }
}

/// Assembles the family member whose shock sits at `x_b`.
pub fn build_solution(
    problem: &NozzleProblem,
    x_b: f64,
    opts: &SolverOptions,
) -> Result<TransonicSolution> {
    if !(x_b >= problem.x0 && x_b <= problem.x1) {
        return Err(Error::OutOfDomain {
            x: x_b,
            lo: problem.x0,
            hi: problem.x1,
        });
    }
    let expected_u1 = exit_speed(problem, opts)?;
    let gas = &problem.gas;
    let geom = &problem.geom;
    let panels = opts.even_panels();

    let entry = problem.entry_constant()?;
    let sup_grid = uniform_grid(problem.x0, x_b, panels);
    let supersonic = branch_profile(
        gas,
        geom,
        entry,
        Branch::Supersonic,
        &sup_grid,
        opts.root_tol,
    )?;
    let u_minus = supersonic.last_speed().expect("grid has at least one node");
    let jump = make_jump(gas, x_b, u_minus)?;

    let post = BranchConstant::through(gas, jump.u_plus, geom.width(x_b)?)?;
    let sub_grid = uniform_grid(x_b, problem.x1, panels);
    let subsonic = branch_profile(gas, geom, post, Branch::Subsonic, &sub_grid, opts.root_tol)?;
    let u_start = subsonic.first_speed().expect("grid has at least one node");
    if ((u_start - jump.u_plus) / jump.u_plus).abs() > MATCH_TOL {
        return Err(Error::InvariantViolation(format!(
            "subsonic piece starts at {u_start}, jump gives {}",
            jump.u_plus
        )));
    }
    let u1 = subsonic.last_speed().expect("grid has at least one node");
    if ((u1 - expected_u1) / expected_u1).abs() > EXIT_SPEED_TOL {
        return Err(Error::InvariantViolation(format!(
            "exit speed {u1} differs from the mass-flux value {expected_u1}"
        )));
    }
    let phi = potential(&supersonic, &subsonic);
    Ok(TransonicSolution {
        jump,
        supersonic_profile: supersonic,
        subsonic_profile: subsonic,
        u1,
        phi,
    })
}

/// Scalar summary of one sweep member.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub u1: f64,
    pub u_minus: f64,
    pub u_plus: f64,
    pub identity: JumpIdentity,
    pub entropy_ok: bool,
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub x_b: f64,
    pub outcome: std::result::Result<SweepPoint, Error>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub entries: Vec<SweepEntry>,
    /// `(max u1 − min u1) / mean u1` over the successful members.
    pub relative_spread: f64,
    /// Largest `|Δu1 / Δx_b|` between consecutive successful members.
    pub max_discrete_derivative: f64,
}

impl SweepReport {
    pub fn shock_locations(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.x_b).collect()
    }

    pub fn exit_speeds(&self) -> Vec<f64> {
        self.points().map(|(_, p)| p.u1).collect()
    }

    /// Successful members with their shock locations.
    pub fn points(&self) -> impl Iterator<Item = (f64, &SweepPoint)> {
        self.entries
            .iter()
            .filter_map(|e| e.outcome.as_ref().ok().map(|p| (e.x_b, p)))
    }

    pub fn failures(&self) -> impl Iterator<Item = (f64, &Error)> {
        self.entries
            .iter()
            .filter_map(|e| e.outcome.as_ref().err().map(|err| (e.x_b, err)))
    }
}

/// Builds `m` equally spaced family members on `[x0, x1]`, endpoints included.
pub fn sweep(problem: &NozzleProblem, m: usize, opts: &SolverOptions) -> Result<SweepReport> {
    if m < 2 {
        return Err(Error::InvalidProblem(format!(
            "a sweep needs at least two shock locations, got {m}"
        )));
    }
    let locations = uniform_grid(problem.x0, problem.x1, m - 1);
    sweep_at(problem, &locations, opts)
}

/// Builds family members at arbitrary shock locations, reported in the given order.
pub fn sweep_at(
    problem: &NozzleProblem,
    locations: &[f64],
    opts: &SolverOptions,
) -> Result<SweepReport> {
    let entries: Vec<SweepEntry> = locations
        .par_iter()
        .map(|&x_b| SweepEntry {
            x_b,
            outcome: build_solution(problem, x_b, opts).map(|s| SweepPoint {
                u1: s.u1,
                u_minus: s.jump.u_minus,
                u_plus: s.jump.u_plus,
                identity: jump_identity_residual(&problem.gas, &s.jump),
                entropy_ok: s.jump.satisfies_entropy(),
                boundary: s.is_boundary_member(),
            }),
        })
        .collect();
    let ok: Vec<(f64, f64)> = entries
        .iter()
        .filter_map(|e| e.outcome.as_ref().ok().map(|p| (e.x_b, p.u1)))
        .collect();
    if ok.is_empty() {
        return Err(entries
            .into_iter()
            .find_map(|e| e.outcome.err())
            .unwrap_or_else(|| Error::InvalidProblem("empty sweep".into())));
    }
    let (min, max, sum) = ok.iter().fold(
        (f64::INFINITY, f64::NEG_INFINITY, 0.0),
        |(lo, hi, s), &(_, u)| (lo.min(u), hi.max(u), s + u),
    );
    let mean = sum / ok.len() as f64;
    let max_discrete_derivative = ok
        .windows(2)
        .filter(|w| w[1].0 != w[0].0)
        .map(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs())
        .fold(0.0, f64::max);
    Ok(SweepReport {
        entries,
        relative_spread: (max - min) / mean,
        max_discrete_derivative,
    })
}

/// `∫_{x_b}^{x̃_b} (u_b − ũ_b) dx`, comparing the subsonic piece of the member
/// shocked at `x_b` with the supersonic piece of the member shocked at `x̃_b`.
pub fn psi_comparison(
    problem: &NozzleProblem,
    x_b: f64,
    x_b_tilde: f64,
    opts: &SolverOptions,
) -> Result<f64> {
    for x in [x_b, x_b_tilde] {
        if !(x >= problem.x0 && x <= problem.x1) {
            return Err(Error::OutOfDomain {
                x,
                lo: problem.x0,
                hi: problem.x1,
            });
        }
    }
    if x_b > x_b_tilde {
        return Err(Error::Ordering {
            first: x_b,
            second: x_b_tilde,
        });
    }
    if x_b == x_b_tilde {
        return Ok(0.0);
    }
    exit_speed(problem, opts)?;
    let gas = &problem.gas;
    let geom = &problem.geom;
    let entry = problem.entry_constant()?;
    let n_b = geom.width(x_b)?;
    let u_minus = branch::solve_speed(gas, entry, n_b, Branch::Supersonic, opts.root_tol)?;
    let jump = make_jump(gas, x_b, u_minus)?;
    let post = BranchConstant::through(gas, jump.u_plus, n_b)?;

    let grid = uniform_grid(x_b, x_b_tilde, opts.even_panels());
    let subsonic = branch_profile(gas, geom, post, Branch::Subsonic, &grid, opts.root_tol)?;
    let supersonic = branch_profile(gas, geom, entry, Branch::Supersonic, &grid, opts.root_tol)?;
    let diff: Vec<f64> = subsonic
        .speeds
        .iter()
        .zip(&supersonic.speeds)
        .map(|(a, b)| a - b)
        .collect();
    Ok(*cumulative_simpson(&grid, &diff, 0.0)
        .last()
        .expect("grid is non-empty"))
}

/// Outcome of matching a prescribed exit speed against the family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    /// No exit condition given; the family's exit speed is reported.
    Unconstrained {
        u1: f64,
    },
    Solvable {
        u1: f64,
    },
    NoSolution {
        c_exit: f64,
        admissible_u1: f64,
    },
}

/// A transonic shock solution exists exactly when the prescribed exit speed
/// equals the family's exit speed.
pub fn solvability(problem: &NozzleProblem, opts: &SolverOptions) -> Result<Verdict> {
    let u1 = exit_speed(problem, opts)?;
    Ok(match problem.exit_speed_condition {
        None => Verdict::Unconstrained { u1 },
        Some(c_exit) if ((c_exit - u1) / u1).abs() < EXIT_SPEED_TOL => Verdict::Solvable { u1 },
        Some(c_exit) => Verdict::NoSolution {
            c_exit,
            admissible_u1: u1,
        },
    })
}
