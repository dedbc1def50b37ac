//! Smooth symmetric flow on a single branch.
//!
//! Away from shocks the axisymmetric flow obeys
//! `du/dx = (n′/n) · c² u / (u² − c²)`, which integrates to the algebraic
//! first integral `(2c0² − (γ−1)u²)(u n)^(γ−1) = const`. The first integral is
//! the primary solution route; the ODE integrator is kept as an independent
//! cross-check.
//!
//! At fixed width the first integral rises on `(0, c_*)` and falls on
//! `(c_*, max_speed)`, so each branch has at most one root and bracketing is
//! safe. A constant above the sonic maximum has no root at all: the flow is
//! choked there.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gas::{FlowState, GasParams, Regime};
use crate::geometry::MetricProfile;
use crate::roots::bracketed_root;

/// Default relative tolerance for speed roots.
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
/// Default fixed step of the RK4 integrator.
pub const DEFAULT_ODE_STEP: f64 = 1e-4;
/// The integrator aborts when `|u − c| < SONIC_GUARD · c0`.
pub const SONIC_GUARD: f64 = 1e-8;
/// Relative tolerance for first-integral conservation along a solved profile.
const CONSTANT_TOL: f64 = 1e-10;
/// Newton steps tried from a neighbouring root before falling back to bracketing.
const WARM_ITER: usize = 8;
/// Grid nodes per parallel work unit in [`branch_profile`]; each unit starts cold.
const CHUNK: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Subsonic,
    Supersonic,
}

impl Branch {
    pub fn regime(self) -> Regime {
        match self {
            Branch::Subsonic => Regime::Subsonic,
            Branch::Supersonic => Regime::Supersonic,
        }
    }
}

/// Conserved value of the first integral along one smooth branch.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BranchConstant(f64);

impl BranchConstant {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidProblem(format!(
                "branch constant must be positive, got {value}"
            )))
        }
    }

    /// Constant carried by the state `u` at width `n`.
    pub fn through(gas: &GasParams, u: f64, n: f64) -> Result<Self> {
        Self::new(first_integral(gas, u, n)?)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// `(2c0² − (γ−1)u²)(u n)^(γ−1)`.
pub fn first_integral(gas: &GasParams, u: f64, n: f64) -> Result<f64> {
    if !(u >= 0.0 && u < gas.max_speed()) {
        return Err(Error::SpeedOutOfRange {
            speed: u,
            max_speed: gas.max_speed(),
        });
    }
    if !(n > 0.0) {
        return Err(Error::InvalidProfile(format!(
            "width must be positive, got {n}"
        )));
    }
    Ok(first_integral_unchecked(gas, u, n))
}

#[inline]
fn first_integral_unchecked(gas: &GasParams, u: f64, n: f64) -> f64 {
    let g1 = gas.gamma() - 1.0;
    (2.0 * gas.c0() * gas.c0() - g1 * u * u) * (u * n).powf(g1)
}

/// Largest first-integral value any state can carry at width `n`.
pub fn sonic_maximum(gas: &GasParams, n: f64) -> f64 {
    first_integral_unchecked(gas, gas.critical_speed(), n)
}

/// Speed on `branch` whose first integral at width `n` equals `constant`.
///
/// The returned error is [`Error::Choked`] without a coordinate when the
/// constant exceeds the sonic maximum; callers that know the location fill it in.
pub fn solve_speed(
    gas: &GasParams,
    constant: BranchConstant,
    n: f64,
    branch: Branch,
    rel_tol: f64,
) -> Result<f64> {
    if !(n > 0.0) {
        return Err(Error::InvalidProfile(format!(
            "width must be positive, got {n}"
        )));
    }
    let target = constant.value();
    if target > sonic_maximum(gas, n) {
        return Err(Error::Choked { x: None, width: n });
    }
    let (lo, hi) = branch_bracket(gas, branch);
    bracketed_root(
        |u| first_integral_unchecked(gas, u, n) - target,
        lo,
        hi,
        rel_tol,
    )
    .map_err(|_| Error::SpeedOutOfRange {
        speed: if branch == Branch::Subsonic {
            0.0
        } else {
            gas.max_speed()
        },
        max_speed: gas.max_speed(),
    })
}

fn branch_bracket(gas: &GasParams, branch: Branch) -> (f64, f64) {
    let max_speed = gas.max_speed();
    let eps = 1e-12 * max_speed;
    match branch {
        Branch::Subsonic => (eps, gas.critical_speed()),
        Branch::Supersonic => (gas.critical_speed(), max_speed - eps),
    }
}

/// Newton on `ln F(u, n) = ln C` started from a nearby root. `None` when an
/// iterate leaves the branch bracket or the iteration does not settle.
fn warm_root(
    gas: &GasParams,
    constant: BranchConstant,
    n: f64,
    branch: Branch,
    rel_tol: f64,
    guess: f64,
) -> Option<f64> {
    let (lo, hi) = branch_bracket(gas, branch);
    let g1 = gas.gamma() - 1.0;
    let a = 2.0 * gas.c0() * gas.c0();
    let shift = constant.value().ln() - g1 * n.ln();
    let mut u = guess;
    for _ in 0..WARM_ITER {
        let q = a - g1 * u * u;
        let g = q.ln() + g1 * u.ln() - shift;
        let dg = g1 / u - 2.0 * g1 * u / q;
        let next = u - g / dg;
        if !(next > lo && next < hi) {
            return None;
        }
        if (next - u).abs() <= rel_tol * next {
            return Some(next);
        }
        u = next;
    }
    None
}

/// Right-hand side `du/dx = (n′/n) c² u / (u² − c²)` of the reduced equation.
pub fn ode_rhs(gas: &GasParams, geom: &MetricProfile, u: f64, x: f64) -> Result<f64> {
    let c = gas.sonic_speed(u)?;
    if (u - c).abs() <= gas.sonic_tol() {
        return Err(Error::SonicSingularity { speed: u });
    }
    let log_dn = geom.width_log_derivative(x)?;
    let c2 = c * c;
    Ok(log_dn * c2 * u / (u * u - c2))
}

/// Speed samples along one smooth branch.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedProfile {
    /// Node coordinates, strictly increasing.
    pub grid: Vec<f64>,
    pub speeds: Vec<f64>,
    pub states: Vec<FlowState>,
    pub branch: Branch,
}

impl SpeedProfile {
    fn from_speeds(
        gas: &GasParams,
        grid: Vec<f64>,
        speeds: Vec<f64>,
        branch: Branch,
    ) -> Result<Self> {
        let states = speeds
            .iter()
            .map(|&u| gas.state(u))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid,
            speeds,
            states,
            branch,
        })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn first_speed(&self) -> Option<f64> {
        self.speeds.first().copied()
    }

    pub fn last_speed(&self) -> Option<f64> {
        self.speeds.last().copied()
    }

    /// True when every node lies strictly on the declared side of sonic.
    pub fn stays_on_branch(&self) -> bool {
        let side = self.branch.regime();
        self.states.iter().all(|s| s.regime == side)
    }
}

/// Integrates the reduced equation with classical fixed-step RK4 from
/// `(x_start, u_start)` to `x_end`. Backward integration is allowed; the
/// returned profile is always ordered by increasing coordinate.
pub fn integrate_ode(
    gas: &GasParams,
    geom: &MetricProfile,
    u_start: f64,
    x_start: f64,
    x_end: f64,
    step: f64,
) -> Result<SpeedProfile> {
    geom.width(x_start)?;
    geom.width(x_end)?;
    if !(step > 0.0) {
        return Err(Error::InvalidProblem(format!(
            "ODE step must be positive, got {step}"
        )));
    }
    ode_rhs(gas, geom, u_start, x_start)?;
    let guard = SONIC_GUARD * gas.c0();
    let near_sonic = |u: f64| (u - gas.sound_speed_sq_unchecked(u).max(0.0).sqrt()).abs() < guard;
    if near_sonic(u_start) {
        return Err(Error::SonicSingularity { speed: u_start });
    }
    let branch = if u_start > gas.critical_speed() {
        Branch::Supersonic
    } else {
        Branch::Subsonic
    };

    let span = x_end - x_start;
    let steps = if span == 0.0 {
        0
    } else {
        (span.abs() / step).ceil().max(1.0) as usize
    };
    let mut grid = Vec::with_capacity(steps + 1);
    let mut speeds = Vec::with_capacity(steps + 1);
    grid.push(x_start);
    speeds.push(u_start);
    if steps > 0 {
        let h = span / steps as f64;
        let mut u = u_start;
        for i in 0..steps {
            let x = x_start + i as f64 * h;
            let x_next = if i + 1 == steps {
                x_end
            } else {
                x_start + (i + 1) as f64 * h
            };
            let approach = |_| Error::SonicApproach { x, speed: u };
            let f = |u: f64, x: f64| ode_rhs(gas, geom, u, x);
            let k1 = f(u, x).map_err(approach)?;
            let k2 = f(u + 0.5 * h * k1, x + 0.5 * h).map_err(approach)?;
            let k3 = f(u + 0.5 * h * k2, x + 0.5 * h).map_err(approach)?;
            let k4 = f(u + h * k3, x_next).map_err(approach)?;
            u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if !(u > 0.0 && u < gas.max_speed()) || near_sonic(u) {
                return Err(Error::SonicApproach {
                    x: x_next,
                    speed: u,
                });
            }
            grid.push(x_next);
            speeds.push(u);
        }
    }
    if span < 0.0 {
        grid.reverse();
        speeds.reverse();
    }
    SpeedProfile::from_speeds(gas, grid, speeds, branch)
}

/// Solves the first integral independently at every grid node.
pub fn branch_profile(
    gas: &GasParams,
    geom: &MetricProfile,
    constant: BranchConstant,
    branch: Branch,
    grid: &[f64],
    rel_tol: f64,
) -> Result<SpeedProfile> {
    if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidProblem(format!(
            "grid must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    let widths = grid
        .iter()
        .map(|&x| geom.width(x))
        .collect::<Result<Vec<_>>>()?;
    // the first offending node is reported, so choking is screened in order
    if let Some((&x, &n)) = grid
        .iter()
        .zip(&widths)
        .find(|(_, &n)| constant.value() > sonic_maximum(gas, n))
    {
        return Err(Error::Choked {
            x: Some(x),
            width: n,
        });
    }
    // neighbouring nodes seed each other; chunks keep the work parallel
    let speeds = widths
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut out = Vec::with_capacity(chunk.len());
            for &n in chunk {
                let warm = out
                    .last()
                    .and_then(|&g| warm_root(gas, constant, n, branch, rel_tol, g));
                out.push(match warm {
                    Some(u) => u,
                    None => solve_speed(gas, constant, n, branch, rel_tol)?,
                });
            }
            Ok(out)
        })
        .collect::<Result<Vec<Vec<f64>>>>()?
        .concat();
    let profile = SpeedProfile::from_speeds(gas, grid.to_vec(), speeds, branch)?;
    if let Some(i) = profile
        .states
        .iter()
        .position(|s| s.regime != branch.regime())
    {
        return Err(Error::Choked {
            x: Some(grid[i]),
            width: widths[i],
        });
    }
    for ((&x, &u), &n) in grid.iter().zip(&profile.speeds).zip(&widths) {
        let f = first_integral_unchecked(gas, u, n);
        if ((f - constant.value()) / constant.value()).abs() > CONSTANT_TOL {
            return Err(Error::InvariantViolation(format!(
                "first integral drifts to {f} at x = {x} (constant {})",
                constant.value()
            )));
        }
    }
    Ok(profile)
}
