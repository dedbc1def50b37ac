//! Normal transonic shocks.
//!
//! Both sides of a shock share the Bernoulli constant, so the Rankine–Hugoniot
//! system collapses to continuity of the mass flux `ρu`. For a supersonic
//! upstream speed there is exactly one subsonic speed with the same flux, and
//! the pressure rises across the jump.

use crate::error::{Error, Result};
use crate::gas::GasParams;
use crate::roots::bracketed_root;

/// Relative tolerance for the flux and Bernoulli checks on a constructed jump.
const JUMP_TOL: f64 = 1e-12;

/// A supersonic/subsonic pair joined by a shock at `x_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockJump {
    pub x_b: f64,
    pub u_minus: f64,
    pub u_plus: f64,
    pub rho_minus: f64,
    pub rho_plus: f64,
    pub p_minus: f64,
    pub p_plus: f64,
    pub c_minus: f64,
    pub c_plus: f64,
}

impl ShockJump {
    /// Upstream and downstream mass flux `ρu`.
    pub fn mass_fluxes(&self) -> (f64, f64) {
        (self.rho_minus * self.u_minus, self.rho_plus * self.u_plus)
    }

    pub fn satisfies_entropy(&self) -> bool {
        self.p_minus < self.p_plus
    }
}

fn require_supersonic(gas: &GasParams, u_minus: f64) -> Result<()> {
    gas.sonic_speed(u_minus)?;
    let critical = gas.critical_speed();
    if u_minus <= critical + gas.sonic_tol() {
        return Err(Error::NotSupersonic {
            speed: u_minus,
            critical,
        });
    }
    Ok(())
}

/// Subsonic speed carrying the same mass flux as the supersonic `u_minus`.
pub fn jump_from_supersonic(gas: &GasParams, u_minus: f64) -> Result<f64> {
    require_supersonic(gas, u_minus)?;
    let flux = gas.mass_flux_unchecked(u_minus);
    bracketed_root(
        |u| gas.mass_flux_unchecked(u) - flux,
        0.0,
        gas.critical_speed(),
        f64::EPSILON,
    )
}

/// Builds the full jump at `x_b` and verifies flux continuity, Bernoulli on
/// both sides and the entropy condition before returning it.
pub fn make_jump(gas: &GasParams, x_b: f64, u_minus: f64) -> Result<ShockJump> {
    let u_plus = jump_from_supersonic(gas, u_minus)?;
    let minus = gas.state(u_minus)?;
    let plus = gas.state(u_plus)?;
    let jump = ShockJump {
        x_b,
        u_minus,
        u_plus,
        rho_minus: minus.rho,
        rho_plus: plus.rho,
        p_minus: minus.pressure(gas),
        p_plus: plus.pressure(gas),
        c_minus: minus.c,
        c_plus: plus.c,
    };
    verify(gas, &jump)?;
    Ok(jump)
}

fn verify(gas: &GasParams, jump: &ShockJump) -> Result<()> {
    let critical = gas.critical_speed();
    if !(jump.u_minus > critical && critical > jump.u_plus) {
        return Err(Error::InvariantViolation(format!(
            "jump {} -> {} does not straddle the critical speed {critical}",
            jump.u_minus, jump.u_plus
        )));
    }
    let (m_minus, m_plus) = jump.mass_fluxes();
    if ((m_minus - m_plus) / m_minus).abs() > JUMP_TOL {
        return Err(Error::InvariantViolation(format!(
            "mass flux {m_minus} upstream vs {m_plus} downstream"
        )));
    }
    let g1 = gas.gamma() - 1.0;
    let bernoulli = gas.c0() * gas.c0() / g1;
    for (u, c) in [(jump.u_minus, jump.c_minus), (jump.u_plus, jump.c_plus)] {
        let lhs = 0.5 * u * u + c * c / g1;
        if ((lhs - bernoulli) / bernoulli).abs() > JUMP_TOL {
            return Err(Error::InvariantViolation(format!(
                "Bernoulli relation fails at u = {u}"
            )));
        }
    }
    if !jump.satisfies_entropy() {
        return Err(Error::InvariantViolation(format!(
            "entropy condition fails: p- = {} >= p+ = {}",
            jump.p_minus, jump.p_plus
        )));
    }
    Ok(())
}

/// Sensitivity `du₊/du₋` of the downstream speed to the upstream speed.
pub fn jump_derivative(gas: &GasParams, u_minus: f64) -> Result<f64> {
    let u_plus = jump_from_supersonic(gas, u_minus)?;
    let g2 = gas.gamma() - 2.0;
    let c2_minus = gas.sound_speed_sq_unchecked(u_minus);
    let c2_plus = gas.sound_speed_sq_unchecked(u_plus);
    Ok((c2_minus - u_minus * u_minus) * u_minus.powf(g2)
        / ((c2_plus - u_plus * u_plus) * u_plus.powf(g2)))
}

/// Residuals of the algebraic identities every jump satisfies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpIdentity {
    /// `c₊²(1 − (c₊² − u₊²)/c₋² · (u₊/u₋)^(γ−1)) − u₊²`, identically zero.
    pub cancellation: f64,
    /// Relative mismatch of `c₋² u₋^(γ−1)` and `c₊² u₊^(γ−1)`.
    pub relation: f64,
}

pub fn jump_identity_residual(gas: &GasParams, jump: &ShockJump) -> JumpIdentity {
    let g1 = gas.gamma() - 1.0;
    let (um, up) = (jump.u_minus, jump.u_plus);
    let c2m = jump.c_minus * jump.c_minus;
    let c2p = jump.c_plus * jump.c_plus;
    let ratio = (up / um).powf(g1);
    let cancellation = c2p * (1.0 - (c2p - up * up) / c2m * ratio) - up * up;
    let lhs = c2m * um.powf(g1);
    let rhs = c2p * up.powf(g1);
    JumpIdentity {
        cancellation,
        relation: ((lhs - rhs) / lhs).abs(),
    }
}
