//! Polytropic gas closure under Bernoulli's law.
//!
//! For steady isentropic potential flow with `p = ρ^γ` the Bernoulli relation
//! `u²/2 + c²/(γ−1) = c0²/(γ−1)` ties the local sound speed `c` to the flow
//! speed `u`, and `c² = γ ρ^(γ−1)` then fixes the density. Every quantity here
//! is a pure function of the speed.
//!
//! The critical speed is `c_* = sqrt(2 c0² / (γ+1))`, the speed at which
//! `u = c`. Some texts write `c_* := 2c0²/(γ+1)`; that expression is the square
//! of the critical speed, and only the square-root reading is comparable with
//! a speed.

use std::fmt;

use crate::error::{Error, Result};

/// Default absolute tolerance (speed units) for the sonic classification.
pub const DEFAULT_SONIC_TOL: f64 = 1e-10;

/// Flow regime of a pointwise state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Regime {
    Subsonic,
    Sonic,
    Supersonic,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::Subsonic => "subsonic",
            Regime::Sonic => "sonic",
            Regime::Supersonic => "supersonic",
        };
        f.write_str(s)
    }
}

/// Adiabatic exponent and Bernoulli constant of the gas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasParams {
    gamma: f64,
    c0: f64,
    sonic_tol: f64,
}

impl GasParams {
    pub fn new(gamma: f64, c0: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 1.0 {
            return Err(Error::InvalidGas(format!(
                "adiabatic exponent must exceed 1, got {gamma}"
            )));
        }
        if !c0.is_finite() || c0 <= 0.0 {
            return Err(Error::InvalidGas(format!(
                "Bernoulli constant must be positive, got {c0}"
            )));
        }
        Ok(Self {
            gamma,
            c0,
            sonic_tol: DEFAULT_SONIC_TOL,
        })
    }

    /// Replaces the absolute tolerance used to flag a state as sonic.
    pub fn with_sonic_tol(mut self, tol: f64) -> Result<Self> {
        if !tol.is_finite() || tol < 0.0 {
            return Err(Error::InvalidGas(format!(
                "sonic tolerance must be non-negative, got {tol}"
            )));
        }
        self.sonic_tol = tol;
        Ok(self)
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    #[inline]
    pub fn c0(&self) -> f64 {
        self.c0
    }

    #[inline]
    pub fn sonic_tol(&self) -> f64 {
        self.sonic_tol
    }

    /// Critical speed `c_*` separating subsonic from supersonic states.
    #[must_use]
    pub fn critical_speed(&self) -> f64 {
        (2.0 * self.c0 * self.c0 / (self.gamma + 1.0)).sqrt()
    }

    /// Vacuum speed at which the density vanishes.
    #[must_use]
    pub fn max_speed(&self) -> f64 {
        (2.0 * self.c0 * self.c0 / (self.gamma - 1.0)).sqrt()
    }

    fn check_speed(&self, u: f64) -> Result<()> {
        let max_speed = self.max_speed();
        if !(0.0..max_speed).contains(&u) {
            return Err(Error::SpeedOutOfRange {
                speed: u,
                max_speed,
            });
        }
        Ok(())
    }

    /// Squared sound speed `c0² − (γ−1)u²/2`, without range checks.
    #[inline]
    pub(crate) fn sound_speed_sq_unchecked(&self, u: f64) -> f64 {
        self.c0 * self.c0 - 0.5 * (self.gamma - 1.0) * u * u
    }

    #[inline]
    pub(crate) fn density_unchecked(&self, u: f64) -> f64 {
        (self.sound_speed_sq_unchecked(u) / self.gamma).powf(1.0 / (self.gamma - 1.0))
    }

    #[inline]
    pub(crate) fn mass_flux_unchecked(&self, u: f64) -> f64 {
        self.density_unchecked(u) * u
    }

    pub fn density(&self, u: f64) -> Result<f64> {
        self.check_speed(u)?;
        Ok(self.density_unchecked(u))
    }

    /// Local sound speed `c(u)`.
    pub fn sonic_speed(&self, u: f64) -> Result<f64> {
        self.check_speed(u)?;
        Ok(self.sound_speed_sq_unchecked(u).sqrt())
    }

    /// Pressure `p = ρ^γ`.
    pub fn pressure(&self, u: f64) -> Result<f64> {
        Ok(self.density(u)?.powf(self.gamma))
    }

    /// Mass flux density `ρ u`; maximal at the critical speed.
    pub fn mass_flux(&self, u: f64) -> Result<f64> {
        self.check_speed(u)?;
        Ok(self.mass_flux_unchecked(u))
    }

    /// Regime of a speed relative to `c_*`. Speeds outside the admissible range
    /// are classified by the same comparison.
    #[must_use]
    pub fn classify(&self, u: f64) -> Regime {
        let diff = u - self.critical_speed();
        if diff.abs() <= self.sonic_tol {
            Regime::Sonic
        } else if diff > 0.0 {
            Regime::Supersonic
        } else {
            Regime::Subsonic
        }
    }

    /// Full pointwise state at speed `u`.
    pub fn state(&self, u: f64) -> Result<FlowState> {
        self.check_speed(u)?;
        let c2 = self.sound_speed_sq_unchecked(u);
        Ok(FlowState {
            u,
            rho: (c2 / self.gamma).powf(1.0 / (self.gamma - 1.0)),
            c: c2.sqrt(),
            regime: self.classify(u),
        })
    }
}

/// Pointwise flow state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowState {
    pub u: f64,
    pub rho: f64,
    pub c: f64,
    pub regime: Regime,
}

impl FlowState {
    pub fn pressure(&self, gas: &GasParams) -> f64 {
        self.rho.powf(gas.gamma())
    }

    pub fn mass_flux(&self) -> f64 {
        self.rho * self.u
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn gamma3() -> GasParams {
        GasParams::new(3.0, 2f64.sqrt()).unwrap()
    }

    #[test]
    fn rejects_bad_constants() {
        assert!(matches!(
            GasParams::new(1.0, 1.0),
            Err(Error::InvalidGas(_))
        ));
        assert!(matches!(
            GasParams::new(0.5, 1.0),
            Err(Error::InvalidGas(_))
        ));
        assert!(matches!(
            GasParams::new(1.4, 0.0),
            Err(Error::InvalidGas(_))
        ));
        assert!(matches!(
            GasParams::new(1.4, -2.0),
            Err(Error::InvalidGas(_))
        ));
        assert!(GasParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn density_examples() {
        let gas = gamma3();
        assert_relative_eq!(
            gas.density(0.0).unwrap(),
            (2.0f64 / 3.0).sqrt(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            gas.density(1.2).unwrap(),
            (0.56f64 / 3.0).sqrt(),
            max_relative = 1e-14
        );
        assert_relative_eq!(gas.density(1.2).unwrap(), 0.432049, epsilon = 1e-6);
        assert!(matches!(
            gas.density(2f64.sqrt()),
            Err(Error::SpeedOutOfRange { .. })
        ));
        assert!(matches!(
            gas.density(-0.1),
            Err(Error::SpeedOutOfRange { .. })
        ));
    }

    #[test]
    fn sonic_speed_examples() {
        let gas = gamma3();
        assert_relative_eq!(gas.sonic_speed(1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(
            gas.sonic_speed(0.0).unwrap(),
            2f64.sqrt(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            gas.sonic_speed(1.2).unwrap(),
            0.56f64.sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn critical_and_max_speed() {
        assert_relative_eq!(gamma3().critical_speed(), 1.0, max_relative = 1e-15);
        let air = GasParams::new(1.4, 1.0).unwrap();
        assert_relative_eq!(
            air.critical_speed(),
            (2.0f64 / 2.4).sqrt(),
            max_relative = 1e-15
        );
        assert_relative_eq!(air.critical_speed(), 0.912871, epsilon = 1e-6);
        assert_relative_eq!(gamma3().max_speed(), 2f64.sqrt(), max_relative = 1e-15);
        let g2 = GasParams::new(2.0, 1.0).unwrap();
        assert_relative_eq!(g2.max_speed(), 2f64.sqrt(), max_relative = 1e-15);
        for gamma in [1.1, 1.4, 5.0 / 3.0, 2.0, 3.0, 7.0] {
            let gas = GasParams::new(gamma, 0.7).unwrap();
            assert!(gas.critical_speed() < gas.max_speed());
        }
    }

    #[test]
    fn density_vanishes_at_vacuum() {
        let gas = GasParams::new(1.4, 1.0).unwrap();
        let mut last = f64::INFINITY;
        for eps in [1e-2, 1e-4, 1e-6, 1e-8] {
            let rho = gas.density((1.0 - eps) * gas.max_speed()).unwrap();
            assert!(rho > 0.0 && rho < last);
            last = rho;
        }
        assert!(last < 1e-19);
    }

    #[test]
    fn pressure_examples() {
        let gas = gamma3();
        assert_relative_eq!(
            gas.pressure(1.2).unwrap(),
            (0.56f64 / 3.0).powf(1.5),
            max_relative = 1e-14
        );
        assert_relative_eq!(gas.pressure(1.2).unwrap(), 0.0806492, epsilon = 1e-7);
        assert_relative_eq!(
            gas.pressure(0.56f64.sqrt()).unwrap(),
            0.332554,
            epsilon = 1e-6
        );
        let air = GasParams::new(1.4, 1.3).unwrap();
        assert_relative_eq!(
            air.pressure(0.0).unwrap(),
            (1.69f64 / 1.4).powf(1.4 / 0.4),
            max_relative = 1e-14
        );
    }

    #[test]
    fn mass_flux_examples() {
        let gas = gamma3();
        assert_relative_eq!(gas.mass_flux(1.2).unwrap(), 0.518459, epsilon = 1e-6);
        assert_relative_eq!(
            gas.mass_flux(0.56f64.sqrt()).unwrap(),
            0.518459,
            epsilon = 1e-6
        );
        assert_eq!(gas.mass_flux(0.0).unwrap(), 0.0);
    }

    #[test]
    fn classify_examples() {
        let gas = gamma3();
        assert_eq!(gas.classify(1.2), Regime::Supersonic);
        assert_eq!(gas.classify(0.5), Regime::Subsonic);
        assert_eq!(gas.classify(gas.critical_speed()), Regime::Sonic);
        let loose = gas.with_sonic_tol(1e-3).unwrap();
        assert_eq!(loose.classify(1.0005), Regime::Sonic);
    }

    #[test]
    fn state_is_consistent() {
        let gas = GasParams::new(1.4, 1.0).unwrap();
        let s = gas.state(0.5).unwrap();
        assert_relative_eq!(s.c * s.c, 1.4 * s.rho.powf(0.4), max_relative = 1e-13);
        assert_eq!(s.regime, Regime::Subsonic);
        assert_relative_eq!(
            s.pressure(&gas),
            gas.pressure(0.5).unwrap(),
            max_relative = 1e-15
        );
    }
}
