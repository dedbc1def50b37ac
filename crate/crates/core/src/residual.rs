//! Finite-difference verification of constructed solutions.
//!
//! Residuals are evaluated on the solution's own samples with central
//! differences of span `step`. Two forms are checked on each smooth piece:
//!
//! * reduced equation: `(c² − u²) u′ + (n′/n) c² u`
//! * potential equation with the `x²` derivatives dropped:
//!   `(c² − φ′²) φ″ + (n′/n) c² φ′`
//!
//! Both vanish for exact solutions, so the discrete residual is the
//! truncation error and decays as `step²`. Nodes within two stencil widths of
//! the shock are excluded; the solution is only piecewise smooth there.

use crate::branch::SpeedProfile;
use crate::error::{Error, Result};
use crate::family::TransonicSolution;
use crate::gas::{GasParams, Regime};
use crate::geometry::MetricProfile;

/// Minimum number of stencil nodes a non-degenerate piece must offer.
const MIN_PIECE_NODES: usize = 5;

/// Residual samples of one equation form.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSeries {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Shock-adjacent nodes left out of the maximum.
    pub excluded: Vec<f64>,
    pub step: f64,
    pub max_abs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Form {
    Reduced,
    Potential,
}

/// Regime of every node of each non-degenerate piece.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TypeFlags {
    pub supersonic: Vec<Regime>,
    pub subsonic: Vec<Regime>,
}

/// Combined residual diagnostics for one solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub grid: Vec<f64>,
    pub ode_residuals: Vec<f64>,
    pub pde_residuals: Vec<f64>,
    pub excluded: Vec<f64>,
    pub step: f64,
    pub max_abs_ode: f64,
    pub max_abs_pde: f64,
    pub type_flags: TypeFlags,
}

fn pieces(solution: &TransonicSolution) -> [(&SpeedProfile, &[f64]); 2] {
    [
        (&solution.supersonic_profile, &solution.phi.supersonic),
        (&solution.subsonic_profile, &solution.phi.subsonic),
    ]
}

fn series(
    gas: &GasParams,
    geom: &MetricProfile,
    solution: &TransonicSolution,
    step: f64,
    form: Form,
    level: Option<(u32, u32)>,
) -> Result<ResidualSeries> {
    if !(step > 0.0) {
        return Err(Error::InvalidProblem(format!(
            "residual step must be positive, got {step}"
        )));
    }
    let x_b = solution.jump.x_b;
    let mut out = ResidualSeries {
        grid: Vec::new(),
        values: Vec::new(),
        excluded: Vec::new(),
        step,
        max_abs: 0.0,
    };
    for (profile, phi) in pieces(solution) {
        let len = profile.len();
        if len < 2 {
            continue;
        }
        let xs = &profile.grid;
        let dx = (xs[len - 1] - xs[0]) / (len - 1) as f64;
        // a study level `(j, levels)` halves an exact power-of-two stride so the
        // step ratio between levels is exactly 2 on every piece
        let (k, margin) = match level {
            None => (((step / dx).round() as usize).max(1), 0.0),
            Some((j, levels)) => {
                let base = step * f64::powi(2.0, j as i32);
                let unit = ((base / dx / f64::powi(2.0, levels as i32)).round() as usize).max(1);
                let coarse = unit << levels;
                (coarse >> j, 2.0 * coarse as f64 * dx)
            }
        };
        if (len - 1) / k + 1 < MIN_PIECE_NODES {
            return Err(Error::InvalidProblem(format!(
                "step {step} leaves fewer than {MIN_PIECE_NODES} nodes on the piece [{}, {}]",
                xs[0],
                xs[len - 1]
            )));
        }
        let h = k as f64 * dx;
        for i in 0..len {
            let x = xs[i];
            if (x - x_b).abs() < (2.0 * h).max(margin) {
                out.excluded.push(x);
                continue;
            }
            if i < k || i + k >= len || x - xs[0] < margin || xs[len - 1] - x < margin {
                continue;
            }
            let log_dn = geom.width_log_derivative(x)?;
            let r = match form {
                Form::Reduced => {
                    let u = profile.speeds[i];
                    let du = (profile.speeds[i + k] - profile.speeds[i - k]) / (2.0 * h);
                    let c2 = gas.sound_speed_sq_unchecked(u);
                    (c2 - u * u) * du + log_dn * c2 * u
                }
                Form::Potential => {
                    let dphi = (phi[i + k] - phi[i - k]) / (2.0 * h);
                    let d2phi = (phi[i + k] - 2.0 * phi[i] + phi[i - k]) / (h * h);
                    let c2 = gas.sound_speed_sq_unchecked(dphi);
                    (c2 - dphi * dphi) * d2phi + log_dn * c2 * dphi
                }
            };
            out.max_abs = out.max_abs.max(r.abs());
            out.grid.push(x);
            out.values.push(r);
        }
    }
    Ok(out)
}

/// Residual of `(c² − u²) u′ + (n′/n) c² u` on the speed samples.
pub fn ode_residual(
    gas: &GasParams,
    geom: &MetricProfile,
    solution: &TransonicSolution,
    step: f64,
) -> Result<ResidualSeries> {
    series(gas, geom, solution, step, Form::Reduced, None)
}

/// Residual of the axisymmetric potential equation on the `φ` samples.
pub fn pde_residual(
    gas: &GasParams,
    geom: &MetricProfile,
    solution: &TransonicSolution,
    step: f64,
) -> Result<ResidualSeries> {
    series(gas, geom, solution, step, Form::Potential, None)
}

pub fn classify_profile(gas: &GasParams, profile: &SpeedProfile) -> Vec<Regime> {
    profile.speeds.iter().map(|&u| gas.classify(u)).collect()
}

/// Per-node regimes, requiring supersonic flow before the shock and subsonic
/// flow after it. A piece of zero length contributes no flags.
pub fn classify_field(gas: &GasParams, solution: &TransonicSolution) -> Result<TypeFlags> {
    let mut flags = TypeFlags::default();
    for (profile, expected, target) in [
        (
            &solution.supersonic_profile,
            Regime::Supersonic,
            &mut flags.supersonic,
        ),
        (
            &solution.subsonic_profile,
            Regime::Subsonic,
            &mut flags.subsonic,
        ),
    ] {
        if profile.len() < 2 {
            continue;
        }
        *target = classify_profile(gas, profile);
        if let Some(i) = target.iter().position(|&r| r != expected) {
            return Err(Error::InvariantViolation(format!(
                "node x = {} is {} but should be {expected}",
                profile.grid[i], target[i]
            )));
        }
    }
    Ok(flags)
}

pub fn residual_report(
    gas: &GasParams,
    geom: &MetricProfile,
    solution: &TransonicSolution,
    step: f64,
) -> Result<ResidualReport> {
    let ode = ode_residual(gas, geom, solution, step)?;
    let pde = pde_residual(gas, geom, solution, step)?;
    Ok(ResidualReport {
        grid: ode.grid,
        ode_residuals: ode.values,
        pde_residuals: pde.values,
        excluded: ode.excluded,
        step,
        max_abs_ode: ode.max_abs,
        max_abs_pde: pde.max_abs,
        type_flags: classify_field(gas, solution)?,
    })
}

/// Maximum residuals under repeated step halving.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub steps: Vec<f64>,
    pub ode_max: Vec<f64>,
    pub pde_max: Vec<f64>,
    /// `ode_max[i] / ode_max[i + 1]`; about 4 for second-order decay.
    pub ode_ratios: Vec<f64>,
    pub pde_ratios: Vec<f64>,
}

impl ConvergenceStudy {
    pub fn within(&self, lo: f64, hi: f64) -> bool {
        self.ode_ratios
            .iter()
            .chain(&self.pde_ratios)
            .all(|r| (lo..=hi).contains(r))
    }
}

pub fn convergence_study(
    gas: &GasParams,
    geom: &MetricProfile,
    solution: &TransonicSolution,
    base_step: f64,
    refinements: usize,
) -> Result<ConvergenceStudy> {
    let steps: Vec<f64> = (0..=refinements)
        .map(|i| base_step / f64::powi(2.0, i as i32))
        .collect();
    let mut ode_max = Vec::with_capacity(steps.len());
    let mut pde_max = Vec::with_capacity(steps.len());
    // every level is measured on the nodes the coarsest stencil can reach
    let levels = refinements as u32;
    for (j, &h) in steps.iter().enumerate() {
        let level = Some((j as u32, levels));
        ode_max.push(series(gas, geom, solution, h, Form::Reduced, level)?.max_abs);
        pde_max.push(series(gas, geom, solution, h, Form::Potential, level)?.max_abs);
    }
    let ratios = |v: &[f64]| v.windows(2).map(|w| w[0] / w[1]).collect::<Vec<_>>();
    Ok(ConvergenceStudy {
        ode_ratios: ratios(&ode_max),
        pde_ratios: ratios(&pde_max),
        steps,
        ode_max,
        pde_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{build_solution, NozzleProblem, SolverOptions};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};

    fn reference() -> (NozzleProblem, TransonicSolution) {
        let gas = GasParams::new(3.0, 2f64.sqrt()).unwrap();
        let geom = MetricProfile::sphere(FRAC_PI_6, 5.0 * FRAC_PI_6).unwrap();
        let p = NozzleProblem::new(gas, geom, FRAC_PI_6, 5.0 * FRAC_PI_6, 1.2, None).unwrap();
        let s = build_solution(
            &p,
            FRAC_PI_2,
            &SolverOptions {
                panels: 2000,
                ..Default::default()
            },
        )
        .unwrap();
        (p, s)
    }

    #[test]
    fn constant_flow_has_zero_residual() {
        let gas = GasParams::new(1.4, 1.0).unwrap();
        let geom = MetricProfile::linear(2.0, 0.0, 0.0, 1.0).unwrap();
        let p = NozzleProblem::new(gas, geom.clone(), 0.0, 1.0, 1.3, None).unwrap();
        let s = build_solution(
            &p,
            0.4,
            &SolverOptions {
                panels: 200,
                ..Default::default()
            },
        )
        .unwrap();
        let r = ode_residual(&gas, &geom, &s, 0.02).unwrap();
        assert!(r.max_abs < 1e-9, "{}", r.max_abs);
    }

    #[test]
    fn residual_is_small_and_shock_nodes_are_excluded() {
        let (p, s) = reference();
        let r = residual_report(&p.gas, &p.geom, &s, 1e-3).unwrap();
        assert!(r.max_abs_ode < 1e-4 && r.max_abs_pde < 1e-4, "{r:?}");
        assert!(!r.excluded.is_empty());
        assert!(r.excluded.iter().all(|x| (x - FRAC_PI_2).abs() < 2.1e-3));
        assert!(r.ode_residuals.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn corrupted_node_produces_spike() {
        let (p, mut s) = reference();
        let clean = ode_residual(&p.gas, &p.geom, &s, 1e-3).unwrap();
        let i = 700;
        s.supersonic_profile.speeds[i] += 1e-3;
        let dirty = ode_residual(&p.gas, &p.geom, &s, 1e-3).unwrap();
        assert!(dirty.max_abs > 100.0 * clean.max_abs);
    }

    #[test]
    fn coarse_step_is_rejected() {
        let (p, s) = reference();
        assert!(ode_residual(&p.gas, &p.geom, &s, 0.5).is_err());
    }

    #[test]
    fn flags_follow_pieces() {
        let (p, s) = reference();
        let flags = classify_field(&p.gas, &s).unwrap();
        assert!(flags.supersonic.iter().all(|r| *r == Regime::Supersonic));
        assert!(flags.subsonic.iter().all(|r| *r == Regime::Subsonic));
        let at_entry = build_solution(
            &p,
            p.x0,
            &SolverOptions {
                panels: 100,
                ..Default::default()
            },
        )
        .unwrap();
        let flags = classify_field(&p.gas, &at_entry).unwrap();
        assert!(flags.supersonic.is_empty());
        assert_eq!(flags.subsonic.len(), 101);
        assert_eq!(
            classify_profile(&p.gas, &at_entry.supersonic_profile).len(),
            1
        );
    }

    #[test]
    fn flags_reject_wrong_regime() {
        let (p, mut s) = reference();
        s.subsonic_profile.speeds[10] = 1.2;
        assert!(matches!(
            classify_field(&p.gas, &s),
            Err(Error::InvariantViolation(_))
        ));
    }
}
