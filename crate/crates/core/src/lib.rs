//! Symmetric transonic shock solutions of steady potential flow on
//! axisymmetric surfaces.
//!
//! A supersonic stream entering at `x0` may jump to subsonic flow at any
//! location `x_b` of the duct; the exit speed that results does not depend on
//! `x_b`. This crate builds that whole family, measures the invariance and
//! checks each member against the governing equations.

// negated float comparisons are how NaN inputs get rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod branch;
pub mod cli;
pub mod error;
pub mod family;
pub mod gas;
pub mod geometry;
pub mod residual;
pub mod roots;
pub mod shock;
pub mod svg;

pub use branch::{Branch, BranchConstant, SpeedProfile};
pub use error::{Error, Result};
pub use family::{NozzleProblem, SolverOptions, SweepReport, TransonicSolution, Verdict};
pub use gas::{FlowState, GasParams, Regime};
pub use geometry::{MetricProfile, ProfileKind, Table};
pub use residual::{ResidualReport, ResidualSeries};
pub use shock::ShockJump;
