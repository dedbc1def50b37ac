use thiserror::Error;

/// Errors raised while constructing or verifying transonic flows.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid gas parameters: {0}")]
    InvalidGas(String),

    #[error("speed {speed} outside the admissible range [0, {max_speed})")]
    SpeedOutOfRange { speed: f64, max_speed: f64 },

    #[error("coordinate {x} outside the domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("invalid metric profile: {0}")]
    InvalidProfile(String),

    #[error("flow is choked{}: no real state carries the mass flux at width {width}", at(.x))]
    Choked { x: Option<f64>, width: f64 },

    #[error("no subsonic exit state: mass flux exceeds the sonic maximum at x = {x}")]
    NoSubsonicRoot { x: f64 },

    #[error("speed {speed} is not supersonic (critical speed {critical})")]
    NotSupersonic { speed: f64, critical: f64 },

    #[error("sonic singularity at speed {speed}")]
    SonicSingularity { speed: f64 },

    #[error("integration approached sonic speed at x = {x} (u = {speed})")]
    SonicApproach { x: f64, speed: f64 },

    #[error("shock locations out of order: {first} > {second}")]
    Ordering { first: f64, second: f64 },

    #[error("root bracket [{lo}, {hi}] does not contain a sign change")]
    NoBracket { lo: f64, hi: f64 },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

fn at(x: &Option<f64>) -> String {
    match x {
        Some(x) => format!(" at x = {x}"),
        None => String::new(),
    }
}
