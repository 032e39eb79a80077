//! Error type shared by every module of the crate.
//!
//! Numerical routines fail in a small number of well-defined ways (domain
//! violations, lost brackets, non-convergent quadrature or integration,
//! inconsistent cross-checks); each gets its own variant so callers can
//! distinguish recoverable situations (e.g. a flagged table row) from bugs.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Exponent outside the supported range p > 1.
    #[error("invalid exponent p = {p}: the operator requires p > 1")]
    InvalidExponent { p: f64 },

    /// A scalar argument left the domain of a special function.
    #[error("{name} = {value} outside domain {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// A root finder could not establish or keep a sign-change bracket.
    #[error("no sign change for {what} in [{lo}, {hi}]")]
    BracketFailure {
        what: &'static str,
        lo: f64,
        hi: f64,
    },

    /// Adaptive quadrature exhausted its refinement budget.
    #[error("quadrature for {what} did not reach relative tolerance {tol} (last change {last_change:e})")]
    QuadratureNonConvergence {
        what: &'static str,
        tol: f64,
        last_change: f64,
    },

    /// The adaptive ODE stepper drove the step size below the representable floor.
    #[error("ODE step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    /// An expected Poincaré-section crossing was not found within the horizon.
    #[error("event not located within t <= {horizon} for {what}")]
    EventNotFound { what: &'static str, horizon: f64 },

    /// The integration consumed its step budget before reaching the target time.
    #[error("integration exceeded the budget of {max_steps} steps at t = {t}")]
    StepBudgetExceeded { max_steps: usize, t: f64 },

    /// Two independent computations of the same quantity disagree beyond the
    /// contract tolerance; indicates an inconsistent record or an internal bug.
    #[error("internal consistency violation: {0}")]
    Inconsistency(String),

    /// Bad run configuration (CLI flags or config file).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Requested spectral index has no admissible momentum.
    #[error("index {ell}/{m} is not solvable for p = {p}: admissible winding range is ({s_min:.9}, {s_max:.9})")]
    UnresolvableIndex {
        ell: u64,
        m: u64,
        p: f64,
        s_min: f64,
        s_max: f64,
    },

    /// Filesystem failure while emitting artifacts.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
