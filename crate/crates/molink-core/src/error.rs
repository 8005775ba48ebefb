//! Error type shared across the crate.

use alloc::string::String;
use core::fmt;

/// Errors reported by channel math, simulation, coding, and detection.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter violated its documented domain. The message names the field.
    InvalidParam(String),
    /// Adaptive quadrature could not reach the requested tolerance.
    QuadratureDidNotConverge {
        achieved: f64,
        requested: f64,
    },
    /// Simulation time step exceeds the stability heuristic.
    UnstableTimeStep {
        dt: f64,
        limit: f64,
    },
    /// Input length does not match what the code or detector expects.
    LengthMismatch {
        expected: usize,
        got: usize,
    },
    /// A combinatorial search would exceed its enumeration guard.
    SearchSpaceExceeded(String),
    /// A coherent detector was invoked without channel state information.
    MissingCsi,
    /// Sample rate too low for the configured carrier frequencies.
    NyquistViolation {
        sample_rate: f64,
        required: f64,
    },
    /// An operation that needs data received none.
    EmptyInput(&'static str),
    /// Requested code parameters admit no codebook.
    Infeasible(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParam(msg) => write!(f, "invalid parameter: {msg}"),
            Error::QuadratureDidNotConverge { achieved, requested } => write!(
                f,
                "quadrature did not converge: error estimate {achieved:.3e} above tolerance {requested:.3e}"
            ),
            Error::UnstableTimeStep { dt, limit } => write!(
                f,
                "time step {dt:.3e} s exceeds stability limit {limit:.3e} s (set allow_unstable to override)"
            ),
            Error::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            Error::SearchSpaceExceeded(msg) => write!(f, "search space exceeded: {msg}"),
            Error::MissingCsi => write!(f, "coherent detector requires channel state information"),
            Error::NyquistViolation { sample_rate, required } => write!(
                f,
                "sample rate {sample_rate} Hz below required {required} Hz"
            ),
            Error::EmptyInput(what) => write!(f, "empty input: {what}"),
            Error::Infeasible(msg) => write!(f, "infeasible parameters: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
