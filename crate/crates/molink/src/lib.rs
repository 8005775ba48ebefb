//! Experiment orchestration, file formats, and the command line for the
//! `molink-core` molecular-communication library.
//!
//! The core crate is `no_std` and purely computational; everything that
//! touches the filesystem, wall clock, or thread pool lives here: TOML
//! experiment configs, CSV result tables with metadata sidecars, partitioned
//! Monte Carlo across worker threads, and the figure-reproduction
//! experiments.

pub mod config;
pub mod experiments;
pub mod io;
pub mod mc;
pub mod table;

use std::fmt;

pub use config::ExperimentConfig;
pub use table::{Metadata, ResultTable, Series};

/// Errors surfaced by the runner. `Config` maps to exit code 2, `Runtime`
/// to exit code 3.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Runtime(_) => 3,
        }
    }
}

impl From<molink_core::Error> for RunError {
    fn from(e: molink_core::Error) -> Self {
        RunError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Runtime(e.to_string())
    }
}

/// SplitMix64 step, used to derive independent per-point RNG seeds from the
/// master seed without correlating streams.
pub fn derive_seed(master: u64, salt: &[u64]) -> u64 {
    let mut x = master;
    for &s in salt {
        x = x.wrapping_add(0x9e3779b97f4a7c15).wrapping_add(s);
        x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
        x ^= x >> 31;
    }
    x
}

/// Experiment identifiers accepted in configs and listed by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentId {
    SirSweep,
    FecVsDrift,
    DetectorComparison,
    PassbandSpectrum,
    PathlossTable,
    PulseShaping,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 6] = [
        ExperimentId::SirSweep,
        ExperimentId::FecVsDrift,
        ExperimentId::DetectorComparison,
        ExperimentId::PassbandSpectrum,
        ExperimentId::PathlossTable,
        ExperimentId::PulseShaping,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentId::SirSweep => "sir_sweep",
            ExperimentId::FecVsDrift => "fec_vs_drift",
            ExperimentId::DetectorComparison => "detector_comparison",
            ExperimentId::PassbandSpectrum => "passband_spectrum",
            ExperimentId::PathlossTable => "pathloss_table",
            ExperimentId::PulseShaping => "pulse_shaping",
        }
    }

    pub fn parse(s: &str) -> Option<ExperimentId> {
        Self::ALL.iter().copied().find(|id| id.as_str() == s)
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
