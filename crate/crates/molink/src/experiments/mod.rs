//! Figure-reproduction experiments and metric sweeps.
//!
//! Each experiment maps a validated config onto one [`ResultTable`].
//! Stochastic experiments derive one RNG seed per (point, batch, purpose)
//! from the master seed, so sweep points can run on any number of threads
//! and still reproduce byte-identical tables.

pub mod detectors;
pub mod fec_drift;
pub mod passband;
pub mod pathloss;
pub mod pulse;
pub mod sir;

use crate::{ExperimentConfig, ExperimentId, ResultTable, RunError};

/// Runs the experiment selected by the config under the resolved seed.
pub fn run(cfg: &ExperimentConfig, seed: u64) -> Result<ResultTable, RunError> {
    match cfg.id()? {
        ExperimentId::SirSweep => sir::run(cfg, seed),
        ExperimentId::FecVsDrift => fec_drift::run(cfg, seed),
        ExperimentId::DetectorComparison => detectors::run(cfg, seed),
        ExperimentId::PassbandSpectrum => passband::run(cfg, seed),
        ExperimentId::PathlossTable => pathloss::run(cfg, seed),
        ExperimentId::PulseShaping => pulse::run(cfg, seed),
    }
}

/// Formats a float for use inside a series name: `8` stays `8`, `0.5`
/// becomes `0p5`.
pub(crate) fn name_fragment(value: f64) -> String {
    if value == value.trunc() && value.abs() < 1e15 {
        format!("{}", value as i64)
    } else {
        format!("{value}").replace('.', "p").replace('-', "m")
    }
}
