//! Received-rate spectrum of oscillating transmitters sharing one channel.

use molink_core::modulation::{passband_signal, spectrum, CarrierConfig};

use crate::table::Series;
use crate::{ExperimentConfig, ResultTable, RunError};

pub fn run(cfg: &ExperimentConfig, _seed: u64) -> Result<ResultTable, RunError> {
    let s = cfg.section_passband()?;
    let params = cfg.channel_params()?;
    let carrier = CarrierConfig {
        base_distance: params.distance,
        oscillation_amplitude: s.oscillation_amplitude_um,
        carrier_frequencies: s.carrier_frequencies_hz.clone(),
        emission_rate: s.emission_rate_per_s,
    };

    let trace = passband_signal(&carrier, &params, s.duration_s, s.sample_rate_hz)
        .map_err(RunError::from)?;
    let skip = (trace.len() as f64 * s.transient_fraction) as usize;
    let steady = &trace[skip..];
    if steady.len() < 8 {
        return Err(RunError::Config(
            "passband_spectrum: too few samples after the transient cut".into(),
        ));
    }
    let mags = spectrum(steady).map_err(RunError::from)?;

    // One-sided spectrum; bin k sits at k * sample_rate / len.
    let half = steady.len() / 2;
    let df = s.sample_rate_hz / steady.len() as f64;
    let axis: Vec<f64> = (0..=half).map(|k| k as f64 * df).collect();
    let mut table = ResultTable::new("frequency_hz", axis);
    table.push_series(Series::analytic("magnitude", mags[..=half].to_vec()))?;
    for (i, &fc) in s.carrier_frequencies_hz.iter().enumerate() {
        table.notes.push(format!("carrier_{i}_hz={fc}"));
    }
    Ok(table)
}

/// True when `magnitude` has a local maximum within one bin of `target_hz`.
pub fn has_local_peak_near(axis: &[f64], magnitude: &[f64], target_hz: f64) -> bool {
    let df = if axis.len() > 1 { axis[1] - axis[0] } else { return false };
    for k in 1..magnitude.len().saturating_sub(1) {
        if magnitude[k] >= magnitude[k - 1]
            && magnitude[k] >= magnitude[k + 1]
            && (axis[k] - target_hz).abs() <= df + 1e-12
        {
            return true;
        }
    }
    false
}
