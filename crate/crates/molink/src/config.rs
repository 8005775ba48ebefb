//! TOML experiment configuration.
//!
//! Every physical quantity carries its unit in the key name, and unknown
//! keys are rejected everywhere, so a typo fails the run instead of
//! silently changing the physics.

use molink_core::channel::ChannelParams;
use serde::Deserialize;

use crate::{ExperimentId, RunError};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentSection,
    pub channel: ChannelSection,
    pub sir_sweep: Option<SirSweepSection>,
    pub fec_vs_drift: Option<FecVsDriftSection>,
    pub detector_comparison: Option<DetectorComparisonSection>,
    pub passband_spectrum: Option<PassbandSection>,
    pub pathloss_table: Option<PathlossSection>,
    pub pulse_shaping: Option<PulseShapingSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub id: String,
    pub seed: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSection {
    pub distance_um: f64,
    pub diffusivity_um2_per_s: f64,
    /// Present means a 3-D spherical absorber; absent means the 1-D channel.
    pub receiver_radius_um: Option<f64>,
    pub drift_um_per_s: Option<f64>,
    pub half_life_s: Option<f64>,
    pub degradation_per_s: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SirSweepSection {
    pub symbol_period_start_s: f64,
    pub symbol_period_stop_s: f64,
    pub symbol_period_points: usize,
    /// Extra degradation curves; the no-degradation curve is always included.
    pub half_lives_s: Vec<f64>,
    #[serde(default)]
    pub monte_carlo_overlay: bool,
    pub mc_particles: Option<u64>,
    pub mc_partitions: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FecVsDriftSection {
    pub drift_um_per_s: Vec<f64>,
    pub codewords_per_point: u64,
    pub symbol_period_s: f64,
    pub decoder_trials: u32,
    pub batches: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorComparisonSection {
    pub molecules_per_symbol: Vec<u64>,
    pub memory_lengths: Vec<usize>,
    pub bits_per_point: u64,
    pub channel_taps: usize,
    pub symbol_period_s: f64,
    /// Difference-detector threshold as a fraction of the peak-tap mean.
    pub difference_threshold_factor: f64,
    pub batches: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PassbandSection {
    pub oscillation_amplitude_um: f64,
    pub carrier_frequencies_hz: Vec<f64>,
    pub emission_rate_per_s: f64,
    pub duration_s: f64,
    pub sample_rate_hz: f64,
    /// Leading fraction of the trace dropped as start-up transient.
    pub transient_fraction: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathlossSection {
    pub distances_um: Vec<f64>,
    pub em_frequency_hz: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseShapingSection {
    pub horizon_s: f64,
    pub grid_dt_s: f64,
    pub cutoff_epsilon_s: f64,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<ExperimentConfig, RunError> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| RunError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn id(&self) -> Result<ExperimentId, RunError> {
        ExperimentId::parse(&self.experiment.id).ok_or_else(|| {
            RunError::Config(format!(
                "experiment.id '{}' is not one of: {}",
                self.experiment.id,
                ExperimentId::ALL.map(|i| i.as_str()).join(", ")
            ))
        })
    }

    /// Builds the validated physical channel from the `[channel]` section.
    pub fn channel_params(&self) -> Result<ChannelParams, RunError> {
        let c = &self.channel;
        let mut p = match c.receiver_radius_um {
            Some(r) => ChannelParams::three_dim(c.distance_um, r, c.diffusivity_um2_per_s)
                .map_err(|e| RunError::Config(format!("channel: {e}")))?,
            None => ChannelParams::one_dim(c.distance_um, c.diffusivity_um2_per_s)
                .map_err(|e| RunError::Config(format!("channel: {e}")))?,
        };
        if let Some(v) = c.drift_um_per_s {
            p = p
                .with_drift(v)
                .map_err(|e| RunError::Config(format!("channel.drift_um_per_s: {e}")))?;
        }
        match (c.half_life_s, c.degradation_per_s) {
            (Some(_), Some(_)) => {
                return Err(RunError::Config(
                    "channel: set either half_life_s or degradation_per_s, not both".into(),
                ))
            }
            (Some(h), None) => {
                p = p
                    .with_half_life(h)
                    .map_err(|e| RunError::Config(format!("channel.half_life_s: {e}")))?;
            }
            (None, Some(l)) => {
                p = p
                    .with_degradation_rate(l)
                    .map_err(|e| RunError::Config(format!("channel.degradation_per_s: {e}")))?;
            }
            (None, None) => {}
        }
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), RunError> {
        let id = self.id()?;
        self.channel_params()?;
        match id {
            ExperimentId::SirSweep => {
                let s = self.section_sir()?;
                require(s.symbol_period_start_s > 0.0, "sir_sweep.symbol_period_start_s must be > 0")?;
                require(
                    s.symbol_period_stop_s > s.symbol_period_start_s,
                    "sir_sweep.symbol_period_stop_s must exceed symbol_period_start_s",
                )?;
                require(s.symbol_period_points >= 2, "sir_sweep.symbol_period_points must be >= 2")?;
                require(
                    s.half_lives_s.iter().all(|&h| h > 0.0),
                    "sir_sweep.half_lives_s entries must be > 0",
                )?;
                if s.monte_carlo_overlay {
                    require(
                        s.mc_particles.unwrap_or(0) >= 1,
                        "sir_sweep.mc_particles must be >= 1 when monte_carlo_overlay is on",
                    )?;
                    require(
                        s.mc_partitions.unwrap_or(0) >= 1,
                        "sir_sweep.mc_partitions must be >= 1 when monte_carlo_overlay is on",
                    )?;
                }
            }
            ExperimentId::FecVsDrift => {
                let s = self.section_fec()?;
                require(!s.drift_um_per_s.is_empty(), "fec_vs_drift.drift_um_per_s must be non-empty")?;
                require(
                    strictly_monotone(&s.drift_um_per_s),
                    "fec_vs_drift.drift_um_per_s must be strictly monotone",
                )?;
                require(
                    s.drift_um_per_s.iter().all(|&v| v >= 0.0),
                    "fec_vs_drift.drift_um_per_s entries must be >= 0",
                )?;
                require(s.codewords_per_point >= 1, "fec_vs_drift.codewords_per_point must be >= 1")?;
                require(s.symbol_period_s > 0.0, "fec_vs_drift.symbol_period_s must be > 0")?;
                require(s.decoder_trials >= 1, "fec_vs_drift.decoder_trials must be >= 1")?;
                require(s.batches >= 2, "fec_vs_drift.batches must be >= 2")?;
                require(
                    self.channel.receiver_radius_um.is_none(),
                    "fec_vs_drift uses the 1-D drift channel; remove channel.receiver_radius_um",
                )?;
            }
            ExperimentId::DetectorComparison => {
                let s = self.section_detectors()?;
                require(
                    !s.molecules_per_symbol.is_empty(),
                    "detector_comparison.molecules_per_symbol must be non-empty",
                )?;
                require(
                    s.molecules_per_symbol.windows(2).all(|w| w[1] > w[0]),
                    "detector_comparison.molecules_per_symbol must be strictly increasing",
                )?;
                require(
                    s.molecules_per_symbol.iter().all(|&m| m >= 1),
                    "detector_comparison.molecules_per_symbol entries must be >= 1",
                )?;
                require(
                    !s.memory_lengths.is_empty()
                        && s.memory_lengths.iter().all(|&i| (1..=16).contains(&i)),
                    "detector_comparison.memory_lengths must be within 1..=16",
                )?;
                require(s.bits_per_point >= 1, "detector_comparison.bits_per_point must be >= 1")?;
                require(
                    (1..=64).contains(&s.channel_taps),
                    "detector_comparison.channel_taps must be within 1..=64",
                )?;
                require(s.symbol_period_s > 0.0, "detector_comparison.symbol_period_s must be > 0")?;
                require(
                    s.difference_threshold_factor >= 0.0,
                    "detector_comparison.difference_threshold_factor must be >= 0",
                )?;
                require(s.batches >= 2, "detector_comparison.batches must be >= 2")?;
            }
            ExperimentId::PassbandSpectrum => {
                let s = self.section_passband()?;
                require(
                    s.oscillation_amplitude_um >= 0.0,
                    "passband_spectrum.oscillation_amplitude_um must be >= 0",
                )?;
                require(
                    !s.carrier_frequencies_hz.is_empty(),
                    "passband_spectrum.carrier_frequencies_hz must be non-empty",
                )?;
                require(
                    s.emission_rate_per_s > 0.0,
                    "passband_spectrum.emission_rate_per_s must be > 0",
                )?;
                require(s.duration_s > 0.0, "passband_spectrum.duration_s must be > 0")?;
                require(s.sample_rate_hz > 0.0, "passband_spectrum.sample_rate_hz must be > 0")?;
                require(
                    (0.0..0.9).contains(&s.transient_fraction),
                    "passband_spectrum.transient_fraction must be within [0, 0.9)",
                )?;
            }
            ExperimentId::PathlossTable => {
                let s = self.section_pathloss()?;
                require(!s.distances_um.is_empty(), "pathloss_table.distances_um must be non-empty")?;
                require(
                    strictly_monotone(&s.distances_um),
                    "pathloss_table.distances_um must be strictly monotone",
                )?;
                require(
                    s.distances_um.iter().all(|&d| d > 0.0),
                    "pathloss_table.distances_um entries must be > 0",
                )?;
                require(s.em_frequency_hz > 0.0, "pathloss_table.em_frequency_hz must be > 0")?;
            }
            ExperimentId::PulseShaping => {
                let s = self.section_pulse()?;
                require(s.horizon_s > 0.0, "pulse_shaping.horizon_s must be > 0")?;
                require(s.grid_dt_s > 0.0, "pulse_shaping.grid_dt_s must be > 0")?;
                require(
                    s.cutoff_epsilon_s > 0.0,
                    "pulse_shaping.cutoff_epsilon_s must be > 0",
                )?;
                require(
                    s.horizon_s / s.grid_dt_s <= 2e6,
                    "pulse_shaping.horizon_s / grid_dt_s must stay at or below 2e6 samples",
                )?;
                require(
                    self.channel.receiver_radius_um.is_none(),
                    "pulse_shaping uses the 1-D channel; remove channel.receiver_radius_um",
                )?;
            }
        }
        Ok(())
    }

    pub fn section_sir(&self) -> Result<&SirSweepSection, RunError> {
        self.sir_sweep.as_ref().ok_or_else(|| missing("sir_sweep"))
    }
    pub fn section_fec(&self) -> Result<&FecVsDriftSection, RunError> {
        self.fec_vs_drift.as_ref().ok_or_else(|| missing("fec_vs_drift"))
    }
    pub fn section_detectors(&self) -> Result<&DetectorComparisonSection, RunError> {
        self.detector_comparison.as_ref().ok_or_else(|| missing("detector_comparison"))
    }
    pub fn section_passband(&self) -> Result<&PassbandSection, RunError> {
        self.passband_spectrum.as_ref().ok_or_else(|| missing("passband_spectrum"))
    }
    pub fn section_pathloss(&self) -> Result<&PathlossSection, RunError> {
        self.pathloss_table.as_ref().ok_or_else(|| missing("pathloss_table"))
    }
    pub fn section_pulse(&self) -> Result<&PulseShapingSection, RunError> {
        self.pulse_shaping.as_ref().ok_or_else(|| missing("pulse_shaping"))
    }
}

fn missing(section: &str) -> RunError {
    RunError::Config(format!("experiment requires a [{section}] section"))
}

fn require(cond: bool, msg: &str) -> Result<(), RunError> {
    if cond {
        Ok(())
    } else {
        Err(RunError::Config(msg.to_string()))
    }
}

fn strictly_monotone(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] > w[0]) || values.windows(2).all(|w| w[1] < w[0])
}
