//! Signal-to-interference ratio versus symbol duration, one curve per
//! degradation half-life, with an optional particle-level overlay.

use molink_core::particle::SimConfig;

use super::name_fragment;
use crate::mc::simulate_parallel;
use crate::table::Series;
use crate::{derive_seed, ExperimentConfig, ResultTable, RunError};

pub fn run(cfg: &ExperimentConfig, seed: u64) -> Result<ResultTable, RunError> {
    let s = cfg.section_sir()?;
    let base = cfg.channel_params()?;
    if base.degradation_rate != 0.0 {
        return Err(RunError::Config(
            "sir_sweep defines its own degradation curves; remove channel degradation keys".into(),
        ));
    }

    let axis = log_spaced(s.symbol_period_start_s, s.symbol_period_stop_s, s.symbol_period_points);
    let mut table = ResultTable::new("t_s_s", axis.clone());

    // Analytic curves: no degradation first, then one per half-life.
    let mut curves = vec![("sir_lambda0".to_string(), base)];
    for &hl in &s.half_lives_s {
        let p = base.with_half_life(hl).map_err(RunError::from)?;
        curves.push((format!("sir_hl{}s", name_fragment(hl)), p));
    }
    for (name, params) in &curves {
        let values: Vec<f64> = axis
            .iter()
            .map(|&t_s| params.sir(t_s).map_err(RunError::from))
            .collect::<Result<_, _>>()?;
        table.push_series(Series::analytic(name.clone(), values))?;
    }

    if s.monte_carlo_overlay {
        let particles = s.mc_particles.expect("validated");
        let partitions = s.mc_partitions.expect("validated");
        // Horizon long enough that the remaining arrivals are negligible for
        // every curve: several half-lives past the slowest sweep point.
        let stop = s.symbol_period_stop_s;
        for (ci, (name, params)) in curves.iter().enumerate() {
            let horizon = if params.degradation_rate > 0.0 {
                stop + 10.0 * params.half_life()
            } else {
                20.0 * stop
            };
            let sim = SimConfig::new(
                SimConfig::recommended_time_step(params),
                horizon,
                particles,
                derive_seed(seed, &[ci as u64]),
            );
            let record = simulate_parallel(params, &sim, partitions)?;
            let total = record.empirical_cdf(horizon)?;
            let mut values = Vec::with_capacity(axis.len());
            let mut stderrs = Vec::with_capacity(axis.len());
            for &t_s in &axis {
                // Snap to the walker's grid so the estimate is bias-free.
                let t = (t_s / sim.time_step).round() * sim.time_step;
                let within = record.empirical_cdf(t)?;
                let stray = (total - within).max(f64::MIN_POSITIVE);
                values.push(within / stray);
                // Delta-method error from the binomial counts.
                let n = record.emitted_count as f64;
                let se_within = (within * (1.0 - within) / n).sqrt();
                stderrs.push(se_within * total / (stray * stray));
            }
            table.push_series(Series { name: format!("mc_{name}"), values, stderrs })?;
        }
    }

    Ok(table)
}

fn log_spaced(start: f64, stop: f64, points: usize) -> Vec<f64> {
    let ratio = (stop / start).ln();
    (0..points)
        .map(|i| start * (ratio * i as f64 / (points - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONFIG: &str = r#"
[experiment]
id = "sir_sweep"
seed = 7

[channel]
distance_um = 4.0
diffusivity_um2_per_s = 79.4
receiver_radius_um = 10.0

[sir_sweep]
symbol_period_start_s = 0.1
symbol_period_stop_s = 10.0
symbol_period_points = 8
half_lives_s = [8.0, 4.0, 2.0]
"#;

    #[test]
    fn curves_are_monotone_and_ordered_by_half_life() {
        let cfg = ExperimentConfig::from_toml(CONFIG).unwrap();
        let table = run(&cfg, 7).unwrap();
        assert_eq!(table.series.len(), 4);
        for s in &table.series {
            for w in s.values.windows(2) {
                assert!(w[1] > w[0], "{} not increasing", s.name);
            }
        }
        // Shorter half-life, higher SIR, pointwise.
        for i in 0..table.axis.len() {
            let v: Vec<f64> = table.series.iter().map(|s| s.values[i]).collect();
            assert!(v[0] < v[1] && v[1] < v[2] && v[2] < v[3], "point {i}: {v:?}");
        }
    }

    #[test]
    fn header_matches_the_documented_contract() {
        let cfg = ExperimentConfig::from_toml(CONFIG).unwrap();
        let table = run(&cfg, 7).unwrap();
        let csv = table.to_csv();
        assert!(csv.starts_with("t_s_s,sir_lambda0,stderr_sir_lambda0,sir_hl8s,"), "{csv}");
    }
}
