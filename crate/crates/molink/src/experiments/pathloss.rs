//! Free-space pathloss comparison table over a distance sweep.

use crate::table::Series;
use crate::{ExperimentConfig, ResultTable, RunError};

pub fn run(cfg: &ExperimentConfig, _seed: u64) -> Result<ResultTable, RunError> {
    let s = cfg.section_pathloss()?;
    let base = cfg.channel_params()?;

    let mut table = ResultTable::new("distance_um", s.distances_um.clone());
    let mut peak_time = Vec::new();
    let mut peak_hitting = Vec::new();
    let mut peak_absorbing = Vec::new();
    let mut total_fraction = Vec::new();
    let mut total_hitting = Vec::new();
    let mut em_pathloss = Vec::new();
    let mut em_arrival = Vec::new();

    for &d in &s.distances_um {
        let mut params = base;
        params.distance = d;
        params.validate().map_err(RunError::from)?;
        let r = params.pathloss_report(s.em_frequency_hz).map_err(RunError::from)?;
        peak_time.push(r.peak_time);
        peak_hitting.push(r.peak_hitting_amplitude);
        peak_absorbing.push(r.peak_absorbing_amplitude);
        total_fraction.push(r.total_fraction);
        total_hitting.push(r.total_hitting_response);
        em_pathloss.push(r.em_pathloss);
        em_arrival.push(r.em_arrival_time);
    }

    table.push_series(Series::analytic("peak_time_s", peak_time))?;
    table.push_series(Series::analytic("peak_hitting_amplitude", peak_hitting))?;
    table.push_series(Series::analytic("peak_absorbing_amplitude", peak_absorbing))?;
    table.push_series(Series::analytic("total_fraction", total_fraction))?;
    table.push_series(Series::analytic("total_hitting_response", total_hitting))?;
    table.push_series(Series::analytic("em_pathloss", em_pathloss))?;
    table.push_series(Series::analytic("em_arrival_time_s", em_arrival))?;
    Ok(table)
}

/// Least-squares slope of `ln(series)` against `ln(axis)`.
pub fn log_log_slope(axis: &[f64], values: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = axis
        .iter()
        .zip(values)
        .map(|(&x, &y)| (x.ln(), y.ln()))
        .collect();
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
