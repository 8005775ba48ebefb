//! Interchange file formats beyond the result tables.

use std::fmt::Write as _;
use std::path::Path;

use molink_core::modulation::EmissionSchedule;
use molink_core::particle::ArrivalRecord;

use crate::RunError;

/// Serializes an emission schedule as `time_s,type,count` rows.
pub fn emission_schedule_csv(schedule: &EmissionSchedule) -> String {
    let mut out = String::from("time_s,type,count\n");
    for e in &schedule.events {
        let _ = writeln!(out, "{},{},{}", e.time, e.molecule_type.symbol(), e.count);
    }
    out
}

/// Histogram of absorption times as `bin_start_s,bin_end_s,count` rows.
/// Bins are uniform over `[0, t_max)`; arrivals beyond `t_max` are dropped.
pub fn arrival_histogram_csv(record: &ArrivalRecord, bins: usize, t_max: f64) -> Result<String, RunError> {
    if bins == 0 || t_max.is_nan() || t_max <= 0.0 {
        return Err(RunError::Config("histogram needs bins >= 1 and t_max > 0".into()));
    }
    let mut counts = vec![0u64; bins];
    for t in record.sorted_times() {
        if t < t_max {
            let idx = ((t / t_max) * bins as f64) as usize;
            counts[idx.min(bins - 1)] += 1;
        }
    }
    let width = t_max / bins as f64;
    let mut out = String::from("bin_start_s,bin_end_s,count\n");
    for (i, c) in counts.iter().enumerate() {
        let _ = writeln!(out, "{},{},{}", i as f64 * width, (i + 1) as f64 * width, c);
    }
    Ok(out)
}

pub fn write_text(path: &Path, body: &str) -> Result<(), RunError> {
    std::fs::write(path, body)?;
    Ok(())
}
