//! Detector BER versus SNR on the heavy-ISI channel, with paired noise
//! across detectors at every sweep point.

use molink_core::detection::{
    apply_noise, dff_detect, diff_detect, frame_snr_db, map_detect, mmse_equalize,
    DetectorConfig, NoiseModel,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::table::{batch_means_stderr, Series};
use crate::{derive_seed, ExperimentConfig, ResultTable, RunError};

struct PointOutcome {
    snr_db: f64,
    /// (series name, ber, stderr) in a fixed order.
    entries: Vec<(String, f64, f64)>,
    note: String,
}

pub fn run(cfg: &ExperimentConfig, seed: u64) -> Result<ResultTable, RunError> {
    let s = cfg.section_detectors()?;
    let params = cfg.channel_params()?;
    let taps = params
        .channel_taps(s.symbol_period_s, s.channel_taps)
        .map_err(RunError::from)?;
    if taps.peak_tap() <= 0.0 {
        return Err(RunError::Runtime(
            "channel taps are numerically zero; no molecules reach the receiver within the \
             modeled slots (check the units of the channel section)"
                .into(),
        ));
    }

    let outcomes: Vec<PointOutcome> = s
        .molecules_per_symbol
        .par_iter()
        .enumerate()
        .map(|(pi, &m)| point(pi, m, s, &taps, seed))
        .collect::<Result<_, _>>()?;

    let axis: Vec<f64> = outcomes.iter().map(|o| o.snr_db).collect();
    let mut table = ResultTable::new("snr_db", axis);
    for (si, (name, _, _)) in outcomes[0].entries.iter().enumerate() {
        table.push_series(Series {
            name: name.clone(),
            values: outcomes.iter().map(|o| o.entries[si].1).collect(),
            stderrs: outcomes.iter().map(|o| o.entries[si].2).collect(),
        })?;
    }
    for o in &outcomes {
        table.notes.push(o.note.clone());
    }
    Ok(table)
}

fn point(
    pi: usize,
    m: u64,
    s: &crate::config::DetectorComparisonSection,
    taps: &molink_core::channel::TapVector,
    seed: u64,
) -> Result<PointOutcome, RunError> {
    let pi64 = pi as u64;
    let n_bits = s.bits_per_point as usize;
    let mut bit_rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[pi64, 0]));
    let bits: Vec<u8> = (0..n_bits).map(|_| u8::from(bit_rng.gen::<f64>() < 0.5)).collect();

    // One noise draw per point, shared by every detector.
    let mut noise_rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[pi64, 1]));
    let frame = apply_noise(&bits, taps, m, NoiseModel::GaussianApprox, &mut noise_rng)?;
    let snr = frame_snr_db(taps, m as f64, NoiseModel::GaussianApprox)?;

    let batch = (n_bits / s.batches as usize).max(1);
    let ber_batches = |decided: &[u8]| -> (f64, f64) {
        let total = decided.iter().zip(&bits).filter(|(a, b)| a != b).count();
        let per_batch: Vec<f64> = decided
            .chunks(batch)
            .zip(bits.chunks(batch))
            .map(|(d, b)| d.iter().zip(b).filter(|(x, y)| x != y).count() as f64 / d.len() as f64)
            .collect();
        (total as f64 / n_bits as f64, batch_means_stderr(&per_batch))
    };

    let mut entries = Vec::new();
    let mut best_coherent = f64::INFINITY;
    let mut max_i = 0usize;
    for &i_mem in &s.memory_lengths {
        let dcfg = DetectorConfig::coherent(i_mem, taps.clone());
        let (map_ber, map_se) = ber_batches(&map_detect(&frame, &dcfg)?);
        let (mmse_ber, mmse_se) = ber_batches(&mmse_equalize(&frame, &dcfg)?.bits);
        let (dff_ber, dff_se) = ber_batches(&dff_detect(&frame, &dcfg)?);
        entries.push((format!("map_i{i_mem}"), map_ber, map_se));
        entries.push((format!("mmse_i{i_mem}"), mmse_ber, mmse_se));
        entries.push((format!("dff_i{i_mem}"), dff_ber, dff_se));
        if i_mem >= max_i {
            max_i = i_mem;
            best_coherent = map_ber.min(mmse_ber);
        }
    }

    let tau = s.difference_threshold_factor * m as f64 * taps.peak_tap();
    let (diff_ber, diff_se) = ber_batches(&diff_detect(&frame, &DetectorConfig::noncoherent(tau))?);
    entries.push(("diff".to_string(), diff_ber, diff_se));

    let note = format!(
        "snr_db={snr:.3}: non-coherent diff BER {diff_ber} vs best coherent (I={max_i}) {best_coherent}"
    );
    Ok(PointOutcome { snr_db: snr, entries, note })
}
