//! Receiver-side noise models and detectors.
//!
//! The slot observation model is `r = Y a + w`: per-slot molecule counts are
//! sums of tap-weighted contributions of current and past symbols plus
//! arrival noise. Coherent detectors (MAP, MMSE, decision feedback) take the
//! tap vector as genie channel state information; the difference detector is
//! non-coherent and needs only a threshold.
//!
//! Taps beyond the configured memory cannot be represented in detector state,
//! so all coherent detectors absorb them in mean-field form: expected value
//! and variance under equiprobable bits. That keeps the comparison between
//! detectors honest on heavy-tailed channels where the tap sum converges
//! slowly.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};

use crate::channel::TapVector;
use crate::math;
use crate::{Error, Result};

/// Per-slot arrival noise models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    /// Exact binomial arrivals per contributing symbol.
    Binomial,
    /// Moment-matched Gaussian replacement for each binomial contribution.
    GaussianApprox,
    /// Signal-independent additive Gaussian of fixed variance, the turbulent
    /// high-drift regime.
    AwgnDrift { variance: f64 },
}

/// Observed per-slot counts plus the context needed to detect against them.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedFrame {
    pub counts: Vec<f64>,
    pub noise_model: NoiseModel,
    pub taps: TapVector,
    pub molecules_per_symbol: f64,
}

/// Detector parameters. Coherent detectors require `csi`.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorConfig {
    /// Memory length I: how many past symbols the detector models.
    pub memory: usize,
    pub csi: Option<TapVector>,
    /// Difference-detector threshold, in molecule counts.
    pub difference_threshold: f64,
}

impl DetectorConfig {
    pub fn coherent(memory: usize, csi: TapVector) -> Self {
        DetectorConfig { memory, csi: Some(csi), difference_threshold: 0.0 }
    }

    pub fn noncoherent(difference_threshold: f64) -> Self {
        DetectorConfig { memory: 0, csi: None, difference_threshold }
    }

    fn require_csi(&self) -> Result<&TapVector> {
        self.csi.as_ref().ok_or(Error::MissingCsi)
    }
}

/// Noise-free per-slot means `M * sum_j p_j b_{k-j+1}`.
pub fn clean_means(bits: &[u8], taps: &TapVector, molecules_per_symbol: u64) -> Vec<f64> {
    let m = molecules_per_symbol as f64;
    let p = &taps.taps;
    bits.iter()
        .enumerate()
        .map(|(k, _)| {
            let mut mu = 0.0;
            for (j, &pj) in p.iter().enumerate().take(k + 1) {
                if bits[k - j] == 1 {
                    mu += m * pj;
                }
            }
            mu
        })
        .collect()
}

/// Draws one noisy frame for the transmitted bits.
pub fn apply_noise<R: Rng + ?Sized>(
    bits: &[u8],
    taps: &TapVector,
    molecules_per_symbol: u64,
    model: NoiseModel,
    rng: &mut R,
) -> Result<ReceivedFrame> {
    if bits.is_empty() {
        return Err(Error::EmptyInput("bit sequence"));
    }
    if bits.iter().any(|&b| b > 1) {
        return Err(Error::InvalidParam("bits must be 0 or 1".into()));
    }
    taps.validate()?;
    if molecules_per_symbol == 0 {
        return Err(Error::InvalidParam("molecules_per_symbol must be >= 1".into()));
    }
    if let NoiseModel::AwgnDrift { variance } = model {
        if !(variance >= 0.0) {
            return Err(Error::InvalidParam("awgn variance must be >= 0".into()));
        }
    }

    let m = molecules_per_symbol as f64;
    let p = &taps.taps;
    let n = bits.len();
    let mut counts = vec![0.0f64; n];

    match model {
        NoiseModel::Binomial => {
            // Independent binomial thinning per (source symbol, slot) pair.
            for (i, &b) in bits.iter().enumerate() {
                if b != 1 {
                    continue;
                }
                for (j, &pj) in p.iter().enumerate() {
                    let k = i + j;
                    if k >= n {
                        break;
                    }
                    if pj > 0.0 {
                        let draw =
                            Binomial::new(molecules_per_symbol, pj.min(1.0)).expect("valid p");
                        counts[k] += draw.sample(rng) as f64;
                    }
                }
            }
        }
        NoiseModel::GaussianApprox => {
            for (k, slot) in counts.iter_mut().enumerate() {
                let mut mu = 0.0;
                let mut var = 0.0;
                for (j, &pj) in p.iter().enumerate().take(k + 1) {
                    if bits[k - j] == 1 {
                        mu += m * pj;
                        var += m * pj * (1.0 - pj);
                    }
                }
                let z: f64 = rng.sample(StandardNormal);
                *slot = mu + math::sqrt(var) * z;
            }
        }
        NoiseModel::AwgnDrift { variance } => {
            let sigma = math::sqrt(variance);
            for (k, slot) in counts.iter_mut().enumerate() {
                let mut mu = 0.0;
                for (j, &pj) in p.iter().enumerate().take(k + 1) {
                    if bits[k - j] == 1 {
                        mu += m * pj;
                    }
                }
                let z: f64 = rng.sample(StandardNormal);
                *slot = mu + sigma * z;
            }
        }
    }

    Ok(ReceivedFrame {
        counts,
        noise_model: model,
        taps: taps.clone(),
        molecules_per_symbol: m,
    })
}

/// Peak-signal SNR in dB: `10 log10(peak_mean^2 / noise_variance)`.
pub fn snr_db(peak_mean: f64, noise_variance: f64) -> Result<f64> {
    if !(noise_variance > 0.0) {
        return Err(Error::InvalidParam("snr needs noise_variance > 0".into()));
    }
    Ok(10.0 * math::log10(peak_mean * peak_mean / noise_variance))
}

/// SNR of a frame configuration: peak mean `M p_peak` against the arrival
/// noise variance at the peak tap (or the configured AWGN variance).
pub fn frame_snr_db(taps: &TapVector, molecules_per_symbol: f64, model: NoiseModel) -> Result<f64> {
    let p_peak = taps.peak_tap();
    let peak_mean = molecules_per_symbol * p_peak;
    let variance = match model {
        NoiseModel::Binomial | NoiseModel::GaussianApprox => {
            molecules_per_symbol * p_peak * (1.0 - p_peak)
        }
        NoiseModel::AwgnDrift { variance } => variance,
    };
    snr_db(peak_mean, variance)
}

fn noise_floor(m: f64, taps: &TapVector) -> f64 {
    let peak = m * taps.peak_tap();
    (1e-9 * peak * peak).max(1e-12)
}

const MAX_MAP_MEMORY: usize = 16;
const MAX_MAP_TAPS: usize = 64;

/// Maximum a-posteriori sequence detection: a Viterbi pass over the `2^I`
/// ISI states with state-conditioned Gaussian likelihoods.
///
/// Taps older than the state are handled by per-survivor decision feedback:
/// each state carries the recent bit history of its surviving path, so the
/// full tap span contributes to every branch mean even when `I` is short.
/// With `I + 1` at or above the tap count this is exact sequence ML.
pub fn map_detect(frame: &ReceivedFrame, cfg: &DetectorConfig) -> Result<Vec<u8>> {
    let taps = cfg.require_csi()?;
    if cfg.memory > MAX_MAP_MEMORY {
        return Err(Error::InvalidParam(
            "map_detect memory is guarded at I <= 16".into(),
        ));
    }
    if taps.taps.len() > MAX_MAP_TAPS {
        return Err(Error::InvalidParam(
            "map_detect supports at most 64 channel taps".into(),
        ));
    }
    let n = frame.counts.len();
    if n == 0 {
        return Err(Error::EmptyInput("frame"));
    }

    let m = frame.molecules_per_symbol;
    let p = &taps.taps;
    let i_mem = cfg.memory;
    let states = 1usize << i_mem;
    let floor = noise_floor(m, taps);
    let awgn_var = match frame.noise_model {
        NoiseModel::AwgnDrift { variance } => Some(variance),
        _ => None,
    };

    // Branch tables for the in-state taps, indexed by (state << 1) | bit.
    let mut mean_tab = vec![0.0f64; states << 1];
    let mut var_tab = vec![0.0f64; states << 1];
    for s in 0..states {
        for b in 0..2usize {
            let mut mu = 0.0;
            let mut var = 0.0;
            let mut add = |pj: f64, on: bool| {
                if on {
                    mu += m * pj;
                    if awgn_var.is_none() {
                        var += m * pj * (1.0 - pj);
                    }
                }
            };
            add(p[0], b == 1);
            for (j, &pj) in p.iter().enumerate().take(i_mem + 1).skip(1) {
                add(pj, (s >> (j - 1)) & 1 == 1);
            }
            mean_tab[(s << 1) | b] = mu;
            var_tab[(s << 1) | b] = var + awgn_var.unwrap_or(0.0);
        }
    }

    // Forward pass. Survivor histories cover the taps beyond the state;
    // the one-bit-per-node store is enough to walk predecessors backward.
    let mask = states - 1;
    let mut score = vec![f64::NEG_INFINITY; states];
    let mut next_score = vec![f64::NEG_INFINITY; states];
    let mut hist = vec![0u64; states];
    let mut next_hist = vec![0u64; states];
    score[0] = 0.0;
    let words_per_step = states.div_ceil(64);
    let mut dropped_bits = vec![0u64; n * words_per_step];

    for (k, &r) in frame.counts.iter().enumerate() {
        for v in next_score.iter_mut() {
            *v = f64::NEG_INFINITY;
        }
        for s in 0..states {
            if score[s] == f64::NEG_INFINITY {
                continue;
            }
            // Feedback contribution of survivor bits past the state window.
            let mut mu_fb = 0.0;
            let mut var_fb = 0.0;
            for (j, &pj) in p.iter().enumerate().skip(i_mem + 1) {
                if (hist[s] >> (j - 1)) & 1 == 1 {
                    mu_fb += m * pj;
                    if awgn_var.is_none() {
                        var_fb += m * pj * (1.0 - pj);
                    }
                }
            }
            for b in 0..2usize {
                let idx = (s << 1) | b;
                let mu = mean_tab[idx] + mu_fb;
                let var = (var_tab[idx] + var_fb).max(floor);
                let gain =
                    score[s] - 0.5 * math::ln(var) - (r - mu) * (r - mu) / (2.0 * var);
                let ns = ((s << 1) | b) & mask;
                let dropped = if i_mem == 0 { b } else { (s >> (i_mem - 1)) & 1 };
                if gain > next_score[ns] {
                    next_score[ns] = gain;
                    next_hist[ns] = (hist[s] << 1) | b as u64;
                    let word = k * words_per_step + ns / 64;
                    let bit = 1u64 << (ns % 64);
                    if dropped == 1 {
                        dropped_bits[word] |= bit;
                    } else {
                        dropped_bits[word] &= !bit;
                    }
                }
            }
        }
        core::mem::swap(&mut score, &mut next_score);
        core::mem::swap(&mut hist, &mut next_hist);
    }

    let mut state = (0..states)
        .max_by(|&a, &b| score[a].partial_cmp(&score[b]).unwrap_or(core::cmp::Ordering::Equal))
        .unwrap_or(0);
    let mut bits = vec![0u8; n];
    for k in (0..n).rev() {
        let word = dropped_bits[k * words_per_step + state / 64];
        let dropped = ((word >> (state % 64)) & 1) as usize;
        if i_mem == 0 {
            bits[k] = dropped as u8;
        } else {
            bits[k] = (state & 1) as u8;
            state = (state >> 1) | (dropped << (i_mem - 1));
        }
    }
    Ok(bits)
}

/// MMSE equalizer output with its regularization diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct MmseDecision {
    pub bits: Vec<u8>,
    /// Number of steps where the covariance needed a ridge to stay well
    /// conditioned.
    pub ridge_activations: usize,
}

/// Linear MMSE detection over a sliding window of observations.
///
/// For each symbol the detector looks at the next `I` slots, subtracts the
/// full-tap contribution of already-decided bits, treats current-and-future
/// bits as equiprobable unknowns, and thresholds the MMSE estimate of the
/// current bit. The covariance is rebuilt every step from the decision
/// history, so the noise statistics follow the detected signal.
pub fn mmse_equalize(frame: &ReceivedFrame, cfg: &DetectorConfig) -> Result<MmseDecision> {
    let taps = cfg.require_csi()?;
    if cfg.memory == 0 {
        return Err(Error::InvalidParam("mmse_equalize needs memory >= 1".into()));
    }
    let n = frame.counts.len();
    if n == 0 {
        return Err(Error::EmptyInput("frame"));
    }

    let m = frame.molecules_per_symbol;
    let p = &taps.taps;
    let k_taps = p.len();
    let floor = noise_floor(m, taps);
    let mut decided = vec![0u8; n];
    let mut ridge_activations = 0usize;

    let mut cov = vec![0.0f64; cfg.memory * cfg.memory];
    let mut rhs = vec![0.0f64; cfg.memory];
    let mut resid = vec![0.0f64; cfg.memory];

    for k in 0..n {
        let len = cfg.memory.min(n - k);

        // Residual window: observations minus decided-bit and prior means.
        for i in 0..len {
            let slot = k + i;
            let mut mu = 0.0;
            // Decided bits: slot k-j contributes tap p_{i+j} to window row i.
            for j in 1..=k {
                if i + j >= k_taps {
                    break;
                }
                if decided[k - j] == 1 {
                    mu += m * p[i + j];
                }
            }
            // Unknown bits (current and future) at prior mean 1/2.
            for j in 0..=i.min(k_taps - 1) {
                mu += 0.5 * m * p[i - j];
            }
            resid[i] = frame.counts[slot] - mu;
        }

        // Covariance: bit uncertainty (0.25 M^2 G G^T) plus arrival noise on
        // the diagonal. G[i][u] = p_{i-u} is the tap from unknown bit u to
        // window row i.
        for i in 0..len {
            for j in 0..=i {
                let mut acc = 0.0;
                for u in 0..len {
                    let gi = if i >= u && i - u < k_taps { p[i - u] } else { 0.0 };
                    let gj = if j >= u && j - u < k_taps { p[j - u] } else { 0.0 };
                    acc += gi * gj;
                }
                let v = 0.25 * m * m * acc;
                cov[i * cfg.memory + j] = v;
                cov[j * cfg.memory + i] = v;
            }
            let noise = match frame.noise_model {
                NoiseModel::AwgnDrift { variance } => variance,
                _ => {
                    let mut var = 0.0;
                    for j in 1..=k {
                        if i + j >= k_taps {
                            break;
                        }
                        if decided[k - j] == 1 {
                            var += m * p[i + j] * (1.0 - p[i + j]);
                        }
                    }
                    for j in 0..=i.min(k_taps - 1) {
                        var += 0.5 * m * p[i - j] * (1.0 - p[i - j]);
                    }
                    var
                }
            };
            cov[i * cfg.memory + i] += noise + floor;
        }

        // Cross-covariance with the current bit: 0.25 M * (first column of G).
        for (i, r) in rhs.iter_mut().enumerate().take(len) {
            *r = if i < k_taps { 0.25 * m * p[i] } else { 0.0 };
        }

        let mut work = cov.clone();
        let solution = match cholesky_solve(&mut work, &rhs, len, cfg.memory, false) {
            Ok(x) => x,
            Err(_) => {
                ridge_activations += 1;
                let mut ridged = cov.clone();
                let mean_diag: f64 =
                    (0..len).map(|i| ridged[i * cfg.memory + i]).sum::<f64>() / len as f64;
                for i in 0..len {
                    ridged[i * cfg.memory + i] += 1e-9 * mean_diag;
                }
                cholesky_solve(&mut ridged, &rhs, len, cfg.memory, true)?
            }
        };

        let estimate: f64 = solution.iter().zip(&resid).map(|(c, w)| c * w).sum();
        decided[k] = u8::from(estimate > 0.0);
    }

    Ok(MmseDecision { bits: decided, ridge_activations })
}

/// In-place Cholesky solve of the leading `len x len` block (row stride
/// `stride`). Fails when the matrix is not positive definite or, unless
/// `ridged`, when the factor's diagonal spread implies conditioning beyond
/// 1e12.
fn cholesky_solve(
    a: &mut [f64],
    b: &[f64],
    len: usize,
    stride: usize,
    ridged: bool,
) -> Result<Vec<f64>> {
    let mut diag_min = f64::INFINITY;
    let mut diag_max = 0.0f64;
    for i in 0..len {
        for j in 0..=i {
            let mut sum = a[i * stride + j];
            for k in 0..j {
                sum -= a[i * stride + k] * a[j * stride + k];
            }
            if i == j {
                if sum <= 0.0 {
                    return Err(Error::InvalidParam("covariance not positive definite".into()));
                }
                let l = math::sqrt(sum);
                diag_min = diag_min.min(l);
                diag_max = diag_max.max(l);
                a[i * stride + j] = l;
            } else {
                a[i * stride + j] = sum / a[j * stride + j];
            }
        }
    }
    if !ridged && (diag_max / diag_min) * (diag_max / diag_min) > 1e12 {
        return Err(Error::InvalidParam("covariance conditioning beyond 1e12".into()));
    }

    let mut x = b[..len].to_vec();
    for i in 0..len {
        for k in 0..i {
            let t = x[k];
            x[i] -= a[i * stride + k] * t;
        }
        x[i] /= a[i * stride + i];
    }
    for i in (0..len).rev() {
        for k in i + 1..len {
            let t = x[k];
            x[i] -= a[k * stride + i] * t;
        }
        x[i] /= a[i * stride + i];
    }
    Ok(x)
}

/// Decision feedback: subtract the ISI explained by the last `I` decisions,
/// then threshold. Per-symbol cost is fixed by `I`, not by the tap count.
///
/// The decision for symbol `k` reads the slot where that symbol's energy
/// peaks (the channel cursor). Not-yet-decided symbols between `k` and the
/// cursor slot, and taps beyond the feedback window, enter as mean-field
/// constants.
pub fn dff_detect(frame: &ReceivedFrame, cfg: &DetectorConfig) -> Result<Vec<u8>> {
    let taps = cfg.require_csi()?;
    let n = frame.counts.len();
    if n == 0 {
        return Err(Error::EmptyInput("frame"));
    }
    let m = frame.molecules_per_symbol;
    let p = &taps.taps;
    let cursor = taps.peak_index();
    let threshold = 0.5 * m * p[cursor];

    // Mean-field constants: undecided symbols after k (taps before the
    // cursor) and symbols past the feedback window (taps after cursor + I).
    let mut bias = 0.0;
    for &pu in p.iter().take(cursor) {
        bias += 0.5 * m * pu;
    }
    for &pj in p.iter().skip(cursor + cfg.memory + 1) {
        bias += 0.5 * m * pj;
    }

    let mut decided = vec![0u8; n];
    for k in 0..n {
        let slot = k + cursor;
        if slot >= n {
            // The cursor slot was never observed; fall back to the prior.
            decided[k] = 0;
            continue;
        }
        let mut isi = bias;
        for j in 1..=cfg.memory.min(k) {
            if cursor + j >= p.len() {
                break;
            }
            if decided[k - j] == 1 {
                isi += m * p[cursor + j];
            }
        }
        decided[k] = u8::from(frame.counts[slot] - isi > threshold);
    }
    Ok(decided)
}

/// Non-coherent difference detection: `bit_k = 1` iff
/// `r_k - r_{k-1} > threshold`, with `r_{-1} = 0` and strict inequality.
pub fn diff_detect(frame: &ReceivedFrame, cfg: &DetectorConfig) -> Result<Vec<u8>> {
    if frame.counts.is_empty() {
        return Err(Error::EmptyInput("frame"));
    }
    let mut prev = 0.0;
    let mut bits = Vec::with_capacity(frame.counts.len());
    for &r in &frame.counts {
        bits.push(u8::from(r - prev > cfg.difference_threshold));
        prev = r;
    }
    Ok(bits)
}
