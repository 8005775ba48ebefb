//! Bit-stream to molecule-emission mapping.
//!
//! Baseband schemes modulate either the per-slot molecule count, the release
//! offset inside a slot, a burst frequency, or the molecule type; the
//! multi-type schemes (alternating-slot and transition keying) trade chemical
//! alphabet size for ISI suppression. Also houses the reactive transmit
//! pulse shaper and the oscillating-transmitter passband model.

use alloc::vec;
use alloc::vec::Vec;

use crate::channel::{ChannelParams, Dimension};
use crate::math;
use crate::{Error, Result};

/// One symbol of the molecule alphabet. Rendered as 'A', 'B', ... in text
/// formats; `POISON` is reserved for the antagonist species emitted by the
/// pulse shaper.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoleculeType(pub u8);

impl MoleculeType {
    pub const A: MoleculeType = MoleculeType(0);
    pub const B: MoleculeType = MoleculeType(1);
    pub const POISON: MoleculeType = MoleculeType(255);

    pub fn symbol(&self) -> char {
        if *self == Self::POISON {
            'P'
        } else {
            (b'A' + self.0) as char
        }
    }
}

/// Slot timing and energy budget shared by all schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    /// Symbol period t_s in seconds.
    pub symbol_period: f64,
    /// Molecule budget M for an "on" symbol.
    pub molecules_per_symbol: u64,
}

impl Frame {
    pub fn new(symbol_period: f64, molecules_per_symbol: u64) -> Result<Self> {
        if !(symbol_period > 0.0) {
            return Err(Error::InvalidParam("symbol_period must be > 0".into()));
        }
        if molecules_per_symbol == 0 {
            return Err(Error::InvalidParam("molecules_per_symbol must be >= 1".into()));
        }
        Ok(Frame { symbol_period, molecules_per_symbol })
    }
}

/// A single timed release.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Emission {
    pub time: f64,
    pub molecule_type: MoleculeType,
    pub count: u64,
}

/// Transmitter output: timed, typed, counted releases in emission order.
#[derive(Debug, Clone, PartialEq)]
pub struct EmissionSchedule {
    pub events: Vec<Emission>,
    pub frame: Frame,
}

impl EmissionSchedule {
    /// Total molecules released inside each symbol slot.
    pub fn per_symbol_totals(&self, symbols: usize) -> Vec<u64> {
        let mut totals = vec![0u64; symbols];
        for e in &self.events {
            let slot = (e.time / self.frame.symbol_period) as usize;
            if slot < symbols {
                totals[slot] += e.count;
            }
        }
        totals
    }

    pub fn validate(&self) -> Result<()> {
        let mut prev = 0.0;
        for e in &self.events {
            if !(e.time >= 0.0) {
                return Err(Error::InvalidParam("emission times must be >= 0".into()));
            }
            if e.time < prev {
                return Err(Error::InvalidParam("emission times must be nondecreasing".into()));
            }
            prev = e.time;
        }
        Ok(())
    }
}

/// Baseband modulation schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    /// Binary concentration keying: bit-1 releases the full budget.
    Bcsk,
    /// M-ary concentration keying with `levels` amplitude steps.
    CskMary { levels: u8 },
    /// Binary pulse-position keying: bit-1 delays the release by `offset`.
    Ppm { offset: f64 },
    /// Binary frequency keying: bit-1 emits a clipped sinusoidal burst.
    Fsk { frequency: f64 },
    /// Molecule-shift keying: the bit value picks the molecule type.
    Mosk,
    /// Alternating-type concentration keying: type by slot parity.
    Mcsk2,
    /// Transition-shift keying: bit-1 type switches ahead of a 1 -> 0 edge.
    Mtsk,
}

/// Samples per sinusoid cycle used to discretize FSK bursts.
const FSK_SAMPLES_PER_CYCLE: f64 = 20.0;

/// Maps `bits` onto an emission schedule under `scheme`.
pub fn modulate(scheme: &Scheme, bits: &[u8], frame: &Frame) -> Result<EmissionSchedule> {
    if bits.is_empty() {
        return Err(Error::EmptyInput("bit sequence"));
    }
    if bits.iter().any(|&b| b > 1) {
        return Err(Error::InvalidParam("bits must be 0 or 1".into()));
    }
    let t_s = frame.symbol_period;
    let m = frame.molecules_per_symbol;
    let mut events = Vec::new();

    match *scheme {
        Scheme::Bcsk => {
            for (k, &b) in bits.iter().enumerate() {
                if b == 1 {
                    events.push(Emission {
                        time: k as f64 * t_s,
                        molecule_type: MoleculeType::A,
                        count: m,
                    });
                }
            }
        }
        Scheme::CskMary { levels } => {
            if levels < 2 || !levels.is_power_of_two() {
                return Err(Error::InvalidParam(
                    "csk levels must be a power of two >= 2".into(),
                ));
            }
            let bits_per_symbol = levels.trailing_zeros() as usize;
            if !bits.len().is_multiple_of(bits_per_symbol) {
                return Err(Error::LengthMismatch {
                    expected: bits.len().div_ceil(bits_per_symbol) * bits_per_symbol,
                    got: bits.len(),
                });
            }
            for (k, chunk) in bits.chunks(bits_per_symbol).enumerate() {
                let value = chunk.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b));
                let count = m * value / (u64::from(levels) - 1);
                if count > 0 {
                    events.push(Emission {
                        time: k as f64 * t_s,
                        molecule_type: MoleculeType::A,
                        count,
                    });
                }
            }
        }
        Scheme::Ppm { offset } => {
            if !(offset > 0.0 && offset <= t_s / 2.0) {
                return Err(Error::InvalidParam(
                    "ppm offset must satisfy 0 < offset <= t_s / 2".into(),
                ));
            }
            for (k, &b) in bits.iter().enumerate() {
                let delay = if b == 1 { offset } else { 0.0 };
                events.push(Emission {
                    time: k as f64 * t_s + delay,
                    molecule_type: MoleculeType::A,
                    count: m,
                });
            }
        }
        Scheme::Fsk { frequency } => {
            if !(frequency * t_s >= 1.0) {
                return Err(Error::InvalidParam(
                    "fsk frequency must give at least one cycle per symbol (f * t_s >= 1)".into(),
                ));
            }
            let dt = 1.0 / (FSK_SAMPLES_PER_CYCLE * frequency);
            let samples = (t_s / dt) as usize;
            for (k, &b) in bits.iter().enumerate() {
                if b != 1 {
                    continue;
                }
                let slot_start = k as f64 * t_s;
                for i in 0..samples {
                    let phase = math::sin(2.0 * math::PI * frequency * (i as f64 * dt));
                    if phase <= 0.0 {
                        continue;
                    }
                    let count = (m as f64 * phase / samples as f64) as u64;
                    if count > 0 {
                        events.push(Emission {
                            time: slot_start + i as f64 * dt,
                            molecule_type: MoleculeType::A,
                            count,
                        });
                    }
                }
            }
        }
        Scheme::Mosk => {
            for (k, &b) in bits.iter().enumerate() {
                events.push(Emission {
                    time: k as f64 * t_s,
                    molecule_type: if b == 1 { MoleculeType::B } else { MoleculeType::A },
                    count: m,
                });
            }
        }
        Scheme::Mcsk2 => {
            for (k, &b) in bits.iter().enumerate() {
                if b == 1 {
                    // Slots are numbered from 1: odd slots use type A, even B.
                    let ty = if k % 2 == 0 { MoleculeType::A } else { MoleculeType::B };
                    events.push(Emission { time: k as f64 * t_s, molecule_type: ty, count: m });
                }
            }
        }
        Scheme::Mtsk => {
            for (k, &b) in bits.iter().enumerate() {
                if b != 1 {
                    continue;
                }
                // Switch type when the next symbol ends a run of ones; the
                // final symbol has no successor and defaults to type A.
                let ty = match bits.get(k + 1) {
                    Some(0) => MoleculeType::B,
                    _ => MoleculeType::A,
                };
                events.push(Emission { time: k as f64 * t_s, molecule_type: ty, count: m });
            }
        }
    }

    Ok(EmissionSchedule { events, frame: *frame })
}

/// Inverts [`modulate`] from a noiseless schedule.
pub fn demodulate_noiseless(
    scheme: &Scheme,
    schedule: &EmissionSchedule,
    symbols: usize,
) -> Result<Vec<u8>> {
    let t_s = schedule.frame.symbol_period;
    let m = schedule.frame.molecules_per_symbol;
    let mut slot_count = vec![0u64; symbols];
    let mut slot_type: Vec<Option<MoleculeType>> = vec![None; symbols];
    let mut slot_offset = vec![0.0f64; symbols];
    for e in &schedule.events {
        let slot = (e.time / t_s) as usize;
        if slot >= symbols {
            return Err(Error::InvalidParam("emission beyond the last symbol slot".into()));
        }
        slot_count[slot] += e.count;
        slot_type[slot] = Some(e.molecule_type);
        slot_offset[slot] = e.time - slot as f64 * t_s;
    }

    let bits = match *scheme {
        Scheme::Bcsk | Scheme::Mcsk2 | Scheme::Mtsk | Scheme::Fsk { .. } => slot_count
            .iter()
            .map(|&c| u8::from(c > 0))
            .collect(),
        Scheme::Ppm { offset } => slot_offset
            .iter()
            .map(|&off| u8::from(off >= offset / 2.0))
            .collect(),
        Scheme::Mosk => slot_type
            .iter()
            .map(|ty| match ty {
                Some(t) if *t == MoleculeType::B => 1,
                _ => 0,
            })
            .collect(),
        Scheme::CskMary { levels } => {
            let bits_per_symbol = levels.trailing_zeros() as usize;
            let mut out = Vec::with_capacity(symbols * bits_per_symbol);
            for &c in &slot_count {
                let value =
                    (c as f64 * f64::from(levels - 1) / m as f64 + 0.5) as u64;
                for i in (0..bits_per_symbol).rev() {
                    out.push(((value >> i) & 1) as u8);
                }
            }
            out
        }
    };
    Ok(bits)
}

/// Uniformly sampled waveform; `samples[i]` is a rate density at `i * dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWaveform {
    pub dt: f64,
    pub samples: Vec<f64>,
}

impl SampledWaveform {
    /// Splits into nonnegative primary and antagonist (poison) components.
    pub fn split_signed(&self) -> (Vec<f64>, Vec<f64>) {
        let primary = self.samples.iter().map(|&v| v.max(0.0)).collect();
        let poison = self.samples.iter().map(|&v| (-v).max(0.0)).collect();
        (primary, poison)
    }
}

/// Channel-inverting transmit waveform: a unit impulse followed by a poison
/// tail `-(d / sqrt(D)) t^(-3/2)` for `t >= epsilon`.
///
/// The tail diverges as `t -> 0`, so a positive cutoff is mandatory; bins in
/// `(0, epsilon)` stay zero. The impulse carries density `1/dt` (unit area).
pub fn shaped_pulse(
    d: f64,
    big_d: f64,
    dt: f64,
    len: usize,
    epsilon: f64,
) -> Result<SampledWaveform> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParam(
            "pulse-shaping cutoff epsilon must be > 0 (the tail diverges at t = 0)".into(),
        ));
    }
    if !(d > 0.0 && big_d > 0.0) {
        return Err(Error::InvalidParam("shaped_pulse requires d > 0 and D > 0".into()));
    }
    if !(dt > 0.0) || len == 0 {
        return Err(Error::InvalidParam("shaped_pulse requires dt > 0 and len >= 1".into()));
    }
    let scale = d / math::sqrt(big_d);
    let mut samples = vec![0.0; len];
    samples[0] = 1.0 / dt;
    for (i, s) in samples.iter_mut().enumerate().skip(1) {
        let t = i as f64 * dt;
        if t >= epsilon {
            *s = -scale * math::powf(t, -1.5);
        }
    }
    Ok(SampledWaveform { dt, samples })
}

/// Oscillating-transmitter configuration: each data stream vibrates the
/// release point at its own carrier frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct CarrierConfig {
    /// Rest distance d0 (µm).
    pub base_distance: f64,
    /// Vibration amplitude A (µm), strictly below d0.
    pub oscillation_amplitude: f64,
    /// One carrier frequency per stream (Hz), pairwise distinct.
    pub carrier_frequencies: Vec<f64>,
    /// Continuous emission rate per stream (molecules/s).
    pub emission_rate: f64,
}

impl CarrierConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.base_distance > 0.0) {
            return Err(Error::InvalidParam("base_distance must be > 0".into()));
        }
        if !(self.oscillation_amplitude >= 0.0
            && self.oscillation_amplitude < self.base_distance)
        {
            return Err(Error::InvalidParam(
                "oscillation_amplitude must satisfy 0 <= A < base_distance".into(),
            ));
        }
        if self.carrier_frequencies.is_empty() {
            return Err(Error::EmptyInput("carrier_frequencies"));
        }
        if self.carrier_frequencies.iter().any(|&f| !(f > 0.0)) {
            return Err(Error::InvalidParam("carrier frequencies must be > 0".into()));
        }
        for (i, f) in self.carrier_frequencies.iter().enumerate() {
            if self.carrier_frequencies[i + 1..].iter().any(|g| g == f) {
                return Err(Error::InvalidParam("carrier frequencies must be distinct".into()));
            }
        }
        if !(self.emission_rate > 0.0) {
            return Err(Error::InvalidParam("emission_rate must be > 0".into()));
        }
        Ok(())
    }
}

/// Received molecule-arrival-rate trace for continuously emitting streams
/// whose distance oscillates as `d_i(t) = d0 - A sin(2 pi f_i t)`.
///
/// Quasi-static superposition: molecules released at time `u` from distance
/// `d_i(u)` arrive at rate `absorb_rate(d_i(u), t - u)`.
pub fn passband_signal(
    cfg: &CarrierConfig,
    params: &ChannelParams,
    duration: f64,
    sample_rate: f64,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    params.validate()?;
    if !(duration > 0.0) {
        return Err(Error::InvalidParam("duration must be > 0".into()));
    }
    let f_max = cfg
        .carrier_frequencies
        .iter()
        .cloned()
        .fold(0.0f64, f64::max);
    if !(sample_rate > 4.0 * f_max) {
        return Err(Error::NyquistViolation { sample_rate, required: 4.0 * f_max });
    }

    let dt = 1.0 / sample_rate;
    let n = (duration * sample_rate) as usize;
    let per_release = cfg.emission_rate * dt;
    let mut distances = vec![0.0f64; n];
    let mut trace = vec![0.0f64; n];

    for &f_c in &cfg.carrier_frequencies {
        for (m, dist) in distances.iter_mut().enumerate() {
            *dist = cfg.base_distance
                - cfg.oscillation_amplitude * math::sin(2.0 * math::PI * f_c * m as f64 * dt);
        }
        for (k, out) in trace.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (m, &dist) in distances.iter().enumerate().take(k) {
                acc += absorb_rate_at(params, dist, (k - m) as f64 * dt);
            }
            *out += per_release * acc;
        }
    }
    Ok(trace)
}

/// First-passage rate with the distance overridden, for moving transmitters.
fn absorb_rate_at(params: &ChannelParams, distance: f64, t: f64) -> f64 {
    let factor = match params.dimension {
        Dimension::One => 1.0,
        Dimension::Three => params.receiver_radius / (distance + params.receiver_radius),
    };
    factor * crate::channel::first_passage_density(distance, params.diffusivity, t)
}

/// Magnitude of the DFT of a uniformly sampled trace, DC bin first.
pub fn spectrum(trace: &[f64]) -> Result<Vec<f64>> {
    if trace.is_empty() {
        return Err(Error::EmptyInput("trace"));
    }
    let n = trace.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut re = 0.0;
        let mut im = 0.0;
        for (m, &x) in trace.iter().enumerate() {
            let phi = -2.0 * math::PI * (k as f64) * (m as f64) / (n as f64);
            re += x * math::cos(phi);
            im += x * math::sin(phi);
        }
        out.push(math::sqrt(re * re + im * im));
    }
    Ok(out)
}
