//! Particle-level Monte Carlo of the diffusion channel.
//!
//! Molecules perform an Euler random walk with Gaussian increments of
//! per-axis variance `2 D dt`, optional drift toward the receiver, and
//! pre-drawn exponential lifetimes for first-order degradation. Absorption is
//! detected by the post-step position test plus a Brownian-bridge crossing
//! test for the interval between step endpoints; without the bridge term a
//! discretely monitored boundary under-counts crossings by an amount far
//! above Monte Carlo noise at any affordable step size.
//!
//! All randomness flows from a counter-based stream RNG, so a simulation is
//! a pure function of `(params, config, partition)` and partitions can run
//! on any number of workers and merge deterministically.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, StandardNormal};

use crate::channel::{ChannelParams, Dimension};
use crate::math;
use crate::{Error, Result};

/// Monte Carlo run description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Walk step in seconds.
    pub time_step: f64,
    /// Horizon after which unabsorbed molecules count as surviving.
    pub max_time: f64,
    /// Number of emitted molecules.
    pub particle_count: u64,
    /// Master seed; partitions derive independent substreams from it.
    pub rng_seed: u64,
    /// Skip the `time_step <= d^2 / 100 D` stability check.
    pub allow_unstable: bool,
    /// Apply the Brownian-bridge crossing test between step endpoints.
    pub bridge_absorption: bool,
}

impl SimConfig {
    pub fn new(time_step: f64, max_time: f64, particle_count: u64, rng_seed: u64) -> Self {
        SimConfig {
            time_step,
            max_time,
            particle_count,
            rng_seed,
            allow_unstable: false,
            bridge_absorption: true,
        }
    }

    /// Step-size heuristic: `d^2 / 100 D`, tightened by the receiver radius
    /// in 3-D so a step cannot straddle the whole sphere.
    pub fn recommended_time_step(params: &ChannelParams) -> f64 {
        let scale = match params.dimension {
            Dimension::One => params.distance,
            Dimension::Three => params.distance.min(params.receiver_radius),
        };
        scale * scale / (100.0 * params.diffusivity)
    }

    fn validate(&self, params: &ChannelParams) -> Result<()> {
        if !(self.time_step > 0.0) {
            return Err(Error::InvalidParam("time_step must be > 0".into()));
        }
        if !(self.max_time >= self.time_step) {
            return Err(Error::InvalidParam("max_time must be >= time_step".into()));
        }
        if self.particle_count == 0 {
            return Err(Error::InvalidParam("particle_count must be >= 1".into()));
        }
        let limit = params.distance * params.distance / (100.0 * params.diffusivity);
        if !self.allow_unstable && self.time_step > limit * (1.0 + 1e-12) {
            return Err(Error::UnstableTimeStep { dt: self.time_step, limit });
        }
        Ok(())
    }
}

/// Outcome of one simulation: per-molecule absorption times plus degradation
/// bookkeeping. `None` means the molecule neither got absorbed nor counts as
/// degraded-in-flight within the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrivalRecord {
    pub absorption_times: Vec<Option<f64>>,
    pub degraded_count: u64,
    pub emitted_count: u64,
}

impl ArrivalRecord {
    pub fn absorbed_count(&self) -> u64 {
        self.absorption_times.iter().filter(|t| t.is_some()).count() as u64
    }

    pub fn surviving_count(&self) -> u64 {
        self.emitted_count - self.absorbed_count() - self.degraded_count
    }

    /// Fraction of emitted molecules absorbed no later than `t`.
    pub fn empirical_cdf(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::InvalidParam("empirical_cdf requires t >= 0".into()));
        }
        let hits = self
            .absorption_times
            .iter()
            .filter(|at| matches!(at, Some(x) if *x <= t))
            .count();
        Ok(hits as f64 / self.emitted_count as f64)
    }

    /// Absorption times in ascending order, for histogram export.
    pub fn sorted_times(&self) -> Vec<f64> {
        let mut times: Vec<f64> = self.absorption_times.iter().filter_map(|t| *t).collect();
        times.sort_by(|a, b| a.partial_cmp(b).expect("absorption times are finite"));
        times
    }

    /// Concatenates partition records in the order given.
    pub fn merge<I: IntoIterator<Item = ArrivalRecord>>(parts: I) -> ArrivalRecord {
        let mut out = ArrivalRecord {
            absorption_times: Vec::new(),
            degraded_count: 0,
            emitted_count: 0,
        };
        for p in parts {
            out.absorption_times.extend(p.absorption_times);
            out.degraded_count += p.degraded_count;
            out.emitted_count += p.emitted_count;
        }
        out
    }
}

/// Runs the full walk on a single RNG stream.
pub fn simulate(params: &ChannelParams, cfg: &SimConfig) -> Result<ArrivalRecord> {
    simulate_partition(params, cfg, 0, 1)
}

/// Runs the molecules assigned to `partition` out of `partition_count`
/// equal-as-possible shares, on an independent RNG substream. Merging all
/// partitions in index order reproduces one deterministic record regardless
/// of scheduling.
pub fn simulate_partition(
    params: &ChannelParams,
    cfg: &SimConfig,
    partition: u64,
    partition_count: u64,
) -> Result<ArrivalRecord> {
    params.validate()?;
    cfg.validate(params)?;
    if partition_count == 0 || partition >= partition_count {
        return Err(Error::InvalidParam("partition index out of range".into()));
    }

    let base = cfg.particle_count / partition_count;
    let extra = cfg.particle_count % partition_count;
    let count = base + u64::from(partition < extra);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    rng.set_stream(partition);

    let lifetime_dist = if params.degradation_rate > 0.0 {
        Some(Exp::new(params.degradation_rate).expect("validated rate"))
    } else {
        None
    };

    let mut absorption_times = Vec::with_capacity(count as usize);
    let mut degraded: u64 = 0;

    for _ in 0..count {
        let lifetime = lifetime_dist
            .as_ref()
            .map(|d| d.sample(&mut rng))
            .unwrap_or(f64::INFINITY);
        let outcome = match params.dimension {
            Dimension::One => walk_1d(params, cfg, lifetime, &mut rng),
            Dimension::Three => walk_3d(params, cfg, lifetime, &mut rng),
        };
        match outcome {
            Outcome::Absorbed(t) => absorption_times.push(Some(t)),
            Outcome::Degraded => {
                absorption_times.push(None);
                degraded += 1;
            }
            Outcome::Survived => absorption_times.push(None),
        }
    }

    Ok(ArrivalRecord {
        absorption_times,
        degraded_count: degraded,
        emitted_count: count,
    })
}

enum Outcome {
    Absorbed(f64),
    Degraded,
    Survived,
}

fn walk_1d(params: &ChannelParams, cfg: &SimConfig, lifetime: f64, rng: &mut ChaCha8Rng) -> Outcome {
    let d2 = 2.0 * params.diffusivity;
    let horizon = cfg.max_time.min(lifetime);
    let mut x = params.distance;
    let mut t = 0.0;

    // Step times come from the integer grid `k * dt` (no accumulation drift),
    // so recorded absorption times land exactly on grid multiples.
    let mut k: u64 = 0;
    while t < horizon {
        let t_next = ((k + 1) as f64 * cfg.time_step).min(horizon);
        let dt = t_next - t;
        if dt <= 0.0 {
            break;
        }
        let z: f64 = rng.sample(StandardNormal);
        let x_next = x - params.drift * dt + math::sqrt(d2 * dt) * z;
        if x_next <= 0.0 {
            return Outcome::Absorbed(t_next);
        }
        if cfg.bridge_absorption {
            let p_cross = math::exp(-x * x_next / (params.diffusivity * dt));
            if p_cross > 0.0 && rng.gen::<f64>() < p_cross {
                return Outcome::Absorbed(t_next);
            }
        }
        x = x_next;
        t = t_next;
        k += 1;
    }
    if lifetime <= cfg.max_time {
        Outcome::Degraded
    } else {
        Outcome::Survived
    }
}

fn walk_3d(params: &ChannelParams, cfg: &SimConfig, lifetime: f64, rng: &mut ChaCha8Rng) -> Outcome {
    let d2 = 2.0 * params.diffusivity;
    let r_abs = params.receiver_radius;
    let horizon = cfg.max_time.min(lifetime);

    // Receiver sphere centred at the origin; transmitter on the +x axis at
    // surface distance `d`. Drift points toward the receiver.
    let mut px = params.distance + r_abs;
    let mut py = 0.0f64;
    let mut pz = 0.0f64;
    let mut dist = params.distance;
    let mut t = 0.0;

    let mut k: u64 = 0;
    while t < horizon {
        let t_next = ((k + 1) as f64 * cfg.time_step).min(horizon);
        let dt = t_next - t;
        if dt <= 0.0 {
            break;
        }
        let sigma = math::sqrt(d2 * dt);
        let zx: f64 = rng.sample(StandardNormal);
        let zy: f64 = rng.sample(StandardNormal);
        let zz: f64 = rng.sample(StandardNormal);
        let nx = px - params.drift * dt + sigma * zx;
        let ny = py + sigma * zy;
        let nz = pz + sigma * zz;
        let r_next = math::sqrt(nx * nx + ny * ny + nz * nz);
        if r_next <= r_abs {
            return Outcome::Absorbed(t_next);
        }
        let dist_next = r_next - r_abs;
        if cfg.bridge_absorption {
            // Locally flat boundary approximation between the endpoint
            // distances to the sphere surface.
            let p_cross = math::exp(-dist * dist_next / (params.diffusivity * dt));
            if p_cross > 0.0 && rng.gen::<f64>() < p_cross {
                return Outcome::Absorbed(t_next);
            }
        }
        px = nx;
        py = ny;
        pz = nz;
        dist = dist_next;
        t = t_next;
        k += 1;
    }
    if lifetime <= cfg.max_time {
        Outcome::Degraded
    } else {
        Outcome::Survived
    }
}

/// Draws one first-passage time of the 1-D drift channel directly from its
/// arrival law instead of stepping a walk.
///
/// For `v > 0` this is the inverse-Gaussian law with mean `d/v` and shape
/// `d^2/2D`; for `v = 0` it degenerates to the heavy-tailed `d^2/(2D Z^2)`
/// form with `Z` standard normal.
pub fn first_passage_sample_1d<R: Rng + ?Sized>(
    d: f64,
    big_d: f64,
    v: f64,
    rng: &mut R,
) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::InvalidParam("first_passage_sample_1d requires d > 0".into()));
    }
    if !(big_d > 0.0) {
        return Err(Error::InvalidParam("first_passage_sample_1d requires D > 0".into()));
    }
    if !(v >= 0.0) {
        return Err(Error::InvalidParam("first_passage_sample_1d requires v >= 0".into()));
    }
    if v == 0.0 {
        loop {
            let z: f64 = rng.sample(StandardNormal);
            if z != 0.0 {
                return Ok(d * d / (2.0 * big_d * z * z));
            }
        }
    }
    let ig = rand_distr::InverseGaussian::new(d / v, d * d / (2.0 * big_d))
        .expect("parameters validated above");
    Ok(ig.sample(rng))
}
