//! Closed-form diffusion channel math.
//!
//! Models a point transmitter releasing molecules into an unbounded medium,
//! observed either by a point in 1-D with an absorbing boundary at the origin
//! or by a perfectly absorbing sphere in 3-D. First-order molecule
//! degradation (rate `lambda`) is handled by survival-weighted quadrature of
//! the first-passage rate.

use alloc::vec::Vec;

pub use num_complex::Complex64;

use crate::math;
use crate::quad;
use crate::{Error, Result};

/// Speed of light in µm/s, for the electromagnetic pathloss comparison.
pub const SPEED_OF_LIGHT_UM_PER_S: f64 = 2.997_924_58e14;

/// Spatial dimension of the diffusion environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    One,
    Three,
}

impl Dimension {
    /// Heat-kernel exponent: the `a` in `(4 pi D t)^(-a/2)`.
    #[inline]
    pub fn exponent(self) -> f64 {
        match self {
            Dimension::One => 1.0,
            Dimension::Three => 3.0,
        }
    }
}

/// Physical description of one transmitter-receiver link.
///
/// Distances are in µm, diffusivity in µm²/s, drift in µm/s toward the
/// receiver, degradation rate in 1/s. In 3-D, `distance` is measured from the
/// transmitter to the receiver *surface*.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub distance: f64,
    pub diffusivity: f64,
    pub receiver_radius: f64,
    pub drift: f64,
    pub dimension: Dimension,
    pub degradation_rate: f64,
}

impl ChannelParams {
    /// 1-D link: absorbing boundary at the origin, transmitter at `distance`.
    pub fn one_dim(distance: f64, diffusivity: f64) -> Result<Self> {
        let p = ChannelParams {
            distance,
            diffusivity,
            receiver_radius: 0.0,
            drift: 0.0,
            dimension: Dimension::One,
            degradation_rate: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    /// 3-D link: absorbing sphere of radius `receiver_radius`, transmitter at
    /// `distance` from the sphere surface.
    pub fn three_dim(distance: f64, receiver_radius: f64, diffusivity: f64) -> Result<Self> {
        let p = ChannelParams {
            distance,
            diffusivity,
            receiver_radius,
            drift: 0.0,
            dimension: Dimension::Three,
            degradation_rate: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_drift(mut self, drift: f64) -> Result<Self> {
        self.drift = drift;
        self.validate()?;
        Ok(self)
    }

    pub fn with_degradation_rate(mut self, lambda: f64) -> Result<Self> {
        self.degradation_rate = lambda;
        self.validate()?;
        Ok(self)
    }

    /// Sets the degradation rate from a half-life: `lambda = ln 2 / half_life`.
    pub fn with_half_life(mut self, half_life: f64) -> Result<Self> {
        if !(half_life > 0.0) {
            return Err(Error::InvalidParam("half_life must be > 0".into()));
        }
        self.degradation_rate = math::LN_2 / half_life;
        self.validate()?;
        Ok(self)
    }

    /// Half-life equivalent of the degradation rate (infinite when zero).
    pub fn half_life(&self) -> f64 {
        if self.degradation_rate == 0.0 {
            f64::INFINITY
        } else {
            math::LN_2 / self.degradation_rate
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.distance > 0.0) {
            return Err(Error::InvalidParam("distance must be > 0".into()));
        }
        if !(self.diffusivity > 0.0) {
            return Err(Error::InvalidParam("diffusivity must be > 0".into()));
        }
        if !(self.degradation_rate >= 0.0) {
            return Err(Error::InvalidParam("degradation_rate must be >= 0".into()));
        }
        if !(self.drift >= 0.0) {
            return Err(Error::InvalidParam("drift must be >= 0".into()));
        }
        if self.dimension == Dimension::Three && !(self.receiver_radius > 0.0) {
            return Err(Error::InvalidParam(
                "receiver_radius must be > 0 in a 3-D channel".into(),
            ));
        }
        Ok(())
    }

    /// Geometric capture factor: `r_r / (d + r_r)` in 3-D, 1 in 1-D.
    #[inline]
    pub fn capture_factor(&self) -> f64 {
        match self.dimension {
            Dimension::One => 1.0,
            Dimension::Three => self.receiver_radius / (self.distance + self.receiver_radius),
        }
    }

    /// Hitting density `h(d,t) = (4 pi D t)^(-a/2) exp(-d^2/4Dt)` of a freely
    /// diffusing point source observed at distance `d`, with `a` equal to the
    /// spatial dimension.
    pub fn hitting_pdf(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::InvalidParam("hitting_pdf requires t > 0".into()));
        }
        let a = self.dimension.exponent();
        let arg = self.distance * self.distance / (4.0 * self.diffusivity * t);
        Ok(math::powf(4.0 * math::PI * self.diffusivity * t, -a / 2.0) * math::exp(-arg))
    }

    /// First-passage rate to the absorbing receiver at time `t` (1/s).
    pub fn absorb_rate(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::InvalidParam("absorb_rate requires t > 0".into()));
        }
        Ok(self.capture_factor() * first_passage_density(self.distance, self.diffusivity, t))
    }

    /// Probability that a molecule released at t = 0 has been absorbed by
    /// time `t`, ignoring degradation.
    pub fn absorb_cdf(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::InvalidParam("absorb_cdf requires t >= 0".into()));
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        let u = self.distance / math::sqrt(4.0 * self.diffusivity * t);
        Ok(self.capture_factor() * math::erfc(u))
    }

    /// Absorption probability by time `t` when molecules degrade at rate
    /// `lambda`: the survival-weighted integral of [`Self::absorb_rate`].
    ///
    /// Evaluated by adaptive quadrature (relative tolerance 1e-9). Reduces to
    /// [`Self::absorb_cdf`] exactly when `lambda` is zero.
    pub fn absorb_cdf_degraded(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::InvalidParam("absorb_cdf_degraded requires t >= 0".into()));
        }
        if self.degradation_rate == 0.0 {
            return self.absorb_cdf(t);
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        let d = self.distance;
        let big_d = self.diffusivity;
        let lambda = self.degradation_rate;
        let q = quad::integrate(
            |u| first_passage_density(d, big_d, u) * math::exp(-lambda * u),
            0.0,
            t,
            1e-12,
            1e-9,
        )?;
        Ok(self.capture_factor() * q.value)
    }

    /// Limit of [`Self::absorb_cdf_degraded`] as `t` grows: the fraction of
    /// emitted molecules that is ever absorbed.
    ///
    /// For `lambda > 0` the integral is truncated at a horizon where the
    /// analytic tail bound of the integrand drops below 1e-12.
    pub fn total_absorbed_fraction(&self) -> Result<f64> {
        if self.degradation_rate == 0.0 {
            return Ok(self.capture_factor());
        }
        let horizon = self.degraded_tail_horizon(1e-12);
        self.absorb_cdf_degraded(horizon)
    }

    /// Smallest power-of-two horizon `T` with
    /// `d / sqrt(4 pi D T^3) * exp(-lambda T) / lambda < tail_bound`.
    fn degraded_tail_horizon(&self, tail_bound: f64) -> f64 {
        let d = self.distance;
        let big_d = self.diffusivity;
        let lambda = self.degradation_rate;
        let mut t = (d * d / big_d).max(1.0 / lambda);
        for _ in 0..128 {
            let bound = d / math::sqrt(4.0 * math::PI * big_d * t * t * t)
                * math::exp(-lambda * t)
                / lambda;
            if bound < tail_bound {
                return t;
            }
            t *= 2.0;
        }
        t
    }

    /// Signal-to-interference ratio for symbol period `t_s`: molecules that
    /// arrive within the first symbol over all later (stray) arrivals.
    ///
    /// Returns `+inf` when every arriving molecule lands inside `t_s`.
    pub fn sir(&self, t_s: f64) -> Result<f64> {
        if !(t_s > 0.0) {
            return Err(Error::InvalidParam("sir requires t_s > 0".into()));
        }
        let within = self.absorb_cdf_degraded(t_s)?;
        let total = self.total_absorbed_fraction()?;
        let stray = total - within;
        if stray <= 0.0 {
            return Ok(f64::INFINITY);
        }
        Ok(within / stray)
    }

    /// Per-slot arrival probabilities for symbol period `t_s`:
    /// `p_k = F(k t_s) - F((k-1) t_s)` for `k = 1..=taps`, degradation-aware.
    pub fn channel_taps(&self, t_s: f64, taps: usize) -> Result<TapVector> {
        if !(t_s > 0.0) {
            return Err(Error::InvalidParam("channel_taps requires t_s > 0".into()));
        }
        if taps == 0 {
            return Err(Error::InvalidParam("channel_taps requires taps >= 1".into()));
        }
        let mut p = Vec::with_capacity(taps);
        let mut prev = 0.0;
        for k in 1..=taps {
            let cur = self.absorb_cdf_degraded(k as f64 * t_s)?;
            p.push((cur - prev).max(0.0));
            prev = cur;
        }
        Ok(TapVector { symbol_period: t_s, taps: p })
    }

    /// Free-space pathloss summary comparing the molecular link against an
    /// electromagnetic link at carrier frequency `em_frequency` (Hz).
    pub fn pathloss_report(&self, em_frequency: f64) -> Result<PathlossReport> {
        if !(em_frequency > 0.0) {
            return Err(Error::InvalidParam("em_frequency must be > 0".into()));
        }
        let d = self.distance;
        let big_d = self.diffusivity;
        let peak_time = d * d / (6.0 * big_d);
        let c = SPEED_OF_LIGHT_UM_PER_S;
        Ok(PathlossReport {
            peak_time,
            peak_hitting_amplitude: self.hitting_pdf(peak_time)?,
            peak_absorbing_amplitude: self.absorb_rate(peak_time)?,
            total_fraction: self.total_absorbed_fraction()?,
            total_hitting_response: 1.0 / (4.0 * math::PI * big_d * d),
            em_pathloss: math::powi(4.0 * math::PI * em_frequency * d / c, -2),
            em_arrival_time: d / c,
        })
    }
}

/// Drift-free first-passage density `d (4 pi D t^3)^(-1/2) exp(-d^2/4Dt)`,
/// zero for `t <= 0` and in the underflow region.
#[inline]
pub(crate) fn first_passage_density(d: f64, big_d: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let arg = d * d / (4.0 * big_d * t);
    if arg > 700.0 {
        return 0.0;
    }
    d / math::sqrt(4.0 * math::PI * big_d * t * t * t) * math::exp(-arg)
}

/// LTI transfer function of the first-passage channel:
/// `H(s) = exp(-d sqrt(s/D))`, principal branch.
pub fn transfer_gain(d: f64, big_d: f64, s: Complex64) -> Result<Complex64> {
    if !(d >= 0.0) {
        return Err(Error::InvalidParam("transfer_gain requires d >= 0".into()));
    }
    if !(big_d > 0.0) {
        return Err(Error::InvalidParam("transfer_gain requires D > 0".into()));
    }
    if s.re < 0.0 {
        return Err(Error::InvalidParam("transfer_gain requires Re(s) >= 0".into()));
    }
    Ok((-(s / big_d).sqrt() * d).exp())
}

/// Symbol-sampled channel: arrival probability per slot.
#[derive(Debug, Clone, PartialEq)]
pub struct TapVector {
    pub symbol_period: f64,
    pub taps: Vec<f64>,
}

impl TapVector {
    /// Index (0-based) of the largest tap.
    pub fn peak_index(&self) -> usize {
        self.taps
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(core::cmp::Ordering::Equal))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    pub fn peak_tap(&self) -> f64 {
        self.taps.get(self.peak_index()).copied().unwrap_or(0.0)
    }

    pub fn sum(&self) -> f64 {
        self.taps.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    /// Checks 0 <= p_k <= 1, total <= 1, and monotone decay past the peak.
    pub fn validate(&self) -> Result<()> {
        if self.taps.is_empty() {
            return Err(Error::EmptyInput("tap vector"));
        }
        if self.taps.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidParam("taps must lie in [0, 1]".into()));
        }
        if self.sum() > 1.0 + 1e-12 {
            return Err(Error::InvalidParam("taps must sum to at most 1".into()));
        }
        let peak = self.peak_index();
        for w in self.taps[peak..].windows(2) {
            if w[1] > w[0] + 1e-12 {
                return Err(Error::InvalidParam(
                    "taps must be nonincreasing past the peak".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Side-by-side loss measures for a molecular link and an EM link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathlossReport {
    /// Time of the molecular pulse peak, `d^2 / 6D` (s).
    pub peak_time: f64,
    /// Hitting density evaluated at the peak time.
    pub peak_hitting_amplitude: f64,
    /// First-passage rate evaluated at the peak time (1/s).
    pub peak_absorbing_amplitude: f64,
    /// Fraction of molecules ever absorbed.
    pub total_fraction: f64,
    /// Time-integrated hitting density, `(4 pi D d)^(-1)`.
    pub total_hitting_response: f64,
    /// EM free-space pathloss `(4 pi f d / c)^(-2)`.
    pub em_pathloss: f64,
    /// EM time of arrival `d / c` (s).
    pub em_arrival_time: f64,
}
