//! Link-level building blocks for diffusion-based molecular communication.
//!
//! The crate is split along the signal path:
//!
//! - [`channel`] — closed-form diffusion channel math: hitting densities,
//!   absorption CDFs (with first-order degradation), the s-domain transfer
//!   function, pathloss measures, and symbol-sampled channel taps.
//! - [`particle`] — a particle-level Monte Carlo random-walk engine with
//!   absorbing receivers, drift, and exponential molecule lifetimes. Serves
//!   as the independent cross-check for every closed form in [`channel`].
//! - [`modulation`] — bit-to-emission mapping for concentration, position,
//!   frequency, and multi-molecule-type keying, plus transmit pulse shaping
//!   and the oscillating-transmitter passband model.
//! - [`fec`] — block codes for additive-noise and bit-transposition error
//!   regimes: Hamming, Reed-Muller (8,4), distinct-Hamming-weight codes,
//!   MoCo distance codebook search, and stateful ISI-free codes.
//! - [`detection`] — receiver-side noise models and detectors: MAP sequence
//!   detection, MMSE equalization, decision feedback, and the non-coherent
//!   difference detector.
//!
//! Everything here is `no_std` + `alloc`; IO, experiment orchestration, and
//! file formats live in the companion `molink` crate.

#![no_std]
#![deny(unsafe_code)]
// Validation deliberately writes `!(x > 0.0)` so NaN fails the check too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod channel;
pub mod detection;
pub mod error;
pub mod fec;
pub mod math;
pub mod modulation;
pub mod particle;
pub mod quad;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
