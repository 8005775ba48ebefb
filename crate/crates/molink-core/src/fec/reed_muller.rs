//! First-order Reed-Muller code of length 8: the (8,4) extended Hamming
//! code, minimum distance 4, decoded by exhaustive minimum distance.

use alloc::vec::Vec;

use super::{bits_of, hamming_distance};
use crate::{Error, Result};

// Rows: all-ones plus the three coordinate functions on the 3-cube.
const GENERATOR: [[u8; 8]; 4] = [
    [1, 1, 1, 1, 1, 1, 1, 1],
    [0, 1, 0, 1, 0, 1, 0, 1],
    [0, 0, 1, 1, 0, 0, 1, 1],
    [0, 0, 0, 0, 1, 1, 1, 1],
];

/// Encodes 4 message bits into an 8-bit codeword.
pub fn rm84_encode(message: &[u8]) -> Result<Vec<u8>> {
    if message.len() != 4 {
        return Err(Error::LengthMismatch { expected: 4, got: message.len() });
    }
    if message.iter().any(|&b| b > 1) {
        return Err(Error::InvalidParam("message bits must be 0 or 1".into()));
    }
    let mut cw = [0u8; 8];
    for (row, &m) in GENERATOR.iter().zip(message) {
        if m == 1 {
            for (c, &r) in cw.iter_mut().zip(row) {
                *c ^= r;
            }
        }
    }
    Ok(cw.to_vec())
}

/// Minimum-distance decoding over all 16 codewords; ties resolve to the
/// lowest message value.
pub fn rm84_decode(received: &[u8]) -> Result<Vec<u8>> {
    if received.len() != 8 {
        return Err(Error::LengthMismatch { expected: 8, got: received.len() });
    }
    let mut best_msg = 0usize;
    let mut best_dist = usize::MAX;
    for v in 0..16 {
        let cw = rm84_encode(&bits_of(v, 4)).expect("4-bit message");
        let dist = hamming_distance(&cw, received);
        if dist < best_dist {
            best_dist = dist;
            best_msg = v;
        }
    }
    Ok(bits_of(best_msg, 4))
}
