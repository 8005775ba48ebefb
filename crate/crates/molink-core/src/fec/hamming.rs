//! Systematic Hamming codes of length `n = 2^m - 1`.
//!
//! Parity bits sit at the power-of-two positions (1-indexed), message bits
//! fill the rest. Minimum distance 3: the decoder corrects any single flip;
//! a nonzero syndrome also flags double flips, though those can miscorrect,
//! as for any distance-3 code running in correction mode.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Decoding outcome: the message plus the corrected position, if any
/// (1-indexed within the codeword).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HammingDecode {
    pub message: Vec<u8>,
    pub corrected_position: Option<usize>,
}

fn code_dimensions(m: u32) -> Result<(usize, usize)> {
    if !(2..=16).contains(&m) {
        return Err(Error::InvalidParam("hamming parity count m must be in 2..=16".into()));
    }
    let n = (1usize << m) - 1;
    Ok((n, n - m as usize))
}

/// Encodes `message` (length `2^m - 1 - m`) into a length `2^m - 1` codeword.
pub fn hamming_encode(m: u32, message: &[u8]) -> Result<Vec<u8>> {
    let (n, k) = code_dimensions(m)?;
    if message.len() != k {
        return Err(Error::LengthMismatch { expected: k, got: message.len() });
    }
    if message.iter().any(|&b| b > 1) {
        return Err(Error::InvalidParam("message bits must be 0 or 1".into()));
    }

    let mut cw = Vec::with_capacity(n);
    let mut msg = message.iter();
    for pos in 1..=n {
        if pos.is_power_of_two() {
            cw.push(0);
        } else {
            cw.push(*msg.next().expect("length checked"));
        }
    }
    for i in 0..m {
        let p = 1usize << i;
        let parity = (1..=n)
            .filter(|pos| pos & p != 0 && !pos.is_power_of_two())
            .fold(0u8, |acc, pos| acc ^ cw[pos - 1]);
        cw[p - 1] = parity;
    }
    Ok(cw)
}

/// Decodes a received word, correcting at most one flipped bit.
pub fn hamming_decode(m: u32, received: &[u8]) -> Result<HammingDecode> {
    let (n, k) = code_dimensions(m)?;
    if received.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: received.len() });
    }
    if received.iter().any(|&b| b > 1) {
        return Err(Error::InvalidParam("received bits must be 0 or 1".into()));
    }

    let syndrome = received
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == 1)
        .fold(0usize, |acc, (i, _)| acc ^ (i + 1));

    let mut word = received.to_vec();
    let corrected_position = if syndrome != 0 {
        word[syndrome - 1] ^= 1;
        Some(syndrome)
    } else {
        None
    };

    let mut message = Vec::with_capacity(k);
    for pos in 1..=n {
        if !pos.is_power_of_two() {
            message.push(word[pos - 1]);
        }
    }
    Ok(HammingDecode { message, corrected_position })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fec::{bits_of, min_pairwise_distance};
    use alloc::vec;
    use alloc::vec::Vec;

    #[test]
    fn zero_maps_to_zero() {
        let cw = hamming_encode(3, &[0, 0, 0, 0]).unwrap();
        assert_eq!(cw, vec![0; 7]);
    }

    #[test]
    fn all_single_flips_are_corrected() {
        // 16 messages x 7 positions = 112 cases.
        for msg_val in 0..16 {
            let message = bits_of(msg_val, 4);
            let cw = hamming_encode(3, &message).unwrap();
            for pos in 0..7 {
                let mut rx = cw.clone();
                rx[pos] ^= 1;
                let decoded = hamming_decode(3, &rx).unwrap();
                assert_eq!(decoded.message, message, "msg {msg_val} flip {pos}");
                assert_eq!(decoded.corrected_position, Some(pos + 1));
            }
            let clean = hamming_decode(3, &cw).unwrap();
            assert_eq!(clean.message, message);
            assert_eq!(clean.corrected_position, None);
        }
    }

    #[test]
    fn double_flips_raise_the_syndrome() {
        let cw = hamming_encode(3, &[1, 0, 1, 1]).unwrap();
        let mut rx = cw.clone();
        rx[0] ^= 1;
        rx[5] ^= 1;
        let decoded = hamming_decode(3, &rx).unwrap();
        assert!(decoded.corrected_position.is_some());
    }

    #[test]
    fn minimum_distance_is_three() {
        let codewords: Vec<Vec<u8>> = (0..16)
            .map(|v| hamming_encode(3, &bits_of(v, 4)).unwrap())
            .collect();
        assert_eq!(min_pairwise_distance(&codewords), 3);
    }

    #[test]
    fn longer_code_round_trips() {
        // (15, 11) instance.
        let message = bits_of(0b10110100101, 11);
        let cw = hamming_encode(4, &message).unwrap();
        assert_eq!(cw.len(), 15);
        let decoded = hamming_decode(4, &cw).unwrap();
        assert_eq!(decoded.message, message);
    }

    #[test]
    fn length_mismatches_are_rejected() {
        assert!(hamming_encode(3, &[0, 0, 0]).is_err());
        assert!(hamming_decode(3, &[0, 0, 0]).is_err());
        assert!(hamming_encode(1, &[]).is_err());
    }
}
