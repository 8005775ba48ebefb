//! Distinct-Hamming-weight codes.
//!
//! Against bit transposition the one attribute of a codeword that survives a
//! position shuffle is its weight, so the codebook uses one codeword per
//! weight class: the left-packed ladder `1^w 0^(n-w)`. Decoding reads only
//! the received weight and is therefore invariant under any within-word
//! permutation.

use alloc::vec;
use alloc::vec::Vec;

use super::{bits_of, weight, Codebook};
use crate::math;
use crate::{Error, Result};

/// The full weight ladder: `n + 1` codewords of weights `0..=n`.
pub fn dhw_codebook(n: usize) -> Result<Codebook> {
    if n == 0 {
        return Err(Error::InvalidParam("dhw block length must be >= 1".into()));
    }
    let codewords = (0..=n).map(|w| ladder_word(n, w)).collect();
    Codebook::new(n, codewords)
}

/// The `2^k` lightest ladder words, for structured rate-`k/n` use.
pub fn dhw_rate_subset(n: usize, k: usize) -> Result<Codebook> {
    let m = 1usize << k;
    if m > n + 1 {
        return Err(Error::Infeasible(alloc::format!(
            "dhw supports at most {} codewords at block length {n}",
            n + 1
        )));
    }
    let codewords = (0..m).map(|w| ladder_word(n, w)).collect();
    Codebook::new(n, codewords)
}

fn ladder_word(n: usize, w: usize) -> Vec<u8> {
    let mut cw = vec![0u8; n];
    for bit in cw.iter_mut().take(w) {
        *bit = 1;
    }
    cw
}

/// Largest achievable rate of a distinct-weight code: `log2(n + 1) / n`.
pub fn dhw_max_rate(n: usize) -> f64 {
    math::ln((n + 1) as f64) / math::LN_2 / n as f64
}

/// Maps a `k`-bit message to the ladder word whose weight is its value.
pub fn dhw_encode(message: &[u8], n: usize) -> Result<Vec<u8>> {
    let k = message.len();
    if (1usize << k) > n + 1 {
        return Err(Error::Infeasible(alloc::format!(
            "{k}-bit messages need {} weight classes, block length {n} has {}",
            1usize << k,
            n + 1
        )));
    }
    if message.iter().any(|&b| b > 1) {
        return Err(Error::InvalidParam("message bits must be 0 or 1".into()));
    }
    Ok(ladder_word(n, super::index_of(message)))
}

/// Decodes by nearest weight among the `2^k` used classes, ties toward the
/// lower (cheaper) weight.
pub fn dhw_decode(received: &[u8], k: usize) -> Result<Vec<u8>> {
    let max_msg = (1usize << k) - 1;
    if max_msg > received.len() {
        return Err(Error::LengthMismatch { expected: max_msg, got: received.len() });
    }
    let w = weight(received);
    let nearest = w.min(max_msg);
    Ok(bits_of(nearest, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rate_half_subset_matches_reference() {
        let cb = dhw_rate_subset(4, 2).unwrap();
        assert_eq!(
            cb.codewords,
            vec![vec![0, 0, 0, 0], vec![1, 0, 0, 0], vec![1, 1, 0, 0], vec![1, 1, 1, 0]]
        );
    }

    #[test]
    fn full_ladder_has_every_weight() {
        let cb = dhw_codebook(4).unwrap();
        assert_eq!(cb.size(), 5);
        assert_eq!(cb.weights, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn max_rate_at_four_is_log2_five_over_four() {
        assert!((dhw_max_rate(4) - 0.5804820237218405).abs() < 1e-12);
    }

    #[test]
    fn decoding_is_permutation_invariant() {
        // Weight is all the decoder reads, so every 4-bit input decodes the
        // same as any permutation of itself. Exhaustive over all 16 words and
        // all 24 permutations.
        let perms = permutations(&[0, 1, 2, 3]);
        for v in 0..16usize {
            let word = bits_of(v, 4);
            let base = dhw_decode(&word, 2).unwrap();
            for perm in &perms {
                let shuffled: Vec<u8> = perm.iter().map(|&i| word[i]).collect();
                assert_eq!(dhw_decode(&shuffled, 2).unwrap(), base);
            }
        }
    }

    #[test]
    fn round_trip_and_tie_break_low() {
        for v in 0..4usize {
            let msg = bits_of(v, 2);
            let cw = dhw_encode(&msg, 4).unwrap();
            assert_eq!(dhw_decode(&cw, 2).unwrap(), msg);
        }
        // Weight 4 exceeds the used classes; clamps down to message 11.
        assert_eq!(dhw_decode(&[1, 1, 1, 1], 2).unwrap(), vec![1, 1]);
    }

    fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        for (i, &head) in items.iter().enumerate() {
            let rest: Vec<usize> =
                items.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &x)| x).collect();
            for mut tail in permutations(&rest) {
                tail.insert(0, head);
                out.push(tail);
            }
        }
        out
    }
}
