//! Forward error correction for molecular links.
//!
//! Two error regimes drive the designs here. Under additive noise the usual
//! Hamming-distance codes apply ([`hamming`], [`reed_muller`],
//! [`min_energy`]). Under bit transposition — molecules arriving a slot or
//! more late — Hamming distance is the wrong metric, and the codes keep what
//! survives a position shuffle instead: distinct Hamming weights ([`dhw`]),
//! channel-transition distance ([`moco`]), and boundary-matched stateful
//! codewords ([`isi_free`]). The [`transposition`] module supplies the
//! channel those codes are measured against.

pub mod dhw;
pub mod hamming;
pub mod isi_free;
pub mod min_energy;
pub mod ml;
pub mod moco;
pub mod reed_muller;
pub mod transposition;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

pub use dhw::{dhw_codebook, dhw_decode, dhw_encode, dhw_max_rate, dhw_rate_subset};
pub use hamming::{hamming_decode, hamming_encode, HammingDecode};
pub use isi_free::{isifree_decode, isifree_encode, IsiFreeTable};
pub use min_energy::{min_energy_codebook, MinEnergySearch};
pub use ml::{TypedIsiFreeDecoder, TypedMlDecoder};
pub use moco::{moco_distance, moco_search};
pub use reed_muller::{rm84_decode, rm84_encode};
pub use transposition::{
    transposition_channel, transposition_channel_typed, typed_to_bits, TranspositionModel,
    TypedObs,
};

/// A block code as plain data: codewords plus recomputed metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    pub block_length: usize,
    pub codewords: Vec<Vec<u8>>,
    /// Message length in bits when the size is a power of two.
    pub message_length: Option<usize>,
    /// Minimum pairwise Hamming distance (0 for single-word books).
    pub min_hamming_distance: usize,
    pub weights: Vec<usize>,
}

impl Codebook {
    pub fn new(block_length: usize, codewords: Vec<Vec<u8>>) -> Result<Self> {
        if codewords.is_empty() {
            return Err(Error::EmptyInput("codebook"));
        }
        for cw in &codewords {
            if cw.len() != block_length {
                return Err(Error::LengthMismatch { expected: block_length, got: cw.len() });
            }
            if cw.iter().any(|&b| b > 1) {
                return Err(Error::InvalidParam("codeword bits must be 0 or 1".into()));
            }
        }
        for (i, a) in codewords.iter().enumerate() {
            if codewords[i + 1..].iter().any(|b| b == a) {
                return Err(Error::InvalidParam("codewords must be distinct".into()));
            }
        }
        let weights = codewords.iter().map(|cw| weight(cw)).collect();
        let min_hamming_distance = min_pairwise_distance(&codewords);
        let message_length = if codewords.len().is_power_of_two() {
            Some(codewords.len().trailing_zeros() as usize)
        } else {
            None
        };
        Ok(Codebook {
            block_length,
            codewords,
            message_length,
            min_hamming_distance,
            weights,
        })
    }

    pub fn size(&self) -> usize {
        self.codewords.len()
    }

    pub fn average_weight(&self) -> f64 {
        self.weights.iter().sum::<usize>() as f64 / self.weights.len() as f64
    }

    /// Plain-text form: header `n M d_min`, then one codeword per line.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {} {}\n",
            self.block_length,
            self.size(),
            self.min_hamming_distance
        );
        for cw in &self.codewords {
            for &b in cw {
                out.push(if b == 1 { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or(Error::EmptyInput("codebook text"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::InvalidParam("codebook header must be 'n M d_min'".into()));
        }
        let n: usize = fields[0]
            .parse()
            .map_err(|_| Error::InvalidParam("bad block length in header".into()))?;
        let m: usize = fields[1]
            .parse()
            .map_err(|_| Error::InvalidParam("bad codebook size in header".into()))?;
        let codewords: Vec<Vec<u8>> = lines
            .map(|l| {
                l.trim()
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(0u8),
                        '1' => Ok(1u8),
                        _ => Err(Error::InvalidParam("codewords must be binary".into())),
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        if codewords.len() != m {
            return Err(Error::LengthMismatch { expected: m, got: codewords.len() });
        }
        Codebook::new(n, codewords)
    }
}

/// Hamming weight of a bit vector.
pub fn weight(bits: &[u8]) -> usize {
    bits.iter().filter(|&&b| b == 1).count()
}

/// Hamming distance between equal-length bit vectors.
pub fn hamming_distance(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

pub(crate) fn min_pairwise_distance(codewords: &[Vec<u8>]) -> usize {
    let mut min = usize::MAX;
    for (i, a) in codewords.iter().enumerate() {
        for b in &codewords[i + 1..] {
            min = min.min(hamming_distance(a, b));
        }
    }
    if min == usize::MAX {
        0
    } else {
        min
    }
}

/// Unpacks `value` into `n` bits, most significant first.
pub(crate) fn bits_of(value: usize, n: usize) -> Vec<u8> {
    (0..n).rev().map(|i| ((value >> i) & 1) as u8).collect()
}

/// Packs bits (most significant first) back into an index.
pub(crate) fn index_of(bits: &[u8]) -> usize {
    bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn codebook_metadata_is_recomputed() {
        let cb = Codebook::new(
            4,
            vec![vec![0, 0, 0, 0], vec![1, 0, 0, 0], vec![1, 1, 0, 0], vec![1, 1, 1, 0]],
        )
        .unwrap();
        assert_eq!(cb.min_hamming_distance, 1);
        assert_eq!(cb.weights, vec![0, 1, 2, 3]);
        assert_eq!(cb.message_length, Some(2));
        assert!((cb.average_weight() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn codebook_rejects_duplicates_and_ragged_rows() {
        assert!(Codebook::new(2, vec![vec![0, 0], vec![0, 0]]).is_err());
        assert!(Codebook::new(2, vec![vec![0, 0], vec![0, 1, 1]]).is_err());
        assert!(Codebook::new(2, vec![vec![0, 2]]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let cb = Codebook::new(3, vec![vec![0, 0, 0], vec![1, 1, 1]]).unwrap();
        let text = cb.to_text();
        assert_eq!(text, "3 2 3\n000\n111\n");
        assert_eq!(Codebook::from_text(&text).unwrap(), cb);
    }

    #[test]
    fn bit_packing_round_trips() {
        for v in 0..16 {
            assert_eq!(index_of(&bits_of(v, 4)), v);
        }
        assert_eq!(bits_of(0b1010, 4), vec![1, 0, 1, 0]);
    }
}
