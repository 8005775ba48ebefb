//! Channel-trained block decoders for the two-type transposition channel.
//!
//! Both decoders estimate block likelihoods by pushing long random encoded
//! streams through the channel, so inter-codeword leakage is part of the
//! model. Laplace smoothing over the `3^n` typed-observation space keeps
//! unseen blocks at finite log-likelihood.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::isi_free::{isifree_encode, IsiFreeTable};
use super::transposition::{
    transposition_channel_typed, typed_index, TranspositionModel, TypedObs,
};
use super::{bits_of, index_of, Codebook};
use crate::math;
use crate::{Error, Result};

const MAX_ML_BLOCK: usize = 10;

fn check_block_length(n: usize) -> Result<usize> {
    if n == 0 || n > MAX_ML_BLOCK {
        return Err(Error::InvalidParam(
            "typed ML decoding supports block lengths 1..=10".into(),
        ));
    }
    Ok(3usize.pow(n as u32))
}

/// Maximum-likelihood block decoder for a memoryless codebook.
#[derive(Debug, Clone)]
pub struct TypedMlDecoder {
    codebook: Codebook,
    /// `log_prob[message][typed_index]`.
    log_prob: Vec<Vec<f64>>,
}

impl TypedMlDecoder {
    /// Estimates `P(observation | codeword)` from `training_blocks` random
    /// codewords sent as one stream.
    pub fn train(
        codebook: &Codebook,
        model: &TranspositionModel,
        training_blocks: u32,
        seed: u64,
    ) -> Result<TypedMlDecoder> {
        model.validate()?;
        if training_blocks == 0 {
            return Err(Error::InvalidParam("decoder training needs blocks >= 1".into()));
        }
        let n = codebook.block_length;
        let outcomes = check_block_length(n)?;
        let size = codebook.size();

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sent: Vec<usize> = (0..training_blocks)
            .map(|_| (rng.gen::<u32>() as usize) % size)
            .collect();
        let mut stream = Vec::with_capacity(training_blocks as usize * n);
        for &msg in &sent {
            stream.extend_from_slice(&codebook.codewords[msg]);
        }
        let received = transposition_channel_typed(&stream, model, &mut rng)?;

        let mut hist = vec![vec![0u64; outcomes]; size];
        let mut totals = vec![0u64; size];
        for (&msg, block) in sent.iter().zip(received.chunks(n)) {
            hist[msg][typed_index(block)] += 1;
            totals[msg] += 1;
        }
        let log_prob = hist
            .iter()
            .zip(&totals)
            .map(|(row, &total)| {
                let denom = total as f64 + outcomes as f64;
                row.iter().map(|&c| math::ln((c as f64 + 1.0) / denom)).collect()
            })
            .collect();
        Ok(TypedMlDecoder { codebook: codebook.clone(), log_prob })
    }

    /// Most likely message index for one received block; ties take the
    /// lowest index.
    pub fn decode(&self, block: &[TypedObs]) -> Result<usize> {
        if block.len() != self.codebook.block_length {
            return Err(Error::LengthMismatch {
                expected: self.codebook.block_length,
                got: block.len(),
            });
        }
        let idx = typed_index(block);
        let mut best = 0usize;
        let mut best_lp = f64::NEG_INFINITY;
        for (msg, row) in self.log_prob.iter().enumerate() {
            if row[idx] > best_lp {
                best_lp = row[idx];
                best = msg;
            }
        }
        Ok(best)
    }

    pub fn codebook(&self) -> &Codebook {
        &self.codebook
    }
}

/// Sequence decoder for the stateful ISI-free code: a two-state Viterbi pass
/// with likelihoods conditioned on the previous codeword's last bit, which is
/// exactly the boundary the code construction controls.
#[derive(Debug, Clone)]
pub struct TypedIsiFreeDecoder {
    table: IsiFreeTable,
    /// `log_prob[state][message][typed_index]`.
    log_prob: Vec<Vec<Vec<f64>>>,
}

impl TypedIsiFreeDecoder {
    pub fn train(
        table: &IsiFreeTable,
        model: &TranspositionModel,
        training_blocks: u32,
        seed: u64,
    ) -> Result<TypedIsiFreeDecoder> {
        table.validate()?;
        model.validate()?;
        if training_blocks == 0 {
            return Err(Error::InvalidParam("decoder training needs blocks >= 1".into()));
        }
        let n = table.block_length;
        let outcomes = check_block_length(n)?;
        let k = table.message_length;
        let messages = 1usize << k;

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let msg_bits: Vec<u8> = (0..training_blocks as usize * k)
            .map(|_| u8::from(rng.gen::<f64>() < 0.5))
            .collect();
        let stream = isifree_encode(&msg_bits, table, 0)?;
        let received = transposition_channel_typed(&stream, model, &mut rng)?;

        let mut hist = vec![vec![vec![0u64; outcomes]; messages]; 2];
        let mut totals = vec![vec![0u64; messages]; 2];
        let mut state = 0usize;
        for (chunk, block) in msg_bits.chunks(k).zip(received.chunks(n)) {
            let msg = index_of(chunk);
            hist[state][msg][typed_index(block)] += 1;
            totals[state][msg] += 1;
            state = usize::from(*table.assignment[msg][state].last().expect("non-empty"));
        }

        let log_prob = (0..2)
            .map(|s| {
                (0..messages)
                    .map(|m| {
                        let denom = totals[s][m] as f64 + outcomes as f64;
                        hist[s][m]
                            .iter()
                            .map(|&c| math::ln((c as f64 + 1.0) / denom))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(TypedIsiFreeDecoder { table: table.clone(), log_prob })
    }

    /// Most likely message stream for a typed block stream.
    pub fn decode_stream(&self, received: &[TypedObs], initial_state: u8) -> Result<Vec<u8>> {
        let n = self.table.block_length;
        let k = self.table.message_length;
        if received.is_empty() || !received.len().is_multiple_of(n) {
            return Err(Error::LengthMismatch {
                expected: received.len().div_ceil(n).max(1) * n,
                got: received.len(),
            });
        }
        if initial_state > 1 {
            return Err(Error::InvalidParam("initial_state must be 0 or 1".into()));
        }
        let blocks = received.len() / n;
        let messages = 1usize << k;

        let mut score = [f64::NEG_INFINITY; 2];
        score[usize::from(initial_state)] = 0.0;
        let mut back = vec![[(0usize, 0usize); 2]; blocks];

        for (t, block) in received.chunks(n).enumerate() {
            let idx = typed_index(block);
            let mut next = [f64::NEG_INFINITY; 2];
            for (s, &base) in score.iter().enumerate() {
                if base == f64::NEG_INFINITY {
                    continue;
                }
                for m in 0..messages {
                    let cw = &self.table.assignment[m][s];
                    let ns = usize::from(*cw.last().expect("non-empty"));
                    let gain = base + self.log_prob[s][m][idx];
                    if gain > next[ns] {
                        next[ns] = gain;
                        back[t][ns] = (s, m);
                    }
                }
            }
            score = next;
        }

        let mut state = usize::from(score[1] > score[0]);
        let mut out = vec![0u8; blocks * k];
        for t in (0..blocks).rev() {
            let (prev, msg) = back[t][state];
            out[t * k..(t + 1) * k].copy_from_slice(&bits_of(msg, k));
            state = prev;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fec::isi_free::isifree_decode;
    use crate::fec::moco::reference_codebook_4;
    use crate::fec::transposition::typed_to_bits;

    fn drift_model(v: f64) -> TranspositionModel {
        TranspositionModel::FirstPassage {
            distance: 1.0,
            diffusivity: 1.0,
            drift: v,
            symbol_period: 1.0,
        }
    }

    #[test]
    fn ml_decoder_identifies_clean_codewords() {
        let cb = reference_codebook_4();
        let dec = TypedMlDecoder::train(&cb, &drift_model(100.0), 20_000, 1).unwrap();
        for (msg, cw) in cb.codewords.iter().enumerate() {
            let obs: Vec<TypedObs> = cw
                .iter()
                .map(|&b| if b == 1 { TypedObs::One } else { TypedObs::Zero })
                .collect();
            assert_eq!(dec.decode(&obs).unwrap(), msg);
        }
    }

    #[test]
    fn isifree_trellis_round_trips_clean_streams() {
        let table = IsiFreeTable::standard_4_2_1();
        let dec = TypedIsiFreeDecoder::train(&table, &drift_model(100.0), 20_000, 2).unwrap();
        let messages = [0u8, 1, 1, 0, 1, 1, 0, 0, 1, 0];
        let stream = isifree_encode(&messages, &table, 0).unwrap();
        let obs: Vec<TypedObs> = stream
            .iter()
            .map(|&b| if b == 1 { TypedObs::One } else { TypedObs::Zero })
            .collect();
        assert_eq!(dec.decode_stream(&obs, 0).unwrap(), messages.to_vec());
    }

    #[test]
    fn trellis_beats_the_greedy_lookup_under_load() {
        let table = IsiFreeTable::standard_4_2_1();
        let model = drift_model(1.0);
        let dec = TypedIsiFreeDecoder::train(&table, &model, 40_000, 3).unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let blocks = 4000;
        let messages: Vec<u8> =
            (0..2 * blocks).map(|_| u8::from(rng.gen::<f64>() < 0.5)).collect();
        let stream = isifree_encode(&messages, &table, 0).unwrap();
        let received = transposition_channel_typed(&stream, &model, &mut rng).unwrap();

        let ml = dec.decode_stream(&received, 0).unwrap();
        let greedy = isifree_decode(&typed_to_bits(&received), &table, 0).unwrap();
        let errs = |out: &[u8]| {
            messages.chunks(2).zip(out.chunks(2)).filter(|(a, b)| a != b).count()
        };
        assert!(errs(&ml) < errs(&greedy), "trellis {} vs greedy {}", errs(&ml), errs(&greedy));
    }

    #[test]
    fn training_rejects_degenerate_budgets() {
        let cb = reference_codebook_4();
        assert!(TypedMlDecoder::train(&cb, &drift_model(1.0), 0, 1).is_err());
    }
}
