//! Stateful ISI-free block codes.
//!
//! Each message owns two codewords, picked by the last bit of the previously
//! emitted codeword. Within each state column the codewords carry distinct
//! Hamming weights (intra-word shuffles are harmless), and every codeword
//! opens with the bit that closed its predecessor, so a molecule slipping one
//! slot across a block boundary lands on a slot that wanted the same value.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{bits_of, index_of, weight};
use crate::{Error, Result};

/// Codeword assignment for an `(n, k, level)` ISI-free code with two state
/// columns indexed by the previous codeword's last bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsiFreeTable {
    pub block_length: usize,
    pub message_length: usize,
    /// Correctable crossover level; the bundled construction has level 1.
    pub level: usize,
    /// `assignment[message][state]` with `state` the previous last bit.
    pub assignment: Vec<[Vec<u8>; 2]>,
}

impl IsiFreeTable {
    /// The bundled (4,2,1) instance.
    pub fn standard_4_2_1() -> IsiFreeTable {
        let row = |a: [u8; 4], b: [u8; 4]| [a.to_vec(), b.to_vec()];
        IsiFreeTable {
            block_length: 4,
            message_length: 2,
            level: 1,
            assignment: vec![
                row([0, 0, 0, 0], [1, 1, 1, 1]),
                row([0, 0, 0, 1], [1, 0, 0, 0]),
                row([0, 0, 1, 1], [1, 1, 0, 0]),
                row([0, 1, 1, 1], [1, 1, 1, 0]),
            ],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.level != 1 {
            return Err(Error::InvalidParam(
                "only crossover level 1 tables are supported".into(),
            ));
        }
        if self.assignment.len() != 1 << self.message_length {
            return Err(Error::LengthMismatch {
                expected: 1 << self.message_length,
                got: self.assignment.len(),
            });
        }
        for state in 0..2usize {
            let mut weights = Vec::new();
            for row in &self.assignment {
                let cw = &row[state];
                if cw.len() != self.block_length {
                    return Err(Error::LengthMismatch {
                        expected: self.block_length,
                        got: cw.len(),
                    });
                }
                // A predecessor leaving this state ends in `state`, so the
                // codeword must open with it.
                if usize::from(cw[0]) != state {
                    return Err(Error::InvalidParam(format!(
                        "codeword {cw:?} does not start with its state bit {state}"
                    )));
                }
                weights.push(weight(cw));
            }
            for (i, w) in weights.iter().enumerate() {
                if weights[i + 1..].contains(w) {
                    return Err(Error::InvalidParam(format!(
                        "state {state} column repeats weight {w}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Three whitespace-separated columns per row: message bits, codeword for
    /// previous-last-bit 0, codeword for previous-last-bit 1.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (msg, row) in self.assignment.iter().enumerate() {
            let fmt = |cw: &[u8]| -> String {
                cw.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
            };
            let msg_bits: String = bits_of(msg, self.message_length)
                .iter()
                .map(|&b| if b == 1 { '1' } else { '0' })
                .collect();
            out.push_str(&format!("{} {} {}\n", msg_bits, fmt(&row[0]), fmt(&row[1])));
        }
        out
    }
}

/// Encodes a `k`-bit-per-message stream; `initial_state` is the assumed last
/// bit before the first codeword (0 unless a preceding frame says otherwise).
pub fn isifree_encode(messages: &[u8], table: &IsiFreeTable, initial_state: u8) -> Result<Vec<u8>> {
    table.validate()?;
    if initial_state > 1 {
        return Err(Error::InvalidParam("initial_state must be 0 or 1".into()));
    }
    let k = table.message_length;
    if messages.is_empty() || !messages.len().is_multiple_of(k) {
        return Err(Error::LengthMismatch {
            expected: messages.len().div_ceil(k).max(1) * k,
            got: messages.len(),
        });
    }
    if messages.iter().any(|&b| b > 1) {
        return Err(Error::InvalidParam("message bits must be 0 or 1".into()));
    }

    let mut state = usize::from(initial_state);
    let mut out = Vec::with_capacity(messages.len() / k * table.block_length);
    for chunk in messages.chunks(k) {
        let cw = &table.assignment[index_of(chunk)][state];
        out.extend_from_slice(cw);
        state = usize::from(*cw.last().expect("non-empty codeword"));
    }
    Ok(out)
}

/// Inverts [`isifree_encode`] by weight-plus-state lookup: within the current
/// state column, the codeword of nearest weight wins (ties toward lower
/// weight), and the decoded codeword's last bit drives the next state.
pub fn isifree_decode(stream: &[u8], table: &IsiFreeTable, initial_state: u8) -> Result<Vec<u8>> {
    table.validate()?;
    if initial_state > 1 {
        return Err(Error::InvalidParam("initial_state must be 0 or 1".into()));
    }
    let n = table.block_length;
    if stream.is_empty() || !stream.len().is_multiple_of(n) {
        return Err(Error::LengthMismatch {
            expected: stream.len().div_ceil(n).max(1) * n,
            got: stream.len(),
        });
    }

    let mut state = usize::from(initial_state);
    let mut out = Vec::with_capacity(stream.len() / n * table.message_length);
    for block in stream.chunks(n) {
        let w = weight(block);
        let mut best_msg = 0usize;
        let mut best_gap = usize::MAX;
        let mut best_weight = usize::MAX;
        for (msg, row) in table.assignment.iter().enumerate() {
            let cw_weight = weight(&row[state]);
            let gap = cw_weight.abs_diff(w);
            if gap < best_gap || (gap == best_gap && cw_weight < best_weight) {
                best_gap = gap;
                best_weight = cw_weight;
                best_msg = msg;
            }
        }
        out.extend_from_slice(&bits_of(best_msg, table.message_length));
        state = usize::from(*table.assignment[best_msg][state].last().expect("non-empty"));
    }
    Ok(out)
}
