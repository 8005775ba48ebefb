//! Minimum-energy codebooks: fewest transmitted molecules for a required
//! Hamming distance.
//!
//! With on-off keying every 1-bit costs molecules, so among codebooks of a
//! given size and minimum distance the one with the smallest average weight
//! spends the least energy. Small spaces are solved exactly by bounded
//! depth-first search; larger ones fall back to greedy picks in weight order
//! and in plain lexicographic order, keeping the lighter result as an upper
//! bound.

use alloc::vec::Vec;

use super::{bits_of, hamming_distance, Codebook};
use crate::{Error, Result};

/// Node budget for the exact branch-and-bound pass.
const DFS_NODE_BUDGET: u64 = 4_000_000;

/// Search outcome; `exhaustive` distinguishes a proven optimum from a greedy
/// upper bound.
#[derive(Debug, Clone, PartialEq)]
pub struct MinEnergySearch {
    pub codebook: Codebook,
    pub exhaustive: bool,
}

/// Finds a size-`m` codebook of length `n` with pairwise distance at least
/// `d_min` minimizing the average codeword weight.
pub fn min_energy_codebook(n: usize, m: usize, d_min: usize) -> Result<MinEnergySearch> {
    if n == 0 || n > 16 {
        return Err(Error::InvalidParam("min-energy block length must be in 1..=16".into()));
    }
    if m < 1 || m > (1usize << n) {
        return Err(Error::Infeasible(alloc::format!(
            "cannot pick {m} distinct codewords of length {n}"
        )));
    }
    if m >= 2 && d_min > n {
        return Err(Error::Infeasible(alloc::format!(
            "distance {d_min} impossible at block length {n}"
        )));
    }

    // Words ordered by weight, ties left-packed first (1100 before 1010),
    // matching the ladder convention of the weight-based codes. The cheapest
    // valid prefix doubles as the branch-and-bound lower bound.
    let mut order: Vec<u32> = (0..(1u32 << n)).collect();
    order.sort_by_key(|&w| (w.count_ones(), core::cmp::Reverse(w)));

    let mut best: Option<(u64, Vec<u32>)> = None;
    let mut chosen: Vec<u32> = Vec::with_capacity(m);
    let mut nodes: u64 = 0;
    let complete = dfs(&order, n, m, d_min, 0, 0, &mut chosen, &mut best, &mut nodes);

    if complete {
        return match best {
            Some((_, words)) => Ok(MinEnergySearch {
                codebook: to_codebook(n, &words)?,
                exhaustive: true,
            }),
            None => Err(Error::Infeasible(alloc::format!(
                "no ({n}, {m}) codebook with distance {d_min} exists"
            ))),
        };
    }

    // Budget exceeded: fall back to greedy picks. Weight order favors light
    // words; lexicographic order is the classic lexicode construction. Keep
    // whichever completes with the lighter total.
    let lex: Vec<u32> = (0..(1u32 << n)).collect();
    let candidates = [greedy(&order, m, d_min), greedy(&lex, m, d_min)];
    let mut pick: Option<Vec<u32>> = None;
    for cand in candidates.into_iter().flatten() {
        let w: u64 = cand.iter().map(|x| u64::from(x.count_ones())).sum();
        let better = match &pick {
            Some(cur) => w < cur.iter().map(|x| u64::from(x.count_ones())).sum::<u64>(),
            None => true,
        };
        if better {
            pick = Some(cand);
        }
    }
    match pick {
        Some(words) => Ok(MinEnergySearch { codebook: to_codebook(n, &words)?, exhaustive: false }),
        None => Err(Error::SearchSpaceExceeded(alloc::format!(
            "greedy fallback could not assemble a ({n}, {m}, {d_min}) codebook"
        ))),
    }
}

/// Depth-first search over the weight-ordered words. Returns false once the
/// node budget runs out.
#[allow(clippy::too_many_arguments)]
fn dfs(
    order: &[u32],
    n: usize,
    m: usize,
    d_min: usize,
    start: usize,
    weight_so_far: u64,
    chosen: &mut Vec<u32>,
    best: &mut Option<(u64, Vec<u32>)>,
    nodes: &mut u64,
) -> bool {
    if chosen.len() == m {
        if best.as_ref().is_none_or(|(bw, _)| weight_so_far < *bw) {
            *best = Some((weight_so_far, chosen.clone()));
        }
        return true;
    }
    *nodes += 1;
    if *nodes > DFS_NODE_BUDGET {
        return false;
    }

    let needed = m - chosen.len();
    for idx in start..order.len() {
        if order.len() - idx < needed {
            break;
        }
        let word = order[idx];
        // Optimistic bound: this word's weight repeated for every remaining
        // slot (weights are nondecreasing along `order`).
        let bound = weight_so_far + u64::from(word.count_ones()) * needed as u64;
        if let Some((bw, _)) = best {
            if bound >= *bw {
                break;
            }
        }
        let word_bits = bits_of(word as usize, n);
        let compatible = chosen
            .iter()
            .all(|&c| hamming_distance(&bits_of(c as usize, n), &word_bits) >= d_min);
        if !compatible {
            continue;
        }
        chosen.push(word);
        let done = dfs(
            order,
            n,
            m,
            d_min,
            idx + 1,
            weight_so_far + u64::from(word.count_ones()),
            chosen,
            best,
            nodes,
        );
        chosen.pop();
        if !done {
            return false;
        }
    }
    true
}

fn greedy(order: &[u32], m: usize, d_min: usize) -> Option<Vec<u32>> {
    let n = 32 - (order.len() as u32 - 1).leading_zeros();
    let n = n.max(1) as usize;
    let mut picked: Vec<u32> = Vec::with_capacity(m);
    for &word in order {
        let word_bits = bits_of(word as usize, n);
        if picked
            .iter()
            .all(|&c| hamming_distance(&bits_of(c as usize, n), &word_bits) >= d_min)
        {
            picked.push(word);
            if picked.len() == m {
                return Some(picked);
            }
        }
    }
    None
}

fn to_codebook(n: usize, words: &[u32]) -> Result<Codebook> {
    let mut sorted = words.to_vec();
    sorted.sort_unstable();
    Codebook::new(n, sorted.iter().map(|&w| bits_of(w as usize, n)).collect())
}
