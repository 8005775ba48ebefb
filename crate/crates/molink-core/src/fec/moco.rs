//! Codeword-transition distance and codebook search.
//!
//! The distance between codewords is `-log Pr{x_j | x_i}` under a
//! transposition channel, estimated by Monte Carlo with add-one (Laplace)
//! smoothing over the `2^n` outcome space so unobserved transitions stay
//! finite. Codebook construction maximizes the minimum pairwise distance by
//! exhaustive subset enumeration, which is why the block length is guarded.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::transposition::{transposition_channel, TranspositionModel};
use super::{bits_of, index_of, Codebook};
use crate::math;
use crate::{Error, Result};

const MAX_SEARCH_BLOCK: usize = 6;
const MAX_SEARCH_SUBSETS: u128 = 20_000_000;

/// Monte Carlo estimate of `Pr{to | from}` with Laplace smoothing:
/// `(hits + 1) / (trials + 2^n)`.
pub fn transition_probability<R: Rng + ?Sized>(
    from: &[u8],
    to: &[u8],
    model: &TranspositionModel,
    trials: u32,
    rng: &mut R,
) -> Result<f64> {
    if from.len() != to.len() {
        return Err(Error::LengthMismatch { expected: from.len(), got: to.len() });
    }
    if trials == 0 {
        return Err(Error::InvalidParam("transition estimation needs trials >= 1".into()));
    }
    let mut hits = 0u64;
    for _ in 0..trials {
        if transposition_channel(from, model, rng)? == to {
            hits += 1;
        }
    }
    let outcomes = (1u64 << from.len()) as f64;
    Ok((hits as f64 + 1.0) / (f64::from(trials) + outcomes))
}

/// `-log` of the estimated transition probability.
pub fn moco_distance<R: Rng + ?Sized>(
    from: &[u8],
    to: &[u8],
    model: &TranspositionModel,
    trials: u32,
    rng: &mut R,
) -> Result<f64> {
    Ok(-math::ln(transition_probability(from, to, model, trials, rng)?))
}

/// Full smoothed transition matrix: `row[from][to]` over all `2^n` words.
/// Each row consumes `trials` channel draws on its own RNG substream.
fn transition_matrix(
    n: usize,
    model: &TranspositionModel,
    trials: u32,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    let words = 1usize << n;
    let mut matrix = Vec::with_capacity(words);
    for from in 0..words {
        let from_bits = bits_of(from, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(from as u64);
        let mut hist = vec![0u64; words];
        for _ in 0..trials {
            let out = transposition_channel(&from_bits, model, &mut rng)?;
            hist[index_of(&out)] += 1;
        }
        let denom = f64::from(trials) + words as f64;
        matrix.push(hist.iter().map(|&h| (h as f64 + 1.0) / denom).collect());
    }
    Ok(matrix)
}

/// Exhaustive search for the size-`m` codebook maximizing the minimum
/// pairwise transition distance; ties resolve to the lexicographically first
/// subset. Deterministic for a given `seed`.
pub fn moco_search(
    n: usize,
    m: usize,
    model: &TranspositionModel,
    trials: u32,
    seed: u64,
) -> Result<Codebook> {
    model.validate()?;
    if n == 0 || m < 1 {
        return Err(Error::InvalidParam("moco_search needs n >= 1 and m >= 1".into()));
    }
    let words = 1usize << n;
    if m > words {
        return Err(Error::Infeasible(alloc::format!(
            "cannot pick {m} codewords of length {n}"
        )));
    }
    if n > MAX_SEARCH_BLOCK || subset_count(words, m) > MAX_SEARCH_SUBSETS {
        return Err(Error::SearchSpaceExceeded(alloc::format!(
            "moco_search is bounded to n <= {MAX_SEARCH_BLOCK} and {MAX_SEARCH_SUBSETS} subsets"
        )));
    }

    // The full code has no free pairs to optimize; hand it back directly.
    if m == words {
        let codewords = (0..words).map(|v| bits_of(v, n)).collect();
        return Codebook::new(n, codewords);
    }

    let probs = transition_matrix(n, model, trials, seed)?;
    let dist = |i: usize, j: usize| -math::ln(probs[i][j]);

    let mut subset: Vec<usize> = (0..m).collect();
    let mut best_subset = subset.clone();
    let mut best_objective = f64::NEG_INFINITY;
    loop {
        let mut objective = f64::INFINITY;
        'pairs: for (a, &i) in subset.iter().enumerate() {
            for (b, &j) in subset.iter().enumerate() {
                if a == b {
                    continue;
                }
                let d = dist(i, j);
                if d < objective {
                    objective = d;
                    if objective <= best_objective {
                        break 'pairs;
                    }
                }
            }
        }
        if objective > best_objective {
            best_objective = objective;
            best_subset = subset.clone();
        }
        if !next_combination(&mut subset, words) {
            break;
        }
    }

    Codebook::new(n, best_subset.iter().map(|&v| bits_of(v, n)).collect())
}

/// Widely cited rate-1/2 instance for block length 4.
pub fn reference_codebook_4() -> Codebook {
    Codebook::new(
        4,
        vec![vec![0, 0, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 1, 0], vec![1, 1, 1, 0]],
    )
    .expect("static codebook is well-formed")
}

fn subset_count(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k.min(n - k) {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
        if acc > MAX_SEARCH_SUBSETS {
            return u128::MAX;
        }
    }
    acc
}

/// Advances `subset` to the next lexicographic k-combination of `0..limit`.
fn next_combination(subset: &mut [usize], limit: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] != i + limit - k {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fec::{hamming_distance, min_pairwise_distance};

    fn toy_model() -> TranspositionModel {
        TranspositionModel::SlotDelay { q: 0.1 }
    }

    /// Exact outcome distribution of the slot-delay channel for one isolated
    /// word: enumerate every delay pattern of the released molecules.
    fn enumerate_slot_delay(from: &[u8], q: f64) -> Vec<f64> {
        let n = from.len();
        let ones: Vec<usize> = (0..n).filter(|&i| from[i] == 1).collect();
        let mut out = vec![0.0; 1 << n];
        for pattern in 0u32..(1 << ones.len()) {
            let mut word = vec![0u8; n];
            let mut prob = 1.0;
            for (bit, &slot) in ones.iter().enumerate() {
                let delayed = (pattern >> bit) & 1 == 1;
                prob *= if delayed { q } else { 1.0 - q };
                let target = slot + usize::from(delayed);
                if target < n {
                    word[target] = 1;
                }
            }
            out[index_of(&word)] += prob;
        }
        out
    }

    #[test]
    fn identity_transition_has_zero_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let model = TranspositionModel::SlotDelay { q: 0.0 };
        let d = moco_distance(&[1, 0, 0, 0], &[1, 0, 0, 0], &model, 50_000, &mut rng).unwrap();
        // Smoothing keeps it slightly above zero.
        assert!(d < 1e-3, "{d}");
    }

    #[test]
    fn distance_decreases_with_transition_probability() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let model = toy_model();
        // 1000 -> 0100 needs one delay (prob q); 1000 -> 1000 needs none.
        let d_stay = moco_distance(&[1, 0, 0, 0], &[1, 0, 0, 0], &model, 50_000, &mut rng).unwrap();
        let d_move = moco_distance(&[1, 0, 0, 0], &[0, 1, 0, 0], &model, 50_000, &mut rng).unwrap();
        assert!(d_stay < d_move);
    }

    #[test]
    fn estimate_matches_exhaustive_enumeration() {
        // Brute-force oracle over the 4-bit transition space.
        let q = 0.1;
        let exact = enumerate_slot_delay(&[1, 0, 0, 0], q);
        let p_exact = exact[index_of(&[0, 1, 0, 0])];
        assert!((p_exact - q).abs() < 1e-12, "single molecule: delay prob is q itself");

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let trials = 200_000;
        let est = transition_probability(
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &TranspositionModel::SlotDelay { q },
            trials,
            &mut rng,
        )
        .unwrap();
        // Smoothing shift plus 3-sigma sampling noise.
        let smoothing = 16.0 / (f64::from(trials) + 16.0);
        let se = math::sqrt(q * (1.0 - q) / f64::from(trials));
        assert!((est - q).abs() <= 3.0 * se + smoothing, "{est} vs {q}");

        let d = -math::ln(est);
        assert!((d - (-math::ln(q))).abs() < 0.05, "{d}");
    }

    #[test]
    fn multi_molecule_enumeration_checks_out() {
        // 1100 -> 0110: first molecule delays, second stays on an occupied
        // slot or delays; enumeration handles the stacking.
        let q = 0.2;
        let exact = enumerate_slot_delay(&[1, 1, 0, 0], q);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for to in [[0u8, 1, 1, 0], [1, 1, 0, 0], [0, 1, 0, 0]] {
            let est = transition_probability(
                &[1, 1, 0, 0],
                &to,
                &TranspositionModel::SlotDelay { q },
                200_000,
                &mut rng,
            )
            .unwrap();
            let p = exact[index_of(&to)];
            let band = 3.0 * math::sqrt(p.max(1e-6) * (1.0 - p) / 200_000.0) + 1e-4;
            assert!((est - p).abs() <= band, "to {to:?}: {est} vs {p}");
        }
    }

    #[test]
    fn zero_trials_is_degenerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!(moco_distance(&[1], &[1], &toy_model(), 0, &mut rng).is_err());
    }

    #[test]
    fn full_code_is_returned_lexicographically() {
        let cb = moco_search(2, 4, &toy_model(), 100, 9).unwrap();
        assert_eq!(
            cb.codewords,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
    }

    #[test]
    fn search_beats_or_matches_the_reference_codebook() {
        let model = TranspositionModel::FirstPassage {
            distance: 1.0,
            diffusivity: 1.0,
            drift: 1.0,
            symbol_period: 1.0,
        };
        let trials = 4_000;
        let seed = 11;
        let searched = moco_search(4, 4, &model, trials, seed).unwrap();

        let probs = transition_matrix(4, &model, trials, seed).unwrap();
        let objective = |cb: &Codebook| {
            let mut min = f64::INFINITY;
            for (a, x) in cb.codewords.iter().enumerate() {
                for (b, y) in cb.codewords.iter().enumerate() {
                    if a != b {
                        min = min.min(-math::ln(probs[index_of(x)][index_of(y)]));
                    }
                }
            }
            min
        };
        assert!(
            objective(&searched) >= objective(&reference_codebook_4()) - 1e-12,
            "exhaustive search cannot lose to a fixed codebook under the same model"
        );
    }

    #[test]
    fn flip_model_degenerates_to_hamming_search() {
        // Under i.i.d. flips the transition probability is monotone in the
        // Hamming distance, so the search reduces to max-min distance.
        let model = TranspositionModel::BitFlip { p: 0.1 };
        let cb = moco_search(3, 4, &model, 60_000, 13).unwrap();
        assert_eq!(min_pairwise_distance(&cb.codewords), 2);

        let cb2 = moco_search(4, 2, &model, 60_000, 13).unwrap();
        assert_eq!(hamming_distance(&cb2.codewords[0], &cb2.codewords[1]), 4);
    }

    #[test]
    fn search_guard_rejects_oversized_spaces() {
        assert!(matches!(
            moco_search(7, 4, &toy_model(), 10, 1),
            Err(Error::SearchSpaceExceeded(_))
        ));
    }
}
