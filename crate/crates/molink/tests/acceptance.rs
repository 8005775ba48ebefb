//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with its measured margins. Statistical gates run on fixed
//! seeds, so a green suite stays green.

use std::path::PathBuf;

use molink::experiments::passband::has_local_peak_near;
use molink::experiments::pathloss::log_log_slope;
use molink::experiments::{self, pulse};
use molink::mc::simulate_parallel;
use molink::{ExperimentConfig, ResultTable};
use molink_core::channel::{transfer_gain, ChannelParams, Complex64};
use molink_core::fec::{
    dhw_decode, hamming_encode, isifree_decode, isifree_encode, rm84_decode, rm84_encode,
    IsiFreeTable,
};
use molink_core::particle::SimConfig;
use molink_core::quad;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn load_config(name: &str) -> ExperimentConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()));
    ExperimentConfig::from_toml(&text).expect("shipped config must validate")
}

fn series<'t>(t: &'t ResultTable, name: &str) -> &'t molink::Series {
    t.series_named(name).unwrap_or_else(|| panic!("missing series {name}"))
}

/// One-sided z for a 0.05 family-wise significance across `checks` gates.
fn family_z(checks: usize) -> f64 {
    // Bonferroni: 0.05 / checks, via the inverse normal tail. Coarse table
    // is enough for gate slack.
    let alpha = 0.05 / checks as f64;
    match alpha {
        a if a >= 0.05 => 1.6449,
        a if a >= 0.01 => 2.3263,
        a if a >= 0.005 => 2.5758,
        a if a >= 0.001 => 3.0902,
        a if a >= 0.0005 => 3.2905,
        _ => 3.8906,
    }
}

#[test]
fn c01_analytic_monte_carlo_equivalence() {
    // Ten randomized channel configurations; the walker's empirical CDF must
    // sit within three binomial standard errors of the closed form (or its
    // degradation-weighted quadrature) at five grid-aligned times each.
    let n: u64 = 1_000_000;
    let mut gen = ChaCha8Rng::seed_from_u64(20_240_101);
    let mut worst: f64 = 0.0;

    for case in 0..10u64 {
        let d = 0.8 + 3.2 * gen.gen::<f64>();
        let diffusivity = 1.0 + 79.0 * gen.gen::<f64>();
        let ratio = 0.8 + 2.2 * gen.gen::<f64>();
        let three_d = case % 2 == 0;
        let degraded = case % 4 < 2;
        let t_char = d * d / diffusivity;

        let mut params = if three_d {
            ChannelParams::three_dim(d, ratio * d, diffusivity).unwrap()
        } else {
            ChannelParams::one_dim(d, diffusivity).unwrap()
        };
        if degraded {
            params = params.with_half_life((0.3 + 1.7 * gen.gen::<f64>()) * t_char).unwrap();
        }

        let dt = SimConfig::recommended_time_step(&params);
        let t_max = 1.5 * t_char;
        let cfg = SimConfig::new(dt, t_max, n, 77_000 + case);
        let record = simulate_parallel(&params, &cfg, 32).unwrap();

        for i in 0..5 {
            let raw = 0.08 * t_char * (t_max / (0.08 * t_char)).powf(i as f64 / 4.0);
            let t = (raw / dt).round().max(1.0) * dt;
            let expected = params.absorb_cdf_degraded(t).unwrap();
            let got = record.empirical_cdf(t).unwrap();
            let se = (expected * (1.0 - expected) / n as f64).sqrt();
            let dev = (got - expected).abs() / se;
            worst = worst.max(dev);
            assert!(
                dev <= 3.0,
                "case {case} (d={d:.2}, D={diffusivity:.1}, 3d={three_d}, degraded={degraded}) \
                 at t={t:.4}: {got:.6} vs {expected:.6} ({dev:.2} se)"
            );
        }
    }
    println!("criterion 01 analytic-vs-monte-carlo: PASS (worst deviation {worst:.2} se)");
}

#[test]
fn c02_transfer_function_laplace() {
    // Numerical Laplace transform of the 1-D first-passage rate against the
    // closed-form exponential, 1e-6 relative.
    let mut worst: f64 = 0.0;
    for (d, diffusivity) in [(1.0, 1.0), (2.0, 0.5)] {
        let params = ChannelParams::one_dim(d, diffusivity).unwrap();
        for s in [0.5, 1.0, 2.0] {
            // Tail beyond T is bounded by d e^{-sT} / (s sqrt(4 pi D T^3)).
            let horizon = 160.0 / s;
            let q = quad::integrate(
                |t| params.absorb_rate(t).unwrap_or(0.0) * (-s * t).exp(),
                0.0,
                horizon,
                1e-13,
                1e-10,
            )
            .unwrap();
            let expected = transfer_gain(d, diffusivity, Complex64::new(s, 0.0)).unwrap().re;
            let rel = (q.value - expected).abs() / expected;
            worst = worst.max(rel);
            assert!(rel <= 1e-6, "d={d}, D={diffusivity}, s={s}: rel err {rel:.3e}");
        }
    }
    println!("criterion 02 transfer-function: PASS (worst relative error {worst:.2e})");
}

#[test]
fn c03_pathloss_slopes() {
    let cfg = load_config("pathloss_table.toml");
    let t = experiments::run(&cfg, 42).unwrap();
    let slope = |name: &str| log_log_slope(&t.axis, &series(&t, name).values);
    let total = slope("total_hitting_response");
    let em = slope("em_pathloss");
    let peak = slope("peak_hitting_amplitude");
    assert!((total + 1.0).abs() <= 0.05, "total response slope {total}");
    assert!((em + 2.0).abs() <= 0.05, "em slope {em}");
    assert!((peak + 3.0).abs() <= 0.05, "peak response slope {peak}");
    println!(
        "criterion 03 pathloss-slopes: PASS (total {total:.3}, em {em:.3}, peak {peak:.3})"
    );
}

#[test]
fn c04_sir_curves() {
    let cfg = load_config("sir_sweep.toml");
    let t = experiments::run(&cfg, 42).unwrap();
    let order = ["sir_lambda0", "sir_hl8s", "sir_hl4s", "sir_hl2s"];
    for name in order {
        let s = series(&t, name);
        for w in s.values.windows(2) {
            assert!(w[1] > w[0], "{name} not strictly increasing");
        }
    }
    for i in 0..t.axis.len() {
        for pair in order.windows(2) {
            let lo = series(&t, pair[0]).values[i];
            let hi = series(&t, pair[1]).values[i];
            assert!(
                hi > lo,
                "at t_s={}: {} ({lo}) !< {} ({hi})",
                t.axis[i],
                pair[0],
                pair[1]
            );
        }
    }
    println!(
        "criterion 04 sir-curves: PASS ({} points, 4 curves monotone and ordered by half-life)",
        t.axis.len()
    );
}

#[test]
fn c05_fec_ordering() {
    let cfg = load_config("fec_vs_drift.toml");
    let t = experiments::run(&cfg, 42).unwrap();
    let order = ["isifree_421", "moco_reference", "dhw_42", "rm_84"];

    // Low-drift gate: the first two sweep points, gaps above three combined
    // standard errors.
    let mut min_gap = f64::INFINITY;
    for point in 0..2 {
        for pair in order.windows(2) {
            let a = series(&t, pair[0]);
            let b = series(&t, pair[1]);
            let gap = b.values[point] - a.values[point];
            let se = (a.stderrs[point].powi(2) + b.stderrs[point].powi(2)).sqrt();
            min_gap = min_gap.min(gap / se);
            assert!(
                gap > 3.0 * se,
                "v={}: {} ({}) not below {} ({}) by 3 se (gap {:+.1} se)",
                t.axis[point],
                pair[0],
                a.values[point],
                pair[1],
                b.values[point],
                gap / se
            );
        }
    }

    // High-drift tail: every curve collapses toward zero.
    let last = t.axis.len() - 1;
    for name in order {
        let s = series(&t, name);
        assert!(
            s.values[last] < 0.005,
            "{name} still at {} at v={}",
            s.values[last],
            t.axis[last]
        );
        assert!(s.values[last] < s.values[0], "{name} did not fall over the sweep");
    }
    println!("criterion 05 fec-ordering: PASS (smallest low-drift gap {min_gap:.1} se)");
}

#[test]
fn c06_table_fidelity() {
    let table = IsiFreeTable::standard_4_2_1();
    table.validate().unwrap();
    assert_eq!(
        table.to_text(),
        "00 0000 1111\n01 0001 1000\n10 0011 1100\n11 0111 1110\n"
    );
    let stream = isifree_encode(&[0, 1, 1, 0, 1, 1], &table, 0).unwrap();
    assert_eq!(stream, vec![0, 0, 0, 1, 1, 1, 0, 0, 0, 1, 1, 1]);
    println!("criterion 06 table-fidelity: PASS (byte-exact table and worked encoding)");
}

#[test]
fn c07_code_structure_suite() {
    // Hamming(7,4): all 112 single-flip cases.
    for msg_val in 0..16usize {
        let message: Vec<u8> = (0..4).rev().map(|i| ((msg_val >> i) & 1) as u8).collect();
        let cw = hamming_encode(3, &message).unwrap();
        for pos in 0..7 {
            let mut rx = cw.clone();
            rx[pos] ^= 1;
            let got = molink_core::fec::hamming_decode(3, &rx).unwrap();
            assert_eq!(got.message, message, "hamming msg {msg_val} flip {pos}");
        }
    }

    // RM(8,4): exhaustive minimum distance 4.
    let rm_words: Vec<Vec<u8>> = (0..16usize)
        .map(|v| {
            let bits: Vec<u8> = (0..4).rev().map(|i| ((v >> i) & 1) as u8).collect();
            rm84_encode(&bits).unwrap()
        })
        .collect();
    let mut min_dist = usize::MAX;
    for (i, a) in rm_words.iter().enumerate() {
        for b in &rm_words[i + 1..] {
            min_dist = min_dist.min(a.iter().zip(b).filter(|(x, y)| x != y).count());
        }
    }
    assert_eq!(min_dist, 4, "rm84 minimum distance");
    for (v, cw) in rm_words.iter().enumerate() {
        for pos in 0..8 {
            let mut rx = cw.clone();
            rx[pos] ^= 1;
            let bits: Vec<u8> = (0..4).rev().map(|i| ((v >> i) & 1) as u8).collect();
            assert_eq!(rm84_decode(&rx).unwrap(), bits);
        }
    }

    // DHW(4): decoding invariant under any bit permutation, all 16 inputs.
    let perms4 = permutations(&[0, 1, 2, 3]);
    for v in 0..16usize {
        let word: Vec<u8> = (0..4).rev().map(|i| ((v >> i) & 1) as u8).collect();
        let base = dhw_decode(&word, 2).unwrap();
        for p in &perms4 {
            let shuffled: Vec<u8> = p.iter().map(|&i| word[i]).collect();
            assert_eq!(dhw_decode(&shuffled, 2).unwrap(), base, "word {v}");
        }
    }

    // ISI-free: exhaustive noiseless round-trip for all streams of up to six
    // messages.
    let table = IsiFreeTable::standard_4_2_1();
    let mut streams = 0u64;
    for len in 1..=6usize {
        for packed in 0..(1usize << (2 * len)) {
            let messages: Vec<u8> =
                (0..2 * len).rev().map(|i| ((packed >> i) & 1) as u8).collect();
            let encoded = isifree_encode(&messages, &table, 0).unwrap();
            assert_eq!(isifree_decode(&encoded, &table, 0).unwrap(), messages);
            streams += 1;
        }
    }
    println!(
        "criterion 07 code-structure: PASS (112 hamming flips, rm84 d=4, dhw permutation \
         invariance, {streams} isi-free round trips)"
    );
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

#[test]
fn c08_detector_suite() {
    let cfg = load_config("detector_comparison.toml");
    let t = experiments::run(&cfg, 42).unwrap();
    let memories = [2usize, 5, 10];
    let points = t.axis.len();

    // Family-wise slack across every gate in this criterion.
    let checks = memories.len() * points * 2 + (memories.len() * 3 + 1) * (points - 1);
    let z = family_z(checks);

    // Coherent ordering MAP <= MMSE <= DFF at every point and memory.
    for &i_mem in &memories {
        let map = series(&t, &format!("map_i{i_mem}"));
        let mmse = series(&t, &format!("mmse_i{i_mem}"));
        let dff = series(&t, &format!("dff_i{i_mem}"));
        for p in 0..points {
            let slack_a = z * (map.stderrs[p].powi(2) + mmse.stderrs[p].powi(2)).sqrt();
            assert!(
                map.values[p] <= mmse.values[p] + slack_a,
                "I={i_mem} snr={:.1}: map {} above mmse {}",
                t.axis[p],
                map.values[p],
                mmse.values[p]
            );
            let slack_b = z * (mmse.stderrs[p].powi(2) + dff.stderrs[p].powi(2)).sqrt();
            assert!(
                mmse.values[p] <= dff.values[p] + slack_b,
                "I={i_mem} snr={:.1}: mmse {} above dff {}",
                t.axis[p],
                mmse.values[p],
                dff.values[p]
            );
        }
    }

    // Every detector series nonincreasing in SNR.
    for s in &t.series {
        for p in 0..points - 1 {
            let slack = z * (s.stderrs[p].powi(2) + s.stderrs[p + 1].powi(2)).sqrt();
            assert!(
                s.values[p + 1] <= s.values[p] + slack,
                "{} rises from {} to {} between snr {:.1} and {:.1}",
                s.name,
                s.values[p],
                s.values[p + 1],
                t.axis[p],
                t.axis[p + 1]
            );
        }
    }

    // The non-coherent-vs-coherent relation is reported, not gated: the
    // underlying model is underdetermined.
    println!("criterion 08 detector-suite: PASS (orderings and monotonicity at I=2,5,10)");
    for note in &t.notes {
        println!("criterion 08 report: {note}");
    }
}

#[test]
fn c09_passband_peaks() {
    let cfg = load_config("passband_spectrum.toml");
    let t = experiments::run(&cfg, 42).unwrap();
    let mags = &series(&t, "magnitude").values;
    for fc in &cfg.section_passband().unwrap().carrier_frequencies_hz {
        assert!(
            has_local_peak_near(&t.axis, mags, *fc),
            "no local maximum within one bin of {fc} Hz"
        );
    }
    println!("criterion 09 passband-peaks: PASS (3 carriers resolved within one bin)");
}

#[test]
fn c10_pulse_shaping() {
    let cfg = load_config("pulse_shaping.toml");
    let (_, summary) = pulse::run_with_summary(&cfg, 42).unwrap();
    assert!(
        summary.tail_reduction >= 0.5,
        "tail reduction {} below 50%",
        summary.tail_reduction
    );
    println!(
        "criterion 10 pulse-shaping: PASS (post-peak tail reduced by {:.1}%)",
        100.0 * summary.tail_reduction
    );
}

#[test]
fn c11_determinism() {
    // Identical config and seed must reproduce byte-identical tables, both
    // for analytic and Monte Carlo experiments.
    let sir = load_config("sir_sweep.toml");
    let a = experiments::run(&sir, 42).unwrap();
    let b = experiments::run(&sir, 42).unwrap();
    assert_eq!(a.to_csv(), b.to_csv(), "sir sweep not reproducible");

    let fec_small = r#"
[experiment]
id = "fec_vs_drift"
seed = 9

[channel]
distance_um = 1.0
diffusivity_um2_per_s = 1.0

[fec_vs_drift]
drift_um_per_s = [1.0, 8.0]
codewords_per_point = 5000
symbol_period_s = 1.0
decoder_trials = 5000
batches = 5
"#;
    let cfg = ExperimentConfig::from_toml(fec_small).unwrap();
    let a = experiments::run(&cfg, 9).unwrap();
    let b = experiments::run(&cfg, 9).unwrap();
    assert_eq!(a.to_csv(), b.to_csv(), "fec sweep not reproducible");
    println!("criterion 11 determinism: PASS (byte-identical CSV on re-run)");
}
