//! Property tests over randomized parameter grids.

use molink_core::channel::{transfer_gain, ChannelParams, Complex64, Dimension};
use molink_core::fec::{dhw_decode, weight};
use molink_core::modulation::{demodulate_noiseless, modulate, Frame, Scheme};
use proptest::prelude::*;

fn arb_channel() -> impl Strategy<Value = ChannelParams> {
    (0.2f64..8.0, 0.5f64..100.0, 0.5f64..20.0, prop::bool::ANY, 0.0f64..2.0).prop_map(
        |(d, diff, rr, three_d, lambda)| {
            let p = if three_d {
                ChannelParams::three_dim(d, rr, diff).unwrap()
            } else {
                ChannelParams::one_dim(d, diff).unwrap()
            };
            p.with_degradation_rate(lambda).unwrap()
        },
    )
}

proptest! {
    #[test]
    fn absorb_cdf_monotone_in_time(params in arb_channel(), t in 1e-3f64..50.0, step in 1.01f64..4.0) {
        let a = params.absorb_cdf(t).unwrap();
        let b = params.absorb_cdf(t * step).unwrap();
        prop_assert!(b >= a, "cdf fell from {a} to {b}");
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn absorb_cdf_nonincreasing_in_distance(params in arb_channel(), t in 1e-2f64..20.0, stretch in 1.05f64..3.0) {
        let near = params.absorb_cdf(t).unwrap();
        let mut far = params;
        far.distance *= stretch;
        let far = far.absorb_cdf(t).unwrap();
        prop_assert!(far <= near + 1e-15, "cdf grew with distance: {near} -> {far}");
    }

    #[test]
    fn degraded_cdf_never_exceeds_plain(params in arb_channel(), t in 1e-2f64..20.0) {
        let degraded = params.absorb_cdf_degraded(t).unwrap();
        let plain = params.absorb_cdf(t).unwrap();
        prop_assert!(degraded <= plain + 1e-9);
        prop_assert!(degraded >= 0.0);
    }

    #[test]
    fn transfer_gain_contracts_and_multiplies(
        d1 in 0.1f64..5.0,
        d2 in 0.1f64..5.0,
        diff in 0.1f64..10.0,
        re in 0.0f64..10.0,
        im in -10.0f64..10.0,
    ) {
        let s = Complex64::new(re, im);
        let h1 = transfer_gain(d1, diff, s).unwrap();
        let h2 = transfer_gain(d2, diff, s).unwrap();
        let h12 = transfer_gain(d1 + d2, diff, s).unwrap();
        prop_assert!(h1.norm() <= 1.0 + 1e-12, "|H| = {} above 1", h1.norm());
        prop_assert!((h1 * h2 - h12).norm() <= 1e-9 * h12.norm().max(1e-300));
    }

    #[test]
    fn taps_telescope_and_validate(params in arb_channel(), t_s in 0.01f64..2.0, k in 1usize..12) {
        let tv = params.channel_taps(t_s, k).unwrap();
        tv.validate().unwrap();
        let total = params.absorb_cdf_degraded(k as f64 * t_s).unwrap();
        prop_assert!((tv.sum() - total).abs() <= 1e-7 * total.max(1e-12) + 1e-9);
    }

    #[test]
    fn modulation_round_trips(bits in prop::collection::vec(0u8..2, 1..40), offset in 0.05f64..0.5) {
        let frame = Frame::new(1.0, 500).unwrap();
        for scheme in [Scheme::Bcsk, Scheme::Ppm { offset }, Scheme::Mosk, Scheme::Mcsk2] {
            let schedule = modulate(&scheme, &bits, &frame).unwrap();
            schedule.validate().unwrap();
            let back = demodulate_noiseless(&scheme, &schedule, bits.len()).unwrap();
            prop_assert_eq!(&back, &bits, "{:?}", scheme);
            for total in schedule.per_symbol_totals(bits.len()) {
                prop_assert!(total <= frame.molecules_per_symbol);
            }
        }
    }

    #[test]
    fn dhw_decoding_ignores_bit_order(word in prop::collection::vec(0u8..2, 6), swaps in prop::collection::vec((0usize..6, 0usize..6), 0..8)) {
        let base = dhw_decode(&word, 2).unwrap();
        let mut shuffled = word.clone();
        for (a, b) in swaps {
            shuffled.swap(a, b);
        }
        prop_assert_eq!(weight(&shuffled), weight(&word));
        prop_assert_eq!(dhw_decode(&shuffled, 2).unwrap(), base);
    }

    #[test]
    fn three_dim_quantities_scale_from_one_dim(
        d in 0.3f64..5.0,
        rr in 0.5f64..20.0,
        diff in 0.5f64..50.0,
        t in 1e-2f64..20.0,
    ) {
        let p3 = ChannelParams::three_dim(d, rr, diff).unwrap();
        let p1 = ChannelParams::one_dim(d, diff).unwrap();
        prop_assert_eq!(p3.dimension, Dimension::Three);
        let f = p3.capture_factor();
        let r3 = p3.absorb_rate(t).unwrap();
        let r1 = p1.absorb_rate(t).unwrap();
        prop_assert!((r3 - f * r1).abs() <= 1e-12 * r1.max(1e-300));
    }
}
