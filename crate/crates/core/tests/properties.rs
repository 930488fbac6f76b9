//! Property tests for the invariants of each module.

use std::f64::consts::LOG2_E;

use adder_capacity::coordinated::{coord_lower_finite, coord_upper_finite};
use adder_capacity::numerics::{binomial_pmf_log, log_binomial, log_factorial, truncated_series_sum, SeriesControl};
use adder_capacity::oracle::{composition_count, enumerate_output_distribution, lemma1_check};
use adder_capacity::uncoordinated::{single_user_mi, uc_sum_rate};
use adder_capacity::verify::TestFunction;
use adder_capacity::{ChannelConfig, InputDistribution};
use proptest::prelude::*;

fn distribution(q: usize) -> impl Strategy<Value = InputDistribution> {
    prop::collection::vec(0.0f64..1.0, q).prop_filter_map("degenerate weights", |w| {
        let total: f64 = w.iter().sum();
        if total < 1e-3 {
            return None;
        }
        InputDistribution::new(w.iter().map(|x| x / total).collect()).ok()
    })
}

fn positive_distribution(q: usize) -> impl Strategy<Value = InputDistribution> {
    prop::collection::vec(0.01f64..1.0, q).prop_filter_map("normalization drift", |w| {
        let total: f64 = w.iter().sum();
        InputDistribution::new(w.iter().map(|x| x / total).collect()).ok()
    })
}

fn instance_with_dist(max_q: usize, max_s: usize) -> impl Strategy<Value = (ChannelConfig, InputDistribution)> {
    (1..=max_q, 1..=max_s)
        .prop_flat_map(|(q, s)| (Just(ChannelConfig::new(q, s).unwrap()), distribution(q)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn binomial_pmf_normalizes(n in 0usize..=500, p in 0.0f64..=1.0) {
        let total: f64 = (0..=n).map(|i| binomial_pmf_log(n, i, p).unwrap().weight()).sum();
        prop_assert!((total - 1.0).abs() < 1e-12, "sum {total}");
    }

    #[test]
    fn sum_rate_below_constant_bound((cfg, dist) in instance_with_dist(20, 60)) {
        let rate = uc_sum_rate(&cfg, &dist).unwrap().bits;
        prop_assert!(rate <= (cfg.q() - 1) as f64 * LOG2_E + 1e-9, "rate {rate}");
        prop_assert!(rate <= coord_upper_finite(&cfg).bits + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn log_binomial_symmetric(n in 0usize..100_000, frac in 0.0f64..=1.0) {
        let k = ((n as f64) * frac).floor() as usize;
        prop_assert_eq!(log_binomial(n, k).unwrap(), log_binomial(n, n - k).unwrap());
    }

    #[test]
    fn log_factorial_monotone(n in 0usize..10_000_000) {
        prop_assert!(log_factorial(n + 1) >= log_factorial(n));
    }

    #[test]
    fn series_prefix_reordering_is_stable(
        perm in Just((0..40usize).collect::<Vec<_>>()).prop_shuffle(),
        ratio in -0.9f64..0.9,
    ) {
        let ctrl = SeriesControl::default();
        let term = |i: usize| ratio.powi(i as i32) + (-0.7f64).powi(i as i32) / (i + 1) as f64;
        let straight = truncated_series_sum(term, &ctrl, 40).unwrap();
        let shuffled = truncated_series_sum(|i| if i < 40 { term(perm[i]) } else { term(i) }, &ctrl, 40).unwrap();
        let scale = straight.value.abs().max(1.0);
        prop_assert!((straight.value - shuffled.value).abs() < 1e-12 * scale);
    }

    #[test]
    fn coordinated_lower_below_upper(q in 1usize..=200, s in 1usize..=400) {
        let cfg = ChannelConfig::new(q, s).unwrap();
        prop_assert!(coord_lower_finite(&cfg).bits <= coord_upper_finite(&cfg).bits + 1e-9);
    }

    #[test]
    fn mi_nonnegative((cfg, dist) in instance_with_dist(30, 80)) {
        prop_assert!(single_user_mi(&cfg, &dist).unwrap() >= 0.0);
    }

    #[test]
    fn mi_permutation_invariant(
        (cfg, dist, perm) in (2usize..=12, 1usize..=50).prop_flat_map(|(q, s)| (
            Just(ChannelConfig::new(q, s).unwrap()),
            distribution(q),
            Just((0..q).collect::<Vec<_>>()).prop_shuffle(),
        ))
    ) {
        let permuted = InputDistribution::new(perm.iter().map(|&j| dist.probabilities()[j]).collect()).unwrap();
        let a = single_user_mi(&cfg, &dist).unwrap();
        let b = single_user_mi(&cfg, &permuted).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn enumeration_count_and_mass(
        (cfg, dist) in (1usize..=5, 1usize..=9)
            .prop_flat_map(|(q, s)| (Just(ChannelConfig::new(q, s).unwrap()), positive_distribution(q)))
    ) {
        let out = enumerate_output_distribution(&cfg, &dist).unwrap();
        prop_assert_eq!(Some(out.len() as u128), composition_count(cfg.q(), cfg.s()));
        prop_assert!((out.total() - 1.0).abs() < 1e-12);
        for (y, _) in out.entries() {
            prop_assert_eq!(y.iter().sum::<usize>(), cfg.s());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn marginalization_identity(
        (s, dist) in (1usize..=5, 0usize..=8).prop_flat_map(|(q, s)| (Just(s), distribution(q))),
        which in 0usize..4,
    ) {
        let f = TestFunction::ALL[which];
        let (full, marginal) = lemma1_check(s, &dist, |i| f.eval(i)).unwrap();
        prop_assert!((full - marginal).abs() < 1e-12, "{full} vs {marginal}");
    }
}
