//! Monte Carlo estimates against analytic and enumerated values.

use std::time::Instant;

use adder_capacity::coordinated::coord_lower_finite;
use adder_capacity::simulator::{estimate_entropy, estimate_mi, sample_output, Estimator, SimulationConfig};
use adder_capacity::uncoordinated::{single_user_mi, uc_unif_asymptotic};
use adder_capacity::verify::random_distribution;
use adder_capacity::{ChannelConfig, InputDistribution, SeriesControl};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn uniform_sim(q: usize, s: usize, n: usize, seed: u64) -> SimulationConfig {
    let cfg = ChannelConfig::new(q, s).unwrap();
    SimulationConfig::new(cfg, InputDistribution::uniform(q).unwrap(), n, seed, 4).unwrap()
}

#[test]
fn balanced_output_frequency() {
    let cfg = ChannelConfig::new(2, 2).unwrap();
    let d = InputDistribution::uniform(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 1_000_000;
    let hits = (0..n).filter(|_| sample_output(&cfg, &d, &mut rng).unwrap() == [1, 1]).count();
    let freq = hits as f64 / n as f64;
    assert!((freq - 0.5).abs() <= 3.0 * (0.25 / n as f64).sqrt(), "{freq}");
}

#[test]
fn entropy_two_by_two() {
    let e = estimate_entropy(&uniform_sim(2, 2, 1_000_000, 42), Estimator::PlugIn).unwrap();
    assert!(e.std_error > 0.0);
    assert!((e.estimate - 1.5).abs() <= 3.0 * e.std_error, "{e:?}");
    assert_eq!(e.samples_used, 1_000_000);
}

#[test]
fn entropy_three_by_four() {
    let cfg = ChannelConfig::new(3, 4).unwrap();
    let e = estimate_entropy(&uniform_sim(3, 4, 1_000_000, 42), Estimator::MillerMadow).unwrap();
    let reference = coord_lower_finite(&cfg).bits;
    assert!((e.estimate - reference).abs() <= 3.0 * e.std_error, "{e:?} vs {reference}");
}

#[test]
fn mi_two_by_two() {
    let e = estimate_mi(&uniform_sim(2, 2, 1_000_000, 42)).unwrap();
    assert!((e.estimate - 0.5).abs() <= 3.0 * e.std_error, "{e:?}");
}

#[test]
fn mi_random_small_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for k in 0..20 {
        let q = rng.random_range(2..=6);
        let s = rng.random_range(1..=12);
        let cfg = ChannelConfig::new(q, s).unwrap();
        let dist = random_distribution(&mut rng, q);
        let sim = SimulationConfig::new(cfg, dist.clone(), 100_000, 1000 + k, 3).unwrap();
        let e = estimate_mi(&sim).unwrap();
        let exact = single_user_mi(&cfg, &dist).unwrap();
        assert!((e.estimate - exact).abs() <= 4.0 * e.std_error, "Q={q} S={s}: {e:?} vs {exact}");
    }
}

#[test]
fn mi_near_optimal_load_tracks_series() {
    let start = Instant::now();
    let e = estimate_mi(&uniform_sim(50, 67, 10_000_000, 5)).unwrap();
    let per_sub = 67.0 * e.estimate / 50.0;
    let series = uc_unif_asymptotic(1.34, &SeriesControl::default()).unwrap().bits;
    assert!((per_sub - series).abs() < 0.02, "{per_sub} vs {series}");
    eprintln!("Q=50 S=67 n=1e7 MI estimate took {:?}", start.elapsed());
}

#[test]
fn miller_madow_reduces_bias() {
    let (mut plug, mut mm) = (0.0, 0.0);
    for seed in 0..100 {
        let sim = uniform_sim(2, 2, 1000, seed);
        plug += estimate_entropy(&sim, Estimator::PlugIn).unwrap().estimate - 1.5;
        mm += estimate_entropy(&sim, Estimator::MillerMadow).unwrap().estimate - 1.5;
    }
    assert!((mm / 100.0).abs() < (plug / 100.0).abs(), "plug-in {plug}, miller-madow {mm}");
}

#[test]
fn stream_count_changes_draws_not_validity() {
    let cfg = ChannelConfig::new(3, 3).unwrap();
    let d = InputDistribution::uniform(3).unwrap();
    let one = estimate_mi(&SimulationConfig::new(cfg, d.clone(), 200_000, 8, 1).unwrap()).unwrap();
    let many = estimate_mi(&SimulationConfig::new(cfg, d.clone(), 200_000, 8, 7).unwrap()).unwrap();
    let again = estimate_mi(&SimulationConfig::new(cfg, d.clone(), 200_000, 8, 7).unwrap()).unwrap();
    assert_eq!(many, again);
    let exact = single_user_mi(&cfg, &d).unwrap();
    for e in [one, many] {
        assert!((e.estimate - exact).abs() <= 4.0 * e.std_error);
    }
}
