//! Closed-form reductions against brute-force enumeration.

use adder_capacity::coordinated::coord_lower_finite;
use adder_capacity::oracle::{composition_count, enumerate_output_distribution, exact_entropy, exact_single_user_mi};
use adder_capacity::uncoordinated::single_user_mi;
use adder_capacity::verify::random_distribution;
use adder_capacity::{ChannelConfig, InputDistribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SUPPORT_LIMIT: u128 = 100_000;

/// Instances with Q ≤ 12, S ≤ 40 and at most SUPPORT_LIMIT outputs.
fn small_instances() -> Vec<ChannelConfig> {
    let mut out = Vec::new();
    for q in 1..=12 {
        for s in 1..=40 {
            if composition_count(q, s).unwrap() <= SUPPORT_LIMIT {
                out.push(ChannelConfig::new(q, s).unwrap());
            }
        }
    }
    out
}

#[test]
fn uniform_entropy_matches_enumeration() {
    let instances = small_instances();
    assert!(instances.len() > 200);
    for cfg in instances {
        let uniform = InputDistribution::uniform(cfg.q()).unwrap();
        let exact = exact_entropy(&enumerate_output_distribution(&cfg, &uniform).unwrap());
        let formula = coord_lower_finite(&cfg).bits;
        assert!((exact - formula).abs() < 1e-9, "Q={} S={}: {exact} vs {formula}", cfg.q(), cfg.s());
    }
}

#[test]
fn three_by_four_entropy() {
    let cfg = ChannelConfig::new(3, 4).unwrap();
    let out = enumerate_output_distribution(&cfg, &InputDistribution::uniform(3).unwrap()).unwrap();
    assert_eq!(out.len(), 15);
    assert!((exact_entropy(&out) - coord_lower_finite(&cfg).bits).abs() < 1e-10);
}

#[test]
fn mutual_information_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for cfg in small_instances().into_iter().step_by(3) {
        let dist = random_distribution(&mut rng, cfg.q());
        let exact = exact_single_user_mi(&cfg, &dist).unwrap();
        let formula = single_user_mi(&cfg, &dist).unwrap();
        assert!((exact - formula).abs() < 1e-9, "Q={} S={}: {exact} vs {formula}", cfg.q(), cfg.s());
    }
}

#[test]
fn mutual_information_three_by_five() {
    let cfg = ChannelConfig::new(3, 5).unwrap();
    let dist = InputDistribution::new(vec![0.2, 0.5, 0.3]).unwrap();
    let exact = exact_single_user_mi(&cfg, &dist).unwrap();
    assert!((exact - single_user_mi(&cfg, &dist).unwrap()).abs() < 1e-10);
}

#[test]
fn mutual_information_with_zero_probability_frequency() {
    let cfg = ChannelConfig::new(4, 6).unwrap();
    let dist = InputDistribution::new(vec![0.3, 0.0, 0.45, 0.25]).unwrap();
    let exact = exact_single_user_mi(&cfg, &dist).unwrap();
    assert!((exact - single_user_mi(&cfg, &dist).unwrap()).abs() < 1e-10);
}
