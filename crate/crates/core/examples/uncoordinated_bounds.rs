//! Uncoordinated sum rates: uniform and distorted inputs against the upper bound.
//!
//! cargo run --example uncoordinated_bounds

use adder_capacity::uncoordinated::{
    cached_gamma_star, distorted_distribution, uc_lower_asymptotic, uc_sum_rate, uc_unif_asymptotic,
    uc_upper_asymptotic, uc_upper_finite,
};
use adder_capacity::{ChannelConfig, InputDistribution, SeriesControl};

fn main() -> adder_capacity::Result<()> {
    let ctrl = SeriesControl::default();
    let gamma_star = cached_gamma_star()?.gamma_star;

    println!("{:>4} {:>5} {:>10} {:>10} {:>10}", "Q", "S", "uniform", "distorted", "upper");
    for (q, s) in [(2, 2), (4, 8), (10, 40), (50, 67), (100, 500)] {
        let cfg = ChannelConfig::new(q, s)?;
        let uniform = uc_sum_rate(&cfg, &InputDistribution::uniform(q)?)?.bits;
        let distorted = match distorted_distribution(&cfg, gamma_star) {
            Ok(d) => format!("{:.6}", uc_sum_rate(&cfg, &d)?.bits),
            Err(_) => "-".into(),
        };
        println!("{q:>4} {s:>5} {uniform:>10.6} {distorted:>10} {:>10.6}", uc_upper_finite(&cfg).bits);
    }

    println!("\n{:>6} {:>10} {:>10} {:>10}", "gamma", "uniform", "lower", "upper");
    for g in [0.25, 0.5, 1.0, gamma_star, 2.0, 5.0, 20.0, 500.0] {
        println!(
            "{g:>6.3} {:>10.6} {:>10.6} {:>10.6}",
            uc_unif_asymptotic(g, &ctrl)?.bits,
            uc_lower_asymptotic(g, &ctrl)?.bits,
            uc_upper_asymptotic(g)?.bits
        );
    }
    Ok(())
}
