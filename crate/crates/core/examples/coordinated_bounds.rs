//! Coordinated bounds: finite-size values next to their per-frequency limits.
//!
//! cargo run --example coordinated_bounds

use adder_capacity::coordinated::{
    coord_large_gamma_asymptote, coord_lower_asymptotic, coord_lower_finite, coord_upper_asymptotic,
    coord_upper_finite,
};
use adder_capacity::{ChannelConfig, SeriesControl};

fn main() -> adder_capacity::Result<()> {
    let ctrl = SeriesControl::default();

    println!("finite instances (bits per channel use)");
    println!("{:>5} {:>5} {:>12} {:>12}", "Q", "S", "lower", "upper");
    for (q, s) in [(2, 2), (3, 4), (10, 10), (100, 150), (1000, 1000)] {
        let cfg = ChannelConfig::new(q, s)?;
        println!("{q:>5} {s:>5} {:>12.6} {:>12.6}", coord_lower_finite(&cfg).bits, coord_upper_finite(&cfg).bits);
    }

    println!("\nper-frequency limits");
    println!("{:>8} {:>12} {:>12} {:>14}", "gamma", "lower", "upper", "1/2 log2(2pi e g)");
    for g in [0.5, 1.0, 2.0, 10.0, 100.0, 1000.0] {
        println!(
            "{g:>8} {:>12.6} {:>12.6} {:>14.6}",
            coord_lower_asymptotic(g, &ctrl)?.bits,
            coord_upper_asymptotic(g)?.bits,
            coord_large_gamma_asymptote(g)?
        );
    }
    Ok(())
}
