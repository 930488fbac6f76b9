//! Seeded Monte Carlo estimates with standard errors.
//!
//! cargo run --release --example monte_carlo

use adder_capacity::coordinated::coord_lower_finite;
use adder_capacity::simulator::{estimate_entropy, estimate_mi, Estimator, SimulationConfig};
use adder_capacity::uncoordinated::single_user_mi;
use adder_capacity::{ChannelConfig, InputDistribution};

fn main() -> adder_capacity::Result<()> {
    for (q, s) in [(2, 2), (3, 4), (8, 10)] {
        let cfg = ChannelConfig::new(q, s)?;
        let dist = InputDistribution::uniform(q)?;
        let sim = SimulationConfig::new(cfg, dist.clone(), 1_000_000, 42, 4)?;

        let mi = estimate_mi(&sim)?;
        let exact = single_user_mi(&cfg, &dist)?;
        println!("Q={q} S={s}");
        println!("  I(X1;Y)   {:.5} ± {:.1e}   exact {exact:.5}", mi.estimate, mi.std_error);

        let exact = coord_lower_finite(&cfg).bits;
        for est in [Estimator::PlugIn, Estimator::MillerMadow] {
            let h = estimate_entropy(&sim, est)?;
            println!("  H(Y) {est:?}  {:.5} ± {:.1e}   exact {exact:.5}", h.estimate, h.std_error);
        }
    }
    Ok(())
}
