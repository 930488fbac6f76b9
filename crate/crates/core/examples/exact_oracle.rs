//! Brute-force enumeration of the output law, compared with the closed forms.
//!
//! cargo run --example exact_oracle

use adder_capacity::coordinated::coord_lower_finite;
use adder_capacity::oracle::{enumerate_output_distribution, exact_entropy, exact_single_user_mi};
use adder_capacity::uncoordinated::single_user_mi;
use adder_capacity::{ChannelConfig, InputDistribution};

fn main() -> adder_capacity::Result<()> {
    let cfg = ChannelConfig::new(3, 3)?;
    let dist = InputDistribution::new(vec![0.5, 0.3, 0.2])?;
    let out = enumerate_output_distribution(&cfg, &dist)?;
    println!("output law for Q=3, S=3, p=(0.5, 0.3, 0.2):");
    for (y, p) in out.entries() {
        println!("  {y:?}  {p:.6}");
    }
    println!("total mass {:.15}", out.total());

    println!("\n{:>3} {:>3} {:>22} {:>22}", "Q", "S", "H(Y) enum - formula", "I enum - formula");
    for (q, s) in [(2, 5), (3, 6), (4, 8), (6, 10)] {
        let cfg = ChannelConfig::new(q, s)?;
        let uniform = InputDistribution::uniform(q)?;
        let h = exact_entropy(&enumerate_output_distribution(&cfg, &uniform)?) - coord_lower_finite(&cfg).bits;
        let i = exact_single_user_mi(&cfg, &uniform)? - single_user_mi(&cfg, &uniform)?;
        println!("{q:>3} {s:>3} {h:>22.3e} {i:>22.3e}");
    }
    Ok(())
}
