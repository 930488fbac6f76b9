//! Locate the load that maximizes the uniform-input uncoordinated rate.
//!
//! cargo run --example gamma_star

use adder_capacity::uncoordinated::find_gamma_star;
use adder_capacity::SeriesControl;

fn main() -> adder_capacity::Result<()> {
    let ctrl = SeriesControl::default();
    for tol in [1e-2, 1e-4, 1e-6, 1e-8] {
        let r = find_gamma_star(tol, &ctrl)?;
        println!(
            "tol {tol:.0e}: gamma* = {:.10}  c* = {:.10}  ({} iterations, width {:.2e})",
            r.gamma_star, r.c_star, r.iterations, r.bracket_width
        );
    }
    Ok(())
}
