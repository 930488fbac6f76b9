//! Write the three figure tables as CSV files into a directory.
//!
//! cargo run --example figure_tables -- [output-dir]

use adder_capacity::cli::{cmd_figure, curves_to_csv, GammaGrid};

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| ".".into());
    let grid = GammaGrid { min: 0.1, max: 10.0, step: 0.05 };
    for id in 1..=3 {
        let tables = cmd_figure(id, &grid).unwrap_or_else(|e| panic!("figure {id}: {e}"));
        let path = std::path::Path::new(&dir).join(format!("figure{id}.csv"));
        std::fs::write(&path, curves_to_csv(&tables)).expect("write csv");
        println!("wrote {} ({} curves)", path.display(), tables.len());
    }
}
