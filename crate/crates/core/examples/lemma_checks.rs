//! Run the built-in verification suites and print a summary.
//!
//! cargo run --example lemma_checks

use adder_capacity::uncoordinated::lemma2_sequence_with_bound;
use adder_capacity::verify::{consistency_suite, lemma1_suite, lemma2_limit, lemma2_suite};

fn main() -> adder_capacity::Result<()> {
    for (name, results) in [("lemma1", lemma1_suite()?), ("lemma2", lemma2_suite()?), ("consistency", consistency_suite()?)]
    {
        let passed = results.iter().filter(|r| r.passed).count();
        println!("{name}: {passed}/{} passed", results.len());
        for r in results.iter().filter(|r| !r.passed) {
            println!("  FAIL {} {}", r.name, r.detail);
        }
    }

    println!("\nbinomial log-ratio sequence at p = 0.3 (limit {:.6})", lemma2_limit(0.3));
    for n in [10, 100, 1_000, 10_000, 1_000_000] {
        let v = lemma2_sequence_with_bound(0.3, n)?;
        println!("  N={n:>8}  {:.8}  (truncation bound {:.1e})", v.value, v.error_bound);
    }
    Ok(())
}
