//! Generate the three scalable benchmark families and random instances.
//!
//! Prints one instance of each family in the concrete `.sgrk` syntax, shows
//! how the variable counts scale, and draws a reproducible random separated
//! game from a seed.

use sgrk::bench::{self, RandomParams};

fn main() -> sgrk::Result<()> {
    println!("=== MultiMode(2) ===\n{}", bench::gen_multimode(2)?.print());
    println!("=== Cleaning(1) ===\n{}", bench::gen_cleaning(1)?.print());
    println!("=== Railways(2, 2) ===\n{}", bench::gen_railways(2, 2)?.print());

    println!("variable counts as the families scale:");
    for n in 1..=6 {
        let mm = bench::gen_multimode(n)?;
        let cl = bench::gen_cleaning(n)?;
        println!(
            "  n={n}: MultiMode {} vars, Cleaning {} vars",
            mm.inputs.len() + mm.outputs.len(),
            cl.inputs.len() + cl.outputs.len()
        );
    }
    for (n, m) in [(2usize, 2u32), (3, 3), (4, 4)] {
        let rw = bench::gen_railways(n, m)?;
        println!("  Railways({n}, {m}): {} vars", rw.inputs.len() + rw.outputs.len());
    }

    let spec = bench::gen_random_separated(7, &RandomParams::default());
    println!("\n=== random separated game, seed 7 ===\n{}", spec.print());
    Ok(())
}
