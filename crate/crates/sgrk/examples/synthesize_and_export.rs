//! Synthesize a controller and export it as a portable strategy file.
//!
//! Solves the single-room Cleaning benchmark, builds the finite-memory
//! controller, and serializes its complete lookup table to the stratjson-v1
//! JSON format (the same format the `sgrk synth` subcommand writes).

use sgrk::{bench, grk};

fn main() -> sgrk::Result<()> {
    let spec = bench::gen_cleaning(1)?;
    let game = spec.compile(true)?;
    let sol = grk::solve(&game)?;
    assert!(sol.realizable, "Cleaning(1) should be realizable");

    let ctrl = sol.controller.as_ref().unwrap();
    println!("memory bound m = {}", ctrl.mem_bound());

    let strat = grk::export_strategy(ctrl)?;
    println!(
        "exported {} rows over inputs {:?} / outputs {:?}",
        strat.rows.len(),
        strat.header.inputs,
        strat.header.outputs
    );
    for row in strat.rows.iter().take(5) {
        println!("  {:?}", row);
    }

    // round-trip through JSON and verify the table is intact
    let json = strat.to_json()?;
    let back = grk::StratFile::from_json(&json)?;
    assert_eq!(back.rows.len(), strat.rows.len());
    println!("JSON round-trip ok ({} bytes)", json.len());
    Ok(())
}
