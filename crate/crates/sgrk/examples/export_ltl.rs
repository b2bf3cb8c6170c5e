//! Export a game specification as a single LTL formula.
//!
//! The translation embeds the initial assertions, the system's transition
//! obligation (weak-until the environment misbehaves), and the GR(k)
//! condition guarded by G ρ_I. The printed formula is parsed back to show
//! the grammar round-trips.

use sgrk::{bench, ltl};

fn main() -> sgrk::Result<()> {
    let spec = bench::gen_multimode(1)?;
    println!("game specification:\n{}", spec.print());

    let text = bench::export_ltl(&spec);
    println!("LTL translation:\n{text}\n");

    let parsed = ltl::parse_ltl(&text)?;
    let reprinted = format!("{parsed}");
    assert_eq!(text, reprinted, "printer/parser round-trip must be stable");
    println!("round-trip ok ({} characters)", text.len());
    Ok(())
}
