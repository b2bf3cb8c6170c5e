//! Decide realizability of a Separated GR(k) specification.
//!
//! Builds the two-mode MultiMode benchmark, compiles it to a symbolic game,
//! and runs the full GR(k) pipeline: acceptance-predicate construction, the
//! weak Büchi reduction, and the initial-state realizability check.

use sgrk::{bench, grk};

fn main() -> sgrk::Result<()> {
    let spec = bench::gen_multimode(2)?;
    println!("specification:\n{}", spec.print());

    let game = spec.compile(true)?;
    let sol = grk::solve(&game)?;

    println!(
        "state space N = {}, condition size |phi| = {}",
        game.state_space_size(),
        game.phi_size()
    );
    println!(
        "winning states |W| = {}",
        game.kernel.sat_count(sol.win, &game.state_vars())?
    );
    println!(
        "verdict: {} ({} kernel operations, {} layer iterations)",
        if sol.realizable { "realizable" } else { "unrealizable" },
        sol.ops_used,
        sol.weak_buchi.iterations
    );
    Ok(())
}
