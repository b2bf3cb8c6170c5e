//! Independently verify a synthesized controller with the explicit oracle.
//!
//! For a realizable instance: model-check the controller's reachable product
//! against the GR(k) acceptance shape and confirm the delay property of the
//! winning region. For an unrealizable instance: certify determinacy and
//! extract an environment spoiling lasso.

use sgrk::oracle::{self, ExplicitGame};
use sgrk::{bench, grk};

fn main() -> sgrk::Result<()> {
    // realizable side: MultiMode(2)
    let spec = bench::gen_multimode(2)?;
    let game = spec.compile(true)?;
    let sol = grk::solve(&game)?;
    let ctrl = sol.controller.as_ref().unwrap();

    let ex = ExplicitGame::from_spec(&spec, 1 << 20)?;
    let win = ex.solve_backward(&ex.grk_acc_per_scc());

    let report = oracle::model_check_controller(&ex, &win, ctrl.mem_bound(), &mut |s, mem, ip| {
        ctrl.step(s, mem, ip)
    })?;
    println!(
        "controller model-checked: {} product states, {} cyclic SCCs verified",
        report.product_states, report.cyclic_sccs_checked
    );

    match oracle::check_delay_property(&spec, &ex, &win)? {
        None => println!("delay property holds on the winning region"),
        Some(w) => panic!("delay property violated: {w:?}"),
    }
    assert!(oracle::is_scc_saturated(&ex, &win));
    println!("winning region is SCC-saturated");

    // unrealizable side: the one-variable gadget where the output is frozen
    let bad = bench::gen_unrealizable();
    let ex2 = ExplicitGame::from_spec(&bad, 1 << 20)?;
    let acc2 = ex2.grk_acc_per_scc();
    let win2 = ex2.solve_backward(&acc2);
    assert!(!ex2.realizable(&win2));
    match oracle::check_env_spoiling(&bad, &ex2, &win2, &acc2)? {
        Some(lasso) => println!(
            "unrealizable gadget: determinacy certified, spoiling lasso on conjunct {} \
             with input cycle {:?}",
            lasso.conjunct, lasso.input_cycle
        ),
        None => println!("unrealizable gadget: determinacy certified"),
    }
    Ok(())
}
