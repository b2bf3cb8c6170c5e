//! Drive a synthesized controller against a random environment.
//!
//! Solves MultiMode(2), then plays 24 rounds: the environment picks a legal
//! input update, the controller replies through its finite-memory strategy,
//! and every transition is checked against both transition assertions.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use sgrk::oracle::Compiled;
use sgrk::{bench, grk};
use std::collections::HashMap;

fn main() -> sgrk::Result<()> {
    let spec = bench::gen_multimode(2)?;
    let game = spec.compile(true)?;
    let sol = grk::solve(&game)?;
    let ctrl = sol.controller.as_ref().unwrap();

    let ni = spec.inputs.len();
    let names: Vec<String> = spec.inputs.iter().chain(&spec.outputs).cloned().collect();
    let index: HashMap<String, usize> =
        names.iter().enumerate().map(|(j, n)| (n.clone(), j)).collect();
    let rho_i = Compiled::new(&spec.trans_env, &index)?;
    let rho_o = Compiled::new(&spec.trans_sys, &index)?;

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    // start from an initial state the controller wins from
    let (mut s, mut mem) = (0u32, 0usize);
    println!("start state {s:0>width$b}", width = names.len());

    for step in 0..24 {
        let legal: Vec<u32> =
            (0..1u32 << ni).filter(|&ip| rho_i.eval(s, ip)).collect();
        assert!(!legal.is_empty(), "environment deadlock");
        let ip = *legal.choose(&mut rng).unwrap();
        let (op, mem2) = ctrl.step(s, mem, ip)?;
        let s2 = ip | (op << ni);
        assert!(rho_o.eval(s, s2), "controller broke its transition assertion");
        println!("step {step:>2}: in={ip:0>ni$b} out={op:0>no$b} mem={mem2}", no = names.len() - ni);
        s = s2;
        mem = mem2;
    }
    println!("24 steps, no transition assertion violated");
    Ok(())
}
