//! Symbolic game solving: reachability and safety subgames built on the
//! controllable predecessor, and the weak Büchi winning-region fixed point
//! that walks the downward-closed SCC layers.

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::graph::GraphPredicates;
use crate::spec::Game;

/// Winning subset of a subgame's source region plus the moves achieving it.
pub struct SubgameResult {
    pub win: Dd,
    /// Relation over X ∪ I' ∪ O'; consumers intersect with ρ_O per input.
    pub strat: Dd,
}

pub struct WeakBuchiSolution {
    pub win: Dd,
    /// The stabilizing strategy f_B, accumulated layer by layer.
    pub fb: Dd,
    pub iterations: u64,
    pub ops_used: u64,
}

/// pre_s(Z)(X) = ∀I'. ρ_I → ∃O'. ρ_O ∧ Z(X') — states from which the system
/// can answer any legal environment move by landing in Z.
pub fn pre_sys(game: &Game, z_primed: Dd) -> Result<Dd> {
    let k = &game.kernel;
    let step = k.exists(&game.primed_outputs(), k.and(game.trans_sys, z_primed)?)?;
    k.forall(&game.primed_inputs(), k.implies(game.trans_env, step)?)
}

fn prime_state(game: &Game, a: Dd) -> Result<Dd> {
    let k = &game.kernel;
    let pairs: Vec<_> = game
        .state_vars()
        .iter()
        .map(|&v| (v, k.registry().partner(v).unwrap()))
        .collect();
    k.rename(a, &pairs)
}

/// Attractor construction: Z₀ = target, Z_{i+1} = Z_i ∪ (pre_s(Z_i) ∩ source).
/// The strategy records, for each state when first attracted, the moves into
/// the previous layer; source∩target states get any legal move.
pub fn solve_reachability(game: &Game, source: Dd, target: Dd) -> Result<SubgameResult> {
    let k = &game.kernel;
    let legal = game.trans()?;
    let mut z = target;
    let mut strat = k.and(k.and(source, target)?, legal)?;
    let cap = checked_cap(game);
    for _ in 0..cap {
        let zp = prime_state(game, z)?;
        let newly = k.and(k.and(pre_sys(game, zp)?, source)?, k.not(z)?)?;
        if k.is_false(newly) {
            let win = k.and(z, k.or(source, target)?)?;
            return Ok(SubgameResult { win, strat });
        }
        strat = k.or(strat, k.and(k.and(newly, legal)?, zp)?)?;
        z = k.or(z, newly)?;
    }
    Err(Error::FixedPointDiverged(cap))
}

/// Greatest fixed point: Z₀ = safe, Z_{i+1} = Z_i ∩ pre_s(Z_i); the strategy
/// keeps plays inside the fixed point.
pub fn solve_safety(game: &Game, source: Dd, safe: Dd) -> Result<SubgameResult> {
    let k = &game.kernel;
    let mut z = safe;
    let cap = checked_cap(game);
    for _ in 0..cap {
        let zp = prime_state(game, z)?;
        let znew = k.and(z, pre_sys(game, zp)?)?;
        if znew == z {
            let strat = k.and(k.and(z, game.trans()?)?, zp)?;
            let win = k.and(z, source)?;
            return Ok(SubgameResult { win, strat });
        }
        z = znew;
    }
    Err(Error::FixedPointDiverged(cap))
}

fn checked_cap(game: &Game) -> u64 {
    let bits = (game.inputs.len() + game.outputs.len()).min(62);
    (1u64 << bits) + 1
}

/// Solves the weak Büchi game (GS, GF acc). `acc` must be a union of SCCs
/// of the game graph; otherwise the game is not weak and an error with a
/// witness pair is returned. Works for non-separated structures too.
pub fn solve_weak_buchi(game: &Game, acc: Dd) -> Result<WeakBuchiSolution> {
    let preds = GraphPredicates::build(&game.kernel, game.trans()?, &game.state_vars())?;
    solve_weak_buchi_with(game, acc, &preds)
}

/// As [`solve_weak_buchi`], reusing already-built graph predicates.
pub fn solve_weak_buchi_with(
    game: &Game,
    acc: Dd,
    preds: &GraphPredicates,
) -> Result<WeakBuchiSolution> {
    let k = &game.kernel;
    let ops_before = k.ops();

    // weakness: acc may not split an SCC
    let acc_primed = prime_state(game, acc)?;
    let bad = k.and(k.and(preds.scc, acc)?, k.not(acc_primed)?)?;
    if !k.is_false(bad) {
        let vars = game.state_vars();
        let all: Vec<_> = vars
            .iter()
            .copied()
            .chain(vars.iter().map(|&v| k.registry().partner(v).unwrap()))
            .collect();
        let w = k.pick_one(bad, &all)?.unwrap();
        let show = |primed: bool| {
            vars.iter()
                .map(|&v| {
                    let key = if primed { k.registry().partner(v).unwrap() } else { v };
                    format!(
                        "{}={}",
                        k.registry().name(v),
                        if w.get(&key).copied().unwrap_or(false) { 1 } else { 0 }
                    )
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        return Err(Error::NotWeak(show(false), show(true)));
    }

    let mut win = k.and(preds.terminal, acc)?;
    let mut fb = k.and(preds.terminal, k.implies(game.trans_env, game.trans_sys)?)?;
    let mut dc = preds.terminal;
    let mut iterations = 0u64;
    let cap = checked_cap(game);
    while !k.is_true(dc) {
        iterations += 1;
        if iterations > cap {
            return Err(Error::FixedPointDiverged(cap));
        }
        let dc_next = preds.dc_step(k, dc)?;
        let dc_new = k.and(dc_next, k.not(dc)?)?;
        let n = k.and(dc_new, k.not(acc)?)?;
        let a = k.and(dc_new, acc)?;
        let r = solve_reachability(game, n, win)?;
        let s = solve_safety(game, a, k.or(a, win)?)?;
        win = k.or(k.or(win, r.win)?, s.win)?;
        fb = k.or(fb, k.or(k.and(n, r.strat)?, k.and(a, s.strat)?)?)?;
        dc = dc_next;
    }
    Ok(WeakBuchiSolution { win, fb, iterations, ops_used: k.ops() - ops_before })
}

/// Realizability: ∀I. θ_I → ∃O. θ_O ∧ win evaluates to TRUE.
pub fn check_realizable(game: &Game, win: Dd) -> Result<bool> {
    let k = &game.kernel;
    let inner = k.exists(&game.outputs, k.and(game.init_sys, win)?)?;
    let outer = k.forall(&game.inputs, k.implies(game.init_env, inner)?)?;
    Ok(k.is_true(outer))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::parse_spec;

    /// One input with free moves, one output forced to 1 and held there.
    fn chain_game() -> Game {
        parse_spec(
            "INPUT_VARS: i\nOUTPUT_VARS: o\nINIT_ENV: !i\nINIT_SYS: !o\n\
             TRANS_ENV: true\nTRANS_SYS: o'\nGRK:\n  GUARANTEE: GF(o)\n",
        )
        .unwrap()
    }

    #[test]
    fn reachability_reaches_the_chain_end() {
        let g = chain_game();
        let k = &g.kernel;
        let target = k.mk_var("o").unwrap();
        let r = solve_reachability(&g, k.mk_true(), target).unwrap();
        assert!(k.is_true(r.win));
    }

    #[test]
    fn reachability_with_target_equal_source() {
        let g = chain_game();
        let k = &g.kernel;
        let source = k.mk_var("o").unwrap();
        let r = solve_reachability(&g, source, source).unwrap();
        assert_eq!(r.win, source);
        // strat offers every legal move from those states
        let expect = k.and(source, g.trans().unwrap()).unwrap();
        assert_eq!(r.strat, expect);
    }

    #[test]
    fn safety_with_safe_everywhere() {
        let g = chain_game();
        let k = &g.kernel;
        let s = solve_safety(&g, k.mk_true(), k.mk_true()).unwrap();
        assert!(k.is_true(s.win));
    }

    #[test]
    fn safety_excludes_forced_exits() {
        // staying at o=0 is impossible: ρ_O forces o'=1
        let g = chain_game();
        let k = &g.kernel;
        let safe = k.not(k.mk_var("o").unwrap()).unwrap();
        let s = solve_safety(&g, safe, safe).unwrap();
        assert!(k.is_false(s.win));
    }

    #[test]
    fn weak_buchi_constant_acceptance() {
        let g = chain_game();
        let k = &g.kernel;
        let all = solve_weak_buchi(&g, k.mk_true()).unwrap();
        assert!(k.is_true(all.win));
        assert!(check_realizable(&g, all.win).unwrap());
        let none = solve_weak_buchi(&g, k.mk_false()).unwrap();
        assert!(k.is_false(none.win));
        assert!(!check_realizable(&g, none.win).unwrap());
    }

    #[test]
    fn weak_buchi_on_the_chain() {
        // SCCs of the product: {o=1 states} (per input value they intermix);
        // acc = o is a union of SCCs, and the system always wins.
        let g = chain_game();
        let k = &g.kernel;
        let acc = k.mk_var("o").unwrap();
        let sol = solve_weak_buchi(&g, acc).unwrap();
        assert!(k.is_true(sol.win));
        assert!(sol.iterations >= 1);
        assert!(sol.ops_used > 0);
    }

    #[test]
    fn non_weak_acceptance_rejected() {
        // output toggles every step: SCC {o=0,o=1}; acc = o splits it
        let g = parse_spec(
            "INPUT_VARS: i\nOUTPUT_VARS: o\nINIT_ENV: !i\nINIT_SYS: !o\n\
             TRANS_ENV: true\nTRANS_SYS: o' <-> !o\nGRK:\n  GUARANTEE: GF(o)\n",
        )
        .unwrap();
        let k = &g.kernel;
        let acc = k.mk_var("o").unwrap();
        assert!(matches!(solve_weak_buchi(&g, acc), Err(Error::NotWeak(..))));
    }
}
