//! Benchmark-family generators (MultiMode, Cleaning, Railways), the
//! strict-semantics LTL export, and seeded random instance generators used
//! by the cross-checking suites.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::ltl::Ltl;
use crate::oracle::{ExplicitGame, DEFAULT_BUDGET};
use crate::spec::{Conjunct, GameSpec};

fn lit(name: &str, primed: bool, pos: bool) -> Formula {
    let a = if primed { Formula::atom_primed(name) } else { Formula::atom(name) };
    if pos {
        a
    } else {
        Formula::not(a)
    }
}

/// Cube asserting that the listed variables, read LSB-first, equal `value`.
fn eq_value(names: &[String], value: u32, primed: bool) -> Formula {
    Formula::conj(
        names
            .iter()
            .enumerate()
            .map(|(j, n)| lit(n, primed, (value >> j) & 1 == 1))
            .collect(),
    )
}

/// ⋀_v (v' ↔ v) over the given variables.
fn frozen(names: &[String]) -> Formula {
    Formula::conj(
        names
            .iter()
            .map(|n| Formula::iff(Formula::atom_primed(n), Formula::atom(n)))
            .collect(),
    )
}

/// MultiMode(n): 2^n modes over n bits per side. The environment may move
/// from mode 0 to any mode and then holds it; the system may move from mode
/// 0 to any odd mode and toggles within each pair {2i, 2i+1}. One conjunct
/// per mode v: GF(t=v) → GF(a=v).
pub fn gen_multimode(n: usize) -> Result<GameSpec> {
    if n == 0 || n > 16 {
        return Err(Error::Invalid("multimode requires 1 <= n <= 16".into()));
    }
    let t: Vec<String> = (0..n).rev().map(|j| format!("t{j}")).collect();
    let a: Vec<String> = (0..n).rev().map(|j| format!("a{j}")).collect();
    // eq_value reads LSB-first; bit j of a mode is t_j / a_j
    let t_lsb: Vec<String> = (0..n).map(|j| format!("t{j}")).collect();
    let a_lsb: Vec<String> = (0..n).map(|j| format!("a{j}")).collect();

    let trans_env = Formula::or(eq_value(&t_lsb, 0, false), frozen(&t_lsb));
    let from_zero = Formula::and(eq_value(&a_lsb, 0, false), lit("a0", true, true));
    let pair_toggle = Formula::conj(
        std::iter::once(Formula::iff(
            Formula::atom_primed("a0"),
            Formula::not(Formula::atom("a0")),
        ))
        .chain(
            a_lsb[1..]
                .iter()
                .map(|v| Formula::iff(Formula::atom_primed(v), Formula::atom(v))),
        )
        .collect(),
    );
    let trans_sys = Formula::or(from_zero, pair_toggle);

    let conjuncts = (0..1u32 << n)
        .map(|v| Conjunct {
            assumptions: vec![eq_value(&t_lsb, v, false)],
            guarantees: vec![eq_value(&a_lsb, v, false)],
        })
        .collect();

    Ok(GameSpec {
        inputs: t,
        outputs: a,
        init_env: eq_value(&t_lsb, 0, false),
        init_sys: eq_value(&a_lsb, 0, false),
        trans_env,
        trans_sys,
        conjuncts,
    })
}

/// One-hot cube: position variable i is on, the rest off.
fn one_hot(names: &[String], on: usize, primed: bool) -> Formula {
    Formula::conj(
        names
            .iter()
            .enumerate()
            .map(|(j, v)| lit(v, primed, j == on))
            .collect(),
    )
}

/// Cleaning(n): a leader robot (environment) cycles a corridor of n rooms,
/// toggling `done` each lap and optionally latching `in:clean_i` while in
/// room i; the follower (system) cycles its own position and may freely
/// toggle `out:clean_i` while in room i. 4n+1 variables, 2n conjuncts.
pub fn gen_cleaning(n: usize) -> Result<GameSpec> {
    if n == 0 {
        return Err(Error::Invalid("cleaning requires n >= 1".into()));
    }
    let in_pos: Vec<String> = (1..=n).map(|i| format!("in:pos_{i}")).collect();
    let in_clean: Vec<String> = (1..=n).map(|i| format!("in:clean_{i}")).collect();
    let out_pos: Vec<String> = (1..=n).map(|i| format!("out:pos_{i}")).collect();
    let out_clean: Vec<String> = (1..=n).map(|i| format!("out:clean_{i}")).collect();

    let mut inputs = in_pos.clone();
    inputs.extend(in_clean.iter().cloned());
    inputs.push("done".into());
    let mut outputs = out_pos.clone();
    outputs.extend(out_clean.iter().cloned());

    // From room i (1-based) the position advances to i%n+1. Ill-formed
    // (non-one-hot) positions freeze, keeping the relation total.
    let mut env_rules = Vec::new();
    for i in 0..n {
        let mut parts = vec![
            one_hot(&in_pos, i, false),
            one_hot(&in_pos, (i + 1) % n, true),
        ];
        if i == n - 1 {
            parts.push(Formula::iff(
                Formula::atom_primed("done"),
                Formula::not(Formula::atom("done")),
            ));
        } else {
            parts.push(Formula::iff(Formula::atom_primed("done"), Formula::atom("done")));
        }
        for (j, c) in in_clean.iter().enumerate() {
            if j == i {
                // settable at room i, latched once on
                parts.push(Formula::implies(Formula::atom(c), Formula::atom_primed(c)));
            } else {
                parts.push(Formula::iff(Formula::atom_primed(c), Formula::atom(c)));
            }
        }
        env_rules.push(Formula::conj(parts));
    }
    let valid_env = Formula::disj((0..n).map(|i| one_hot(&in_pos, i, false)).collect());
    env_rules.push(Formula::and(Formula::not(valid_env), frozen(&inputs)));
    let trans_env = Formula::disj(env_rules);

    let mut sys_rules = Vec::new();
    for i in 0..n {
        let mut parts = vec![
            one_hot(&out_pos, i, false),
            one_hot(&out_pos, (i + 1) % n, true),
        ];
        for (j, c) in out_clean.iter().enumerate() {
            if j != i {
                parts.push(Formula::iff(Formula::atom_primed(c), Formula::atom(c)));
            }
        }
        sys_rules.push(Formula::conj(parts));
    }
    let valid_sys = Formula::disj((0..n).map(|i| one_hot(&out_pos, i, false)).collect());
    sys_rules.push(Formula::and(Formula::not(valid_sys), frozen(&outputs)));
    let trans_sys = Formula::disj(sys_rules);

    let mut conjuncts = Vec::new();
    for i in 0..n {
        conjuncts.push(Conjunct {
            assumptions: vec![Formula::atom("done"), lit(&in_clean[i], false, false)],
            guarantees: vec![lit(&out_clean[i], false, true)],
        });
        conjuncts.push(Conjunct {
            assumptions: vec![Formula::atom("done"), lit(&in_clean[i], false, true)],
            guarantees: vec![lit(&out_clean[i], false, false)],
        });
    }

    let init_env = Formula::conj(vec![
        one_hot(&in_pos, 0, false),
        Formula::conj(in_clean.iter().map(|c| lit(c, false, false)).collect()),
        lit("done", false, false),
    ]);
    let init_sys = Formula::conj(vec![
        one_hot(&out_pos, 0, false),
        Formula::conj(out_clean.iter().map(|c| lit(c, false, false)).collect()),
    ]);

    Ok(GameSpec { inputs, outputs, init_env, init_sys, trans_env, trans_sys, conjuncts })
}

/// Railways overlap pattern: windows of four rails starting at every odd
/// rail (1-4, 3-6, 5-8, ...). Rails i < j share a window iff j-i ≤ 3 when i
/// is odd, j-i ≤ 2 when i is even.
pub fn rails_overlap(i: usize, j: usize) -> bool {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    if lo == hi {
        return false;
    }
    if lo % 2 == 1 {
        hi - lo <= 3
    } else {
        hi - lo <= 2
    }
}

/// Counter-update assertion: a `b`-bit saturating step counter resets on
/// signal and otherwise increments, capped at 2^b - 1.
fn counter_update(sig_primed: Formula, cnt: &[String], b: usize) -> Formula {
    let top = (1u32 << b) - 1;
    let reset = Formula::and(sig_primed.clone(), eq_value(cnt, 0, true));
    let mut ticks = Vec::new();
    for v in 0..=top {
        let nv = if v == top { top } else { v + 1 };
        ticks.push(Formula::implies(eq_value(cnt, v, false), eq_value(cnt, nv, true)));
    }
    Formula::or(reset, Formula::and(Formula::not(sig_primed), Formula::conj(ticks)))
}

/// `cnt < m` over the counter bits (LSB-first).
fn counter_below(cnt: &[String], m: u32, b: usize) -> Formula {
    Formula::disj((0..1u32 << b).filter(|&v| v < m).map(|v| eq_value(cnt, v, false)).collect())
}

/// Railways(n, m): n track signals per side with (2+2⌈log₂ m⌉)·n variables.
/// The environment raises at most one signal per step; the system must pick
/// a maximal non-overlapping signal set. Saturating counters track steps
/// since each signal was last on; conjuncts demand recurring signals and
/// counter recency on both sides.
pub fn gen_railways(n: usize, m: u32) -> Result<GameSpec> {
    if n < 2 {
        return Err(Error::Invalid("railways requires n >= 2".into()));
    }
    if m < 2 {
        return Err(Error::Invalid("railways requires m >= 2".into()));
    }
    let b = (32 - (m - 1).leading_zeros()) as usize; // ⌈log₂ m⌉
    let in_sig: Vec<String> = (1..=n).map(|i| format!("in:sig_{i}")).collect();
    let out_sig: Vec<String> = (1..=n).map(|i| format!("out:sig_{i}")).collect();
    let in_cnt: Vec<Vec<String>> = (1..=n)
        .map(|i| (0..b).map(|j| format!("in:cnt_{i}_{j}")).collect())
        .collect();
    let out_cnt: Vec<Vec<String>> = (1..=n)
        .map(|i| (0..b).map(|j| format!("out:cnt_{i}_{j}")).collect())
        .collect();

    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    for i in 0..n {
        inputs.push(in_sig[i].clone());
        inputs.extend(in_cnt[i].iter().cloned());
        outputs.push(out_sig[i].clone());
        outputs.extend(out_cnt[i].iter().cloned());
    }

    // env: at most one signal raised next step
    let mut at_most_one = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            at_most_one.push(Formula::not(Formula::and(
                lit(&in_sig[i], true, true),
                lit(&in_sig[j], true, true),
            )));
        }
    }
    let mut env_parts = vec![Formula::conj(at_most_one)];
    for i in 0..n {
        env_parts.push(counter_update(lit(&in_sig[i], true, true), &in_cnt[i], b));
    }
    let trans_env = Formula::conj(env_parts);

    // sys: the next signal set is conflict-free and maximal
    let mut safe = Vec::new();
    let mut maximal = Vec::new();
    for i in 0..n {
        let mut rivals = Vec::new();
        for j in 0..n {
            if rails_overlap(i + 1, j + 1) {
                safe_pair(&mut safe, &out_sig, i, j);
                rivals.push(lit(&out_sig[j], true, true));
            }
        }
        maximal.push(Formula::implies(
            Formula::not(lit(&out_sig[i], true, true)),
            Formula::disj(rivals),
        ));
    }
    let mut sys_parts = vec![Formula::conj(safe), Formula::conj(maximal)];
    for i in 0..n {
        sys_parts.push(counter_update(lit(&out_sig[i], true, true), &out_cnt[i], b));
    }
    let trans_sys = Formula::conj(sys_parts);

    let mut conjuncts = Vec::new();
    for i in 0..n {
        conjuncts.push(Conjunct {
            assumptions: vec![lit(&in_sig[i], false, true)],
            guarantees: vec![lit(&out_sig[i], false, true)],
        });
        conjuncts.push(Conjunct {
            assumptions: vec![counter_below(&in_cnt[i], m, b)],
            guarantees: vec![counter_below(&out_cnt[i], m, b)],
        });
    }

    let init_env = Formula::conj(inputs.iter().map(|v| lit(v, false, false)).collect());
    let init_sys = Formula::conj(outputs.iter().map(|v| lit(v, false, false)).collect());

    Ok(GameSpec { inputs, outputs, init_env, init_sys, trans_env, trans_sys, conjuncts })
}

fn safe_pair(safe: &mut Vec<Formula>, out_sig: &[String], i: usize, j: usize) {
    if i < j {
        safe.push(Formula::not(Formula::and(
            lit(&out_sig[i], true, true),
            lit(&out_sig[j], true, true),
        )));
    }
}

/// Strict-semantics LTL export:
/// θ_I → (θ_O ∧ (ρ_O^X W ¬ρ_I^X) ∧ ((G ρ_I^X) → φ_GRk)).
pub fn export_ltl(spec: &GameSpec) -> String {
    let theta_i = Ltl::from_formula(&spec.init_env);
    let theta_o = Ltl::from_formula(&spec.init_sys);
    let rho_i = Ltl::from_formula(&spec.trans_env);
    let rho_o = Ltl::from_formula(&spec.trans_sys);

    let phi_grk = Ltl::conj(
        spec.conjuncts
            .iter()
            .map(|c| {
                let asm = Ltl::conj(
                    c.assumptions
                        .iter()
                        .map(|a| Ltl::globally(Ltl::finally(Ltl::from_formula(a))))
                        .collect(),
                );
                let gar = Ltl::conj(
                    c.guarantees
                        .iter()
                        .map(|g| Ltl::globally(Ltl::finally(Ltl::from_formula(g))))
                        .collect(),
                );
                Ltl::implies(asm, gar)
            })
            .collect(),
    );

    let body = Ltl::and(
        theta_o,
        Ltl::and(
            Ltl::weak_until(rho_o, Ltl::not(rho_i.clone())),
            Ltl::implies(Ltl::globally(rho_i), phi_grk),
        ),
    );
    Ltl::implies(theta_i, body).to_string()
}

/// A two-variable unrealizable gadget: the output is frozen at 0 while the
/// environment can raise its input forever, so GF(i) → GF(o) fails from the
/// initial state.
pub fn gen_unrealizable() -> GameSpec {
    GameSpec {
        inputs: vec!["i".into()],
        outputs: vec!["o".into()],
        init_env: Formula::True,
        init_sys: lit("o", false, false),
        trans_env: Formula::True,
        trans_sys: Formula::iff(Formula::atom_primed("o"), Formula::atom("o")),
        conjuncts: vec![Conjunct {
            assumptions: vec![Formula::atom("i")],
            guarantees: vec![Formula::atom("o")],
        }],
    }
}

/// Size knobs for the random suites. Defaults match the cross-check grid:
/// 2–10 total variables, per-player edge density 0.2–0.8.
#[derive(Debug, Clone)]
pub struct RandomParams {
    pub min_vars: usize,
    pub max_vars: usize,
    pub min_density: f64,
    pub max_density: f64,
    pub max_conjuncts: usize,
    pub max_terms: usize,
}

impl Default for RandomParams {
    fn default() -> RandomParams {
        RandomParams {
            min_vars: 2,
            max_vars: 10,
            min_density: 0.2,
            max_density: 0.8,
            max_conjuncts: 3,
            max_terms: 2,
        }
    }
}

/// Random explicit successor graph over 2^bits nodes with the given edge
/// density; deadlocks repaired by self-loops.
fn random_edges(rng: &mut ChaCha8Rng, bits: usize, density: f64) -> Vec<Vec<u32>> {
    let n = 1usize << bits;
    let mut succ = vec![Vec::new(); n];
    for (s, out) in succ.iter_mut().enumerate() {
        for t in 0..n as u32 {
            if rng.gen_bool(density) {
                out.push(t);
            }
        }
        if out.is_empty() {
            out.push(s as u32);
        }
    }
    succ
}

/// DNF over unprimed/primed cubes for an explicit edge list.
fn edges_to_formula(names: &[String], succ: &[Vec<u32>]) -> Formula {
    let mut cubes = Vec::new();
    for (s, outs) in succ.iter().enumerate() {
        let src = eq_value(names, s as u32, false);
        let dst = Formula::disj(outs.iter().map(|&t| eq_value(names, t, true)).collect());
        cubes.push(Formula::and(src, dst));
    }
    Formula::disj(cubes)
}

fn random_cube(rng: &mut ChaCha8Rng, names: &[String]) -> Formula {
    let mut picks = Vec::new();
    for v in names {
        if rng.gen_bool(0.6) {
            picks.push(lit(v, false, rng.gen_bool(0.5)));
        }
    }
    Formula::conj(picks)
}

/// Seeded random separated GR(k) instance: explicit component graphs with
/// drawn densities, self-loop deadlock repair, k ∈ 0..=max_conjuncts
/// conjuncts of random input/output cubes. Reproducible per seed.
pub fn gen_random_separated(seed: u64, p: &RandomParams) -> GameSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = rng.gen_range(p.min_vars..=p.max_vars);
    let half = total.div_ceil(2).min(5);
    let lo = total.saturating_sub(half).max(1);
    let ni = rng.gen_range(lo..=(total - 1).min(half));
    let no = total - ni;

    let inputs: Vec<String> = (0..ni).map(|j| format!("x{j}")).collect();
    let outputs: Vec<String> = (0..no).map(|j| format!("y{j}")).collect();

    let d_env = rng.gen_range(p.min_density..=p.max_density);
    let d_sys = rng.gen_range(p.min_density..=p.max_density);
    let env_edges = random_edges(&mut rng, ni, d_env);
    let sys_edges = random_edges(&mut rng, no, d_sys);
    let trans_env = edges_to_formula(&inputs, &env_edges);
    let trans_sys = edges_to_formula(&outputs, &sys_edges);

    let k = rng.gen_range(0..=p.max_conjuncts);
    let conjuncts = (0..k)
        .map(|_| {
            let nl = rng.gen_range(0..=p.max_terms);
            let ml = rng.gen_range(0..=p.max_terms);
            Conjunct {
                assumptions: (0..nl).map(|_| random_cube(&mut rng, &inputs)).collect(),
                guarantees: (0..ml).map(|_| random_cube(&mut rng, &outputs)).collect(),
            }
        })
        .collect();

    let init_env = eq_value(&inputs, rng.gen_range(0..1u32 << ni), false);
    let init_sys = eq_value(&outputs, rng.gen_range(0..1u32 << no), false);

    GameSpec { inputs, outputs, init_env, init_sys, trans_env, trans_sys, conjuncts }
}

fn random_shallow(rng: &mut ChaCha8Rng, names: &[String], primables: &[String], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.5) || primables.is_empty() {
            lit(&names[rng.gen_range(0..names.len())], false, rng.gen_bool(0.5))
        } else {
            lit(
                &primables[rng.gen_range(0..primables.len())],
                true,
                rng.gen_bool(0.5),
            )
        };
    }
    let a = random_shallow(rng, names, primables, depth - 1);
    let b = random_shallow(rng, names, primables, depth - 1);
    match rng.gen_range(0..4) {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        2 => Formula::implies(a, b),
        _ => Formula::iff(a, b),
    }
}

/// Seeded random weak-Büchi input: a game structure (even seeds separated,
/// odd seeds general) plus an acceptance assertion built as a random union
/// of SCC classes — saturated by construction.
pub fn gen_random_weak_buchi(seed: u64, p: &RandomParams) -> Result<(GameSpec, Formula)> {
    let spec = if seed % 2 == 0 {
        gen_random_separated(seed, p)
    } else {
        gen_random_general(seed, p)?
    };
    let explicit = ExplicitGame::from_spec(&spec, DEFAULT_BUDGET)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5ccac5);
    let mut names = spec.inputs.clone();
    names.extend(spec.outputs.iter().cloned());
    let mut picked = Vec::new();
    for comp in &explicit.comps {
        if rng.gen_bool(0.5) {
            for &s in comp {
                picked.push(eq_value(&names, s, false));
            }
        }
    }
    Ok((spec, Formula::disj(picked)))
}

/// Random general (possibly non-separated) structure: shallow random ρ_I
/// over I∪O∪I' and ρ_O over the full alphabet, with deadlocks repaired by
/// frozen self-loops. Resamples (bumping an offset into the seed stream)
/// when a draw deadlocks more than a quarter of the states.
pub fn gen_random_general(seed: u64, p: &RandomParams) -> Result<GameSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = rng.gen_range(p.min_vars..=p.max_vars.min(8));
    let ni = rng.gen_range(1..=(total - 1).min(4)).max(total.saturating_sub(4));
    let no = total - ni;
    let inputs: Vec<String> = (0..ni).map(|j| format!("x{j}")).collect();
    let outputs: Vec<String> = (0..no).map(|j| format!("y{j}")).collect();
    let mut state_names = inputs.clone();
    state_names.extend(outputs.iter().cloned());

    for _attempt in 0..64 {
        let rho_i = random_shallow(&mut rng, &state_names, &inputs, 4);
        let rho_o = random_shallow(&mut rng, &state_names, &state_names, 4);
        match repair_general(&inputs, &outputs, rho_i, rho_o) {
            Some((trans_env, trans_sys)) => {
                let k = rng.gen_range(0..=p.max_conjuncts);
                let conjuncts = (0..k)
                    .map(|_| Conjunct {
                        assumptions: (0..rng.gen_range(0..=p.max_terms))
                            .map(|_| random_cube(&mut rng, &inputs))
                            .collect(),
                        guarantees: (0..rng.gen_range(0..=p.max_terms))
                            .map(|_| random_cube(&mut rng, &outputs))
                            .collect(),
                    })
                    .collect();
                let init_env = eq_value(&inputs, rng.gen_range(0..1u32 << ni), false);
                let init_sys = eq_value(&outputs, rng.gen_range(0..1u32 << no), false);
                return Ok(GameSpec {
                    inputs,
                    outputs,
                    init_env,
                    init_sys,
                    trans_env,
                    trans_sys,
                    conjuncts,
                });
            }
            None => continue,
        }
    }
    Err(Error::Invalid(format!("seed {seed}: no deadlock-repairable draw in 64 tries")))
}

/// Evaluates the drawn relations explicitly, adds frozen self-loops where a
/// player is stuck, and rejects draws that deadlock too widely (the repair
/// formula would dwarf the game).
fn repair_general(
    inputs: &[String],
    outputs: &[String],
    rho_i: Formula,
    rho_o: Formula,
) -> Option<(Formula, Formula)> {
    use crate::oracle::Compiled;
    let ni = inputs.len();
    let no = outputs.len();
    let n = 1usize << (ni + no);
    let mut index = std::collections::HashMap::new();
    for (i, v) in inputs.iter().chain(outputs.iter()).enumerate() {
        index.insert(v.clone(), i);
    }
    let ci = Compiled::new(&rho_i, &index).ok()?;
    let co = Compiled::new(&rho_o, &index).ok()?;

    let mut env_stuck = Vec::new();
    let mut sys_stuck = Vec::new();
    for s in 0..n as u32 {
        let mut env_ok = false;
        let mut sys_ok = true;
        for ip in 0..1u32 << ni {
            if !ci.eval(s, ip) {
                continue;
            }
            env_ok = true;
            if !(0..1u32 << no).any(|op| co.eval(s, ip | (op << ni))) {
                sys_ok = false;
                break;
            }
        }
        if !env_ok {
            env_stuck.push(s);
        } else if !sys_ok {
            sys_stuck.push(s);
        }
    }
    if (env_stuck.len() + sys_stuck.len()) * 4 > n {
        return None;
    }

    let mut names: Vec<String> = inputs.to_vec();
    names.extend(outputs.iter().cloned());
    let patch = |stuck: &[u32], freeze: &[String]| {
        Formula::disj(
            stuck
                .iter()
                .map(|&s| Formula::and(eq_value(&names, s, false), frozen(freeze)))
                .collect(),
        )
    };
    // a frozen env move at a repaired state must also get a sys reply
    let mut both = env_stuck.clone();
    both.extend_from_slice(&sys_stuck);
    let trans_env = if env_stuck.is_empty() {
        rho_i
    } else {
        Formula::or(rho_i, patch(&env_stuck, inputs))
    };
    let trans_sys = if both.is_empty() {
        rho_o
    } else {
        Formula::or(rho_o, patch(&both, outputs))
    };
    Some((trans_env, trans_sys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse_ltl;

    #[test]
    fn family_variable_counts() {
        for n in 1..=8 {
            let s = gen_multimode(n).unwrap();
            assert_eq!(s.inputs.len() + s.outputs.len(), 2 * n);
        }
        for n in 1..=6 {
            let s = gen_cleaning(n).unwrap();
            assert_eq!(s.inputs.len() + s.outputs.len(), 4 * n + 1);
        }
        for (n, m, want) in [(2usize, 2u32, 8usize), (3, 3, 18), (4, 2, 16), (5, 3, 30)] {
            let s = gen_railways(n, m).unwrap();
            assert_eq!(s.inputs.len() + s.outputs.len(), want);
        }
        assert!(gen_railways(1, 2).is_err());
        assert!(gen_railways(2, 1).is_err());
    }

    #[test]
    fn families_validate_and_round_trip() {
        for spec in [
            gen_multimode(2).unwrap(),
            gen_cleaning(1).unwrap(),
            gen_railways(2, 2).unwrap(),
        ] {
            let game = spec.compile(true).unwrap();
            let rep = game.validate();
            assert!(rep.separated && rep.deadlock_free && rep.initial_satisfiable, "{:?}", rep.witnesses);
            let text = spec.print();
            let back = crate::spec::parse_spec_text(&text).unwrap();
            assert_eq!(back.print(), text);
        }
    }

    #[test]
    fn small_families_realizable() {
        for spec in [
            gen_multimode(1).unwrap(),
            gen_multimode(2).unwrap(),
            gen_cleaning(1).unwrap(),
            gen_railways(2, 2).unwrap(),
        ] {
            let game = spec.compile(true).unwrap();
            let sol = crate::grk::solve(&game).unwrap();
            assert!(sol.realizable);
        }
    }

    #[test]
    fn overlap_pattern_matches_windows() {
        assert!(rails_overlap(1, 4));
        assert!(!rails_overlap(1, 5));
        assert!(rails_overlap(3, 6));
        assert!(!rails_overlap(2, 5));
        assert!(rails_overlap(4, 6));
        assert!(!rails_overlap(4, 7));
        assert!(!rails_overlap(3, 3));
    }

    #[test]
    fn unrealizable_gadget() {
        let game = gen_unrealizable().compile(true).unwrap();
        let sol = crate::grk::solve(&game).unwrap();
        assert!(!sol.realizable);
    }

    #[test]
    fn ltl_export_round_trips() {
        let spec = gen_multimode(1).unwrap();
        let text = export_ltl(&spec);
        let parsed = parse_ltl(&text).unwrap();
        assert_eq!(parsed.to_string(), text);
    }

    #[test]
    fn random_separated_reproducible_and_valid() {
        for seed in 0..20 {
            let a = gen_random_separated(seed, &RandomParams::default());
            let b = gen_random_separated(seed, &RandomParams::default());
            assert_eq!(a, b);
            let game = a.compile(true).unwrap();
            let rep = game.validate();
            assert!(rep.separated && rep.deadlock_free, "seed {seed}: {:?}", rep.witnesses);
        }
    }

    #[test]
    fn random_weak_buchi_acc_is_saturated() {
        for seed in 0..12 {
            let (spec, acc) = gen_random_weak_buchi(seed, &RandomParams::default()).unwrap();
            let g = ExplicitGame::from_spec(&spec, DEFAULT_BUDGET).unwrap();
            let mut names = spec.inputs.clone();
            names.extend(spec.outputs.iter().cloned());
            let per_state = |s: u32| {
                crate::formula::eval_with_map(
                    &acc,
                    &names
                        .iter()
                        .enumerate()
                        .map(|(j, v)| ((v.clone(), false), (s >> j) & 1 == 1))
                        .collect(),
                )
            };
            g.saturated_acc(&per_state).unwrap();
        }
    }

    #[test]
    fn random_general_covers_non_separated() {
        let found = (1..40).step_by(2).any(|seed| {
            let spec = gen_random_general(seed, &RandomParams::default()).unwrap();
            spec.compile(false).map(|g| !g.separated).unwrap_or(false)
        });
        assert!(found, "no non-separated draw among 20 odd seeds");
    }
}
