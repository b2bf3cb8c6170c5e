//! The Separated GR(k) layer: the accepting-states predicate, reduction to
//! a weak Büchi game, the guarantee-touring travel strategy, the combined
//! controller with its memory counter, and strategy export.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::dd::{Dd, Kernel, VarId};
use crate::error::{Error, Result};
use crate::graph::GraphPredicates;
use crate::solver::{check_realizable, solve_weak_buchi_with, WeakBuchiSolution};
use crate::spec::Game;

/// acc plus the per-conjunct building blocks, kept for diagnostics.
pub struct AccPredicate {
    pub acc: Dd,
    /// sgar[l][j]: states whose SCC contains a g_{l,j} state.
    pub sgar: Vec<Vec<Dd>>,
    /// sasm[l][i]: states whose SCC contains no a_{l,i} state.
    pub sasm: Vec<Vec<Dd>>,
}

/// acc(s) ⇔ for every conjunct l, all guarantees are satisfiable in s's SCC
/// or some assumption is unsatisfiable there.
pub fn build_acc(game: &Game, preds: &GraphPredicates) -> Result<AccPredicate> {
    if !game.separated {
        return Err(Error::NotSeparated("acc is defined for separated games".into()));
    }
    let k = &game.kernel;
    let primed: Vec<VarId> = game
        .state_vars()
        .iter()
        .map(|&v| k.registry().partner(v).unwrap())
        .collect();
    let mut acc = k.mk_true();
    let mut sgar_all = Vec::new();
    let mut sasm_all = Vec::new();
    for (asm, gar) in &game.conjuncts {
        let mut sgars = Vec::new();
        let mut clause = k.mk_true();
        for &g in gar {
            let gp = preds.prime(k, g)?;
            let sgar = k.exists(&primed, k.and(preds.scc, gp)?)?;
            clause = k.and(clause, sgar)?;
            sgars.push(sgar);
        }
        let mut sasms = Vec::new();
        let mut escape = k.mk_false();
        for &a in asm {
            let ap = preds.prime(k, a)?;
            let sasm = k.forall(&primed, k.implies(preds.scc, k.not(ap)?)?)?;
            escape = k.or(escape, sasm)?;
            sasms.push(sasm);
        }
        acc = k.and(acc, k.or(clause, escape)?)?;
        sgar_all.push(sgars);
        sasm_all.push(sasms);
    }
    Ok(AccPredicate { acc, sgar: sgar_all, sasm: sasm_all })
}

/// Per-guarantee distance layers on the output graph, never leaving the
/// current output SCC, plus the default stay-in-SCC relation.
pub struct TravelStrategy {
    /// Flattened guarantees in declaration order (over O).
    pub gars: Vec<Dd>,
    /// layers[j][r]: output states within r steps of a gar_j state, moving
    /// only along same-SCC edges. Cumulative: layers[j][r] ⊆ layers[j][r+1].
    pub layers: Vec<Vec<Dd>>,
    /// domain[j]: output states whose SCC contains a gar_j state.
    pub domain: Vec<Dd>,
    /// ρ_O restricted to same-SCC edges, over O ∪ O'.
    pub stay: Dd,
}

pub fn build_travel(game: &Game) -> Result<TravelStrategy> {
    let k = &game.kernel;
    let out_preds = GraphPredicates::build(k, game.trans_sys, &game.outputs)?;
    let stay = k.and(game.trans_sys, out_preds.scc)?;
    let primed_outputs = game.primed_outputs();
    let gars: Vec<Dd> = game
        .conjuncts
        .iter()
        .flat_map(|(_, g)| g.iter().copied())
        .collect();
    let mut layers = Vec::new();
    let mut domain = Vec::new();
    for &g in &gars {
        let mut ls = vec![g];
        let mut cur = g;
        loop {
            let tp = out_preds.prime(k, cur)?;
            let pre = k.exists(&primed_outputs, k.and(stay, tp)?)?;
            let next = k.or(cur, pre)?;
            if next == cur {
                break;
            }
            ls.push(next);
            cur = next;
        }
        domain.push(cur);
        layers.push(ls);
    }
    Ok(TravelStrategy { gars, layers, domain, stay })
}

/// Algorithm-2 controller: travel on accepting states, the weak Büchi
/// strategy elsewhere, with an explicit memory counter in [0, m).
pub struct Controller<'g> {
    pub game: &'g Game,
    pub win: Dd,
    pub acc: Dd,
    pub fb: Dd,
    pub travel: TravelStrategy,
}

impl<'g> Controller<'g> {
    /// Memory bound m (at least 1 so mem is well-defined with no guarantees).
    pub fn mem_bound(&self) -> usize {
        self.travel.gars.len().max(1)
    }

    fn output_assignment(&self, op: u32) -> HashMap<VarId, bool> {
        self.game
            .outputs
            .iter()
            .enumerate()
            .map(|(j, &v)| (v, (op >> j) & 1 == 1))
            .collect()
    }

    /// Picks the lexicographically smallest primed-output witness of `cand`
    /// and returns it as packed output bits.
    fn pick_output(&self, cand: Dd) -> Result<Option<u32>> {
        let k = &self.game.kernel;
        let po = self.game.primed_outputs();
        match k.pick_one(cand, &po)? {
            None => Ok(None),
            Some(asg) => {
                let mut op = 0u32;
                for (j, v) in po.iter().enumerate() {
                    if asg[v] {
                        op |= 1 << j;
                    }
                }
                Ok(Some(op))
            }
        }
    }

    /// One controller step. `s` packs the current state (bit j = variable j
    /// of inputs ++ outputs), `ip` the environment's chosen next input.
    /// Returns the produced output bits and the next memory value.
    pub fn step(&self, s: u32, mem: usize, ip: u32) -> Result<(u32, usize)> {
        let game = self.game;
        let k = &game.kernel;
        if !game.eval_state(self.win, s)? {
            return Err(Error::ControllerUndefined { state: game_state_string(game, s) });
        }
        let mut asg = game.state_assignment(s);
        for (j, &v) in game.primed_inputs().iter().enumerate() {
            asg.insert(v, (ip >> j) & 1 == 1);
        }
        if !k.eval(game.trans_env, &asg)? {
            return Err(Error::IllegalInput {
                state: game_state_string(game, s),
                input: bits_string(ip, game.inputs.len()),
            });
        }
        let here = k.and(game.state_cube(s)?, game.primed_input_cube(ip)?)?;

        if game.eval_state(self.acc, s)? {
            let m = self.travel.gars.len();
            let o_asg = self.output_assignment(s >> game.inputs.len());
            for t in 0..m {
                let nxt = (mem + t) % m;
                if !k.eval(self.travel.domain[nxt], &o_asg)? {
                    continue; // ⊥: this SCC has no gar_nxt state
                }
                let layers = &self.travel.layers[nxt];
                let rank = layers
                    .iter()
                    .position(|&d| k.eval(d, &o_asg).unwrap_or(false))
                    .unwrap_or(0);
                let op = if rank > 0 {
                    let target = prime_outputs(game, layers[rank - 1])?;
                    self.pick_output(k.and(here, k.and(self.travel.stay, target)?)?)?
                } else {
                    // already on a gar state: head for the lowest-rank
                    // successor so the tour keeps cycling
                    let mut best = None;
                    for &d in layers {
                        let target = prime_outputs(game, d)?;
                        let cand = k.and(here, k.and(self.travel.stay, target)?)?;
                        if let Some(op) = self.pick_output(cand)? {
                            best = Some(op);
                            break;
                        }
                    }
                    best
                };
                let op = match op {
                    Some(op) => op,
                    None => self.fallback_move(s, ip, here)?,
                };
                let satisfied = k.eval(self.travel.gars[nxt], &self.output_assignment(op))?;
                let mem_next = if satisfied { (nxt + 1) % m } else { mem };
                return Ok((op, mem_next));
            }
            // no guarantee satisfiable in this SCC (or m = 0): stay put
            let stay_cand = k.and(here, self.travel.stay)?;
            let op = match self.pick_output(stay_cand)? {
                Some(op) => op,
                None => self.fallback_move(s, ip, here)?,
            };
            return Ok((op, mem));
        }

        // non-accepting: the stabilizing strategy, memory reset
        let cand = k.and(here, k.and(self.fb, game.trans_sys)?)?;
        let op = match self.pick_output(cand)? {
            Some(op) => op,
            None => self.fallback_move(s, ip, here)?,
        };
        Ok((op, 0))
    }

    /// Transient corners (an SCC left involuntarily): prefer a move that
    /// stays winning, otherwise any legal move.
    fn fallback_move(&self, s: u32, ip: u32, here: Dd) -> Result<u32> {
        let game = self.game;
        let k = &game.kernel;
        let win_next = prime_state(game, self.win)?;
        let keep = k.and(here, k.and(game.trans_sys, win_next)?)?;
        if let Some(op) = self.pick_output(keep)? {
            return Ok(op);
        }
        let any = k.and(here, game.trans_sys)?;
        self.pick_output(any)?.ok_or_else(|| Error::Deadlock {
            player: "system".into(),
            state: format!(
                "{} / input {}",
                game_state_string(game, s),
                bits_string(ip, game.inputs.len())
            ),
        })
    }
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

fn prime_outputs(game: &Game, a: Dd) -> Result<Dd> {
    let k = &game.kernel;
    let pairs: Vec<_> = game
        .outputs
        .iter()
        .map(|&v| (v, k.registry().partner(v).unwrap()))
        .collect();
    k.rename(a, &pairs)
}

fn game_state_string(game: &Game, s: u32) -> String {
    bits_string(s, game.inputs.len() + game.outputs.len())
}

fn bits_string(bits: u32, n: usize) -> String {
    (0..n).map(|j| if (bits >> j) & 1 == 1 { '1' } else { '0' }).collect()
}

fn bits_parse(s: &str) -> Result<u32> {
    let mut out = 0u32;
    for (j, c) in s.chars().enumerate() {
        match c {
            '1' => out |= 1 << j,
            '0' => {}
            _ => return Err(Error::Invalid(format!("bad bitstring `{s}`"))),
        }
    }
    Ok(out)
}

/// Full solve: acc construction, weak Büchi reduction, realizability, and —
/// when realizable — the combined controller.
pub struct Solution<'g> {
    pub realizable: bool,
    pub win: Dd,
    pub weak_buchi: WeakBuchiSolution,
    pub acc: AccPredicate,
    pub controller: Option<Controller<'g>>,
    /// Kernel operations consumed by this solve.
    pub ops_used: u64,
}

pub fn solve(game: &Game) -> Result<Solution<'_>> {
    if !game.separated {
        return Err(Error::NotSeparated(
            "the GR(k) pipeline requires separated structures and conditions".into(),
        ));
    }
    let k = &game.kernel;
    let ops_before = k.ops();
    let preds = GraphPredicates::build(k, game.trans()?, &game.state_vars())?;
    let acc = build_acc(game, &preds)?;
    let wb = solve_weak_buchi_with(game, acc.acc, &preds)?;
    let realizable = check_realizable(game, wb.win)?;
    let controller = if realizable {
        Some(Controller {
            game,
            win: wb.win,
            acc: acc.acc,
            fb: wb.fb,
            travel: build_travel(game)?,
        })
    } else {
        None
    };
    Ok(Solution {
        realizable,
        win: wb.win,
        acc,
        controller,
        ops_used: k.ops() - ops_before,
        weak_buchi: wb,
    })
}

/// Restricts a strategy relation to the lexicographically smallest primed
/// output per (state, input), under the declared variable order.
pub fn determinize(k: &Kernel, rel: Dd, primed_outputs: &[VarId]) -> Result<Dd> {
    let mut r = rel;
    for &v in primed_outputs {
        let lit = k.mk_var_id(v);
        let can0 = k.exists(primed_outputs, k.and(r, k.not(lit)?)?)?;
        r = k.and(r, k.implies(can0, k.not(lit)?)?)?;
    }
    Ok(r)
}

pub const EXPORT_ROW_LIMIT: u128 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StratHeader {
    pub format: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub mem_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StratRow {
    pub mem: usize,
    pub state: String,
    pub input: String,
    pub output: String,
    pub mem_next: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StratFile {
    pub header: StratHeader,
    pub rows: Vec<StratRow>,
}

pub const STRAT_FORMAT: &str = "stratjson-v1";

/// Tabulates the controller over every winning state, legal input and
/// memory value. Refuses when the table would exceed [`EXPORT_ROW_LIMIT`].
pub fn export_strategy(ctrl: &Controller) -> Result<StratFile> {
    let game = ctrl.game;
    let k = &game.kernel;
    let ni = game.inputs.len();
    let mem_bound = ctrl.mem_bound();
    let mut over: Vec<VarId> = game.state_vars();
    over.extend(game.primed_inputs());
    let pairs = k.and(ctrl.win, game.trans_env)?;
    let total = k.sat_count(pairs, &over)? * mem_bound as u128;
    if total > EXPORT_ROW_LIMIT {
        return Err(Error::ExportTooLarge { rows: total, limit: EXPORT_ROW_LIMIT });
    }
    let mut rows = Vec::with_capacity(total as usize);
    for asg in k.enumerate(pairs, &over, EXPORT_ROW_LIMIT as usize + 1)? {
        let mut s = 0u32;
        for (j, v) in game.state_vars().iter().enumerate() {
            if asg[v] {
                s |= 1 << j;
            }
        }
        let mut ipat = 0u32;
        for (j, v) in game.primed_inputs().iter().enumerate() {
            if asg[v] {
                ipat |= 1 << j;
            }
        }
        for mem in 0..mem_bound {
            let (op, mem_next) = ctrl.step(s, mem, ipat)?;
            rows.push(StratRow {
                mem,
                state: bits_string(s, ni + game.outputs.len()),
                input: bits_string(ipat, ni),
                output: bits_string(op, game.outputs.len()),
                mem_next,
            });
        }
    }
    Ok(StratFile {
        header: StratHeader {
            format: STRAT_FORMAT.into(),
            inputs: game.spec.inputs.clone(),
            outputs: game.spec.outputs.clone(),
            mem_bound,
        },
        rows,
    })
}

impl StratFile {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<StratFile> {
        let f: StratFile = serde_json::from_str(text)?;
        if f.header.format != STRAT_FORMAT {
            return Err(Error::Invalid(format!(
                "unsupported strategy format `{}`",
                f.header.format
            )));
        }
        Ok(f)
    }

    /// Lookup-table form for replay: (mem, state, input) → (output, mem').
    pub fn table(&self) -> Result<HashMap<(usize, u32, u32), (u32, usize)>> {
        let mut t = HashMap::new();
        for r in &self.rows {
            t.insert(
                (r.mem, bits_parse(&r.state)?, bits_parse(&r.input)?),
                (bits_parse(&r.output)?, r.mem_next),
            );
        }
        Ok(t)
    }
}
