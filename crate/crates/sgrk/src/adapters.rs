//! The adapter pipeline: explicit transducers, projection to input/output
//! transition systems, composition and inversion, and assembly of
//! Adapter = Adaptee⁻¹ ∘ Controller ∘ Target with co-simulation checks.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::grk::Controller;
use crate::oracle::Compiled;
use crate::spec::{Conjunct, GameSpec};

/// Deterministic finite-state transducer. Inputs are symbolic names;
/// outputs are labels, usually bitstring assignments over `out_vars`
/// (character j = variable j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transducer {
    pub out_vars: Vec<String>,
    pub states: Vec<String>,
    pub initial: usize,
    /// Per state: input symbol → (output label, destination).
    pub trans: Vec<BTreeMap<String, (String, usize)>>,
}

impl Transducer {
    pub fn new(out_vars: Vec<String>, states: Vec<String>, initial: usize) -> Transducer {
        let n = states.len();
        Transducer { out_vars, states, initial, trans: vec![BTreeMap::new(); n] }
    }

    pub fn add_trans(&mut self, src: usize, sym: &str, out: &str, dst: usize) -> Result<()> {
        if self.trans[src].insert(sym.to_string(), (out.to_string(), dst)).is_some() {
            return Err(Error::Invalid(format!(
                "nondeterministic: state `{}` has two transitions on `{sym}`",
                self.states[src]
            )));
        }
        Ok(())
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn step(&self, state: usize, sym: &str) -> Option<(&str, usize)> {
        self.trans[state].get(sym).map(|(o, d)| (o.as_str(), *d))
    }

    /// Restricts to states reachable from the initial state.
    pub fn trim(&self) -> Transducer {
        let mut keep = vec![false; self.states.len()];
        let mut queue = VecDeque::from([self.initial]);
        keep[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            for (_, &(_, d)) in &self.trans[q] {
                if !keep[d] {
                    keep[d] = true;
                    queue.push_back(d);
                }
            }
        }
        let remap: Vec<Option<usize>> = {
            let mut next = 0;
            keep.iter()
                .map(|&k| {
                    if k {
                        next += 1;
                        Some(next - 1)
                    } else {
                        None
                    }
                })
                .collect()
        };
        let mut out = Transducer::new(
            self.out_vars.clone(),
            self.states
                .iter()
                .zip(&keep)
                .filter(|(_, &k)| k)
                .map(|(s, _)| s.clone())
                .collect(),
            remap[self.initial].unwrap(),
        );
        for (q, row) in self.trans.iter().enumerate() {
            if let Some(nq) = remap[q] {
                for (sym, (lbl, d)) in row {
                    out.trans[nq].insert(sym.clone(), (lbl.clone(), remap[*d].unwrap()));
                }
            }
        }
        out
    }

    /// Runs an input word, returning the emitted labels.
    pub fn run(&self, word: &[String]) -> Result<Vec<String>> {
        let mut q = self.initial;
        let mut out = Vec::with_capacity(word.len());
        for sym in word {
            let (lbl, d) = self.step(q, sym).ok_or_else(|| Error::IllegalSymbol {
                state: self.states[q].clone(),
                symbol: sym.clone(),
            })?;
            out.push(lbl.to_string());
            q = d;
        }
        Ok(out)
    }

    /// All output words of length ≤ `len` (for bounded language checks).
    pub fn output_language(&self, len: usize) -> BTreeSet<Vec<String>> {
        let mut seen = BTreeSet::new();
        let mut frontier = vec![(self.initial, Vec::new())];
        seen.insert(Vec::new());
        for _ in 0..len {
            let mut next = Vec::new();
            for (q, word) in frontier {
                for (_, (lbl, d)) in &self.trans[q] {
                    let mut w = word.clone();
                    w.push(lbl.clone());
                    seen.insert(w.clone());
                    next.push((*d, w));
                }
            }
            frontier = next;
        }
        seen
    }
}

/// Explicit transition system over an output variable set; states are
/// packed assignments (bit j = variable j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionSystem {
    pub vars: Vec<String>,
    pub states: BTreeSet<u32>,
    pub init: BTreeSet<u32>,
    pub edges: BTreeSet<(u32, u32)>,
    /// True when two transducer states shared a label and were merged.
    pub merged: bool,
}

pub fn bits_parse(s: &str) -> Result<u32> {
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

pub fn bits_string(bits: u32, n: usize) -> String {
    (0..n).map(|j| if (bits >> j) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Label-keyed quotient: one TS state per emitted label; edge (u,v) iff a
/// transition labeled u can be followed by one labeled v. States sharing a
/// label merge (successors union), which over-approximates the language.
/// With `pre_initial` the TS gains a designated start assignment with edges
/// to every first-emitted label; otherwise the first labels are initial.
pub fn project(t: &Transducer, pre_initial: Option<u32>) -> Result<TransitionSystem> {
    let t = t.trim();
    let nv = t.out_vars.len();
    let mut states = BTreeSet::new();
    let mut edges = BTreeSet::new();
    let mut label_of = Vec::new(); // (label, dst state) per transition
    let mut merged = false;
    let mut owner: HashMap<u32, usize> = HashMap::new();
    for (q, row) in t.trans.iter().enumerate() {
        for (_, (lbl, d)) in row {
            if lbl.len() != nv {
                return Err(Error::Invalid(format!(
                    "label `{lbl}` does not match the {nv} output variables"
                )));
            }
            let u = bits_parse(lbl)?;
            states.insert(u);
            if let Some(&prev) = owner.get(&u) {
                if prev != *d {
                    merged = true;
                }
            } else {
                owner.insert(u, *d);
            }
            label_of.push((u, *d, q));
        }
    }
    for &(u, d, _) in &label_of {
        for (_, (lbl2, _)) in &t.trans[d] {
            edges.insert((u, bits_parse(lbl2)?));
        }
    }
    let first: BTreeSet<u32> = t.trans[t.initial]
        .values()
        .map(|(lbl, _)| bits_parse(lbl))
        .collect::<Result<_>>()?;
    let init = match pre_initial {
        Some(c) => {
            states.insert(c);
            for &f in &first {
                edges.insert((c, f));
            }
            BTreeSet::from([c])
        }
        None => first,
    };
    Ok(TransitionSystem { vars: t.out_vars.clone(), states, init, edges, merged })
}

impl TransitionSystem {
    /// Initial assertion as a formula (disjunction of state cubes).
    pub fn init_formula(&self) -> Formula {
        Formula::disj(self.init.iter().map(|&s| self.cube(s, false)).collect())
    }

    /// Transition assertion over V ∪ V'. Assignments outside `states` get
    /// frozen self-loops so the relation stays total.
    pub fn trans_formula(&self) -> Formula {
        let mut by_src: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for &(u, v) in &self.edges {
            by_src.entry(u).or_default().push(v);
        }
        let mut parts: Vec<Formula> = by_src
            .into_iter()
            .map(|(u, vs)| {
                Formula::and(
                    self.cube(u, false),
                    Formula::disj(vs.into_iter().map(|v| self.cube(v, true)).collect()),
                )
            })
            .collect();
        let listed = Formula::disj(self.states.iter().map(|&s| self.cube(s, false)).collect());
        let freeze = Formula::conj(
            self.vars
                .iter()
                .map(|n| Formula::iff(Formula::atom_primed(n), Formula::atom(n)))
                .collect(),
        );
        parts.push(Formula::and(Formula::not(listed), freeze));
        Formula::disj(parts)
    }

    fn cube(&self, s: u32, primed: bool) -> Formula {
        Formula::conj(
            self.vars
                .iter()
                .enumerate()
                .map(|(j, n)| {
                    let a = if primed {
                        Formula::atom_primed(n)
                    } else {
                        Formula::atom(n)
                    };
                    if (s >> j) & 1 == 1 {
                        a
                    } else {
                        Formula::not(a)
                    }
                })
                .collect(),
        )
    }

    /// Output words of length ≤ len, starting anywhere in `init`.
    pub fn language(&self, len: usize) -> BTreeSet<Vec<String>> {
        let nv = self.vars.len();
        let mut seen = BTreeSet::new();
        seen.insert(Vec::new());
        if len == 0 {
            return seen;
        }
        let mut frontier: Vec<(u32, Vec<String>)> = self
            .init
            .iter()
            .map(|&s| (s, vec![bits_string(s, nv)]))
            .collect();
        for (_, w) in &frontier {
            seen.insert(w.clone());
        }
        for _ in 1..len {
            let mut next = Vec::new();
            for (s, word) in frontier {
                for &(u, v) in self.edges.range((s, 0)..=(s, u32::MAX)) {
                    debug_assert_eq!(u, s);
                    let mut w = word.clone();
                    w.push(bits_string(v, nv));
                    seen.insert(w.clone());
                    next.push((v, w));
                }
            }
            frontier = next;
        }
        seen
    }
}

/// Builds a separated game from an input TS (environment) and an output TS
/// (system) plus GR(k) conjuncts.
pub fn ts_to_game_spec(
    input: &TransitionSystem,
    output: &TransitionSystem,
    conjuncts: Vec<Conjunct>,
) -> GameSpec {
    GameSpec {
        inputs: input.vars.clone(),
        outputs: output.vars.clone(),
        init_env: input.init_formula(),
        init_sys: output.init_formula(),
        trans_env: input.trans_formula(),
        trans_sys: output.trans_formula(),
        conjuncts,
    }
}

/// Cascade product f ∘ g: g consumes the input symbol and its output label
/// becomes the input symbol of f; the composite emits f's label. Every
/// symbol f consumes must be a bitstring over g's output variables.
pub fn compose(f: &Transducer, g: &Transducer) -> Result<Transducer> {
    let want = g.out_vars.len();
    for row in &f.trans {
        for sym in row.keys() {
            if sym.len() != want || sym.chars().any(|c| c != '0' && c != '1') {
                return Err(Error::AlphabetMismatch(format!(
                    "symbol `{sym}` is not an assignment over {want} variables"
                )));
            }
        }
    }
    let mut states = vec![(f.initial, g.initial)];
    let mut index = HashMap::from([((f.initial, g.initial), 0usize)]);
    let mut out = Transducer::new(
        f.out_vars.clone(),
        vec![pair_name(f, g, f.initial, g.initial)],
        0,
    );
    let mut head = 0;
    while head < states.len() {
        let (qf, qg) = states[head];
        let moves: Vec<(String, String, usize, usize)> = g.trans[qg]
            .iter()
            .filter_map(|(sym, (lg, dg))| {
                f.step(qf, lg).map(|(lf, df)| (sym.clone(), lf.to_string(), df, *dg))
            })
            .collect();
        for (sym, lf, df, dg) in moves {
            let key = (df, dg);
            let idx = *index.entry(key).or_insert_with(|| {
                states.push(key);
                out.states.push(pair_name(f, g, df, dg));
                out.trans.push(BTreeMap::new());
                out.states.len() - 1
            });
            out.trans[head].insert(sym, (lf, idx));
        }
        head += 1;
    }
    Ok(out)
}

fn pair_name(f: &Transducer, g: &Transducer, qf: usize, qg: usize) -> String {
    format!("{}.{}", g.states[qg], f.states[qf])
}

/// Swaps input symbols and output labels. Requires output-injectivity: the
/// outgoing transitions of every state must carry distinct labels.
pub fn invert(t: &Transducer) -> Result<Transducer> {
    let mut out = Transducer::new(Vec::new(), t.states.clone(), t.initial);
    for (q, row) in t.trans.iter().enumerate() {
        for (sym, (lbl, d)) in row {
            if out.trans[q].insert(lbl.clone(), (sym.clone(), *d)).is_some() {
                return Err(Error::NotInvertible {
                    state: t.states[q].clone(),
                    label: lbl.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Canonical-form isomorphism check: BFS renumbering from the initial state
/// with transitions taken in symbol order.
pub fn isomorphic(a: &Transducer, b: &Transducer) -> bool {
    fn canon(t: &Transducer) -> Vec<(usize, String, String, usize)> {
        let mut order = HashMap::from([(t.initial, 0usize)]);
        let mut queue = VecDeque::from([t.initial]);
        let mut edges = Vec::new();
        while let Some(q) = queue.pop_front() {
            for (sym, (lbl, d)) in &t.trans[q] {
                let next = order.len();
                let id = *order.entry(*d).or_insert_with(|| {
                    queue.push_back(*d);
                    next
                });
                edges.push((order[&q], sym.clone(), lbl.clone(), id));
            }
        }
        edges
    }
    canon(&a.trim()) == canon(&b.trim())
}

/// Assembles Adapter = Adaptee⁻¹ ∘ Controller ∘ Target as an explicit
/// product machine: target state × game state × controller memory ×
/// adaptee state, emitting adaptee input symbols.
pub fn assemble_adapter(
    target: &Transducer,
    adaptee: &Transducer,
    ctrl: &Controller,
) -> Result<Transducer> {
    let game = ctrl.game;
    let ni = game.inputs.len();
    if target.out_vars.len() != ni || adaptee.out_vars.len() != game.outputs.len() {
        return Err(Error::AlphabetMismatch(
            "target/adaptee variable counts do not match the game".into(),
        ));
    }
    invert(adaptee)?; // fail fast with the witness if not invertible

    // initial game state from θ: the designated pre-initial assignments
    let init_i = pick_initial(&game.spec.init_env, &game.spec.inputs)?;
    let init_o = pick_initial(&game.spec.init_sys, &game.spec.outputs)?;
    let s0 = init_i | (init_o << ni);

    type Key = (usize, u32, usize, usize); // (target, game state, mem, adaptee)
    let start: Key = (target.initial, s0, 0, adaptee.initial);
    let mut index: HashMap<Key, usize> = HashMap::from([(start, 0)]);
    let mut states = vec![start];
    let mut out = Transducer::new(Vec::new(), vec![key_name(target, adaptee, &start)], 0);
    let mut head = 0;
    while head < states.len() {
        let (qt, s, mem, qa) = states[head];
        let moves: Vec<(String, String, usize)> = target.trans[qt]
            .iter()
            .map(|(sym, (lbl, dt))| (sym.clone(), lbl.clone(), *dt))
            .collect();
        for (sym, lbl, dt) in moves {
            let ip = bits_parse(&lbl)?;
            let (op, mem2) = ctrl.step(s, mem, ip).map_err(|e| {
                Error::AdapterAssembly(format!(
                    "controller failed at adapter state {} on target input `{sym}`: {e}",
                    key_name(target, adaptee, &states[head])
                ))
            })?;
            let want = bits_string(op, adaptee.out_vars.len());
            let (y, da) = adaptee.trans[qa]
                .iter()
                .find(|(_, (l, _))| *l == want)
                .map(|(y, (_, d))| (y.clone(), *d))
                .ok_or_else(|| {
                    Error::AdapterAssembly(format!(
                        "adaptee state `{}` has no transition emitting {want}",
                        adaptee.states[qa]
                    ))
                })?;
            let key: Key = (dt, ip | (op << ni), mem2, da);
            let idx = *index.entry(key).or_insert_with(|| {
                states.push(key);
                out.states.push(key_name(target, adaptee, &key));
                out.trans.push(BTreeMap::new());
                out.states.len() - 1
            });
            out.trans[head].insert(sym, (y, idx));
        }
        head += 1;
    }
    Ok(out)
}

fn key_name(target: &Transducer, adaptee: &Transducer, k: &(usize, u32, usize, usize)) -> String {
    format!("{}.m{}s{}.{}", target.states[k.0], k.2, k.1, adaptee.states[k.3])
}

/// Picks the single assignment a cube-style initial assertion denotes.
fn pick_initial(f: &Formula, names: &[String]) -> Result<u32> {
    let index: HashMap<String, usize> =
        names.iter().enumerate().map(|(j, n)| (n.clone(), j)).collect();
    let c = Compiled::new(f, &index)?;
    (0..1u32 << names.len())
        .find(|&v| c.eval(v, 0))
        .ok_or_else(|| Error::UnsatInitial("initial assertion unsatisfiable".into()))
}

/// Per-conjunct verdict on the induced lasso cycle.
#[derive(Debug, Clone)]
pub struct ConjunctTally {
    /// Occurrences of each assumption among the cycle's zipped states.
    pub assumption_hits: Vec<usize>,
    /// Occurrences of each guarantee.
    pub guarantee_hits: Vec<usize>,
    pub satisfied: bool,
}

#[derive(Debug, Clone)]
pub struct CosimReport {
    /// Zipped (target output, adaptee output) labels, one per step.
    pub trace: Vec<(String, String)>,
    /// Start of the detected joint-state cycle within the trace.
    pub cycle_start: usize,
    pub tallies: Vec<ConjunctTally>,
}

/// Drives the target and the adapter-controlled adaptee with the lasso word
/// prefix·cycleʷ, zips the outputs, and evaluates each GF→GF conjunct on
/// the eventually-periodic part.
pub fn cosimulate(
    target: &Transducer,
    adaptee: &Transducer,
    adapter: &Transducer,
    spec: &GameSpec,
    prefix: &[String],
    cycle: &[String],
) -> Result<CosimReport> {
    if cycle.is_empty() {
        let trace = zip_run(target, adaptee, adapter, prefix)?.0;
        return Ok(CosimReport { trace, cycle_start: prefix.len(), tallies: Vec::new() });
    }
    // unroll the cycle until the joint machine state repeats at a boundary
    let bound = target.states.len() * adaptee.states.len() * adapter.states.len() + 1;
    let mut word: Vec<String> = prefix.to_vec();
    let mut boundaries: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let (mut trace, mut joint) = zip_run(target, adaptee, adapter, &word)?;
    let mut cycle_start = None;
    for _ in 0..bound {
        if let Some(&at) = boundaries.get(&joint) {
            cycle_start = Some(at);
            break;
        }
        boundaries.insert(joint, word.len());
        word.extend(cycle.iter().cloned());
        let r = zip_run(target, adaptee, adapter, &word)?;
        trace = r.0;
        joint = r.1;
    }
    let cycle_start = cycle_start.ok_or_else(|| {
        Error::Invalid("lasso cycle did not close (joint state never repeated)".into())
    })?;

    let mut index = HashMap::new();
    for (j, n) in spec.inputs.iter().chain(spec.outputs.iter()).enumerate() {
        index.insert(n.clone(), j);
    }
    let ni = spec.inputs.len();
    let loop_states: Vec<u32> = trace[cycle_start..]
        .iter()
        .map(|(ti, ao)| Ok(bits_parse(ti)? | (bits_parse(ao)? << ni)))
        .collect::<Result<_>>()?;
    let tallies = spec
        .conjuncts
        .iter()
        .map(|c| {
            let hits = |fs: &[Formula]| -> Result<Vec<usize>> {
                fs.iter()
                    .map(|f| {
                        let cf = Compiled::new(f, &index)?;
                        Ok(loop_states.iter().filter(|&&s| cf.eval(s, 0)).count())
                    })
                    .collect()
            };
            let assumption_hits = hits(&c.assumptions)?;
            let guarantee_hits = hits(&c.guarantees)?;
            let satisfied = assumption_hits.iter().any(|&h| h == 0)
                || guarantee_hits.iter().all(|&h| h > 0);
            Ok(ConjunctTally { assumption_hits, guarantee_hits, satisfied })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CosimReport { trace, cycle_start, tallies })
}

/// Runs the same word through the target and through adapter→adaptee,
/// returning the zipped outputs and the final joint state.
fn zip_run(
    target: &Transducer,
    adaptee: &Transducer,
    adapter: &Transducer,
    word: &[String],
) -> Result<(Vec<(String, String)>, (usize, usize, usize))> {
    let t_out = target.run(word)?;
    let a_in = adapter.run(word)?;
    let a_out = adaptee.run(&a_in)?;
    let mut qt = target.initial;
    let mut qd = adapter.initial;
    let mut qa = adaptee.initial;
    for (sym, mid) in word.iter().zip(&a_in) {
        qt = target.step(qt, sym).unwrap().1;
        qd = adapter.step(qd, sym).unwrap().1;
        qa = adaptee.step(qa, mid).unwrap().1;
    }
    Ok((t_out.into_iter().zip(a_out).collect(), (qt, qd, qa)))
}

/// .tx serialization: a VARS header, STATE lines (initial flagged), and
/// TRANS lines `src --sym/label--> dst`. Printing is byte-stable.
pub fn print_tx(t: &Transducer) -> String {
    let mut out = String::new();
    out.push_str("VARS:");
    for v in &t.out_vars {
        out.push(' ');
        out.push_str(v);
    }
    out.push('\n');
    for (i, s) in t.states.iter().enumerate() {
        if i == t.initial {
            out.push_str(&format!("STATE {s} initial\n"));
        } else {
            out.push_str(&format!("STATE {s}\n"));
        }
    }
    for (q, row) in t.trans.iter().enumerate() {
        for (sym, (lbl, d)) in row {
            out.push_str(&format!(
                "TRANS {} --{sym}/{lbl}--> {}\n",
                t.states[q], t.states[*d]
            ));
        }
    }
    out
}

pub fn parse_tx(text: &str) -> Result<Transducer> {
    let mut out_vars = Vec::new();
    let mut states: Vec<String> = Vec::new();
    let mut initial = None;
    let mut trans_lines = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |msg: &str| Error::Syntax {
            line: lineno + 1,
            col: 1,
            msg: msg.to_string(),
        };
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("VARS:") {
            out_vars = rest.split_whitespace().map(str::to_string).collect();
        } else if let Some(rest) = line.strip_prefix("STATE ") {
            let mut it = rest.split_whitespace();
            let name = it.next().ok_or_else(|| err("missing state name"))?;
            if states.iter().any(|s| s == name) {
                return Err(err(&format!("duplicate state `{name}`")));
            }
            states.push(name.to_string());
            match it.next() {
                Some("initial") => {
                    if initial.replace(states.len() - 1).is_some() {
                        return Err(err("two initial states"));
                    }
                }
                Some(tok) => return Err(err(&format!("unexpected `{tok}`"))),
                None => {}
            }
        } else if let Some(rest) = line.strip_prefix("TRANS ") {
            trans_lines.push((lineno + 1, rest.to_string()));
        } else {
            return Err(err("expected VARS:, STATE or TRANS"));
        }
    }
    let initial = initial.ok_or_else(|| Error::Syntax {
        line: 1,
        col: 1,
        msg: "no initial state declared".into(),
    })?;
    let mut t = Transducer::new(out_vars, states, initial);
    for (lineno, rest) in trans_lines {
        let err = |msg: String| Error::Syntax { line: lineno, col: 1, msg };
        let (src, rest) = rest
            .split_once(" --")
            .ok_or_else(|| err("expected `src --sym/label--> dst`".into()))?;
        let (mid, dst) = rest
            .split_once("--> ")
            .ok_or_else(|| err("expected `--> dst`".into()))?;
        let (sym, lbl) = mid
            .split_once('/')
            .ok_or_else(|| err("expected `sym/label`".into()))?;
        let si = t
            .state_index(src.trim())
            .ok_or_else(|| err(format!("unknown state `{src}`")))?;
        let di = t
            .state_index(dst.trim())
            .ok_or_else(|| err(format!("unknown state `{dst}`")))?;
        t.add_trans(si, sym.trim(), lbl.trim(), di)
            .map_err(|e| err(e.to_string()))?;
    }
    Ok(t)
}

/// The §4 Target: commands U/D pick a mode from s0, S holds it.
/// Output bitstrings assign (t1, t2).
pub fn example_target() -> Transducer {
    let mut t = Transducer::new(
        vec!["t1".into(), "t2".into()],
        vec!["s0".into(), "s1".into(), "s2".into()],
        0,
    );
    t.add_trans(0, "U", "01", 1).unwrap();
    t.add_trans(0, "D", "10", 2).unwrap();
    t.add_trans(1, "S", "01", 1).unwrap();
    t.add_trans(2, "S", "10", 2).unwrap();
    t
}

/// The §4 Adaptee: no S after U — a D from s1 drops back to s0 instead.
/// Output bitstrings assign (a1, a2).
pub fn example_adaptee() -> Transducer {
    let mut t = Transducer::new(
        vec!["a1".into(), "a2".into()],
        vec!["s0".into(), "s1".into(), "s2".into()],
        0,
    );
    t.add_trans(0, "U", "01", 1).unwrap();
    t.add_trans(0, "D", "10", 2).unwrap();
    t.add_trans(1, "D", "00", 0).unwrap();
    t.add_trans(2, "S", "10", 2).unwrap();
    t
}

/// The §4 winning condition: GF(t = bin(sᵢ)) → GF(a = bin(sᵢ)) for the
/// three modes 00, 01, 10.
pub fn example_conjuncts() -> Vec<Conjunct> {
    let cube = |v1: &str, v2: &str, bits: &str| {
        let at = |n: &str, on: bool| {
            if on {
                Formula::atom(n)
            } else {
                Formula::not(Formula::atom(n))
            }
        };
        Formula::and(at(v1, bits.starts_with('1')), at(v2, bits.ends_with('1')))
    };
    ["00", "01", "10"]
        .iter()
        .map(|b| Conjunct {
            assumptions: vec![cube("t1", "t2", b)],
            guarantees: vec![cube("a1", "a2", b)],
        })
        .collect()
}

/// The full §4 game: projected Input/Output systems (pre-initial 00 both
/// sides) plus the three mode conjuncts.
pub fn example_game_spec() -> Result<GameSpec> {
    let input = project(&example_target(), Some(0))?;
    let output = project(&example_adaptee(), Some(0))?;
    Ok(ts_to_game_spec(&input, &output, example_conjuncts()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_projects_to_fig2_input_ts() {
        let ts = project(&example_target(), Some(0)).unwrap();
        assert_eq!(ts.vars, vec!["t1".to_string(), "t2".to_string()]);
        // labels: 00, 01 (t2 set → bit 1), 10 (t1 set → bit 0)
        assert_eq!(ts.states, BTreeSet::from([0b00, 0b10, 0b01]));
        assert_eq!(ts.init, BTreeSet::from([0b00]));
        assert_eq!(
            ts.edges,
            BTreeSet::from([(0b00, 0b10), (0b00, 0b01), (0b10, 0b10), (0b01, 0b01)])
        );
        assert!(!ts.merged);
    }

    #[test]
    fn adaptee_projects_to_fig2_output_ts() {
        let ts = project(&example_adaptee(), Some(0)).unwrap();
        assert_eq!(ts.states, BTreeSet::from([0b00, 0b10, 0b01]));
        assert_eq!(
            ts.edges,
            BTreeSet::from([(0b00, 0b10), (0b00, 0b01), (0b10, 0b00), (0b01, 0b01)])
        );
    }

    #[test]
    fn projection_language_matches_bounded_unrollings() {
        for t in [example_target(), example_adaptee()] {
            let ts = project(&t, None).unwrap();
            let lhs = t.output_language(6);
            let rhs: BTreeSet<Vec<String>> =
                ts.language(6).into_iter().filter(|w| w.len() <= 6).collect();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn constant_emitter_projects_to_self_loop() {
        let mut t = Transducer::new(vec!["c".into()], vec!["q".into()], 0);
        t.add_trans(0, "go", "1", 0).unwrap();
        let ts = project(&t, None).unwrap();
        assert_eq!(ts.states, BTreeSet::from([1]));
        assert_eq!(ts.edges, BTreeSet::from([(1, 1)]));
        assert_eq!(ts.init, BTreeSet::from([1]));
    }

    #[test]
    fn compose_with_identity_and_associativity() {
        let adaptee = example_adaptee();
        let mut ident = Transducer::new(vec!["a1".into(), "a2".into()], vec!["i".into()], 0);
        for lbl in ["00", "01", "10", "11"] {
            ident.add_trans(0, lbl, lbl, 0).unwrap();
        }
        let c = compose(&ident, &adaptee).unwrap();
        assert!(isomorphic(&c, &adaptee));
        // (ident ∘ ident) ∘ adaptee vs ident ∘ (ident ∘ adaptee)
        let lhs = compose(&compose(&ident, &ident).unwrap(), &adaptee).unwrap();
        let rhs = compose(&ident, &compose(&ident, &adaptee).unwrap()).unwrap();
        assert!(isomorphic(&lhs, &rhs));
    }

    #[test]
    fn alphabet_mismatch_detected() {
        let target = example_target(); // consumes U/D/S, not bitstrings
        assert!(matches!(
            compose(&target, &example_adaptee()),
            Err(Error::AlphabetMismatch(_))
        ));
    }

    #[test]
    fn invert_round_trips_and_rejects_collisions() {
        let adaptee = example_adaptee();
        let inv = invert(&adaptee).unwrap();
        let back = invert(&inv).unwrap();
        assert!(isomorphic(&back, &adaptee));

        let mut bad = Transducer::new(vec!["v".into()], vec!["q".into(), "r".into()], 0);
        bad.add_trans(0, "x", "1", 0).unwrap();
        bad.add_trans(0, "y", "1", 1).unwrap();
        assert!(matches!(invert(&bad), Err(Error::NotInvertible { .. })));
    }

    #[test]
    fn tx_round_trip() {
        let t = example_adaptee();
        let text = print_tx(&t);
        let back = parse_tx(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(print_tx(&back), text);
    }

    #[test]
    fn example_adapter_cosimulates() {
        let spec = example_game_spec().unwrap();
        let game = spec.compile(true).unwrap();
        let sol = crate::grk::solve(&game).unwrap();
        assert!(sol.realizable);
        let ctrl = sol.controller.as_ref().unwrap();
        let target = example_target();
        let adaptee = example_adaptee();
        let adapter = assemble_adapter(&target, &adaptee, ctrl).unwrap();

        // (U, S^ω): target stabilizes at 01; the adaptee must revisit 01
        let s = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let rep = cosimulate(&target, &adaptee, &adapter, &spec, &s(&["U"]), &s(&["S"])).unwrap();
        assert!(rep.tallies.iter().all(|t| t.satisfied), "{rep:?}");

        // (D, S^ω): both stabilize at 10
        let rep = cosimulate(&target, &adaptee, &adapter, &spec, &s(&["D"]), &s(&["S"])).unwrap();
        assert!(rep.tallies.iter().all(|t| t.satisfied), "{rep:?}");
    }
}
