//! Symbolic graph predicates over a transition relation: reachability
//! closure, its inverse, the SCC equivalence relation, terminal SCCs, and
//! the downward-closed step used by the weak Büchi fixed point.
//!
//! All predicates are built over an explicit variable *scope*, so the same
//! code serves the full game graph (inputs ∪ outputs) and the output-only
//! graph used by the travel strategy.

use crate::dd::{Dd, Kernel, VarId};
use crate::error::{Error, Result};

pub struct GraphPredicates {
    /// Unprimed scope variables, declaration order.
    pub scope: Vec<VarId>,
    /// Edge relation over scope ∪ scope'.
    pub trans: Dd,
    /// Reflexive-transitive closure of `trans`.
    pub reach: Dd,
    /// reach_inv(s,t') ⇔ reach(t,s').
    pub reach_inv: Dd,
    /// scc = reach ∧ reach_inv — the "same SCC" equivalence relation.
    pub scc: Dd,
    /// States whose SCC has no outgoing edge to another SCC.
    pub terminal: Dd,
}

impl GraphPredicates {
    pub fn build(k: &Kernel, trans: Dd, scope: &[VarId]) -> Result<Self> {
        let reach = build_reach(k, trans, scope)?;
        let reach_inv = swap(k, reach, scope)?;
        let scc = k.and(reach, reach_inv)?;
        let primed = primed_of(k, scope);
        let terminal = k.forall(&primed, k.implies(reach, scc)?)?;
        Ok(GraphPredicates {
            scope: scope.to_vec(),
            trans,
            reach,
            reach_inv,
            scc,
            terminal,
        })
    }

    /// Renames scope variables to their primed partners.
    pub fn prime(&self, k: &Kernel, a: Dd) -> Result<Dd> {
        let pairs: Vec<_> = self
            .scope
            .iter()
            .map(|&v| (v, k.registry().partner(v).unwrap()))
            .collect();
        k.rename(a, &pairs)
    }

    /// DC^{i+1}(X) := ∀X'. Reach(X,X') → (SCC(X,X') ∨ DC(X')).
    ///
    /// `dc` must be a union of SCCs; violating that is reported, since the
    /// step would otherwise silently compute garbage.
    pub fn dc_step(&self, k: &Kernel, dc: Dd) -> Result<Dd> {
        let primed = primed_of(k, &self.scope);
        let dc_primed = self.prime(k, dc)?;
        let touched = k.exists(&primed, k.and(self.scc, dc_primed)?)?;
        let saturated = k.implies(touched, dc)?;
        if !k.is_true(saturated) {
            return Err(Error::NotSccSaturated);
        }
        let body = k.implies(self.reach, k.or(self.scc, dc_primed)?)?;
        k.forall(&primed, body)
    }

    /// Checks that `set` (over scope) is a union of SCCs.
    pub fn is_scc_saturated(&self, k: &Kernel, set: Dd) -> Result<bool> {
        let primed = primed_of(k, &self.scope);
        let set_primed = self.prime(k, set)?;
        let touched = k.exists(&primed, k.and(self.scc, set_primed)?)?;
        Ok(k.is_true(k.implies(touched, set)?))
    }
}

fn primed_of(k: &Kernel, scope: &[VarId]) -> Vec<VarId> {
    scope
        .iter()
        .map(|&v| k.registry().partner(v).unwrap())
        .collect()
}

/// The identity relation ⋀_{v ∈ scope} (v ↔ v').
pub fn identity_relation(k: &Kernel, scope: &[VarId]) -> Result<Dd> {
    let mut id = k.mk_true();
    for &v in scope {
        let p = k.registry().partner(v).unwrap();
        id = k.and(id, k.iff(k.mk_var_id(v), k.mk_var_id(p))?)?;
    }
    Ok(id)
}

/// Relational composition (R;T)(X,X') = ∃A. R(X,A) ∧ T(A,X'), using the
/// auxiliary variable copy as the middle column.
pub fn compose(k: &Kernel, r: Dd, t: Dd, scope: &[VarId]) -> Result<Dd> {
    let reg = k.registry();
    let mut to_aux_from_primed = Vec::new();
    let mut to_aux_from_unprimed = Vec::new();
    let mut aux = Vec::new();
    for &v in scope {
        let p = reg.partner(v).unwrap();
        let a = reg.shadow(v).unwrap();
        to_aux_from_primed.push((p, a));
        to_aux_from_unprimed.push((v, a));
        aux.push(a);
    }
    let left = k.rename(r, &to_aux_from_primed)?;
    let right = k.rename(t, &to_aux_from_unprimed)?;
    k.exists(&aux, k.and(left, right)?)
}

/// Swaps unprimed/primed scope variables — relation transposition.
pub fn swap(k: &Kernel, r: Dd, scope: &[VarId]) -> Result<Dd> {
    let reg = k.registry();
    let mut pairs = Vec::new();
    for &v in scope {
        let p = reg.partner(v).unwrap();
        pairs.push((v, p));
        pairs.push((p, v));
    }
    k.rename(r, &pairs)
}

/// Least fixed point of the reflexive-transitive closure, iterated on the
/// frontier of newly discovered pairs so iterations track path length.
pub fn build_reach(k: &Kernel, trans: Dd, scope: &[VarId]) -> Result<Dd> {
    let id = identity_relation(k, scope)?;
    let mut reach = id;
    let mut front = id;
    let cap = (1u64 << scope.len().min(62)) + 1;
    for _ in 0..cap {
        if k.is_false(front) {
            return Ok(reach);
        }
        let step = compose(k, front, trans, scope)?;
        front = k.and(step, k.not(reach)?)?;
        reach = k.or(reach, front)?;
    }
    Err(Error::FixedPointDiverged(cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dd::{VarRegistry, VarRole};
    use std::collections::HashMap;

    fn kernel2() -> Kernel {
        let mut reg = VarRegistry::new();
        reg.add_var("b1", VarRole::Input).unwrap();
        reg.add_var("b0", VarRole::Input).unwrap();
        Kernel::new(reg)
    }

    fn scope(k: &Kernel) -> Vec<VarId> {
        vec![k.registry().lookup("b1").unwrap(), k.registry().lookup("b0").unwrap()]
    }

    /// Edge relation from explicit (src, dst) pairs over 2-bit states.
    fn edges(k: &Kernel, list: &[(u8, u8)]) -> Dd {
        let sc = scope(k);
        let mut t = k.mk_false();
        for &(s, d) in list {
            let lits = vec![
                (sc[0], s & 2 != 0),
                (sc[1], s & 1 != 0),
                (k.registry().partner(sc[0]).unwrap(), d & 2 != 0),
                (k.registry().partner(sc[1]).unwrap(), d & 1 != 0),
            ];
            t = k.or(t, k.cube(&lits).unwrap()).unwrap();
        }
        t
    }

    fn pairs_of(k: &Kernel, rel: Dd) -> Vec<(u8, u8)> {
        let sc = scope(k);
        let all: Vec<VarId> = sc
            .iter()
            .copied()
            .chain(sc.iter().map(|&v| k.registry().partner(v).unwrap()))
            .collect();
        let mut out = Vec::new();
        for asg in k.enumerate(rel, &all, 1 << 10).unwrap() {
            let bit = |v: VarId| asg[&v] as u8;
            out.push((bit(sc[0]) * 2 + bit(sc[1]), bit(all[2]) * 2 + bit(all[3])));
        }
        out.sort_unstable();
        out
    }

    #[test]
    fn identity_only_graph() {
        let k = kernel2();
        let sc = scope(&k);
        let id = identity_relation(&k, &sc).unwrap();
        let g = GraphPredicates::build(&k, id, &sc).unwrap();
        assert_eq!(g.reach, id);
        assert_eq!(g.scc, id);
        assert!(k.is_true(g.terminal));
    }

    #[test]
    fn fan_out_graph_reach() {
        // 00→01, 00→10, loops on 01 and 10; 11 and 00 have no self loops.
        let k = kernel2();
        let sc = scope(&k);
        let t = edges(&k, &[(0, 1), (0, 2), (1, 1), (2, 2)]);
        let g = GraphPredicates::build(&k, t, &sc).unwrap();
        assert_eq!(
            pairs_of(&k, g.reach),
            vec![(0, 0), (0, 1), (0, 2), (1, 1), (2, 2), (3, 3)]
        );
        // terminal: every state except 00 (which can leave its own SCC)
        let mut term = Vec::new();
        for s in 0..4u8 {
            let asg: HashMap<VarId, bool> =
                HashMap::from([(sc[0], s & 2 != 0), (sc[1], s & 1 != 0)]);
            if k.eval(g.terminal, &asg).unwrap() {
                term.push(s);
            }
        }
        assert_eq!(term, vec![1, 2, 3]);
    }

    #[test]
    fn chain_of_four_has_ten_reach_pairs() {
        let k = kernel2();
        let sc = scope(&k);
        let t = edges(&k, &[(0, 1), (1, 2), (2, 3)]);
        let g = GraphPredicates::build(&k, t, &sc).unwrap();
        let all: Vec<VarId> = sc
            .iter()
            .copied()
            .chain(sc.iter().map(|&v| k.registry().partner(v).unwrap()))
            .collect();
        assert_eq!(k.sat_count(g.reach, &all).unwrap(), 10);
    }

    #[test]
    fn dc_step_grows_downward_closed_sets() {
        // chain 00→01→10→11 with a self loop on 11
        let k = kernel2();
        let sc = scope(&k);
        let t = edges(&k, &[(0, 1), (1, 2), (2, 3), (3, 3)]);
        let g = GraphPredicates::build(&k, t, &sc).unwrap();
        // base case: DC⁰ = terminal = {11}
        let dc1 = g.dc_step(&k, g.terminal).unwrap();
        let state = |s: u8| {
            k.cube(&[(sc[0], s & 2 != 0), (sc[1], s & 1 != 0)]).unwrap()
        };
        let expect1 = k.or(state(2), state(3)).unwrap();
        assert_eq!(dc1, expect1);
        // iterating reaches TRUE and stays there
        let dc2 = g.dc_step(&k, dc1).unwrap();
        let dc3 = g.dc_step(&k, dc2).unwrap();
        assert!(k.is_true(dc3));
        assert!(k.is_true(g.dc_step(&k, dc3).unwrap()));
    }

    #[test]
    fn dc_step_rejects_unsaturated_input() {
        // 2-cycle 10↔11: {11} alone is not a union of SCCs
        let k = kernel2();
        let sc = scope(&k);
        let t = edges(&k, &[(0, 0), (1, 1), (2, 3), (3, 2)]);
        let g = GraphPredicates::build(&k, t, &sc).unwrap();
        let s3 = k.cube(&[(sc[0], true), (sc[1], true)]).unwrap();
        assert!(matches!(g.dc_step(&k, s3), Err(Error::NotSccSaturated)));
    }

    #[test]
    fn scc_is_equivalence_relation() {
        let k = kernel2();
        let sc = scope(&k);
        // two 2-cycles: 00↔01, 10↔11
        let t = edges(&k, &[(0, 1), (1, 0), (2, 3), (3, 2)]);
        let g = GraphPredicates::build(&k, t, &sc).unwrap();
        let id = identity_relation(&k, &sc).unwrap();
        // reflexive
        assert!(k.is_true(k.implies(id, g.scc).unwrap()));
        // symmetric
        assert_eq!(swap(&k, g.scc, &sc).unwrap(), g.scc);
        // transitive
        let comp = compose(&k, g.scc, g.scc, &sc).unwrap();
        assert!(k.is_true(k.implies(comp, g.scc).unwrap()));
        // and here every state is in a 2-cycle, so scc has 8 pairs
        assert_eq!(pairs_of(&k, g.scc).len(), 8);
    }
}
