//! Reduced ordered binary decision diagrams.
//!
//! A [`Kernel`] owns a shared, hash-consed node store, so two handles denote
//! the same Boolean function iff they are equal. Every apply-level operation
//! (`and`, `or`, `implies`, `iff`, `xor`, `not`, `exists`, `forall`, `rename`,
//! `cube`) bumps an operation counter; satisfaction queries and dumps do not.
//!
//! Variables live in a [`VarRegistry`]. Declaring a variable `v` allocates
//! three adjacent diagram levels: `v`, its primed partner `v'`, and a hidden
//! auxiliary copy used for relational composition. The default ordering thus
//! interleaves each variable with its primed partner.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::rc::Rc;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// A diagram level (one Boolean variable in the global ordering).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarRole {
    Input,
    Output,
    Auxiliary,
}

#[derive(Debug, Clone)]
struct VarEntry {
    name: String,
    role: VarRole,
    /// Primed partner level, for unprimed/primed game variables.
    partner: Option<u32>,
    primed: bool,
    /// The auxiliary shadow level of this variable's base, if it has one.
    shadow: Option<u32>,
}

/// Ordered variable table shared by a kernel and everything built on it.
#[derive(Debug, Default, Clone)]
pub struct VarRegistry {
    entries: Vec<VarEntry>,
    by_name: HashMap<String, u32>,
}

impl VarRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a game variable, allocating `name`, `name'` and a hidden
    /// auxiliary copy at three adjacent levels.
    pub fn add_var(&mut self, name: &str, role: VarRole) -> Result<VarId> {
        if role == VarRole::Auxiliary {
            return Err(Error::Invalid(
                "auxiliary variables are allocated implicitly".into(),
            ));
        }
        if self.by_name.contains_key(name) {
            return Err(Error::DuplicateVariable(name.to_string()));
        }
        let base = self.entries.len() as u32;
        let primed = base + 1;
        let shadow = base + 2;
        self.entries.push(VarEntry {
            name: name.to_string(),
            role,
            partner: Some(primed),
            primed: false,
            shadow: Some(shadow),
        });
        self.entries.push(VarEntry {
            name: format!("{name}'"),
            role,
            partner: Some(base),
            primed: true,
            shadow: None,
        });
        self.entries.push(VarEntry {
            name: format!("{name}~"),
            role: VarRole::Auxiliary,
            partner: None,
            primed: false,
            shadow: None,
        });
        self.by_name.insert(name.to_string(), base);
        self.by_name.insert(format!("{name}'"), primed);
        self.by_name.insert(format!("{name}~"), shadow);
        Ok(VarId(base))
    }

    pub fn lookup(&self, name: &str) -> Result<VarId> {
        self.by_name
            .get(name)
            .map(|&l| VarId(l))
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.by_name.contains_key(name)
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.entries[v.0 as usize].name
    }

    pub fn role(&self, v: VarId) -> VarRole {
        self.entries[v.0 as usize].role
    }

    pub fn is_primed(&self, v: VarId) -> bool {
        self.entries[v.0 as usize].primed
    }

    /// The primed partner of an unprimed variable, and vice versa.
    pub fn partner(&self, v: VarId) -> Option<VarId> {
        self.entries[v.0 as usize].partner.map(VarId)
    }

    /// The auxiliary shadow of an unprimed game variable.
    pub fn shadow(&self, v: VarId) -> Option<VarId> {
        self.entries[v.0 as usize].shadow.map(VarId)
    }

    pub fn num_levels(&self) -> usize {
        self.entries.len()
    }

    /// Unprimed game variables of the given roles, in declaration order.
    pub fn unprimed(&self, roles: &[VarRole]) -> Vec<VarId> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.primed && roles.contains(&e.role))
            .map(|(i, _)| VarId(i as u32))
            .collect()
    }

    /// Primed partners of [`Self::unprimed`] with the same roles and order.
    pub fn primed(&self, roles: &[VarRole]) -> Vec<VarId> {
        self.unprimed(roles)
            .into_iter()
            .filter_map(|v| self.partner(v))
            .collect()
    }
}

const FALSE_ID: u32 = 0;
const TRUE_ID: u32 = 1;
const TERMINAL_LEVEL: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Node {
    level: u32,
    lo: u32,
    hi: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Op {
    And,
    Or,
    Xor,
}

#[derive(Default)]
struct Store {
    nodes: Vec<Node>,
    unique: HashMap<(u32, u32, u32), u32>,
    apply_cache: HashMap<(Op, u32, u32), u32>,
    not_cache: HashMap<u32, u32>,
    ite_cache: HashMap<(u32, u32, u32), u32>,
}

impl Store {
    fn new() -> Self {
        let mut s = Store::default();
        s.nodes.push(Node { level: TERMINAL_LEVEL, lo: FALSE_ID, hi: FALSE_ID });
        s.nodes.push(Node { level: TERMINAL_LEVEL, lo: TRUE_ID, hi: TRUE_ID });
        s
    }

    fn mk(&mut self, level: u32, lo: u32, hi: u32) -> u32 {
        if lo == hi {
            return lo;
        }
        if let Some(&id) = self.unique.get(&(level, lo, hi)) {
            return id;
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(Node { level, lo, hi });
        self.unique.insert((level, lo, hi), id);
        id
    }

    fn apply(&mut self, op: Op, a: u32, b: u32) -> u32 {
        match op {
            Op::And => {
                if a == FALSE_ID || b == FALSE_ID {
                    return FALSE_ID;
                }
                if a == TRUE_ID {
                    return b;
                }
                if b == TRUE_ID || a == b {
                    return a;
                }
            }
            Op::Or => {
                if a == TRUE_ID || b == TRUE_ID {
                    return TRUE_ID;
                }
                if a == FALSE_ID {
                    return b;
                }
                if b == FALSE_ID || a == b {
                    return a;
                }
            }
            Op::Xor => {
                if a == b {
                    return FALSE_ID;
                }
                if a == FALSE_ID {
                    return b;
                }
                if b == FALSE_ID {
                    return a;
                }
                if a == TRUE_ID {
                    return self.not(b);
                }
                if b == TRUE_ID {
                    return self.not(a);
                }
            }
        }
        let key = if a <= b { (op, a, b) } else { (op, b, a) };
        if let Some(&r) = self.apply_cache.get(&key) {
            return r;
        }
        let (na, nb) = (self.nodes[a as usize], self.nodes[b as usize]);
        let level = na.level.min(nb.level);
        let (a_lo, a_hi) = if na.level == level { (na.lo, na.hi) } else { (a, a) };
        let (b_lo, b_hi) = if nb.level == level { (nb.lo, nb.hi) } else { (b, b) };
        let lo = self.apply(op, a_lo, b_lo);
        let hi = self.apply(op, a_hi, b_hi);
        let r = self.mk(level, lo, hi);
        self.apply_cache.insert(key, r);
        r
    }

    fn not(&mut self, a: u32) -> u32 {
        if a == FALSE_ID {
            return TRUE_ID;
        }
        if a == TRUE_ID {
            return FALSE_ID;
        }
        if let Some(&r) = self.not_cache.get(&a) {
            return r;
        }
        let n = self.nodes[a as usize];
        let lo = self.not(n.lo);
        let hi = self.not(n.hi);
        let r = self.mk(n.level, lo, hi);
        self.not_cache.insert(a, r);
        r
    }

    fn ite(&mut self, f: u32, g: u32, h: u32) -> u32 {
        if f == TRUE_ID {
            return g;
        }
        if f == FALSE_ID {
            return h;
        }
        if g == h {
            return g;
        }
        if g == TRUE_ID && h == FALSE_ID {
            return f;
        }
        if let Some(&r) = self.ite_cache.get(&(f, g, h)) {
            return r;
        }
        let (nf, ng, nh) = (
            self.nodes[f as usize],
            self.nodes[g as usize],
            self.nodes[h as usize],
        );
        let level = nf.level.min(ng.level).min(nh.level);
        let (f_lo, f_hi) = if nf.level == level { (nf.lo, nf.hi) } else { (f, f) };
        let (g_lo, g_hi) = if ng.level == level { (ng.lo, ng.hi) } else { (g, g) };
        let (h_lo, h_hi) = if nh.level == level { (nh.lo, nh.hi) } else { (h, h) };
        let lo = self.ite(f_lo, g_lo, h_lo);
        let hi = self.ite(f_hi, g_hi, h_hi);
        let r = self.mk(level, lo, hi);
        self.ite_cache.insert((f, g, h), r);
        r
    }

    /// Existential (`exi = true`) or universal projection of sorted `levels`.
    fn quantify(
        &mut self,
        f: u32,
        levels: &[u32],
        exi: bool,
        memo: &mut HashMap<u32, u32>,
    ) -> u32 {
        if f <= TRUE_ID {
            return f;
        }
        if let Some(&r) = memo.get(&f) {
            return r;
        }
        let n = self.nodes[f as usize];
        // Levels entirely above this node cannot appear below it.
        let lo = self.quantify(n.lo, levels, exi, memo);
        let hi = self.quantify(n.hi, levels, exi, memo);
        let r = if levels.binary_search(&n.level).is_ok() {
            let op = if exi { Op::Or } else { Op::And };
            self.apply(op, lo, hi)
        } else {
            self.mk(n.level, lo, hi)
        };
        memo.insert(f, r);
        r
    }

    /// Simultaneous variable-to-variable substitution. Correct for any
    /// injective level map, including order-breaking swaps, via ite.
    fn rename(&mut self, f: u32, map: &HashMap<u32, u32>, memo: &mut HashMap<u32, u32>) -> u32 {
        if f <= TRUE_ID {
            return f;
        }
        if let Some(&r) = memo.get(&f) {
            return r;
        }
        let n = self.nodes[f as usize];
        let lo = self.rename(n.lo, map, memo);
        let hi = self.rename(n.hi, map, memo);
        let target = map.get(&n.level).copied().unwrap_or(n.level);
        let var = self.mk(target, FALSE_ID, TRUE_ID);
        let r = self.ite(var, hi, lo);
        memo.insert(f, r);
        r
    }
}

static KERNEL_IDS: AtomicU64 = AtomicU64::new(1);

/// Handle to a node in one kernel's store. Equal handles denote equal
/// functions (canonicity); handles from different kernels never mix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dd {
    kernel: u64,
    node: u32,
}

/// A BDD manager: node store, caches and the symbolic-operation counter.
///
/// One kernel instance per worker; a kernel is not `Sync`.
pub struct Kernel {
    id: u64,
    reg: Rc<VarRegistry>,
    store: RefCell<Store>,
    ops: Cell<u64>,
}

impl Kernel {
    pub fn new(reg: VarRegistry) -> Self {
        Kernel {
            id: KERNEL_IDS.fetch_add(1, Ordering::Relaxed),
            reg: Rc::new(reg),
            store: RefCell::new(Store::new()),
            ops: Cell::new(0),
        }
    }

    pub fn registry(&self) -> &VarRegistry {
        &self.reg
    }

    /// Symbolic operations performed so far.
    pub fn ops(&self) -> u64 {
        self.ops.get()
    }

    pub fn reset_ops(&self) {
        self.ops.set(0);
    }

    fn bump(&self) {
        self.ops.set(self.ops.get() + 1);
    }

    fn wrap(&self, node: u32) -> Dd {
        Dd { kernel: self.id, node }
    }

    fn unwrap(&self, d: Dd) -> Result<u32> {
        if d.kernel != self.id {
            return Err(Error::KernelMismatch);
        }
        Ok(d.node)
    }

    pub fn mk_true(&self) -> Dd {
        self.wrap(TRUE_ID)
    }

    pub fn mk_false(&self) -> Dd {
        self.wrap(FALSE_ID)
    }

    pub fn is_true(&self, d: Dd) -> bool {
        d.kernel == self.id && d.node == TRUE_ID
    }

    pub fn is_false(&self, d: Dd) -> bool {
        d.kernel == self.id && d.node == FALSE_ID
    }

    /// The literal "variable is true". Accepts primed names (`v'`).
    pub fn mk_var(&self, name: &str) -> Result<Dd> {
        let v = self.reg.lookup(name)?;
        Ok(self.mk_var_id(v))
    }

    pub fn mk_var_id(&self, v: VarId) -> Dd {
        let node = self.store.borrow_mut().mk(v.0, FALSE_ID, TRUE_ID);
        self.wrap(node)
    }

    pub fn and(&self, a: Dd, b: Dd) -> Result<Dd> {
        let (a, b) = (self.unwrap(a)?, self.unwrap(b)?);
        self.bump();
        Ok(self.wrap(self.store.borrow_mut().apply(Op::And, a, b)))
    }

    pub fn or(&self, a: Dd, b: Dd) -> Result<Dd> {
        let (a, b) = (self.unwrap(a)?, self.unwrap(b)?);
        self.bump();
        Ok(self.wrap(self.store.borrow_mut().apply(Op::Or, a, b)))
    }

    pub fn implies(&self, a: Dd, b: Dd) -> Result<Dd> {
        let (a, b) = (self.unwrap(a)?, self.unwrap(b)?);
        self.bump();
        let mut s = self.store.borrow_mut();
        let na = s.not(a);
        Ok(self.wrap(s.apply(Op::Or, na, b)))
    }

    pub fn iff(&self, a: Dd, b: Dd) -> Result<Dd> {
        let (a, b) = (self.unwrap(a)?, self.unwrap(b)?);
        self.bump();
        let mut s = self.store.borrow_mut();
        let x = s.apply(Op::Xor, a, b);
        Ok(self.wrap(s.not(x)))
    }

    pub fn xor(&self, a: Dd, b: Dd) -> Result<Dd> {
        let (a, b) = (self.unwrap(a)?, self.unwrap(b)?);
        self.bump();
        Ok(self.wrap(self.store.borrow_mut().apply(Op::Xor, a, b)))
    }

    pub fn not(&self, a: Dd) -> Result<Dd> {
        let a = self.unwrap(a)?;
        self.bump();
        Ok(self.wrap(self.store.borrow_mut().not(a)))
    }

    pub fn exists(&self, vars: &[VarId], a: Dd) -> Result<Dd> {
        self.quantify(vars, a, true)
    }

    pub fn forall(&self, vars: &[VarId], a: Dd) -> Result<Dd> {
        self.quantify(vars, a, false)
    }

    fn quantify(&self, vars: &[VarId], a: Dd, exi: bool) -> Result<Dd> {
        let a = self.unwrap(a)?;
        for v in vars {
            if v.0 as usize >= self.reg.num_levels() {
                return Err(Error::UnknownVariable(format!("level {}", v.0)));
            }
        }
        self.bump();
        let mut levels: Vec<u32> = vars.iter().map(|v| v.0).collect();
        levels.sort_unstable();
        levels.dedup();
        let mut memo = HashMap::new();
        Ok(self.wrap(self.store.borrow_mut().quantify(a, &levels, exi, &mut memo)))
    }

    /// Substitutes variables per the given pairing, simultaneously.
    pub fn rename(&self, a: Dd, pairs: &[(VarId, VarId)]) -> Result<Dd> {
        let a = self.unwrap(a)?;
        let mut map = HashMap::new();
        let mut targets = HashMap::new();
        for &(from, to) in pairs {
            if from == to {
                continue;
            }
            if let Some(prev) = targets.insert(to, from) {
                if prev != from {
                    return Err(Error::RenameNotInjective(self.reg.name(to).to_string()));
                }
            }
            map.insert(from.0, to.0);
        }
        self.bump();
        let mut memo = HashMap::new();
        Ok(self.wrap(self.store.borrow_mut().rename(a, &map, &mut memo)))
    }

    /// Renames every unprimed game variable to its primed partner.
    pub fn prime(&self, a: Dd) -> Result<Dd> {
        let pairs = self.partner_pairs(false);
        self.rename(a, &pairs)
    }

    /// Renames every primed game variable back to its unprimed partner.
    pub fn unprime(&self, a: Dd) -> Result<Dd> {
        let pairs = self.partner_pairs(true);
        self.rename(a, &pairs)
    }

    /// Swaps unprimed and primed game variables (relation transposition).
    pub fn swap_primed(&self, a: Dd) -> Result<Dd> {
        let mut pairs = self.partner_pairs(false);
        pairs.extend(self.partner_pairs(true));
        self.rename(a, &pairs)
    }

    fn partner_pairs(&self, from_primed: bool) -> Vec<(VarId, VarId)> {
        (0..self.reg.num_levels() as u32)
            .map(VarId)
            .filter(|&v| self.reg.is_primed(v) == from_primed && self.reg.partner(v).is_some())
            .map(|v| (v, self.reg.partner(v).unwrap()))
            .collect()
    }

    /// Conjunction of the given literals, as one symbolic operation.
    pub fn cube(&self, literals: &[(VarId, bool)]) -> Result<Dd> {
        self.bump();
        let mut sorted: Vec<_> = literals.to_vec();
        sorted.sort_by_key(|&(v, _)| std::cmp::Reverse(v.0));
        let mut s = self.store.borrow_mut();
        let mut acc = TRUE_ID;
        for &(v, pos) in &sorted {
            if v.0 as usize >= self.reg.num_levels() {
                return Err(Error::UnknownVariable(format!("level {}", v.0)));
            }
            acc = if pos { s.mk(v.0, FALSE_ID, acc) } else { s.mk(v.0, acc, FALSE_ID) };
        }
        Ok(self.wrap(acc))
    }

    /// Evaluates the function under a total assignment (missing vars = false).
    pub fn eval(&self, a: Dd, assignment: &HashMap<VarId, bool>) -> Result<bool> {
        let mut node = self.unwrap(a)?;
        let s = self.store.borrow();
        while node > TRUE_ID {
            let n = s.nodes[node as usize];
            let bit = assignment.get(&VarId(n.level)).copied().unwrap_or(false);
            node = if bit { n.hi } else { n.lo };
        }
        Ok(node == TRUE_ID)
    }

    /// The set of levels the function depends on.
    pub fn support(&self, a: Dd) -> Result<Vec<VarId>> {
        let root = self.unwrap(a)?;
        let s = self.store.borrow();
        let mut seen = std::collections::HashSet::new();
        let mut levels = std::collections::BTreeSet::new();
        let mut stack = vec![root];
        while let Some(n) = stack.pop() {
            if n <= TRUE_ID || !seen.insert(n) {
                continue;
            }
            let node = s.nodes[n as usize];
            levels.insert(node.level);
            stack.push(node.lo);
            stack.push(node.hi);
        }
        Ok(levels.into_iter().map(VarId).collect())
    }

    /// Projects other variables away existentially, without counting an op.
    fn project_onto(&self, node: u32, over: &[VarId]) -> u32 {
        let mut extra: Vec<u32> = Vec::new();
        {
            let s = self.store.borrow();
            let mut seen = std::collections::HashSet::new();
            let mut stack = vec![node];
            while let Some(n) = stack.pop() {
                if n <= TRUE_ID || !seen.insert(n) {
                    continue;
                }
                let nd = s.nodes[n as usize];
                if !over.iter().any(|v| v.0 == nd.level) {
                    extra.push(nd.level);
                }
                stack.push(nd.lo);
                stack.push(nd.hi);
            }
        }
        if extra.is_empty() {
            return node;
        }
        extra.sort_unstable();
        extra.dedup();
        let mut memo = HashMap::new();
        self.store.borrow_mut().quantify(node, &extra, true, &mut memo)
    }

    /// Number of satisfying assignments over `over`; variables outside
    /// `over` are projected away existentially first.
    pub fn sat_count(&self, a: Dd, over: &[VarId]) -> Result<u128> {
        let node = self.unwrap(a)?;
        let g = self.project_onto(node, over);
        let mut levels: Vec<u32> = over.iter().map(|v| v.0).collect();
        levels.sort_unstable();
        levels.dedup();
        let s = self.store.borrow();
        let pos: HashMap<u32, usize> = levels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let k = levels.len();
        fn rec(
            s: &Store,
            node: u32,
            i: usize,
            k: usize,
            pos: &HashMap<u32, usize>,
            memo: &mut HashMap<(u32, usize), u128>,
        ) -> u128 {
            if node == FALSE_ID {
                return 0;
            }
            if node == TRUE_ID {
                return 1u128 << (k - i);
            }
            if let Some(&r) = memo.get(&(node, i)) {
                return r;
            }
            let n = s.nodes[node as usize];
            let j = pos[&n.level];
            let below = rec(s, n.lo, j + 1, k, pos, memo) + rec(s, n.hi, j + 1, k, pos, memo);
            let r = below << (j - i);
            memo.insert((node, i), r);
            r
        }
        let mut memo = HashMap::new();
        Ok(rec(&s, g, 0, k, &pos, &mut memo))
    }

    /// Lexicographically smallest satisfying assignment over `over`
    /// (false < true, earlier-declared variables more significant).
    pub fn pick_one(&self, a: Dd, over: &[VarId]) -> Result<Option<HashMap<VarId, bool>>> {
        let node = self.unwrap(a)?;
        let g = self.project_onto(node, over);
        if g == FALSE_ID {
            return Ok(None);
        }
        let s = self.store.borrow();
        let mut out: HashMap<VarId, bool> = over.iter().map(|&v| (v, false)).collect();
        let mut n = g;
        while n > TRUE_ID {
            let nd = s.nodes[n as usize];
            if nd.lo != FALSE_ID {
                out.insert(VarId(nd.level), false);
                n = nd.lo;
            } else {
                out.insert(VarId(nd.level), true);
                n = nd.hi;
            }
        }
        Ok(Some(out))
    }

    /// All satisfying assignments over `over`, in lexicographic order.
    pub fn enumerate(
        &self,
        a: Dd,
        over: &[VarId],
        limit: usize,
    ) -> Result<Vec<HashMap<VarId, bool>>> {
        let node = self.unwrap(a)?;
        let g = self.project_onto(node, over);
        let mut levels: Vec<u32> = over.iter().map(|v| v.0).collect();
        levels.sort_unstable();
        levels.dedup();
        let s = self.store.borrow();
        let mut out = Vec::new();
        let mut partial: Vec<(u32, bool)> = Vec::new();
        fn rec(
            s: &Store,
            node: u32,
            levels: &[u32],
            i: usize,
            partial: &mut Vec<(u32, bool)>,
            out: &mut Vec<HashMap<VarId, bool>>,
            limit: usize,
        ) -> Result<()> {
            if node == FALSE_ID {
                return Ok(());
            }
            if i == levels.len() {
                if out.len() >= limit {
                    return Err(Error::EnumerationLimit(limit));
                }
                out.push(partial.iter().map(|&(l, b)| (VarId(l), b)).collect());
                return Ok(());
            }
            let level = levels[i];
            let n = if node == TRUE_ID { None } else { Some(s.nodes[node as usize]) };
            let (lo, hi) = match n {
                Some(nd) if nd.level == level => (nd.lo, nd.hi),
                _ => (node, node),
            };
            partial.push((level, false));
            rec(s, lo, levels, i + 1, partial, out, limit)?;
            partial.pop();
            partial.push((level, true));
            rec(s, hi, levels, i + 1, partial, out, limit)?;
            partial.pop();
            Ok(())
        }
        rec(&s, g, &levels, 0, &mut partial, &mut out, limit)?;
        Ok(out)
    }

    /// Graphviz-DOT rendering: solid edges for then, dashed for else.
    pub fn to_dot(&self, a: Dd, name: &str) -> Result<String> {
        let root = self.unwrap(a)?;
        let s = self.store.borrow();
        let mut text = String::new();
        writeln!(text, "digraph \"{name}\" {{").unwrap();
        writeln!(text, "  n0 [label=\"0\", shape=box];").unwrap();
        writeln!(text, "  n1 [label=\"1\", shape=box];").unwrap();
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![root];
        while let Some(n) = stack.pop() {
            if n <= TRUE_ID || !seen.insert(n) {
                continue;
            }
            let nd = s.nodes[n as usize];
            writeln!(
                text,
                "  n{} [label=\"{}\"];",
                n,
                self.reg.name(VarId(nd.level))
            )
            .unwrap();
            writeln!(text, "  n{} -> n{};", n, nd.hi).unwrap();
            writeln!(text, "  n{} -> n{} [style=dashed];", n, nd.lo).unwrap();
            stack.push(nd.lo);
            stack.push(nd.hi);
        }
        writeln!(text, "  root -> n{root}; root [shape=none, label=\"{name}\"];").unwrap();
        writeln!(text, "}}").unwrap();
        Ok(text)
    }

    pub fn node_count(&self) -> usize {
        self.store.borrow().nodes.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel(names: &[&str]) -> Kernel {
        let mut reg = VarRegistry::new();
        for n in names {
            reg.add_var(n, VarRole::Input).unwrap();
        }
        Kernel::new(reg)
    }

    #[test]
    fn literal_evaluation() {
        let k = kernel(&["t0"]);
        let v = k.mk_var("t0").unwrap();
        let t0 = k.registry().lookup("t0").unwrap();
        assert!(k.eval(v, &HashMap::from([(t0, true)])).unwrap());
        assert!(!k.eval(v, &HashMap::new()).unwrap());
        assert!(matches!(k.mk_var("zz"), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn boolean_identities() {
        let k = kernel(&["x"]);
        let x = k.mk_var("x").unwrap();
        assert_eq!(k.and(k.mk_true(), x).unwrap(), x);
        let nnx = k.not(k.not(x).unwrap()).unwrap();
        assert_eq!(nnx, x);
        let taut = k.or(x, k.not(x).unwrap()).unwrap();
        assert!(k.is_true(taut));
    }

    #[test]
    fn quantification() {
        let k = kernel(&["i", "o"]);
        let i = k.mk_var("i").unwrap();
        let o = k.mk_var("o").unwrap();
        let ov = k.registry().lookup("o").unwrap();
        // exists o. (i∧o)∨(i∧¬o) = i
        let f = k
            .or(k.and(i, o).unwrap(), k.and(i, k.not(o).unwrap()).unwrap())
            .unwrap();
        assert_eq!(k.exists(&[ov], f).unwrap(), i);
        // forall o. i∨o = i  (checked elsewhere against a truth table too)
        let g = k.or(i, o).unwrap();
        assert_eq!(k.forall(&[ov], g).unwrap(), i);
        // empty quantification is identity
        assert_eq!(k.exists(&[], f).unwrap(), f);
    }

    #[test]
    fn rename_round_trip_and_swap() {
        let k = kernel(&["v", "w"]);
        let v = k.mk_var("v").unwrap();
        let vp = k.mk_var("v'").unwrap();
        assert_eq!(k.prime(v).unwrap(), vp);
        assert_eq!(k.unprime(k.prime(v).unwrap()).unwrap(), v);
        // rename(v∧w', {v↔w}) = w∧v'
        let wp = k.mk_var("w'").unwrap();
        let w = k.mk_var("w").unwrap();
        let f = k.and(v, wp).unwrap();
        let vid = k.registry().lookup("v").unwrap();
        let wid = k.registry().lookup("w").unwrap();
        let vpid = k.registry().partner(vid).unwrap();
        let wpid = k.registry().partner(wid).unwrap();
        // swapping v with w swaps the primed partners along with them
        let r = k
            .rename(f, &[(vid, wid), (wid, vid), (vpid, wpid), (wpid, vpid)])
            .unwrap();
        assert_eq!(r, k.and(w, vp).unwrap());
    }

    #[test]
    fn counting_and_witnesses() {
        let k = kernel(&["a", "b"]);
        let a = k.mk_var("a").unwrap();
        let b = k.mk_var("b").unwrap();
        let av = k.registry().lookup("a").unwrap();
        let bv = k.registry().lookup("b").unwrap();
        assert_eq!(k.sat_count(k.mk_true(), &[av, bv]).unwrap(), 4);
        assert_eq!(k.sat_count(k.mk_false(), &[av, bv]).unwrap(), 0);
        let f = k.and(a, k.not(b).unwrap()).unwrap();
        let w = k.pick_one(f, &[av, bv]).unwrap().unwrap();
        assert_eq!(w[&av], true);
        assert_eq!(w[&bv], false);
        assert_eq!(k.enumerate(f, &[av, bv], 10).unwrap().len(), 1);
        assert!(matches!(
            k.enumerate(k.mk_true(), &[av, bv], 2),
            Err(Error::EnumerationLimit(2))
        ));
    }

    #[test]
    fn op_counter_counts_kernel_calls() {
        let k = kernel(&["a", "b"]);
        let a = k.mk_var("a").unwrap();
        let b = k.mk_var("b").unwrap();
        k.reset_ops();
        let f = k.and(a, b).unwrap();
        let _ = k.or(f, a).unwrap();
        let _ = k.not(f).unwrap();
        assert_eq!(k.ops(), 3);
        let _ = k.eval(f, &HashMap::new()).unwrap();
        let av = k.registry().lookup("a").unwrap();
        let _ = k.sat_count(f, &[av]).unwrap();
        assert_eq!(k.ops(), 3, "queries are not symbolic operations");
    }

    #[test]
    fn kernel_mismatch_detected() {
        let k1 = kernel(&["x"]);
        let k2 = kernel(&["x"]);
        let a = k1.mk_var("x").unwrap();
        let b = k2.mk_var("x").unwrap();
        assert!(matches!(k1.and(a, b), Err(Error::KernelMismatch)));
    }

    #[test]
    fn registry_interleaves_primed_partners() {
        let mut reg = VarRegistry::new();
        let v0 = reg.add_var("v0", VarRole::Input).unwrap();
        let v1 = reg.add_var("v1", VarRole::Output).unwrap();
        assert_eq!(reg.partner(v0), Some(VarId(v0.0 + 1)));
        assert_eq!(reg.partner(v1), Some(VarId(v1.0 + 1)));
        assert!(v0.0 < v1.0);
        assert!(reg.add_var("v0", VarRole::Input).is_err());
    }
}
