//! Reduced ordered binary decision diagrams.
//!
//! Nodes live in a single hash-consed store owned by a [`BddManager`], so two
//! handles are equal exactly when they denote the same function under the
//! manager's variable order. There are no complement edges. Results of the
//! recursive operations are memoized in a direct-mapped (lossy) cache.
//!
//! Handles are plain indices. They stay valid until a garbage collection that
//! does not see them as roots; see [`BddManager::collect`].

mod dump;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

/// Environment variable that caps the number of live nodes per manager.
pub const NODE_LIMIT_ENV: &str = "BESYNTH_NODE_LIMIT";

/// Handle to a node of a [`BddManager`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bdd(u32);

impl Bdd {
    pub const FALSE: Bdd = Bdd(0);
    pub const TRUE: Bdd = Bdd(1);

    pub fn constant(value: bool) -> Bdd {
        if value {
            Bdd::TRUE
        } else {
            Bdd::FALSE
        }
    }

    pub fn is_const(self) -> bool {
        self.0 < 2
    }

    pub fn is_true(self) -> bool {
        self == Bdd::TRUE
    }

    pub fn is_false(self) -> bool {
        self == Bdd::FALSE
    }

    /// Raw node index, useful as a map key.
    pub fn id(self) -> u32 {
        self.0
    }
}

/// A declared variable. The id is stable; its level may move when
/// variables are inserted above it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    And,
    Or,
    Xor,
    Implies,
    Iff,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Node {
    var: u32,
    lo: u32,
    hi: u32,
}

const TERMINAL: u32 = u32::MAX;
const FREED: u32 = u32::MAX - 1;
const NO_SUBST: u32 = u32::MAX;

const TAG_AND: u32 = 1;
const TAG_OR: u32 = 2;
const TAG_XOR: u32 = 3;
const TAG_NOT: u32 = 4;
const TAG_ITE: u32 = 5;
const TAG_EXISTS: u32 = 6;
const TAG_FORALL: u32 = 7;

#[derive(Clone, Copy, Default)]
struct CacheEntry {
    tag: u32,
    a: u32,
    b: u32,
    c: u32,
    res: u32,
}

const MIN_CACHE: usize = 1 << 14;
const MAX_CACHE: usize = 1 << 22;
const DEFAULT_GC_THRESHOLD: usize = 2_000_000;

/// Owner of a node store, a variable order and the operation cache.
///
/// A manager is single-threaded; build one per synthesis run.
pub struct BddManager {
    nodes: Vec<Node>,
    unique: FxHashMap<Node, u32>,
    free: Vec<u32>,
    names: Vec<String>,
    level_of: Vec<u32>,
    var_at: Vec<u32>,
    cache: Vec<CacheEntry>,
    cache_enabled: bool,
    pins: FxHashMap<u32, u32>,
    gc_threshold: usize,
    gc_runs: usize,
    node_limit: Option<usize>,
}

impl Default for BddManager {
    fn default() -> Self {
        Self::new()
    }
}

impl std::fmt::Debug for BddManager {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BddManager")
            .field("vars", &self.names.len())
            .field("live_nodes", &self.live_nodes())
            .finish()
    }
}

impl BddManager {
    /// Creates an empty manager. The node limit is read from
    /// `BESYNTH_NODE_LIMIT` when that variable holds a number.
    pub fn new() -> Self {
        let terminal = Node { var: TERMINAL, lo: 0, hi: 0 };
        let node_limit = std::env::var(NODE_LIMIT_ENV).ok().and_then(|s| s.trim().parse().ok());
        BddManager {
            nodes: vec![terminal, Node { hi: 1, lo: 1, ..terminal }],
            unique: FxHashMap::default(),
            free: Vec::new(),
            names: Vec::new(),
            level_of: Vec::new(),
            var_at: Vec::new(),
            cache: vec![CacheEntry::default(); MIN_CACHE],
            cache_enabled: true,
            pins: FxHashMap::default(),
            gc_threshold: DEFAULT_GC_THRESHOLD,
            gc_runs: 0,
            node_limit,
        }
    }

    /// Turns the operation cache on or off. Disabling it is only sensible
    /// for testing; many operations become exponential without it.
    pub fn set_cache_enabled(&mut self, enabled: bool) {
        self.cache_enabled = enabled;
        self.clear_cache();
    }

    pub fn set_node_limit(&mut self, limit: Option<usize>) {
        self.node_limit = limit;
    }

    pub fn node_limit(&self) -> Option<usize> {
        self.node_limit
    }

    pub fn set_gc_threshold(&mut self, threshold: usize) {
        self.gc_threshold = threshold;
    }

    /// Fails with a resource-limit error when more live nodes exist than
    /// the configured cap. Called at stage boundaries by the pipelines.
    pub fn check_limit(&self, stage: &str) -> Result<()> {
        match self.node_limit {
            Some(limit) if self.live_nodes() > limit => Err(Error::ResourceLimit(format!(
                "{stage}: {} BDD nodes exceed the limit of {limit}",
                self.live_nodes()
            ))),
            _ => Ok(()),
        }
    }

    // ---- variables ----

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    /// Declares a variable below all existing ones.
    pub fn new_var(&mut self, name: impl Into<String>) -> Var {
        let level = self.var_at.len();
        self.new_var_at_level(name, level)
    }

    /// Declares a variable at `level`, pushing the variables at that level
    /// and below one level down. Existing nodes stay valid because the
    /// relative order of the old variables does not change.
    pub fn new_var_at_level(&mut self, name: impl Into<String>, level: usize) -> Var {
        let id = self.names.len() as u32;
        let level = level.min(self.var_at.len());
        self.names.push(name.into());
        self.var_at.insert(level, id);
        self.level_of.push(0);
        for (l, &v) in self.var_at.iter().enumerate().skip(level) {
            self.level_of[v as usize] = l as u32;
        }
        Var(id)
    }

    pub fn var_name(&self, v: Var) -> &str {
        &self.names[v.index()]
    }

    pub fn level_of_var(&self, v: Var) -> usize {
        self.level_of[v.index()] as usize
    }

    pub fn var_at_level(&self, level: usize) -> Var {
        Var(self.var_at[level])
    }

    /// Variables from the top level down.
    pub fn order(&self) -> Vec<Var> {
        self.var_at.iter().map(|&v| Var(v)).collect()
    }

    pub fn var(&mut self, v: Var) -> Bdd {
        Bdd(self.mk(v.0, 0, 1))
    }

    pub fn nvar(&mut self, v: Var) -> Bdd {
        Bdd(self.mk(v.0, 1, 0))
    }

    pub fn literal(&mut self, v: Var, positive: bool) -> Bdd {
        if positive {
            self.var(v)
        } else {
            self.nvar(v)
        }
    }

    /// Conjunction of the positive literals of `vars`.
    pub fn cube(&mut self, vars: &[Var]) -> Bdd {
        let mut sorted: Vec<Var> = vars.to_vec();
        sorted.sort_by_key(|v| std::cmp::Reverse(self.level_of[v.index()]));
        sorted.dedup();
        let mut acc = 1;
        for v in sorted {
            acc = self.mk(v.0, 0, acc);
        }
        Bdd(acc)
    }

    /// Conjunction of literals, one per `(var, value)` pair.
    pub fn minterm(&mut self, assignment: &[(Var, bool)]) -> Bdd {
        let mut acc = Bdd::TRUE;
        for &(v, val) in assignment {
            let lit = self.literal(v, val);
            acc = self.and(acc, lit);
        }
        acc
    }

    // ---- node access ----

    fn level(&self, f: u32) -> u32 {
        let var = self.nodes[f as usize].var;
        if var == TERMINAL {
            u32::MAX
        } else {
            self.level_of[var as usize]
        }
    }

    /// Top variable and cofactors of a non-constant node.
    pub fn node(&self, f: Bdd) -> Option<(Var, Bdd, Bdd)> {
        if f.is_const() {
            return None;
        }
        let n = self.nodes[f.0 as usize];
        Some((Var(n.var), Bdd(n.lo), Bdd(n.hi)))
    }

    /// Level of the top variable, or `num_vars()` for constants.
    pub fn top_level(&self, f: Bdd) -> usize {
        if f.is_const() {
            self.num_vars()
        } else {
            self.level(f.0) as usize
        }
    }

    pub fn live_nodes(&self) -> usize {
        self.nodes.len() - self.free.len()
    }

    pub fn gc_runs(&self) -> usize {
        self.gc_runs
    }

    fn mk(&mut self, var: u32, lo: u32, hi: u32) -> u32 {
        if lo == hi {
            return lo;
        }
        let key = Node { var, lo, hi };
        if let Some(&id) = self.unique.get(&key) {
            return id;
        }
        let id = match self.free.pop() {
            Some(slot) => {
                self.nodes[slot as usize] = key;
                slot
            }
            None => {
                self.nodes.push(key);
                (self.nodes.len() - 1) as u32
            }
        };
        self.unique.insert(key, id);
        if self.nodes.len() > 4 * self.cache.len() && self.cache.len() < MAX_CACHE {
            let size = (self.cache.len() * 4).min(MAX_CACHE);
            self.cache = vec![CacheEntry::default(); size];
        }
        id
    }

    fn cofactors(&self, f: u32, level: u32) -> (u32, u32) {
        let n = self.nodes[f as usize];
        if n.var != TERMINAL && self.level_of[n.var as usize] == level {
            (n.lo, n.hi)
        } else {
            (f, f)
        }
    }

    // ---- cache ----

    fn slot(&self, tag: u32, a: u32, b: u32, c: u32) -> usize {
        let h = (a as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
            ^ (b as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F)
            ^ ((c as u64) | ((tag as u64) << 32)).wrapping_mul(0x1656_67B1_9E37_79F9);
        ((h ^ (h >> 29)) as usize) & (self.cache.len() - 1)
    }

    fn lookup(&self, tag: u32, a: u32, b: u32, c: u32) -> Option<u32> {
        if !self.cache_enabled {
            return None;
        }
        let e = self.cache[self.slot(tag, a, b, c)];
        (e.tag == tag && e.a == a && e.b == b && e.c == c).then_some(e.res)
    }

    fn store(&mut self, tag: u32, a: u32, b: u32, c: u32, res: u32) {
        if self.cache_enabled {
            let i = self.slot(tag, a, b, c);
            self.cache[i] = CacheEntry { tag, a, b, c, res };
        }
    }

    fn clear_cache(&mut self) {
        self.cache.iter_mut().for_each(|e| *e = CacheEntry::default());
    }

    // ---- boolean operations ----

    pub fn not(&mut self, f: Bdd) -> Bdd {
        Bdd(self.not_rec(f.0))
    }

    fn not_rec(&mut self, f: u32) -> u32 {
        if f < 2 {
            return 1 - f;
        }
        if let Some(r) = self.lookup(TAG_NOT, f, 0, 0) {
            return r;
        }
        let n = self.nodes[f as usize];
        let lo = self.not_rec(n.lo);
        let hi = self.not_rec(n.hi);
        let r = self.mk(n.var, lo, hi);
        self.store(TAG_NOT, f, 0, 0, r);
        r
    }

    pub fn and(&mut self, f: Bdd, g: Bdd) -> Bdd {
        Bdd(self.bin(TAG_AND, f.0, g.0))
    }

    pub fn or(&mut self, f: Bdd, g: Bdd) -> Bdd {
        Bdd(self.bin(TAG_OR, f.0, g.0))
    }

    pub fn xor(&mut self, f: Bdd, g: Bdd) -> Bdd {
        Bdd(self.bin(TAG_XOR, f.0, g.0))
    }

    pub fn implies(&mut self, f: Bdd, g: Bdd) -> Bdd {
        let nf = self.not(f);
        self.or(nf, g)
    }

    pub fn iff(&mut self, f: Bdd, g: Bdd) -> Bdd {
        let x = self.xor(f, g);
        self.not(x)
    }

    pub fn apply(&mut self, op: BinOp, f: Bdd, g: Bdd) -> Bdd {
        match op {
            BinOp::And => self.and(f, g),
            BinOp::Or => self.or(f, g),
            BinOp::Xor => self.xor(f, g),
            BinOp::Implies => self.implies(f, g),
            BinOp::Iff => self.iff(f, g),
        }
    }

    pub fn and_all(&mut self, items: impl IntoIterator<Item = Bdd>) -> Bdd {
        let mut acc = Bdd::TRUE;
        for f in items {
            acc = self.and(acc, f);
        }
        acc
    }

    pub fn or_all(&mut self, items: impl IntoIterator<Item = Bdd>) -> Bdd {
        let mut acc = Bdd::FALSE;
        for f in items {
            acc = self.or(acc, f);
        }
        acc
    }

    fn bin(&mut self, tag: u32, f: u32, g: u32) -> u32 {
        match tag {
            TAG_AND => {
                if f == 0 || g == 0 {
                    return 0;
                }
                if f == 1 || f == g {
                    return g;
                }
                if g == 1 {
                    return f;
                }
            }
            TAG_OR => {
                if f == 1 || g == 1 {
                    return 1;
                }
                if f == 0 || f == g {
                    return g;
                }
                if g == 0 {
                    return f;
                }
            }
            _ => {
                if f == g {
                    return 0;
                }
                if f == 0 {
                    return g;
                }
                if g == 0 {
                    return f;
                }
                if f == 1 {
                    return self.not_rec(g);
                }
                if g == 1 {
                    return self.not_rec(f);
                }
            }
        }
        let (f, g) = if f < g { (f, g) } else { (g, f) };
        if let Some(r) = self.lookup(tag, f, g, 0) {
            return r;
        }
        let level = self.level(f).min(self.level(g));
        let (f0, f1) = self.cofactors(f, level);
        let (g0, g1) = self.cofactors(g, level);
        let lo = self.bin(tag, f0, g0);
        let hi = self.bin(tag, f1, g1);
        let r = self.mk(self.var_at[level as usize], lo, hi);
        self.store(tag, f, g, 0, r);
        r
    }

    /// The function `var ? hi : lo`. Builds the node directly when `var`
    /// lies above both branches, which is the common case when tables are
    /// assembled bottom-up in level order.
    pub fn make_node(&mut self, var: Var, lo: Bdd, hi: Bdd) -> Bdd {
        let level = self.level_of_var(var);
        if level < self.top_level(lo) && level < self.top_level(hi) {
            Bdd(self.mk(var.0, lo.0, hi.0))
        } else {
            let v = self.var(var);
            self.ite(v, hi, lo)
        }
    }

    /// If-then-else: `(c ∧ t) ∨ (¬c ∧ e)`.
    pub fn ite(&mut self, c: Bdd, t: Bdd, e: Bdd) -> Bdd {
        Bdd(self.ite_rec(c.0, t.0, e.0))
    }

    fn ite_rec(&mut self, f: u32, mut g: u32, mut h: u32) -> u32 {
        if f == 1 {
            return g;
        }
        if f == 0 {
            return h;
        }
        if f == g {
            g = 1;
        }
        if f == h {
            h = 0;
        }
        if g == h {
            return g;
        }
        match (g, h) {
            (1, 0) => return f,
            (0, 1) => return self.not_rec(f),
            (1, _) => return self.bin(TAG_OR, f, h),
            (_, 0) => return self.bin(TAG_AND, f, g),
            _ => {}
        }
        if let Some(r) = self.lookup(TAG_ITE, f, g, h) {
            return r;
        }
        let level = self.level(f).min(self.level(g)).min(self.level(h));
        let (f0, f1) = self.cofactors(f, level);
        let (g0, g1) = self.cofactors(g, level);
        let (h0, h1) = self.cofactors(h, level);
        let lo = self.ite_rec(f0, g0, h0);
        let hi = self.ite_rec(f1, g1, h1);
        let r = self.mk(self.var_at[level as usize], lo, hi);
        self.store(TAG_ITE, f, g, h, r);
        r
    }

    // ---- quantification ----

    pub fn exists(&mut self, f: Bdd, vars: &[Var]) -> Bdd {
        let cube = self.cube(vars);
        self.exists_cube(f, cube)
    }

    pub fn forall(&mut self, f: Bdd, vars: &[Var]) -> Bdd {
        let cube = self.cube(vars);
        self.forall_cube(f, cube)
    }

    /// Existential quantification over the variables of a positive cube
    /// built with [`BddManager::cube`].
    pub fn exists_cube(&mut self, f: Bdd, cube: Bdd) -> Bdd {
        Bdd(self.quant(TAG_EXISTS, f.0, cube.0))
    }

    pub fn forall_cube(&mut self, f: Bdd, cube: Bdd) -> Bdd {
        Bdd(self.quant(TAG_FORALL, f.0, cube.0))
    }

    fn quant(&mut self, tag: u32, f: u32, mut cube: u32) -> u32 {
        if f < 2 {
            return f;
        }
        let level = self.level(f);
        while cube >= 2 && self.level(cube) < level {
            cube = self.nodes[cube as usize].hi;
        }
        if cube < 2 {
            return f;
        }
        if let Some(r) = self.lookup(tag, f, cube, 0) {
            return r;
        }
        let n = self.nodes[f as usize];
        let r = if self.level(cube) == level {
            let rest = self.nodes[cube as usize].hi;
            let lo = self.quant(tag, n.lo, rest);
            let short = if tag == TAG_EXISTS { 1 } else { 0 };
            if lo == short {
                short
            } else {
                let hi = self.quant(tag, n.hi, rest);
                self.bin(if tag == TAG_EXISTS { TAG_OR } else { TAG_AND }, lo, hi)
            }
        } else {
            let lo = self.quant(tag, n.lo, cube);
            let hi = self.quant(tag, n.hi, cube);
            self.mk(n.var, lo, hi)
        };
        self.store(tag, f, cube, 0, r);
        r
    }

    // ---- substitution ----

    /// Shannon cofactor of `f` with `v` fixed to `value`.
    pub fn cofactor(&mut self, f: Bdd, v: Var, value: bool) -> Bdd {
        let c = Bdd::constant(value);
        self.vector_compose(f, &[(v, c)])
    }

    /// Replaces `v` by `g` in `f`.
    pub fn compose(&mut self, f: Bdd, v: Var, g: Bdd) -> Bdd {
        self.vector_compose(f, &[(v, g)])
    }

    /// Simultaneous substitution: every replacement is evaluated against
    /// the original `f`, so swapping two variables works as expected.
    pub fn vector_compose(&mut self, f: Bdd, subst: &[(Var, Bdd)]) -> Bdd {
        let mut table = vec![NO_SUBST; self.num_vars()];
        let mut deepest = 0;
        for &(v, g) in subst {
            table[v.index()] = g.0;
            deepest = deepest.max(self.level_of[v.index()]);
        }
        if subst.is_empty() {
            return f;
        }
        let mut memo = FxHashMap::default();
        Bdd(self.compose_rec(f.0, &table, deepest, &mut memo))
    }

    fn compose_rec(&mut self, f: u32, table: &[u32], deepest: u32, memo: &mut FxHashMap<u32, u32>) -> u32 {
        if f < 2 || self.level(f) > deepest {
            return f;
        }
        if let Some(&r) = memo.get(&f) {
            return r;
        }
        let n = self.nodes[f as usize];
        let lo = self.compose_rec(n.lo, table, deepest, memo);
        let hi = self.compose_rec(n.hi, table, deepest, memo);
        let g = table[n.var as usize];
        let level = self.level_of[n.var as usize];
        let r = if g == NO_SUBST && level < self.level(lo) && level < self.level(hi) {
            self.mk(n.var, lo, hi)
        } else {
            let g = if g == NO_SUBST { self.mk(n.var, 0, 1) } else { g };
            self.ite_rec(g, hi, lo)
        };
        memo.insert(f, r);
        r
    }

    // ---- inspection ----

    /// Evaluates `f` under the assignment `value`.
    pub fn eval(&self, f: Bdd, value: impl Fn(Var) -> bool) -> bool {
        let mut cur = f.0;
        while cur >= 2 {
            let n = self.nodes[cur as usize];
            cur = if value(Var(n.var)) { n.hi } else { n.lo };
        }
        cur == 1
    }

    /// Variables `f` depends on, from the top level down.
    pub fn support(&self, f: Bdd) -> Vec<Var> {
        let mut seen = vec![false; self.num_vars()];
        self.walk(f, |n| seen[n.var as usize] = true);
        let mut out: Vec<Var> = (0..self.num_vars() as u32).map(Var).filter(|v| seen[v.index()]).collect();
        out.sort_by_key(|v| self.level_of[v.index()]);
        out
    }

    /// Number of internal nodes reachable from `f`.
    pub fn node_count(&self, f: Bdd) -> usize {
        let mut count = 0;
        self.walk(f, |_| count += 1);
        count
    }

    fn walk(&self, f: Bdd, mut visit: impl FnMut(Node)) {
        let mut seen = rustc_hash::FxHashSet::default();
        let mut stack = vec![f.0];
        while let Some(cur) = stack.pop() {
            if cur < 2 || !seen.insert(cur) {
                continue;
            }
            let n = self.nodes[cur as usize];
            visit(n);
            stack.push(n.lo);
            stack.push(n.hi);
        }
    }

    /// Number of satisfying assignments over `vars`, which must include the
    /// support of `f`.
    pub fn sat_count(&self, f: Bdd, vars: &[Var]) -> f64 {
        let total = self.num_vars() as u32;
        let mut memo: FxHashMap<u32, f64> = FxHashMap::default();
        fn rec(m: &BddManager, f: u32, total: u32, memo: &mut FxHashMap<u32, f64>) -> f64 {
            if f < 2 {
                return f as f64;
            }
            if let Some(&c) = memo.get(&f) {
                return c;
            }
            let n = m.nodes[f as usize];
            let level = m.level(f);
            let below = |g: u32| if g < 2 { total } else { m.level(g) };
            let lo = rec(m, n.lo, total, memo) * 2f64.powi((below(n.lo) - level - 1) as i32);
            let hi = rec(m, n.hi, total, memo) * 2f64.powi((below(n.hi) - level - 1) as i32);
            memo.insert(f, lo + hi);
            lo + hi
        }
        let top = if f.is_const() { total } else { self.level(f.0) };
        let all = rec(self, f.0, total, &mut memo) * 2f64.powi(top as i32);
        let mut distinct = vars.to_vec();
        distinct.sort();
        distinct.dedup();
        all / 2f64.powi((total as usize - distinct.len()) as i32)
    }

    /// One assignment to `outputs` that can be extended to a model of `f`.
    /// The path taken prefers the low branch, so outputs are false
    /// whenever that is possible along the chosen path.
    pub fn pick_witness(&self, f: Bdd, outputs: &[Var]) -> Result<Vec<(Var, bool)>> {
        if f.is_false() {
            return Err(Error::Unsatisfiable("cannot pick a witness of the false function".into()));
        }
        let mut chosen = vec![None; self.num_vars()];
        let mut cur = f.0;
        while cur >= 2 {
            let n = self.nodes[cur as usize];
            let take_hi = n.lo == 0;
            chosen[n.var as usize] = Some(take_hi);
            cur = if take_hi { n.hi } else { n.lo };
        }
        Ok(outputs.iter().map(|&v| (v, chosen[v.index()].unwrap_or(false))).collect())
    }

    // ---- garbage collection ----

    /// Protects `f` from collection until a matching [`BddManager::unpin`].
    pub fn pin(&mut self, f: Bdd) {
        if !f.is_const() {
            *self.pins.entry(f.0).or_insert(0) += 1;
        }
    }

    pub fn unpin(&mut self, f: Bdd) {
        if let Some(c) = self.pins.get_mut(&f.0) {
            *c -= 1;
            if *c == 0 {
                self.pins.remove(&f.0);
            }
        }
    }

    /// Frees every node not reachable from a pinned handle or from `roots`.
    /// Returns the number of freed nodes. Any other handle held by the
    /// caller is invalid afterwards.
    pub fn collect(&mut self, roots: &[Bdd]) -> usize {
        let mut marked = vec![false; self.nodes.len()];
        marked[0] = true;
        marked[1] = true;
        let mut stack: Vec<u32> = roots.iter().map(|b| b.0).chain(self.pins.keys().copied()).collect();
        while let Some(cur) = stack.pop() {
            if marked[cur as usize] {
                continue;
            }
            marked[cur as usize] = true;
            let n = self.nodes[cur as usize];
            stack.push(n.lo);
            stack.push(n.hi);
        }
        let mut freed = 0;
        for (i, node) in self.nodes.iter_mut().enumerate().skip(2) {
            if !marked[i] && node.var != FREED {
                self.unique.remove(node);
                node.var = FREED;
                self.free.push(i as u32);
                freed += 1;
            }
        }
        self.clear_cache();
        self.gc_runs += 1;
        freed
    }

    /// Collects only when the live node count has passed the threshold,
    /// then raises the threshold so collections stay amortized.
    pub fn maybe_collect(&mut self, roots: &[Bdd]) -> bool {
        if self.live_nodes() <= self.gc_threshold {
            return false;
        }
        self.collect(roots);
        self.gc_threshold = self.gc_threshold.max(2 * self.live_nodes());
        true
    }
}

#[cfg(test)]
mod tests;
