//! Log-encoded symbolic transition systems.
//!
//! A [`SymbolicSpace`] owns the BDD manager together with one variable per
//! proposition. Every encoded automaton allocates its own state variables
//! `Z` in that space, above all proposition variables, so the order is
//! `Z`, then `X`, then `Y`.
//!
//! Unused codewords (when `|S|` is not a power of two) have all-false
//! successors and lie outside the automaton's `domain` predicate; the game
//! solvers never put them into a winning region.

use std::fmt::Write;

use crate::bdd::{Bdd, BddManager, Var};
use crate::dfa::ExplicitDfa;
use crate::error::{Error, Result};
use crate::ltlf::{Letter, Partition, Prop};

/// BDD manager plus the proposition variables of one partition.
#[derive(Debug)]
pub struct SymbolicSpace {
    pub mgr: BddManager,
    partition: Partition,
    prop_vars: Vec<Var>,
    num_state_vars: usize,
    x_cube: Bdd,
    y_cube: Bdd,
    /// Long-running loops stop early once this instant has passed.
    pub deadline: Option<std::time::Instant>,
    timed_out: bool,
}

impl SymbolicSpace {
    pub fn new(partition: &Partition) -> Self {
        let mut mgr = BddManager::new();
        let prop_vars: Vec<Var> = partition.props().map(|p| mgr.new_var(partition.name(p))).collect();
        let xs: Vec<Var> = partition.env_props().map(|p| prop_vars[p.index()]).collect();
        let ys: Vec<Var> = partition.agent_props().map(|p| prop_vars[p.index()]).collect();
        let x_cube = mgr.cube(&xs);
        let y_cube = mgr.cube(&ys);
        mgr.pin(x_cube);
        mgr.pin(y_cube);
        SymbolicSpace {
            mgr,
            partition: partition.clone(),
            prop_vars,
            num_state_vars: 0,
            x_cube,
            y_cube,
            deadline: None,
            timed_out: false,
        }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Records and reports whether the deadline has passed.
    pub fn check_deadline(&mut self) -> bool {
        if self.deadline.is_some_and(|d| std::time::Instant::now() >= d) {
            self.timed_out = true;
        }
        self.timed_out
    }

    /// Whether some computation was cut short by the deadline.
    pub fn timed_out(&self) -> bool {
        self.timed_out
    }

    pub fn prop_var(&self, p: Prop) -> Var {
        self.prop_vars[p.index()]
    }

    pub fn x_vars(&self) -> Vec<Var> {
        self.partition.env_props().map(|p| self.prop_var(p)).collect()
    }

    pub fn y_vars(&self) -> Vec<Var> {
        self.partition.agent_props().map(|p| self.prop_var(p)).collect()
    }

    /// Positive cube of the environment variables.
    pub fn x_cube(&self) -> Bdd {
        self.x_cube
    }

    /// Positive cube of the agent variables.
    pub fn y_cube(&self) -> Bdd {
        self.y_cube
    }

    /// Allocates `k` state variables below the existing ones and above the
    /// proposition variables.
    pub fn fresh_state_vars(&mut self, k: usize, prefix: &str) -> Vec<Var> {
        (0..k)
            .map(|i| {
                let level = self.num_state_vars;
                self.num_state_vars += 1;
                self.mgr.new_var_at_level(format!("{prefix}{i}"), level)
            })
            .collect()
    }

    /// Log-encodes a complete explicit automaton: state `s` gets the
    /// codeword whose bit `j` is bit `j` of `s`.
    pub fn encode(&mut self, dfa: &ExplicitDfa, prefix: &str) -> Result<SymbolicDfa> {
        if dfa.partition() != &self.partition {
            return Err(Error::PartitionMismatch);
        }
        let n = dfa.num_states();
        let k = bits_for(n);
        let z = self.fresh_state_vars(k, prefix);
        let props = self.prop_vars.clone();
        // per state, one function over the letter variables per state bit
        let rows: Vec<Vec<Bdd>> = (0..n).map(|s| self.row_bits(&props, dfa.row(s), 0, 0, k)).collect();
        let mut eta = Vec::with_capacity(k);
        for j in 0..k {
            let f = self.over_states(&z, 0, 0, &|code| if code < n { rows[code][j] } else { Bdd::FALSE });
            eta.push(f);
        }
        let finals = self.over_states(&z, 0, 0, &|code| Bdd::constant(code < n && dfa.is_final(code)));
        let domain = self.over_states(&z, 0, 0, &|code| Bdd::constant(code < n));
        let initial = (0..k).map(|j| dfa.initial() >> j & 1 == 1).collect();
        Ok(SymbolicDfa { state_vars: z, initial, eta, finals: vec![finals], domain })
    }

    /// Successor bits of one row as functions of the letter. Letters whose
    /// bits `0..level` equal `fixed` are the ones still open; a block whose
    /// letters all share one target becomes constants at once.
    fn row_bits(&mut self, props: &[Var], row: &[u32], level: usize, fixed: usize, k: usize) -> Vec<Bdd> {
        let stride = 1usize << level;
        let first = row[fixed];
        if row[fixed..].iter().step_by(stride).all(|&t| t == first) {
            return (0..k).map(|j| Bdd::constant(first >> j & 1 == 1)).collect();
        }
        let lo = self.row_bits(props, row, level + 1, fixed, k);
        let hi = self.row_bits(props, row, level + 1, fixed | stride, k);
        lo.into_iter().zip(hi).map(|(l, h)| self.mgr.make_node(props[level], l, h)).collect()
    }

    /// Decision tree over the codeword bits `z[level..]` with leaves given
    /// per codeword.
    fn over_states(&mut self, z: &[Var], level: usize, prefix: usize, leaf: &dyn Fn(usize) -> Bdd) -> Bdd {
        if level == z.len() {
            return leaf(prefix);
        }
        let lo = self.over_states(z, level + 1, prefix, leaf);
        let hi = self.over_states(z, level + 1, prefix | 1 << level, leaf);
        self.mgr.make_node(z[level], lo, hi)
    }

    /// Minterm over `vars` for the given values.
    pub fn assignment(&mut self, vars: &[Var], values: &[bool]) -> Bdd {
        let pairs: Vec<(Var, bool)> = vars.iter().copied().zip(values.iter().copied()).collect();
        self.mgr.minterm(&pairs)
    }

    /// Evaluates `f` at a state assignment and a letter.
    pub fn eval(&self, f: Bdd, state_vars: &[Var], state: &[bool], letter: Letter) -> bool {
        let mut value = vec![false; self.mgr.num_vars()];
        for (v, &b) in state_vars.iter().zip(state) {
            value[v.index()] = b;
        }
        for p in self.partition.props() {
            value[self.prop_var(p).index()] = letter.contains(p);
        }
        self.mgr.eval(f, |v| value[v.index()])
    }
}

/// Number of bits needed to number `n` states; zero for a single state.
pub fn bits_for(n: usize) -> usize {
    let mut k = 0;
    while (1usize << k) < n {
        k += 1;
    }
    k
}

/// Decodes a codeword into a state index.
pub fn decode(bits: &[bool]) -> usize {
    bits.iter().enumerate().map(|(j, &b)| (b as usize) << j).sum()
}

/// Encodes a state index as a codeword of length `k`.
pub fn encode_state(s: usize, k: usize) -> Vec<bool> {
    (0..k).map(|j| s >> j & 1 == 1).collect()
}

/// A symbolic transition system `(Z, Z0, η)` with one or more final
/// predicates over `Z`, all tied to a [`SymbolicSpace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicDfa {
    state_vars: Vec<Var>,
    initial: Vec<bool>,
    eta: Vec<Bdd>,
    finals: Vec<Bdd>,
    domain: Bdd,
}

impl SymbolicDfa {
    pub fn state_vars(&self) -> &[Var] {
        &self.state_vars
    }

    pub fn num_state_vars(&self) -> usize {
        self.state_vars.len()
    }

    pub fn initial(&self) -> &[bool] {
        &self.initial
    }

    /// Next-state function, one component per state variable.
    pub fn eta(&self) -> &[Bdd] {
        &self.eta
    }

    /// Final predicates; a single encoding has exactly one, a product one
    /// per component.
    pub fn finals(&self) -> &[Bdd] {
        &self.finals
    }

    pub fn final_pred(&self) -> Bdd {
        self.finals[0]
    }

    /// Codewords that denote states (minus anything removed by restriction).
    pub fn domain(&self) -> Bdd {
        self.domain
    }

    /// Every BDD this automaton holds, for use as garbage-collection roots.
    pub fn roots(&self) -> Vec<Bdd> {
        let mut r = self.eta.clone();
        r.extend(&self.finals);
        r.push(self.domain);
        r
    }

    pub fn initial_bdd(&self, space: &mut SymbolicSpace) -> Bdd {
        space.assignment(&self.state_vars, &self.initial)
    }

    /// Same transition system with a different list of final predicates.
    pub fn with_finals(&self, finals: Vec<Bdd>) -> SymbolicDfa {
        SymbolicDfa { finals, ..self.clone() }
    }

    pub fn successor(&self, space: &SymbolicSpace, state: &[bool], letter: Letter) -> Vec<bool> {
        self.eta.iter().map(|&f| space.eval(f, &self.state_vars, state, letter)).collect()
    }

    /// Truth of a predicate over `Z` at a state.
    pub fn holds(&self, space: &SymbolicSpace, pred: Bdd, state: &[bool]) -> bool {
        space.eval(pred, &self.state_vars, state, Letter(0))
    }

    pub fn run(&self, space: &SymbolicSpace, word: &[Letter]) -> Vec<Vec<bool>> {
        let mut states = vec![self.initial.clone()];
        for &l in word {
            let next = self.successor(space, states.last().unwrap(), l);
            states.push(next);
        }
        states
    }

    /// Acceptance of a nonempty word by final predicate `which`.
    pub fn accepts(&self, space: &SymbolicSpace, which: usize, word: &[Letter]) -> Result<bool> {
        if word.is_empty() {
            return Err(Error::EmptyTrace);
        }
        let last = self.run(space, word).pop().unwrap();
        Ok(self.holds(space, self.finals[which], &last))
    }

    /// Conjoins every transition component, every final predicate and the
    /// domain with `g`. Transitions leaving a state outside `g` go to the
    /// all-false codeword, and such states drop out of the domain.
    pub fn restrict(&self, space: &mut SymbolicSpace, g: Bdd) -> SymbolicDfa {
        let eta = self.eta.iter().map(|&e| space.mgr.and(e, g)).collect();
        let finals = self.finals.iter().map(|&f| space.mgr.and(f, g)).collect();
        let domain = space.mgr.and(self.domain, g);
        SymbolicDfa { eta, finals, domain, ..self.clone() }
    }

    /// Restriction that leaves the transition functions alone and narrows
    /// only the domain and the final predicates. Successors of states inside
    /// `g` are the same as under [`SymbolicDfa::restrict`], and game solvers
    /// never add states outside the domain, so both give the same regions.
    pub fn restrict_domain(&self, space: &mut SymbolicSpace, g: Bdd) -> SymbolicDfa {
        let finals = self.finals.iter().map(|&f| space.mgr.and(f, g)).collect();
        let domain = space.mgr.and(self.domain, g);
        SymbolicDfa { finals, domain, ..self.clone() }
    }

    /// Textual dump: one `name' = expr` line per state variable, then the
    /// final predicates and the domain.
    pub fn dump(&self, space: &SymbolicSpace) -> String {
        let mut s = String::new();
        let init: Vec<String> = self
            .state_vars
            .iter()
            .zip(&self.initial)
            .map(|(&v, &b)| format!("{}={}", space.mgr.var_name(v), b as u8))
            .collect();
        let _ = writeln!(s, "init {}", init.join(" "));
        for (&v, &e) in self.state_vars.iter().zip(&self.eta) {
            let _ = writeln!(s, "{}' = {}", space.mgr.var_name(v), space.mgr.to_expr(e));
        }
        for (i, &f) in self.finals.iter().enumerate() {
            let _ = writeln!(s, "final[{i}] = {}", space.mgr.to_expr(f));
        }
        let _ = writeln!(s, "domain = {}", space.mgr.to_expr(self.domain));
        s
    }
}

/// Synchronous product of automata living in the same space. State
/// variables are concatenated, and a component whose variables were
/// already used by an earlier one is renamed to fresh variables.
pub fn sym_product(space: &mut SymbolicSpace, parts: &[SymbolicDfa]) -> Result<SymbolicDfa> {
    if parts.is_empty() {
        return Err(Error::OutOfRange("empty product".into()));
    }
    let mut used = std::collections::HashSet::new();
    let mut out = SymbolicDfa {
        state_vars: Vec::new(),
        initial: Vec::new(),
        eta: Vec::new(),
        finals: Vec::new(),
        domain: Bdd::TRUE,
    };
    for (i, part) in parts.iter().enumerate() {
        let part = if part.state_vars.iter().any(|v| used.contains(v)) {
            rename(space, part, &format!("r{i}_"))
        } else {
            part.clone()
        };
        used.extend(part.state_vars.iter().copied());
        out.state_vars.extend(&part.state_vars);
        out.initial.extend(&part.initial);
        out.eta.extend(&part.eta);
        out.finals.extend(&part.finals);
        out.domain = space.mgr.and(out.domain, part.domain);
    }
    Ok(out)
}

fn rename(space: &mut SymbolicSpace, d: &SymbolicDfa, prefix: &str) -> SymbolicDfa {
    let fresh = space.fresh_state_vars(d.state_vars.len(), prefix);
    let subst: Vec<(Var, Bdd)> =
        d.state_vars.iter().zip(&fresh).map(|(&old, &new)| (old, space.mgr.var(new))).collect();
    let mut map = |f: Bdd| space.mgr.vector_compose(f, &subst);
    SymbolicDfa {
        state_vars: fresh.clone(),
        initial: d.initial.clone(),
        eta: d.eta.iter().map(|&f| map(f)).collect(),
        finals: d.finals.iter().map(|&f| map(f)).collect(),
        domain: map(d.domain),
    }
}

/// Objectives for a product of an environment automaton and a goal
/// automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LiftedFinals {
    /// `f_E -> f_φ`
    pub implication: Bdd,
    /// `¬f_E`
    pub not_env: Bdd,
    /// `f_E ∧ f_φ`
    pub conjunction: Bdd,
}

pub fn lift_finals(mgr: &mut BddManager, f_env: Bdd, f_goal: Bdd) -> LiftedFinals {
    LiftedFinals {
        implication: mgr.implies(f_env, f_goal),
        not_env: mgr.not(f_env),
        conjunction: mgr.and(f_env, f_goal),
    }
}
