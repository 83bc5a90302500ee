//! Brute-force check that a strategy is not strictly dominated.
//!
//! Everything here is explicit. The arena is the reachable product of the
//! automata for `E` and `φ`, optionally synchronized with the arena of a
//! synthesized strategy so that the strategy is positional on it. Agent and
//! environment strategies are positional: the agent sees the state, the
//! environment sees the state and the agent's move.
//!
//! An environment strategy enforces `E` when no play consistent with it
//! ever has a nonempty prefix violating `E`. Such strategies are exactly the
//! ones whose every move stays inside the environment's safety region, so a
//! partial choice table with safe moves always extends to an enforcing
//! strategy. The searches below build those tables lazily, one state and
//! agent move at a time, only where the plays under study go.
//!
//! Plays under two positional strategies depend on the current state alone,
//! so each one closes a cycle within `|S|` steps and the goal is decided
//! within `|S| + 1` steps.

use std::collections::{HashMap, VecDeque};

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::besteffort::{BestEffortStrategy, Problem};
use crate::dfa::{product_ts, translate};
use crate::error::{Error, Result};
use crate::ltlf::{Letter, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValidationBounds {
    /// Largest reachable product of the `E` and `φ` automata.
    pub max_states: usize,
    pub max_env_props: usize,
    /// Largest number of candidate agent strategies to compare against.
    pub max_strategies: usize,
}

impl Default for ValidationBounds {
    fn default() -> Self {
        ValidationBounds { max_states: 32, max_env_props: 2, max_strategies: 2_000_000 }
    }
}

/// Explicit game arena with the environment's safety region for `E`.
#[derive(Clone, Debug)]
pub struct ExplicitArena {
    partition: Partition,
    num_states: usize,
    table: Vec<u32>,
    env_final: Vec<bool>,
    goal_final: Vec<bool>,
    safe: Vec<bool>,
    /// Strategy-arena codeword of each state, empty when none is tracked.
    codes: Vec<Vec<bool>>,
    product_states: usize,
}

impl ExplicitArena {
    /// Product of the automata for `E` and `φ`.
    pub fn new(problem: &Problem, bounds: &ValidationBounds) -> Result<Self> {
        build(problem, None, bounds)
    }

    /// Product of the automata for `E` and `φ` with the strategy's own arena.
    pub fn with_strategy(problem: &Problem, strategy: &BestEffortStrategy, bounds: &ValidationBounds) -> Result<Self> {
        build(problem, Some(strategy), bounds)
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    /// States of the plain `E × φ` product, the quantity the bounds limit.
    pub fn product_states(&self) -> usize {
        self.product_states
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn next(&self, s: usize, env_bits: u32, agent_bits: u32) -> usize {
        let l = self.partition.join(env_bits, agent_bits);
        self.table[s * self.partition.num_letters() + l.index()] as usize
    }

    /// Whether the goal automaton accepts at `s` (meaningful after a
    /// nonempty prefix).
    pub fn is_goal(&self, s: usize) -> bool {
        self.goal_final[s]
    }

    pub fn is_env_final(&self, s: usize) -> bool {
        self.env_final[s]
    }

    /// Whether the environment can keep every later prefix inside `E`.
    pub fn is_safe(&self, s: usize) -> bool {
        self.safe[s]
    }

    /// Whether some environment strategy enforces `E` from the start.
    pub fn env_enforceable(&self) -> bool {
        (0..self.num_agent_moves()).all(|y| !self.safe_moves(0, y).is_empty())
    }

    pub fn num_agent_moves(&self) -> u32 {
        1 << self.partition.num_agent()
    }

    pub fn num_env_moves(&self) -> u32 {
        1 << self.partition.num_env()
    }

    /// Environment moves that keep the play enforcing `E`.
    pub fn safe_moves(&self, s: usize, y: u32) -> Vec<u32> {
        (0..self.num_env_moves()).filter(|&x| self.safe[self.next(s, x, y)]).collect()
    }

    /// One agent move per class of moves with identical successors.
    pub fn action_classes(&self, s: usize) -> Vec<u32> {
        let mut seen: HashMap<Vec<usize>, u32> = HashMap::new();
        let mut out = Vec::new();
        for y in 0..self.num_agent_moves() {
            let key: Vec<usize> = (0..self.num_env_moves()).map(|x| self.next(s, x, y)).collect();
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(key) {
                e.insert(y);
                out.push(y);
            }
        }
        out
    }

    /// The synthesized strategy as a table over this arena's states.
    pub fn strategy_table(&self, strategy: &BestEffortStrategy) -> Vec<u32> {
        assert!(self.codes.len() == self.num_states, "arena does not track a strategy");
        self.codes
            .iter()
            .map(|z| strategy.output(z).iter().enumerate().fold(0, |acc, (i, &b)| acc | (b as u32) << i))
            .collect()
    }
}

fn build(problem: &Problem, strategy: Option<&BestEffortStrategy>, bounds: &ValidationBounds) -> Result<ExplicitArena> {
    let p = &problem.partition;
    if p.num_env() > bounds.max_env_props {
        return Err(Error::BoundsExceeded(format!(
            "{} environment propositions exceed the bound {}",
            p.num_env(),
            bounds.max_env_props
        )));
    }
    let e = translate(&problem.env_spec, p)?;
    let g = translate(&problem.goal, p)?;
    let product_states = product_ts(&[e.clone(), g.clone()])?.ts.num_states();
    if product_states > bounds.max_states {
        return Err(Error::BoundsExceeded(format!(
            "product of {product_states} states exceeds the bound {}",
            bounds.max_states
        )));
    }
    let letters = p.num_letters();
    let start = (e.initial(), g.initial(), strategy.map(|s| s.arena.initial().to_vec()).unwrap_or_default());
    let mut ids = HashMap::from([(start.clone(), 0usize)]);
    let mut states = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    let mut table = Vec::new();
    while let Some((se, sg, z)) = queue.pop_front() {
        for l in 0..letters {
            let letter = Letter(l as u32);
            let z2 = match strategy {
                Some(s) => s.arena.successor(&s.space, &z, letter),
                None => Vec::new(),
            };
            let key = (e.next(se, letter), g.next(sg, letter), z2);
            let id = *ids.entry(key.clone()).or_insert_with(|| {
                states.push(key.clone());
                queue.push_back(key);
                states.len() - 1
            });
            table.push(id as u32);
        }
    }
    let env_final: Vec<bool> = states.iter().map(|(se, _, _)| e.is_final(*se)).collect();
    let goal_final: Vec<bool> = states.iter().map(|(_, sg, _)| g.is_final(*sg)).collect();
    let codes = if strategy.is_some() { states.iter().map(|(_, _, z)| z.clone()).collect() } else { Vec::new() };
    let mut arena = ExplicitArena {
        partition: p.clone(),
        num_states: states.len(),
        table,
        safe: env_final.clone(),
        env_final,
        goal_final,
        codes,
        product_states,
    };
    arena.safe = safety_region(&arena);
    Ok(arena)
}

/// Greatest set inside the `E`-accepting states from which, for every agent
/// move, some environment move stays inside the set.
fn safety_region(arena: &ExplicitArena) -> Vec<bool> {
    let mut safe = arena.env_final.clone();
    loop {
        let mut changed = false;
        for s in 0..arena.num_states {
            if safe[s]
                && !(0..arena.num_agent_moves())
                    .all(|y| (0..arena.num_env_moves()).any(|x| safe[arena.next(s, x, y)]))
            {
                safe[s] = false;
                changed = true;
            }
        }
        if !changed {
            return safe;
        }
    }
}

/// Environment choice table: `(state, agent move) -> environment move`.
pub type EnvTable = FxHashMap<(usize, u32), u32>;

struct EnvSearch<'a> {
    arena: &'a ExplicitArena,
    winner: Option<&'a [u32]>,
    loser: &'a [u32],
    choice: EnvTable,
}

impl EnvSearch<'_> {
    fn options(&self, s: usize, y: u32) -> Vec<u32> {
        match self.choice.get(&(s, y)) {
            Some(&x) => vec![x],
            None => self.arena.safe_moves(s, y),
        }
    }

    fn lose(&mut self, s: usize, pos: usize, seen: &mut Vec<bool>) -> bool {
        if pos > 0 && self.arena.goal_final[s] {
            return false;
        }
        if seen[s] {
            return match self.winner {
                Some(_) => self.win(0, 0, &mut vec![false; self.arena.num_states]),
                None => true,
            };
        }
        seen[s] = true;
        let y = self.loser[s];
        let mut found = false;
        for x in self.options(s, y) {
            let fresh = self.choice.insert((s, y), x).is_none();
            found = self.lose(self.arena.next(s, x, y), pos + 1, seen);
            if fresh && !found {
                self.choice.remove(&(s, y));
            }
            if found {
                break;
            }
        }
        seen[s] = false;
        found
    }

    fn win(&mut self, s: usize, pos: usize, seen: &mut Vec<bool>) -> bool {
        if pos > 0 && self.arena.goal_final[s] {
            return true;
        }
        if seen[s] {
            return false;
        }
        seen[s] = true;
        let y = self.winner.expect("winner phase")[s];
        let mut found = false;
        for x in self.options(s, y) {
            let fresh = self.choice.insert((s, y), x).is_none();
            found = self.win(self.arena.next(s, x, y), pos + 1, seen);
            if fresh && !found {
                self.choice.remove(&(s, y));
            }
            if found {
                break;
            }
        }
        seen[s] = false;
        found
    }
}

/// An enforcing environment strategy (as the part of its table the plays
/// use) under which `winner` reaches the goal and `loser` never does. With
/// no `winner`, any enforcing strategy that defeats `loser`.
pub fn find_separating_env(arena: &ExplicitArena, winner: Option<&[u32]>, loser: &[u32]) -> Option<EnvTable> {
    if !arena.env_enforceable() {
        return None;
    }
    let mut search = EnvSearch { arena, winner, loser, choice: EnvTable::default() };
    let mut seen = vec![false; arena.num_states];
    search.lose(0, 0, &mut seen).then_some(search.choice)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dominance {
    /// Wins whenever the other wins, and sometimes when it does not.
    Strict,
    /// Wins against exactly the same enforcing environments.
    Equivalent,
    /// Some enforcing environment defeats the first strategy but not the
    /// second.
    NotDominating,
}

/// Compares two positional agent strategies over enforcing positional
/// environments.
pub fn dominates(arena: &ExplicitArena, s1: &[u32], s2: &[u32]) -> Dominance {
    if find_separating_env(arena, Some(s2), s1).is_some() {
        return Dominance::NotDominating;
    }
    if find_separating_env(arena, Some(s1), s2).is_some() {
        Dominance::Strict
    } else {
        Dominance::Equivalent
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub product_states: usize,
    pub arena_states: usize,
    pub env_enforceable: bool,
    /// The strategy reaches the goal against every enforcing environment.
    pub wins_against_all: bool,
    /// No positional agent strategy strictly dominates it.
    pub undominated: bool,
    /// A strictly dominating strategy, as agent moves per arena state.
    pub dominating_witness: Option<Vec<u32>>,
    pub strategies_checked: usize,
    pub scope: &'static str,
}

const SCOPE: &str = "positional agent and environment strategies only";

pub fn validate(problem: &Problem, strategy: &BestEffortStrategy) -> Result<ValidationReport> {
    validate_with(problem, strategy, &ValidationBounds::default())
}

pub fn validate_with(problem: &Problem, strategy: &BestEffortStrategy, bounds: &ValidationBounds) -> Result<ValidationReport> {
    let arena = ExplicitArena::with_strategy(problem, strategy, bounds)?;
    let kappa = arena.strategy_table(strategy);
    validate_table(&arena, &kappa, bounds)
}

/// Checks an agent strategy given as a table over `arena`.
pub fn validate_table(arena: &ExplicitArena, sigma: &[u32], bounds: &ValidationBounds) -> Result<ValidationReport> {
    let mut report = ValidationReport {
        product_states: arena.product_states,
        arena_states: arena.num_states,
        env_enforceable: arena.env_enforceable(),
        wins_against_all: false,
        undominated: true,
        dominating_witness: None,
        strategies_checked: 0,
        scope: SCOPE,
    };
    if find_separating_env(arena, None, sigma).is_none() {
        report.wins_against_all = true;
        return Ok(report);
    }
    let mut assigned = vec![None; arena.num_states];
    let mut checked = 0;
    let witness = enumerate(arena, &mut assigned, &mut checked, bounds.max_strategies, &mut |cand| {
        dominates(arena, cand, sigma) == Dominance::Strict
    })?;
    report.strategies_checked = checked;
    report.undominated = witness.is_none();
    report.dominating_witness = witness;
    Ok(report)
}

/// States where an agent strategy needs a move: reachable from the start
/// through assigned states and safe environment moves, stopping at goal
/// states. Returns the first one without a move, if any.
fn first_open(arena: &ExplicitArena, assigned: &[Option<u32>]) -> Option<usize> {
    let mut seen = vec![false; arena.num_states];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(s) = queue.pop_front() {
        let Some(y) = assigned[s] else { return Some(s) };
        for x in arena.safe_moves(s, y) {
            let t = arena.next(s, x, y);
            if !seen[t] && !arena.goal_final[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    None
}

fn enumerate(
    arena: &ExplicitArena,
    assigned: &mut Vec<Option<u32>>,
    checked: &mut usize,
    limit: usize,
    test: &mut dyn FnMut(&[u32]) -> bool,
) -> Result<Option<Vec<u32>>> {
    match first_open(arena, assigned) {
        None => {
            *checked += 1;
            if *checked > limit {
                return Err(Error::BoundsExceeded(format!("more than {limit} candidate strategies")));
            }
            let table: Vec<u32> = assigned.iter().map(|y| y.unwrap_or(0)).collect();
            Ok(test(&table).then_some(table))
        }
        Some(s) => {
            for y in arena.action_classes(s) {
                assigned[s] = Some(y);
                if let Some(w) = enumerate(arena, assigned, checked, limit, test)? {
                    assigned[s] = None;
                    return Ok(Some(w));
                }
            }
            assigned[s] = None;
            Ok(None)
        }
    }
}
