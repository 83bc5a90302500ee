//! Executing positional strategies.
//!
//! A [`Transducer`] walks the arena of a [`BestEffortStrategy`]: it emits
//! the agent's move for the current state, reads the environment's move and
//! advances. [`simulate`] records a whole play together with the objective
//! flags of every nonempty prefix.

mod validate;

use std::fmt::Write;

use serde::Serialize;

use crate::besteffort::{BestEffortStrategy, OBJ_CONJUNCTION, OBJ_IMPLICATION, OBJ_NOT_ENV};
use crate::ltlf::{Letter, Partition};

pub use validate::{
    dominates, find_separating_env, validate, validate_table, validate_with, Dominance, EnvTable, ExplicitArena,
    ValidationBounds, ValidationReport,
};

/// A positional strategy run as a reactive machine.
#[derive(Debug, Clone)]
pub struct Transducer<'a> {
    strategy: &'a BestEffortStrategy,
    state: Vec<bool>,
    steps: usize,
}

/// Positions the transducer at the initial state.
pub fn induce(strategy: &BestEffortStrategy) -> Transducer<'_> {
    Transducer { strategy, state: strategy.arena.initial().to_vec(), steps: 0 }
}

impl<'a> Transducer<'a> {
    pub fn strategy(&self) -> &'a BestEffortStrategy {
        self.strategy
    }

    pub fn reset(&mut self) {
        self.state = self.strategy.arena.initial().to_vec();
        self.steps = 0;
    }

    pub fn state(&self) -> &[bool] {
        &self.state
    }

    /// Number of environment moves consumed so far.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Agent move for the current state, one value per agent proposition.
    pub fn output(&self) -> Vec<bool> {
        self.strategy.output(&self.state)
    }

    /// Agent move as a bit mask over the agent propositions.
    pub fn output_bits(&self) -> u32 {
        bits_of(&self.output())
    }

    /// Emits the agent move, reads `env_bits` (one bit per environment
    /// proposition) and advances. Returns the letter of this instant.
    pub fn step(&mut self, env_bits: u32) -> Letter {
        let p = self.strategy.space.partition();
        let letter = p.join(env_bits, self.output_bits());
        self.state = self.strategy.arena.successor(&self.strategy.space, &self.state, letter);
        self.steps += 1;
        letter
    }
}

fn bits_of(values: &[bool]) -> u32 {
    values.iter().enumerate().fold(0, |acc, (i, &b)| acc | (b as u32) << i)
}

/// Objective flags after a nonempty prefix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StepFlags {
    pub conjunction: bool,
    pub not_env: bool,
    pub implication: bool,
}

/// A play: the trace, the visited states (one more than letters) and the
/// flags of every nonempty prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlayRecord {
    pub trace: Vec<Letter>,
    pub states: Vec<Vec<bool>>,
    pub flags: Vec<StepFlags>,
    /// Agent move at the last state, not yet answered by the environment.
    pub pending_output: Vec<bool>,
}

/// Replays the environment moves from the transducer's current state.
pub fn simulate(t: &mut Transducer<'_>, env_inputs: &[u32]) -> PlayRecord {
    let s = t.strategy;
    let mut rec = PlayRecord {
        trace: Vec::with_capacity(env_inputs.len()),
        states: vec![t.state.clone()],
        flags: Vec::with_capacity(env_inputs.len()),
        pending_output: Vec::new(),
    };
    let finals = s.arena.finals();
    for &x in env_inputs {
        let letter = t.step(x);
        let holds = |i: usize| s.arena.holds(&s.space, finals[i], &t.state);
        rec.flags.push(StepFlags {
            conjunction: holds(OBJ_CONJUNCTION),
            not_env: holds(OBJ_NOT_ENV),
            implication: holds(OBJ_IMPLICATION),
        });
        rec.trace.push(letter);
        rec.states.push(t.state.clone());
    }
    rec.pending_output = t.output();
    rec
}

#[derive(Serialize)]
struct StepLine<'a> {
    step: usize,
    env: Vec<&'a str>,
    agent: Vec<&'a str>,
    state: String,
    next_state: String,
    flags: StepFlags,
}

fn code(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl PlayRecord {
    /// One JSON object per step; propositions are listed when true.
    pub fn to_jsonl(&self, partition: &Partition) -> String {
        let mut out = String::new();
        for (i, (&letter, flags)) in self.trace.iter().zip(&self.flags).enumerate() {
            let line = StepLine {
                step: i,
                env: partition.env_props().filter(|&p| letter.contains(p)).map(|p| partition.name(p)).collect(),
                agent: partition.agent_props().filter(|&p| letter.contains(p)).map(|p| partition.name(p)).collect(),
                state: code(&self.states[i]),
                next_state: code(&self.states[i + 1]),
                flags: *flags,
            };
            out.push_str(&serde_json::to_string(&line).expect("step serializes"));
            out.push('\n');
        }
        out
    }
}

fn literals(partition: &Partition, props: impl Iterator<Item = crate::ltlf::Prop>, bits: u32) -> String {
    let lits: Vec<String> = props
        .enumerate()
        .map(|(i, p)| {
            let name = partition.name(p);
            if bits >> i & 1 == 1 {
                name.to_string()
            } else {
                format!("!{name}")
            }
        })
        .collect();
    if lits.is_empty() {
        "true".to_string()
    } else {
        lits.join(" & ")
    }
}

/// Graphviz rendering of the transducer over the states reachable under
/// `κ`. Edges carry `environment move / agent move`.
pub fn transducer_dot(strategy: &BestEffortStrategy) -> String {
    let p = strategy.space.partition();
    let arena = &strategy.arena;
    let mut ids = std::collections::HashMap::from([(arena.initial().to_vec(), 0usize)]);
    let mut order = vec![arena.initial().to_vec()];
    let mut edges = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let z = order[i].clone();
        let y = bits_of(&strategy.output(&z));
        let mut by_target: std::collections::BTreeMap<usize, Vec<u32>> = Default::default();
        for x in 0..1u32 << p.num_env() {
            let next = arena.successor(&strategy.space, &z, p.join(x, y));
            let id = *ids.entry(next.clone()).or_insert_with(|| {
                order.push(next);
                order.len() - 1
            });
            by_target.entry(id).or_default().push(x);
        }
        for (target, xs) in by_target {
            let xcube: Vec<String> = xs.iter().map(|&x| literals(p, p.env_props(), x)).collect();
            let label = format!("{} / {}", xcube.join(" | "), literals(p, p.agent_props(), y));
            edges.push((i, target, label));
        }
        i += 1;
    }
    let mut s = String::from("digraph transducer {\n  rankdir=LR;\n  init [shape=point];\n");
    for (i, z) in order.iter().enumerate() {
        let shape = if strategy.in_adversarial_region(z) { "doublecircle" } else { "circle" };
        let _ = writeln!(s, "  q{i} [shape={shape},label=\"{}\"];", code(z));
    }
    s.push_str("  init -> q0;\n");
    for (a, b, label) in edges {
        let _ = writeln!(s, "  q{a} -> q{b} [label=\"{label}\"];");
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests;
