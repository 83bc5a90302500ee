//! Explicit-state deterministic automata over the letters `2^(X ∪ Y)`.
//!
//! Transitions are stored as a dense table indexed by `state * letters +
//! letter`. Automata read nonempty words only; the initial state is never
//! treated as accepting by [`ExplicitDfa::accepts`], and the constructions in
//! this module keep it non-final so that games built on top of them do not
//! count the empty prefix as a win.

mod format;
mod minimize;
mod translate;

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::ltlf::{Letter, Partition};

pub use translate::{translate, translate_raw, translate_with, TranslateOptions};

/// Default cap on the number of propositions an explicit table may cover.
pub const DEFAULT_PROP_CAP: usize = 16;

/// A complete DFA.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitDfa {
    partition: Partition,
    num_states: usize,
    initial: usize,
    finals: Vec<bool>,
    table: Vec<u32>,
}

impl ExplicitDfa {
    /// Builds an automaton from a dense table (`table[s * letters + l]`).
    pub fn new(
        partition: Partition,
        initial: usize,
        finals: Vec<bool>,
        table: Vec<u32>,
    ) -> Result<Self> {
        let num_states = finals.len();
        let letters = letters_checked(&partition, DEFAULT_PROP_CAP)?;
        if num_states == 0 || initial >= num_states {
            return Err(Error::OutOfRange(format!(
                "initial state {initial} with {num_states} states"
            )));
        }
        if table.len() != num_states * letters {
            return Err(Error::Format(format!(
                "transition table has {} entries, expected {}",
                table.len(),
                num_states * letters
            )));
        }
        if let Some(bad) = table.iter().find(|&&t| t as usize >= num_states) {
            return Err(Error::OutOfRange(format!("transition target {bad}")));
        }
        Ok(ExplicitDfa { partition, num_states, initial, finals, table })
    }

    /// Builds an automaton by asking `delta` for every transition.
    pub fn from_fn(
        partition: Partition,
        num_states: usize,
        initial: usize,
        finals: Vec<bool>,
        mut delta: impl FnMut(usize, Letter) -> usize,
    ) -> Result<Self> {
        let letters = letters_checked(&partition, DEFAULT_PROP_CAP)?;
        let mut table = Vec::with_capacity(num_states * letters);
        for s in 0..num_states {
            for l in 0..letters {
                table.push(delta(s, Letter(l as u32)) as u32);
            }
        }
        Self::new(partition, initial, finals, table)
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_letters(&self) -> usize {
        self.partition.num_letters()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_final(&self, s: usize) -> bool {
        self.finals[s]
    }

    pub fn final_flags(&self) -> &[bool] {
        &self.finals
    }

    pub fn finals(&self) -> Vec<usize> {
        (0..self.num_states).filter(|&s| self.finals[s]).collect()
    }

    pub fn next(&self, s: usize, letter: Letter) -> usize {
        self.table[s * self.num_letters() + letter.index()] as usize
    }

    /// Successors of `s`, indexed by letter.
    pub fn row(&self, s: usize) -> &[u32] {
        let n = self.num_letters();
        &self.table[s * n..(s + 1) * n]
    }

    /// The run induced by `word`: one more state than letters.
    pub fn run(&self, word: &[Letter]) -> Vec<usize> {
        let mut states = Vec::with_capacity(word.len() + 1);
        let mut s = self.initial;
        states.push(s);
        for &l in word {
            s = self.next(s, l);
            states.push(s);
        }
        states
    }

    /// Whether the nonempty `word` is accepted.
    pub fn accepts(&self, word: &[Letter]) -> Result<bool> {
        if word.is_empty() {
            return Err(Error::EmptyTrace);
        }
        Ok(self.finals[*self.run(word).last().unwrap()])
    }

    /// Whether no nonempty word is accepted.
    pub fn is_empty(&self) -> bool {
        let after = self.reachable_nonempty();
        !(0..self.num_states).any(|s| after[s] && self.finals[s])
    }

    /// States reached by at least one nonempty word.
    pub(crate) fn reachable_nonempty(&self) -> Vec<bool> {
        let reach = self.reachable();
        let mut out = vec![false; self.num_states];
        for s in (0..self.num_states).filter(|&s| reach[s]) {
            for &t in self.row(s) {
                out[t as usize] = true;
            }
        }
        out
    }

    pub(crate) fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(s) = queue.pop_front() {
            for &t in self.row(s) {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    queue.push_back(t as usize);
                }
            }
        }
        seen
    }

    /// Whether some reachable state has an edge into `s`.
    pub fn has_incoming(&self, s: usize) -> bool {
        let reach = self.reachable();
        (0..self.num_states).any(|p| reach[p] && self.row(p).iter().any(|&t| t as usize == s))
    }

    /// Language-equal automaton whose initial state has no incoming edges
    /// and is non-final. A fresh copy of the initial row is added when the
    /// old initial state is re-entered.
    pub fn separate_initial(&self) -> ExplicitDfa {
        let mut out = self.clone();
        if !self.has_incoming(self.initial) {
            out.finals[self.initial] = false;
            return out;
        }
        let fresh = self.num_states;
        let row: Vec<u32> = self.row(self.initial).to_vec();
        out.table.extend(row);
        out.finals.push(false);
        out.num_states += 1;
        out.initial = fresh;
        out
    }

    /// Accepts exactly the nonempty words this automaton rejects.
    pub fn complement(&self) -> ExplicitDfa {
        let mut out = self.separate_initial();
        let init = out.initial;
        for (s, f) in out.finals.iter_mut().enumerate() {
            *f = s != init && !*f;
        }
        out.minimize()
    }

    /// Synchronous product accepting the words both automata accept.
    pub fn intersect(&self, other: &ExplicitDfa) -> Result<ExplicitDfa> {
        let prod = product_ts(&[self.clone(), other.clone()])?;
        Ok(prod.with_finals(|f| f[0] && f[1]).minimize())
    }

    /// Keeps the transition structure and replaces the final set.
    pub fn with_final_flags(&self, finals: Vec<bool>) -> Result<ExplicitDfa> {
        if finals.len() != self.num_states {
            return Err(Error::OutOfRange("final flag count".into()));
        }
        Ok(ExplicitDfa { finals, ..self.clone() })
    }

    /// Language equality on nonempty words.
    pub fn equivalent(&self, other: &ExplicitDfa) -> Result<bool> {
        let prod = product_ts(&[self.clone(), other.clone()])?;
        let after = prod.ts.reachable_nonempty();
        Ok((0..prod.ts.num_states).all(|s| !after[s] || prod.lifted[0][s] == prod.lifted[1][s]))
    }
}

pub(crate) fn letters_checked(partition: &Partition, cap: usize) -> Result<usize> {
    if partition.num_props() > cap {
        return Err(Error::ResourceLimit(format!(
            "{} propositions exceed the explicit alphabet cap of {cap}",
            partition.num_props()
        )));
    }
    Ok(partition.num_letters())
}

/// Reachable synchronous product of several automata together with one
/// lifted final set per component.
#[derive(Clone, Debug)]
pub struct ProductTs {
    /// Transition structure; its own final set is empty.
    pub ts: ExplicitDfa,
    /// Component states of every product state.
    pub coords: Vec<Vec<usize>>,
    /// `lifted[i][s]` holds when component `i` is final in product state `s`.
    pub lifted: Vec<Vec<bool>>,
}

impl ProductTs {
    /// Automaton whose finals are the product states where `pred` holds on
    /// the component final flags.
    pub fn with_finals(&self, pred: impl Fn(&[bool]) -> bool) -> ExplicitDfa {
        let mut flags = vec![false; self.lifted.len()];
        let finals = (0..self.ts.num_states)
            .map(|s| {
                for (i, f) in flags.iter_mut().enumerate() {
                    *f = self.lifted[i][s];
                }
                pred(&flags)
            })
            .collect();
        ExplicitDfa { finals, ..self.ts.clone() }
    }
}

/// Reachable synchronous product, numbered in breadth-first order.
pub fn product_ts(dfas: &[ExplicitDfa]) -> Result<ProductTs> {
    let first = dfas.first().ok_or_else(|| Error::OutOfRange("empty product".into()))?;
    if dfas.iter().any(|d| d.partition != first.partition) {
        return Err(Error::PartitionMismatch);
    }
    let letters = first.num_letters();
    let mut index = std::collections::HashMap::new();
    let mut coords: Vec<Vec<usize>> = Vec::new();
    let start: Vec<usize> = dfas.iter().map(|d| d.initial).collect();
    index.insert(start.clone(), 0u32);
    coords.push(start);
    let mut table = Vec::new();
    let mut next = 0;
    while next < coords.len() {
        let cur = coords[next].clone();
        for l in 0..letters {
            let succ: Vec<usize> = dfas
                .iter()
                .zip(&cur)
                .map(|(d, &s)| d.table[s * letters + l] as usize)
                .collect();
            let id = match index.get(&succ) {
                Some(&id) => id,
                None => {
                    let id = coords.len() as u32;
                    index.insert(succ.clone(), id);
                    coords.push(succ);
                    id
                }
            };
            table.push(id);
        }
        next += 1;
    }
    let n = coords.len();
    let lifted = dfas
        .iter()
        .enumerate()
        .map(|(i, d)| coords.iter().map(|c| d.finals[c[i]]).collect())
        .collect();
    let ts = ExplicitDfa {
        partition: first.partition.clone(),
        num_states: n,
        initial: 0,
        finals: vec![false; n],
        table,
    };
    Ok(ProductTs { ts, coords, lifted })
}
