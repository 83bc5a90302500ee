//! Hopcroft partition refinement.

use std::collections::{HashMap, VecDeque};

use super::ExplicitDfa;

/// Refinable partition of `0..n` with in-place splitting.
struct Partition {
    elems: Vec<u32>,
    pos: Vec<u32>,
    class: Vec<u32>,
    start: Vec<u32>,
    end: Vec<u32>,
    marked: Vec<u32>,
}

impl Partition {
    fn new(labels: &[u32]) -> Self {
        let mut order: Vec<u32> = (0..labels.len() as u32).collect();
        order.sort_by_key(|&s| labels[s as usize]);
        let mut p = Partition {
            elems: order,
            pos: vec![0; labels.len()],
            class: vec![0; labels.len()],
            start: Vec::new(),
            end: Vec::new(),
            marked: Vec::new(),
        };
        for (i, &s) in p.elems.iter().enumerate() {
            let c = if i == 0 || labels[s as usize] != labels[p.elems[i - 1] as usize] {
                p.start.push(i as u32);
                p.end.push(i as u32);
                p.marked.push(0);
                p.start.len() - 1
            } else {
                p.start.len() - 1
            };
            p.class[s as usize] = c as u32;
            p.pos[s as usize] = i as u32;
            p.end[c] = i as u32 + 1;
        }
        p
    }

    fn num_classes(&self) -> usize {
        self.start.len()
    }

    fn size(&self, c: usize) -> usize {
        (self.end[c] - self.start[c]) as usize
    }

    fn members(&self, c: usize) -> &[u32] {
        &self.elems[self.start[c] as usize..self.end[c] as usize]
    }

    fn mark(&mut self, s: u32, touched: &mut Vec<u32>) {
        let c = self.class[s as usize] as usize;
        let i = self.pos[s as usize];
        let target = self.start[c] + self.marked[c];
        if i < target {
            return;
        }
        if self.marked[c] == 0 {
            touched.push(c as u32);
        }
        let other = self.elems[target as usize];
        self.elems.swap(i as usize, target as usize);
        self.pos[s as usize] = target;
        self.pos[other as usize] = i;
        self.marked[c] += 1;
    }

    /// Splits every touched class into its marked and unmarked parts.
    /// Returns `(old, new)` pairs for classes that actually split; the new
    /// class holds the marked elements.
    fn split(&mut self, touched: &mut Vec<u32>) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for c in touched.drain(..) {
            let c = c as usize;
            let m = self.marked[c];
            self.marked[c] = 0;
            if m as usize == self.size(c) {
                continue;
            }
            let new = self.start.len();
            let s = self.start[c];
            self.start.push(s);
            self.end.push(s + m);
            self.marked.push(0);
            self.start[c] = s + m;
            for i in s..s + m {
                self.class[self.elems[i as usize] as usize] = new as u32;
            }
            out.push((c, new));
        }
        out
    }
}

impl ExplicitDfa {
    /// Minimal complete automaton for the same language, unreachable states
    /// removed, states numbered in breadth-first order from the initial one.
    pub fn minimize(&self) -> ExplicitDfa {
        let labels: Vec<u32> = self.finals.iter().map(|&f| f as u32).collect();
        let (dfa, _) = self.minimize_labeled(&labels);
        dfa
    }

    /// Merges states that agree on `labels` and on the labels of all their
    /// futures. The result's finals are the states whose label is nonzero;
    /// the returned vector maps every new state to its label.
    pub fn minimize_labeled(&self, labels: &[u32]) -> (ExplicitDfa, Vec<u32>) {
        let letters = self.num_letters();
        // reachable restriction
        let reach = self.reachable();
        let old: Vec<usize> = (0..self.num_states).filter(|&s| reach[s]).collect();
        let mut local = vec![u32::MAX; self.num_states];
        for (i, &s) in old.iter().enumerate() {
            local[s] = i as u32;
        }
        let n = old.len();

        // letters with identical columns are interchangeable for refinement
        let mut columns: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut reps = Vec::new();
        for l in 0..letters {
            let col: Vec<u32> = old.iter().map(|&s| self.table[s * letters + l]).collect();
            columns.entry(col).or_insert_with(|| {
                reps.push(l);
                reps.len() - 1
            });
        }

        // predecessor lists per representative letter, CSR layout
        let k = reps.len();
        let mut counts = vec![0u32; k * n + 1];
        for (ci, &l) in reps.iter().enumerate() {
            for &s in &old {
                let t = local[self.table[s * letters + l] as usize] as usize;
                counts[ci * n + t + 1] += 1;
            }
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let mut fill = counts.clone();
        let mut preds = vec![0u32; k * n];
        for (ci, &l) in reps.iter().enumerate() {
            for (si, &s) in old.iter().enumerate() {
                let t = local[self.table[s * letters + l] as usize] as usize;
                let slot = &mut fill[ci * n + t];
                preds[*slot as usize] = si as u32;
                *slot += 1;
            }
        }

        let local_labels: Vec<u32> = old.iter().map(|&s| labels[s]).collect();
        let mut part = Partition::new(&local_labels);
        let mut in_work = vec![true; part.num_classes()];
        let mut work: Vec<usize> = (0..part.num_classes()).collect();
        let mut touched = Vec::new();
        let mut splitter = Vec::new();
        while let Some(a) = work.pop() {
            in_work[a] = false;
            splitter.clear();
            splitter.extend_from_slice(part.members(a));
            for ci in 0..k {
                for &t in &splitter {
                    let base = ci * n + t as usize;
                    for &p in &preds[counts[base] as usize..counts[base + 1] as usize] {
                        part.mark(p, &mut touched);
                    }
                }
                for (old_c, new_c) in part.split(&mut touched) {
                    in_work.push(false);
                    let add = if in_work[old_c] || part.size(new_c) <= part.size(old_c) {
                        new_c
                    } else {
                        old_c
                    };
                    work.push(add);
                    in_work[add] = true;
                }
            }
        }

        // quotient, renumbered breadth-first
        let class_of = |s: usize| part.class[local[s] as usize] as usize;
        let mut number = vec![u32::MAX; part.num_classes()];
        let mut rep_state = Vec::new();
        let mut queue = VecDeque::new();
        let c0 = class_of(self.initial);
        number[c0] = 0;
        rep_state.push(self.initial);
        queue.push_back(self.initial);
        let mut table = Vec::new();
        while let Some(s) = queue.pop_front() {
            for l in 0..letters {
                let t = self.table[s * letters + l] as usize;
                let c = class_of(t);
                if number[c] == u32::MAX {
                    number[c] = rep_state.len() as u32;
                    rep_state.push(t);
                    queue.push_back(t);
                }
                table.push(number[c]);
            }
        }
        let new_labels: Vec<u32> = rep_state.iter().map(|&s| labels[s]).collect();
        let dfa = ExplicitDfa {
            partition: self.partition.clone(),
            num_states: rep_state.len(),
            initial: 0,
            finals: new_labels.iter().map(|&l| l != 0).collect(),
            table,
        };
        (dfa, new_labels)
    }
}
