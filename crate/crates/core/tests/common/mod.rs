//! Oracles shared by the integration tests. Nothing here calls the game
//! solvers or the symbolic layer; games are solved by explicit backward
//! induction over explicitly built products.

#![allow(dead_code)]

use besynth::besteffort::{Problem, Verdict};
use besynth::dfa::{translate, ExplicitDfa};
use besynth::ltlf::{Formula, Letter, Partition, Prop};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn partition(env: usize, agent: usize) -> Partition {
    let e: Vec<String> = (0..env).map(|i| format!("x{i}")).collect();
    let a: Vec<String> = (0..agent).map(|i| format!("y{i}")).collect();
    Partition::new(e, a).unwrap()
}

/// A formula with exactly `size` operators (as counted by
/// [`Formula::size`]) over the first `props` propositions.
pub fn random_formula<R: Rng>(rng: &mut R, size: usize, props: usize) -> Formula {
    let f = gen_formula(rng, size, props);
    debug_assert_eq!(f.size(), size);
    f
}

fn gen_formula<R: Rng>(rng: &mut R, size: usize, props: usize) -> Formula {
    if size == 0 {
        return match rng.gen_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::atom(Prop(rng.gen_range(0..props as u32))),
        };
    }
    if rng.gen_bool(0.4) {
        let a = gen_formula(rng, size - 1, props);
        return match rng.gen_range(0..5) {
            0 => Formula::not(a),
            1 => Formula::next(a),
            2 => Formula::weak_next(a),
            3 => Formula::eventually(a),
            _ => Formula::always(a),
        };
    }
    let left = rng.gen_range(0..size);
    let a = gen_formula(rng, left, props);
    let b = gen_formula(rng, size - 1 - left, props);
    match rng.gen_range(0..5) {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        2 => Formula::implies(a, b),
        3 => Formula::until(a, b),
        _ => Formula::release(a, b),
    }
}

/// A random problem over at most three propositions with at least one on
/// each side.
pub fn random_problem<R: Rng>(rng: &mut R, max_size: usize) -> Problem {
    let env = rng.gen_range(1..=2);
    let agent = rng.gen_range(1..=3 - env);
    let p = partition(env, agent);
    let n = p.num_props();
    let (se, sg) = (rng.gen_range(1..=max_size), rng.gen_range(1..=max_size));
    let e = random_formula(rng, se, n);
    let g = random_formula(rng, sg, n);
    Problem::new(e, g, p).unwrap()
}

/// Every word of length `1..=max_len`, visited depth first.
pub fn for_each_word(letters: usize, max_len: usize, f: &mut dyn FnMut(&[Letter])) {
    fn go(letters: usize, max_len: usize, word: &mut Vec<Letter>, f: &mut dyn FnMut(&[Letter])) {
        if !word.is_empty() {
            f(word);
        }
        if word.len() == max_len {
            return;
        }
        for l in 0..letters {
            word.push(Letter(l as u32));
            go(letters, max_len, word, f);
            word.pop();
        }
    }
    go(letters, max_len, &mut Vec::new(), f);
}

/// Explicit game graph: `next[s][x][y]`.
pub struct Game {
    pub num_states: usize,
    pub env_moves: usize,
    pub agent_moves: usize,
    pub next: Vec<Vec<Vec<usize>>>,
}

impl Game {
    pub fn from_dfa(d: &ExplicitDfa) -> Game {
        let p = d.partition();
        let (ne, na) = (1usize << p.num_env(), 1usize << p.num_agent());
        let next = (0..d.num_states())
            .map(|s| {
                (0..ne)
                    .map(|x| (0..na).map(|y| d.next(s, p.join(x as u32, y as u32))).collect())
                    .collect()
            })
            .collect();
        Game { num_states: d.num_states(), env_moves: ne, agent_moves: na, next }
    }

    /// Least fixpoint of `target ∪ {s | ∃y Q x. next ∈ W}` with `Q` = ∀ for
    /// the adversarial game and ∃ for the cooperative one. Also returns the
    /// rank at which each state entered.
    pub fn attractor(&self, target: &[bool], adversarial: bool) -> (Vec<bool>, Vec<usize>) {
        let mut win = target.to_vec();
        let mut rank: Vec<usize> = target.iter().map(|&t| if t { 0 } else { usize::MAX }).collect();
        let mut round = 0;
        loop {
            round += 1;
            let mut add = Vec::new();
            for s in 0..self.num_states {
                if !win[s] && (0..self.agent_moves).any(|y| self.pre(s, y, &win, adversarial)) {
                    add.push(s);
                }
            }
            if add.is_empty() {
                return (win, rank);
            }
            for s in add {
                win[s] = true;
                rank[s] = round;
            }
        }
    }

    pub fn pre(&self, s: usize, y: usize, win: &[bool], adversarial: bool) -> bool {
        let mut it = (0..self.env_moves).map(|x| win[self.next[s][x][y]]);
        if adversarial {
            it.all(|b| b)
        } else {
            it.any(|b| b)
        }
    }

    /// Whether playing `strategy` from `s` reaches `target` within the
    /// number of states: against every environment move when adversarial,
    /// along some environment move otherwise.
    pub fn strategy_reaches(&self, strategy: &[usize], target: &[bool], s: usize, adversarial: bool) -> bool {
        let mut good = target.to_vec();
        for _ in 0..self.num_states {
            good = (0..self.num_states)
                .map(|q| target[q] || self.pre(q, strategy[q], &good, adversarial))
                .collect();
        }
        good[s]
    }
}

/// Explicit product of two automata with both final flags per state.
pub struct Pair {
    pub dfa: ExplicitDfa,
    pub env_final: Vec<bool>,
    pub goal_final: Vec<bool>,
}

pub fn pair_product(e: &ExplicitDfa, g: &ExplicitDfa) -> Pair {
    let p = e.partition().clone();
    let letters = p.num_letters();
    let mut ids = std::collections::HashMap::from([((e.initial(), g.initial()), 0usize)]);
    let mut states = vec![(e.initial(), g.initial())];
    let mut table = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (a, b) = states[i];
        for l in 0..letters {
            let key = (e.next(a, Letter(l as u32)), g.next(b, Letter(l as u32)));
            let id = *ids.entry(key).or_insert_with(|| {
                states.push(key);
                states.len() - 1
            });
            table.push(id as u32);
        }
        i += 1;
    }
    let n = states.len();
    let dfa = ExplicitDfa::new(p, 0, vec![false; n], table).unwrap();
    Pair {
        dfa,
        env_final: states.iter().map(|&(a, _)| e.is_final(a)).collect(),
        goal_final: states.iter().map(|&(_, b)| g.is_final(b)).collect(),
    }
}

/// Explicit best-effort solution on the `E × φ` product.
pub struct Oracle {
    pub verdict: Verdict,
    pub game: Game,
    pub pair: Pair,
    pub adversarial: Vec<bool>,
    pub env_region: Vec<bool>,
    pub cooperative: Vec<bool>,
}

/// Backward induction for the three objectives. The initial state stands
/// for the empty prefix, so it only wins through a first move into the
/// region, never by being a target itself.
pub fn algorithm0(problem: &Problem) -> Oracle {
    let e = translate(&problem.env_spec, &problem.partition).unwrap();
    let g = translate(&problem.goal, &problem.partition).unwrap();
    let pair = pair_product(&e, &g);
    let game = Game::from_dfa(&pair.dfa);
    let n = game.num_states;
    let imp: Vec<bool> = (0..n).map(|s| !pair.env_final[s] || pair.goal_final[s]).collect();
    let not_e: Vec<bool> = (0..n).map(|s| !pair.env_final[s]).collect();
    let (adv, _) = game.attractor(&imp, true);
    let (lose_e, _) = game.attractor(&not_e, true);
    let initial_wins = |w: &[bool], adversarial: bool| (0..game.agent_moves).any(|y| game.pre(0, y, w, adversarial));
    let verdict = if initial_wins(&adv, true) { Verdict::Realizable } else { Verdict::BestEffortOnly };
    let env_region: Vec<bool> = (0..n).map(|s| !lose_e[s]).collect();
    let conj: Vec<bool> = (0..n).map(|s| env_region[s] && pair.env_final[s] && pair.goal_final[s]).collect();
    // cooperative game inside the environment region only
    let mut restricted = Game { next: game.next.clone(), ..game };
    for s in 0..n {
        if !env_region[s] {
            for row in restricted.next[s].iter_mut() {
                row.iter_mut().for_each(|t| *t = s);
            }
        }
    }
    let (coop, _) = restricted.attractor(&conj, false);
    let coop: Vec<bool> = (0..n).map(|s| coop[s] && env_region[s]).collect();
    Oracle { verdict, game, pair, adversarial: adv, env_region, cooperative: coop }
}

/// A random complete automaton.
pub fn random_dfa<R: Rng>(rng: &mut R, p: &Partition, max_states: usize) -> ExplicitDfa {
    let n = rng.gen_range(1..=max_states);
    let letters = p.num_letters();
    let table = (0..n * letters).map(|_| rng.gen_range(0..n) as u32).collect();
    let finals = (0..n).map(|_| rng.gen_bool(0.3)).collect();
    ExplicitDfa::new(p.clone(), rng.gen_range(0..n), finals, table).unwrap()
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

pub fn shuffle<T, R: Rng>(rng: &mut R, v: &mut [T]) {
    v.shuffle(rng);
}
