//! Reachability games on symbolic transition systems.
//!
//! The agent moves first: in state `Z` it picks `Y`, then the environment
//! picks `X`, and the play moves to `η(X, Y, Z)`. Winning regions are least
//! fixpoints seeded with the target; positional strategies come out of the
//! accumulated relation `t(Z, Y)` by Boolean synthesis.

use crate::bdd::{Bdd, BddManager, Var};
use crate::symbolic::{SymbolicDfa, SymbolicSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// The agent wins against every environment move.
    Adversarial,
    /// The agent wins with the environment's help.
    Cooperative,
}

/// Winning region, strategy relation and an extracted positional strategy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameSolution {
    /// States from which the agent wins, over `Z`.
    pub winning: Bdd,
    /// Winning state/move pairs, over `Z ∪ Y`.
    pub relation: Bdd,
    /// One function over `Z` per agent variable, in partition order. Outside
    /// the winning region every output is false.
    pub strategy: Vec<Bdd>,
    pub iterations: usize,
}

impl GameSolution {
    /// Agent move chosen at a state, as agent-bit values in partition order.
    pub fn output(&self, space: &SymbolicSpace, arena: &SymbolicDfa, state: &[bool]) -> Vec<bool> {
        self.strategy.iter().map(|&f| arena.holds(space, f, state)).collect()
    }
}

pub fn solve_adversarial(space: &mut SymbolicSpace, arena: &SymbolicDfa, target: Bdd) -> GameSolution {
    solve(space, arena, target, Mode::Adversarial, &[])
}

pub fn solve_cooperative(space: &mut SymbolicSpace, arena: &SymbolicDfa, target: Bdd) -> GameSolution {
    solve(space, arena, target, Mode::Cooperative, &[])
}

/// States from which the environment keeps the play out of `target`
/// forever: the complement of the agent's adversarial region within the
/// domain.
pub fn env_winning_region(space: &mut SymbolicSpace, arena: &SymbolicDfa, target: Bdd) -> Bdd {
    let sol = solve_region(space, arena, target, Mode::Adversarial, &[]);
    let lose = space.mgr.not(sol.0);
    space.mgr.and(lose, arena.domain())
}

/// Solves a game and extracts the strategy. `keep` lists handles the caller
/// still needs if a garbage collection runs between iterations.
pub fn solve(
    space: &mut SymbolicSpace,
    arena: &SymbolicDfa,
    target: Bdd,
    mode: Mode,
    keep: &[Bdd],
) -> GameSolution {
    let (winning, relation, iterations) = solve_region(space, arena, target, mode, keep);
    let ys = space.y_vars();
    let strategy = boolean_synthesis(&mut space.mgr, relation, winning, &ys);
    GameSolution { winning, relation, strategy, iterations }
}

/// Fixpoint only, without strategy extraction: `(w, t, iterations)`.
/// When the space's deadline passes the loop stops early and the partial
/// region is returned; callers check [`SymbolicSpace::timed_out`].
pub fn solve_region(
    space: &mut SymbolicSpace,
    arena: &SymbolicDfa,
    target: Bdd,
    mode: Mode,
    keep: &[Bdd],
) -> (Bdd, Bdd, usize) {
    let dom = arena.domain();
    let mut w = space.mgr.and(target, dom);
    let mut t = w;
    if w == dom {
        return (w, t, 0);
    }
    let subst: Vec<(Var, Bdd)> =
        arena.state_vars().iter().copied().zip(arena.eta().iter().copied()).collect();
    let (x_cube, y_cube) = (space.x_cube(), space.y_cube());
    let mut iterations = 0;
    loop {
        if space.check_deadline() {
            break;
        }
        let mgr = &mut space.mgr;
        let next = mgr.vector_compose(w, &subst);
        let pre = match mode {
            Mode::Adversarial => mgr.forall_cube(next, x_cube),
            Mode::Cooperative => mgr.exists_cube(next, x_cube),
        };
        let outside = mgr.not(w);
        let fresh = mgr.and(outside, dom);
        let fresh = mgr.and(fresh, pre);
        let t_next = mgr.or(t, fresh);
        let w_next = mgr.exists_cube(t_next, y_cube);
        iterations += 1;
        let done = w_next == w;
        t = t_next;
        w = w_next;
        if done {
            break;
        }
        let mut roots = arena.roots();
        roots.extend([w, t, target]);
        roots.extend(keep);
        space.mgr.maybe_collect(&roots);
    }
    (w, t, iterations)
}

/// Extracts one function per output from a relation over inputs and
/// `outputs`. Outputs are fixed in order; each is true only where false
/// admits no completion. Results are masked to `region`.
pub fn boolean_synthesis(mgr: &mut BddManager, relation: Bdd, region: Bdd, outputs: &[Var]) -> Vec<Bdd> {
    let mut rel = relation;
    let mut out = Vec::with_capacity(outputs.len());
    for (j, &y) in outputs.iter().enumerate() {
        let rest = mgr.cube(&outputs[j + 1..]);
        let proj = mgr.exists_cube(rel, rest);
        let low = mgr.cofactor(proj, y, false);
        let choice = mgr.not(low);
        rel = mgr.compose(rel, y, choice);
        out.push(choice);
    }
    out.into_iter().map(|f| mgr.and(f, region)).collect()
}
