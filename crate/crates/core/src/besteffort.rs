//! Best-effort synthesis pipelines.
//!
//! All three pipelines end on the same arena shape: a symbolic transition
//! system with three final predicates, in this order:
//!
//! | index | objective |
//! |-------|-----------|
//! | [`OBJ_IMPLICATION`] | `E -> φ` |
//! | [`OBJ_NOT_ENV`] | `¬E` |
//! | [`OBJ_CONJUNCTION`] | `E ∧ φ` |
//!
//! They differ in how that arena is built. The monolithic pipeline
//! translates all three formulas; the explicit compositional one translates
//! `E` and `φ` and derives the rest with complement and intersection; the
//! symbolic compositional one encodes `E` and `φ` once and lifts the final
//! predicates over their product.
//!
//! The tail is shared: an adversarial game on `E -> φ` gives `W_ag` and
//! `τ`, an adversarial game on `¬E` gives the environment region, the arena
//! is restricted to that region, and a cooperative game on `E ∧ φ` gives
//! `γ`. The agent plays `τ` inside `W_ag` and `γ` elsewhere.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::bdd::Bdd;
use crate::dfa::{translate_with, ExplicitDfa, TranslateOptions};
use crate::error::{Error, Result};
use crate::games::{boolean_synthesis, solve_region, Mode};
use crate::ltlf::{parse, Formula, Partition};
use crate::symbolic::{bits_for, lift_finals, sym_product, SymbolicDfa, SymbolicSpace};

pub const OBJ_IMPLICATION: usize = 0;
pub const OBJ_NOT_ENV: usize = 1;
pub const OBJ_CONJUNCTION: usize = 2;

/// An environment specification `E` and a goal `φ` over one partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    pub env_spec: Formula,
    pub goal: Formula,
    pub partition: Partition,
}

impl Problem {
    pub fn new(env_spec: Formula, goal: Formula, partition: Partition) -> Result<Self> {
        for f in [&env_spec, &goal] {
            if let Some(p) = f.atoms().into_iter().find(|p| p.index() >= partition.num_props()) {
                return Err(Error::UndeclaredAtom(format!("proposition #{}", p.0)));
            }
        }
        Ok(Problem { env_spec, goal, partition })
    }

    pub fn parse(env_spec: &str, goal: &str, partition: Partition) -> Result<Self> {
        let e = parse(env_spec, &partition)?;
        let g = parse(goal, &partition)?;
        Problem::new(e, g, partition)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Algorithm {
    Monolithic,
    ExplicitCompositional,
    SymbolicCompositional,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] =
        [Algorithm::Monolithic, Algorithm::ExplicitCompositional, Algorithm::SymbolicCompositional];

    /// 1, 2 or 3.
    pub fn number(self) -> u8 {
        match self {
            Algorithm::Monolithic => 1,
            Algorithm::ExplicitCompositional => 2,
            Algorithm::SymbolicCompositional => 3,
        }
    }

    pub fn from_number(n: u8) -> Option<Algorithm> {
        Algorithm::ALL.into_iter().find(|a| a.number() == n)
    }
}

impl From<Algorithm> for u8 {
    fn from(a: Algorithm) -> u8 {
        a.number()
    }
}

impl TryFrom<u8> for Algorithm {
    type Error = String;
    fn try_from(n: u8) -> std::result::Result<Self, String> {
        Algorithm::from_number(n).ok_or_else(|| format!("no algorithm {n}"))
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim().trim_start_matches("alg");
        s.parse::<u8>()
            .ok()
            .and_then(Algorithm::from_number)
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected 1, 2 or 3)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Realizable,
    BestEffortOnly,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Realizable => "realizable",
            Verdict::BestEffortOnly => "best-effort-only",
        })
    }
}

/// Wall-clock time per pipeline stage.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StageTimes {
    /// Formula-to-automaton translation.
    pub translate: Duration,
    /// Explicit automaton algebra, encoding and symbolic product.
    pub product: Duration,
    /// Both adversarial games.
    pub adversarial: Duration,
    /// Arena restriction and the cooperative game.
    pub cooperative: Duration,
    /// Strategy extraction and combination.
    pub extract: Duration,
}

impl StageTimes {
    pub fn total(&self) -> Duration {
        self.translate + self.product + self.adversarial + self.cooperative + self.extract
    }

    pub fn to_ms(&self) -> TimingsMs {
        let ms = |d: Duration| d.as_secs_f64() * 1e3;
        TimingsMs {
            translate: ms(self.translate),
            product: ms(self.product),
            adversarial: ms(self.adversarial),
            cooperative: ms(self.cooperative),
            extract: ms(self.extract),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TimingsMs {
    pub translate: f64,
    pub product: f64,
    pub adversarial: f64,
    pub cooperative: f64,
    pub extract: f64,
}

/// Serialized summary of one pipeline run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthRecord {
    pub algorithm: Algorithm,
    pub verdict: Verdict,
    pub state_vars: usize,
    pub iterations_adversarial: usize,
    pub iterations_cooperative: usize,
    pub timings_by_stage_ms: TimingsMs,
}

#[derive(Clone, Debug, Default)]
pub struct SynthOptions {
    /// Limits for every translation; its deadline is overridden by
    /// `deadline` when that is set.
    pub translate: TranslateOptions,
    pub deadline: Option<Instant>,
}

impl SynthOptions {
    pub fn with_timeout(timeout: Duration) -> Self {
        SynthOptions { deadline: Some(Instant::now() + timeout), ..SynthOptions::default() }
    }

    fn translate_opts(&self) -> TranslateOptions {
        TranslateOptions { deadline: self.deadline.or(self.translate.deadline), ..self.translate.clone() }
    }
}

/// Result of a pipeline: the arena, both regions, `τ`, `γ` and their
/// combination `κ`. Every BDD lives in `space`.
#[derive(Debug)]
pub struct BestEffortStrategy {
    pub algorithm: Algorithm,
    pub space: SymbolicSpace,
    /// Unrestricted arena with the three objective predicates.
    pub arena: SymbolicDfa,
    /// `W_ag` for `E -> φ`.
    pub adversarial_region: Bdd,
    /// States from which the environment avoids `¬E` forever.
    pub env_region: Bdd,
    /// Cooperative winning region of the restricted arena.
    pub cooperative_region: Bdd,
    pub tau: Vec<Bdd>,
    pub gamma: Vec<Bdd>,
    pub kappa: Vec<Bdd>,
    pub verdict: Verdict,
    pub iterations_adversarial: usize,
    pub iterations_cooperative: usize,
    pub times: StageTimes,
    /// Formula-to-automaton translations performed.
    pub translations: usize,
    /// States of every explicit automaton that was encoded.
    pub encoded_states: Vec<usize>,
    pub warnings: Vec<String>,
}

impl BestEffortStrategy {
    /// Agent move at a state, one value per agent proposition.
    pub fn output(&self, state: &[bool]) -> Vec<bool> {
        self.kappa.iter().map(|&f| self.arena.holds(&self.space, f, state)).collect()
    }

    pub fn tau_output(&self, state: &[bool]) -> Vec<bool> {
        self.tau.iter().map(|&f| self.arena.holds(&self.space, f, state)).collect()
    }

    pub fn gamma_output(&self, state: &[bool]) -> Vec<bool> {
        self.gamma.iter().map(|&f| self.arena.holds(&self.space, f, state)).collect()
    }

    pub fn in_adversarial_region(&self, state: &[bool]) -> bool {
        self.arena.holds(&self.space, self.adversarial_region, state)
    }

    pub fn record(&self) -> SynthRecord {
        SynthRecord {
            algorithm: self.algorithm,
            verdict: self.verdict,
            state_vars: self.arena.num_state_vars(),
            iterations_adversarial: self.iterations_adversarial,
            iterations_cooperative: self.iterations_cooperative,
            timings_by_stage_ms: self.times.to_ms(),
        }
    }
}

pub fn synth(problem: &Problem, algorithm: Algorithm) -> Result<BestEffortStrategy> {
    synth_with(problem, algorithm, &SynthOptions::default())
}

pub fn synth_with(problem: &Problem, algorithm: Algorithm, opts: &SynthOptions) -> Result<BestEffortStrategy> {
    match algorithm {
        Algorithm::Monolithic => synth_monolithic_with(problem, opts),
        Algorithm::ExplicitCompositional => synth_explicit_compositional_with(problem, opts),
        Algorithm::SymbolicCompositional => synth_symbolic_compositional_with(problem, opts),
    }
}

pub fn synth_monolithic(problem: &Problem) -> Result<BestEffortStrategy> {
    synth_monolithic_with(problem, &SynthOptions::default())
}

pub fn synth_explicit_compositional(problem: &Problem) -> Result<BestEffortStrategy> {
    synth_explicit_compositional_with(problem, &SynthOptions::default())
}

pub fn synth_symbolic_compositional(problem: &Problem) -> Result<BestEffortStrategy> {
    synth_symbolic_compositional_with(problem, &SynthOptions::default())
}

struct Arena {
    space: SymbolicSpace,
    arena: SymbolicDfa,
    times: StageTimes,
    translations: usize,
    encoded_states: Vec<usize>,
}

fn new_space(problem: &Problem, opts: &SynthOptions) -> SymbolicSpace {
    let mut space = SymbolicSpace::new(&problem.partition);
    space.deadline = opts.deadline;
    space
}

/// Encodes three objective automata and takes their product.
fn encode_three(problem: &Problem, opts: &SynthOptions, dfas: [ExplicitDfa; 3]) -> Result<(SymbolicSpace, SymbolicDfa)> {
    let mut space = new_space(problem, opts);
    let mut parts = Vec::with_capacity(3);
    for (d, prefix) in dfas.iter().zip(["zi", "zn", "zc"]) {
        parts.push(space.encode(d, prefix)?);
    }
    let arena = sym_product(&mut space, &parts)?;
    Ok((space, arena))
}

pub fn synth_monolithic_with(problem: &Problem, opts: &SynthOptions) -> Result<BestEffortStrategy> {
    let t0 = Instant::now();
    let topts = opts.translate_opts();
    let (e, g) = (&problem.env_spec, &problem.goal);
    let p = &problem.partition;
    let d_impl = translate_with(&Formula::implies(e.clone(), g.clone()), p, &topts)?;
    let d_not = translate_with(&Formula::not(e.clone()), p, &topts)?;
    let d_conj = translate_with(&Formula::and(e.clone(), g.clone()), p, &topts)?;
    let mut times = StageTimes { translate: t0.elapsed(), ..StageTimes::default() };

    let t1 = Instant::now();
    let encoded_states = vec![d_impl.num_states(), d_not.num_states(), d_conj.num_states()];
    let (space, arena) = encode_three(problem, opts, [d_impl, d_not, d_conj])?;
    times.product = t1.elapsed();
    let a = Arena { space, arena, times, translations: 3, encoded_states };
    solve_arena(Algorithm::Monolithic, a)
}

pub fn synth_explicit_compositional_with(problem: &Problem, opts: &SynthOptions) -> Result<BestEffortStrategy> {
    let t0 = Instant::now();
    let topts = opts.translate_opts();
    let d_env = translate_with(&problem.env_spec, &problem.partition, &topts)?;
    let d_goal = translate_with(&problem.goal, &problem.partition, &topts)?;
    let mut times = StageTimes { translate: t0.elapsed(), ..StageTimes::default() };

    let t1 = Instant::now();
    let d_impl = d_env.intersect(&d_goal.complement())?.complement();
    let d_not = d_env.complement();
    let d_conj = d_env.intersect(&d_goal)?;
    let encoded_states = vec![d_impl.num_states(), d_not.num_states(), d_conj.num_states()];
    let (space, arena) = encode_three(problem, opts, [d_impl, d_not, d_conj])?;
    times.product = t1.elapsed();
    let a = Arena { space, arena, times, translations: 2, encoded_states };
    solve_arena(Algorithm::ExplicitCompositional, a)
}

pub fn synth_symbolic_compositional_with(problem: &Problem, opts: &SynthOptions) -> Result<BestEffortStrategy> {
    let t0 = Instant::now();
    let topts = opts.translate_opts();
    let d_env = translate_with(&problem.env_spec, &problem.partition, &topts)?;
    let d_goal = translate_with(&problem.goal, &problem.partition, &topts)?;
    let mut times = StageTimes { translate: t0.elapsed(), ..StageTimes::default() };

    let t1 = Instant::now();
    // The product's initial state stands for the empty prefix and must not
    // count as reaching an objective. Excluding it is exact once no nonempty
    // word leads back to it, which holds as soon as one component's initial
    // state has no incoming edges.
    let (d_env, d_goal) = if d_env.has_incoming(d_env.initial()) && d_goal.has_incoming(d_goal.initial()) {
        let grows = |d: &ExplicitDfa| bits_for(d.num_states() + 1) > bits_for(d.num_states());
        if grows(&d_env) && !grows(&d_goal) {
            (d_env, d_goal.separate_initial())
        } else {
            (d_env.separate_initial(), d_goal)
        }
    } else {
        (d_env, d_goal)
    };
    let encoded_states = vec![d_env.num_states(), d_goal.num_states()];
    let mut space = new_space(problem, opts);
    let s_env = space.encode(&d_env, "ze")?;
    let s_goal = space.encode(&d_goal, "zg")?;
    let product = sym_product(&mut space, &[s_env, s_goal])?;
    let lifted = lift_finals(&mut space.mgr, product.finals()[0], product.finals()[1]);
    let init = product.initial_bdd(&mut space);
    let not_init = space.mgr.not(init);
    let implication = space.mgr.and(lifted.implication, not_init);
    let not_env = space.mgr.and(lifted.not_env, not_init);
    let arena = product.with_finals(vec![implication, not_env, lifted.conjunction]);
    times.product = t1.elapsed();
    let a = Arena { space, arena, times, translations: 2, encoded_states };
    solve_arena(Algorithm::SymbolicCompositional, a)
}

fn timeout_check(space: &SymbolicSpace) -> Result<()> {
    if space.timed_out() {
        Err(Error::Timeout)
    } else {
        Ok(())
    }
}

fn solve_arena(algorithm: Algorithm, a: Arena) -> Result<BestEffortStrategy> {
    let Arena { mut space, arena, mut times, translations, encoded_states } = a;
    let finals = arena.finals().to_vec();

    let t = Instant::now();
    let (w_adv, t_adv, iterations_adversarial) =
        solve_region(&mut space, &arena, finals[OBJ_IMPLICATION], Mode::Adversarial, &[]);
    timeout_check(&space)?;
    let (w_not, _, _) = solve_region(&mut space, &arena, finals[OBJ_NOT_ENV], Mode::Adversarial, &[w_adv, t_adv]);
    timeout_check(&space)?;
    let outside = space.mgr.not(w_not);
    let env_region = space.mgr.and(outside, arena.domain());
    times.adversarial = t.elapsed();

    let t = Instant::now();
    let restricted = arena.restrict_domain(&mut space, env_region);
    let mut keep = arena.roots();
    keep.extend([w_adv, t_adv, env_region]);
    let (w_coop, t_coop, iterations_cooperative) = solve_region(
        &mut space,
        &restricted,
        restricted.finals()[OBJ_CONJUNCTION],
        Mode::Cooperative,
        &keep,
    );
    timeout_check(&space)?;
    times.cooperative = t.elapsed();

    let t = Instant::now();
    let ys = space.y_vars();
    let tau = boolean_synthesis(&mut space.mgr, t_adv, w_adv, &ys);
    let gamma = boolean_synthesis(&mut space.mgr, t_coop, w_coop, &ys);
    let kappa = combine(&mut space, &tau, &gamma, w_adv);
    times.extract = t.elapsed();

    let verdict =
        if arena.holds(&space, w_adv, arena.initial()) { Verdict::Realizable } else { Verdict::BestEffortOnly };
    let mut warnings = Vec::new();
    if !arena.holds(&space, env_region, arena.initial()) {
        warnings.push(
            "the environment specification is not enforceable by the environment from the initial state"
                .to_string(),
        );
    }
    Ok(BestEffortStrategy {
        algorithm,
        space,
        arena,
        adversarial_region: w_adv,
        env_region,
        cooperative_region: w_coop,
        tau,
        gamma,
        kappa,
        verdict,
        iterations_adversarial,
        iterations_cooperative,
        times,
        translations,
        encoded_states,
        warnings,
    })
}

/// `κ_y = τ_y` inside `region`, `γ_y` outside it.
pub fn combine(space: &mut SymbolicSpace, tau: &[Bdd], gamma: &[Bdd], region: Bdd) -> Vec<Bdd> {
    tau.iter().zip(gamma).map(|(&t, &g)| space.mgr.ite(region, t, g)).collect()
}

/// Plain reactive synthesis of `E -> φ`, used as a timing baseline.
#[derive(Debug)]
pub struct ReactiveOutcome {
    pub verdict: Verdict,
    pub state_vars: usize,
    pub iterations: usize,
    pub times: StageTimes,
}

pub fn synth_reactive(problem: &Problem, opts: &SynthOptions) -> Result<ReactiveOutcome> {
    let t0 = Instant::now();
    let f = Formula::implies(problem.env_spec.clone(), problem.goal.clone());
    let d = translate_with(&f, &problem.partition, &opts.translate_opts())?;
    let mut times = StageTimes { translate: t0.elapsed(), ..StageTimes::default() };

    let t = Instant::now();
    let mut space = new_space(problem, opts);
    let arena = space.encode(&d, "z")?;
    times.product = t.elapsed();

    let t = Instant::now();
    let (w, rel, iterations) = solve_region(&mut space, &arena, arena.final_pred(), Mode::Adversarial, &[]);
    timeout_check(&space)?;
    times.adversarial = t.elapsed();

    let t = Instant::now();
    let ys = space.y_vars();
    let _tau = boolean_synthesis(&mut space.mgr, rel, w, &ys);
    times.extract = t.elapsed();
    let verdict = if arena.holds(&space, w, arena.initial()) { Verdict::Realizable } else { Verdict::BestEffortOnly };
    Ok(ReactiveOutcome { verdict, state_vars: arena.num_state_vars(), iterations, times })
}
