use super::*;
use crate::bench::{gen_counter_game, CounterGameSpec};
use crate::besteffort::{synth, synth_symbolic_compositional, Algorithm, Problem, Verdict};
use crate::dfa::translate;
use crate::ltlf::Formula;

fn counter(n: usize, k: usize) -> Problem {
    gen_counter_game(CounterGameSpec::new(n, k).unwrap()).unwrap()
}

fn wide() -> ValidationBounds {
    ValidationBounds { max_states: 64, ..ValidationBounds::default() }
}

#[test]
fn eventually_agent_sets_y_first() {
    let p = Problem::parse("true", "F y", Partition::new(["x"], ["y"]).unwrap()).unwrap();
    let s = synth_symbolic_compositional(&p).unwrap();
    let t = induce(&s);
    assert_eq!(t.output(), vec![true]);
    assert_eq!(t.steps(), 0);
}

#[test]
fn reset_reproduces_outputs() {
    let s = synth_symbolic_compositional(&counter(2, 2)).unwrap();
    let inputs = [1, 1, 0, 1, 0, 0];
    let mut t = induce(&s);
    let a = simulate(&mut t, &inputs);
    t.reset();
    assert_eq!(t.state(), s.arena.initial());
    let b = simulate(&mut t, &inputs);
    assert_eq!(a, b);
}

#[test]
fn outputs_depend_on_state_only() {
    let s = synth_symbolic_compositional(&counter(2, 1)).unwrap();
    let mut seen: std::collections::HashMap<Vec<bool>, Vec<bool>> = Default::default();
    for seq in [[0, 0, 1, 1], [1, 0, 0, 1], [1, 1, 1, 0], [0, 1, 0, 1]] {
        let mut t = induce(&s);
        for &x in &seq {
            let out = t.output();
            assert_eq!(seen.entry(t.state().to_vec()).or_insert_with(|| out.clone()), &out);
            t.step(x);
        }
    }
}

#[test]
fn one_bit_counter_is_full_after_one_granted_request() {
    let s = synth_symbolic_compositional(&counter(1, 1)).unwrap();
    let mut t = induce(&s);
    let rec = simulate(&mut t, &[1, 0]);
    let grant = s.space.partition().lookup("grant").unwrap();
    assert!(rec.trace[0].contains(grant));
    assert!(rec.flags[1].conjunction);
    assert_eq!(rec.states.len(), rec.trace.len() + 1);
}

#[test]
fn no_request_keeps_not_env_flag_up() {
    let s = synth_symbolic_compositional(&counter(1, 1)).unwrap();
    let mut t = induce(&s);
    let rec = simulate(&mut t, &[0, 0, 0, 1, 0]);
    for i in 0..3 {
        assert!(rec.flags[i].not_env && rec.flags[i].implication && !rec.flags[i].conjunction);
    }
    assert!(!rec.flags[3].not_env);
}

#[test]
fn empty_input_leaves_initial_state() {
    let s = synth_symbolic_compositional(&counter(1, 1)).unwrap();
    let mut t = induce(&s);
    let rec = simulate(&mut t, &[]);
    assert_eq!(rec.states, vec![s.arena.initial().to_vec()]);
    assert!(rec.trace.is_empty() && rec.flags.is_empty());
    assert_eq!(rec.pending_output, t.output());
}

#[test]
fn flags_match_explicit_automata() {
    let p = counter(2, 2);
    let e = translate(&p.env_spec, &p.partition).unwrap();
    let g = translate(&p.goal, &p.partition).unwrap();
    for alg in Algorithm::ALL {
        let s = synth(&p, alg).unwrap();
        for seq in [vec![1, 1, 0, 1], vec![0, 1, 1, 1, 1], vec![1, 0, 0]] {
            let mut t = induce(&s);
            let rec = simulate(&mut t, &seq);
            for i in 0..rec.trace.len() {
                let prefix = &rec.trace[..=i];
                let (fe, fg) = (e.accepts(prefix).unwrap(), g.accepts(prefix).unwrap());
                let f = rec.flags[i];
                assert_eq!(f.conjunction, fe && fg, "alg {alg} step {i}");
                assert_eq!(f.not_env, !fe);
                assert_eq!(f.implication, !fe || fg);
            }
        }
    }
}

#[test]
fn play_is_consistent_with_strategy_and_inputs() {
    let s = synth_symbolic_compositional(&counter(2, 3)).unwrap();
    let p = s.space.partition().clone();
    let inputs = [1, 1, 1, 0, 0];
    let mut t = induce(&s);
    let rec = simulate(&mut t, &inputs);
    for (i, &l) in rec.trace.iter().enumerate() {
        let (x, y) = p.split(l);
        assert_eq!(x, inputs[i]);
        let expect: u32 = s.output(&rec.states[i]).iter().enumerate().map(|(j, &b)| (b as u32) << j).sum();
        assert_eq!(y, expect);
        assert_eq!(rec.states[i + 1], s.arena.successor(&s.space, &rec.states[i], l));
    }
    // requests granted at 0, 1 and 2 show up as 11 at instant 3
    assert!(!rec.flags[2].conjunction && rec.flags[3].conjunction);
}

#[test]
fn jsonl_has_one_line_per_step() {
    let s = synth_symbolic_compositional(&counter(1, 1)).unwrap();
    let mut t = induce(&s);
    let rec = simulate(&mut t, &[1, 0, 1]);
    let text = rec.to_jsonl(s.space.partition());
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    let v: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(v["env"][0], "add");
    assert_eq!(v["step"], 0);
}

#[test]
fn dot_export_lists_reachable_states() {
    let s = synth_symbolic_compositional(&counter(1, 1)).unwrap();
    let dot = transducer_dot(&s);
    assert!(dot.starts_with("digraph transducer"));
    assert!(dot.contains("init -> q0"));
    assert!(dot.contains(" / "));
}

#[test]
fn realizable_instance_wins_against_all() {
    let p = counter(1, 1);
    let s = synth_symbolic_compositional(&p).unwrap();
    let r = validate_with(&p, &s, &wide()).unwrap();
    assert!(r.env_enforceable);
    assert!(r.wins_against_all);
    assert!(r.undominated);
}

#[test]
fn unrealizable_counter_is_undominated() {
    let p = counter(2, 1);
    for alg in Algorithm::ALL {
        let s = synth(&p, alg).unwrap();
        assert_eq!(s.verdict, Verdict::BestEffortOnly);
        let r = validate_with(&p, &s, &wide()).unwrap();
        assert!(!r.wins_against_all);
        assert!(r.undominated, "alg {alg}: {r:?}");
        assert!(r.strategies_checked > 0);
    }
}

#[test]
fn refusing_to_grant_is_dominated() {
    let p = counter(1, 1);
    let s = synth_symbolic_compositional(&p).unwrap();
    let arena = ExplicitArena::with_strategy(&p, &s, &wide()).unwrap();
    let kappa = arena.strategy_table(&s);
    let refuse = vec![0; arena.num_states()];
    assert_eq!(dominates(&arena, &kappa, &refuse), Dominance::Strict);
    assert_eq!(dominates(&arena, &refuse, &kappa), Dominance::NotDominating);
    assert_eq!(dominates(&arena, &kappa, &kappa), Dominance::Equivalent);
    let r = validate_table(&arena, &refuse, &wide()).unwrap();
    assert!(!r.undominated);
    let w = r.dominating_witness.unwrap();
    assert_eq!(dominates(&arena, &w, &refuse), Dominance::Strict);
}

#[test]
fn bounds_are_enforced() {
    let p = counter(2, 2);
    let s = synth_symbolic_compositional(&p).unwrap();
    let tight = ValidationBounds { max_states: 2, ..ValidationBounds::default() };
    assert!(matches!(validate_with(&p, &s, &tight), Err(crate::Error::BoundsExceeded(_))));
    let part = Partition::new(["a", "b", "c"], ["y"]).unwrap();
    let q = Problem::new(Formula::True, Formula::True, part).unwrap();
    assert!(matches!(ExplicitArena::new(&q, &ValidationBounds::default()), Err(crate::Error::BoundsExceeded(_))));
}

#[test]
fn unenforceable_environment_makes_dominance_vacuous() {
    let part = Partition::new(["x"], ["y"]).unwrap();
    let p = Problem::parse("F y", "F x", part).unwrap();
    let s = synth_symbolic_compositional(&p).unwrap();
    let r = validate_with(&p, &s, &wide()).unwrap();
    assert!(!r.env_enforceable);
    assert!(r.wins_against_all && r.undominated);
}
