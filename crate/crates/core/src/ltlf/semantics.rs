//! Finite-trace semantics, written directly from the inductive definition.
//!
//! This is the reference the automata are tested against, so it evaluates
//! every clause literally (`∃j. ... ∀k < j. ...`) instead of using the
//! expansion laws the translation relies on.

use super::{Formula, Letter};
use crate::error::{Error, Result};

/// Returns whether `trace, instant ⊨ formula`.
pub fn evaluate(formula: &Formula, trace: &[Letter], instant: usize) -> Result<bool> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    if instant >= trace.len() {
        return Err(Error::InstantOutOfRange { instant, len: trace.len() });
    }
    Ok(truth_table(formula, trace)[instant])
}

/// Truth value of `formula` at every instant of a nonempty trace.
pub(crate) fn truth_table(formula: &Formula, trace: &[Letter]) -> Vec<bool> {
    use Formula::*;
    let n = trace.len();
    let last = n - 1;
    match formula {
        True => vec![true; n],
        False => vec![false; n],
        Atom(p) => trace.iter().map(|l| l.contains(*p)).collect(),
        Not(a) => truth_table(a, trace).into_iter().map(|v| !v).collect(),
        And(a, b) => zip(a, b, trace, |x, y| x && y),
        Or(a, b) => zip(a, b, trace, |x, y| x || y),
        Implies(a, b) => zip(a, b, trace, |x, y| !x || y),
        Next(a) => {
            let v = truth_table(a, trace);
            (0..n).map(|i| i < last && v[i + 1]).collect()
        }
        WeakNext(a) => {
            let v = truth_table(a, trace);
            (0..n).map(|i| i == last || v[i + 1]).collect()
        }
        Until(a, b) => {
            let (va, vb) = (truth_table(a, trace), truth_table(b, trace));
            (0..n)
                .map(|i| (i..n).any(|j| vb[j] && (i..j).all(|k| va[k])))
                .collect()
        }
        Release(a, b) => {
            // dual of Until: every j either satisfies b or is preceded
            // (from i) by some a
            let (va, vb) = (truth_table(a, trace), truth_table(b, trace));
            (0..n)
                .map(|i| (i..n).all(|j| vb[j] || (i..j).any(|k| va[k])))
                .collect()
        }
        Eventually(a) => {
            let v = truth_table(a, trace);
            (0..n).map(|i| (i..n).any(|j| v[j])).collect()
        }
        Always(a) => {
            let v = truth_table(a, trace);
            (0..n).map(|i| (i..n).all(|j| v[j])).collect()
        }
    }
}

fn zip(a: &Formula, b: &Formula, trace: &[Letter], op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    let va = truth_table(a, trace);
    let vb = truth_table(b, trace);
    va.into_iter().zip(vb).map(|(x, y)| op(x, y)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltlf::{parse, Partition, Prop};

    fn ab() -> Partition {
        Partition::new(["a"], ["b"]).unwrap()
    }

    const A: Letter = Letter(0b01);
    const B: Letter = Letter(0b10);
    const NONE: Letter = Letter(0);

    #[test]
    fn atom_membership() {
        assert!(evaluate(&Formula::Atom(Prop(0)), &[A], 0).unwrap());
    }

    #[test]
    fn strong_next_fails_at_last_instant() {
        assert!(!evaluate(&Formula::next(Formula::Atom(Prop(0))), &[A], 0).unwrap());
    }

    #[test]
    fn until_over_three_instants() {
        let f = parse("a U b", &ab()).unwrap();
        assert!(evaluate(&f, &[A, A, B], 0).unwrap());
        assert!(!evaluate(&f, &[A, NONE, B], 0).unwrap());
        assert!(!evaluate(&f, &[A, A, A], 0).unwrap());
        assert!(evaluate(&f, &[A, NONE, B], 2).unwrap());
    }

    #[test]
    fn weak_next_holds_at_last_instant() {
        let f = Formula::weak_next(Formula::False);
        assert!(evaluate(&f, &[NONE, NONE], 1).unwrap());
        assert!(!evaluate(&f, &[NONE, NONE], 0).unwrap());
    }

    #[test]
    fn release_and_always() {
        let p = ab();
        let f = parse("a R b", &p).unwrap();
        assert!(evaluate(&f, &[B, B], 0).unwrap());
        assert!(evaluate(&f, &[Letter(0b11), NONE], 0).unwrap());
        assert!(!evaluate(&f, &[B, NONE], 0).unwrap());
        let g = parse("G a", &p).unwrap();
        assert!(evaluate(&g, &[A, A], 0).unwrap());
        assert!(!evaluate(&g, &[A, NONE], 0).unwrap());
    }

    #[test]
    fn range_errors() {
        let f = Formula::True;
        assert_eq!(evaluate(&f, &[], 0), Err(Error::EmptyTrace));
        assert_eq!(evaluate(&f, &[A], 1), Err(Error::InstantOutOfRange { instant: 1, len: 1 }));
    }
}
