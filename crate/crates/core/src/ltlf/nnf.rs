use super::Formula;

pub(super) fn to_nnf(f: &Formula) -> Formula {
    push(f, false)
}

fn push(f: &Formula, neg: bool) -> Formula {
    use Formula::*;
    match (f, neg) {
        (True, false) | (False, true) => True,
        (True, true) | (False, false) => False,
        (Atom(p), false) => Atom(*p),
        (Atom(p), true) => Formula::not(Atom(*p)),
        (Not(a), _) => push(a, !neg),
        (And(a, b), false) => Formula::and(push(a, false), push(b, false)),
        (And(a, b), true) => Formula::or(push(a, true), push(b, true)),
        (Or(a, b), false) => Formula::or(push(a, false), push(b, false)),
        (Or(a, b), true) => Formula::and(push(a, true), push(b, true)),
        (Implies(a, b), false) => Formula::or(push(a, true), push(b, false)),
        (Implies(a, b), true) => Formula::and(push(a, false), push(b, true)),
        (Next(a), false) => Formula::next(push(a, false)),
        (Next(a), true) => Formula::weak_next(push(a, true)),
        (WeakNext(a), false) => Formula::weak_next(push(a, false)),
        (WeakNext(a), true) => Formula::next(push(a, true)),
        (Until(a, b), false) => Formula::until(push(a, false), push(b, false)),
        (Until(a, b), true) => Formula::release(push(a, true), push(b, true)),
        (Release(a, b), false) => Formula::release(push(a, false), push(b, false)),
        (Release(a, b), true) => Formula::until(push(a, true), push(b, true)),
        (Eventually(a), false) => Formula::eventually(push(a, false)),
        (Eventually(a), true) => Formula::always(push(a, true)),
        (Always(a), false) => Formula::always(push(a, false)),
        (Always(a), true) => Formula::eventually(push(a, true)),
    }
}

#[cfg(test)]
mod tests {
    use crate::ltlf::{evaluate, parse, Letter, Partition};

    #[test]
    fn duality_examples() {
        let p = Partition::new(["a"], ["b"]).unwrap();
        let nnf = |s: &str| parse(s, &p).unwrap().to_nnf();
        assert_eq!(nnf("!F a"), parse("G !a", &p).unwrap());
        assert_eq!(nnf("!X a"), parse("WX !a", &p).unwrap());
        assert_eq!(nnf("!(a U b)"), parse("!a R !b", &p).unwrap());
        assert_eq!(nnf("!(a -> b)"), parse("a && !b", &p).unwrap());
    }

    #[test]
    fn negated_until_matches_release_on_short_traces() {
        let p = Partition::new(["a"], ["b"]).unwrap();
        let f = parse("!(a U b)", &p).unwrap();
        let g = f.to_nnf();
        assert!(g.is_nnf() && !f.is_nnf());
        for len in 1..=4 {
            for code in 0..(1usize << (2 * len)) {
                let trace: Vec<Letter> =
                    (0..len).map(|i| Letter((code >> (2 * i) & 3) as u32)).collect();
                assert_eq!(evaluate(&f, &trace, 0), evaluate(&g, &trace, 0));
            }
        }
    }
}
