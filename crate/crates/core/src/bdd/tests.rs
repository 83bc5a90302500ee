use proptest::prelude::*;

use super::*;

fn manager(n: usize) -> (BddManager, Vec<Var>) {
    let mut m = BddManager::new();
    let vars = (0..n).map(|i| m.new_var(format!("v{i}"))).collect();
    (m, vars)
}

/// Small expression language evaluated independently of the kernel.
#[derive(Clone, Debug)]
enum Expr {
    Const(bool),
    Var(usize),
    Not(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Ite(Box<Expr>, Box<Expr>, Box<Expr>),
}

impl Expr {
    fn eval(&self, row: u32) -> bool {
        match self {
            Expr::Const(b) => *b,
            Expr::Var(i) => row >> i & 1 == 1,
            Expr::Not(a) => !a.eval(row),
            Expr::Bin(op, a, b) => {
                let (x, y) = (a.eval(row), b.eval(row));
                match op {
                    BinOp::And => x && y,
                    BinOp::Or => x || y,
                    BinOp::Xor => x != y,
                    BinOp::Implies => !x || y,
                    BinOp::Iff => x == y,
                }
            }
            Expr::Ite(c, t, e) => {
                if c.eval(row) {
                    t.eval(row)
                } else {
                    e.eval(row)
                }
            }
        }
    }

    fn table(&self, n: usize) -> Vec<bool> {
        (0..1u32 << n).map(|r| self.eval(r)).collect()
    }

    fn build(&self, m: &mut BddManager, vars: &[Var]) -> Bdd {
        match self {
            Expr::Const(b) => Bdd::constant(*b),
            Expr::Var(i) => m.var(vars[*i]),
            Expr::Not(a) => {
                let a = a.build(m, vars);
                m.not(a)
            }
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.build(m, vars), b.build(m, vars));
                m.apply(*op, a, b)
            }
            Expr::Ite(c, t, e) => {
                let (c, t, e) = (c.build(m, vars), t.build(m, vars), e.build(m, vars));
                m.ite(c, t, e)
            }
        }
    }
}

fn expr(nvars: usize) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![any::<bool>().prop_map(Expr::Const), (0..nvars).prop_map(Expr::Var)];
    leaf.prop_recursive(5, 40, 3, |inner| {
        let op = prop_oneof![
            Just(BinOp::And),
            Just(BinOp::Or),
            Just(BinOp::Xor),
            Just(BinOp::Implies),
            Just(BinOp::Iff)
        ];
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Not(Box::new(a))),
            (op, inner.clone(), inner.clone()).prop_map(|(o, a, b)| Expr::Bin(o, Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone(), inner)
                .prop_map(|(c, t, e)| Expr::Ite(Box::new(c), Box::new(t), Box::new(e))),
        ]
    })
}

fn table_of(m: &BddManager, f: Bdd, vars: &[Var]) -> Vec<bool> {
    (0..1u32 << vars.len())
        .map(|r| m.eval(f, |v| r >> vars.iter().position(|&w| w == v).unwrap() & 1 == 1))
        .collect()
}

#[test]
fn contradiction_is_false() {
    let (mut m, v) = manager(1);
    let x = m.var(v[0]);
    let nx = m.not(x);
    assert_eq!(m.and(x, nx), Bdd::FALSE);
}

#[test]
fn ite_of_constants_is_identity() {
    let (mut m, v) = manager(1);
    let x = m.var(v[0]);
    assert_eq!(m.ite(x, Bdd::TRUE, Bdd::FALSE), x);
}

#[test]
fn or_of_three_vars_model_count() {
    let (mut m, v) = manager(3);
    let lits: Vec<Bdd> = v.iter().map(|&x| m.var(x)).collect();
    let f = m.or_all(lits);
    assert_eq!(m.sat_count(f, &v), 7.0);
}

#[test]
fn quantifier_examples() {
    let (mut m, v) = manager(2);
    let (x, y) = (m.var(v[0]), m.var(v[1]));
    assert_eq!(m.exists(x, &[v[0]]), Bdd::TRUE);
    assert_eq!(m.forall(x, &[v[0]]), Bdd::FALSE);
    let imp = m.implies(x, y);
    assert_eq!(m.forall(imp, &[v[0]]), y);
}

#[test]
fn compose_examples() {
    let (mut m, v) = manager(4);
    let (z1, z2, a, b) = (m.var(v[0]), m.var(v[1]), m.var(v[2]), m.var(v[3]));
    let ab = m.and(a, b);
    assert_eq!(m.vector_compose(z1, &[(v[0], ab)]), ab);
    let z_or = m.or(z1, z2);
    assert_eq!(m.vector_compose(z_or, &[(v[0], a), (v[1], a)]), a);
    let z_and = m.and(z1, z2);
    let swapped = m.vector_compose(z_and, &[(v[0], z2), (v[1], z1)]);
    assert_eq!(swapped, z_and);
    let z_imp = m.implies(z1, z2);
    let swapped = m.vector_compose(z_imp, &[(v[0], z2), (v[1], z1)]);
    let expected = m.implies(z2, z1);
    assert_eq!(swapped, expected);
}

#[test]
fn compose_with_variable_above() {
    // substitute a low-level variable by a function of higher ones
    let (mut m, v) = manager(3);
    let (a, c) = (m.var(v[0]), m.var(v[2]));
    let f = m.xor(a, c);
    let b = m.var(v[1]);
    let nb = m.not(b);
    let g = m.vector_compose(f, &[(v[2], nb), (v[0], b)]);
    assert_eq!(g, Bdd::TRUE);
}

#[test]
fn witness_examples() {
    let (mut m, v) = manager(2);
    let y = m.var(v[0]);
    assert_eq!(m.pick_witness(y, &[v[0]]).unwrap(), vec![(v[0], true)]);
    let ny = m.not(y);
    assert_eq!(m.pick_witness(ny, &[v[0]]).unwrap(), vec![(v[0], false)]);
    let y2 = m.var(v[1]);
    let x = m.xor(y, y2);
    let w = m.pick_witness(x, &v).unwrap();
    assert!(m.eval(x, |q| w.iter().find(|(p, _)| *p == q).unwrap().1));
    assert!(m.pick_witness(Bdd::FALSE, &v).is_err());
}

#[test]
fn insertion_keeps_existing_nodes_valid() {
    let (mut m, v) = manager(2);
    let (x, y) = (m.var(v[0]), m.var(v[1]));
    let f = m.xor(x, y);
    let z = m.new_var_at_level("z", 0);
    assert_eq!(m.level_of_var(z), 0);
    assert_eq!(m.order(), vec![z, v[0], v[1]]);
    let zb = m.var(z);
    let g = m.and(zb, f);
    let h = m.exists(g, &[z]);
    assert_eq!(h, f);
    let x2 = m.var(v[0]);
    let y2 = m.var(v[1]);
    assert_eq!(m.xor(x2, y2), f);
}

#[test]
fn garbage_collection_frees_and_reuses() {
    let (mut m, v) = manager(6);
    let lits: Vec<Bdd> = v.iter().map(|&x| m.var(x)).collect();
    let keep = m.and(lits[0], lits[1]);
    m.pin(keep);
    let mut junk = Bdd::FALSE;
    for w in lits.windows(2) {
        let t = m.xor(w[0], w[1]);
        junk = m.or(junk, t);
    }
    let before = m.live_nodes();
    let freed = m.collect(&[]);
    assert!(freed > 0);
    assert!(m.live_nodes() < before);
    // pinned node and literals reachable from it survive
    let (a, b) = (m.var(v[0]), m.var(v[1]));
    let again = m.and(a, b);
    assert_eq!(again, keep);
    let t = table_of(&m, keep, &v);
    assert_eq!(t.iter().filter(|b| **b).count(), 16);
    let _ = junk;
}

#[test]
fn limit_is_reported() {
    let (mut m, v) = manager(8);
    m.set_node_limit(Some(4));
    let lits: Vec<Bdd> = v.iter().map(|&x| m.var(x)).collect();
    let _ = m.or_all(lits);
    assert!(matches!(m.check_limit("test"), Err(Error::ResourceLimit(_))));
}

#[test]
fn expression_and_dot_dumps() {
    let (mut m, v) = manager(2);
    let (x, y) = (m.var(v[0]), m.var(v[1]));
    let f = m.or(x, y);
    assert_eq!(m.to_expr(f), "!v0 & v1 | v0");
    assert_eq!(m.to_expr(Bdd::TRUE), "true");
    assert!(m.to_dot(f).contains("label=\"v1\""));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn canonicity(a in expr(4), b in expr(4)) {
        let (mut m, v) = manager(4);
        let fa = a.build(&mut m, &v);
        let fb = b.build(&mut m, &v);
        prop_assert_eq!(table_of(&m, fa, &v), a.table(4));
        prop_assert_eq!(fa == fb, a.table(4) == b.table(4));
    }
}

proptest! {
    #[test]
    fn quantifier_duality(a in expr(4), mask in 0u32..16) {
        let (mut m, v) = manager(4);
        let f = a.build(&mut m, &v);
        let qs: Vec<Var> = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| v[i]).collect();
        let all = m.forall(f, &qs);
        let nf = m.not(f);
        let ex = m.exists(nf, &qs);
        prop_assert_eq!(all, m.not(ex));
        for q in &qs {
            prop_assert!(!m.support(all).contains(q));
        }
    }

    #[test]
    fn cache_soundness(a in expr(4), b in expr(4), mask in 0u32..16) {
        let run = |cache: bool| {
            let (mut m, v) = manager(4);
            m.set_cache_enabled(cache);
            let fa = a.build(&mut m, &v);
            let fb = b.build(&mut m, &v);
            let qs: Vec<Var> = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| v[i]).collect();
            let e = m.exists(fa, &qs);
            let c = m.vector_compose(fa, &[(v[0], fb), (v[1], fa)]);
            (table_of(&m, e, &v), table_of(&m, c, &v), m.sat_count(fb, &v))
        };
        prop_assert_eq!(run(true), run(false));
    }

    #[test]
    fn model_count_matches_truth_table(a in expr(4)) {
        let (mut m, v) = manager(4);
        let f = a.build(&mut m, &v);
        let count = a.table(4).iter().filter(|b| **b).count();
        prop_assert_eq!(m.sat_count(f, &v), count as f64);
    }

    #[test]
    fn compose_is_simultaneous(a in expr(4), b in expr(4), c in expr(4)) {
        let (mut m, v) = manager(4);
        let f = a.build(&mut m, &v);
        let g0 = b.build(&mut m, &v);
        let g2 = c.build(&mut m, &v);
        let h = m.vector_compose(f, &[(v[0], g0), (v[2], g2)]);
        for row in 0..16u32 {
            let r0 = b.eval(row) as u32;
            let r2 = c.eval(row) as u32;
            let sub = (row & !0b101) | r0 | (r2 << 2);
            let got = m.eval(h, |q| row >> v.iter().position(|&w| w == q).unwrap() & 1 == 1);
            prop_assert_eq!(got, a.eval(sub));
        }
    }
}

#[test]
fn make_node_matches_ite() {
    let mut m = BddManager::new();
    let (a, b) = (m.new_var("a"), m.new_var("b"));
    let (fa, fb) = (m.var(a), m.var(b));
    let nb = m.not(fb);
    let direct = m.make_node(a, fb, nb);
    assert_eq!(direct, m.ite(fa, nb, fb));
    // b lies below a, so this falls back to ite
    let back = m.make_node(b, fa, Bdd::TRUE);
    assert_eq!(back, m.ite(fb, Bdd::TRUE, fa));
    assert_eq!(m.make_node(a, fb, fb), fb);
}
