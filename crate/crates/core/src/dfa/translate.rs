//! Formula-to-automaton translation by formula progression.
//!
//! A state is a positive Boolean combination of obligations `X g` ("g holds
//! at the next instant, which must exist") and `WX g` ("g holds at the next
//! instant if there is one"). Obligations are BDD variables placed below
//! the letter variables, so a state is a BDD and equal states are equal
//! handles. Progressing a state substitutes every obligation by the
//! one-step expansion of its subformula; the letter then selects a path
//! through the letter levels to the successor state.

use std::collections::{HashMap, VecDeque};

use crate::bdd::{Bdd, BddManager, Var};
use crate::error::{Error, Result};
use crate::ltlf::{Formula, Partition, Prop};

use super::{letters_checked, ExplicitDfa, DEFAULT_PROP_CAP};

/// Limits for [`translate_with`].
#[derive(Clone, Debug)]
pub struct TranslateOptions {
    /// Largest number of automaton states before giving up.
    pub state_cap: usize,
    /// Largest number of propositions for the explicit alphabet.
    pub prop_cap: usize,
    /// Whether to minimize the result.
    pub minimize: bool,
    /// Give up with a timeout error once this instant has passed.
    pub deadline: Option<std::time::Instant>,
}

impl Default for TranslateOptions {
    fn default() -> Self {
        TranslateOptions {
            state_cap: 1_000_000,
            prop_cap: DEFAULT_PROP_CAP,
            minimize: true,
            deadline: None,
        }
    }
}

/// Minimal automaton accepting exactly the nonempty traces that satisfy
/// `formula` at instant 0.
pub fn translate(formula: &Formula, partition: &Partition) -> Result<ExplicitDfa> {
    translate_with(formula, partition, &TranslateOptions::default())
}

/// The progression automaton before minimization.
pub fn translate_raw(formula: &Formula, partition: &Partition) -> Result<ExplicitDfa> {
    let opts = TranslateOptions { minimize: false, ..TranslateOptions::default() };
    translate_with(formula, partition, &opts)
}

pub fn translate_with(
    formula: &Formula,
    partition: &Partition,
    opts: &TranslateOptions,
) -> Result<ExplicitDfa> {
    let letters = letters_checked(partition, opts.prop_cap)?;
    if let Some(p) = formula.atoms().into_iter().find(|p| p.index() >= partition.num_props()) {
        return Err(Error::UndeclaredAtom(format!("proposition #{}", p.0)));
    }
    let mut tr = Translator::new(partition.num_props());
    let root = tr.intern(&formula.to_nnf());
    let init = tr.obligation(Kind::Strong, root);

    let mut ids: HashMap<Bdd, u32> = HashMap::from([(init, 0)]);
    let mut states = vec![init];
    let mut table = Vec::new();
    let mut queue = VecDeque::from([init]);
    let mut row = vec![Bdd::FALSE; letters];
    while let Some(s) = queue.pop_front() {
        if opts.deadline.is_some_and(|d| std::time::Instant::now() >= d) {
            return Err(Error::Timeout);
        }
        let t = tr.step(s);
        tr.fill_row(t, 0, 0, &mut row);
        for &succ in &row {
            let id = match ids.get(&succ) {
                Some(&id) => id,
                None => {
                    if states.len() >= opts.state_cap {
                        return Err(Error::ResourceLimit(format!(
                            "translation exceeds {} states",
                            opts.state_cap
                        )));
                    }
                    let id = states.len() as u32;
                    ids.insert(succ, id);
                    states.push(succ);
                    queue.push_back(succ);
                    id
                }
            };
            table.push(id);
        }
    }
    let finals = states.iter().enumerate().map(|(i, &s)| i != 0 && tr.is_final(s)).collect();
    let dfa = ExplicitDfa {
        partition: partition.clone(),
        num_states: states.len(),
        initial: 0,
        finals,
        table,
    };
    Ok(if opts.minimize { dfa.minimize() } else { dfa })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Kind {
    Strong,
    Weak,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Lit(Prop, bool),
    And(usize, usize),
    Or(usize, usize),
    Next(usize),
    WeakNext(usize),
    Until(usize, usize),
    Release(usize, usize),
    Eventually(usize),
    Always(usize),
}

struct Translator {
    mgr: BddManager,
    props: Vec<Var>,
    nodes: Vec<Node>,
    node_ids: HashMap<Node, usize>,
    prog_memo: Vec<Option<Bdd>>,
    obligations: HashMap<(Kind, usize), Var>,
    // indexed by variable id; letter variables have no entry
    obligation_of: Vec<Option<(Kind, usize)>>,
}

impl Translator {
    fn new(num_props: usize) -> Self {
        let mut mgr = BddManager::new();
        mgr.set_node_limit(None);
        let props = (0..num_props).map(|i| mgr.new_var(format!("p{i}"))).collect();
        Translator {
            mgr,
            props,
            nodes: Vec::new(),
            node_ids: HashMap::new(),
            prog_memo: Vec::new(),
            obligations: HashMap::new(),
            obligation_of: vec![None; num_props],
        }
    }

    fn add(&mut self, node: Node) -> usize {
        if let Some(&id) = self.node_ids.get(&node) {
            return id;
        }
        self.nodes.push(node);
        self.prog_memo.push(None);
        self.node_ids.insert(node, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    /// Interns an NNF formula into the shared DAG.
    fn intern(&mut self, f: &Formula) -> usize {
        use Formula as F;
        let node = match f {
            F::True => Node::True,
            F::False => Node::False,
            F::Atom(p) => Node::Lit(*p, true),
            F::Not(a) => match a.as_ref() {
                F::Atom(p) => Node::Lit(*p, false),
                _ => unreachable!("formula is in negation normal form"),
            },
            F::And(a, b) => Node::And(self.intern(a), self.intern(b)),
            F::Or(a, b) => Node::Or(self.intern(a), self.intern(b)),
            F::Implies(..) => unreachable!("formula is in negation normal form"),
            F::Next(a) => Node::Next(self.intern(a)),
            F::WeakNext(a) => Node::WeakNext(self.intern(a)),
            F::Until(a, b) => Node::Until(self.intern(a), self.intern(b)),
            F::Release(a, b) => Node::Release(self.intern(a), self.intern(b)),
            F::Eventually(a) => Node::Eventually(self.intern(a)),
            F::Always(a) => Node::Always(self.intern(a)),
        };
        self.add(node)
    }

    fn obligation(&mut self, kind: Kind, node: usize) -> Bdd {
        let var = match self.obligations.get(&(kind, node)) {
            Some(&v) => v,
            None => {
                let prefix = if kind == Kind::Strong { "X" } else { "WX" };
                let v = self.mgr.new_var(format!("{prefix}#{node}"));
                self.obligations.insert((kind, node), v);
                self.obligation_of.push(Some((kind, node)));
                v
            }
        };
        self.mgr.var(var)
    }

    /// One-step expansion of `node`: a function of the current letter and
    /// of obligations on the rest of the trace.
    fn prog(&mut self, node: usize) -> Bdd {
        if let Some(b) = self.prog_memo[node] {
            return b;
        }
        let b = match self.nodes[node] {
            Node::True => Bdd::TRUE,
            Node::False => Bdd::FALSE,
            Node::Lit(p, pos) => self.mgr.literal(self.props[p.index()], pos),
            Node::And(a, b) => {
                let (a, b) = (self.prog(a), self.prog(b));
                self.mgr.and(a, b)
            }
            Node::Or(a, b) => {
                let (a, b) = (self.prog(a), self.prog(b));
                self.mgr.or(a, b)
            }
            Node::Next(a) => self.obligation(Kind::Strong, a),
            Node::WeakNext(a) => self.obligation(Kind::Weak, a),
            Node::Until(a, b) => {
                let (pa, pb) = (self.prog(a), self.prog(b));
                let later = self.obligation(Kind::Strong, node);
                let keep = self.mgr.and(pa, later);
                self.mgr.or(pb, keep)
            }
            Node::Release(a, b) => {
                let (pa, pb) = (self.prog(a), self.prog(b));
                let later = self.obligation(Kind::Weak, node);
                let keep = self.mgr.or(pa, later);
                self.mgr.and(pb, keep)
            }
            Node::Eventually(a) => {
                let pa = self.prog(a);
                let later = self.obligation(Kind::Strong, node);
                self.mgr.or(pa, later)
            }
            Node::Always(a) => {
                let pa = self.prog(a);
                let later = self.obligation(Kind::Weak, node);
                self.mgr.and(pa, later)
            }
        };
        self.prog_memo[node] = Some(b);
        b
    }

    /// Replaces every obligation in `state` by the expansion of its formula.
    fn step(&mut self, state: Bdd) -> Bdd {
        let support = self.mgr.support(state);
        let mut subst = Vec::with_capacity(support.len());
        for v in support {
            let (_, node) = self.obligation_of[v.index()].expect("states mention obligations only");
            subst.push((v, self.prog(node)));
        }
        self.mgr.vector_compose(state, &subst)
    }

    /// Writes the successor for every letter extending `prefix` (bits for
    /// propositions above `level`) into `row`.
    fn fill_row(&self, f: Bdd, level: usize, prefix: usize, row: &mut [Bdd]) {
        let n = self.props.len();
        if level == n {
            row[prefix] = f;
            return;
        }
        if self.mgr.top_level(f) > level {
            self.fill_row(f, level + 1, prefix, row);
            self.fill_row(f, level + 1, prefix | 1 << level, row);
            return;
        }
        let (_, lo, hi) = self.mgr.node(f).expect("non-constant below letter level");
        self.fill_row(lo, level + 1, prefix, row);
        self.fill_row(hi, level + 1, prefix | 1 << level, row);
    }

    /// A state accepts when the trace may end here: strong obligations fail
    /// and weak ones hold.
    fn is_final(&self, state: Bdd) -> bool {
        self.mgr.eval(state, |v| matches!(self.obligation_of[v.index()], Some((Kind::Weak, _))))
    }
}
