//! LTLf formulas over a partitioned alphabet.
//!
//! Propositions are split into environment-controlled inputs (`X`) and
//! agent-controlled outputs (`Y`). A [`Partition`] interns every proposition
//! name to a [`Prop`] id: inputs come first, then outputs. An interpretation
//! of all propositions is a [`Letter`], a bitmask indexed by those ids.

mod nnf;
mod parser;
mod semantics;

use std::fmt;

use crate::error::{Error, Result};

pub use parser::parse;
pub use semantics::evaluate;

/// Hard ceiling on the number of propositions a letter can hold.
pub const MAX_PROPS: usize = 32;

const KEYWORDS: &[&str] = &["true", "false", "X", "WX", "F", "G", "U", "R"];

/// Interned proposition id; an index into a [`Partition`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prop(pub u32);

impl Prop {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Returns true when `name` can be used as a proposition name.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    let head_ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_');
    head_ok
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !KEYWORDS.contains(&name)
}

/// The alphabet `X ∪ Y`: environment inputs and agent outputs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    names: Vec<String>,
    num_env: usize,
}

impl Partition {
    pub fn new<E, A, S>(env: E, agent: A) -> Result<Self>
    where
        E: IntoIterator<Item = S>,
        A: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = env.into_iter().map(Into::into).collect();
        let num_env = names.len();
        names.extend(agent.into_iter().map(Into::into));
        if names.len() > MAX_PROPS {
            return Err(Error::InvalidPartition(format!(
                "{} propositions declared, at most {MAX_PROPS} supported",
                names.len()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(Error::InvalidPartition(format!("`{name}` is not a valid identifier")));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidPartition(format!("`{name}` declared twice")));
            }
        }
        Ok(Partition { names, num_env })
    }

    /// Parses the two-line partition format:
    ///
    /// ```text
    /// .inputs: a b c
    /// .outputs: d e
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut inputs: Option<Vec<&str>> = None;
        let mut outputs: Option<Vec<&str>> = None;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (slot, rest) = if let Some(rest) = line.strip_prefix(".inputs:") {
                (&mut inputs, rest)
            } else if let Some(rest) = line.strip_prefix(".outputs:") {
                (&mut outputs, rest)
            } else {
                return Err(Error::Format(format!("unexpected partition line `{line}`")));
            };
            if slot.is_some() {
                return Err(Error::Format(format!("duplicate section in `{line}`")));
            }
            *slot = Some(rest.split_whitespace().collect());
        }
        match (inputs, outputs) {
            (Some(i), Some(o)) => Partition::new(i, o),
            _ => Err(Error::Format("partition needs both `.inputs:` and `.outputs:`".into())),
        }
    }

    pub fn to_text(&self) -> String {
        format!(
            ".inputs: {}\n.outputs: {}\n",
            self.env_names().join(" "),
            self.agent_names().join(" ")
        )
    }

    pub fn num_props(&self) -> usize {
        self.names.len()
    }

    pub fn num_env(&self) -> usize {
        self.num_env
    }

    pub fn num_agent(&self) -> usize {
        self.names.len() - self.num_env
    }

    /// Number of letters, `2^|X ∪ Y|`.
    pub fn num_letters(&self) -> usize {
        1usize << self.names.len()
    }

    pub fn env_names(&self) -> &[String] {
        &self.names[..self.num_env]
    }

    pub fn agent_names(&self) -> &[String] {
        &self.names[self.num_env..]
    }

    pub fn props(&self) -> impl Iterator<Item = Prop> {
        (0..self.names.len() as u32).map(Prop)
    }

    pub fn env_props(&self) -> impl Iterator<Item = Prop> {
        (0..self.num_env as u32).map(Prop)
    }

    pub fn agent_props(&self) -> impl Iterator<Item = Prop> {
        (self.num_env as u32..self.names.len() as u32).map(Prop)
    }

    pub fn lookup(&self, name: &str) -> Option<Prop> {
        self.names.iter().position(|n| n == name).map(|i| Prop(i as u32))
    }

    pub fn name(&self, p: Prop) -> &str {
        &self.names[p.index()]
    }

    pub fn is_env(&self, p: Prop) -> bool {
        p.index() < self.num_env
    }

    pub fn env_mask(&self) -> u32 {
        low_mask(self.num_env)
    }

    pub fn agent_mask(&self) -> u32 {
        low_mask(self.names.len()) & !self.env_mask()
    }

    /// Joins an assignment to the inputs (bit `i` = `i`-th input) and one to
    /// the outputs (bit `j` = `j`-th output) into a letter.
    pub fn join(&self, env_bits: u32, agent_bits: u32) -> Letter {
        Letter((env_bits & self.env_mask()) | (agent_bits << self.num_env) & self.agent_mask())
    }

    /// Splits a letter into its input and output assignments.
    pub fn split(&self, letter: Letter) -> (u32, u32) {
        (letter.0 & self.env_mask(), (letter.0 & self.agent_mask()) >> self.num_env)
    }

    pub fn display_letter(&self, letter: Letter) -> String {
        let set: Vec<&str> = self
            .props()
            .filter(|&p| letter.contains(p))
            .map(|p| self.name(p))
            .collect();
        format!("{{{}}}", set.join(","))
    }
}

fn low_mask(bits: usize) -> u32 {
    if bits >= 32 {
        u32::MAX
    } else {
        (1u32 << bits) - 1
    }
}

/// One propositional interpretation of the alphabet.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u32);

impl Letter {
    pub fn from_props(props: impl IntoIterator<Item = Prop>) -> Self {
        Letter(props.into_iter().fold(0, |acc, p| acc | (1 << p.0)))
    }

    pub fn contains(self, p: Prop) -> bool {
        self.0 >> p.0 & 1 == 1
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An LTLf formula. Atoms refer to propositions of a [`Partition`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Prop),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    WeakNext(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    Always(Box<Formula>),
}

impl Formula {
    pub fn atom(p: Prop) -> Formula {
        Formula::Atom(p)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// `(a -> b) && (b -> a)`; the grammar has no biconditional.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }

    pub fn weak_next(f: Formula) -> Formula {
        Formula::WeakNext(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Formula {
        Formula::Release(Box::new(a), Box::new(b))
    }

    pub fn eventually(f: Formula) -> Formula {
        Formula::Eventually(Box::new(f))
    }

    pub fn always(f: Formula) -> Formula {
        Formula::Always(Box::new(f))
    }

    /// Right-nested conjunction; `true` when empty.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Formula::True;
        };
        while let Some(f) = items.pop() {
            acc = Formula::and(f, acc);
        }
        acc
    }

    /// Right-nested disjunction; `false` when empty.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Formula::False;
        };
        while let Some(f) = items.pop() {
            acc = Formula::or(f, acc);
        }
        acc
    }

    /// Number of operators; atoms and constants contribute nothing.
    pub fn size(&self) -> usize {
        use Formula::*;
        match self {
            True | False | Atom(_) => 0,
            Not(a) | Next(a) | WeakNext(a) | Eventually(a) | Always(a) => 1 + a.size(),
            And(a, b) | Or(a, b) | Implies(a, b) | Until(a, b) | Release(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Negation normal form: negations only on atoms, `Implies` eliminated,
    /// with `WeakNext`/`Release`/`Always` as the duals of
    /// `Next`/`Until`/`Eventually`.
    pub fn to_nnf(&self) -> Formula {
        nnf::to_nnf(self)
    }

    pub fn is_nnf(&self) -> bool {
        use Formula::*;
        match self {
            True | False | Atom(_) => true,
            Not(a) => matches!(**a, Atom(_)),
            Implies(..) => false,
            Next(a) | WeakNext(a) | Eventually(a) | Always(a) => a.is_nnf(),
            And(a, b) | Or(a, b) | Until(a, b) | Release(a, b) => a.is_nnf() && b.is_nnf(),
        }
    }

    /// Every proposition occurring in the formula, sorted and deduplicated.
    pub fn atoms(&self) -> Vec<Prop> {
        fn walk(f: &Formula, out: &mut Vec<Prop>) {
            use Formula::*;
            match f {
                True | False => {}
                Atom(p) => out.push(*p),
                Not(a) | Next(a) | WeakNext(a) | Eventually(a) | Always(a) => walk(a, out),
                And(a, b) | Or(a, b) | Implies(a, b) | Until(a, b) | Release(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort();
        out.dedup();
        out
    }

    /// Pretty-printer in the concrete grammar; binary operators are always
    /// parenthesized so the output parses back to the same tree.
    pub fn display<'a>(&'a self, partition: &'a Partition) -> FormulaDisplay<'a> {
        FormulaDisplay { formula: self, partition }
    }
}

pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    partition: &'a Partition,
}

impl<'a> FormulaDisplay<'a> {
    fn child(&self, formula: &'a Formula) -> FormulaDisplay<'a> {
        FormulaDisplay { formula, partition: self.partition }
    }
}

impl<'a> fmt::Display for FormulaDisplay<'a> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        let sub = |g: &'a Formula| self.child(g);
        match self.formula {
            True => write!(f, "true"),
            False => write!(f, "false"),
            Atom(p) => write!(f, "{}", self.partition.name(*p)),
            Not(a) => write!(f, "!{}", sub(a)),
            Next(a) => write!(f, "X {}", sub(a)),
            WeakNext(a) => write!(f, "WX {}", sub(a)),
            Eventually(a) => write!(f, "F {}", sub(a)),
            Always(a) => write!(f, "G {}", sub(a)),
            And(a, b) => write!(f, "({} && {})", sub(a), sub(b)),
            Or(a, b) => write!(f, "({} || {})", sub(a), sub(b)),
            Implies(a, b) => write!(f, "({} -> {})", sub(a), sub(b)),
            Until(a, b) => write!(f, "({} U {})", sub(a), sub(b)),
            Release(a, b) => write!(f, "({} R {})", sub(a), sub(b)),
        }
    }
}
