//! Recursive-descent parser for the formula grammar.
//!
//! Precedence from weakest to strongest: `->`, `||`, `&&`, `U`/`R`, unary
//! (`!`, `X`, `WX`, `F`, `G`). `->`, `U` and `R` associate to the right,
//! `&&` and `||` to the left.

use super::{Formula, Partition};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Next,
    WeakNext,
    Eventually,
    Always,
    Until,
    Release,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(usize, Tok)>> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        while let Some(t) = lx.next_token()? {
            out.push(t);
        }
        Ok(out)
    }

    fn next_token(&mut self) -> Result<Option<(usize, Tok)>> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = bytes.get(start) else {
            return Ok(None);
        };
        let two = |s: &str| self.src[start..].starts_with(s);
        let (len, tok) = match c {
            b'(' => (1, Tok::LParen),
            b')' => (1, Tok::RParen),
            b'!' => (1, Tok::Not),
            b'&' if two("&&") => (2, Tok::And),
            b'|' if two("||") => (2, Tok::Or),
            b'-' if two("->") => (2, Tok::Implies),
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let len = bytes[start..]
                    .iter()
                    .take_while(|b| b.is_ascii_alphanumeric() || **b == b'_')
                    .count();
                let word = &self.src[start..start + len];
                let tok = match word {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "X" => Tok::Next,
                    "WX" => Tok::WeakNext,
                    "F" => Tok::Eventually,
                    "G" => Tok::Always,
                    "U" => Tok::Until,
                    "R" => Tok::Release,
                    _ => Tok::Ident(word.to_string()),
                };
                (len, tok)
            }
            _ => {
                let ch = self.src[start..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    position: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        self.pos += len;
        Ok(Some((start, tok)))
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    end: usize,
    partition: &'a Partition,
}

/// Parses `text` into a formula whose atoms must all be declared in
/// `partition`.
pub fn parse(text: &str, partition: &Partition) -> Result<Formula> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser { toks, idx: 0, end: text.len(), partition };
    let f = p.implication()?;
    if let Some((pos, tok)) = p.toks.get(p.idx) {
        return Err(Error::Syntax {
            position: *pos,
            message: format!("unexpected {tok:?} after complete formula"),
        });
    }
    Ok(f)
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.toks.get(self.idx).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut acc = self.conjunction()?;
        while self.eat(&Tok::Or) {
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut acc = self.binary_temporal()?;
        while self.eat(&Tok::And) {
            acc = Formula::and(acc, self.binary_temporal()?);
        }
        Ok(acc)
    }

    fn binary_temporal(&mut self) -> Result<Formula> {
        let lhs = self.unary()?;
        if self.eat(&Tok::Until) {
            return Ok(Formula::until(lhs, self.binary_temporal()?));
        }
        if self.eat(&Tok::Release) {
            return Ok(Formula::release(lhs, self.binary_temporal()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        let wrap: fn(Formula) -> Formula = match self.peek() {
            Some(Tok::Not) => Formula::not,
            Some(Tok::Next) => Formula::next,
            Some(Tok::WeakNext) => Formula::weak_next,
            Some(Tok::Eventually) => Formula::eventually,
            Some(Tok::Always) => Formula::always,
            _ => return self.primary(),
        };
        self.idx += 1;
        Ok(wrap(self.unary()?))
    }

    fn primary(&mut self) -> Result<Formula> {
        let position = self.position();
        let Some((_, tok)) = self.toks.get(self.idx).cloned() else {
            return Err(Error::Syntax {
                position,
                message: "expected a formula, found end of input".into(),
            });
        };
        self.idx += 1;
        match tok {
            Tok::True => Ok(Formula::True),
            Tok::False => Ok(Formula::False),
            Tok::Ident(name) => self
                .partition
                .lookup(&name)
                .map(Formula::Atom)
                .ok_or(Error::UndeclaredAtom(name)),
            Tok::LParen => {
                let inner = self.implication()?;
                if !self.eat(&Tok::RParen) {
                    return Err(Error::Syntax {
                        position: self.position(),
                        message: "expected `)`".into(),
                    });
                }
                Ok(inner)
            }
            other => Err(Error::Syntax {
                position,
                message: format!("expected a formula, found {other:?}"),
            }),
        }
    }
}
