//! Text and Graphviz renderings of explicit automata.
//!
//! The text format is line based:
//!
//! ```text
//! dfa v1
//! states 2
//! initial 0
//! finals 1
//! trans 0 "!a" 0
//! trans 0 "a" 1
//! trans 1 "true" 1
//! ```
//!
//! Each `trans` line carries one cube; a state's letters may be spread over
//! several lines. Every (state, letter) pair must be covered exactly once.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::bdd::{Bdd, BddManager, Var};
use crate::error::{Error, Result};
use crate::ltlf::{Partition, Prop};

use super::ExplicitDfa;

impl ExplicitDfa {
    /// Edge cubes per `(source, target)` pair, in state order.
    pub fn edge_cubes(&self) -> Vec<(usize, usize, Vec<String>)> {
        let mut mgr = BddManager::new();
        mgr.set_node_limit(None);
        let vars: Vec<Var> = self.partition.props().map(|p| mgr.new_var(self.partition.name(p))).collect();
        let mut out = Vec::new();
        for s in 0..self.num_states {
            let mut groups: BTreeMap<u32, Vec<bool>> = BTreeMap::new();
            for (l, &t) in self.row(s).iter().enumerate() {
                groups.entry(t).or_insert_with(|| vec![false; self.num_letters()])[l] = true;
            }
            for (t, members) in groups {
                let f = from_table(&mut mgr, &vars, &members, 0, 0);
                let cubes = mgr
                    .cubes(f)
                    .iter()
                    .map(|c| BddManager::cube_to_string(c, |v| mgr.var_name(v).to_string()))
                    .collect();
                out.push((s, t as usize, cubes));
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("dfa v1\n");
        let _ = writeln!(s, "states {}", self.num_states);
        let _ = writeln!(s, "initial {}", self.initial);
        let finals: Vec<String> = self.finals().iter().map(|f| f.to_string()).collect();
        if finals.is_empty() {
            s.push_str("finals\n");
        } else {
            let _ = writeln!(s, "finals {}", finals.join(" "));
        }
        for (src, dst, cubes) in self.edge_cubes() {
            for c in cubes {
                let _ = writeln!(s, "trans {src} \"{c}\" {dst}");
            }
        }
        s
    }

    /// Reads the text format over the propositions of `partition`.
    pub fn from_text(text: &str, partition: &Partition) -> Result<ExplicitDfa> {
        let letters = super::letters_checked(partition, super::DEFAULT_PROP_CAP)?;
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        if lines.next() != Some("dfa v1") {
            return Err(Error::Format("missing `dfa v1` header".into()));
        }
        let mut num_states = None;
        let mut initial = None;
        let mut finals_list = Vec::new();
        let mut edges = Vec::new();
        for line in lines {
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            match key {
                "states" => num_states = Some(parse_num(rest)?),
                "initial" => initial = Some(parse_num(rest)?),
                "finals" => {
                    finals_list = rest.split_whitespace().map(parse_num).collect::<Result<_>>()?;
                }
                "trans" => {
                    let (src, rest) = rest
                        .split_once(' ')
                        .ok_or_else(|| Error::Format(format!("bad transition `{line}`")))?;
                    let open = rest.find('"');
                    let close = rest.rfind('"');
                    let (Some(open), Some(close)) = (open, close) else {
                        return Err(Error::Format(format!("unquoted cube in `{line}`")));
                    };
                    if close <= open {
                        return Err(Error::Format(format!("unquoted cube in `{line}`")));
                    }
                    let cube = parse_cube(&rest[open + 1..close], partition)?;
                    let dst = parse_num(rest[close + 1..].trim())?;
                    edges.push((parse_num(src)?, cube, dst));
                }
                _ => return Err(Error::Format(format!("unknown line `{line}`"))),
            }
        }
        let n = num_states.ok_or_else(|| Error::Format("missing `states` line".into()))?;
        let init = initial.ok_or_else(|| Error::Format("missing `initial` line".into()))?;
        let mut finals = vec![false; n];
        for f in finals_list {
            *finals.get_mut(f).ok_or_else(|| Error::OutOfRange(format!("final state {f}")))? = true;
        }
        let mut table = vec![u32::MAX; n * letters];
        for (src, cube, dst) in edges {
            if src >= n || dst >= n {
                return Err(Error::OutOfRange(format!("transition {src} -> {dst}")));
            }
            for l in 0..letters {
                if cube.iter().all(|&(p, v)| (l >> p.index() & 1 == 1) == v) {
                    let slot = &mut table[src * letters + l];
                    if *slot != u32::MAX && *slot != dst as u32 {
                        return Err(Error::Format(format!("state {src} is nondeterministic")));
                    }
                    *slot = dst as u32;
                }
            }
        }
        if let Some(i) = table.iter().position(|&t| t == u32::MAX) {
            return Err(Error::Format(format!(
                "state {} has no transition on {}",
                i / letters,
                partition.display_letter(crate::ltlf::Letter((i % letters) as u32))
            )));
        }
        ExplicitDfa::new(partition.clone(), init, finals, table)
    }

    /// Graphviz rendering; final states are double circles and edges carry
    /// the disjunction of their cubes.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph dfa {\n  rankdir=LR;\n  init [shape=point];\n");
        for q in 0..self.num_states {
            let shape = if self.finals[q] { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  s{q} [shape={shape},label=\"{q}\"];");
        }
        let _ = writeln!(s, "  init -> s{};", self.initial);
        for (src, dst, cubes) in self.edge_cubes() {
            let _ = writeln!(s, "  s{src} -> s{dst} [label=\"{}\"];", cubes.join(" | "));
        }
        s.push_str("}\n");
        s
    }
}

fn from_table(mgr: &mut BddManager, vars: &[Var], table: &[bool], level: usize, prefix: usize) -> Bdd {
    if level == vars.len() {
        return Bdd::constant(table[prefix]);
    }
    let lo = from_table(mgr, vars, table, level + 1, prefix);
    let hi = from_table(mgr, vars, table, level + 1, prefix | 1 << level);
    mgr.make_node(vars[level], lo, hi)
}

fn parse_num(s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::Format(format!("expected a number, found `{s}`")))
}

fn parse_cube(text: &str, partition: &Partition) -> Result<Vec<(Prop, bool)>> {
    let text = text.trim();
    if text == "true" {
        return Ok(Vec::new());
    }
    text.split('&')
        .map(|lit| {
            let lit = lit.trim();
            let (name, positive) = match lit.strip_prefix('!') {
                Some(rest) => (rest.trim(), false),
                None => (lit, true),
            };
            let p = partition.lookup(name).ok_or_else(|| Error::UndeclaredAtom(name.to_string()))?;
            Ok((p, positive))
        })
        .collect()
}
