use std::fmt::Write;

use super::{Bdd, BddManager, Var};

impl BddManager {
    /// Paths to the true terminal, one cube per path, low branch first.
    pub fn cubes(&self, f: Bdd) -> Vec<Vec<(Var, bool)>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.cubes_rec(f, &mut path, &mut out);
        out
    }

    fn cubes_rec(&self, f: Bdd, path: &mut Vec<(Var, bool)>, out: &mut Vec<Vec<(Var, bool)>>) {
        match self.node(f) {
            None => {
                if f.is_true() {
                    out.push(path.clone());
                }
            }
            Some((v, lo, hi)) => {
                path.push((v, false));
                self.cubes_rec(lo, path, out);
                path.pop();
                path.push((v, true));
                self.cubes_rec(hi, path, out);
                path.pop();
            }
        }
    }

    /// Renders a cube as `a & !b`, using `name` for variables. The empty
    /// cube is `true`.
    pub fn cube_to_string(cube: &[(Var, bool)], name: impl Fn(Var) -> String) -> String {
        if cube.is_empty() {
            return "true".into();
        }
        let lits: Vec<String> = cube
            .iter()
            .map(|&(v, pos)| if pos { name(v) } else { format!("!{}", name(v)) })
            .collect();
        lits.join(" & ")
    }

    /// Sum-of-products text of `f` over the declared variable names.
    pub fn to_expr(&self, f: Bdd) -> String {
        if f.is_false() {
            return "false".into();
        }
        let cubes = self.cubes(f);
        let terms: Vec<String> = cubes
            .iter()
            .map(|c| Self::cube_to_string(c, |v| self.var_name(v).to_string()))
            .collect();
        terms.join(" | ")
    }

    /// Graphviz rendering of the DAG below `f`. Dashed edges are low edges.
    pub fn to_dot(&self, f: Bdd) -> String {
        let mut s = String::from("digraph bdd {\n");
        s.push_str("  n0 [shape=box,label=\"0\"];\n  n1 [shape=box,label=\"1\"];\n");
        let mut seen = rustc_hash::FxHashSet::default();
        let mut stack = vec![f];
        while let Some(cur) = stack.pop() {
            let Some((v, lo, hi)) = self.node(cur) else { continue };
            if !seen.insert(cur) {
                continue;
            }
            let id = cur.id();
            let _ = writeln!(s, "  n{id} [label=\"{}\"];", self.var_name(v));
            let _ = writeln!(s, "  n{id} -> n{} [style=dashed];", lo.id());
            let _ = writeln!(s, "  n{id} -> n{};", hi.id());
            stack.push(lo);
            stack.push(hi);
        }
        s.push_str("}\n");
        s
    }
}
