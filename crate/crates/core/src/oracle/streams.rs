//! Enumerations of candidate witness terms.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::syntax::{Name, Signature, SymbolKind, Term};

/// Placeholder variables live in a namespace no parsed variable can use.
const PLACEHOLDER: char = '?';

/// A term whose variables are placeholders `?0, ?1, ..` numbered by first
/// occurrence (left to right).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialTerm(Term);

impl PartialTerm {
    pub fn hole() -> Self {
        PartialTerm(Term::Var(placeholder(0)))
    }

    pub fn term(&self) -> &Term {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.depth()
    }

    /// Number of distinct placeholders.
    pub fn holes(&self) -> usize {
        let mut n = 0;
        visit_vars(&self.0, &mut |_| n += 1);
        n
    }

    /// Grounds placeholder `?i` with `values[i]`.
    pub fn ground(&self, values: &[Term]) -> Term {
        fn go(t: &Term, values: &[Term]) -> Term {
            match t {
                Term::Var(v) => values[hole_index(v)].clone(),
                Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| go(a, values)).collect()),
            }
        }
        go(&self.0, values)
    }

    fn canonical(t: Term) -> Self {
        let mut order: Vec<Name> = Vec::new();
        visit_vars(&t, &mut |v| {
            if !order.contains(v) {
                order.push(v.clone());
            }
        });
        let mut out = t;
        // Two-phase rename so that intermediate names never collide.
        for (i, v) in order.iter().enumerate() {
            out = out.subst_var(v, &Term::Var(format!("{PLACEHOLDER}{PLACEHOLDER}{i}").into()));
        }
        for i in 0..order.len() {
            out = out.subst_var(&format!("{PLACEHOLDER}{PLACEHOLDER}{i}"), &Term::Var(placeholder(i)));
        }
        PartialTerm(out)
    }
}

fn placeholder(i: usize) -> Name {
    format!("{PLACEHOLDER}{i}").into()
}

fn hole_index(v: &str) -> usize {
    v[1..].parse().expect("placeholder name")
}

fn visit_vars<'a>(t: &'a Term, f: &mut impl FnMut(&'a Name)) {
    match t {
        Term::Var(v) => f(v),
        Term::App(_, args) => args.iter().for_each(|a| visit_vars(a, f)),
    }
}

/// Prints placeholders as `z, z', z'', ..`.
impl fmt::Display for PartialTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &Term, out: &mut String) {
            match t {
                Term::Var(v) => {
                    out.push('z');
                    out.extend(std::iter::repeat_n('\'', hole_index(v)));
                }
                Term::App(g, args) => {
                    out.push_str(g);
                    if !args.is_empty() {
                        out.push('(');
                        for (i, a) in args.iter().enumerate() {
                            if i > 0 {
                                out.push_str(", ");
                            }
                            go(a, out);
                        }
                        out.push(')');
                    }
                }
            }
        }
        let mut s = String::new();
        go(&self.0, &mut s);
        f.write_str(&s)
    }
}

/// Breadth-first refinement of a lone placeholder.
///
/// Each dequeued term is emitted, then every placeholder position (left to
/// right) is refined by every function symbol of arity at least one
/// (signature order). Duplicates are dropped.
#[derive(Debug, Clone)]
pub struct RefinementStream {
    functions: Vec<(Name, usize)>,
    queue: VecDeque<PartialTerm>,
    seen: HashSet<PartialTerm>,
    max_depth: Option<usize>,
}

pub fn refinement_stream(sig: &Signature) -> RefinementStream {
    let functions = sig
        .decls()
        .iter()
        .filter(|d| d.kind == SymbolKind::Function && d.arity > 0)
        .map(|d| (d.name.clone(), d.arity))
        .collect();
    let start = PartialTerm::hole();
    RefinementStream {
        functions,
        queue: VecDeque::from([start.clone()]),
        seen: HashSet::from([start]),
        max_depth: None,
    }
}

impl RefinementStream {
    /// Restricts the stream to terms of depth at most `d`, making it finite.
    pub fn with_max_depth(mut self, d: usize) -> Self {
        self.max_depth = Some(d);
        self
    }
}

fn var_paths(t: &Term, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    match t {
        Term::Var(_) => out.push(prefix.clone()),
        Term::App(_, args) => {
            for (i, a) in args.iter().enumerate() {
                prefix.push(i);
                var_paths(a, prefix, out);
                prefix.pop();
            }
        }
    }
}

impl Iterator for RefinementStream {
    type Item = PartialTerm;

    fn next(&mut self) -> Option<PartialTerm> {
        let t = self.queue.pop_front()?;
        let mut paths = Vec::new();
        var_paths(&t.0, &mut Vec::new(), &mut paths);
        let next_hole = t.holes();
        for path in &paths {
            for (f, arity) in &self.functions {
                let args = (0..*arity).map(|i| Term::Var(placeholder(next_hole + i))).collect();
                let refined = t.0.replace_at(path, &Term::App(f.clone(), args)).expect("valid path");
                let refined = PartialTerm::canonical(refined);
                if self.max_depth.is_some_and(|d| refined.depth() > d) {
                    continue;
                }
                if self.seen.insert(refined.clone()) {
                    self.queue.push_back(refined);
                }
            }
        }
        Some(t)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StreamError {
    #[error("the signature has no constants, so there are no ground terms")]
    NoConstants,
}

/// Every ground term exactly once, ordered by size, then symbol order, then
/// lexicographically by the positions of the arguments.
#[derive(Debug, Clone)]
pub struct DiagonalStream {
    symbols: Vec<(Name, usize)>,
    by_size: Vec<Vec<Term>>,
    size: usize,
    cursor: usize,
}

pub fn diagonal_ground_stream(sig: &Signature) -> Result<DiagonalStream, StreamError> {
    let symbols: Vec<(Name, usize)> = sig
        .decls()
        .iter()
        .filter(|d| d.kind == SymbolKind::Function)
        .map(|d| (d.name.clone(), d.arity))
        .collect();
    if !symbols.iter().any(|(_, a)| *a == 0) {
        return Err(StreamError::NoConstants);
    }
    Ok(DiagonalStream {
        symbols,
        by_size: vec![Vec::new()],
        size: 0,
        cursor: 0,
    })
}

impl DiagonalStream {
    /// Argument tuples of `k` terms with total size `m`, lexicographic.
    fn tuples(&self, k: usize, m: usize) -> Vec<Vec<Term>> {
        if k == 0 {
            return if m == 0 { vec![Vec::new()] } else { Vec::new() };
        }
        let mut out = Vec::new();
        for s in 1..=m.saturating_sub(k - 1) {
            for t in &self.by_size[s] {
                for mut rest in self.tuples(k - 1, m - s) {
                    rest.insert(0, t.clone());
                    out.push(rest);
                }
            }
        }
        out
    }

    fn fill_next_size(&mut self) {
        let n = self.by_size.len();
        let mut layer = Vec::new();
        for (f, arity) in &self.symbols {
            if *arity == 0 {
                if n == 1 {
                    layer.push(Term::App(f.clone(), Vec::new()));
                }
            } else if n > *arity {
                for args in self.tuples(*arity, n - 1) {
                    layer.push(Term::App(f.clone(), args));
                }
            }
        }
        self.by_size.push(layer);
    }
}

impl Iterator for DiagonalStream {
    type Item = Term;

    fn next(&mut self) -> Option<Term> {
        loop {
            if let Some(t) = self.by_size.get(self.size).and_then(|l| l.get(self.cursor)) {
                self.cursor += 1;
                return Some(t.clone());
            }
            self.size += 1;
            self.cursor = 0;
            if self.size >= self.by_size.len() {
                self.fill_next_size();
                // Only constants: after size 1 nothing new ever appears.
                if self.by_size[self.size].is_empty() && self.symbols.iter().all(|(_, a)| *a == 0) {
                    return None;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fgh() -> Signature {
        Signature::parse("fun f/1\nfun g/2\nfun h/1\nfun c/0\nfun d/0\nfun e/0").unwrap()
    }

    #[test]
    fn refinement_prefix() {
        let got: Vec<String> = refinement_stream(&fgh()).take(11).map(|t| t.to_string()).collect();
        assert_eq!(
            got,
            [
                "z", "f(z)", "g(z, z')", "h(z)", "f(f(z))", "f(g(z, z'))", "f(h(z))", "g(f(z), z')",
                "g(g(z, z'), z'')", "g(h(z), z')", "g(z, f(z'))"
            ]
        );
    }

    #[test]
    fn refinement_over_constants_is_a_single_hole() {
        let sig = Signature::parse("fun c/0").unwrap();
        assert_eq!(refinement_stream(&sig).count(), 1);
    }

    #[test]
    fn depth_bound_makes_stream_finite() {
        // Depth <= 1 over f/1, g/2, h/1: z, f(z), g(z,z'), h(z).
        assert_eq!(refinement_stream(&fgh()).with_max_depth(1).count(), 4);
    }

    #[test]
    fn diagonal_prefix() {
        let got: Vec<String> = diagonal_ground_stream(&fgh()).unwrap().take(9).map(|t| t.to_string()).collect();
        assert_eq!(got, ["c", "d", "e", "f(c)", "f(d)", "f(e)", "h(c)", "h(d)", "h(e)"]);
    }

    #[test]
    fn diagonal_needs_constants() {
        let sig = Signature::parse("fun f/1").unwrap();
        assert_eq!(diagonal_ground_stream(&sig).err(), Some(StreamError::NoConstants));
    }

    #[test]
    fn diagonal_with_only_constants_terminates() {
        let sig = Signature::parse("fun a/0\nfun b/0").unwrap();
        assert_eq!(diagonal_ground_stream(&sig).unwrap().count(), 2);
    }
}
