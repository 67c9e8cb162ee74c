//! Terms, formulas and sequents of first-order logic with equality.

mod parse;
mod print;
pub(crate) mod signature;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use parse::{parse_formula, parse_sequent, parse_term, Parser};
pub use print::{print_formula, print_sequent, print_term};
pub use signature::{Signature, SymbolDecl, SymbolKind};

/// Interned-by-value symbol or variable name.
pub type Name = Arc<str>;

/// Position of a subterm or subformula: child indices from the root.
///
/// Formula children: `Not` 0; binary connectives 0/1; quantifier body 0;
/// relation atom argument i; equality lhs 0, rhs 1. Term children are the
/// argument indices of an application.
pub type Path = Vec<usize>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("arity mismatch for `{symbol}`: declared {expected}, used with {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("`{symbol}` is declared as a {declared}, used as a {used}")]
    KindMismatch {
        symbol: String,
        declared: SymbolKind,
        used: SymbolKind,
    },
    #[error("not a sentence: variable `{0}` occurs free")]
    NotASentence(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("missing `=>` in sequent")]
    MissingTurnstile,
    #[error("substituted term `{0}` is not ground")]
    NonGroundTerm(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Name),
    App(Name, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: &str) -> Self {
        Term::App(name.into(), Vec::new())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Self {
        Term::App(name.into(), args)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Nesting depth; constants and variables have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    /// Number of symbol and variable occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn contains_var(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => &**y == x,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(x)),
        }
    }

    pub fn contains(&self, needle: &Term) -> bool {
        self == needle
            || match self {
                Term::Var(_) => false,
                Term::App(_, args) => args.iter().any(|a| a.contains(needle)),
            }
    }

    pub fn contains_symbol(&self, sym: &str) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(f, args) => &**f == sym || args.iter().any(|a| a.contains_symbol(sym)),
        }
    }

    pub fn subst_var(&self, x: &str, t: &Term) -> Term {
        match self {
            Term::Var(y) if &**y == x => t.clone(),
            Term::Var(_) => self.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.subst_var(x, t)).collect())
            }
        }
    }

    pub fn at(&self, path: &[usize]) -> Option<&Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => match self {
                Term::App(_, args) => args.get(i)?.at(rest),
                Term::Var(_) => None,
            },
        }
    }

    pub fn replace_at(&self, path: &[usize], with: &Term) -> Option<Term> {
        match path.split_first() {
            None => Some(with.clone()),
            Some((&i, rest)) => match self {
                Term::App(f, args) if i < args.len() => {
                    let mut args = args.clone();
                    args[i] = args[i].replace_at(rest, with)?;
                    Some(Term::App(f.clone(), args))
                }
                _ => None,
            },
        }
    }

    fn occurrences_into(&self, needle: &Term, prefix: &mut Path, out: &mut Vec<Path>) {
        if self == needle {
            out.push(prefix.clone());
            return;
        }
        if let Term::App(_, args) = self {
            for (i, a) in args.iter().enumerate() {
                prefix.push(i);
                a.occurrences_into(needle, prefix, out);
                prefix.pop();
            }
        }
    }

    fn ground_subterms_into(&self, out: &mut Vec<Term>) {
        if self.is_ground() && !out.contains(self) {
            out.push(self.clone());
        }
        if let Term::App(_, args) = self {
            for a in args {
                a.ground_subterms_into(out);
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Rel(Name, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Name, Box<Formula>),
    Exists(Name, Box<Formula>),
}

impl Formula {
    pub fn rel(name: &str, args: Vec<Term>) -> Self {
        Formula::Rel(name.into(), args)
    }
    pub fn eq(l: Term, r: Term) -> Self {
        Formula::Eq(l, r)
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }
    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }
    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }
    pub fn forall(x: &str, body: Formula) -> Self {
        Formula::Forall(x.into(), Box::new(body))
    }
    pub fn exists(x: &str, body: Formula) -> Self {
        Formula::Exists(x.into(), Box::new(body))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Rel(..) | Formula::Eq(..))
    }

    pub fn is_quantifier(&self) -> bool {
        matches!(self, Formula::Forall(..) | Formula::Exists(..))
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.free_vars_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_vars_into(&self, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
        let term = |t: &Term, bound: &Vec<Name>, out: &mut Vec<Name>| {
            fn go(t: &Term, bound: &Vec<Name>, out: &mut Vec<Name>) {
                match t {
                    Term::Var(x) => {
                        if !bound.contains(x) && !out.contains(x) {
                            out.push(x.clone());
                        }
                    }
                    Term::App(_, args) => args.iter().for_each(|a| go(a, bound, out)),
                }
            }
            go(t, bound, out)
        };
        match self {
            Formula::Rel(_, args) => args.iter().for_each(|a| term(a, bound, out)),
            Formula::Eq(l, r) => {
                term(l, bound, out);
                term(r, bound, out);
            }
            Formula::Not(a) => a.free_vars_into(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.free_vars_into(bound, out);
                b.free_vars_into(bound, out);
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                bound.push(x.clone());
                body.free_vars_into(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn has_free_var(&self, x: &str) -> bool {
        match self {
            Formula::Rel(_, args) => args.iter().any(|a| a.contains_var(x)),
            Formula::Eq(l, r) => l.contains_var(x) || r.contains_var(x),
            Formula::Not(a) => a.has_free_var(x),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.has_free_var(x) || b.has_free_var(x)
            }
            Formula::Forall(y, body) | Formula::Exists(y, body) => {
                &**y != x && body.has_free_var(x)
            }
        }
    }

    pub fn contains_symbol(&self, sym: &str) -> bool {
        match self {
            Formula::Rel(r, args) => &**r == sym || args.iter().any(|a| a.contains_symbol(sym)),
            Formula::Eq(l, r) => l.contains_symbol(sym) || r.contains_symbol(sym),
            Formula::Not(a) => a.contains_symbol(sym),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.contains_symbol(sym) || b.contains_symbol(sym)
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => body.contains_symbol(sym),
        }
    }

    /// Replaces free occurrences of `x` by `t` without capture checks.
    ///
    /// Sound whenever `t` is ground.
    pub fn subst_var(&self, x: &str, t: &Term) -> Formula {
        match self {
            Formula::Rel(r, args) => {
                Formula::Rel(r.clone(), args.iter().map(|a| a.subst_var(x, t)).collect())
            }
            Formula::Eq(l, r) => Formula::Eq(l.subst_var(x, t), r.subst_var(x, t)),
            Formula::Not(a) => Formula::not(a.subst_var(x, t)),
            Formula::And(a, b) => Formula::and(a.subst_var(x, t), b.subst_var(x, t)),
            Formula::Or(a, b) => Formula::or(a.subst_var(x, t), b.subst_var(x, t)),
            Formula::Implies(a, b) => Formula::implies(a.subst_var(x, t), b.subst_var(x, t)),
            Formula::Iff(a, b) => Formula::iff(a.subst_var(x, t), b.subst_var(x, t)),
            Formula::Forall(y, _) | Formula::Exists(y, _) if &**y == x => self.clone(),
            Formula::Forall(y, body) => Formula::Forall(y.clone(), Box::new(body.subst_var(x, t))),
            Formula::Exists(y, body) => Formula::Exists(y.clone(), Box::new(body.subst_var(x, t))),
        }
    }

    /// The term at `path`, if the path descends into a term position.
    pub fn term_at(&self, path: &[usize]) -> Option<&Term> {
        let (&i, rest) = path.split_first()?;
        match self {
            Formula::Rel(_, args) => args.get(i)?.at(rest),
            Formula::Eq(l, r) => match i {
                0 => l.at(rest),
                1 => r.at(rest),
                _ => None,
            },
            Formula::Not(a) if i == 0 => a.term_at(rest),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                match i {
                    0 => a.term_at(rest),
                    1 => b.term_at(rest),
                    _ => None,
                }
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) if i == 0 => body.term_at(rest),
            _ => None,
        }
    }

    /// Variables bound by quantifiers strictly above the term position `path`.
    pub fn binders_above(&self, path: &[usize]) -> Vec<Name> {
        let mut out = Vec::new();
        let mut cur = self;
        for &i in path {
            match cur {
                Formula::Not(a) => cur = a,
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                    cur = if i == 0 { a } else { b }
                }
                Formula::Forall(x, body) | Formula::Exists(x, body) => {
                    out.push(x.clone());
                    cur = body;
                }
                Formula::Rel(..) | Formula::Eq(..) => break,
            }
        }
        out
    }

    pub fn replace_term_at(&self, path: &[usize], with: &Term) -> Option<Formula> {
        let (&i, rest) = path.split_first()?;
        Some(match self {
            Formula::Rel(r, args) => {
                let mut args = args.clone();
                let slot = args.get_mut(i)?;
                *slot = slot.replace_at(rest, with)?;
                Formula::Rel(r.clone(), args)
            }
            Formula::Eq(l, r) => match i {
                0 => Formula::Eq(l.replace_at(rest, with)?, r.clone()),
                1 => Formula::Eq(l.clone(), r.replace_at(rest, with)?),
                _ => return None,
            },
            Formula::Not(a) if i == 0 => Formula::not(a.replace_term_at(rest, with)?),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                let (na, nb) = match i {
                    0 => (a.replace_term_at(rest, with)?, (**b).clone()),
                    1 => ((**a).clone(), b.replace_term_at(rest, with)?),
                    _ => return None,
                };
                self.rebuild_binary(na, nb)
            }
            Formula::Forall(x, body) if i == 0 => {
                Formula::Forall(x.clone(), Box::new(body.replace_term_at(rest, with)?))
            }
            Formula::Exists(x, body) if i == 0 => {
                Formula::Exists(x.clone(), Box::new(body.replace_term_at(rest, with)?))
            }
            _ => return None,
        })
    }

    fn rebuild_binary(&self, a: Formula, b: Formula) -> Formula {
        match self {
            Formula::And(..) => Formula::and(a, b),
            Formula::Or(..) => Formula::or(a, b),
            Formula::Implies(..) => Formula::implies(a, b),
            Formula::Iff(..) => Formula::iff(a, b),
            _ => unreachable!("rebuild_binary on non-binary formula"),
        }
    }

    /// All term positions whose subterm equals `needle` (outermost matches only).
    pub fn term_occurrences(&self, needle: &Term) -> Vec<Path> {
        let mut out = Vec::new();
        self.term_occurrences_into(needle, &mut Vec::new(), &mut out);
        out
    }

    fn term_occurrences_into(&self, needle: &Term, prefix: &mut Path, out: &mut Vec<Path>) {
        match self {
            Formula::Rel(_, args) => {
                for (i, a) in args.iter().enumerate() {
                    prefix.push(i);
                    a.occurrences_into(needle, prefix, out);
                    prefix.pop();
                }
            }
            Formula::Eq(l, r) => {
                for (i, a) in [l, r].into_iter().enumerate() {
                    prefix.push(i);
                    a.occurrences_into(needle, prefix, out);
                    prefix.pop();
                }
            }
            Formula::Not(a) => {
                prefix.push(0);
                a.term_occurrences_into(needle, prefix, out);
                prefix.pop();
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                for (i, c) in [a, b].into_iter().enumerate() {
                    prefix.push(i);
                    c.term_occurrences_into(needle, prefix, out);
                    prefix.pop();
                }
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => {
                prefix.push(0);
                body.term_occurrences_into(needle, prefix, out);
                prefix.pop();
            }
        }
    }

    /// Maximum term depth over all atoms.
    pub fn max_term_depth(&self) -> usize {
        match self {
            Formula::Rel(_, args) => args.iter().map(Term::depth).max().unwrap_or(0),
            Formula::Eq(l, r) => l.depth().max(r.depth()),
            Formula::Not(a) => a.max_term_depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.max_term_depth().max(b.max_term_depth())
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => body.max_term_depth(),
        }
    }

    /// Visits every term argument position (atoms only, not nested subterms).
    pub fn for_each_atom_term(&self, f: &mut impl FnMut(&Term)) {
        match self {
            Formula::Rel(_, args) => args.iter().for_each(f),
            Formula::Eq(l, r) => {
                f(l);
                f(r);
            }
            Formula::Not(a) => a.for_each_atom_term(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.for_each_atom_term(f);
                b.for_each_atom_term(f);
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => body.for_each_atom_term(f),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

/// Substitutes a ground term for the free occurrences of `x`.
pub fn substitute(phi: &Formula, x: &str, t: &Term) -> Result<Formula, SyntaxError> {
    if !t.is_ground() {
        return Err(SyntaxError::NonGroundTerm(print_term(t)));
    }
    Ok(phi.subst_var(x, t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Antecedent,
    Succedent,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Antecedent => Side::Succedent,
            Side::Succedent => Side::Antecedent,
        }
    }
}

/// A formula position inside a sequent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Occurrence {
    pub side: Side,
    pub index: usize,
}

impl Occurrence {
    pub fn ante(index: usize) -> Self {
        Occurrence { side: Side::Antecedent, index }
    }
    pub fn succ(index: usize) -> Self {
        Occurrence { side: Side::Succedent, index }
    }
}

/// `Γ ⇒ Δ`. Lists keep display order; equality is multiset equality.
#[derive(Debug, Clone, Default, Eq)]
pub struct Sequent {
    pub antecedent: Vec<Formula>,
    pub succedent: Vec<Formula>,
}

impl PartialEq for Sequent {
    fn eq(&self, other: &Self) -> bool {
        multiset_eq(&self.antecedent, &other.antecedent)
            && multiset_eq(&self.succedent, &other.succedent)
    }
}

impl std::hash::Hash for Sequent {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.canonical_key().hash(state)
    }
}

/// Multiset equality of formula lists.
pub fn multiset_eq(a: &[Formula], b: &[Formula]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut counts: HashMap<&Formula, isize> = HashMap::new();
    for f in a {
        *counts.entry(f).or_default() += 1;
    }
    for f in b {
        *counts.entry(f).or_default() -= 1;
    }
    counts.values().all(|&c| c == 0)
}

impl Sequent {
    pub fn new(antecedent: Vec<Formula>, succedent: Vec<Formula>) -> Self {
        Sequent { antecedent, succedent }
    }

    pub fn side(&self, side: Side) -> &Vec<Formula> {
        match side {
            Side::Antecedent => &self.antecedent,
            Side::Succedent => &self.succedent,
        }
    }

    pub fn side_mut(&mut self, side: Side) -> &mut Vec<Formula> {
        match side {
            Side::Antecedent => &mut self.antecedent,
            Side::Succedent => &mut self.succedent,
        }
    }

    pub fn get(&self, occ: Occurrence) -> Option<&Formula> {
        self.side(occ.side).get(occ.index)
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.antecedent.iter().chain(self.succedent.iter())
    }

    /// Display-order-insensitive key: both sides sorted.
    pub fn canonical_key(&self) -> (Vec<Formula>, Vec<Formula>) {
        let mut a = self.antecedent.clone();
        let mut s = self.succedent.clone();
        a.sort();
        s.sort();
        (a, s)
    }

    /// Structural (order-sensitive) equality.
    pub fn same_display(&self, other: &Sequent) -> bool {
        self.antecedent == other.antecedent && self.succedent == other.succedent
    }

    pub fn free_vars(&self) -> Vec<Name> {
        let mut out: Vec<Name> = Vec::new();
        for f in self.formulas() {
            for v in f.free_vars() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.formulas().all(Formula::is_sentence)
    }

    pub fn contains_symbol(&self, sym: &str) -> bool {
        self.formulas().any(|f| f.contains_symbol(sym))
    }

    pub fn max_term_depth(&self) -> usize {
        self.formulas().map(Formula::max_term_depth).max().unwrap_or(0)
    }

    pub fn is_atomic(&self) -> bool {
        self.formulas().all(Formula::is_atomic)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_sequent(self))
    }
}

/// Every ground subterm of `s`, deduplicated, in order of first occurrence.
pub fn collect_ground_terms(s: &Sequent) -> Vec<Term> {
    let mut out = Vec::new();
    for f in s.formulas() {
        f.for_each_atom_term(&mut |t| t.ground_subterms_into(&mut out));
    }
    out
}

/// Nullary function symbols occurring in `s`, in order of first occurrence.
pub fn constants_of(s: &Sequent) -> Vec<Name> {
    let mut out: Vec<Name> = Vec::new();
    fn go(t: &Term, out: &mut Vec<Name>) {
        if let Term::App(c, args) = t {
            if args.is_empty() {
                if !out.contains(c) {
                    out.push(c.clone());
                }
            } else {
                args.iter().for_each(|a| go(a, out));
            }
        }
    }
    for f in s.formulas() {
        f.for_each_atom_term(&mut |t| go(t, &mut out));
    }
    out
}
