//! Exhaustive finite-model search by lazy cell assignment.
//!
//! Table cells are assigned only when evaluation needs them. A cell whose
//! arguments are all already-used elements may take only used values or the
//! least unused one; every other structure is isomorphic to one visited, so
//! the search stays complete for each size.

use std::collections::HashMap;
use std::time::Duration;

use super::{FunctionTable, RelationTable, Structure};
use crate::budget::CancelToken;
use crate::syntax::{Formula, Name, Sequent, Signature, SymbolKind, Term};

pub const DEFAULT_MODEL_MAX_SIZE: usize = 3;
pub const DEFAULT_MODEL_TIMEOUT: Duration = Duration::from_secs(2);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CountermodelResult {
    Found(Structure),
    /// No countermodel with at most `max_size` elements exists.
    NotFound,
    BudgetExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Table {
    Fun(usize),
    Rel(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Cell {
    table: Table,
    index: usize,
}

enum CTerm {
    Var(usize),
    App(usize, Vec<CTerm>),
}

enum CForm {
    Rel(usize, Vec<CTerm>),
    Eq(CTerm, CTerm),
    Not(Box<CForm>),
    And(Box<CForm>, Box<CForm>),
    Or(Box<CForm>, Box<CForm>),
    Imp(Box<CForm>, Box<CForm>),
    Iff(Box<CForm>, Box<CForm>),
    All(Box<CForm>),
    Ex(Box<CForm>),
}

#[derive(Clone, Copy)]
enum V {
    T,
    F,
    Need(Cell),
}

struct Symbols {
    funs: Vec<(Name, usize)>,
    rels: Vec<(Name, usize)>,
    fun_index: HashMap<Name, usize>,
    rel_index: HashMap<Name, usize>,
}

impl Symbols {
    fn compile_term(&self, t: &Term, scope: &mut Vec<Name>) -> CTerm {
        match t {
            Term::Var(x) => {
                let slot = scope.iter().rposition(|y| y == x).expect("sequent formulas are closed");
                CTerm::Var(slot)
            }
            Term::App(f, args) => CTerm::App(
                self.fun_index[f],
                args.iter().map(|a| self.compile_term(a, scope)).collect(),
            ),
        }
    }

    fn compile(&self, f: &Formula, scope: &mut Vec<Name>) -> CForm {
        let bin = |a: &Formula, b: &Formula, scope: &mut Vec<Name>| {
            (Box::new(self.compile(a, scope)), Box::new(self.compile(b, scope)))
        };
        match f {
            Formula::Rel(r, args) => CForm::Rel(
                self.rel_index[r],
                args.iter().map(|a| self.compile_term(a, scope)).collect(),
            ),
            Formula::Eq(l, r) => CForm::Eq(self.compile_term(l, scope), self.compile_term(r, scope)),
            Formula::Not(a) => CForm::Not(Box::new(self.compile(a, scope))),
            Formula::And(a, b) => {
                let (a, b) = bin(a, b, scope);
                CForm::And(a, b)
            }
            Formula::Or(a, b) => {
                let (a, b) = bin(a, b, scope);
                CForm::Or(a, b)
            }
            Formula::Implies(a, b) => {
                let (a, b) = bin(a, b, scope);
                CForm::Imp(a, b)
            }
            Formula::Iff(a, b) => {
                let (a, b) = bin(a, b, scope);
                CForm::Iff(a, b)
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                scope.push(x.clone());
                let body = Box::new(self.compile(body, scope));
                scope.pop();
                if matches!(f, Formula::Forall(..)) {
                    CForm::All(body)
                } else {
                    CForm::Ex(body)
                }
            }
        }
    }
}

struct Search<'a> {
    size: usize,
    syms: &'a Symbols,
    funs: Vec<Vec<Option<usize>>>,
    rels: Vec<Vec<Option<bool>>>,
    /// Largest element mentioned by any assigned cell, plus one.
    used: usize,
    cancel: &'a CancelToken,
    steps: u64,
}

impl Search<'_> {
    fn new<'a>(size: usize, syms: &'a Symbols, cancel: &'a CancelToken) -> Search<'a> {
        Search {
            size,
            syms,
            funs: syms.funs.iter().map(|(_, k)| vec![None; size.pow(*k as u32)]).collect(),
            rels: syms.rels.iter().map(|(_, k)| vec![None; size.pow(*k as u32)]).collect(),
            used: 0,
            cancel,
            steps: 0,
        }
    }

    fn index(&self, args: &[usize]) -> usize {
        args.iter().fold(0, |acc, &a| acc * self.size + a)
    }

    fn term(&self, t: &CTerm, env: &mut Vec<usize>) -> Result<usize, Cell> {
        match t {
            CTerm::Var(slot) => Ok(env[*slot]),
            CTerm::App(f, args) => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(self.term(a, env)?);
                }
                let index = self.index(&vals);
                self.funs[*f][index].ok_or(Cell {
                    table: Table::Fun(*f),
                    index,
                })
            }
        }
    }

    fn form(&self, f: &CForm, env: &mut Vec<usize>) -> V {
        let lift = |b: bool| if b { V::T } else { V::F };
        match f {
            CForm::Rel(r, args) => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    match self.term(a, env) {
                        Ok(v) => vals.push(v),
                        Err(c) => return V::Need(c),
                    }
                }
                let index = self.index(&vals);
                match self.rels[*r][index] {
                    Some(b) => lift(b),
                    None => V::Need(Cell {
                        table: Table::Rel(*r),
                        index,
                    }),
                }
            }
            CForm::Eq(l, r) => match (self.term(l, env), self.term(r, env)) {
                (Ok(a), Ok(b)) => lift(a == b),
                (Err(c), _) | (_, Err(c)) => V::Need(c),
            },
            CForm::Not(a) => match self.form(a, env) {
                V::T => V::F,
                V::F => V::T,
                n => n,
            },
            CForm::And(a, b) => match self.form(a, env) {
                V::F => V::F,
                V::T => self.form(b, env),
                n => match self.form(b, env) {
                    V::F => V::F,
                    _ => n,
                },
            },
            CForm::Or(a, b) => match self.form(a, env) {
                V::T => V::T,
                V::F => self.form(b, env),
                n => match self.form(b, env) {
                    V::T => V::T,
                    _ => n,
                },
            },
            CForm::Imp(a, b) => match self.form(a, env) {
                V::F => V::T,
                V::T => self.form(b, env),
                n => match self.form(b, env) {
                    V::T => V::T,
                    _ => n,
                },
            },
            CForm::Iff(a, b) => match (self.form(a, env), self.form(b, env)) {
                (V::Need(c), _) | (_, V::Need(c)) => V::Need(c),
                (x, y) => lift(matches!((x, y), (V::T, V::T) | (V::F, V::F))),
            },
            CForm::All(body) | CForm::Ex(body) => {
                let universal = matches!(f, CForm::All(_));
                let mut pending = None;
                for u in 0..self.size {
                    env.push(u);
                    let v = self.form(body, env);
                    env.pop();
                    match (v, universal) {
                        (V::F, true) => return V::F,
                        (V::T, false) => return V::T,
                        (V::Need(c), _) => {
                            pending.get_or_insert(c);
                        }
                        _ => {}
                    }
                }
                match pending {
                    Some(c) => V::Need(c),
                    None => lift(universal),
                }
            }
        }
    }

    fn cell_args(&self, cell: Cell) -> Vec<usize> {
        let arity = match cell.table {
            Table::Fun(f) => self.syms.funs[f].1,
            Table::Rel(r) => self.syms.rels[r].1,
        };
        let mut idx = cell.index;
        let mut out = vec![0; arity];
        for slot in out.iter_mut().rev() {
            *slot = idx % self.size;
            idx /= self.size;
        }
        out
    }

    /// `Some(true)` on a countermodel, `None` on cancellation.
    fn dfs(&mut self, ante: &[CForm], succ: &[CForm]) -> Option<bool> {
        self.steps += 1;
        if self.steps.is_multiple_of(256) && self.cancel.is_cancelled() {
            return None;
        }
        let mut need = None;
        let mut env = Vec::new();
        for (f, want) in ante.iter().map(|f| (f, true)).chain(succ.iter().map(|f| (f, false))) {
            match self.form(f, &mut env) {
                V::T if !want => return Some(false),
                V::F if want => return Some(false),
                V::Need(c) => {
                    need.get_or_insert(c);
                }
                _ => {}
            }
        }
        let Some(cell) = need else {
            return Some(true);
        };
        let args = self.cell_args(cell);
        let saved = self.used;
        let args_used = args.iter().all(|&a| a < self.used);
        self.used = args.iter().fold(self.used, |m, &a| m.max(a + 1));
        let found = match cell.table {
            Table::Fun(f) => {
                let limit = if args_used { (self.used + 1).min(self.size) } else { self.size };
                let base = self.used;
                let mut found = Some(false);
                for v in 0..limit {
                    self.funs[f][cell.index] = Some(v);
                    self.used = base.max(v + 1);
                    found = self.dfs(ante, succ);
                    if found != Some(false) {
                        break;
                    }
                }
                if found != Some(true) {
                    self.funs[f][cell.index] = None;
                }
                found
            }
            Table::Rel(r) => {
                let mut found = Some(false);
                for b in [false, true] {
                    self.rels[r][cell.index] = Some(b);
                    found = self.dfs(ante, succ);
                    if found != Some(false) {
                        break;
                    }
                }
                if found != Some(true) {
                    self.rels[r][cell.index] = None;
                }
                found
            }
        };
        if found != Some(true) {
            self.used = saved;
        }
        found
    }

    fn into_structure(self) -> Structure {
        let mut m = Structure::new(self.size);
        for ((name, arity), cells) in self.syms.funs.iter().zip(self.funs) {
            let values = cells.into_iter().map(|v| v.unwrap_or(0)).collect();
            m.functions.insert(name.clone(), FunctionTable { arity: *arity, values });
        }
        for ((name, arity), cells) in self.syms.rels.iter().zip(self.rels) {
            let holds = cells.into_iter().map(|v| v.unwrap_or(false)).collect();
            m.relations.insert(name.clone(), RelationTable { arity: *arity, holds });
        }
        m
    }
}

/// Searches structures of size `1..=max_size` for a countermodel of `s`.
///
/// Only symbols occurring in `s` are interpreted.
pub fn find_countermodel(s: &Sequent, max_size: usize, cancel: &CancelToken) -> CountermodelResult {
    let sig = match Signature::of_sequent(s) {
        Ok(sig) => sig,
        Err(_) => return CountermodelResult::NotFound,
    };
    let mut syms = Symbols {
        funs: Vec::new(),
        rels: Vec::new(),
        fun_index: HashMap::new(),
        rel_index: HashMap::new(),
    };
    for d in sig.decls() {
        match d.kind {
            SymbolKind::Function => {
                syms.fun_index.insert(d.name.clone(), syms.funs.len());
                syms.funs.push((d.name.clone(), d.arity));
            }
            SymbolKind::Relation => {
                syms.rel_index.insert(d.name.clone(), syms.rels.len());
                syms.rels.push((d.name.clone(), d.arity));
            }
        }
    }
    let ante: Vec<CForm> = s.antecedent.iter().map(|f| syms.compile(f, &mut Vec::new())).collect();
    let succ: Vec<CForm> = s.succedent.iter().map(|f| syms.compile(f, &mut Vec::new())).collect();
    for size in 1..=max_size {
        if cancel.is_cancelled() {
            return CountermodelResult::BudgetExhausted;
        }
        let mut search = Search::new(size, &syms, cancel);
        match search.dfs(&ante, &succ) {
            Some(true) => return CountermodelResult::Found(search.into_structure()),
            Some(false) => {}
            None => return CountermodelResult::BudgetExhausted,
        }
    }
    CountermodelResult::NotFound
}
