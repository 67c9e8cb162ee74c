use std::collections::HashMap;

use super::{CongruencePartition, EufError, TermId};
use crate::semantics::{is_countermodel, Structure};
use crate::syntax::{Formula, Name, Sequent, Term};

/// Why an atomic sequent is valid. Indices refer to the decided sequent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosingWitness {
    /// Succedent equation `u = v` with `u ≡ v`.
    Equality { succ: usize },
    /// Antecedent `R(s̄)` and succedent `R(t̄)` with `s̄ ≡ t̄` pairwise.
    Relation { ante: usize, succ: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum AtomicVerdict {
    Valid(ClosingWitness),
    Invalid(Structure),
}

pub type IndexedAtoms<'a> = Vec<(usize, &'a Formula)>;

/// Atomic formulas of `s` with their original positions.
pub fn atomic_part(s: &Sequent) -> (IndexedAtoms<'_>, IndexedAtoms<'_>) {
    fn pick(fs: &[Formula]) -> Vec<(usize, &Formula)> {
        fs.iter().enumerate().filter(|(_, f)| f.is_atomic()).collect()
    }
    (pick(&s.antecedent), pick(&s.succedent))
}

/// The closure of the antecedent equations of `s` over all its atomic terms.
pub(crate) fn close_atoms(s: &Sequent) -> Result<(CongruencePartition, Vec<usize>), EufError> {
    let (ante, succ) = atomic_part(s);
    let mut cc = CongruencePartition::new();
    for (_, f) in ante.iter().chain(succ.iter()) {
        for t in atom_terms(f) {
            cc.add_term(t)?;
        }
    }
    // eq_index[k] = antecedent position of the k-th asserted equation.
    let mut eq_index = Vec::new();
    for (i, f) in &ante {
        if let Formula::Eq(l, r) = f {
            cc.assert_eq(l, r)?;
            eq_index.push(*i);
        }
    }
    Ok((cc, eq_index))
}

fn atom_terms(f: &Formula) -> Vec<&Term> {
    match f {
        Formula::Eq(l, r) => vec![l, r],
        Formula::Rel(_, args) => args.iter().collect(),
        _ => Vec::new(),
    }
}

fn args_congruent(cc: &mut CongruencePartition, a: &[Term], b: &[Term]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            let (i, j) = (cc.id_of(x).expect("interned"), cc.id_of(y).expect("interned"));
            cc.find(i) == cc.find(j)
        })
}

/// Finds a closing witness for the atomic formulas of `s`, ignoring the rest.
pub(crate) fn closing_witness(
    cc: &mut CongruencePartition,
    s: &Sequent,
) -> Option<ClosingWitness> {
    let (ante, succ) = atomic_part(s);
    for (j, g) in &succ {
        match g {
            Formula::Eq(l, r) => {
                if args_congruent(cc, std::slice::from_ref(l), std::slice::from_ref(r)) {
                    return Some(ClosingWitness::Equality { succ: *j });
                }
            }
            Formula::Rel(rel, targs) => {
                for (i, f) in &ante {
                    if let Formula::Rel(r2, sargs) = f {
                        if r2 == rel && args_congruent(cc, sargs, targs) {
                            return Some(ClosingWitness::Relation { ante: *i, succ: *j });
                        }
                    }
                }
            }
            _ => {}
        }
    }
    None
}

/// Decides a sequent of atomic formulas modulo the theory of equality.
///
/// A `Valid` witness is sound. An `Invalid` structure is checked with
/// [`is_countermodel`] before it is returned.
pub fn decide_atomic(s: &Sequent) -> Result<AtomicVerdict, EufError> {
    if let Some(f) = s.formulas().find(|f| !f.is_atomic()) {
        return Err(EufError::NotAtomic(f.to_string()));
    }
    let (mut cc, _) = close_atoms(s)?;
    if let Some(w) = closing_witness(&mut cc, s) {
        return Ok(AtomicVerdict::Valid(w));
    }
    let model = extract_model(&mut cc, s);
    match is_countermodel(s, &model) {
        Ok(true) => Ok(AtomicVerdict::Invalid(model)),
        _ => Err(EufError::InternalInconsistency),
    }
}

/// The term model of `cc` plus one junk element, with relations true exactly
/// on the antecedent atoms of `s`.
pub fn extract_model(cc: &mut CongruencePartition, s: &Sequent) -> Structure {
    let mut class_of: HashMap<TermId, usize> = HashMap::new();
    let mut next = 0;
    for id in 0..cc.len() {
        let r = cc.find(id);
        class_of.entry(r).or_insert_with(|| {
            next += 1;
            next - 1
        });
    }
    let junk = next;
    let size = next + 1;
    let value = |cc: &mut CongruencePartition, t: &Term| -> usize {
        let id = cc.id_of(t).expect("interned");
        class_of[&cc.find(id)]
    };

    let mut functions: HashMap<Name, (usize, HashMap<Vec<usize>, usize>)> = HashMap::new();
    for id in 0..cc.len() {
        let t = cc.term(id).clone();
        if let Term::App(f, args) = &t {
            let vals: Vec<usize> = args.iter().map(|a| value(cc, a)).collect();
            let v = value(cc, &t);
            functions.entry(f.clone()).or_insert_with(|| (args.len(), HashMap::new())).1.insert(vals, v);
        }
    }
    let mut m = Structure::new(size);
    for (f, (arity, table)) in functions {
        m = m.with_function(&f, arity, |args| table.get(args).copied().unwrap_or(junk));
    }

    let mut relations: HashMap<Name, (usize, Vec<Vec<usize>>)> = HashMap::new();
    for f in s.formulas() {
        if let Formula::Rel(r, args) = f {
            relations.entry(r.clone()).or_insert_with(|| (args.len(), Vec::new()));
        }
    }
    for f in &s.antecedent {
        if let Formula::Rel(r, args) = f {
            let vals: Vec<usize> = args.iter().map(|a| value(cc, a)).collect();
            relations.get_mut(r).expect("collected").1.push(vals);
        }
    }
    for (r, (arity, tuples)) in relations {
        let refs: Vec<&[usize]> = tuples.iter().map(Vec::as_slice).collect();
        m = m.with_relation(&r, arity, &refs);
    }
    m
}
