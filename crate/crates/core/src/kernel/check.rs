//! Independent proof checker.
//!
//! Re-validates each inference by matching the labelled rule schema against
//! the stored conclusion and premisses with multiset arithmetic. It shares no
//! code with premiss construction and ignores stored parameters, so a tree
//! assembled by any means is judged on its sequents alone.

use std::collections::HashMap;

use super::{NodeId, ProofTree, RuleId};
use crate::syntax::{Formula, Sequent, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofCheck {
    Complete,
    Incomplete(Vec<NodeId>),
    Malformed { node: NodeId, reason: String },
}

impl ProofCheck {
    pub fn is_complete(&self) -> bool {
        matches!(self, ProofCheck::Complete)
    }
}

type Bag<'a> = HashMap<&'a Formula, isize>;

fn bag(fs: &[Formula]) -> Bag<'_> {
    let mut b = HashMap::new();
    for f in fs {
        *b.entry(f).or_default() += 1;
    }
    b
}

/// `big − small` as a multiset, or `None` when `small ⊄ big`.
fn difference<'a>(big: &'a [Formula], small: &[&Formula]) -> Option<Vec<&'a Formula>> {
    let mut b = bag(big);
    for f in small {
        let slot = b.get_mut(*f)?;
        *slot -= 1;
        if *slot < 0 {
            return None;
        }
    }
    let mut out = Vec::new();
    for f in big {
        let slot = b.get_mut(f).expect("present");
        if *slot > 0 {
            *slot -= 1;
            out.push(f);
        }
    }
    Some(out)
}

/// `side` with the given indices removed.
fn without<'a>(side: &'a [Formula], skip: &[usize]) -> Vec<&'a Formula> {
    side.iter()
        .enumerate()
        .filter(|(i, _)| !skip.contains(i))
        .map(|(_, f)| f)
        .collect()
}

/// Multiset equality of `actual` with `base + added`.
fn equals_plus(actual: &[Formula], base: &[&Formula], added: &[&Formula]) -> bool {
    if actual.len() != base.len() + added.len() {
        return false;
    }
    let mut all: Vec<&Formula> = base.to_vec();
    all.extend_from_slice(added);
    difference(actual, &all).is_some_and(|rest| rest.is_empty())
}

/// Matches `psi` against `phi[t/x]`, returning the unique `t` if `x` is free in `phi`.
///
/// `Ok(None)` means `x` does not occur free and `psi == phi`.
fn match_instance(phi: &Formula, x: &str, psi: &Formula) -> Result<Option<Term>, ()> {
    fn terms(a: &Term, b: &Term, x: &str, t: &mut Option<Term>) -> Result<(), ()> {
        match a {
            Term::Var(y) if &**y == x => match t {
                Some(prev) if prev != b => Err(()),
                Some(_) => Ok(()),
                None => {
                    *t = Some(b.clone());
                    Ok(())
                }
            },
            Term::Var(_) => (a == b).then_some(()).ok_or(()),
            Term::App(f, xs) => match b {
                Term::App(g, ys) if f == g && xs.len() == ys.len() => {
                    xs.iter().zip(ys).try_for_each(|(p, q)| terms(p, q, x, t))
                }
                _ => Err(()),
            },
        }
    }
    fn forms(a: &Formula, b: &Formula, x: &str, t: &mut Option<Term>) -> Result<(), ()> {
        match (a, b) {
            (Formula::Rel(r, xs), Formula::Rel(q, ys)) if r == q && xs.len() == ys.len() => {
                xs.iter().zip(ys).try_for_each(|(p, q)| terms(p, q, x, t))
            }
            (Formula::Eq(l1, r1), Formula::Eq(l2, r2)) => {
                terms(l1, l2, x, t)?;
                terms(r1, r2, x, t)
            }
            (Formula::Not(p), Formula::Not(q)) => forms(p, q, x, t),
            (Formula::And(p1, p2), Formula::And(q1, q2))
            | (Formula::Or(p1, p2), Formula::Or(q1, q2))
            | (Formula::Implies(p1, p2), Formula::Implies(q1, q2))
            | (Formula::Iff(p1, p2), Formula::Iff(q1, q2)) => {
                forms(p1, q1, x, t)?;
                forms(p2, q2, x, t)
            }
            (Formula::Forall(y, p), Formula::Forall(z, q)) | (Formula::Exists(y, p), Formula::Exists(z, q))
                if y == z =>
            {
                if &**y == x {
                    (p == q).then_some(()).ok_or(())
                } else {
                    forms(p, q, x, t)
                }
            }
            _ => Err(()),
        }
    }
    let mut t = None;
    forms(phi, psi, x, &mut t)?;
    Ok(t)
}

/// True iff `after` is `before` with at least one occurrence of `s` replaced by `s2`.
pub fn differs_by_replacement(before: &Formula, after: &Formula, s: &Term, s2: &Term) -> bool {
    fn terms(a: &Term, b: &Term, s: &Term, s2: &Term, n: &mut usize) -> bool {
        if a == s && b == s2 {
            *n += 1;
            return true;
        }
        if a == b {
            return true;
        }
        match (a, b) {
            (Term::App(f, xs), Term::App(g, ys)) if f == g && xs.len() == ys.len() => {
                xs.iter().zip(ys).all(|(p, q)| terms(p, q, s, s2, n))
            }
            _ => false,
        }
    }
    fn forms(a: &Formula, b: &Formula, s: &Term, s2: &Term, n: &mut usize) -> bool {
        match (a, b) {
            (Formula::Rel(r, xs), Formula::Rel(q, ys)) if r == q && xs.len() == ys.len() => {
                xs.iter().zip(ys).all(|(p, q)| terms(p, q, s, s2, n))
            }
            (Formula::Eq(l1, r1), Formula::Eq(l2, r2)) => {
                terms(l1, l2, s, s2, n) && terms(r1, r2, s, s2, n)
            }
            (Formula::Not(p), Formula::Not(q)) => forms(p, q, s, s2, n),
            (Formula::And(p1, p2), Formula::And(q1, q2))
            | (Formula::Or(p1, p2), Formula::Or(q1, q2))
            | (Formula::Implies(p1, p2), Formula::Implies(q1, q2))
            | (Formula::Iff(p1, p2), Formula::Iff(q1, q2)) => {
                forms(p1, q1, s, s2, n) && forms(p2, q2, s, s2, n)
            }
            (Formula::Forall(y, p), Formula::Forall(z, q)) | (Formula::Exists(y, p), Formula::Exists(z, q)) => {
                y == z && forms(p, q, s, s2, n)
            }
            _ => false,
        }
    }
    if s == s2 {
        // Replacing by an identical term leaves no trace; any occurrence counts.
        return before == after && !before.term_occurrences(s).is_empty();
    }
    let mut n = 0;
    forms(before, after, s, s2, &mut n) && n > 0
}

fn single(v: Option<Vec<&Formula>>) -> Option<&Formula> {
    match v {
        Some(v) if v.len() == 1 => Some(v[0]),
        _ => None,
    }
}

/// Does `(c, ps)` instantiate the schema of `rule`?
fn instance_of(rule: RuleId, c: &Sequent, ps: &[&Sequent]) -> bool {
    use RuleId::*;
    if ps.len() != rule.premiss_count() {
        return false;
    }
    let ca = &c.antecedent;
    let cs = &c.succedent;
    let all_a = |skip: &[usize]| without(ca, skip);
    let all_s = |skip: &[usize]| without(cs, skip);
    match rule {
        Ax => ca.iter().any(|f| cs.contains(f)),
        EqR => cs.iter().any(|f| matches!(f, Formula::Eq(l, r) if l == r)),
        EqL => {
            let p = ps[0];
            equals_plus(&p.succedent, &all_s(&[]), &[])
                && single(difference(&p.antecedent, &all_a(&[])))
                    .is_some_and(|f| matches!(f, Formula::Eq(l, r) if l == r && l.is_ground()))
        }
        ContrL | ContrR => {
            let p = ps[0];
            let left = rule == ContrL;
            let (side, other, pside, pother) = if left {
                (ca, cs, &p.antecedent, &p.succedent)
            } else {
                (cs, ca, &p.succedent, &p.antecedent)
            };
            let other_all: Vec<&Formula> = other.iter().collect();
            equals_plus(pother, &other_all, &[])
                && side
                    .iter()
                    .any(|f| equals_plus(pside, &side.iter().collect::<Vec<_>>(), &[f]))
        }
        SubstL | SubstR => subst_instance(rule, c, ps[0]),
        _ => ca
            .iter()
            .enumerate()
            .map(|(i, f)| (true, i, f))
            .chain(cs.iter().enumerate().map(|(i, f)| (false, i, f)))
            .any(|(left, i, f)| logical_instance(rule, c, ps, left, i, f)),
    }
}

fn logical_instance(rule: RuleId, c: &Sequent, ps: &[&Sequent], left: bool, i: usize, f: &Formula) -> bool {
    use RuleId::*;
    let (ca, cs) = (&c.antecedent, &c.succedent);
    // Γ with the principal removed on its own side; the other side untouched.
    let (ga, gs): (Vec<&Formula>, Vec<&Formula>) = if left {
        (without(ca, &[i]), cs.iter().collect())
    } else {
        (ca.iter().collect(), without(cs, &[i]))
    };
    let is = |p: &Sequent, add_a: &[&Formula], add_s: &[&Formula]| {
        equals_plus(&p.antecedent, &ga, add_a) && equals_plus(&p.succedent, &gs, add_s)
    };
    match (rule, left, f) {
        (AndL, true, Formula::And(a, b)) => is(ps[0], &[a, b], &[]),
        (AndR, false, Formula::And(a, b)) => is(ps[0], &[], &[a]) && is(ps[1], &[], &[b]),
        (OrL, true, Formula::Or(a, b)) => is(ps[0], &[a], &[]) && is(ps[1], &[b], &[]),
        (OrR, false, Formula::Or(a, b)) => is(ps[0], &[], &[a, b]),
        (NotL, true, Formula::Not(a)) => is(ps[0], &[], &[a]),
        (NotR, false, Formula::Not(a)) => is(ps[0], &[a], &[]),
        (ImpL, true, Formula::Implies(a, b)) => is(ps[0], &[b], &[]) && is(ps[1], &[], &[a]),
        (ImpR, false, Formula::Implies(a, b)) => is(ps[0], &[a], &[b]),
        (IffL, true, Formula::Iff(a, b)) => {
            let ab = Formula::implies((**a).clone(), (**b).clone());
            let ba = Formula::implies((**b).clone(), (**a).clone());
            is(ps[0], &[&ab, &ba], &[])
        }
        (IffR, false, Formula::Iff(a, b)) => is(ps[0], &[a], &[b]) && is(ps[1], &[b], &[a]),
        (ForallL, true, Formula::Forall(x, body))
        | (ExistsR, false, Formula::Exists(x, body))
        | (ExistsL, true, Formula::Exists(x, body))
        | (ForallR, false, Formula::Forall(x, body)) => {
            let p = ps[0];
            let (same, grown, base_same, base_grown) = if left {
                (&p.succedent, &p.antecedent, &gs, &ga)
            } else {
                (&p.antecedent, &p.succedent, &ga, &gs)
            };
            if !equals_plus(same, base_same, &[]) {
                return false;
            }
            let Some(psi) = single(difference(grown, base_grown)) else {
                return false;
            };
            let eigen = matches!(rule, ExistsL | ForallR);
            match match_instance(body, x, psi) {
                Err(()) => false,
                Ok(None) => true,
                Ok(Some(t)) if eigen => matches!(&t, Term::App(k, args)
                    if args.is_empty() && !c.formulas().any(|g| g.contains_symbol(k))),
                Ok(Some(t)) => t.is_ground(),
            }
        }
        _ => false,
    }
}

fn subst_instance(rule: RuleId, c: &Sequent, p: &Sequent) -> bool {
    let left = rule == RuleId::SubstL;
    for (e, eq) in c.antecedent.iter().enumerate() {
        let Formula::Eq(s, s2) = eq else { continue };
        let targets = if left { &c.antecedent } else { &c.succedent };
        for (j, chi) in targets.iter().enumerate() {
            if left && j == e {
                continue;
            }
            let (rest_a, rest_s) = if left {
                (without(&c.antecedent, &[e, j]), c.succedent.iter().collect::<Vec<_>>())
            } else {
                (without(&c.antecedent, &[e]), without(&c.succedent, &[j]))
            };
            let (same, grown, base_same, base_grown) = if left {
                (&p.succedent, &p.antecedent, &rest_s, &rest_a)
            } else {
                (&p.antecedent, &p.succedent, &rest_a, &rest_s)
            };
            if !equals_plus(same, base_same, &[]) {
                continue;
            }
            if let Some(psi) = single(difference(grown, base_grown)) {
                if differs_by_replacement(chi, psi, s, s2) {
                    return true;
                }
            }
        }
    }
    false
}

/// Re-validates every inference of `tree` against the rule schemas.
pub fn check_proof(tree: &ProofTree) -> ProofCheck {
    let mut open = Vec::new();
    for id in tree.preorder() {
        let node = &tree.nodes[&id];
        if !node.sequent.is_sentence() {
            return ProofCheck::Malformed {
                node: id,
                reason: "sequent contains a free variable".into(),
            };
        }
        let Some(step) = &node.step else {
            if !node.children.is_empty() {
                return ProofCheck::Malformed {
                    node: id,
                    reason: "unlabelled node has premisses".into(),
                };
            }
            open.push(id);
            continue;
        };
        let ps: Vec<&Sequent> = node.children.iter().map(|c| &*tree.nodes[c].sequent).collect();
        if ps.len() != step.rule.premiss_count() {
            return ProofCheck::Malformed {
                node: id,
                reason: format!(
                    "{} takes {} premisses, node has {}",
                    step.rule,
                    step.rule.premiss_count(),
                    ps.len()
                ),
            };
        }
        if !instance_of(step.rule, &node.sequent, &ps) {
            return ProofCheck::Malformed {
                node: id,
                reason: format!("not an instance of {}", step.rule),
            };
        }
    }
    if open.is_empty() {
        ProofCheck::Complete
    } else {
        ProofCheck::Incomplete(open)
    }
}
