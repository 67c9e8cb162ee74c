//! Premiss computation for each rule schema.
//!
//! Display placement: the principal formula is replaced in place; a formula
//! moved to the succedent goes to its front, one moved to the antecedent is
//! appended; contraction inserts the copy right after the original.

use super::{KernelError, RuleId, RuleParams};
use crate::syntax::signature::is_lower_ident;
use crate::syntax::{print_formula, print_term, Formula, Occurrence, Path, Sequent, Side, Signature, Term};

pub(crate) struct Instance {
    pub params: RuleParams,
    pub premisses: Vec<Sequent>,
}

fn occ_text(o: Occurrence) -> String {
    let side = match o.side {
        Side::Antecedent => "antecedent",
        Side::Succedent => "succedent",
    };
    format!("{side} position {}", o.index)
}

/// Fields each rule accepts.
fn check_fields(rule: RuleId, p: &RuleParams) -> Result<(), KernelError> {
    use RuleId::*;
    let principal_ok = !matches!(rule, SubstL | SubstR | EqL | Ax);
    let fresh_ok = matches!(rule, ExistsL | ForallR);
    let witness_ok = matches!(rule, ForallL | ExistsR | EqL);
    let subst_ok = matches!(rule, SubstL | SubstR);
    let axiom_ok = rule == Ax;
    let stray = [
        ("principal", p.principal.is_some() && !principal_ok),
        ("fresh_const", p.fresh_const.is_some() && !fresh_ok),
        ("witness", p.witness.is_some() && !witness_ok),
        ("eq_occurrence", p.eq_occurrence.is_some() && !subst_ok),
        ("target_occurrence", p.target_occurrence.is_some() && !subst_ok),
        ("replace_at", p.replace_at.is_some() && !subst_ok),
        ("axiom_witness", p.axiom_witness.is_some() && !axiom_ok),
    ];
    match stray.iter().find(|(_, bad)| *bad) {
        Some((field, _)) => Err(KernelError::BadParams(format!("{rule} does not take `{field}`"))),
        None => Ok(()),
    }
}

fn shape_matches(rule: RuleId, f: &Formula) -> bool {
    use RuleId::*;
    match rule {
        AndL | AndR => matches!(f, Formula::And(..)),
        OrL | OrR => matches!(f, Formula::Or(..)),
        NotL | NotR => matches!(f, Formula::Not(..)),
        ImpL | ImpR => matches!(f, Formula::Implies(..)),
        IffL | IffR => matches!(f, Formula::Iff(..)),
        ExistsL | ExistsR => matches!(f, Formula::Exists(..)),
        ForallL | ForallR => matches!(f, Formula::Forall(..)),
        ContrL | ContrR => true,
        EqR => matches!(f, Formula::Eq(l, r) if l == r),
        SubstL | SubstR | EqL | Ax => false,
    }
}

fn expected_shape(rule: RuleId) -> &'static str {
    use RuleId::*;
    match rule {
        AndL | AndR => "a conjunction",
        OrL | OrR => "a disjunction",
        NotL | NotR => "a negation",
        ImpL | ImpR => "an implication",
        IffL | IffR => "a biconditional",
        ExistsL | ExistsR => "an existential formula",
        ForallL | ForallR => "a universal formula",
        EqR => "an equation s = s",
        _ => "a formula",
    }
}

/// Resolves (or defaults) the principal occurrence and checks its shape.
fn principal(s: &Sequent, rule: RuleId, p: &RuleParams) -> Result<(Occurrence, Formula), KernelError> {
    let side = rule.principal_side().expect("rule has a principal formula");
    let occ = match p.principal {
        Some(o) => o,
        None => {
            let idx = s
                .side(side)
                .iter()
                .position(|f| shape_matches(rule, f))
                .ok_or_else(|| {
                    KernelError::RuleMismatch(format!(
                        "{rule} needs {} in the {}",
                        expected_shape(rule),
                        if side == Side::Antecedent { "antecedent" } else { "succedent" }
                    ))
                })?;
            Occurrence { side, index: idx }
        }
    };
    if occ.side != side {
        return Err(KernelError::RuleMismatch(format!(
            "{rule} acts on the {}, not the {}",
            if side == Side::Antecedent { "antecedent" } else { "succedent" },
            if occ.side == Side::Antecedent { "antecedent" } else { "succedent" },
        )));
    }
    let f = s
        .get(occ)
        .ok_or_else(|| KernelError::NoSuchOccurrence(occ_text(occ)))?
        .clone();
    if !shape_matches(rule, &f) {
        return Err(KernelError::RuleMismatch(format!(
            "{rule} needs {}, found `{}`",
            expected_shape(rule),
            print_formula(&f)
        )));
    }
    Ok((occ, f))
}

/// Copy of `s` with the principal at `occ` replaced by `with` (in place).
fn replace(s: &Sequent, occ: Occurrence, with: Vec<Formula>) -> Sequent {
    let mut out = s.clone();
    let side = out.side_mut(occ.side);
    side.splice(occ.index..=occ.index, with);
    out
}

fn push_front(s: &mut Sequent, side: Side, f: Formula) {
    s.side_mut(side).insert(0, f);
}

fn push_back(s: &mut Sequent, side: Side, f: Formula) {
    s.side_mut(side).push(f);
}

fn binary(f: &Formula) -> (Formula, Formula) {
    match f {
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            ((**a).clone(), (**b).clone())
        }
        _ => unreachable!("shape checked"),
    }
}

fn quantifier(f: &Formula) -> (&str, &Formula) {
    match f {
        Formula::Forall(x, body) | Formula::Exists(x, body) => (x, body),
        _ => unreachable!("shape checked"),
    }
}

/// First `skN` unused anywhere in the sequent or the signature.
pub(crate) fn auto_fresh(s: &Sequent, sig: &Signature) -> String {
    (0..)
        .map(|n| format!("sk{n}"))
        .find(|c| sig.lookup(c).is_none() && !s.contains_symbol(c))
        .expect("infinitely many candidates")
}

fn fresh_constant(s: &Sequent, p: &RuleParams, sig: &Signature) -> Result<String, KernelError> {
    let c = match &p.fresh_const {
        None => return Ok(auto_fresh(s, sig)),
        Some(c) => c.clone(),
    };
    if !is_lower_ident(&c) {
        return Err(KernelError::BadParams(format!("`{c}` is not a constant name")));
    }
    match sig.lookup(&c) {
        Some(d) if !(d.kind == crate::syntax::SymbolKind::Function && d.arity == 0) => {
            return Err(KernelError::FreshnessViolation(c));
        }
        None if c.starts_with(['u', 'v', 'w', 'x', 'y', 'z']) => {
            return Err(KernelError::BadParams(format!(
                "`{c}` reads as a variable; choose a name not starting with u-z"
            )));
        }
        _ => {}
    }
    if s.contains_symbol(&c) {
        return Err(KernelError::FreshnessViolation(c));
    }
    Ok(c)
}

fn ground_witness(p: &RuleParams, rule: RuleId, sig: &Signature) -> Result<Term, KernelError> {
    let t = p
        .witness
        .clone()
        .ok_or_else(|| KernelError::BadParams(format!("{rule} needs a `witness` term")))?;
    if !t.is_ground() {
        return Err(KernelError::NonGroundWitness(print_term(&t)));
    }
    let mut probe = sig.clone();
    probe
        .declare_term(&t)
        .map_err(|e| KernelError::BadParams(e.to_string()))?;
    Ok(t)
}

pub(crate) fn instantiate(
    s: &Sequent,
    rule: RuleId,
    params: &RuleParams,
    sig: &Signature,
) -> Result<Instance, KernelError> {
    use RuleId::*;
    check_fields(rule, params)?;
    let mut out_params = params.clone();
    let premisses = match rule {
        Ax => {
            let (i, j) = match params.axiom_witness {
                Some(w) => w,
                None => super::axiom_candidates(s)
                    .into_iter()
                    .find(|(r, _)| *r == Ax)
                    .and_then(|(_, p)| p.axiom_witness)
                    .ok_or_else(|| KernelError::RuleMismatch("no formula occurs on both sides".into()))?,
            };
            let a = s
                .antecedent
                .get(i)
                .ok_or_else(|| KernelError::NoSuchOccurrence(occ_text(Occurrence::ante(i))))?;
            let b = s
                .succedent
                .get(j)
                .ok_or_else(|| KernelError::NoSuchOccurrence(occ_text(Occurrence::succ(j))))?;
            if a != b {
                return Err(KernelError::RuleMismatch(format!(
                    "`{}` and `{}` differ",
                    print_formula(a),
                    print_formula(b)
                )));
            }
            out_params.axiom_witness = Some((i, j));
            vec![]
        }
        EqR => {
            let (occ, _) = principal(s, rule, params)?;
            out_params.principal = Some(occ);
            vec![]
        }
        EqL => {
            let t = ground_witness(params, rule, sig)?;
            let mut p = s.clone();
            push_back(&mut p, Side::Antecedent, Formula::Eq(t.clone(), t));
            vec![p]
        }
        SubstL | SubstR => subst(s, rule, params)?,
        _ => {
            let (occ, f) = principal(s, rule, params)?;
            out_params.principal = Some(occ);
            match rule {
                AndL | OrR => {
                    let (a, b) = binary(&f);
                    vec![replace(s, occ, vec![a, b])]
                }
                AndR | OrL => {
                    let (a, b) = binary(&f);
                    vec![replace(s, occ, vec![a]), replace(s, occ, vec![b])]
                }
                NotL | NotR => {
                    let Formula::Not(a) = &f else { unreachable!("shape checked") };
                    let mut p = replace(s, occ, vec![]);
                    if rule == NotL {
                        push_front(&mut p, Side::Succedent, (**a).clone());
                    } else {
                        push_back(&mut p, Side::Antecedent, (**a).clone());
                    }
                    vec![p]
                }
                ImpL => {
                    let (a, b) = binary(&f);
                    let left = replace(s, occ, vec![b]);
                    let mut right = replace(s, occ, vec![]);
                    push_front(&mut right, Side::Succedent, a);
                    vec![left, right]
                }
                ImpR => {
                    let (a, b) = binary(&f);
                    let mut p = replace(s, occ, vec![b]);
                    push_back(&mut p, Side::Antecedent, a);
                    vec![p]
                }
                IffL => {
                    let (a, b) = binary(&f);
                    vec![replace(
                        s,
                        occ,
                        vec![Formula::implies(a.clone(), b.clone()), Formula::implies(b, a)],
                    )]
                }
                IffR => {
                    let (a, b) = binary(&f);
                    let mut first = replace(s, occ, vec![b.clone()]);
                    push_back(&mut first, Side::Antecedent, a.clone());
                    let mut second = replace(s, occ, vec![a]);
                    push_back(&mut second, Side::Antecedent, b);
                    vec![first, second]
                }
                ExistsL | ForallR => {
                    let c = fresh_constant(s, params, sig)?;
                    let (x, body) = quantifier(&f);
                    out_params.fresh_const = Some(c.clone());
                    vec![replace(s, occ, vec![body.subst_var(x, &Term::constant(&c))])]
                }
                ForallL | ExistsR => {
                    let t = ground_witness(params, rule, sig)?;
                    let (x, body) = quantifier(&f);
                    vec![replace(s, occ, vec![body.subst_var(x, &t)])]
                }
                ContrL | ContrR => vec![replace(s, occ, vec![f.clone(), f])],
                Ax | EqR | EqL | SubstL | SubstR => unreachable!("handled above"),
            }
        }
    };
    Ok(Instance {
        params: out_params,
        premisses,
    })
}

fn subst(s: &Sequent, rule: RuleId, params: &RuleParams) -> Result<Vec<Sequent>, KernelError> {
    let e = params
        .eq_occurrence
        .ok_or_else(|| KernelError::BadParams(format!("{rule} needs `eq_occurrence`")))?;
    let (lhs, rhs) = match s.antecedent.get(e) {
        Some(Formula::Eq(l, r)) => (l.clone(), r.clone()),
        _ => return Err(KernelError::NoSuchEquality(e)),
    };
    let target = params
        .target_occurrence
        .ok_or_else(|| KernelError::BadParams(format!("{rule} needs `target_occurrence`")))?;
    let want_side = if rule == RuleId::SubstL { Side::Antecedent } else { Side::Succedent };
    if target.side != want_side {
        return Err(KernelError::RuleMismatch(format!(
            "{rule} rewrites a formula in the {}",
            if want_side == Side::Antecedent { "antecedent" } else { "succedent" }
        )));
    }
    if rule == RuleId::SubstL && target.index == e {
        return Err(KernelError::RuleMismatch("the equation cannot rewrite itself".into()));
    }
    let phi = s
        .get(target)
        .ok_or_else(|| KernelError::NoSuchOccurrence(occ_text(target)))?;
    let paths: Vec<Path> = match &params.replace_at {
        Some(paths) if !paths.is_empty() => paths.clone(),
        Some(_) => return Err(KernelError::BadParams("`replace_at` is empty".into())),
        None => phi.term_occurrences(&lhs),
    };
    if paths.is_empty() {
        return Err(KernelError::RuleMismatch(format!(
            "`{}` does not occur in `{}`",
            print_term(&lhs),
            print_formula(phi)
        )));
    }
    let mut out = phi.clone();
    for path in &paths {
        match phi.term_at(path) {
            Some(t) if *t == lhs => {}
            _ => {
                return Err(KernelError::RuleMismatch(format!(
                    "position {path:?} of `{}` does not hold `{}`",
                    print_formula(phi),
                    print_term(&lhs)
                )))
            }
        }
        let bound = phi.binders_above(path);
        if bound.iter().any(|x| rhs.contains_var(x)) {
            return Err(KernelError::CaptureViolation(print_term(&rhs)));
        }
        out = out.replace_term_at(path, &rhs).expect("path checked");
    }
    let mut p = s.clone();
    match rule {
        RuleId::SubstL => {
            p.antecedent[target.index] = out;
        }
        _ => {
            p.succedent[target.index] = out;
        }
    }
    p.antecedent.remove(e);
    Ok(vec![p])
}
