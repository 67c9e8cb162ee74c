//! Phased proof search.
//!
//! Per open sequent: axioms (syntactic, then modulo ground equality), the
//! invertible single-premiss rules, term guessing on the first quantifier,
//! then the branching rules. Found derivations are replayed through the
//! kernel, so the kernel stays the only authority on what counts as a proof.

use std::collections::HashSet;

use log::{debug, error};

use super::streams::{refinement_stream, PartialTerm};
use super::SearchBudget;
use crate::budget::CancelToken;
use crate::euf::{self, ClosingWitness};
use crate::kernel::{axiom_candidates, check_proof, premisses, NodeId, ProofTree, RuleId, RuleParams};
use crate::syntax::{constants_of, Formula, Name, Occurrence, Path, Sequent, Side, Signature, Term};

/// Upper bound on groundings tried per partial term.
pub const MAX_GROUNDINGS: usize = 256;

/// A derivation found by search, not yet checked by the kernel.
#[derive(Debug, Clone)]
pub(crate) struct Sketch {
    pub rule: RuleId,
    pub params: RuleParams,
    pub children: Vec<Sketch>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProveOutcome {
    Proved(ProofTree),
    Failed,
    BudgetExhausted,
}

/// Result of a successful partial instantiation.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialInstantiation {
    /// The ground witness used for the actual instantiation.
    pub witness: Term,
    /// The refinement candidate the witness was grounded from.
    pub partial: PartialTerm,
    /// 1-based position of `partial` in the candidate stream.
    pub candidates: usize,
    /// Total groundings tried, including the successful one.
    pub groundings: usize,
}

/// Why partial instantiation gave up, with the work done so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFailure {
    pub budget_exhausted: bool,
    pub candidates: usize,
    pub groundings: usize,
}

/// Search was cancelled or ran out of time.
#[derive(Debug)]
pub(crate) struct Abort;

type Key = (Vec<Formula>, Vec<Formula>, usize);

pub(crate) struct Search<'a> {
    budget: &'a SearchBudget,
    cancel: &'a CancelToken,
    /// Symbol order for refinement and default constants.
    order: Signature,
    term_depth: usize,
    memo: HashSet<Key>,
    depth_cut: bool,
    guessed: bool,
    pub expansions: usize,
}

fn occ(side: Side, index: usize) -> Occurrence {
    Occurrence { side, index }
}

fn first_single(s: &Sequent) -> Option<(RuleId, Occurrence)> {
    for (i, f) in s.antecedent.iter().enumerate() {
        let r = match f {
            Formula::Not(_) => RuleId::NotL,
            Formula::And(..) => RuleId::AndL,
            Formula::Exists(..) => RuleId::ExistsL,
            Formula::Iff(..) => RuleId::IffL,
            _ => continue,
        };
        return Some((r, occ(Side::Antecedent, i)));
    }
    for (i, f) in s.succedent.iter().enumerate() {
        let r = match f {
            Formula::Not(_) => RuleId::NotR,
            Formula::Or(..) => RuleId::OrR,
            Formula::Implies(..) => RuleId::ImpR,
            Formula::Forall(..) => RuleId::ForallR,
            _ => continue,
        };
        return Some((r, occ(Side::Succedent, i)));
    }
    None
}

fn first_double(s: &Sequent) -> Option<(RuleId, Occurrence)> {
    for (i, f) in s.antecedent.iter().enumerate() {
        let r = match f {
            Formula::Or(..) => RuleId::OrL,
            Formula::Implies(..) => RuleId::ImpL,
            _ => continue,
        };
        return Some((r, occ(Side::Antecedent, i)));
    }
    for (i, f) in s.succedent.iter().enumerate() {
        let r = match f {
            Formula::And(..) => RuleId::AndR,
            Formula::Iff(..) => RuleId::IffR,
            _ => continue,
        };
        return Some((r, occ(Side::Succedent, i)));
    }
    None
}

/// First antecedent `∀`, else first succedent `∃`.
pub(crate) fn first_quantifier(s: &Sequent) -> Option<Occurrence> {
    let a = s.antecedent.iter().position(|f| matches!(f, Formula::Forall(..)));
    let b = s.succedent.iter().position(|f| matches!(f, Formula::Exists(..)));
    a.map(|i| occ(Side::Antecedent, i)).or(b.map(|j| occ(Side::Succedent, j)))
}

/// Tuples over `pool` of length `n`; the first component varies fastest.
fn groundings(n: usize, pool: &[Term]) -> impl Iterator<Item = Vec<Term>> + '_ {
    let total = pool.len().checked_pow(n as u32).unwrap_or(usize::MAX);
    (0..total.min(MAX_GROUNDINGS)).map(move |mut k| {
        (0..n)
            .map(|_| {
                let t = pool[k % pool.len()].clone();
                k /= pool.len();
                t
            })
            .collect()
    })
}

fn extend_sig(sig: &Signature, params: &RuleParams) -> Signature {
    let mut out = sig.clone();
    if let Some(c) = &params.fresh_const {
        let _ = out.declare_function(c, 0);
    }
    if let Some(t) = &params.witness {
        let _ = out.declare_term(t);
    }
    out
}

impl<'a> Search<'a> {
    pub(crate) fn new(budget: &'a SearchBudget, cancel: &'a CancelToken, order: Signature, goal: &Sequent) -> Self {
        Search {
            budget,
            cancel,
            order,
            term_depth: goal.max_term_depth().max(1),
            memo: HashSet::new(),
            depth_cut: false,
            guessed: false,
            expansions: 0,
        }
    }

    fn step(&self, s: &Sequent, sig: &Signature, rule: RuleId, params: RuleParams) -> (Vec<Sequent>, RuleParams) {
        premisses(s, rule, &params, sig).unwrap_or_else(|e| panic!("search built an illegal {rule} step on `{s}`: {e}"))
    }

    fn node(&mut self, s: &Sequent, sig: &Signature, depth: usize, allowance: usize) -> Result<Option<Sketch>, Abort> {
        self.expansions += 1;
        if self.cancel.is_cancelled() {
            return Err(Abort);
        }
        if let Some((rule, params)) = axiom_candidates(s).into_iter().next() {
            return Ok(Some(Sketch { rule, params, children: Vec::new() }));
        }
        if let Some(sk) = close_by_equality(s, sig) {
            return Ok(Some(sk));
        }
        if depth >= self.budget.max_depth {
            self.depth_cut = true;
            return Ok(None);
        }
        let (a, b) = s.canonical_key();
        let key = (a, b, allowance);
        if self.memo.contains(&key) {
            return Ok(None);
        }
        let outer_cut = std::mem::replace(&mut self.depth_cut, false);
        let found = self.expand(s, sig, depth, allowance)?;
        if found.is_none() && !self.depth_cut {
            self.memo.insert(key);
        }
        self.depth_cut |= outer_cut;
        Ok(found)
    }

    fn expand(&mut self, s: &Sequent, sig: &Signature, depth: usize, allowance: usize) -> Result<Option<Sketch>, Abort> {
        if let Some((rule, at)) = first_single(s) {
            let (prem, params) = self.step(s, sig, rule, RuleParams::principal(at));
            let sig = extend_sig(sig, &params);
            let child = self.node(&prem[0], &sig, depth + 1, allowance)?;
            return Ok(child.map(|c| Sketch { rule, params, children: vec![c] }));
        }
        if let Some(q) = first_quantifier(s) {
            if let Some(sk) = self.guess(s, sig, q, depth, allowance)? {
                return Ok(Some(sk));
            }
        }
        if let Some((rule, at)) = first_double(s) {
            let (prem, params) = self.step(s, sig, rule, RuleParams::principal(at));
            let mut children = Vec::with_capacity(prem.len());
            for p in &prem {
                match self.node(p, sig, depth + 1, allowance)? {
                    Some(c) => children.push(c),
                    None => return Ok(None),
                }
            }
            return Ok(Some(Sketch { rule, params, children }));
        }
        Ok(None)
    }

    /// Constants to ground placeholders with.
    fn pool(&self, s: &Sequent) -> Vec<Term> {
        let mut names: Vec<Name> = constants_of(s);
        if names.is_empty() {
            names.push(self.order.constants().next().map(|d| d.name.clone()).unwrap_or_else(|| "c".into()));
        }
        names.into_iter().map(|c| Term::App(c, Vec::new())).collect()
    }

    pub(crate) fn candidates(&self) -> impl Iterator<Item = PartialTerm> {
        refinement_stream(&self.order)
            .with_max_depth(self.term_depth)
            .take(self.budget.max_candidates)
    }

    fn guess(
        &mut self,
        s: &Sequent,
        sig: &Signature,
        q: Occurrence,
        depth: usize,
        allowance: usize,
    ) -> Result<Option<Sketch>, Abort> {
        self.guessed = true;
        let (x, body) = match s.get(q) {
            Some(Formula::Forall(x, b) | Formula::Exists(x, b)) => (x.clone(), (**b).clone()),
            _ => unreachable!("quantifier occurrence"),
        };
        let (inst_rule, contr_rule) = match q.side {
            Side::Antecedent => (RuleId::ForallL, RuleId::ContrL),
            Side::Succedent => (RuleId::ExistsR, RuleId::ContrR),
        };
        let pool = self.pool(s);
        let candidates: Vec<PartialTerm> = self.candidates().collect();
        for cand in candidates {
            for values in groundings(cand.holes(), &pool) {
                let t = cand.ground(&values);
                if s.side(q.side).contains(&body.subst_var(&x, &t)) {
                    continue;
                }
                if allowance > 0 {
                    if let Some(sk) = self.instantiate(s, sig, q, contr_rule, inst_rule, &t, depth, allowance)? {
                        return Ok(Some(sk));
                    }
                }
                let params = RuleParams::principal(q).with_witness(t.clone());
                let (prem, params) = self.step(s, sig, inst_rule, params);
                let sig2 = extend_sig(sig, &params);
                if let Some(c) = self.node(&prem[0], &sig2, depth + 1, allowance)? {
                    return Ok(Some(Sketch { rule: inst_rule, params, children: vec![c] }));
                }
            }
        }
        Ok(None)
    }

    /// Contracts `q`, then instantiates the copy with `t`.
    #[allow(clippy::too_many_arguments)]
    fn instantiate(
        &mut self,
        s: &Sequent,
        sig: &Signature,
        q: Occurrence,
        contr_rule: RuleId,
        inst_rule: RuleId,
        t: &Term,
        depth: usize,
        allowance: usize,
    ) -> Result<Option<Sketch>, Abort> {
        let (prem, cparams) = self.step(s, sig, contr_rule, RuleParams::principal(q));
        let copy = occ(q.side, q.index + 1);
        let iparams = RuleParams::principal(copy).with_witness(t.clone());
        let (prem2, iparams) = self.step(&prem[0], sig, inst_rule, iparams);
        let sig2 = extend_sig(sig, &iparams);
        Ok(self.node(&prem2[0], &sig2, depth + 2, allowance - 1)?.map(|c| Sketch {
            rule: contr_rule,
            params: cparams,
            children: vec![Sketch { rule: inst_rule, params: iparams, children: vec![c] }],
        }))
    }

    /// Iterative deepening over the contraction allowance.
    pub(crate) fn run(&mut self, goal: &Sequent, sig: &Signature) -> Result<Option<Sketch>, Abort> {
        for k in 1..=self.budget.max_contraction.max(1) {
            self.memo.clear();
            self.guessed = false;
            if let Some(sk) = self.node(goal, sig, 0, k - 1)? {
                debug!("proof found in pass {k} after {} expansions", self.expansions);
                return Ok(Some(sk));
            }
            if !self.guessed {
                break;
            }
        }
        Ok(None)
    }
}

/// Closes `s` by ground congruence reasoning on its atoms, reconstructing the
/// rewrite steps as kernel rules.
fn close_by_equality(s: &Sequent, sig: &Signature) -> Option<Sketch> {
    // Without antecedent equations congruence is syntactic identity, which
    // the axiom check already covers.
    if !s.antecedent.iter().any(|f| matches!(f, Formula::Eq(..))) {
        return None;
    }
    let (mut cc, eq_index) = euf::decide::close_atoms(s).ok()?;
    let witness = euf::decide::closing_witness(&mut cc, s)?;
    let mut steps: Vec<(RuleId, RuleParams)> = Vec::new();
    let mut cur = s.clone();
    let push = |cur: &mut Sequent, rule: RuleId, params: RuleParams, steps: &mut Vec<(RuleId, RuleParams)>| {
        let (prem, params) = premisses(cur, rule, &params, sig).expect("reconstructed step is legal");
        if let Some(p) = prem.into_iter().next() {
            *cur = p;
        }
        steps.push((rule, params));
    };
    let mut rewrite = |cur: &mut Sequent, j: usize, base: Path, from: &Term, to: &Term, steps: &mut Vec<(RuleId, RuleParams)>| {
        for st in cc.rewrite_chain(from, to).expect("congruent ground terms") {
            let i = eq_index[st.equation];
            let mut at = base.clone();
            at.extend(&st.path);
            push(cur, RuleId::ContrL, RuleParams::principal(Occurrence::ante(i)), steps);
            let eq = if st.reversed {
                let n = cur.antecedent.len();
                push(cur, RuleId::EqL, RuleParams::default().with_witness(st.to.clone()), steps);
                push(cur, RuleId::SubstL, RuleParams::subst(i + 1, Occurrence::ante(n), vec![vec![0]]), steps);
                n - 1
            } else {
                i + 1
            };
            push(cur, RuleId::SubstR, RuleParams::subst(eq, Occurrence::succ(j), vec![at]), steps);
        }
    };
    match witness {
        ClosingWitness::Equality { succ: j } => {
            let Formula::Eq(u, v) = s.succedent[j].clone() else { unreachable!("equality witness") };
            rewrite(&mut cur, j, vec![0], &u, &v, &mut steps);
            push(&mut cur, RuleId::EqR, RuleParams::principal(Occurrence::succ(j)), &mut steps);
        }
        ClosingWitness::Relation { ante: i, succ: j } => {
            let (Formula::Rel(_, src), Formula::Rel(_, dst)) = (s.antecedent[i].clone(), s.succedent[j].clone()) else {
                unreachable!("relation witness")
            };
            for (m, (a, b)) in dst.iter().zip(&src).enumerate() {
                rewrite(&mut cur, j, vec![m], a, b, &mut steps);
            }
            push(&mut cur, RuleId::Ax, RuleParams::axiom(i, j), &mut steps);
        }
    }
    let mut sketch: Option<Sketch> = None;
    for (rule, params) in steps.into_iter().rev() {
        sketch = Some(Sketch { rule, params, children: sketch.into_iter().collect() });
    }
    sketch
}

/// Replays `sk` at `node`, returning the grown tree.
pub(crate) fn replay(tree: ProofTree, node: NodeId, sk: &Sketch) -> Result<ProofTree, crate::kernel::KernelError> {
    let (mut tree, kids) = tree.apply_with_children(node, sk.rule, &sk.params)?;
    for (id, child) in kids.into_iter().zip(&sk.children) {
        tree = replay(tree, id, child)?;
    }
    Ok(tree)
}

/// Goal signature, with `order`'s symbols first when given.
pub(crate) fn search_signature(goal: &Sequent, order: Option<&Signature>) -> Signature {
    let mut sig = order.cloned().unwrap_or_default();
    if let Ok(own) = Signature::of_sequent(goal) {
        let _ = sig.extend(&own);
    }
    sig
}

/// Proves `goal` within `budget`, observing `cancel`.
pub fn prove_with(goal: &Sequent, budget: &SearchBudget, cancel: &CancelToken, order: Option<&Signature>) -> ProveOutcome {
    let sig = search_signature(goal, order);
    let mut search = Search::new(budget, cancel, sig.clone(), goal);
    let sketch = match search.run(goal, &sig) {
        Err(Abort) => return ProveOutcome::BudgetExhausted,
        Ok(None) => return ProveOutcome::Failed,
        Ok(Some(sk)) => sk,
    };
    let tree = match ProofTree::new(goal.clone(), sig).and_then(|t| {
        let root = t.root();
        replay(t, root, &sketch)
    }) {
        Ok(t) => t,
        Err(e) => {
            error!("kernel rejected a found proof: {e}");
            return ProveOutcome::Failed;
        }
    };
    if check_proof(&tree).is_complete() {
        ProveOutcome::Proved(tree)
    } else {
        error!("found proof does not check: {:?}", check_proof(&tree));
        ProveOutcome::Failed
    }
}

/// Refines a witness for the quantifier at `q` (antecedent `∀` or succedent
/// `∃`). Each candidate's placeholders are grounded with constants of the
/// leaf; a grounding succeeds when the instantiated leaf is provable by a
/// contraction-free search.
pub fn partial_instantiation_with(
    leaf: &Sequent,
    q: Occurrence,
    budget: &SearchBudget,
    cancel: &CancelToken,
    order: Option<&Signature>,
) -> Result<PartialInstantiation, PartialFailure> {
    let mut fail = PartialFailure { budget_exhausted: false, candidates: 0, groundings: 0 };
    let rule = match (q.side, leaf.get(q)) {
        (Side::Antecedent, Some(Formula::Forall(..))) => RuleId::ForallL,
        (Side::Succedent, Some(Formula::Exists(..))) => RuleId::ExistsR,
        _ => return Err(fail),
    };
    let sig = search_signature(leaf, order);
    let sub_budget = SearchBudget { max_contraction: 1, ..budget.clone() };
    let mut search = Search::new(&sub_budget, cancel, sig.clone(), leaf);
    let pool = search.pool(leaf);
    let candidates: Vec<PartialTerm> = search.candidates().collect();
    for cand in candidates {
        fail.candidates += 1;
        for values in groundings(cand.holes(), &pool) {
            fail.groundings += 1;
            let t = cand.ground(&values);
            let params = RuleParams::principal(q).with_witness(t.clone());
            let Ok((prem, params)) = premisses(leaf, rule, &params, &sig) else { continue };
            let sig2 = extend_sig(&sig, &params);
            match search.node(&prem[0], &sig2, 1, 0) {
                Err(Abort) => {
                    fail.budget_exhausted = true;
                    return Err(fail);
                }
                Ok(Some(_)) => {
                    return Ok(PartialInstantiation {
                        witness: t,
                        partial: cand,
                        candidates: fail.candidates,
                        groundings: fail.groundings,
                    })
                }
                Ok(None) => {}
            }
        }
    }
    Err(fail)
}

/// 1-based position of the first term of `stream` that closes `leaf` when
/// used as the witness for `q`, scanning at most `limit` terms.
pub fn first_ground_witness(
    leaf: &Sequent,
    q: Occurrence,
    stream: impl Iterator<Item = Term>,
    limit: usize,
    budget: &SearchBudget,
    cancel: &CancelToken,
) -> Option<(usize, Term)> {
    let rule = match q.side {
        Side::Antecedent => RuleId::ForallL,
        Side::Succedent => RuleId::ExistsR,
    };
    let sig = search_signature(leaf, None);
    let sub_budget = SearchBudget { max_contraction: 1, ..budget.clone() };
    let mut search = Search::new(&sub_budget, cancel, sig.clone(), leaf);
    for (pos, t) in stream.take(limit).enumerate() {
        let params = RuleParams::principal(q).with_witness(t.clone());
        let Ok((prem, params)) = premisses(leaf, rule, &params, &sig) else { continue };
        let sig2 = extend_sig(&sig, &params);
        match search.node(&prem[0], &sig2, 1, 0) {
            Ok(Some(_)) => return Some((pos + 1, t)),
            Ok(None) => {}
            Err(Abort) => return None,
        }
    }
    None
}
