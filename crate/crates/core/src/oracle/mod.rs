//! Validity oracle: proof search, traffic-light status and hints.

mod prover;
mod streams;

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::budget::CancelToken;
use crate::kernel::{ProofTree, RuleId, RuleParams};
use crate::semantics::{find_countermodel, CountermodelResult, Structure};
use crate::syntax::{Occurrence, Sequent, Signature, Term};

pub use prover::{
    first_ground_witness, PartialFailure, PartialInstantiation, ProveOutcome, MAX_GROUNDINGS,
};
pub use streams::{
    diagonal_ground_stream, refinement_stream, DiagonalStream, PartialTerm, RefinementStream,
    StreamError,
};

/// Resource limits for proof search and model finding. All fields positive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub timeout: Duration,
    /// Partial terms tried per quantifier.
    pub max_candidates: usize,
    /// Copies of a quantified formula along a branch, the original included.
    pub max_contraction: usize,
    /// Rule applications along a branch.
    pub max_depth: usize,
    /// Largest universe the countermodel search tries.
    pub model_max_size: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            timeout: Duration::from_secs(5),
            max_candidates: 200,
            max_contraction: 3,
            max_depth: 200,
            model_max_size: 3,
        }
    }
}

impl SearchBudget {
    pub fn with_timeout(timeout: Duration) -> Self {
        SearchBudget { timeout, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ValidityStatus {
    Green(ProofTree),
    Red(Structure),
    Yellow,
}

impl ValidityStatus {
    pub fn color(&self) -> &'static str {
        match self {
            ValidityStatus::Green(_) => "green",
            ValidityStatus::Red(_) => "red",
            ValidityStatus::Yellow => "yellow",
        }
    }
}

/// A rule application recommended for the root of a sequent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleSuggestion {
    pub rule: RuleId,
    pub params: RuleParams,
}

/// Proves `goal` with a fresh deadline from `budget`.
pub fn prove(goal: &Sequent, budget: &SearchBudget) -> ProveOutcome {
    prover::prove_with(goal, budget, &CancelToken::with_timeout(budget.timeout), None)
}

/// Like [`prove`], under an external token and with `order` fixing the
/// symbol order used to refine witnesses.
pub fn prove_with(
    goal: &Sequent,
    budget: &SearchBudget,
    cancel: &CancelToken,
    order: Option<&Signature>,
) -> ProveOutcome {
    prover::prove_with(goal, budget, cancel, order)
}

/// Searches a witness for the antecedent `∀` or succedent `∃` at `q`.
pub fn try_partial_instantiation(
    leaf: &Sequent,
    q: Occurrence,
    budget: &SearchBudget,
    order: Option<&Signature>,
) -> Result<PartialInstantiation, PartialFailure> {
    let cancel = CancelToken::with_timeout(budget.timeout);
    prover::partial_instantiation_with(leaf, q, budget, &cancel, order)
}

/// Position of the first witness for `q` in the diagonal enumeration over `sig`.
pub fn diagonal_baseline(
    leaf: &Sequent,
    q: Occurrence,
    sig: &Signature,
    limit: usize,
    budget: &SearchBudget,
) -> Result<Option<(usize, Term)>, StreamError> {
    let stream = diagonal_ground_stream(sig)?;
    let cancel = CancelToken::with_timeout(budget.timeout);
    Ok(first_ground_witness(leaf, q, stream, limit, budget, &cancel))
}

/// Runs proof search and countermodel search side by side.
pub fn status(s: &Sequent, budget: &SearchBudget) -> ValidityStatus {
    status_with(s, budget, &CancelToken::new())
}

/// [`status`] that also stops when `cancel` fires.
pub fn status_with(s: &Sequent, budget: &SearchBudget, cancel: &CancelToken) -> ValidityStatus {
    let shared = cancel.child(budget.timeout);
    let (proof, model) = std::thread::scope(|scope| {
        let prover = scope.spawn(|| {
            let out = prover::prove_with(s, budget, &shared, None);
            if matches!(out, ProveOutcome::Proved(_)) {
                shared.cancel();
            }
            out
        });
        let finder = scope.spawn(|| {
            let out = find_countermodel(s, budget.model_max_size, &shared);
            if matches!(out, CountermodelResult::Found(_)) {
                shared.cancel();
            }
            out
        });
        (
            prover.join().expect("prover thread"),
            finder.join().expect("model finder thread"),
        )
    });
    match (proof, model) {
        (ProveOutcome::Proved(_), CountermodelResult::Found(m)) => {
            panic!("unsound: both a proof and a countermodel for `{s}`: {:?}", m.to_json())
        }
        (ProveOutcome::Proved(t), _) => ValidityStatus::Green(t),
        (_, CountermodelResult::Found(m)) => ValidityStatus::Red(m),
        _ => ValidityStatus::Yellow,
    }
}

/// The root step of a proof found within `budget`, if any.
pub fn hint(s: &Sequent, budget: &SearchBudget) -> Option<RuleSuggestion> {
    match prove(s, budget) {
        ProveOutcome::Proved(tree) => {
            let step = tree.node(tree.root()).ok()?.step.clone()?;
            Some(RuleSuggestion { rule: step.rule, params: step.params })
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests;
