use std::time::{Duration, Instant};

use super::*;
use crate::kernel::check_proof;
use crate::semantics::is_countermodel;
use crate::syntax::{parse_sequent, Side};

const S0: &str = "forall x. forall y. E(x,y) -> x = f(y) => forall x. forall y. forall z. E(x,z) & E(y,z) -> x = y";
const S1: &str = "forall x. forall y. E(x,y) -> x = f(y), E(a,c), E(b,c) => a = b";
const S2: &str = "E(b,c) -> b = f(c), E(a,c), E(b,c) => a = b";
const FIVE: &str = "forall y. P(g(e,f(y))), Q(f(c)), R(h(d),e) => exists x. P(x)";
const HARD: &str = "forall x. P(f(g(f(x)))) & ~P(f(g(h(c)))) =>";

fn seq(src: &str) -> Sequent {
    parse_sequent(src, &mut Signature::new()).unwrap()
}

fn fgh() -> Signature {
    Signature::parse("fun f/1\nfun g/2\nfun h/1\nfun c/0\nfun d/0\nfun e/0").unwrap()
}

fn proved(src: &str) -> ProofTree {
    match prove(&seq(src), &SearchBudget::default()) {
        ProveOutcome::Proved(t) => {
            assert!(check_proof(&t).is_complete());
            t
        }
        other => panic!("{src}: {other:?}"),
    }
}

#[test]
fn proves_the_running_example() {
    proved(S0);
    proved(S1);
}

#[test]
fn proves_equality_and_drinker_goals() {
    proved("=> (forall x. f(x) = x) -> (forall x. f(f(x)) = x)");
    proved("=> exists x. (forall y. Drinks(y)) -> Drinks(x)");
    let t = proved("=> exists x. (Drinks(x) -> forall y. Drinks(y))");
    let rules: Vec<RuleId> = t.preorder().iter().filter_map(|&n| t.node(n).unwrap().step.as_ref().map(|s| s.rule)).collect();
    assert!(rules.contains(&RuleId::ContrR));
    assert_eq!(rules.iter().filter(|r| **r == RuleId::ExistsR).count(), 2);
}

#[test]
fn reconstructs_reversed_equations() {
    proved("f(c) = a, f(c) = b, E(a) => E(b)");
    proved("b = a, g(a, a) = c => g(b, a) = c");
}

#[test]
fn unprovable_goals_fail() {
    assert_eq!(prove(&seq("=> P"), &SearchBudget::default()), ProveOutcome::Failed);
}

#[test]
fn partial_instantiation_on_the_worked_example() {
    let s = seq(FIVE);
    let q = Occurrence { side: Side::Succedent, index: 0 };
    let found = try_partial_instantiation(&s, q, &SearchBudget::default(), Some(&fgh())).unwrap();
    assert_eq!(found.partial.to_string(), "g(z, f(z'))");
    assert_eq!(found.candidates, 11);
    let Term::App(g, args) = &found.witness else { panic!() };
    assert_eq!((&**g, args[0].to_string().as_str()), ("g", "e"));
    let (pos, _) = diagonal_baseline(&s, q, &fgh(), 10_000, &SearchBudget::default()).unwrap().unwrap();
    eprintln!("candidates {} groundings {} baseline {pos}", found.candidates, found.groundings);
    assert!(pos >= 5 * found.candidates, "baseline {pos} vs {}", found.candidates);
}

#[test]
fn partial_instantiation_trivial_cases() {
    let q = Occurrence { side: Side::Antecedent, index: 0 };
    let found = try_partial_instantiation(&seq("forall x. P(x) => P(c)"), q, &SearchBudget::default(), None).unwrap();
    assert_eq!(found.witness.to_string(), "c");
    assert_eq!(found.candidates, 1);
    let q = Occurrence { side: Side::Succedent, index: 0 };
    assert!(try_partial_instantiation(&seq("=> exists x. P(x)"), q, &SearchBudget::default(), None).is_err());
}

#[test]
fn status_colors() {
    let budget = SearchBudget::default();
    assert_eq!(status(&seq(S1), &budget).color(), "green");
    match status(&seq(S2), &budget) {
        ValidityStatus::Red(m) => {
            assert!(m.size <= 3);
            assert!(is_countermodel(&seq(S2), &m).unwrap());
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn hard_case_stays_honest_and_on_time() {
    let budget = SearchBudget::with_timeout(Duration::from_millis(500));
    let start = Instant::now();
    let st = status(&seq(HARD), &budget);
    assert!(start.elapsed() < Duration::from_millis(600), "{:?}", start.elapsed());
    assert_ne!(st.color(), "green");
}

#[test]
fn hints() {
    let budget = SearchBudget::default();
    assert_eq!(hint(&seq("P => P"), &budget).unwrap().rule, RuleId::Ax);
    assert_eq!(hint(&seq("=> P"), &budget), None);
    let h = hint(&seq(S1), &budget).unwrap();
    assert!(matches!(h.rule, RuleId::ContrL | RuleId::ForallL), "{h:?}");
    let tree = ProofTree::new(seq(S1), Signature::new()).unwrap();
    tree.apply(tree.root(), h.rule, &h.params).unwrap();
}
