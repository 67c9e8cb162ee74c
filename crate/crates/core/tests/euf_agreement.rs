use rand::rngs::StdRng;
use rand::SeedableRng;
use sct_core::euf::reference::{naive_closure, naive_valid};
use sct_core::random::random_atomic_sequent;
use sct_core::{
    cc_close, collect_ground_terms, decide_atomic, find_countermodel, is_countermodel, parse_term, AtomicVerdict,
    CancelToken, CountermodelResult, Signature, Term,
};

fn t(src: &str) -> Term {
    parse_term(src, &mut Signature::new()).unwrap()
}

#[test]
fn closure_matches_naive_fixpoint_on_small_inputs() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..300 {
        let s = random_atomic_sequent(&mut rng, 8);
        let eqs: Vec<(Term, Term)> = s
            .antecedent
            .iter()
            .filter_map(|f| match f {
                sct_core::Formula::Eq(l, r) => Some((l.clone(), r.clone())),
                _ => None,
            })
            .collect();
        let terms = collect_ground_terms(&s);
        let (all, rel) = naive_closure(&eqs, &terms);
        let mut cc = cc_close(&eqs, &terms).unwrap();
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                assert_eq!(cc.congruent(a, b).unwrap(), rel[i][j], "{a} vs {b} under {s}");
            }
        }
    }
}

#[test]
fn closure_examples() {
    let mut cc = cc_close(&[(t("f(a)"), t("a"))], &[t("f(f(a))")]).unwrap();
    assert!(cc.congruent(&t("f(f(a))"), &t("a")).unwrap());
    let mut cc = cc_close(&[(t("a"), t("f(c)")), (t("b"), t("f(c)"))], &[]).unwrap();
    assert!(cc.congruent(&t("a"), &t("b")).unwrap());
}

#[test]
fn decision_agrees_with_naive_closure_and_model_search() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..200 {
        let s = random_atomic_sequent(&mut rng, 6);
        let verdict = decide_atomic(&s).unwrap();
        let valid = matches!(verdict, AtomicVerdict::Valid(_));
        assert_eq!(valid, naive_valid(&s), "{s}");
        if let AtomicVerdict::Invalid(m) = &verdict {
            assert!(is_countermodel(&s, m).unwrap());
        }
        let n = collect_ground_terms(&s).len() + 1;
        let found = find_countermodel(&s, n, &CancelToken::new());
        assert!(!matches!(found, CountermodelResult::BudgetExhausted));
        assert_eq!(matches!(found, CountermodelResult::Found(_)), !valid, "{s}");
    }
}
