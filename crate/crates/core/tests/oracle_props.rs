use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::SeedableRng;
use sct_core::kernel::Step;
use sct_core::oracle::{diagonal_ground_stream, hint, refinement_stream, status, SearchBudget, ValidityStatus};
use sct_core::random::{random_complete_proof, random_sequent, tiny_signature};
use sct_core::{check_proof, is_countermodel, Formula, ProofTree, Sequent, Signature, Term};

fn sig(text: &str) -> Signature {
    Signature::parse(text).unwrap()
}

/// Placeholder shapes of depth at most `d`, printed canonically.
fn shapes(d: usize, funcs: &[(&str, usize)]) -> Vec<String> {
    fn go(d: usize, funcs: &[(&str, usize)]) -> Vec<Vec<String>> {
        // Each shape as a token list where "_" marks a hole.
        let mut out = vec![vec!["_".to_string()]];
        if d == 0 {
            return out;
        }
        let smaller = go(d - 1, funcs);
        for (f, k) in funcs {
            let mut partial: Vec<Vec<Vec<String>>> = vec![Vec::new()];
            for _ in 0..*k {
                partial = partial
                    .into_iter()
                    .flat_map(|args| {
                        smaller.iter().map(move |s| {
                            let mut a = args.clone();
                            a.push(s.clone());
                            a
                        })
                    })
                    .collect();
            }
            for args in partial {
                let mut toks = vec![format!("{f}(")];
                for (i, a) in args.into_iter().enumerate() {
                    if i > 0 {
                        toks.push(", ".into());
                    }
                    toks.extend(a);
                }
                toks.push(")".into());
                out.push(toks);
            }
        }
        out
    }
    go(d, funcs)
        .into_iter()
        .map(|toks| {
            let mut n = 0;
            toks.into_iter()
                .map(|t| {
                    if t == "_" {
                        n += 1;
                        format!("z{}", "'".repeat(n - 1))
                    } else {
                        t
                    }
                })
                .collect::<String>()
        })
        .collect()
}

#[test]
fn refinement_is_duplicate_free_and_exhaustive_to_depth_three() {
    let got: Vec<String> = refinement_stream(&sig("fun f/1\nfun g/2\nfun c/0"))
        .with_max_depth(3)
        .map(|t| t.to_string())
        .collect();
    let unique: HashSet<&String> = got.iter().collect();
    assert_eq!(unique.len(), got.len());
    let want: HashSet<String> = shapes(3, &[("f", 1), ("g", 2)]).into_iter().collect();
    assert_eq!(want.len(), 183);
    assert_eq!(got.into_iter().collect::<HashSet<_>>(), want);
}

#[test]
fn diagonal_covers_small_terms_once() {
    let s = sig("fun c/0\nfun d/0\nfun f/1\nfun g/2");
    let got: Vec<Term> = diagonal_ground_stream(&s).unwrap().take_while(|t| t.size() <= 3).collect();
    let unique: HashSet<&Term> = got.iter().collect();
    assert_eq!(unique.len(), got.len());
    // Direct count: size 1: 2, size 2: f(2) = 2, size 3: f(f(.)) 2 + g(.,.) 4 = 6.
    assert_eq!(got.len(), 10);
    let chain: Vec<String> = diagonal_ground_stream(&sig("fun c/0\nfun f/1")).unwrap().take(3).map(|t| t.to_string()).collect();
    assert_eq!(chain, ["c", "f(c)", "f(f(c))"]);
}

#[test]
fn status_is_sound_on_random_sequents() {
    let mut rng = StdRng::seed_from_u64(21);
    let budget = SearchBudget { model_max_size: 2, ..SearchBudget::with_timeout(Duration::from_millis(100)) };
    for _ in 0..150 {
        let s = random_sequent(&mut rng, &tiny_signature(), 2, 2);
        match status(&s, &budget) {
            ValidityStatus::Green(t) => assert!(check_proof(&t).is_complete()),
            ValidityStatus::Red(m) => assert!(is_countermodel(&s, &m).unwrap()),
            ValidityStatus::Yellow => {}
        }
    }
}

#[test]
fn status_respects_its_budget() {
    let mut rng = StdRng::seed_from_u64(22);
    let budget = SearchBudget::with_timeout(Duration::from_millis(200));
    for _ in 0..20 {
        let s = random_sequent(&mut rng, &tiny_signature(), 3, 4);
        let start = Instant::now();
        status(&s, &budget);
        assert!(start.elapsed() < Duration::from_millis(300), "{s}: {:?}", start.elapsed());
    }
}

#[test]
fn hints_are_applicable() {
    let mut rng = StdRng::seed_from_u64(23);
    let budget = SearchBudget::with_timeout(Duration::from_millis(100));
    for _ in 0..100 {
        let s = random_sequent(&mut rng, &tiny_signature(), 2, 2);
        if let Some(h) = hint(&s, &budget) {
            let tree = ProofTree::new(s.clone(), Signature::new()).unwrap();
            tree.apply(tree.root(), h.rule, &h.params).unwrap();
        }
    }
}

fn map_term(t: &Term, c: &str, by: &Term) -> Term {
    match t {
        Term::App(f, args) if args.is_empty() && &**f == c => by.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| map_term(a, c, by)).collect()),
        Term::Var(_) => t.clone(),
    }
}

fn map_formula(phi: &Formula, c: &str, by: &Term) -> Formula {
    let m = |p: &Formula| Box::new(map_formula(p, c, by));
    match phi {
        Formula::Rel(r, args) => Formula::Rel(r.clone(), args.iter().map(|a| map_term(a, c, by)).collect()),
        Formula::Eq(l, r) => Formula::Eq(map_term(l, c, by), map_term(r, c, by)),
        Formula::Not(p) => Formula::Not(m(p)),
        Formula::And(p, q) => Formula::And(m(p), m(q)),
        Formula::Or(p, q) => Formula::Or(m(p), m(q)),
        Formula::Implies(p, q) => Formula::Implies(m(p), m(q)),
        Formula::Iff(p, q) => Formula::Iff(m(p), m(q)),
        Formula::Forall(x, p) => Formula::Forall(x.clone(), m(p)),
        Formula::Exists(x, p) => Formula::Exists(x.clone(), m(p)),
    }
}

fn map_sequent(s: &Sequent, c: &str, by: &Term) -> Sequent {
    Sequent::new(
        s.antecedent.iter().map(|f| map_formula(f, c, by)).collect(),
        s.succedent.iter().map(|f| map_formula(f, c, by)).collect(),
    )
}

/// Grounding a constant that is not an eigenconstant by any other ground
/// term preserves complete proofs.
#[test]
fn constant_grounding_transfers() {
    let mut rng = StdRng::seed_from_u64(24);
    let base = tiny_signature();
    let replacements = [Term::constant("b"), Term::app("f", vec![Term::constant("c")]), Term::app("g", vec![Term::constant("b"), Term::constant("c")])];
    let mut done = 0;
    while done < 100 {
        let Some(tree) = random_complete_proof(&mut rng, &base, 50) else { continue };
        if !tree.goal().contains_symbol("a") {
            continue;
        }
        done += 1;
        for by in &replacements {
            let raw = tree
                .preorder()
                .into_iter()
                .map(|id| {
                    let n = tree.node(id).unwrap();
                    let step = n.step.as_ref().map(|st| {
                        let mut params = st.params.clone();
                        params.witness = params.witness.as_ref().map(|w| map_term(w, "a", by));
                        Step { rule: st.rule, params }
                    });
                    (id, map_sequent(&n.sequent, "a", by), step, n.children.clone())
                })
                .collect();
            let mapped = ProofTree::from_nodes(tree.signature().clone(), tree.root(), raw).unwrap();
            assert!(check_proof(&mapped).is_complete(), "{} with a := {by}", tree.goal());
        }
    }
}
