use std::path::PathBuf;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sct_core::io::{check_smtlib, export_latex, export_smtlib, latex_inference_count, load_proof, save_proof};
use sct_core::random::{random_sequent, random_step, tiny_signature};
use sct_core::{parse_sequent, ProofCheck, ProofTree, RuleId, RuleParams, Occurrence, Signature, Term};

fn figure4() -> ProofTree {
    let mut sig = Signature::new();
    let goal = parse_sequent(
        "forall x. forall y. E(x,y) -> x = f(y) => forall x. forall y. forall z. E(x,z) & E(y,z) -> x = y",
        &mut sig,
    )
    .unwrap();
    let mut t = ProofTree::new(goal, sig).unwrap();
    let p = |ante: bool, i: usize| RuleParams::principal(if ante { Occurrence::ante(i) } else { Occurrence::succ(i) });
    let c = Term::constant;
    let steps = vec![
        (0, RuleId::ForallR, p(false, 0).with_fresh("a")),
        (1, RuleId::ForallR, p(false, 0).with_fresh("b")),
        (2, RuleId::ForallR, p(false, 0).with_fresh("c")),
        (3, RuleId::ImpR, p(false, 0)),
        (4, RuleId::AndL, p(true, 1)),
        (5, RuleId::ContrL, p(true, 0)),
        (6, RuleId::ForallL, p(true, 0).with_witness(c("a"))),
        (7, RuleId::ForallL, p(true, 0).with_witness(c("c"))),
        (8, RuleId::ForallL, p(true, 1).with_witness(c("b"))),
        (9, RuleId::ForallL, p(true, 1).with_witness(c("c"))),
        (10, RuleId::ImpL, p(true, 0)),
        (12, RuleId::Ax, RuleParams::axiom(1, 0)),
        (11, RuleId::ImpL, p(true, 1)),
        (14, RuleId::Ax, RuleParams::axiom(2, 0)),
        (13, RuleId::SubstR, RuleParams::subst(1, Occurrence::succ(0), vec![vec![1]])),
        (15, RuleId::Ax, RuleParams::axiom(0, 0)),
    ];
    for (node, rule, params) in steps {
        t = t.apply(node, rule, &params).unwrap();
    }
    t
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares against a checked-in file; `UPDATE_GOLDEN=1` rewrites it.
fn assert_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{name} drifted; rerun with UPDATE_GOLDEN=1 after review");
}

#[test]
fn figure4_latex_matches_golden() {
    let tex = export_latex(&figure4());
    assert_eq!(latex_inference_count(&tex), 18);
    assert_golden("figure4.tex", &tex);
}

#[test]
fn figure4_json_matches_golden_and_reloads() {
    let t = figure4();
    let json = save_proof(&t);
    assert_golden("figure4.json", &json);
    let loaded = load_proof(&json).unwrap();
    assert_eq!(loaded.report, ProofCheck::Complete);
    assert!(loaded.tree.same_structure(&t));
}

#[test]
fn exported_queries_are_well_formed() {
    let mut rng = StdRng::seed_from_u64(11);
    let sig = tiny_signature();
    for _ in 0..200 {
        let s = random_sequent(&mut rng, &sig, 3, 3);
        let out = export_smtlib(&s, &sig);
        check_smtlib(&out).unwrap_or_else(|e| panic!("{s}: {e}\n{out}"));
        assert_eq!(out.matches("(assert ").count(), s.antecedent.len() + s.succedent.len());
    }
}

fn random_partial_proof(seed: u64) -> ProofTree {
    let mut rng = StdRng::seed_from_u64(seed);
    let sig = tiny_signature();
    let goal = random_sequent(&mut rng, &sig, 2, 3);
    let mut t = ProofTree::new(goal, sig).unwrap();
    for _ in 0..rng.gen_range(0..25) {
        let open = t.open_leaves();
        let Some(&leaf) = open.get(rng.gen_range(0..open.len().max(1))) else { break };
        let s = t.node(leaf).unwrap().sequent.clone();
        let (rule, params) = random_step(&mut rng, &s);
        if let Ok(next) = t.apply(leaf, rule, &params) {
            t = next;
        }
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn partial_proofs_round_trip(seed in any::<u64>()) {
        let t = random_partial_proof(seed);
        let loaded = load_proof(&save_proof(&t)).unwrap();
        prop_assert!(loaded.tree.same_structure(&t));
        prop_assert_eq!(loaded.report, sct_core::check_proof(&t));
        prop_assert_eq!(save_proof(&loaded.tree), save_proof(&t));
    }
}
