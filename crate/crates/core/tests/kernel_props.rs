use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sct_core::kernel::premisses;
use sct_core::random::{random_complete_proof, random_sequent, random_step, random_structure, tiny_signature};
use sct_core::{
    check_proof, find_countermodel, is_countermodel, CancelToken, CountermodelResult, ProofCheck, ProofTree,
    RuleId, Sequent, Signature,
};

fn holds(s: &Sequent, m: &sct_core::Structure) -> bool {
    !is_countermodel(s, m).expect("structure interprets every symbol")
}

/// Signature covering the tiny signature plus every symbol in `seqs`.
fn covering(seqs: &[&Sequent]) -> Signature {
    let mut sig = tiny_signature();
    for s in seqs {
        sig.extend(&Signature::of_sequent(s).unwrap()).unwrap();
    }
    sig
}

/// A random sequent together with a kernel-accepted step at it.
fn accepted_step(rng: &mut StdRng) -> (Sequent, RuleId, Vec<Sequent>) {
    let sig = tiny_signature();
    loop {
        let s = random_sequent(rng, &sig, 3, 2);
        for _ in 0..20 {
            let (rule, params) = random_step(rng, &s);
            if let Ok((prem, _)) = premisses(&s, rule, &params, &sig) {
                return (s, rule, prem);
            }
        }
    }
}

const INVERTIBLE: [RuleId; 13] = [
    RuleId::AndL,
    RuleId::AndR,
    RuleId::OrL,
    RuleId::OrR,
    RuleId::NotL,
    RuleId::NotR,
    RuleId::ImpL,
    RuleId::ImpR,
    RuleId::IffL,
    RuleId::IffR,
    RuleId::ContrL,
    RuleId::ContrR,
    RuleId::EqL,
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    /// Steps without eigenconstants preserve truth in every structure.
    #[test]
    fn local_soundness(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (s, rule, prem) = accepted_step(&mut rng);
        prop_assume!(!matches!(rule, RuleId::ExistsL | RuleId::ForallR));
        let mut all: Vec<&Sequent> = prem.iter().collect();
        all.push(&s);
        let sig = covering(&all);
        for size in 1..=2 {
            let m = random_structure(&mut rng, &sig, size);
            if prem.iter().all(|p| holds(p, &m)) {
                prop_assert!(holds(&s, &m), "{rule} unsound at {s} in {:?}", m.to_json());
            }
        }
    }

    /// Invertible rules preserve truth in both directions.
    #[test]
    fn invertible_rules_are_equivalences(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (s, rule, prem) = accepted_step(&mut rng);
        prop_assume!(INVERTIBLE.contains(&rule));
        let mut all: Vec<&Sequent> = prem.iter().collect();
        all.push(&s);
        let sig = covering(&all);
        let size = rng.gen_range(1..=2);
        let m = random_structure(&mut rng, &sig, size);
        prop_assert_eq!(holds(&s, &m), prem.iter().all(|p| holds(p, &m)), "{} at {}", rule, s);
    }

    /// Trees grown only through the kernel are never malformed.
    #[test]
    fn kernel_trees_check(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let goal = random_sequent(&mut rng, &tiny_signature(), 2, 2);
        let mut tree = ProofTree::new(goal, tiny_signature()).unwrap();
        for _ in 0..15 {
            let open = tree.open_leaves();
            let Some(&leaf) = open.first() else { break };
            let s = tree.node(leaf).unwrap().sequent.clone();
            let (rule, params) = random_step(&mut rng, &s);
            if let Ok(next) = tree.apply(leaf, rule, &params) {
                tree = next;
            }
        }
        let report = check_proof(&tree);
        prop_assert!(!matches!(report, ProofCheck::Malformed { .. }), "{:?}", report);
        prop_assert_eq!(report.is_complete(), tree.open_leaves().is_empty());
    }
}

#[test]
fn complete_random_proofs_have_no_small_countermodels() {
    let mut rng = StdRng::seed_from_u64(9);
    let sig = tiny_signature();
    let mut n = 0;
    while n < 100 {
        let Some(t) = random_complete_proof(&mut rng, &sig, 50) else { continue };
        n += 1;
        assert!(check_proof(&t).is_complete());
        let verdict = find_countermodel(t.goal(), 2, &CancelToken::new());
        assert_eq!(verdict, CountermodelResult::NotFound, "{}", t.goal());
    }
}
