//! Acceptance criteria 1 to 10. Runs without the libtest harness so that one
//! PASS/FAIL line per criterion always reaches the console; exits non-zero
//! if any criterion fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::SeedableRng;
use sct_core::euf::reference::naive_valid;
use sct_core::io::{export_latex, latex_inference_count, load_proof, save_proof, ProofDocument};
use sct_core::kernel::Step;
use sct_core::oracle::{diagonal_baseline, try_partial_instantiation};
use sct_core::random::{random_atomic_sequent, random_complete_proof, random_formula, tiny_signature};
use sct_core::{
    check_proof, collect_ground_terms, decide_atomic, find_countermodel, is_countermodel, parse_formula,
    parse_sequent, print_formula, prove, status, AtomicVerdict, CancelToken, CountermodelResult, Occurrence,
    ProofCheck, ProveOutcome, RuleId, SearchBudget, Side, Signature, ValidityStatus,
};

const S0: &str = "forall x. forall y. E(x,y) -> x = f(y) => forall x. forall y. forall z. E(x,z) & E(y,z) -> x = y";
const S2: &str = "E(b,c) -> b = f(c), E(a,c), E(b,c) => a = b";
const FIVE: &str = "forall y. P(g(e,f(y))), Q(f(c)), R(h(d),e) => exists x. P(x)";
const FIVE_ORDER: &str = "fun f/1\nfun g/2\nfun h/1\nfun c/0\nfun d/0\nfun e/0";
const HARD: &str = "forall x. P(f(g(f(x)))) & ~P(f(g(h(c)))) =>";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn seq(src: &str) -> sct_core::Sequent {
    parse_sequent(src, &mut Signature::new()).expect("fixed sequent parses")
}

fn figure4_fidelity() -> Outcome {
    let start = Instant::now();
    let text = std::fs::read_to_string(fixture("figure4.json")).map_err(|e| e.to_string())?;
    let loaded = load_proof(&text).map_err(|e| e.to_string())?;
    ensure(loaded.report == ProofCheck::Complete, format!("transcript checks {:?}", loaded.report))?;
    let tree = &loaded.tree;
    let count = |r: RuleId| {
        tree.preorder()
            .iter()
            .filter(|&&n| tree.node(n).unwrap().step.as_ref().is_some_and(|s| s.rule == r))
            .count()
    };
    let expected = [
        (RuleId::ForallR, 3),
        (RuleId::ImpR, 1),
        (RuleId::AndL, 1),
        (RuleId::ContrL, 1),
        (RuleId::ForallL, 4),
        (RuleId::ImpL, 2),
        (RuleId::SubstR, 1),
        (RuleId::Ax, 3),
    ];
    for (rule, n) in expected {
        ensure(count(rule) == n, format!("{rule} used {} times, expected {n}", count(rule)))?;
    }
    let typeset = latex_inference_count(&export_latex(tree));
    ensure(typeset == 18, format!("typeset inference count {typeset}"))?;
    let mut mutated = 0;
    for id in tree.preorder() {
        let Some(step) = tree.node(id).unwrap().step.clone() else { continue };
        for rule in RuleId::ALL.into_iter().filter(|&r| r != step.rule) {
            let mut doc = ProofDocument::from_tree(tree);
            doc.nodes.iter_mut().find(|n| n.id == id).unwrap().rule = Some(rule);
            let relabelled = load_proof(&serde_json::to_string(&doc).unwrap()).map_err(|e| e.to_string())?;
            ensure(
                matches!(relabelled.report, ProofCheck::Malformed { node, .. } if node == id),
                format!("relabelling node {id} as {rule} gave {:?}", relabelled.report),
            )?;
            mutated += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} kernel inferences ({typeset} typeset), {mutated} relabellings all Malformed, {elapsed:.0?}",
        tree.inference_count()
    ))
}

fn auto_prove_s0() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().join("s0.json");
    let start = Instant::now();
    let run = Command::new(env!("CARGO_BIN_EXE_sct"))
        .args(["prove", S0, "--budget-ms", "10000", "--out"])
        .arg(&out)
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(run.status.code() == Some(0), format!("exit {:?}: {}", run.status.code(), String::from_utf8_lossy(&run.stderr)))?;
    ensure(elapsed < Duration::from_secs(10), format!("took {elapsed:?}"))?;
    let loaded = load_proof(&std::fs::read_to_string(&out).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(loaded.report.is_complete(), format!("emitted proof checks {:?}", loaded.report))?;
    ensure(loaded.tree.goal().same_display(&seq(S0)), "emitted proof has a different goal")?;
    Ok(format!("green, {} inferences, re-checked Complete, {elapsed:.0?}", loaded.tree.inference_count()))
}

fn s2_invalid() -> Outcome {
    let start = Instant::now();
    let s = seq(S2);
    let st = status(&s, &SearchBudget::default());
    let elapsed = start.elapsed();
    let ValidityStatus::Red(m) = st else { return Err(format!("status {}", st.color())) };
    ensure(m.size <= 3, format!("universe size {}", m.size))?;
    ensure(is_countermodel(&s, &m).map_err(|e| e.to_string())?, "structure is not a countermodel")?;
    ensure(elapsed < Duration::from_secs(2), format!("took {elapsed:?}"))?;
    Ok(format!("red, universe size {}, {elapsed:.0?}", m.size))
}

fn partial_instantiation_gap() -> Outcome {
    let order = Signature::parse(FIVE_ORDER).unwrap();
    let s = parse_sequent(FIVE, &mut order.clone()).unwrap();
    let q = Occurrence { side: Side::Succedent, index: 0 };
    let budget = SearchBudget::default();
    let found = try_partial_instantiation(&s, q, &budget, Some(&order)).map_err(|e| format!("{e:?}"))?;
    let (position, _) = diagonal_baseline(&s, q, &order, 100_000, &budget)
        .map_err(|e| e.to_string())?
        .ok_or("diagonal baseline found no witness")?;
    let bench = Command::new(env!("CARGO_BIN_EXE_sct")).arg("bench").output().map_err(|e| e.to_string())?;
    let csv = String::from_utf8_lossy(&bench.stdout);
    let summary = format!(
        "candidates {} (groundings {}), diagonal position {position}, ratio {:.1}",
        found.candidates,
        found.groundings,
        position as f64 / found.candidates as f64
    );
    ensure(found.candidates <= 150, format!("{summary}: too many candidates"))?;
    ensure(position >= 5 * found.candidates, format!("{summary}: gap below 5x"))?;
    ensure(
        csv.contains(&format!("partial_instantiation,{},", found.candidates)) && csv.contains(&format!("diagonal_ground,{position},")),
        format!("{summary}: bench CSV lacks the counts:\n{csv}"),
    )?;
    ensure(position > 1000, format!("{summary}: diagonal baseline needs only {position} <= 1000 positions"))?;
    Ok(summary)
}

fn proof_rules(outcome: ProveOutcome) -> Result<Vec<RuleId>, String> {
    let ProveOutcome::Proved(t) = outcome else { return Err(format!("{outcome:?}")) };
    ensure(check_proof(&t).is_complete(), "proof does not check")?;
    Ok(t.preorder().iter().filter_map(|&n| t.node(n).unwrap().step.as_ref().map(|s: &Step| s.rule)).collect())
}

fn drinker() -> Outcome {
    let start = Instant::now();
    let literal = proof_rules(prove(&seq("=> exists x. (forall y. Drinks(y)) -> Drinks(x)"), &SearchBudget::default()))?;
    let classic = proof_rules(prove(&seq("=> exists x. (Drinks(x) -> forall y. Drinks(y))"), &SearchBudget::default()))?;
    let elapsed = start.elapsed();
    let exists_r = classic.iter().filter(|r| **r == RuleId::ExistsR).count();
    ensure(classic.contains(&RuleId::ContrR), "drinker proof lacks ContrR")?;
    ensure(exists_r >= 2, format!("drinker proof has {exists_r} ExistsR"))?;
    ensure(elapsed < Duration::from_secs(5), format!("took {elapsed:?}"))?;
    Ok(format!(
        "as written: {} inferences; exists x. (D(x) -> forall y. D(y)): ContrR + {exists_r} ExistsR; {elapsed:.0?}",
        literal.len()
    ))
}

fn equality_chain() -> Outcome {
    let rules = proof_rules(prove(&seq("=> (forall x. f(x) = x) -> (forall x. f(f(x)) = x)"), &SearchBudget::default()))?;
    for r in [RuleId::ForallL, RuleId::EqR] {
        ensure(rules.contains(&r), format!("proof lacks {r}"))?;
    }
    ensure(
        rules.iter().any(|r| matches!(r, RuleId::SubstL | RuleId::SubstR)),
        "proof uses no substitution rule",
    )?;
    Ok(format!("green, {} inferences", rules.len()))
}

fn hard_case() -> Outcome {
    let budget = SearchBudget::with_timeout(Duration::from_millis(1000));
    let start = Instant::now();
    let st = status(&seq(HARD), &budget);
    let elapsed = start.elapsed();
    ensure(st.color() != "green", "hard case reported green")?;
    ensure(elapsed < budget.timeout + Duration::from_millis(100), format!("took {elapsed:?}"))?;
    Ok(format!("{} in {elapsed:.0?} (budget 1s)", st.color()))
}

fn euf_equivalence() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let mut valid_count = 0;
    for _ in 0..500 {
        let s = random_atomic_sequent(&mut rng, 8);
        let verdict = decide_atomic(&s).map_err(|e| e.to_string())?;
        let valid = matches!(verdict, AtomicVerdict::Valid(_));
        ensure(valid == naive_valid(&s), format!("closure disagrees with rewriting on `{s}`"))?;
        let bound = collect_ground_terms(&s).len() + 1;
        let found = find_countermodel(&s, bound, &CancelToken::new());
        match (&found, valid) {
            (CountermodelResult::Found(m), false) => {
                ensure(is_countermodel(&s, m).unwrap_or(false), format!("bad countermodel for `{s}`"))?
            }
            (CountermodelResult::NotFound, true) => valid_count += 1,
            _ => return Err(format!("model search disagrees on `{s}`: valid={valid}, search={found:?}")),
        }
    }
    Ok(format!("500/500 agree ({valid_count} valid)"))
}

fn soundness_fuzz() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let sig = tiny_signature();
    let mut proofs = 0;
    while proofs < 1000 {
        let Some(t) = random_complete_proof(&mut rng, &sig, 50) else { continue };
        ensure(check_proof(&t).is_complete(), "generated proof does not check")?;
        match find_countermodel(t.goal(), 3, &CancelToken::new()) {
            CountermodelResult::NotFound => {}
            other => return Err(format!("proved `{}` but model search returned {other:?}", t.goal())),
        }
        let round = load_proof(&save_proof(&t)).map_err(|e| e.to_string())?;
        ensure(round.report.is_complete(), "proof failed to re-check after a save/load cycle")?;
        proofs += 1;
    }
    Ok("1000 proofs, 0 countermodels up to size 3".into())
}

fn parser_round_trip() -> Outcome {
    let mut rng = StdRng::seed_from_u64(10);
    let sig = tiny_signature();
    for _ in 0..1000 {
        let f = random_formula(&mut rng, &sig, 5, &[]);
        let text = print_formula(&f);
        let back = parse_formula(&text, &mut sig.clone()).map_err(|e| format!("`{text}`: {e}"))?;
        ensure(back == f, format!("`{text}` re-parses differently"))?;
        ensure(print_formula(&back) == text, format!("`{text}` re-prints differently"))?;
    }
    Ok("1000/1000 formulas".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("figure 4 transcript", figure4_fidelity),
        ("auto-prove S0", auto_prove_s0),
        ("S2 invalidity", s2_invalid),
        ("partial-instantiation gap", partial_instantiation_gap),
        ("drinker sentence", drinker),
        ("equality chain", equality_chain),
        ("hard-case honesty", hard_case),
        ("EUF oracle equivalence", euf_equivalence),
        ("soundness fuzz", soundness_fuzz),
        ("parser round-trip", parser_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
