//! Random generators for property tests, fuzzing and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::kernel::{axiom_candidates, check_proof, ProofTree, RuleId, RuleParams};
use crate::semantics::Structure;
use crate::syntax::{
    collect_ground_terms, Formula, Name, Occurrence, Sequent, Side, Signature, SymbolKind, Term,
};

const VARS: [&str; 3] = ["x", "y", "z"];

/// `f/1, g/2, a, b, c, P/1, E/2, Q/0`.
pub fn tiny_signature() -> Signature {
    Signature::parse("fun f/1\nfun g/2\nfun a/0\nfun b/0\nfun c/0\nrel P/1\nrel E/2\nrel Q/0")
        .expect("fixed signature")
}

fn symbols(sig: &Signature, kind: SymbolKind) -> Vec<(Name, usize)> {
    sig.decls()
        .iter()
        .filter(|d| d.kind == kind)
        .map(|d| (d.name.clone(), d.arity))
        .collect()
}

/// A term of depth at most `depth` over `sig` and the variables `vars`.
pub fn random_term<R: Rng>(rng: &mut R, sig: &Signature, depth: usize, vars: &[Name]) -> Term {
    let funcs = symbols(sig, SymbolKind::Function);
    let leaves: Vec<&(Name, usize)> = funcs.iter().filter(|(_, a)| *a == 0).collect();
    let inner: Vec<&(Name, usize)> = funcs.iter().filter(|(_, a)| *a > 0).collect();
    if depth > 0 && !inner.is_empty() && rng.gen_bool(0.4) {
        let (f, arity) = inner[rng.gen_range(0..inner.len())];
        let args = (0..*arity).map(|_| random_term(rng, sig, depth - 1, vars)).collect();
        return Term::App(f.clone(), args);
    }
    if !vars.is_empty() && (leaves.is_empty() || rng.gen_bool(0.5)) {
        return Term::Var(vars[rng.gen_range(0..vars.len())].clone());
    }
    let (c, _) = leaves.choose(rng).expect("signature has a constant");
    Term::App(c.clone(), Vec::new())
}

fn random_atom<R: Rng>(rng: &mut R, sig: &Signature, vars: &[Name]) -> Formula {
    let rels = symbols(sig, SymbolKind::Relation);
    if rels.is_empty() || rng.gen_bool(0.3) {
        return Formula::Eq(random_term(rng, sig, 1, vars), random_term(rng, sig, 1, vars));
    }
    let (r, arity) = &rels[rng.gen_range(0..rels.len())];
    Formula::Rel(r.clone(), (0..*arity).map(|_| random_term(rng, sig, 1, vars)).collect())
}

/// A formula of connective depth at most `depth` whose free variables are among `vars`.
pub fn random_formula<R: Rng>(rng: &mut R, sig: &Signature, depth: usize, vars: &[Name]) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return random_atom(rng, sig, vars);
    }
    let sub = |rng: &mut R| Box::new(random_formula(rng, sig, depth - 1, vars));
    match rng.gen_range(0..8) {
        0 => Formula::Not(sub(rng)),
        1 => Formula::And(sub(rng), sub(rng)),
        2 => Formula::Or(sub(rng), sub(rng)),
        3 => Formula::Implies(sub(rng), sub(rng)),
        4 => Formula::Iff(sub(rng), sub(rng)),
        k => {
            let x: Name = VARS[rng.gen_range(0..VARS.len())].into();
            let mut inner = vars.to_vec();
            inner.push(x.clone());
            let body = Box::new(random_formula(rng, sig, depth - 1, &inner));
            if k == 5 {
                Formula::Forall(x, body)
            } else {
                Formula::Exists(x, body)
            }
        }
    }
}

/// A sentence-only sequent with up to `width` formulas per side.
pub fn random_sequent<R: Rng>(rng: &mut R, sig: &Signature, width: usize, depth: usize) -> Sequent {
    let side = |rng: &mut R| -> Vec<Formula> {
        let n = rng.gen_range(0..=width);
        (0..n).map(|_| random_formula(rng, sig, depth, &[])).collect()
    };
    let antecedent = side(rng);
    let succedent = side(rng);
    Sequent::new(antecedent, succedent)
}

/// An atomic sequent with at most `max_subterms` distinct ground subterms,
/// over `f/1`, `g/2`, three constants and `P/1`, `E/2`.
pub fn random_atomic_sequent<R: Rng>(rng: &mut R, max_subterms: usize) -> Sequent {
    let sig = Signature::parse("fun f/1\nfun g/2\nfun a/0\nfun b/0\nfun c/0\nrel P/1\nrel E/2")
        .expect("fixed signature");
    loop {
        let n_ante = rng.gen_range(0..=4);
        let n_succ = rng.gen_range(1..=2);
        let antecedent = (0..n_ante).map(|_| random_atom(rng, &sig, &[])).collect();
        let succedent = (0..n_succ).map(|_| random_atom(rng, &sig, &[])).collect();
        let s = Sequent::new(antecedent, succedent);
        if collect_ground_terms(&s).len() <= max_subterms {
            return s;
        }
    }
}

/// Random interpretation of every symbol of `sig` over `size` elements.
pub fn random_structure<R: Rng>(rng: &mut R, sig: &Signature, size: usize) -> Structure {
    let mut m = Structure::new(size);
    for d in sig.decls() {
        match d.kind {
            SymbolKind::Function => {
                let table: Vec<usize> = (0..size.pow(d.arity as u32)).map(|_| rng.gen_range(0..size)).collect();
                m = m.with_function(&d.name, d.arity, |args| {
                    table[args.iter().fold(0, |acc, &a| acc * size + a)]
                });
            }
            SymbolKind::Relation => {
                let all: Vec<Vec<usize>> = (0..size.pow(d.arity as u32))
                    .map(|i| {
                        let mut t = vec![0; d.arity];
                        let mut k = i;
                        for slot in t.iter_mut().rev() {
                            *slot = k % size;
                            k /= size;
                        }
                        t
                    })
                    .filter(|_| rng.gen_bool(0.5))
                    .collect();
                let refs: Vec<&[usize]> = all.iter().map(Vec::as_slice).collect();
                m = m.with_relation(&d.name, d.arity, &refs);
            }
        }
    }
    m
}

fn witness_pool(s: &Sequent) -> Vec<Term> {
    let mut pool = collect_ground_terms(s);
    if pool.is_empty() {
        pool.push(Term::constant("c"));
    }
    pool
}

/// Some rule application that the kernel may accept at `s`; the caller
/// learns whether it does by applying it.
pub fn random_step<R: Rng>(rng: &mut R, s: &Sequent) -> (RuleId, RuleParams) {
    let rule = RuleId::ALL[rng.gen_range(0..RuleId::ALL.len())];
    let mut params = RuleParams::default();
    let pick = |rng: &mut R, side: Side| -> Option<Occurrence> {
        let n = s.side(side).len();
        (n > 0).then(|| Occurrence { side, index: rng.gen_range(0..n) })
    };
    match rule {
        RuleId::Ax | RuleId::EqR => {}
        RuleId::EqL => params.witness = witness_pool(s).choose(rng).cloned(),
        RuleId::SubstL | RuleId::SubstR => {
            let eqs: Vec<usize> = s
                .antecedent
                .iter()
                .enumerate()
                .filter(|(_, f)| matches!(f, Formula::Eq(..)))
                .map(|(i, _)| i)
                .collect();
            params.eq_occurrence = eqs.choose(rng).copied();
            let side = if rule == RuleId::SubstL { Side::Antecedent } else { Side::Succedent };
            params.target_occurrence = pick(rng, side);
        }
        _ => {
            let side = rule.principal_side().expect("principal rule");
            params.principal = pick(rng, side);
            if matches!(rule, RuleId::ForallL | RuleId::ExistsR) {
                params.witness = witness_pool(s).choose(rng).cloned();
            }
        }
    }
    (rule, params)
}

/// A complete proof built by random kernel steps, or `None` after
/// `attempts` failed tries. Goals are `Γ, φ ⇒ φ, Δ` for random `φ`, so
/// decomposing both copies alike tends to close every branch.
pub fn random_complete_proof<R: Rng>(rng: &mut R, sig: &Signature, attempts: usize) -> Option<ProofTree> {
    for _ in 0..attempts {
        let phi = random_formula(rng, sig, 2, &[]);
        let mut goal = random_sequent(rng, sig, 1, 1);
        goal.antecedent.insert(rng.gen_range(0..=goal.antecedent.len()), phi.clone());
        goal.succedent.insert(rng.gen_range(0..=goal.succedent.len()), phi);
        let Ok(mut tree) = ProofTree::new(goal, sig.clone()) else { continue };
        for _ in 0..60 {
            let open = tree.open_leaves();
            let Some(&leaf) = open.first() else { break };
            let s = tree.node(leaf).expect("open leaf").sequent.clone();
            let closers = axiom_candidates(&s);
            let (rule, params) = if !closers.is_empty() && rng.gen_bool(0.8) {
                closers.choose(rng).cloned().expect("nonempty")
            } else {
                random_step(rng, &s)
            };
            if let Ok(next) = tree.apply(leaf, rule, &params) {
                tree = next;
            }
        }
        if tree.open_leaves().is_empty() {
            debug_assert!(check_proof(&tree).is_complete());
            return Some(tree);
        }
    }
    None
}
