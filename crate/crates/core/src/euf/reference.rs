//! Naive congruence closure by fixpoint iteration over an explicit relation.
//! Cubic per round and meant only as an independent check on the fast engine.

use crate::syntax::{Formula, Sequent, Term};

fn subterms(t: &Term, out: &mut Vec<Term>) {
    if let Term::App(_, args) = t {
        args.iter().for_each(|a| subterms(a, out));
    }
    if !out.contains(t) {
        out.push(t.clone());
    }
}

/// The equivalence closure of `eqs` over every subterm of `terms`, closed
/// under congruence. Returns the terms and the relation as a matrix.
pub fn naive_closure(eqs: &[(Term, Term)], terms: &[Term]) -> (Vec<Term>, Vec<Vec<bool>>) {
    let mut all = Vec::new();
    for t in terms.iter().chain(eqs.iter().flat_map(|(l, r)| [l, r])) {
        subterms(t, &mut all);
    }
    let n = all.len();
    let idx = |t: &Term| all.iter().position(|u| u == t).expect("collected");
    let mut rel = vec![vec![false; n]; n];
    for (i, row) in rel.iter_mut().enumerate() {
        row[i] = true;
    }
    for (l, r) in eqs {
        let (i, j) = (idx(l), idx(r));
        rel[i][j] = true;
        rel[j][i] = true;
    }
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if rel[i][j] {
                    continue;
                }
                let trans = (0..n).any(|k| rel[i][k] && rel[k][j]);
                let cong = match (&all[i], &all[j]) {
                    (Term::App(f, xs), Term::App(g, ys)) => {
                        f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| rel[idx(x)][idx(y)])
                    }
                    _ => false,
                };
                if trans || cong {
                    rel[i][j] = true;
                    rel[j][i] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return (all, rel);
        }
    }
}

/// Validity of an atomic sequent modulo ground equality, decided naively.
pub fn naive_valid(s: &Sequent) -> bool {
    let mut eqs = Vec::new();
    let mut terms = Vec::new();
    for f in s.formulas() {
        match f {
            Formula::Eq(l, r) => terms.extend([l.clone(), r.clone()]),
            Formula::Rel(_, args) => terms.extend(args.iter().cloned()),
            _ => {}
        }
    }
    for f in &s.antecedent {
        if let Formula::Eq(l, r) = f {
            eqs.push((l.clone(), r.clone()));
        }
    }
    let (all, rel) = naive_closure(&eqs, &terms);
    let same = |a: &Term, b: &Term| {
        let i = all.iter().position(|u| u == a).expect("collected");
        let j = all.iter().position(|u| u == b).expect("collected");
        rel[i][j]
    };
    s.succedent.iter().any(|g| match g {
        Formula::Eq(l, r) => same(l, r),
        Formula::Rel(p, ts) => s.antecedent.iter().any(|f| {
            matches!(f, Formula::Rel(q, us) if q == p && us.len() == ts.len() && us.iter().zip(ts).all(|(u, t)| same(u, t)))
        }),
        _ => false,
    })
}
