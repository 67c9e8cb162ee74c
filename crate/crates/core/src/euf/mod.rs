//! Congruence closure over ground terms with explanations.
//!
//! Union-find with path compression and union by rank; a signature table and
//! per-class use lists detect congruences. A proof forest records why each
//! pair of terms was merged so that equalities can be replayed as chains of
//! single rewrites.

pub(crate) mod decide;
pub mod reference;

use std::collections::HashMap;

use thiserror::Error;

use crate::syntax::{Name, Path, Term};

pub use decide::{atomic_part, decide_atomic, extract_model, AtomicVerdict, ClosingWitness};

pub type TermId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EufError {
    #[error("sequent contains non-atomic formula `{0}`")]
    NotAtomic(String),
    #[error("term `{0}` is not ground")]
    NonGround(String),
    #[error("extracted structure is not a countermodel")]
    InternalInconsistency,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Reason {
    /// The `k`-th asserted equation.
    Input(usize),
    /// Two applications with pairwise congruent arguments.
    Congruence(TermId, TermId),
}

/// One rewrite `from → to` at `path` inside the term being rewritten.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteStep {
    pub path: Path,
    pub from: Term,
    pub to: Term,
    /// Index of the asserted equation justifying the step.
    pub equation: usize,
    /// The equation was asserted as `to = from`.
    pub reversed: bool,
}

/// Congruence classes of a finite set of ground terms.
#[derive(Debug, Clone, Default)]
pub struct CongruencePartition {
    terms: Vec<Term>,
    apps: Vec<(Name, Vec<TermId>)>,
    ids: HashMap<Term, TermId>,
    parent: Vec<TermId>,
    rank: Vec<u32>,
    uses: Vec<Vec<TermId>>,
    sigs: HashMap<(Name, Vec<TermId>), TermId>,
    proof: Vec<Option<(TermId, Reason)>>,
    equations: Vec<(TermId, TermId)>,
    pending: Vec<(TermId, TermId, Reason)>,
}

impl CongruencePartition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, id: TermId) -> &Term {
        &self.terms[id]
    }

    pub fn id_of(&self, t: &Term) -> Option<TermId> {
        self.ids.get(t).copied()
    }

    /// Interns `t` and its subterms.
    pub fn add_term(&mut self, t: &Term) -> Result<TermId, EufError> {
        if let Some(&id) = self.ids.get(t) {
            return Ok(id);
        }
        let Term::App(f, args) = t else {
            return Err(EufError::NonGround(t.to_string()));
        };
        let arg_ids = args
            .iter()
            .map(|a| self.add_term(a))
            .collect::<Result<Vec<_>, _>>()?;
        let id = self.terms.len();
        self.terms.push(t.clone());
        self.apps.push((f.clone(), arg_ids.clone()));
        self.ids.insert(t.clone(), id);
        self.parent.push(id);
        self.rank.push(0);
        self.uses.push(Vec::new());
        self.proof.push(None);
        for &a in &arg_ids {
            let r = self.find(a);
            if !self.uses[r].contains(&id) {
                self.uses[r].push(id);
            }
        }
        let sig = self.signature(id);
        match self.sigs.get(&sig) {
            Some(&other) => {
                self.pending.push((id, other, Reason::Congruence(id, other)));
                self.propagate();
            }
            None => {
                self.sigs.insert(sig, id);
            }
        }
        Ok(id)
    }

    pub fn find(&mut self, x: TermId) -> TermId {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn signature(&mut self, id: TermId) -> (Name, Vec<TermId>) {
        let (f, args) = self.apps[id].clone();
        (f, args.into_iter().map(|a| self.find(a)).collect())
    }

    /// Asserts `l = r`; returns the equation's index for explanations.
    pub fn assert_eq(&mut self, l: &Term, r: &Term) -> Result<usize, EufError> {
        let a = self.add_term(l)?;
        let b = self.add_term(r)?;
        let k = self.equations.len();
        self.equations.push((a, b));
        self.pending.push((a, b, Reason::Input(k)));
        self.propagate();
        Ok(k)
    }

    fn propagate(&mut self) {
        while let Some((a, b, why)) = self.pending.pop() {
            let (ra, rb) = (self.find(a), self.find(b));
            if ra == rb {
                continue;
            }
            self.add_proof_edge(a, b, why);
            let (small, big) = if self.rank[ra] < self.rank[rb] { (ra, rb) } else { (rb, ra) };
            if self.rank[small] == self.rank[big] {
                self.rank[big] += 1;
            }
            self.parent[small] = big;
            let moved = std::mem::take(&mut self.uses[small]);
            for &u in &moved {
                let sig = self.signature(u);
                match self.sigs.get(&sig).copied() {
                    Some(v) if self.find(v) != self.find(u) => {
                        self.pending.push((u, v, Reason::Congruence(u, v)));
                    }
                    Some(_) => {}
                    None => {
                        self.sigs.insert(sig, u);
                    }
                }
                if !self.uses[big].contains(&u) {
                    self.uses[big].push(u);
                }
            }
        }
    }

    fn add_proof_edge(&mut self, a: TermId, b: TermId, why: Reason) {
        // Re-root a's proof tree at a, then hang it below b.
        let mut x = a;
        let mut incoming: Option<(TermId, Reason)> = None;
        loop {
            let old = self.proof[x].take();
            self.proof[x] = incoming;
            match old {
                None => break,
                Some((p, r)) => {
                    incoming = Some((x, r));
                    x = p;
                }
            }
        }
        self.proof[a] = Some((b, why));
    }

    pub fn congruent(&mut self, a: &Term, b: &Term) -> Result<bool, EufError> {
        let x = self.add_term(a)?;
        let y = self.add_term(b)?;
        Ok(self.find(x) == self.find(y))
    }

    /// Proof-forest edges on the path from `a` to `b`, oriented along the path.
    fn explain_edges(&self, a: TermId, b: TermId) -> Vec<(TermId, TermId, Reason)> {
        let mut up_a = vec![a];
        while let Some((p, _)) = self.proof[*up_a.last().expect("nonempty")] {
            up_a.push(p);
        }
        let mut up_b = vec![b];
        let mut cur = b;
        while !up_a.contains(&cur) {
            let (p, _) = self.proof[cur].expect("terms are congruent");
            up_b.push(p);
            cur = p;
        }
        let lca = cur;
        let mut edges = Vec::new();
        let mut x = a;
        while x != lca {
            let (p, r) = self.proof[x].expect("on path");
            edges.push((x, p, r));
            x = p;
        }
        let mut down = Vec::new();
        let mut y = b;
        while y != lca {
            let (p, r) = self.proof[y].expect("on path");
            down.push((p, y, r));
            y = p;
        }
        edges.extend(down.into_iter().rev());
        edges
    }

    /// Single-rewrite chain turning `a` into `b`; empty if they are identical.
    ///
    /// Panics unless `a` and `b` are congruent.
    pub fn rewrite_chain(&mut self, a: &Term, b: &Term) -> Result<Vec<RewriteStep>, EufError> {
        let x = self.add_term(a)?;
        let y = self.add_term(b)?;
        assert_eq!(self.find(x), self.find(y), "rewrite_chain needs congruent terms");
        let mut out = Vec::new();
        self.chain_into(x, y, &mut Vec::new(), &mut out);
        Ok(out)
    }

    fn chain_into(&self, a: TermId, b: TermId, prefix: &mut Path, out: &mut Vec<RewriteStep>) {
        if a == b {
            return;
        }
        for (x, y, why) in self.explain_edges(a, b) {
            match why {
                Reason::Input(k) => {
                    let (l, _) = self.equations[k];
                    out.push(RewriteStep {
                        path: prefix.clone(),
                        from: self.terms[x].clone(),
                        to: self.terms[y].clone(),
                        equation: k,
                        reversed: l != x,
                    });
                }
                Reason::Congruence(..) => {
                    let xs = self.apps[x].1.clone();
                    let ys = self.apps[y].1.clone();
                    for (i, (p, q)) in xs.into_iter().zip(ys).enumerate() {
                        prefix.push(i);
                        self.chain_into(p, q, prefix, out);
                        prefix.pop();
                    }
                }
            }
        }
    }

    /// Class representatives grouped: each inner list is one class, in term order.
    pub fn classes(&mut self) -> Vec<Vec<TermId>> {
        let mut index: HashMap<TermId, usize> = HashMap::new();
        let mut out: Vec<Vec<TermId>> = Vec::new();
        for id in 0..self.terms.len() {
            let r = self.find(id);
            let slot = *index.entry(r).or_insert_with(|| {
                out.push(Vec::new());
                out.len() - 1
            });
            out[slot].push(id);
        }
        out
    }
}

/// Closes the given ground equations over `terms` plus every equation side.
pub fn cc_close(equations: &[(Term, Term)], terms: &[Term]) -> Result<CongruencePartition, EufError> {
    let mut cc = CongruencePartition::new();
    for t in terms {
        cc.add_term(t)?;
    }
    for (l, r) in equations {
        cc.assert_eq(l, r)?;
    }
    Ok(cc)
}
