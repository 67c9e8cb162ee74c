//! Proof trees and the rule kernel.
//!
//! Every tree is built by [`ProofTree::apply`], which only ever attaches
//! premisses computed from a rule schema. Trees are persistent values: each
//! mutation returns a new tree and leaves the old one intact.

mod check;
mod rules;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Occurrence, Path, Sequent, Side, Signature, Term};

pub use check::{check_proof, differs_by_replacement, ProofCheck};

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    AndL,
    AndR,
    OrL,
    OrR,
    NotL,
    NotR,
    ImpL,
    ImpR,
    IffL,
    IffR,
    ExistsL,
    ExistsR,
    ForallL,
    ForallR,
    ContrL,
    ContrR,
    SubstL,
    SubstR,
    EqL,
    Ax,
    EqR,
}

impl RuleId {
    pub const ALL: [RuleId; 21] = [
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
        RuleId::ExistsL,
        RuleId::ExistsR,
        RuleId::ForallL,
        RuleId::ForallR,
        RuleId::ContrL,
        RuleId::ContrR,
        RuleId::SubstL,
        RuleId::SubstR,
        RuleId::EqL,
        RuleId::Ax,
        RuleId::EqR,
    ];

    pub fn premiss_count(self) -> usize {
        match self {
            RuleId::Ax | RuleId::EqR => 0,
            RuleId::AndR | RuleId::OrL | RuleId::ImpL | RuleId::IffR => 2,
            _ => 1,
        }
    }

    /// Side of the principal formula, for rules that have one.
    pub fn principal_side(self) -> Option<Side> {
        use RuleId::*;
        match self {
            AndL | OrL | NotL | ImpL | IffL | ExistsL | ForallL | ContrL => Some(Side::Antecedent),
            AndR | OrR | NotR | ImpR | IffR | ExistsR | ForallR | ContrR | EqR => Some(Side::Succedent),
            SubstL | SubstR | EqL | Ax => None,
        }
    }

    pub fn name(self) -> &'static str {
        use RuleId::*;
        match self {
            AndL => "AndL",
            AndR => "AndR",
            OrL => "OrL",
            OrR => "OrR",
            NotL => "NotL",
            NotR => "NotR",
            ImpL => "ImpL",
            ImpR => "ImpR",
            IffL => "IffL",
            IffR => "IffR",
            ExistsL => "ExistsL",
            ExistsR => "ExistsR",
            ForallL => "ForallL",
            ForallR => "ForallR",
            ContrL => "ContrL",
            ContrR => "ContrR",
            SubstL => "SubstL",
            SubstR => "SubstR",
            EqL => "EqL",
            Ax => "Ax",
            EqR => "EqR",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| KernelError::BadParams(format!("unknown rule `{s}`")))
    }
}

/// Rule arguments. Each rule reads only its own fields; others must be unset.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub principal: Option<Occurrence>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fresh_const: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "term_text")]
    pub witness: Option<Term>,
    /// Antecedent index of the equation `s = s'`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eq_occurrence: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_occurrence: Option<Occurrence>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replace_at: Option<Vec<Path>>,
    /// `(antecedent index, succedent index)` of the shared formula.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axiom_witness: Option<(usize, usize)>,
}

impl RuleParams {
    pub fn principal(occ: Occurrence) -> Self {
        RuleParams {
            principal: Some(occ),
            ..Default::default()
        }
    }

    pub fn with_witness(mut self, t: Term) -> Self {
        self.witness = Some(t);
        self
    }

    pub fn with_fresh(mut self, c: &str) -> Self {
        self.fresh_const = Some(c.to_string());
        self
    }

    pub fn subst(eq: usize, target: Occurrence, paths: Vec<Path>) -> Self {
        RuleParams {
            eq_occurrence: Some(eq),
            target_occurrence: Some(target),
            replace_at: Some(paths),
            ..Default::default()
        }
    }

    pub fn axiom(ante: usize, succ: usize) -> Self {
        RuleParams {
            axiom_witness: Some((ante, succ)),
            ..Default::default()
        }
    }
}

/// Witness terms travel as surface syntax; resolved against the tree signature.
mod term_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::syntax::{parse_term, print_term, Signature, Term};

    pub fn serialize<S: Serializer>(t: &Option<Term>, s: S) -> Result<S::Ok, S::Error> {
        match t {
            Some(t) => s.serialize_str(&print_term(t)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Term>, D::Error> {
        let text: Option<String> = Option::deserialize(d)?;
        text.map(|t| parse_term(&t, &mut Signature::new()).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("rule does not match: {0}")]
    RuleMismatch(String),
    #[error("constant `{0}` is not fresh for this sequent")]
    FreshnessViolation(String),
    #[error("witness `{0}` is not a ground term")]
    NonGroundWitness(String),
    #[error("no equation at antecedent position {0}")]
    NoSuchEquality(usize),
    #[error("replacement would capture a variable of `{0}`")]
    CaptureViolation(String),
    #[error("node {0} already has a rule applied")]
    NodeNotOpen(NodeId),
    #[error("no node with id {0}")]
    NoSuchNode(NodeId),
    #[error("no formula at {0}")]
    NoSuchOccurrence(String),
    #[error("node {0} has no rule to undo")]
    NothingToUndo(NodeId),
    #[error("invalid rule parameters: {0}")]
    BadParams(String),
    #[error("goal is not a sequent of sentences: {0}")]
    NotASentence(String),
}

impl KernelError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            KernelError::RuleMismatch(_) => "RuleMismatch",
            KernelError::FreshnessViolation(_) => "FreshnessViolation",
            KernelError::NonGroundWitness(_) => "NonGroundWitness",
            KernelError::NoSuchEquality(_) => "NoSuchEquality",
            KernelError::CaptureViolation(_) => "CaptureViolation",
            KernelError::NodeNotOpen(_) => "NodeNotOpen",
            KernelError::NoSuchNode(_) => "NoSuchNode",
            KernelError::NoSuchOccurrence(_) => "NoSuchOccurrence",
            KernelError::NothingToUndo(_) => "NothingToUndo",
            KernelError::BadParams(_) => "BadParams",
            KernelError::NotASentence(_) => "NotASentence",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: RuleId,
    pub params: RuleParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProofNode {
    pub sequent: Arc<Sequent>,
    pub step: Option<Step>,
    pub children: Vec<NodeId>,
    pub parent: Option<NodeId>,
}

impl ProofNode {
    pub fn is_open(&self) -> bool {
        self.step.is_none()
    }
}

/// Malformed node table handed to [`ProofTree::from_nodes`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeShapeError {
    #[error("root node {0} is missing")]
    MissingRoot(NodeId),
    #[error("node {0} refers to missing child {1}")]
    MissingChild(NodeId, NodeId),
    #[error("node {0} has more than one parent or is the root's child")]
    SharedNode(NodeId),
    #[error("node {0} is unreachable from the root")]
    Unreachable(NodeId),
    #[error("duplicate node id {0}")]
    DuplicateId(NodeId),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProofTree {
    signature: Signature,
    nodes: BTreeMap<NodeId, ProofNode>,
    root: NodeId,
    next_id: NodeId,
}

impl ProofTree {
    /// A one-node tree whose only open leaf is `goal`.
    pub fn new(goal: Sequent, signature: Signature) -> Result<ProofTree, KernelError> {
        if let Some(x) = goal.free_vars().first() {
            return Err(KernelError::NotASentence(x.to_string()));
        }
        let mut signature = signature;
        for f in goal.formulas() {
            signature
                .declare_formula(f)
                .map_err(|e| KernelError::BadParams(e.to_string()))?;
        }
        let mut nodes = BTreeMap::new();
        nodes.insert(
            0,
            ProofNode {
                sequent: Arc::new(goal),
                step: None,
                children: Vec::new(),
                parent: None,
            },
        );
        Ok(ProofTree {
            signature,
            nodes,
            root: 0,
            next_id: 1,
        })
    }

    /// Rebuilds a tree from explicit nodes `(id, sequent, step, children)`.
    ///
    /// Only the tree shape is validated; rule correctness is `check_proof`'s job.
    pub fn from_nodes(
        signature: Signature,
        root: NodeId,
        raw: Vec<(NodeId, Sequent, Option<Step>, Vec<NodeId>)>,
    ) -> Result<ProofTree, TreeShapeError> {
        let mut nodes = BTreeMap::new();
        for (id, sequent, step, children) in raw {
            let node = ProofNode {
                sequent: Arc::new(sequent),
                step,
                children,
                parent: None,
            };
            if nodes.insert(id, node).is_some() {
                return Err(TreeShapeError::DuplicateId(id));
            }
        }
        if !nodes.contains_key(&root) {
            return Err(TreeShapeError::MissingRoot(root));
        }
        let edges: Vec<(NodeId, NodeId)> = nodes
            .iter()
            .flat_map(|(&p, n)| n.children.iter().map(move |&c| (p, c)))
            .collect();
        for (p, c) in edges {
            let child = nodes.get_mut(&c).ok_or(TreeShapeError::MissingChild(p, c))?;
            if child.parent.is_some() || c == root {
                return Err(TreeShapeError::SharedNode(c));
            }
            child.parent = Some(p);
        }
        let mut seen = 0;
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            seen += 1;
            stack.extend(nodes[&id].children.iter().copied());
        }
        if seen != nodes.len() {
            let orphan = nodes
                .iter()
                .find(|(&id, n)| id != root && n.parent.is_none())
                .map(|(&id, _)| id)
                .unwrap_or(root);
            return Err(TreeShapeError::Unreachable(orphan));
        }
        let next_id = nodes.keys().next_back().map_or(0, |k| k + 1);
        Ok(ProofTree {
            signature,
            nodes,
            root,
            next_id,
        })
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn goal(&self) -> &Sequent {
        &self.nodes[&self.root].sequent
    }

    pub fn node(&self, id: NodeId) -> Result<&ProofNode, KernelError> {
        self.nodes.get(&id).ok_or(KernelError::NoSuchNode(id))
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.nodes.contains_key(&id)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node ids in depth-first, left-to-right order.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            out.push(id);
            stack.extend(self.nodes[&id].children.iter().rev().copied());
        }
        out
    }

    pub fn open_leaves(&self) -> Vec<NodeId> {
        self.preorder()
            .into_iter()
            .filter(|id| self.nodes[id].is_open())
            .collect()
    }

    /// Number of rule applications.
    pub fn inference_count(&self) -> usize {
        self.nodes.values().filter(|n| n.step.is_some()).count()
    }

    /// Applies `rule` at the open node `id`; returns the extended tree.
    pub fn apply(&self, id: NodeId, rule: RuleId, params: &RuleParams) -> Result<ProofTree, KernelError> {
        self.apply_with_children(id, rule, params).map(|(t, _)| t)
    }

    /// Like [`ProofTree::apply`], also returning the new child ids.
    pub fn apply_with_children(
        &self,
        id: NodeId,
        rule: RuleId,
        params: &RuleParams,
    ) -> Result<(ProofTree, Vec<NodeId>), KernelError> {
        let node = self.node(id)?;
        if !node.is_open() {
            return Err(KernelError::NodeNotOpen(id));
        }
        let inst = rules::instantiate(&node.sequent, rule, params, &self.signature)?;
        let mut next = self.clone();
        for p in &inst.premisses {
            for f in p.formulas() {
                next.signature
                    .declare_formula(f)
                    .map_err(|e| KernelError::BadParams(e.to_string()))?;
            }
        }
        let mut children = Vec::with_capacity(inst.premisses.len());
        for p in inst.premisses {
            let cid = next.next_id;
            next.next_id += 1;
            next.nodes.insert(
                cid,
                ProofNode {
                    sequent: Arc::new(p),
                    step: None,
                    children: Vec::new(),
                    parent: Some(id),
                },
            );
            children.push(cid);
        }
        let n = next.nodes.get_mut(&id).expect("node exists");
        n.step = Some(Step {
            rule,
            params: inst.params,
        });
        n.children = children.clone();
        Ok((next, children))
    }

    /// Removes everything above `id` and reopens it.
    pub fn undo(&self, id: NodeId) -> Result<ProofTree, KernelError> {
        let node = self.node(id)?;
        if node.is_open() {
            return Err(KernelError::NothingToUndo(id));
        }
        let mut next = self.clone();
        let mut stack = node.children.clone();
        while let Some(c) = stack.pop() {
            if let Some(n) = next.nodes.remove(&c) {
                stack.extend(n.children);
            }
        }
        let n = next.nodes.get_mut(&id).expect("node exists");
        n.step = None;
        n.children.clear();
        Ok(next)
    }

    /// Ids that `undo(id)` would remove.
    pub fn descendants(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = self.nodes.get(&id).map(|n| n.children.clone()).unwrap_or_default();
        while let Some(c) = stack.pop() {
            out.push(c);
            stack.extend(self.nodes[&c].children.iter().copied());
        }
        out
    }

    /// Equality including display order of every sequent.
    pub fn same_structure(&self, other: &ProofTree) -> bool {
        self.root == other.root
            && self.signature == other.signature
            && self.nodes.len() == other.nodes.len()
            && self.nodes.iter().all(|(id, n)| {
                other.nodes.get(id).is_some_and(|m| {
                    n.sequent.same_display(&m.sequent) && n.step == m.step && n.children == m.children
                })
            })
    }
}

/// Free-function form of [`ProofTree::apply`].
pub fn apply_rule(tree: &ProofTree, node: NodeId, rule: RuleId, params: &RuleParams) -> Result<ProofTree, KernelError> {
    tree.apply(node, rule, params)
}

/// Free-function form of [`ProofTree::undo`].
pub fn undo(tree: &ProofTree, node: NodeId) -> Result<ProofTree, KernelError> {
    tree.undo(node)
}

/// Every `Ax` and `EqR` instance closing `s`.
pub fn axiom_candidates(s: &Sequent) -> Vec<(RuleId, RuleParams)> {
    let mut out = Vec::new();
    for (i, a) in s.antecedent.iter().enumerate() {
        for (j, b) in s.succedent.iter().enumerate() {
            if a == b {
                out.push((RuleId::Ax, RuleParams::axiom(i, j)));
            }
        }
    }
    for (j, f) in s.succedent.iter().enumerate() {
        if matches!(f, crate::syntax::Formula::Eq(l, r) if l == r) {
            out.push((RuleId::EqR, RuleParams::principal(Occurrence::succ(j))));
        }
    }
    out
}

/// Premisses a rule would produce, without touching any tree.
pub fn premisses(
    s: &Sequent,
    rule: RuleId,
    params: &RuleParams,
    signature: &Signature,
) -> Result<(Vec<Sequent>, RuleParams), KernelError> {
    rules::instantiate(s, rule, params, signature).map(|i| (i.premisses, i.params))
}
