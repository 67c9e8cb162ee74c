use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{check_proof, NodeId, ProofCheck, ProofTree, RuleId, RuleParams, Step, TreeShapeError};
use crate::syntax::{parse_sequent, parse_term, print_sequent, print_term, Signature, SyntaxError};

pub const FORMAT_VERSION: &str = "sct-proof/1";

/// Serialized proof tree. Sequents are stored as canonical text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofDocument {
    pub format_version: String,
    /// One declaration per line, `fun f/1` or `rel E/2`.
    pub signature: String,
    pub root: NodeId,
    pub nodes: Vec<NodeRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: NodeId,
    pub sequent: String,
    #[serde(default)]
    pub rule: Option<RuleId>,
    #[serde(default)]
    pub params: Option<RuleParams>,
    #[serde(default)]
    pub children: Vec<NodeId>,
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("document does not match the schema: {0}")]
    Schema(String),
    #[error("unsupported format version `{0}` (expected `{FORMAT_VERSION}`)")]
    Version(String),
    #[error("signature: {0}")]
    Signature(SyntaxError),
    #[error("node {node}: {error}")]
    Parse { node: NodeId, error: SyntaxError },
    #[error("node {node}: {message}")]
    Params { node: NodeId, message: String },
    #[error("tree shape: {0}")]
    Shape(#[from] TreeShapeError),
}

/// A loaded tree together with a freshly computed check report.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedProof {
    pub tree: ProofTree,
    pub report: ProofCheck,
}

impl ProofDocument {
    pub fn from_tree(tree: &ProofTree) -> Self {
        let nodes = tree
            .preorder()
            .into_iter()
            .map(|id| {
                let n = tree.node(id).expect("preorder ids exist");
                NodeRecord {
                    id,
                    sequent: print_sequent(&n.sequent),
                    rule: n.step.as_ref().map(|s| s.rule),
                    params: n.step.as_ref().map(|s| s.params.clone()),
                    children: n.children.clone(),
                }
            })
            .collect();
        ProofDocument {
            format_version: FORMAT_VERSION.to_string(),
            signature: tree.signature().to_string(),
            root: tree.root(),
            nodes,
        }
    }

    pub fn into_tree(self) -> Result<ProofTree, IoError> {
        if self.format_version != FORMAT_VERSION {
            return Err(IoError::Version(self.format_version));
        }
        let sig = Signature::parse(&self.signature).map_err(IoError::Signature)?;
        let mut raw = Vec::with_capacity(self.nodes.len());
        for rec in self.nodes {
            let mut scratch = sig.clone();
            let sequent =
                parse_sequent(&rec.sequent, &mut scratch).map_err(|error| IoError::Parse { node: rec.id, error })?;
            let step = match (rec.rule, rec.params) {
                (None, None) => None,
                (Some(rule), params) => {
                    let params = resolve_witness(params.unwrap_or_default(), &sig)
                        .map_err(|error| IoError::Parse { node: rec.id, error })?;
                    Some(Step { rule, params })
                }
                (None, Some(_)) => {
                    return Err(IoError::Params { node: rec.id, message: "params given without a rule".into() })
                }
            };
            raw.push((rec.id, sequent, step, rec.children));
        }
        Ok(ProofTree::from_nodes(sig, self.root, raw)?)
    }
}

/// Re-reads a witness parsed without context against `sig`, so that declared
/// constants whose names look like variables stay constants.
pub fn resolve_witness(mut params: RuleParams, sig: &Signature) -> Result<RuleParams, SyntaxError> {
    if let Some(w) = &params.witness {
        if !w.is_ground() {
            let mut scratch = sig.clone();
            params.witness = Some(parse_term(&print_term(w), &mut scratch)?);
        }
    }
    Ok(params)
}

/// Pretty-printed JSON for `tree`, open leaves included.
pub fn save_proof(tree: &ProofTree) -> String {
    serde_json::to_string_pretty(&ProofDocument::from_tree(tree)).expect("documents serialize")
}

/// Parses a document and re-checks it; the stored file is never trusted.
pub fn load_proof(text: &str) -> Result<LoadedProof, IoError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| IoError::Schema(e.to_string()))?;
    if let Some(v) = value.get("format_version").and_then(|v| v.as_str()) {
        if v != FORMAT_VERSION {
            return Err(IoError::Version(v.to_string()));
        }
    }
    let doc: ProofDocument = serde_json::from_value(value).map_err(|e| IoError::Schema(e.to_string()))?;
    let tree = doc.into_tree()?;
    let report = check_proof(&tree);
    Ok(LoadedProof { tree, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::tests::figure4;

    #[test]
    fn figure4_round_trips_and_checks() {
        let t = figure4();
        let loaded = load_proof(&save_proof(&t)).unwrap();
        assert!(loaded.tree.same_structure(&t));
        assert_eq!(loaded.report, ProofCheck::Complete);
    }

    #[test]
    fn open_goal_round_trips() {
        let t = figure4().undo(0).unwrap();
        let loaded = load_proof(&save_proof(&t)).unwrap();
        assert!(loaded.tree.same_structure(&t));
        assert_eq!(loaded.report, ProofCheck::Incomplete(vec![0]));
    }

    #[test]
    fn forged_rule_label_loads_as_malformed() {
        let mut doc = ProofDocument::from_tree(&figure4());
        let rec = doc.nodes.iter_mut().find(|n| n.id == 4).unwrap();
        rec.rule = Some(RuleId::OrL);
        let loaded = load_proof(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert!(matches!(loaded.report, ProofCheck::Malformed { node: 4, .. }));
    }

    #[test]
    fn version_and_schema_errors() {
        let mut doc = ProofDocument::from_tree(&figure4());
        doc.format_version = "sct-proof/0".into();
        let text = serde_json::to_string(&doc).unwrap();
        assert!(matches!(load_proof(&text), Err(IoError::Version(_))));
        assert!(matches!(load_proof("{\"nodes\": 3}"), Err(IoError::Schema(_))));
        assert!(matches!(load_proof("not json"), Err(IoError::Schema(_))));
    }

    #[test]
    fn bad_sequent_text_names_the_node() {
        let mut doc = ProofDocument::from_tree(&figure4());
        doc.nodes[3].sequent = "P Q => R".into();
        let id = doc.nodes[3].id;
        let err = load_proof(&serde_json::to_string(&doc).unwrap()).unwrap_err();
        assert!(matches!(err, IoError::Parse { node, .. } if node == id));
    }
}
