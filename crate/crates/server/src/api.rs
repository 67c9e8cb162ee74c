use std::collections::HashMap;
use std::sync::Arc;
use std::time::Duration;

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::Json;
use sct_core::io::{export_latex, export_smtlib, load_proof, resolve_witness, ProofDocument};
use sct_core::{
    hint, parse_sequent, KernelError, NodeId, Occurrence, ProofTree, RuleId, RuleParams, Sequent, Side,
    Signature, SyntaxError,
};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::session::{schedule_status, Session, SessionState};
use crate::AppState;

/// Error body `{code, message}` plus optional detail fields.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: String,
    message: String,
    extra: Option<Value>,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiError { status, code: code.to_string(), message: message.into(), extra: None }
    }

    fn not_found(what: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, "NotFound", what)
    }

    fn syntax(e: &SyntaxError) -> Self {
        let mut err = Self::new(StatusCode::BAD_REQUEST, "SyntaxError", e.to_string());
        if let SyntaxError::Syntax { position, .. } = e {
            err.extra = Some(json!({ "position": position }));
        }
        err
    }

    fn kernel(e: &KernelError) -> Self {
        let status = match e {
            KernelError::NoSuchNode(_) => StatusCode::NOT_FOUND,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        let mut err = Self::new(status, e.code(), e.to_string());
        err.extra = Some(json!({ "hint": mistake_hint(e) }));
        err
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = json!({ "code": self.code, "message": self.message });
        if let (Some(Value::Object(extra)), Value::Object(obj)) = (self.extra, &mut body) {
            obj.extend(extra);
        }
        (self.status, Json(body)).into_response()
    }
}

/// One-line advice shown next to a rejected rule application.
pub fn mistake_hint(e: &KernelError) -> &'static str {
    match e {
        KernelError::RuleMismatch(_) => "The selected formula does not have the shape this rule decomposes.",
        KernelError::FreshnessViolation(_) => "Pick a constant that occurs nowhere in the sequent, or let the tool choose one.",
        KernelError::NonGroundWitness(_) => "Instantiate with a closed term; variables are not allowed.",
        KernelError::NoSuchEquality(_) => "Select an equation s = t from the antecedent first.",
        KernelError::CaptureViolation(_) => "That position lies under a quantifier binding a variable of the replacement.",
        KernelError::NodeNotOpen(_) => "A rule has already been applied here; undo it first.",
        KernelError::NoSuchNode(_) => "The node no longer exists; refresh the tree.",
        KernelError::NoSuchOccurrence(_) => "The selected formula position is out of range.",
        KernelError::NothingToUndo(_) => "This node is still open; there is nothing to undo.",
        KernelError::BadParams(_) => "The rule is missing a parameter or received one it does not use.",
        KernelError::NotASentence(_) => "Every formula in the goal must be closed.",
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn session(state: &AppState, id: &str) -> ApiResult<Arc<Session>> {
    state.store.get(id).ok_or_else(|| ApiError::not_found(format!("no session `{id}`")))
}

fn tree_view(session: &Session, st: &SessionState) -> Value {
    let tree = &st.tree;
    let nodes: Vec<Value> = tree
        .preorder()
        .into_iter()
        .map(|id| {
            let n = tree.node(id).expect("preorder ids exist");
            json!({
                "id": id,
                "sequent": n.sequent.to_string(),
                "antecedent": n.sequent.antecedent.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                "succedent": n.sequent.succedent.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                "parent": n.parent,
                "children": n.children,
                "open": n.is_open(),
                "rule": n.step.as_ref().map(|s| s.rule),
                "params": n.step.as_ref().map(|s| &s.params),
                "status": st.statuses.get(&id).map(|e| e.color()),
            })
        })
        .collect();
    json!({
        "session_id": session.id,
        "version": st.version,
        "root": tree.root(),
        "signature": tree.signature().to_string(),
        "complete": sct_core::check_proof(tree).is_complete(),
        "open_leaves": tree.open_leaves(),
        "nodes": nodes,
    })
}

/// Occurrences in each premiss whose formula is not matched, with
/// multiplicity, by the conclusion's side.
fn changed_occurrences(concl: &Sequent, premiss: &Sequent) -> Vec<Occurrence> {
    let mut out = Vec::new();
    for side in [Side::Antecedent, Side::Succedent] {
        let mut pool: Vec<_> = concl.side(side).iter().collect();
        for (index, f) in premiss.side(side).iter().enumerate() {
            match pool.iter().position(|g| *g == f) {
                Some(k) => {
                    pool.swap_remove(k);
                }
                None => out.push(Occurrence { side, index }),
            }
        }
    }
    out
}

#[derive(Debug, Deserialize)]
pub struct CreateRequest {
    #[serde(default)]
    sequent: Option<String>,
    #[serde(default)]
    document: Option<ProofDocument>,
    #[serde(default)]
    budget_ms: Option<u64>,
}

pub async fn create(State(state): State<AppState>, Json(req): Json<CreateRequest>) -> ApiResult<Response> {
    let tree = match (req.sequent, req.document) {
        (Some(text), None) => {
            let mut sig = Signature::new();
            let s = parse_sequent(&text, &mut sig).map_err(|e| ApiError::syntax(&e))?;
            ProofTree::new(s, sig).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.code(), e.to_string()))?
        }
        (None, Some(doc)) => {
            let text = serde_json::to_string(&doc).expect("documents serialize");
            load_proof(&text)
                .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "InvalidDocument", e.to_string()))?
                .tree
        }
        _ => {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                "BadRequest",
                "give exactly one of `sequent` or `document`",
            ))
        }
    };
    let mut budget = state.config.budget.clone();
    if let Some(ms) = req.budget_ms.filter(|&ms| ms > 0) {
        budget.timeout = Duration::from_millis(ms);
    }
    let session = state.store.create(tree, budget);
    let mut st = session.read();
    let root = st.tree.root();
    schedule_status(&session, &mut st, root);
    Ok((StatusCode::CREATED, Json(tree_view(&session, &st))).into_response())
}

pub async fn get_tree(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let s = session(&state, &id)?;
    let st = s.read();
    Ok(Json(tree_view(&s, &st)))
}

#[derive(Debug, Deserialize)]
pub struct ApplyRequest {
    rule: String,
    #[serde(default)]
    params: RuleParams,
}

pub async fn apply(
    State(state): State<AppState>,
    Path((id, node)): Path<(String, NodeId)>,
    Json(req): Json<ApplyRequest>,
) -> ApiResult<Json<Value>> {
    let s = session(&state, &id)?;
    let rule: RuleId = req.rule.parse().map_err(|e: KernelError| ApiError::kernel(&e))?;
    let mut g = s.begin_mutation();
    if !g.state.tree.contains(node) {
        return Err(ApiError::not_found(format!("no node {node}")));
    }
    let params = resolve_witness(req.params, g.state.tree.signature()).map_err(|e| ApiError::syntax(&e))?;
    let next = g.state.tree.apply(node, rule, &params).map_err(|e| ApiError::kernel(&e))?;
    let conclusion = next.node(node).expect("applied node").clone();
    let changed: Vec<Value> = conclusion
        .children
        .iter()
        .map(|&c| {
            let premiss = &next.node(c).expect("child exists").sequent;
            json!({ "node": c, "occurrences": changed_occurrences(&conclusion.sequent, premiss) })
        })
        .collect();
    Session::commit(&mut g, next);
    for &c in &conclusion.children {
        schedule_status(&s, &mut g.state, c);
    }
    let mut view = tree_view(&s, &g.state);
    view["changed"] = Value::Array(changed);
    Ok(Json(view))
}

pub async fn undo(State(state): State<AppState>, Path((id, node)): Path<(String, NodeId)>) -> ApiResult<Json<Value>> {
    let s = session(&state, &id)?;
    let mut g = s.begin_mutation();
    let next = g.state.tree.undo(node).map_err(|e| ApiError::kernel(&e))?;
    Session::commit(&mut g, next);
    schedule_status(&s, &mut g.state, node);
    Ok(Json(tree_view(&s, &g.state)))
}

pub async fn node_status(
    State(state): State<AppState>,
    Path((id, node)): Path<(String, NodeId)>,
) -> ApiResult<Json<Value>> {
    let s = session(&state, &id)?;
    let mut st = s.read();
    if !st.tree.contains(node) {
        return Err(ApiError::not_found(format!("no node {node}")));
    }
    schedule_status(&s, &mut st, node);
    let mut body = match &st.statuses[&node] {
        crate::session::StatusEntry::Pending { .. } => json!({ "color": "pending" }),
        crate::session::StatusEntry::Done(v) => v.clone(),
    };
    body["node"] = json!(node);
    body["version"] = json!(st.version);
    Ok(Json(body))
}

pub async fn node_hint(State(state): State<AppState>, Path((id, node)): Path<(String, NodeId)>) -> ApiResult<Response> {
    let s = session(&state, &id)?;
    let sequent = {
        let st = s.read();
        let n = st.tree.node(node).map_err(|_| ApiError::not_found(format!("no node {node}")))?;
        (*n.sequent).clone()
    };
    let budget = s.budget.clone();
    let suggestion = tokio::task::spawn_blocking(move || hint(&sequent, &budget))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", e.to_string()))?;
    Ok(match suggestion {
        Some(h) => Json(json!({ "rule": h.rule, "params": h.params })).into_response(),
        None => StatusCode::NO_CONTENT.into_response(),
    })
}

pub async fn export(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<HashMap<String, String>>,
) -> ApiResult<Response> {
    let s = session(&state, &id)?;
    if s.mutation_in_flight() {
        return Err(ApiError::new(StatusCode::CONFLICT, "MutationInFlight", "a mutation is in progress; retry"));
    }
    let st = s.read();
    let format = q.get("format").map_or("json", String::as_str);
    Ok(match format {
        "json" => Json(ProofDocument::from_tree(&st.tree)).into_response(),
        "latex" => ([(header::CONTENT_TYPE, "application/x-latex")], export_latex(&st.tree)).into_response(),
        "smtlib" => {
            let node = match q.get("node") {
                Some(n) => n
                    .parse()
                    .map_err(|_| ApiError::new(StatusCode::BAD_REQUEST, "BadRequest", "`node` must be a number"))?,
                None => st.tree.root(),
            };
            let n = st.tree.node(node).map_err(|_| ApiError::not_found(format!("no node {node}")))?;
            let text = export_smtlib(&n.sequent, st.tree.signature());
            ([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], text).into_response()
        }
        other => {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                "BadRequest",
                format!("unknown format `{other}`; use json, latex or smtlib"),
            ))
        }
    })
}

pub async fn health() -> &'static str {
    "ok"
}
