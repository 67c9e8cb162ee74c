//! In-memory session store. Each session owns one proof tree, a version
//! counter bumped once per successful mutation, and a status cache whose keys
//! are always a subset of the tree's current node ids.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex, MutexGuard};
use std::time::{Duration, Instant};

use sct_core::oracle::status_with;
use sct_core::{CancelToken, NodeId, ProofTree, SearchBudget, Sequent, ValidityStatus};
use serde_json::{json, Value};

#[derive(Debug, Clone)]
pub enum StatusEntry {
    Pending { job: u64, cancel: CancelToken },
    Done(Value),
}

impl StatusEntry {
    pub fn color(&self) -> &str {
        match self {
            StatusEntry::Pending { .. } => "pending",
            StatusEntry::Done(v) => v["color"].as_str().unwrap_or("yellow"),
        }
    }
}

pub struct SessionState {
    pub tree: ProofTree,
    pub version: u64,
    pub statuses: HashMap<NodeId, StatusEntry>,
}

pub struct Session {
    pub id: String,
    pub budget: SearchBudget,
    state: Mutex<SessionState>,
    mutating: AtomicBool,
    last_used: Mutex<Instant>,
}

/// Held while a mutation runs; exports observe it and answer 409.
pub struct MutationGuard<'a> {
    session: &'a Session,
    pub state: MutexGuard<'a, SessionState>,
}

impl Drop for MutationGuard<'_> {
    fn drop(&mut self) {
        self.session.mutating.store(false, Ordering::SeqCst);
    }
}

pub fn status_json(st: &ValidityStatus) -> Value {
    match st {
        ValidityStatus::Red(m) => json!({"color": "red", "countermodel": m.to_json()}),
        other => json!({"color": other.color()}),
    }
}

impl Session {
    fn new(id: String, tree: ProofTree, budget: SearchBudget) -> Self {
        Session {
            id,
            budget,
            state: Mutex::new(SessionState { tree, version: 0, statuses: HashMap::new() }),
            mutating: AtomicBool::new(false),
            last_used: Mutex::new(Instant::now()),
        }
    }

    pub fn touch(&self) {
        *self.last_used.lock().expect("clock lock") = Instant::now();
    }

    pub fn idle_for(&self, now: Instant) -> Duration {
        now.saturating_duration_since(*self.last_used.lock().expect("clock lock"))
    }

    pub fn read(&self) -> MutexGuard<'_, SessionState> {
        self.state.lock().expect("session lock")
    }

    pub fn begin_mutation(&self) -> MutationGuard<'_> {
        let state = self.read();
        self.mutating.store(true, Ordering::SeqCst);
        MutationGuard { session: self, state }
    }

    pub fn mutation_in_flight(&self) -> bool {
        self.mutating.load(Ordering::SeqCst)
    }

    /// Replaces the tree, bumps the version and drops cache entries (and
    /// cancels jobs) for nodes that no longer exist.
    pub fn commit(guard: &mut MutationGuard<'_>, tree: ProofTree) {
        let st = &mut *guard.state;
        st.tree = tree;
        st.version += 1;
        let tree = &st.tree;
        st.statuses.retain(|id, entry| {
            let keep = tree.contains(*id);
            if let (false, StatusEntry::Pending { cancel, .. }) = (keep, &*entry) {
                cancel.cancel();
            }
            keep
        });
    }
}

static NEXT_JOB: AtomicU64 = AtomicU64::new(1);

/// Starts a background status job for `node` unless one exists. Must be
/// called inside a tokio runtime.
pub fn schedule_status(session: &Arc<Session>, state: &mut SessionState, node: NodeId) {
    if state.statuses.contains_key(&node) {
        return;
    }
    let Ok(n) = state.tree.node(node) else { return };
    let sequent: Sequent = (*n.sequent).clone();
    let job = NEXT_JOB.fetch_add(1, Ordering::Relaxed);
    let cancel = CancelToken::new();
    state.statuses.insert(node, StatusEntry::Pending { job, cancel: cancel.clone() });
    let session = Arc::clone(session);
    tokio::task::spawn_blocking(move || {
        let result = status_with(&sequent, &session.budget, &cancel);
        let mut st = session.read();
        // The node may have been pruned, or the job superseded, meanwhile.
        if let Some(entry) = st.statuses.get_mut(&node) {
            if matches!(entry, StatusEntry::Pending { job: j, .. } if *j == job) {
                *entry = StatusEntry::Done(status_json(&result));
            }
        }
    });
}

#[derive(Default)]
pub struct SessionStore {
    sessions: Mutex<HashMap<String, Arc<Session>>>,
    counter: AtomicU64,
}

impl SessionStore {
    pub fn create(&self, tree: ProofTree, budget: SearchBudget) -> Arc<Session> {
        let n = self.counter.fetch_add(1, Ordering::Relaxed);
        let nanos = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.subsec_nanos());
        let id = format!("s{n:x}-{nanos:08x}");
        let session = Arc::new(Session::new(id.clone(), tree, budget));
        self.sessions.lock().expect("store lock").insert(id, Arc::clone(&session));
        session
    }

    pub fn get(&self, id: &str) -> Option<Arc<Session>> {
        let s = self.sessions.lock().expect("store lock").get(id).cloned();
        if let Some(s) = &s {
            s.touch();
        }
        s
    }

    pub fn len(&self) -> usize {
        self.sessions.lock().expect("store lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drops sessions idle for at least `ttl`, cancelling their jobs.
    pub fn evict_idle(&self, now: Instant, ttl: Duration) -> usize {
        let mut map = self.sessions.lock().expect("store lock");
        let before = map.len();
        map.retain(|_, s| {
            let keep = s.idle_for(now) < ttl;
            if !keep {
                for entry in s.read().statuses.values() {
                    if let StatusEntry::Pending { cancel, .. } = entry {
                        cancel.cancel();
                    }
                }
            }
            keep
        });
        before - map.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sct_core::{parse_sequent, Signature};

    fn tree(src: &str) -> ProofTree {
        let mut sig = Signature::new();
        let s = parse_sequent(src, &mut sig).unwrap();
        ProofTree::new(s, sig).unwrap()
    }

    #[test]
    fn ids_are_distinct() {
        let store = SessionStore::default();
        let a = store.create(tree("P => P"), SearchBudget::default());
        let b = store.create(tree("P => P"), SearchBudget::default());
        assert_ne!(a.id, b.id);
        assert_eq!(store.len(), 2);
    }

    #[test]
    fn eviction_respects_idle_time() {
        let store = SessionStore::default();
        store.create(tree("P => P"), SearchBudget::default());
        let later = Instant::now() + Duration::from_secs(31 * 60);
        assert_eq!(store.evict_idle(Instant::now(), Duration::from_secs(30 * 60)), 0);
        assert_eq!(store.evict_idle(later, Duration::from_secs(30 * 60)), 1);
        assert!(store.is_empty());
    }

    #[test]
    fn commit_prunes_the_cache_and_bumps_the_version() {
        let store = SessionStore::default();
        let s = store.create(tree("P & Q => P"), SearchBudget::default());
        let cancel = CancelToken::new();
        {
            let mut g = s.begin_mutation();
            let next = g.state.tree.apply(0, sct_core::RuleId::AndL, &sct_core::RuleParams::principal(sct_core::Occurrence::ante(0))).unwrap();
            Session::commit(&mut g, next);
            g.state.statuses.insert(1, StatusEntry::Pending { job: 0, cancel: cancel.clone() });
            assert!(s.mutation_in_flight());
        }
        assert!(!s.mutation_in_flight());
        let mut g = s.begin_mutation();
        let back = g.state.tree.undo(0).unwrap();
        Session::commit(&mut g, back);
        assert_eq!(g.state.version, 2);
        assert!(g.state.statuses.is_empty());
        assert!(cancel.is_cancelled());
    }
}
