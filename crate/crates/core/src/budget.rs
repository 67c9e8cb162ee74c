use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

/// Cancellation flag with an optional deadline.
///
/// Clones share the flag. A [`child`](CancelToken::child) has its own flag
/// but also observes every ancestor's flag and deadline.
#[derive(Debug, Clone, Default)]
pub struct CancelToken {
    flag: Arc<AtomicBool>,
    parent: Option<Arc<CancelToken>>,
    deadline: Option<Instant>,
}

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_timeout(timeout: Duration) -> Self {
        CancelToken {
            deadline: Instant::now().checked_add(timeout),
            ..Self::default()
        }
    }

    /// Token cancelled when `self` is, or after `timeout`, or when cancelled itself.
    pub fn child(&self, timeout: Duration) -> Self {
        CancelToken {
            flag: Arc::default(),
            parent: Some(Arc::new(self.clone())),
            deadline: Instant::now().checked_add(timeout),
        }
    }

    pub fn cancel(&self) {
        self.flag.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.flag.load(Ordering::Relaxed)
            || self.deadline.is_some_and(|d| Instant::now() >= d)
            || self.parent.as_ref().is_some_and(|p| p.is_cancelled())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn children_observe_parents_but_not_conversely() {
        let a = CancelToken::new();
        let b = a.child(Duration::from_secs(60));
        let c = a.child(Duration::from_secs(60));
        c.cancel();
        assert!(!a.is_cancelled() && !b.is_cancelled());
        a.cancel();
        assert!(b.is_cancelled());
    }

    #[test]
    fn clones_share_the_flag() {
        let a = CancelToken::new();
        a.clone().cancel();
        assert!(a.is_cancelled());
    }

    #[test]
    fn deadline_expires() {
        let t = CancelToken::with_timeout(Duration::ZERO);
        assert!(t.is_cancelled());
    }
}
