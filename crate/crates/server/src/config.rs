use std::time::Duration;

use sct_core::SearchBudget;

pub const DEFAULT_PORT: u16 = 8077;

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub port: u16,
    /// Budget for background status jobs and hints.
    pub budget: SearchBudget,
    /// Sessions untouched for this long are dropped.
    pub idle_ttl: Duration,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            port: DEFAULT_PORT,
            budget: SearchBudget::default(),
            idle_ttl: Duration::from_secs(30 * 60),
        }
    }
}

impl ServerConfig {
    /// Reads `SCT_PORT`, `SCT_BUDGET_MS` and `SCT_MODEL_MAX_SIZE`; unset or
    /// unparsable values keep their defaults.
    pub fn from_env() -> Self {
        Self::from_lookup(|k| std::env::var(k).ok())
    }

    pub fn from_lookup(get: impl Fn(&str) -> Option<String>) -> Self {
        let mut cfg = ServerConfig::default();
        let num = |k: &str| get(k).and_then(|v| v.trim().parse::<u64>().ok()).filter(|&n| n > 0);
        if let Some(p) = num("SCT_PORT").and_then(|p| u16::try_from(p).ok()) {
            cfg.port = p;
        }
        if let Some(ms) = num("SCT_BUDGET_MS") {
            cfg.budget.timeout = Duration::from_millis(ms);
        }
        if let Some(n) = num("SCT_MODEL_MAX_SIZE") {
            cfg.budget.model_max_size = n as usize;
        }
        cfg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn environment_overrides() {
        let cfg = ServerConfig::from_lookup(|k| match k {
            "SCT_PORT" => Some("9000".into()),
            "SCT_BUDGET_MS" => Some("250".into()),
            "SCT_MODEL_MAX_SIZE" => Some("junk".into()),
            _ => None,
        });
        assert_eq!(cfg.port, 9000);
        assert_eq!(cfg.budget.timeout, Duration::from_millis(250));
        assert_eq!(cfg.budget.model_max_size, SearchBudget::default().model_max_size);
        assert_eq!(ServerConfig::from_lookup(|_| None).port, DEFAULT_PORT);
    }
}
