//! HTTP session service. Sessions live in memory only and do not survive a
//! restart.

pub mod api;
pub mod config;
pub mod session;

use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::routing::{get, post};
use axum::Router;
use tower_http::cors::CorsLayer;

pub use config::ServerConfig;
pub use session::SessionStore;

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<SessionStore>,
    pub config: Arc<ServerConfig>,
}

impl AppState {
    pub fn new(config: ServerConfig) -> Self {
        AppState { store: Arc::default(), config: Arc::new(config) }
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/healthz", get(api::health))
        .route("/sessions", post(api::create))
        .route("/sessions/{id}", get(api::get_tree))
        .route("/sessions/{id}/nodes/{n}/apply", post(api::apply))
        .route("/sessions/{id}/nodes/{n}/undo", post(api::undo))
        .route("/sessions/{id}/nodes/{n}/status", get(api::node_status))
        .route("/sessions/{id}/nodes/{n}/hint", get(api::node_hint))
        .route("/sessions/{id}/export", get(api::export))
        .layer(CorsLayer::permissive())
        .with_state(state)
}

/// Binds `config.port` and serves until the process ends.
pub async fn serve(config: ServerConfig) -> std::io::Result<()> {
    let state = AppState::new(config);
    let store = Arc::clone(&state.store);
    let ttl = state.config.idle_ttl;
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60));
        loop {
            tick.tick().await;
            let n = store.evict_idle(Instant::now(), ttl);
            if n > 0 {
                log::info!("evicted {n} idle sessions");
            }
        }
    });
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", state.config.port)).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}
