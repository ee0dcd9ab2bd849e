//! HTTP facade over the decision engine with a file-backed problem store.
//!
//! Every problem lives in its own canonical JSON file under the store root;
//! writes go through a temporary file and an atomic rename. Updates carry the
//! revision the client last saw and fail with 409 when it is stale.

mod api;
pub mod store;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

pub use api::router;
pub use store::{Store, StoreError, StoredProblem, Summary};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub store_root: PathBuf,
    pub bind: SocketAddr,
    /// Allowed CORS origin; any origin when `None`.
    pub cors_origin: Option<String>,
    /// Directory of built web UI assets served at `/`.
    pub static_dir: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("cannot bind {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid CORS origin {0:?}")]
    CorsOrigin(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Open the store and serve until the process is stopped.
pub async fn serve(config: ServiceConfig) -> Result<(), ServeError> {
    let store = Arc::new(Store::open(&config.store_root)?);
    let app = router(store, &config)?;
    let listener = tokio::net::TcpListener::bind(config.bind)
        .await
        .map_err(|source| ServeError::Bind {
            addr: config.bind,
            source,
        })?;
    tracing::info!(addr = %listener.local_addr()?, root = %config.store_root.display(), "listening");
    axum::serve(listener, app).await?;
    Ok(())
}
