use std::net::SocketAddr;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::Parser;
use slowcolor::SolveOptions;
use slowcolor_service::{router, AppState, Config};

/// Serve slow coloring game sessions over JSON/HTTP.
#[derive(Parser, Debug)]
#[command(version)]
struct Args {
    #[arg(long, default_value = "127.0.0.1:8080")]
    bind: SocketAddr,
    /// Directory with the play UI bundle, served at /.
    #[arg(long)]
    static_dir: Option<PathBuf>,
    /// Sessions are loaded from here on start and written back on shutdown.
    #[arg(long)]
    snapshot: Option<PathBuf>,
    /// Milliseconds a request waits for a cold engine move before answering "pending".
    #[arg(long, default_value_t = 250)]
    sync_budget_ms: u64,
    /// Largest graph the exact engine accepts.
    #[arg(long)]
    cap: Option<usize>,
}

#[tokio::main]
async fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let args = Args::parse();
    let mut solve = SolveOptions::default();
    if let Some(cap) = args.cap {
        solve = solve.with_cap(cap);
    }
    let state = AppState::new(Config {
        sync_budget: Duration::from_millis(args.sync_budget_ms),
        solve,
        static_dir: args.static_dir.clone(),
    });
    if let Some(path) = args.snapshot.as_ref().filter(|p| p.exists()) {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let count = state.restore(value).map_err(anyhow::Error::msg).context("restoring sessions")?;
        log::info!("restored {count} sessions from {}", path.display());
    }

    let listener = tokio::net::TcpListener::bind(args.bind).await.with_context(|| format!("binding {}", args.bind))?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state.clone()))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
            log::info!("shutting down");
        })
        .await?;

    if let Some(path) = &args.snapshot {
        let text = serde_json::to_string_pretty(&state.save().await)?;
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        log::info!("sessions saved to {}", path.display());
    }
    Ok(())
}
