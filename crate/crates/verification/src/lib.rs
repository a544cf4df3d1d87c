//! Holds the acceptance suite (`tests/acceptance.rs`); no library code.
//!
//! The determinism criterion runs the `slowcolor` binary, which
//! `cargo test --workspace` builds. On its own:
//!
//! ```text
//! cargo build -p slowcolor-cli && cargo test -p slowcolor-verification --test acceptance
//! ```
