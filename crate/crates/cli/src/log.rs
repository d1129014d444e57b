//! Run header and warnings on standard error.

use serde::Serialize;
use serde_json::json;

/// One JSON line with everything needed to reproduce the run.
pub fn header<C: Serialize>(
    command: &str,
    config: &C,
    seed: u64,
    input_digest: Option<&str>,
    threads: usize,
) {
    let line = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "seed": seed,
        "threads": threads,
        "input_digest": input_digest,
    });
    eprintln!("{line}");
}

pub fn warn(message: &str) {
    eprintln!("warning: {message}");
}
