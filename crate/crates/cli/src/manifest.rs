//! Provenance record written next to every output set.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Serialize)]
pub struct Platform {
    pub os: &'static str,
    pub arch: &'static str,
}

#[derive(Debug, Serialize)]
pub struct Manifest<C: Serialize> {
    pub command: String,
    pub argv: Vec<String>,
    pub config: C,
    pub version: &'static str,
    pub timestamp_unix: u64,
    pub platform: Platform,
    pub outputs: Vec<String>,
}

impl<C: Serialize> Manifest<C> {
    pub fn new(command: &str, config: C, outputs: &[&str]) -> Self {
        Self {
            command: command.to_string(),
            argv: std::env::args().collect(),
            config,
            version: env!("CARGO_PKG_VERSION"),
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            platform: Platform {
                os: std::env::consts::OS,
                arch: std::env::consts::ARCH,
            },
            outputs: outputs.iter().map(|s| s.to_string()).collect(),
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Input(format!("serialising {}: {e}", path.display())))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}
