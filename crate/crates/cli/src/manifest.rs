use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::CliResult;
use crate::io::sha256_file;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Provenance embedded in every report: equal manifests (ignoring the
/// timestamp) give equal outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub options: serde_json::Value,
    pub inputs: Vec<InputDigest>,
    pub seed: Option<u64>,
    pub tool_version: String,
    /// Seconds since the Unix epoch; `SOURCE_DATE_EPOCH` overrides the clock.
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new(command: &str, options: &impl Serialize, inputs: &[&Path], seed: Option<u64>) -> CliResult<Self> {
        let inputs = inputs
            .iter()
            .map(|p| Ok(InputDigest { path: p.display().to_string(), sha256: sha256_file(p)? }))
            .collect::<CliResult<_>>()?;
        Ok(Self {
            command: command.to_string(),
            options: serde_json::to_value(options).expect("options serialize"),
            inputs,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: timestamp(),
        })
    }
}

fn timestamp() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()))
}
