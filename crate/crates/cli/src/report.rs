//! The one-per-run JSON report and the digest of a command's inputs.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Everything a run reports on stdout.  Serialization order is fixed by the
/// field order here, so two runs with the same inputs and seed produce
/// byte-identical reports apart from `wall_time_s`.
#[derive(Debug, Serialize)]
pub struct CommandReport {
    pub command: String,
    pub inputs_digest: String,
    pub outcome: Value,
    pub seed: u64,
    pub version: String,
    pub wall_time_s: f64,
}

/// Rolling SHA-256 over a command's inputs: file bytes and scalar arguments
/// in a fixed order.
pub(crate) struct InputDigest {
    hasher: Sha256,
}

impl InputDigest {
    pub fn new(command: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(command.as_bytes());
        InputDigest { hasher }
    }

    pub fn arg(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.hasher.update(format!(";{key}={value}").as_bytes());
        self
    }

    pub fn bytes(mut self, label: &str, data: &[u8]) -> Self {
        self.hasher.update(format!(";{label}[{}]=", data.len()).as_bytes());
        self.hasher.update(data);
        self
    }

    pub fn finish(self) -> String {
        let digest = self.hasher.finalize();
        let mut hex = String::with_capacity(64);
        for byte in digest {
            use std::fmt::Write;
            let _ = write!(hex, "{byte:02x}");
        }
        hex
    }
}

/// SHA-256 hex of a serialized JSON value; used to fingerprint certificates.
pub(crate) fn value_digest(value: &Value) -> String {
    let rendered = serde_json::to_string(value).unwrap_or_default();
    InputDigest::new("value").bytes("json", rendered.as_bytes()).finish()
}
