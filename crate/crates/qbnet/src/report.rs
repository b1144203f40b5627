//! Machine-readable run reports emitted by the CLI's JSON mode.

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Identifies the network a command ran against.
#[derive(Debug, Clone, Serialize)]
pub struct NetworkDigest {
    /// Builtin name or file path, as given on the command line.
    pub name: String,
    /// SHA-256 of the network document bytes.
    pub sha256: String,
}

impl NetworkDigest {
    pub fn new(name: impl Into<String>, document: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(document.as_bytes());
        NetworkDigest {
            name: name.into(),
            sha256: format!("{:x}", hasher.finalize()),
        }
    }
}

/// One command execution: everything needed to re-derive the results plus
/// the measured wall time. The payload under `results` is deterministic
/// given `command`, `network`, `parameters` and `seed`; `wall_ms` is not.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub network: NetworkDigest,
    pub parameters: serde_json::Value,
    pub results: serde_json::Value,
    pub seed: Option<u64>,
    pub wall_ms: f64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable() {
        let a = NetworkDigest::new("x", "abc");
        let b = NetworkDigest::new("x", "abc");
        assert_eq!(a.sha256, b.sha256);
        assert_eq!(a.sha256.len(), 64);
    }

    #[test]
    fn report_keys_are_exact() {
        let report = RunReport {
            command: "infer".into(),
            network: NetworkDigest::new("gamble", "{}"),
            parameters: serde_json::json!({}),
            results: serde_json::json!({}),
            seed: None,
            wall_ms: 1.5,
        };
        let value: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        let keys: Vec<&str> = value.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        assert_eq!(
            keys,
            ["command", "network", "parameters", "results", "seed", "wall_ms"]
        );
    }
}
