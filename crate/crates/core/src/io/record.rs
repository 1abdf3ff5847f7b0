//! Run records: what was asked, on which input, and what came out.
//!
//! Field names are stable: `command`, `input_digest` (SHA-256 of the input
//! file, hex), `seeds`, `exit_code`, `output`, `wall_time_ms`. Everything but
//! `wall_time_ms` is reproducible from the command and the input.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: Vec<String>,
    pub input_digest: String,
    pub seeds: Vec<u64>,
    pub exit_code: i32,
    pub output: serde_json::Value,
    pub wall_time_ms: f64,
}

impl RunRecord {
    /// The record without its timing, for replay comparisons.
    pub fn payload(&self) -> serde_json::Value {
        serde_json::json!({
            "command": self.command,
            "input_digest": self.input_digest,
            "seeds": self.seeds,
            "exit_code": self.exit_code,
            "output": self.output,
        })
    }
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
