use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use dirdet::pg::Subspace;

/// JSON document printed by every analysis command.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub inputs_digest: String,
    /// `None` for commands that make no assertions.
    pub passed: Option<bool>,
    pub results: Value,
    pub timing: Timing,
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub wall_ms: f64,
    pub threads: usize,
}

/// SHA-256 over the command's parameters and input file contents.
#[derive(Default)]
pub struct InputDigest(Sha256);

impl InputDigest {
    pub fn add(&mut self, label: &str, bytes: &[u8]) {
        self.0.update((label.len() as u64).to_le_bytes());
        self.0.update(label.as_bytes());
        self.0.update((bytes.len() as u64).to_le_bytes());
        self.0.update(bytes);
    }

    pub fn finish(self) -> String {
        self.0.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Subspace as a list of RREF rows of element encodings.
pub fn rows(s: &Subspace) -> Vec<Vec<u32>> {
    s.rows().map(<[u32]>::to_vec).collect()
}

pub fn rows_all<'a>(it: impl IntoIterator<Item = &'a Subspace>) -> Vec<Vec<Vec<u32>>> {
    it.into_iter().map(rows).collect()
}
