//! Run manifests: every command writes one alongside its outputs so a
//! result can be reproduced byte-for-byte from the recorded inputs and
//! parameters.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::ToolError;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Input path -> sha256 hex digest of its content.
    pub inputs: BTreeMap<String, String>,
    /// Flat parameter map (stringified values, sorted by key).
    pub parameters: BTreeMap<String, String>,
    /// Output files produced by the run.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            tool: "rplkit".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            inputs: BTreeMap::new(),
            parameters: BTreeMap::new(),
            outputs: Vec::new(),
        }
    }

    pub fn record_input(&mut self, path: &Path) -> Result<(), ToolError> {
        let content = fs::read(path)?;
        let digest = Sha256::digest(&content);
        self.inputs.insert(path.display().to_string(), format!("{digest:x}"));
        Ok(())
    }

    pub fn set_param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.into(), value.to_string());
    }

    pub fn record_output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    /// Write next to the outputs as pretty JSON with a trailing newline.
    pub fn write(&self, path: &Path) -> Result<(), ToolError> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }
}
