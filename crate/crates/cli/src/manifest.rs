use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::Failure;

pub const SCHEMA: &str = "v1";

#[derive(Clone, Debug, Serialize)]
pub struct Tolerances {
    pub rel_tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe_radius: Option<f64>,
}

/// Everything needed to rerun a command; worker count and output paths are
/// left out because they do not change the result.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub arguments: BTreeMap<String, String>,
    /// sha256 of the canonical family JSON.
    pub input_hash: String,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

pub fn hash_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    schema: &'static str,
    manifest: &'a RunManifest,
    result: &'a T,
}

pub fn emit<T: Serialize>(manifest: &RunManifest, result: &T, out: Option<&Path>) -> Result<(), Failure> {
    let doc = Document {
        schema: SCHEMA,
        manifest,
        result,
    };
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| Failure::Input(format!("serialize: {e}")))?;
    text.push('\n');
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
