//! Run artifacts: spec loading, manifests, and output files.
//!
//! Every command that writes files drops a `manifest.json` beside them. CSV
//! outputs carry a `# manifest: manifest.json` comment under their schema
//! line and JSON outputs embed the manifest object, so any table can be
//! traced back to the invocation, spec digest, numeric mode, and seed that
//! produced it. Manifests carry no timestamps: rerunning a command with
//! identical inputs rewrites every file byte for byte.

use std::fs;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use janken_core::builtins::{self, Builtin};
use janken_core::scalar::NumericMode;
use janken_core::sim::SimMode;
use janken_core::specfile;
use janken_core::{GameSpec, SpecError};

use crate::CliError;

/// File name every other output references.
pub const MANIFEST_FILE: &str = "manifest.json";

/// A loaded game plus the canonical text identifying it.
#[derive(Debug)]
pub struct GameSource {
    /// The --spec argument as typed.
    pub given: String,
    pub builtin: Builtin,
    /// SHA-256 hex of the canonical spec JSON ("semicircle" for the
    /// hand-less pointing game).
    pub digest: String,
}

impl GameSource {
    /// Resolve `builtin:NAME[?k=v]` through the registry, anything else as a
    /// spec-file path. Unreadable files count as bad spec input, not I/O.
    pub fn load(arg: &str) -> Result<GameSource, CliError> {
        let builtin = match arg.strip_prefix("builtin:") {
            Some(name) => builtins::builtin(name)?,
            None => {
                let text = fs::read_to_string(arg).map_err(|e| {
                    SpecError::BadSpecFile(format!("cannot read '{arg}': {e}"))
                })?;
                Builtin::Game(specfile::game_from_json(&text)?)
            }
        };
        let canonical = match &builtin {
            Builtin::Game(g) => specfile::game_to_json(g),
            Builtin::Semicircle => "semicircle".to_string(),
        };
        Ok(GameSource {
            given: arg.to_string(),
            builtin,
            digest: sha256_hex(canonical.as_bytes()),
        })
    }

    /// The game itself, rejecting the hand-less pointing game.
    pub fn game(&self) -> Result<&GameSpec, CliError> {
        match &self.builtin {
            Builtin::Game(g) => Ok(g),
            Builtin::Semicircle => Err(CliError::Spec(SpecError::BadBuiltinParam(
                "semicircle has no hand set; only `simulate` accepts it".into(),
            ))),
        }
    }
}

/// Lowercase hex SHA-256.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// What produced a set of output files. Fields that do not apply to a
/// command stay unset and are omitted from the JSON.
#[derive(Serialize)]
pub struct RunManifest {
    pub schema: &'static str,
    pub tool_version: &'static str,
    /// The invocation, argv[0] normalized to the binary name.
    pub command: String,
    pub spec: String,
    pub spec_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric_mode: Option<NumericMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moment_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cdf_levels: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub players: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_range: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sim_mode: Option<SimMode>,
    pub outputs: Vec<&'static str>,
}

impl RunManifest {
    pub fn new(source: &GameSource) -> RunManifest {
        let mut args: Vec<String> = std::env::args().collect();
        if let Some(first) = args.first_mut() {
            *first = "janken".to_string();
        }
        RunManifest {
            schema: "janken.manifest.v1",
            tool_version: env!("CARGO_PKG_VERSION"),
            command: args.join(" "),
            spec: source.given.clone(),
            spec_digest: source.digest.clone(),
            numeric_mode: None,
            horizon: None,
            moment_order: None,
            cdf_levels: None,
            players: None,
            n_range: None,
            trials: None,
            seed: None,
            sim_mode: None,
            outputs: Vec::new(),
        }
    }
}

/// Insert the manifest reference right under the leading schema comment.
pub fn with_manifest_ref(csv: &str) -> String {
    match csv.split_once('\n') {
        Some((schema, rest)) => format!("{schema}\n# manifest: {MANIFEST_FILE}\n{rest}"),
        None => csv.to_string(),
    }
}

/// Write one output file, creating the directory as needed.
pub fn write_file(dir: &Path, name: &str, content: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create '{}': {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, content)
        .map_err(|e| CliError::Io(format!("cannot write '{}': {e}", path.display())))
}

/// Serialize a JSON document with a trailing newline and write it.
pub fn write_json(dir: &Path, name: &str, doc: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(doc).expect("output documents serialize");
    text.push('\n');
    write_file(dir, name, &text)
}

/// Write the manifest itself.
pub fn write_manifest(dir: &Path, manifest: &RunManifest) -> Result<(), CliError> {
    write_json(dir, MANIFEST_FILE, manifest)
}
