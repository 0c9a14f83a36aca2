//! Output emission and the reproducibility manifest.
//!
//! Every file written by the CLI is accompanied by `<file>.manifest.json`
//! recording the exact command line, the fully resolved parameters, the tool
//! version and a timestamp; re-running the recorded command line reproduces
//! the data file byte for byte.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

#[derive(Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub timestamp: String,
    pub command_line: Vec<String>,
    pub parameters: serde_json::Value,
}

impl RunManifest {
    pub fn collect(parameters: serde_json::Value) -> Self {
        RunManifest {
            tool: "parrondo",
            version: env!("CARGO_PKG_VERSION"),
            timestamp: chrono::Utc::now().to_rfc3339(),
            command_line: std::env::args().collect(),
            parameters,
        }
    }
}

pub fn manifest_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Writes `content` plus its manifest to `out`, or `content` to stdout when
/// no output path was requested.
pub fn emit(out: Option<&Path>, content: &str, manifest: &RunManifest) -> std::io::Result<()> {
    match out {
        Some(path) => {
            fs::write(path, content)?;
            let json =
                serde_json::to_string_pretty(manifest).expect("manifest always serializes");
            fs::write(manifest_path(path), json + "\n")?;
        }
        None => print!("{content}"),
    }
    Ok(())
}
