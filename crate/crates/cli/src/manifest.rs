use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (interface rev 1)");

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command_line: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub seed: u64,
    pub outputs: Vec<String>,
    pub duration_ms: f64,
}

/// File access for one invocation; records what was read and written.
pub struct Session {
    started: Instant,
    argv: Vec<String>,
    inputs: Vec<InputDigest>,
    outputs: Vec<PathBuf>,
    pub seed: u64,
    /// Preferred manifest location chosen by the command.
    pub manifest_path: Option<PathBuf>,
}

impl Session {
    pub fn new(argv: Vec<String>) -> Self {
        Self {
            started: Instant::now(),
            argv,
            inputs: Vec::new(),
            outputs: Vec::new(),
            seed: 0,
            manifest_path: None,
        }
    }

    pub fn read(&mut self, path: &Path) -> CliResult<String> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).map_err(|_| CliError::new("parse_error", format!("{}: not UTF-8", path.display())))
    }

    pub fn write(&mut self, path: &Path, content: &str) -> CliResult<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        std::fs::write(path, content).map_err(|e| CliError::io(path, e))?;
        self.outputs.push(path.to_path_buf());
        Ok(())
    }

    /// Write to `out` if given, else print to stdout.
    pub fn emit(&mut self, out: Option<&Path>, content: &str) -> CliResult<()> {
        match out {
            Some(p) => self.write(p, content),
            None => {
                println!("{content}");
                Ok(())
            }
        }
    }

    pub fn outputs(&self) -> &[PathBuf] {
        &self.outputs
    }

    pub fn finish(self) -> RunManifest {
        RunManifest {
            tool: "qcsc",
            version: VERSION,
            command_line: self.argv,
            inputs: self.inputs,
            seed: self.seed,
            outputs: self.outputs.iter().map(|p| p.display().to_string()).collect(),
            duration_ms: self.started.elapsed().as_secs_f64() * 1e3,
        }
    }
}
