use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Record of one invocation, written to `<out>/manifest.json`.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub seed: Option<u64>,
    pub engine_version: String,
    pub wall_time_s: f64,
    pub outputs: Vec<String>,
    pub exit_code: i32,
    pub error: Option<String>,
    #[serde(skip)]
    started: Option<Instant>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            args: std::env::args().skip(1).collect(),
            inputs: Vec::new(),
            seed: None,
            engine_version: hybridsizer::ENGINE_VERSION.to_string(),
            wall_time_s: 0.0,
            outputs: Vec::new(),
            exit_code: 0,
            error: None,
            started: Some(Instant::now()),
        }
    }

    /// Hashes `path` if it can be read; unreadable inputs are listed with an
    /// empty digest.
    pub fn add_input(&mut self, path: &Path) {
        let sha256 = std::fs::read(path)
            .map(|bytes| hex::encode(Sha256::digest(&bytes)))
            .unwrap_or_default();
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256,
        });
    }

    pub fn add_output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    pub fn write(&mut self, out_dir: &Path) -> std::io::Result<PathBuf> {
        if let Some(t) = self.started {
            self.wall_time_s = t.elapsed().as_secs_f64();
        }
        std::fs::create_dir_all(out_dir)?;
        let path = out_dir.join("manifest.json");
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(&path, text + "\n")?;
        Ok(path)
    }
}
