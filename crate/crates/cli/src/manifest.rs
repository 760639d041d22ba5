use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::rc::Rc;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FileHash {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    /// Arguments after the program name.
    pub args: Vec<String>,
    pub seeds: Vec<u64>,
    pub inputs: Vec<FileHash>,
    pub outputs: Vec<FileHash>,
    pub timings_ms: BTreeMap<String, u128>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn manifest_path(artifact: &Path) -> PathBuf {
    let mut s = artifact.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// Where command outputs go. In replay mode nothing is written; each output
/// is hashed and compared with the recorded manifest instead.
pub enum Sink {
    Write,
    Replay {
        expected: Vec<FileHash>,
        mismatches: Rc<RefCell<Vec<String>>>,
    },
}

pub struct Run {
    pub args: Vec<String>,
    pub seeds: Vec<u64>,
    pub inputs: Vec<FileHash>,
    pub outputs: Vec<FileHash>,
    pub timings_ms: BTreeMap<String, u128>,
    pub sink: Sink,
}

impl Run {
    pub fn new(args: Vec<String>, sink: Sink) -> Self {
        Run {
            args,
            seeds: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            timings_ms: BTreeMap::new(),
            sink,
        }
    }

    pub fn read_input(&mut self, path: &Path) -> Result<String> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.push(FileHash {
            path: path.display().to_string(),
            sha256: sha256_hex(text.as_bytes()),
        });
        Ok(text)
    }

    pub fn emit(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        let entry = FileHash {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        };
        match &mut self.sink {
            Sink::Write => {
                fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
            }
            Sink::Replay { expected, mismatches } => match expected.iter().find(|e| e.path == entry.path) {
                Some(e) if e.sha256 == entry.sha256 => {}
                Some(_) => mismatches.borrow_mut().push(format!("{}: content differs", entry.path)),
                None => mismatches.borrow_mut().push(format!("{}: not in manifest", entry.path)),
            },
        }
        self.outputs.push(entry);
        Ok(())
    }

    /// Writes `<artifact>.manifest.json` next to the first output.
    pub fn finish(self, artifact: &Path) -> Result<()> {
        if let Sink::Replay { expected, mismatches } = &self.sink {
            for e in expected {
                if !self.outputs.iter().any(|o| o.path == e.path) {
                    mismatches.borrow_mut().push(format!("{}: not produced", e.path));
                }
            }
            return Ok(());
        }
        let m = RunManifest {
            tool: "ilab".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            args: self.args,
            seeds: self.seeds,
            inputs: self.inputs,
            outputs: self.outputs,
            timings_ms: self.timings_ms,
        };
        let text = serde_json::to_string_pretty(&m)? + "\n";
        let path = manifest_path(artifact);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    }
}

pub fn load(path: &Path) -> Result<RunManifest> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let m: RunManifest = serde_json::from_str(&text).context("malformed manifest")?;
    if m.tool != "ilab" {
        bail!("manifest was not written by ilab");
    }
    Ok(m)
}
