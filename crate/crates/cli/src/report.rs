use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const REPORT_VERSION: u32 = 1;

/// A usage problem detected after argument parsing; exits with status 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

#[derive(Clone, Debug, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

impl FileDigest {
    pub fn of(path: &Path, data: &[u8]) -> Self {
        Self {
            path: path.display().to_string(),
            bytes: data.len(),
            sha256: sha256_hex(data),
        }
    }
}

pub fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data).iter().map(|b| format!("{b:02x}")).collect()
}

/// Envelope shared by every command's JSON output.
#[derive(Debug, Serialize)]
pub struct RunReport<T: Serialize> {
    pub version: u32,
    pub command: Vec<String>,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    #[serde(flatten)]
    pub body: T,
}

impl<T: Serialize> RunReport<T> {
    pub fn new(inputs: Vec<FileDigest>, outputs: Vec<FileDigest>, body: T) -> Self {
        Self {
            version: REPORT_VERSION,
            command: std::env::args().collect(),
            inputs,
            outputs,
            body,
        }
    }
}

pub fn read_input(path: &Path) -> Result<(Vec<u8>, FileDigest)> {
    let data = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let digest = FileDigest::of(path, &data);
    Ok((data, digest))
}

pub fn read_text(path: &Path) -> Result<(String, FileDigest)> {
    let (data, digest) = read_input(path)?;
    let text = String::from_utf8(data).with_context(|| format!("{} is not UTF-8", path.display()))?;
    Ok((text, digest))
}

pub fn write_output(path: &Path, data: &[u8]) -> Result<FileDigest> {
    fs::write(path, data).with_context(|| format!("writing {}", path.display()))?;
    Ok(FileDigest::of(path, data))
}

/// Writes `text` to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(out, &text)
}

/// Expands directories into their regular files, sorted by name; plain
/// files are kept in the given order.
pub fn expand_inputs(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(p)
                .with_context(|| format!("listing {}", p.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.is_file())
                .collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}
