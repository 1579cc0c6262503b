use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Output directory of one run; every file it writes carries the manifest hash.
#[derive(Debug)]
pub struct Artifacts {
    dir: PathBuf,
    hash: String,
    written: Vec<String>,
}

fn number(v: f64) -> String {
    format!("{v:.12e}")
}

impl Artifacts {
    pub fn create(dir: &Path, hash: &str) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            hash: hash.to_string(),
            written: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    fn put(&mut self, name: &str, body: &[u8]) -> Result<()> {
        let mut f = fs::File::create(self.dir.join(name))?;
        f.write_all(body)?;
        self.written.push(name.to_string());
        Ok(())
    }

    /// CSV with a `# manifest_hash=` comment line, then the header row.
    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
        let mut out = format!("# manifest_hash={}\n{}\n", self.hash, header.join(","));
        for r in rows {
            out.push_str(&r.iter().map(|v| number(*v)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        self.put(name, out.as_bytes())
    }

    /// Whitespace-separated columns for gnuplot, blank line between `blocks`.
    pub fn dat(&mut self, name: &str, header: &[&str], blocks: &[Vec<Vec<f64>>]) -> Result<()> {
        let mut out = format!("# manifest_hash={}\n# {}\n", self.hash, header.join(" "));
        for (i, b) in blocks.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            for r in b {
                out.push_str(&r.iter().map(|v| number(*v)).collect::<Vec<_>>().join(" "));
                out.push('\n');
            }
        }
        self.put(name, out.as_bytes())
    }

    /// JSON object `{ "manifest_hash": ..., "<key>": value }`.
    pub fn json(&mut self, name: &str, key: &str, value: &impl Serialize) -> Result<()> {
        let v = serde_json::to_value(value).map_err(|e| Error::Format(e.to_string()))?;
        let doc = json!({ "manifest_hash": self.hash, key: v });
        let text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Format(e.to_string()))?;
        self.put(name, text.as_bytes())
    }

    pub fn text(&mut self, name: &str, body: &str) -> Result<()> {
        self.put(name, body.as_bytes())
    }

    pub fn raw_json(&mut self, name: &str, value: Value) -> Result<()> {
        let text = serde_json::to_string_pretty(&value).map_err(|e| Error::Format(e.to_string()))?;
        self.put(name, text.as_bytes())
    }
}
