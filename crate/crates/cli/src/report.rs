//! Certification reports with canonical serialization.
//!
//! Reports go through `serde_json::Value`, whose maps are sorted, and carry
//! only integers, strings and booleans, so equal reports are equal bytes.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Directory for reports and relative output paths.
pub const OUT_DIR_VAR: &str = "SIZEABLE_OUT_DIR";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Present on failure, when there is something to show.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertReport {
    pub command: String,
    pub input_digest: String,
    pub checks: Vec<Check>,
    pub derived: Map<String, Value>,
}

impl CertReport {
    /// `inputs` is everything besides the command and the tool version that
    /// the result depends on; file inputs enter by content digest.
    pub fn new(command: impl Into<String>, inputs: &Value) -> CertReport {
        let command = command.into();
        let digested = json!({"command": command, "inputs": inputs});
        CertReport {
            command,
            input_digest: sha256_hex(canonical_compact(&digested).as_bytes()),
            checks: Vec::new(),
            derived: Map::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool) -> &mut Self {
        self.checks.push(Check {
            name: name.into(),
            passed,
            witness: None,
        });
        self
    }

    /// Records a check; the witness is kept only if it failed.
    pub fn check_with(&mut self, name: impl Into<String>, passed: bool, witness: impl FnOnce() -> Value) -> &mut Self {
        self.checks.push(Check {
            name: name.into(),
            passed,
            witness: (!passed).then(witness),
        });
        self
    }

    pub fn derive(&mut self, key: impl Into<String>, value: impl Serialize) -> &mut Self {
        let value = serde_json::to_value(value).expect("report values serialize");
        self.derived.insert(key.into(), value);
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_value(&self) -> Value {
        json!({
            "tool_version": TOOL_VERSION,
            "command": self.command,
            "input_digest": self.input_digest,
            "passed": self.passed(),
            "checks": self.checks,
            "derived": self.derived,
        })
    }

    pub fn to_canonical(&self) -> String {
        canonical_pretty(&self.to_value())
    }
}

/// Sorted keys, two-space indent, trailing newline.
pub fn canonical_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&sorted(v)).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Sorted keys, no whitespace, trailing newline.
pub fn canonical_compact(v: &Value) -> String {
    let mut s = serde_json::to_string(&sorted(v)).expect("JSON values serialize");
    s.push('\n');
    s
}

// serde_json's default map is a BTreeMap, but rebuild anyway so the output does
// not hinge on a feature flag elsewhere in the dependency graph.
fn sorted(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            Value::Object(keys.into_iter().map(|k| (k.clone(), sorted(&m[k]))).collect())
        }
        Value::Array(a) => Value::Array(a.iter().map(sorted).collect()),
        other => other.clone(),
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Resolves a relative output path against the output directory, if set.
pub fn resolve_out(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
