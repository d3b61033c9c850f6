use crate::CliError;
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::PathBuf;

/// Content-addressed JSON cache; files are written to a temporary name and
/// renamed into place.
#[derive(Clone, Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: Some(dir.into()) }
    }

    pub fn from_env() -> Self {
        match std::env::var_os("PGK_CACHE") {
            Some(d) if !d.is_empty() => Cache::at(d),
            _ => Cache::disabled(),
        }
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        let digest = Sha256::digest(key.as_bytes());
        self.dir.as_ref().map(|d| d.join(format!("{}.json", hex::encode(digest))))
    }

    pub fn get(&self, key: &str) -> Option<Value> {
        let text = std::fs::read_to_string(self.path(key)?).ok()?;
        let v: Value = serde_json::from_str(&text).ok()?;
        (v.get("key")?.as_str()? == key).then(|| v.get("value").cloned()).flatten()
    }

    pub fn put(&self, key: &str, value: &Value) -> Result<(), CliError> {
        let (Some(dir), Some(path)) = (&self.dir, self.path(key)) else { return Ok(()) };
        std::fs::create_dir_all(dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        let doc = serde_json::json!({ "key": key, "value": value });
        tmp.write_all(serde_json::to_string(&doc)?.as_bytes())?;
        tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
        Ok(())
    }

    pub fn get_or_compute<F>(&self, key: &str, f: F) -> Result<Value, CliError>
    where
        F: FnOnce() -> Result<Value, CliError>,
    {
        if let Some(v) = self.get(key) {
            return Ok(v);
        }
        let v = f()?;
        self.put(key, &v)?;
        Ok(v)
    }
}
