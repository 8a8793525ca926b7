//! Content-addressed store: one JSON file per entry, named by the SHA-256
//! of the key.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const ENV_ROOT: &str = "SCHUR_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    #[serde(rename = "type")]
    pub ty: String,
    pub n: i64,
    /// the truncation degree, or `"stab"`
    pub d: String,
    pub matrix: String,
    pub op: String,
}

impl CacheKey {
    pub fn digest(&self) -> String {
        hex_digest(serde_json::to_string(self).expect("key serializes").as_bytes())
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    key: CacheKey,
    version: String,
    digest: String,
    value: String,
}

pub fn hex_digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

pub struct Cache {
    root: PathBuf,
}

impl Cache {
    /// `--cache-dir` wins over the environment; `None` when neither is set.
    pub fn open(flag: Option<&Path>) -> std::io::Result<Option<Cache>> {
        let root = match flag {
            Some(p) => p.to_path_buf(),
            None => match std::env::var_os(ENV_ROOT) {
                Some(p) if !p.is_empty() => PathBuf::from(p),
                _ => return Ok(None),
            },
        };
        fs::create_dir_all(&root)?;
        Ok(Some(Cache { root }))
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        self.root.join(format!("{}.json", key.digest()))
    }

    /// The stored value, if present and intact.
    pub fn get(&self, key: &CacheKey) -> Option<String> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        if entry.key != *key || entry.digest != hex_digest(entry.value.as_bytes()) {
            eprintln!("warning: ignoring corrupt cache entry {}", self.path(key).display());
            return None;
        }
        Some(entry.value)
    }

    /// Writes through a temporary file and renames it into place.
    pub fn put(&self, key: &CacheKey, value: &str) -> std::io::Result<()> {
        let path = self.path(key);
        if path.exists() {
            return Ok(());
        }
        let entry = CacheEntry {
            key: key.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            digest: hex_digest(value.as_bytes()),
            value: value.to_string(),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.root)?;
        tmp.write_all(serde_json::to_string(&entry)?.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(&path).map_err(|e| e.error)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(op: &str) -> CacheKey {
        CacheKey { ty: "c".into(), n: 4, d: "2".into(), matrix: "[]".into(), op: op.into() }
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(Some(dir.path())).unwrap().unwrap();
        assert_eq!(c.get(&key("canonical")), None);
        c.put(&key("canonical"), "{\"x\":1}").unwrap();
        assert_eq!(c.get(&key("canonical")).as_deref(), Some("{\"x\":1}"));
        assert_eq!(c.get(&key("monomial")), None);
    }

    #[test]
    fn corrupt_entry_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(Some(dir.path())).unwrap().unwrap();
        c.put(&key("canonical"), "abc").unwrap();
        let p = c.path(&key("canonical"));
        let text = fs::read_to_string(&p).unwrap().replace("\"abc\"", "\"abd\"");
        fs::write(&p, text).unwrap();
        assert_eq!(c.get(&key("canonical")), None);
    }
}
