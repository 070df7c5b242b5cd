//! Content-addressed result cache. Entries are keyed by a hash of the module,
//! operation, canonical config and library version, and carry a checksum of
//! their payload; entries that fail the checksum are discarded.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::Result;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize, Deserialize)]
struct Envelope {
    key: String,
    version: String,
    checksum: String,
    payload: String,
}

fn sha256(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub fn cache_key(module: &str, operation: &str, config: &Value) -> String {
    let canonical = json!({ "module": module, "operation": operation, "config": config, "version": VERSION });
    sha256(&canonical.to_string())
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Cache> {
        fs::create_dir_all(dir)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.json", key))
    }

    /// The cached value for `key`, or `None` if absent, stale or corrupted.
    pub fn load<T: DeserializeOwned>(&self, key: &str) -> Result<Option<T>> {
        let path = self.path(key);
        let Ok(text) = fs::read_to_string(&path) else {
            return Ok(None);
        };
        let valid = serde_json::from_str::<Envelope>(&text)
            .ok()
            .filter(|e| e.key == key && e.version == VERSION && sha256(&e.payload) == e.checksum)
            .and_then(|e| serde_json::from_str::<T>(&e.payload).ok());
        if valid.is_none() {
            eprintln!("opkz: discarding corrupted cache entry {}", path.display());
            fs::remove_file(&path)?;
        }
        Ok(valid)
    }

    pub fn store<T: Serialize>(&self, key: &str, value: &T) -> Result<()> {
        let payload = serde_json::to_string(value)?;
        let env = Envelope { key: key.to_string(), version: VERSION.to_string(), checksum: sha256(&payload), payload };
        let tmp = self.dir.join(format!("{}.tmp", key));
        fs::write(&tmp, serde_json::to_string(&env)?)?;
        fs::rename(tmp, self.path(key))?;
        Ok(())
    }
}

/// Loads from `cache` if present, otherwise computes and stores.
pub fn cached<T, F>(cache: Option<&Cache>, key: &str, compute: F) -> Result<T>
where
    T: Serialize + DeserializeOwned,
    F: FnOnce() -> Result<T>,
{
    if let Some(c) = cache {
        if let Some(v) = c.load(key)? {
            return Ok(v);
        }
    }
    let v = compute()?;
    if let Some(c) = cache {
        c.store(key, &v)?;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scratch(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("opkz-cache-{}-{}", name, std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        dir
    }

    #[test]
    fn round_trip_and_corruption() {
        let dir = scratch("unit");
        let cache = Cache::open(&dir).unwrap();
        let key = cache_key("m", "op", &json!({"n": 2}));
        cache.store(&key, &vec![1, 2, 3]).unwrap();
        assert_eq!(cache.load::<Vec<i32>>(&key).unwrap(), Some(vec![1, 2, 3]));
        let path = cache.path(&key);
        let text = fs::read_to_string(&path).unwrap().replace("[1,2,3]", "[1,2,4]");
        fs::write(&path, text).unwrap();
        assert_eq!(cache.load::<Vec<i32>>(&key).unwrap(), None);
        assert!(!path.exists());
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn keys_depend_on_config() {
        assert_ne!(cache_key("m", "op", &json!({"n": 2})), cache_key("m", "op", &json!({"n": 3})));
        assert_ne!(cache_key("m", "a", &json!({})), cache_key("m", "b", &json!({})));
    }
}
