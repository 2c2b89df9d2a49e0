//! Content-addressed catalog store: atomic writes (temp file + rename),
//! exact-key lookups, hash-verified payloads. A failed integrity check is a
//! miss, never an error.

use crate::catalog::CatalogCaps;
use crate::error::{Error, Result};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

pub struct CatalogStore {
    dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheKey {
    pub algebra_hash: String,
    pub dim_bound: usize,
    pub caps_fingerprint: String,
    pub seed: u64,
}

impl CacheKey {
    pub fn new(algebra_hash: &str, dim_bound: usize, caps: &CatalogCaps, seed: u64) -> CacheKey {
        let caps_fingerprint = format!(
            "{}-{}-{}-{}",
            caps.submodule_cap, caps.exhaust_cap, caps.realization_cap, caps.syzygy_bound
        );
        CacheKey {
            algebra_hash: algebra_hash.to_string(),
            dim_bound,
            caps_fingerprint,
            seed,
        }
    }

    fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.algebra_hash.as_bytes());
        h.update(self.dim_bound.to_le_bytes());
        h.update(self.caps_fingerprint.as_bytes());
        h.update(self.seed.to_le_bytes());
        hex::encode(h.finalize())
    }
}

impl CatalogStore {
    pub fn open(dir: &Path) -> Result<CatalogStore> {
        std::fs::create_dir_all(dir)?;
        Ok(CatalogStore {
            dir: dir.to_path_buf(),
        })
    }

    fn path_for(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("catalog-{}.json", key.digest()))
    }

    /// Returns the stored payload on an exact key and checksum match.
    pub fn get(&self, key: &CacheKey) -> Option<String> {
        let path = self.path_for(key);
        let bytes = std::fs::read(&path).ok()?;
        let text = String::from_utf8(bytes).ok()?;
        let (checksum_line, payload) = text.split_once('\n')?;
        let expected = checksum_line.strip_prefix("sha256:")?;
        let mut h = Sha256::new();
        h.update(payload.as_bytes());
        if hex::encode(h.finalize()) != expected {
            return None; // corrupt entry, treated as a miss
        }
        Some(payload.to_string())
    }

    /// Atomic put: temp file in the same directory, then rename. Concurrent
    /// writers of the same key both succeed; one file wins.
    pub fn put(&self, key: &CacheKey, payload: &str) -> Result<()> {
        let path = self.path_for(key);
        let mut h = Sha256::new();
        h.update(payload.as_bytes());
        let body = format!("sha256:{}\n{}", hex::encode(h.finalize()), payload);
        let tmp = self.dir.join(format!(
            ".tmp-{}-{}",
            std::process::id(),
            path.file_name()
                .and_then(|n| n.to_str())
                .ok_or_else(|| Error::Internal("cache path".into()))?
        ));
        std::fs::write(&tmp, body)?;
        std::fs::rename(&tmp, &path)?;
        Ok(())
    }

    pub fn invalidate(&self, key: &CacheKey) -> Result<()> {
        let path = self.path_for(key);
        if path.exists() {
            std::fs::remove_file(path)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn put_get_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let store = CatalogStore::open(dir.path()).unwrap();
        let caps = CatalogCaps::for_field(2);
        let key = CacheKey::new("abc", 4, &caps, 1);
        store.put(&key, "{\"payload\": 1}").unwrap();
        assert_eq!(store.get(&key).unwrap(), "{\"payload\": 1}");
        // cap change is a different key
        let mut caps2 = caps.clone();
        caps2.submodule_cap += 1;
        let key2 = CacheKey::new("abc", 4, &caps2, 1);
        assert!(store.get(&key2).is_none());
    }

    #[test]
    fn corrupt_entry_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let store = CatalogStore::open(dir.path()).unwrap();
        let caps = CatalogCaps::for_field(2);
        let key = CacheKey::new("abc", 4, &caps, 1);
        store.put(&key, "payload").unwrap();
        // flip a byte in the stored file
        let path = dir.path().join(
            std::fs::read_dir(dir.path())
                .unwrap()
                .next()
                .unwrap()
                .unwrap()
                .file_name(),
        );
        let mut text = std::fs::read_to_string(&path).unwrap();
        text.push('x');
        std::fs::write(&path, text).unwrap();
        assert!(store.get(&key).is_none());
    }

    #[test]
    fn double_put_single_winner() {
        let dir = tempfile::tempdir().unwrap();
        let store = CatalogStore::open(dir.path()).unwrap();
        let caps = CatalogCaps::for_field(2);
        let key = CacheKey::new("abc", 4, &caps, 1);
        store.put(&key, "one").unwrap();
        store.put(&key, "one").unwrap();
        assert_eq!(store.get(&key).unwrap(), "one");
    }
}
