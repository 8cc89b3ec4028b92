//! Content-addressed result cache.
//!
//! Keys are sha256 digests of the canonical graph text, the operation name
//! and its parameters. Each entry stores its key and a digest of the
//! payload; entries failing either check are discarded with a warning.
//! Writes go to a temporary file and are renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use capbound::Graph;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "CAPBOUND_CACHE_DIR";

#[derive(Clone, Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct Stored {
    key: String,
    digest: String,
    payload: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Cache {
    /// Cache rooted at `$CAPBOUND_CACHE_DIR`, or disabled when unset.
    pub fn from_env() -> Self {
        Cache {
            dir: std::env::var_os(CACHE_ENV).map(PathBuf::from),
        }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache {
            dir: Some(dir.into()),
        }
    }

    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// Labels are dropped; the edge list is already sorted.
    pub fn key(g: &Graph, op: &str, params: &str) -> String {
        let canonical = g.clone().without_labels().to_text();
        sha256_hex(format!("{canonical}\n{op}\n{params}").as_bytes())
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    pub fn get<T: DeserializeOwned>(&self, key: &str) -> Option<T> {
        let path = self.path(key)?;
        let text = fs::read_to_string(&path).ok()?;
        let value = serde_json::from_str::<Stored>(&text)
            .ok()
            .filter(|s| s.key == key && s.digest == sha256_hex(s.payload.as_bytes()))
            .and_then(|s| serde_json::from_str(&s.payload).ok());
        if value.is_none() {
            log::warn!("discarding corrupt cache entry {}", path.display());
            let _ = fs::remove_file(&path);
        }
        value
    }

    pub fn put<T: Serialize>(&self, key: &str, value: &T) -> std::io::Result<()> {
        let Some(path) = self.path(key) else {
            return Ok(());
        };
        let dir = path.parent().expect("entries live in the cache directory");
        fs::create_dir_all(dir)?;
        let payload = serde_json::to_string(value).map_err(std::io::Error::other)?;
        let stored = Stored {
            key: key.to_string(),
            digest: sha256_hex(payload.as_bytes()),
            payload,
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(
            serde_json::to_string(&stored)
                .map_err(std::io::Error::other)?
                .as_bytes(),
        )?;
        tmp.persist(&path).map_err(|e| e.error)?;
        Ok(())
    }

    /// Cached value, or `compute` stored on success. Write failures only
    /// warn.
    pub fn get_or_compute<T, E>(
        &self,
        key: &str,
        compute: impl FnOnce() -> Result<T, E>,
    ) -> Result<T, E>
    where
        T: Serialize + DeserializeOwned,
    {
        if let Some(v) = self.get(key) {
            return Ok(v);
        }
        let v = compute()?;
        if let Err(e) = self.put(key, &v) {
            log::warn!("cache write failed: {e}");
        }
        Ok(v)
    }
}

/// `f64` stored by bit pattern so hits are bit-identical.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub struct Bits(pub f64);

impl From<Bits> for String {
    fn from(b: Bits) -> String {
        format!("{:016x}", b.0.to_bits())
    }
}

impl From<String> for Bits {
    fn from(s: String) -> Bits {
        Bits(f64::from_bits(
            u64::from_str_radix(&s, 16).unwrap_or(u64::MAX),
        ))
    }
}
