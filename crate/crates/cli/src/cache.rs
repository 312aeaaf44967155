//! Content-addressed result cache under `SPF_CACHE_DIR`.
//!
//! An entry is `<dir>/<h[..2]>/<h>.json` where h is the sha256 of the canonical request. It stores
//! the request, the exit code, stdout and a digest of stdout; anything that fails to parse or
//! verify is treated as a miss and overwritten.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const ENV: &str = "SPF_CACHE_DIR";
const FORMAT: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub exit: u8,
    pub stdout: String,
}

pub struct Cache {
    dir: PathBuf,
}

fn digest(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

impl Cache {
    pub fn from_env() -> Option<Cache> {
        let dir = std::env::var_os(ENV)?;
        if dir.is_empty() {
            return None;
        }
        Some(Cache { dir: PathBuf::from(dir) })
    }

    #[cfg(test)]
    pub fn at(dir: &std::path::Path) -> Cache {
        Cache { dir: dir.to_path_buf() }
    }

    pub fn path(&self, key: &str) -> PathBuf {
        let h = digest(key);
        self.dir.join(&h[..2]).join(format!("{h}.json"))
    }

    pub fn load(&self, key: &str) -> Result<Entry> {
        let path = self.path(key);
        let raw = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let v: Value = serde_json::from_str(&raw).context("cache entry is not JSON")?;
        let field = |name: &str| v.get(name).with_context(|| format!("cache entry lacks {name}"));
        if field("format")?.as_u64() != Some(FORMAT) || field("key")?.as_str() != Some(key) {
            bail!("cache entry belongs to another request");
        }
        let stdout = field("stdout")?.as_str().context("stdout is not a string")?.to_string();
        if field("digest")?.as_str() != Some(digest(&stdout).as_str()) {
            bail!("cache entry digest mismatch");
        }
        let exit = field("exit")?.as_u64().and_then(|e| u8::try_from(e).ok()).context("bad exit code")?;
        Ok(Entry { exit, stdout })
    }

    pub fn store(&self, key: &str, e: &Entry) -> Result<()> {
        let path = self.path(key);
        let parent = path.parent().expect("entry has a parent");
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
        let body = json!({
            "format": FORMAT,
            "key": key,
            "exit": e.exit,
            "stdout": e.stdout,
            "digest": digest(&e.stdout),
        });
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, body.to_string()).with_context(|| format!("writing {}", tmp.display()))?;
        fs::rename(&tmp, &path).with_context(|| format!("moving {} into place", tmp.display()))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::at(dir.path());
        let e = Entry { exit: 0, stdout: "{\"degrees\":{}}\n".into() };
        assert!(c.load("k").is_err());
        c.store("k", &e).unwrap();
        assert_eq!(c.load("k").unwrap(), e);
        assert!(c.load("other").is_err());
        let raw = fs::read_to_string(c.path("k")).unwrap().replace("degrees", "degreez");
        fs::write(c.path("k"), raw).unwrap();
        assert!(c.load("k").is_err());
        fs::write(c.path("k"), "not json").unwrap();
        assert!(c.load("k").is_err());
    }
}
