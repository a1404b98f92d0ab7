//! On-disk JSON cache of oracle tables.
//!
//! One file per query, named by a SHA-256 key over the format version, the
//! functor, the module fingerprint and the parameters. Files are written to
//! a temporary name and renamed into place, so readers never see partial
//! output. A file that fails to parse or whose fields do not match the query
//! is recomputed and replaced.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::OracleTable;
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

/// Environment variable naming the default cache directory.
pub const CACHE_ENV: &str = "DESTAB_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry {
    format_version: u32,
    key: String,
    table: OracleTable,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Query {
    pub functor: &'static str,
    pub fingerprint: String,
    pub t: usize,
    pub s_max: usize,
    pub hi: i32,
}

impl Query {
    pub fn key(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("v{FORMAT_VERSION}|{}|{}|{}|{}|{}", self.functor, self.fingerprint, self.t, self.s_max, self.hi));
        hex::encode(h.finalize())
    }
}

#[derive(Clone, Debug)]
pub struct OracleCache {
    dir: PathBuf,
}

static COUNTER: AtomicU64 = AtomicU64::new(0);

impl OracleCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        OracleCache { dir: dir.into() }
    }

    /// The cache named by `DESTAB_CACHE_DIR`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(&self, q: &Query) -> Option<OracleTable> {
        let key = q.key();
        let text = fs::read_to_string(self.path(&key)).ok()?;
        let e: Entry = serde_json::from_str(&text).ok()?;
        let t = &e.table;
        let fits = e.format_version == FORMAT_VERSION
            && e.key == key
            && t.functor == q.functor
            && t.fingerprint == q.fingerprint
            && t.t == q.t
            && t.s_max == q.s_max;
        fits.then_some(e.table)
    }

    pub fn store(&self, q: &Query, table: &OracleTable) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let key = q.key();
        let entry = Entry { format_version: FORMAT_VERSION, key: key.clone(), table: table.clone() };
        let text = serde_json::to_string(&entry).map_err(|e| Error::Cache(e.to_string()))?;
        let n = COUNTER.fetch_add(1, Ordering::Relaxed);
        let tmp = self.dir.join(format!(".{key}.{}.{n}.tmp", std::process::id()));
        fs::write(&tmp, text)?;
        fs::rename(&tmp, self.path(&key))?;
        Ok(())
    }

    /// Cached value for `q`, computing and storing it on a miss. The flag
    /// says whether the cache was hit.
    pub fn get_or_compute(&self, q: &Query, f: impl FnOnce() -> Result<OracleTable>) -> Result<(OracleTable, bool)> {
        if let Some(t) = self.load(q) {
            return Ok((t, true));
        }
        let t = f()?;
        self.store(q, &t)?;
        Ok((t, false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;
    use crate::oracle::derived_destab_oracle;

    #[test]
    fn round_trip_and_invalidation() {
        let dir = tempfile::tempdir().unwrap();
        let cache = OracleCache::new(dir.path());
        let m = library::sigma_f(-1);
        let q = Query { functor: "destab", fingerprint: m.fingerprint(), t: 0, s_max: 1, hi: 8 };
        let (a, hit) = cache.get_or_compute(&q, || derived_destab_oracle(&m, 1, 8)).unwrap();
        assert!(!hit);
        let (b, hit) = cache.get_or_compute(&q, || unreachable!()).unwrap();
        assert!(hit);
        assert_eq!(a, b);
        // corrupt file: recomputed
        fs::write(cache.path(&q.key()), "{").unwrap();
        let (_, hit) = cache.get_or_compute(&q, || derived_destab_oracle(&m, 1, 8)).unwrap();
        assert!(!hit);
        // another window is a different key
        let q2 = Query { hi: 9, ..q.clone() };
        assert_ne!(q.key(), q2.key());
        assert!(cache.load(&q2).is_none());
    }
}
