//! Content-addressed report cache. The key is a SHA-256 of the canonical
//! parameter serialization; a hit replays the stored bytes verbatim, so
//! cached and fresh runs are byte-identical. The exit code is stored in a
//! sidecar file. The cache is an optimization only; it never participates
//! in adjudication.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

pub struct CacheKey(String);

impl CacheKey {
    pub fn new(canonical_params: &str) -> CacheKey {
        let digest = Sha256::digest(canonical_params.as_bytes());
        let mut hex = String::with_capacity(64);
        for byte in digest {
            hex.push_str(&format!("{byte:02x}"));
        }
        CacheKey(hex)
    }
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: &Path) -> Cache {
        Cache {
            dir: dir.to_path_buf(),
        }
    }

    fn body_path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.0))
    }

    fn exit_path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.exit", key.0))
    }

    pub fn lookup(&self, key: &CacheKey) -> Option<(String, u8)> {
        let body = fs::read_to_string(self.body_path(key)).ok()?;
        let exit: u8 = fs::read_to_string(self.exit_path(key))
            .ok()?
            .trim()
            .parse()
            .ok()?;
        Some((body, exit))
    }

    pub fn store(&self, key: &CacheKey, body: &str, exit: u8) {
        // best effort: a failed write only disables the cache
        if fs::create_dir_all(&self.dir).is_err() {
            return;
        }
        let _ = fs::write(self.body_path(key), body);
        let _ = fs::write(self.exit_path(key), format!("{exit}\n"));
    }
}
