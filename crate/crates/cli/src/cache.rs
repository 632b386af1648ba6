//! On-disk JSON cache for character tables and block partitions, one file
//! per canonical key.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use log::warn;
use serde::de::DeserializeOwned;
use serde::Serialize;
use weightlab::blocks::BlockPartitionRepr;
use weightlab::chartable::CharTableRepr;
use weightlab::context::TableStore;

pub struct DiskCache {
    dir: PathBuf,
    counter: AtomicU64,
}

impl DiskCache {
    pub fn open(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        // fail early on a read-only directory
        let probe = dir.join(format!(".probe-{}", std::process::id()));
        fs::File::create(&probe)?;
        fs::remove_file(&probe)?;
        Ok(DiskCache {
            dir,
            counter: AtomicU64::new(0),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// File for `key`; keys are hex digests, anything else is sanitized.
    pub fn path_for(&self, kind: &str, key: &str) -> PathBuf {
        let safe: String = key
            .chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || c == '-' {
                    c
                } else {
                    '_'
                }
            })
            .collect();
        self.dir.join(format!("{safe}.{kind}.json"))
    }

    fn load<T: DeserializeOwned>(&self, kind: &str, key: &str) -> Option<T> {
        let path = self.path_for(kind, key);
        let text = fs::read_to_string(&path).ok()?;
        match serde_json::from_str(&text) {
            Ok(v) => Some(v),
            Err(e) => {
                warn!("evicting corrupt cache entry {}: {e}", path.display());
                let _ = fs::remove_file(&path);
                None
            }
        }
    }

    /// Writes to a private temporary file, then renames over the target, so
    /// readers never see a partial entry.
    fn save<T: Serialize>(&self, kind: &str, key: &str, value: &T) {
        let path = self.path_for(kind, key);
        let n = self.counter.fetch_add(1, Ordering::Relaxed);
        let tmp = self.dir.join(format!(".tmp-{}-{n}", std::process::id()));
        let res = (|| -> std::io::Result<()> {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(serde_json::to_string(value)?.as_bytes())?;
            f.sync_all()?;
            fs::rename(&tmp, &path)
        })();
        if let Err(e) = res {
            warn!("could not write cache entry {}: {e}", path.display());
            let _ = fs::remove_file(&tmp);
        }
    }
}

impl TableStore for DiskCache {
    fn load_table(&self, key: &str) -> Option<CharTableRepr> {
        self.load("table", key)
    }

    fn save_table(&self, key: &str, repr: &CharTableRepr) {
        self.save("table", key, repr)
    }

    fn load_blocks(&self, key: &str) -> Option<BlockPartitionRepr> {
        self.load("blocks", key)
    }

    fn save_blocks(&self, key: &str, repr: &BlockPartitionRepr) {
        self.save("blocks", key, repr)
    }
}
