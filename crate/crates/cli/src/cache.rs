//! Line-oriented JSON cache of nonzero Betti numbers.
//!
//! Two record kinds share one file: `entry` records hold a single rank,
//! `slice` records mark a whole `(config, t, j)` slice as computed, so a
//! slice with no nonzero entries is still a cache hit.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

pub const FILE_NAME: &str = "betti.jsonl";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineMeta {
    pub primes: [u64; 2],
    pub exact_fallback: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub config: String,
    pub t: usize,
    pub j: isize,
    pub b: Vec<i64>,
    pub rank: usize,
    pub engine: EngineMeta,
}

impl CacheEntry {
    pub fn key(&self) -> Key {
        (self.config.clone(), self.t, self.j, self.b.clone())
    }
}

pub type Key = (String, usize, isize, Vec<i64>);
pub type SliceKey = (String, usize, isize);

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Record {
    Entry(CacheEntry),
    Slice { config: String, t: usize, j: isize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub entries: usize,
    pub slices: usize,
    pub skipped_lines: usize,
}

/// The in-memory view plus the append handle. Writes go through one
/// mutex-guarded handle, so concurrent callers never interleave lines.
pub struct Cache {
    path: PathBuf,
    entries: BTreeMap<Key, CacheEntry>,
    slices: BTreeSet<SliceKey>,
    skipped: usize,
    writer: Mutex<File>,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
        let path = dir.join(FILE_NAME);
        let mut entries = BTreeMap::new();
        let mut slices = BTreeSet::new();
        let mut skipped = 0;
        if path.exists() {
            let f = File::open(&path).with_context(|| format!("reading {}", path.display()))?;
            for (n, line) in BufReader::new(f).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<Record>(&line) {
                    Ok(Record::Entry(e)) if e.rank > 0 => {
                        entries.insert(e.key(), e);
                    }
                    Ok(Record::Slice { config, t, j }) => {
                        slices.insert((config, t, j));
                    }
                    Ok(Record::Entry(_)) => {
                        log::warn!("{}:{}: entry with rank 0, skipped", path.display(), n + 1);
                        skipped += 1;
                    }
                    Err(e) => {
                        log::warn!("{}:{}: corrupt cache line skipped: {e}", path.display(), n + 1);
                        skipped += 1;
                    }
                }
            }
        }
        let writer = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .with_context(|| format!("opening {} for writing", path.display()))?;
        Ok(Cache {
            path,
            entries,
            slices,
            skipped,
            writer: Mutex::new(writer),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn get(&self, key: &Key) -> Option<&CacheEntry> {
        self.entries.get(key)
    }

    /// Stores an entry unless an identical one is present. A different
    /// rank under the same key is an error.
    pub fn put(&mut self, entry: CacheEntry) -> Result<bool> {
        if entry.rank == 0 {
            bail!("cache entries must have rank >= 1");
        }
        let key = entry.key();
        if let Some(old) = self.entries.get(&key) {
            if old.rank != entry.rank {
                bail!(
                    "cache conflict for {} t={} j={} b={:?}: stored rank {}, new rank {}",
                    key.0,
                    key.1,
                    key.2,
                    key.3,
                    old.rank,
                    entry.rank
                );
            }
            return Ok(false);
        }
        self.append(&Record::Entry(entry.clone()))?;
        self.entries.insert(key, entry);
        Ok(true)
    }

    pub fn has_slice(&self, config: &str, t: usize, j: isize) -> bool {
        self.slices.contains(&(config.to_string(), t, j))
    }

    pub fn mark_slice(&mut self, config: &str, t: usize, j: isize) -> Result<()> {
        let key = (config.to_string(), t, j);
        if self.slices.contains(&key) {
            return Ok(());
        }
        self.append(&Record::Slice {
            config: config.to_string(),
            t,
            j,
        })?;
        self.slices.insert(key);
        Ok(())
    }

    /// Entries of one slice, in multidegree order.
    pub fn slice(&self, config: &str, t: usize, j: isize) -> Vec<&CacheEntry> {
        self.entries
            .values()
            .filter(|e| e.config == config && e.t == t && e.j == j)
            .collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &CacheEntry> {
        self.entries.values()
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            entries: self.entries.len(),
            slices: self.slices.len(),
            skipped_lines: self.skipped,
        }
    }

    /// Empties the file and the in-memory view.
    pub fn clear(&mut self) -> Result<()> {
        let f = self.writer.get_mut().map_err(|_| anyhow::anyhow!("cache writer poisoned"))?;
        f.set_len(0)?;
        self.entries.clear();
        self.slices.clear();
        self.skipped = 0;
        Ok(())
    }

    fn append(&self, rec: &Record) -> Result<()> {
        let mut line = serde_json::to_string(rec)?;
        line.push('\n');
        let mut w = self.writer.lock().map_err(|_| anyhow::anyhow!("cache writer poisoned"))?;
        w.write_all(line.as_bytes())?;
        w.flush()?;
        Ok(())
    }
}
