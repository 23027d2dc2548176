//! On-disk cache of oracle safe sets.
//!
//! One file per `(tree, k)`, named `<sha256 of wire text>-k<k>.safe`, holding
//! one decimal bitmask per line in ascending order. An empty file is an
//! empty safe set.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use etdom_core::oracle::{safe_configs_within, Budget, OracleError, SafeSet};
use etdom_core::Tree;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::format::serialize_tree;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache io: {0}")]
    Io(#[from] io::Error),
    #[error("{path}: line {line}: not a bitmask")]
    Corrupt { path: PathBuf, line: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

pub fn tree_hash(t: &Tree) -> String {
    hex::encode(Sha256::digest(serialize_tree(t).as_bytes()))
}

pub struct SafeSetCache {
    dir: PathBuf,
}

impl SafeSetCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        SafeSetCache { dir: dir.into() }
    }

    pub fn path(&self, t: &Tree, k: usize) -> PathBuf {
        self.dir.join(format!("{}-k{k}.safe", tree_hash(t)))
    }

    pub fn load(&self, t: &Tree, k: usize) -> Result<Option<Vec<u32>>, CacheError> {
        let path = self.path(t, k);
        let text = match fs::read_to_string(&path) {
            Ok(s) => s,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        text.lines()
            .enumerate()
            .map(|(i, l)| {
                l.parse().map_err(|_| CacheError::Corrupt {
                    path: path.clone(),
                    line: i + 1,
                })
            })
            .collect::<Result<_, _>>()
            .map(Some)
    }

    pub fn store(&self, safe: &SafeSet) -> Result<PathBuf, CacheError> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path(safe.tree(), safe.k());
        write_masks(&path, safe.safe_masks())?;
        Ok(path)
    }

    /// Safe masks for `(t, k)`, computing and storing them on a miss.
    pub fn get_or_compute(&self, t: &Tree, k: usize, budget: Budget) -> Result<Vec<u32>, CacheError> {
        if let Some(masks) = self.load(t, k)? {
            return Ok(masks);
        }
        let safe = safe_configs_within(t, k, budget)?;
        self.store(&safe)?;
        Ok(safe.safe_masks().collect())
    }
}

fn write_masks(path: &Path, masks: impl Iterator<Item = u32>) -> io::Result<()> {
    let mut masks: Vec<u32> = masks.collect();
    masks.sort_unstable();
    let body: String = masks.iter().map(|m| format!("{m}\n")).collect();
    // Write-then-rename so a concurrent reader never sees a partial file.
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, body)?;
    fs::rename(tmp, path)
}
