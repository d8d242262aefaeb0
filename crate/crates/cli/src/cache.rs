//! Persistent cache of measure results keyed by function content hash,
//! measure name and a hash of the parameters.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CACHE_VERSION: &str = "querybench-measure-cache-1";

/// A measure result as stored; every number is already in report form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CachedMeasure {
    pub value: String,
    pub exact: bool,
    pub lower: String,
    pub upper: String,
    pub tolerance: String,
    pub provenance: String,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct CacheFile {
    version: String,
    entries: BTreeMap<String, CachedMeasure>,
}

pub struct MeasureCache {
    path: Option<PathBuf>,
    file: CacheFile,
    dirty: bool,
}

pub fn key(function_hash: &str, measure: &str, params: &str) -> String {
    let digest = Sha256::digest(params.as_bytes());
    let short: String = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
    format!("{function_hash}/{measure}/{short}")
}

impl MeasureCache {
    pub fn disabled() -> Self {
        Self { path: None, file: CacheFile { version: CACHE_VERSION.into(), entries: BTreeMap::new() }, dirty: false }
    }

    /// Opens the cache at `path`, starting empty if the file does not exist.
    pub fn open(path: &Path) -> Result<Self> {
        let file = if path.exists() {
            let text = fs::read_to_string(path).with_context(|| format!("reading cache {}", path.display()))?;
            let file: CacheFile =
                serde_json::from_str(&text).with_context(|| format!("parsing cache {}", path.display()))?;
            if file.version != CACHE_VERSION {
                bail!("cache {} has version {:?}, expected {CACHE_VERSION:?}", path.display(), file.version);
            }
            file
        } else {
            CacheFile { version: CACHE_VERSION.into(), entries: BTreeMap::new() }
        };
        Ok(Self { path: Some(path.to_path_buf()), file, dirty: false })
    }

    pub fn get(&self, key: &str) -> Option<&CachedMeasure> {
        self.file.entries.get(key)
    }

    pub fn insert(&mut self, key: String, m: CachedMeasure) {
        if self.path.is_some() {
            self.file.entries.insert(key, m);
            self.dirty = true;
        }
    }

    /// Writes through a temporary file so a crash never leaves a torn cache.
    pub fn save(&mut self) -> Result<()> {
        let Some(path) = &self.path else { return Ok(()) };
        if !self.dirty {
            return Ok(());
        }
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string_pretty(&self.file)?)
            .with_context(|| format!("writing {}", tmp.display()))?;
        fs::rename(&tmp, path).with_context(|| format!("replacing {}", path.display()))?;
        self.dirty = false;
        Ok(())
    }
}
