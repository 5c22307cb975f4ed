//! On-disk cache of enumeration tallies.
//!
//! One JSON file per (Gram digest, norm bound, projection):
//!
//! ```text
//! {
//!   "format": "borcherds-enumeration-cache",
//!   "version": 1,
//!   "rank": 24,
//!   "gram_digest": "<sha256 hex of rank and Gram entries>",
//!   "max_norm": 4,
//!   "projection": [[...], ...] | null,
//!   "payload_sha256": "<sha256 hex of the compact JSON of `entries`>",
//!   "entries": [[norm, [key...], count], ...]
//! }
//! ```
//!
//! Entries are sorted. A file whose header or payload digest does not match
//! is renamed to `*.quarantined` and ignored. Writers go through a temporary
//! file and an atomic rename.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{short_vectors_with, EnumBudget, Lattice, PairingTally};
use crate::error::Result;

pub const CACHE_DIR_ENV: &str = "BORCHERDS_CACHE_DIR";
pub const CACHE_FORMAT_VERSION: u32 = 1;
const FORMAT_NAME: &str = "borcherds-enumeration-cache";

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format: String,
    version: u32,
    rank: usize,
    gram_digest: String,
    max_norm: i64,
    projection: Option<Vec<Vec<i64>>>,
    payload_sha256: String,
    entries: Vec<(i64, Vec<i64>, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CacheEntryStatus {
    Valid { rank: usize, gram_digest: String, max_norm: i64, projected: bool, entries: usize },
    Quarantined { reason: String },
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CacheReport {
    pub directory: String,
    pub files: Vec<(String, CacheEntryStatus)>,
    pub removed: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct EnumerationCache {
    dir: PathBuf,
}

fn payload_digest(entries: &[(i64, Vec<i64>, u64)]) -> Result<String> {
    let bytes = serde_json::to_vec(entries)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn projection_tag(projection: Option<&[Vec<i64>]>) -> String {
    match projection {
        None => "full".into(),
        Some(p) => {
            let bytes = serde_json::to_vec(p).unwrap_or_default();
            format!("p{}", &hex::encode(Sha256::digest(&bytes))[..12])
        }
    }
}

impl EnumerationCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(EnumerationCache { dir })
    }

    /// Cache rooted at `$BORCHERDS_CACHE_DIR`, if set.
    pub fn from_env() -> Result<Option<Self>> {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(d) if !d.is_empty() => Ok(Some(Self::new(PathBuf::from(d))?)),
            _ => Ok(None),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path_for(&self, lattice: &Lattice, max_norm: i64, projection: Option<&[Vec<i64>]>) -> PathBuf {
        self.dir.join(format!("{}-n{}-{}.json", lattice.short_digest(), max_norm, projection_tag(projection)))
    }

    fn read(path: &Path) -> std::result::Result<CacheFile, String> {
        let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
        let file: CacheFile = serde_json::from_str(&text).map_err(|e| format!("unreadable: {e}"))?;
        if file.format != FORMAT_NAME || file.version != CACHE_FORMAT_VERSION {
            return Err(format!("format {} version {}", file.format, file.version));
        }
        let digest = payload_digest(&file.entries).map_err(|e| e.to_string())?;
        if digest != file.payload_sha256 {
            return Err("payload digest mismatch".into());
        }
        Ok(file)
    }

    fn quarantine(path: &Path) -> Result<PathBuf> {
        let mut q = path.as_os_str().to_owned();
        q.push(".quarantined");
        let q = PathBuf::from(q);
        fs::rename(path, &q)?;
        Ok(q)
    }

    /// Cached tally, or `None` if absent. Corrupt files are quarantined.
    pub fn load(&self, lattice: &Lattice, max_norm: i64, projection: Option<&[Vec<i64>]>) -> Result<Option<PairingTally>> {
        let path = self.path_for(lattice, max_norm, projection);
        if !path.exists() {
            return Ok(None);
        }
        let file = match Self::read(&path) {
            Ok(f) => f,
            Err(_) => {
                Self::quarantine(&path)?;
                return Ok(None);
            }
        };
        if file.gram_digest != lattice.digest()
            || file.rank != lattice.rank()
            || file.max_norm != max_norm
            || file.projection.as_deref() != projection
        {
            Self::quarantine(&path)?;
            return Ok(None);
        }
        let mut tally = match projection {
            None => PairingTally::full(),
            Some(p) => PairingTally::projected(p.to_vec()),
        };
        for (norm, key, count) in file.entries {
            tally.counts.insert((norm, key), count);
        }
        Ok(Some(tally))
    }

    pub fn store(&self, lattice: &Lattice, max_norm: i64, tally: &PairingTally) -> Result<PathBuf> {
        let entries = tally.sorted();
        let file = CacheFile {
            format: FORMAT_NAME.into(),
            version: CACHE_FORMAT_VERSION,
            rank: lattice.rank(),
            gram_digest: lattice.digest(),
            max_norm,
            projection: tally.projection.clone(),
            payload_sha256: payload_digest(&entries)?,
            entries,
        };
        let path = self.path_for(lattice, max_norm, tally.projection.as_deref());
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(&file)?)?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// Tally from the cache, or computed and stored.
    pub fn tally(
        &self,
        lattice: &Lattice,
        max_norm: i64,
        projection: Option<&[Vec<i64>]>,
        budget: &EnumBudget,
    ) -> Result<PairingTally> {
        if let Some(t) = self.load(lattice, max_norm, projection)? {
            return Ok(t);
        }
        let t = compute_tally(lattice, max_norm, projection, budget)?;
        self.store(lattice, max_norm, &t)?;
        Ok(t)
    }

    fn cache_files(&self) -> Result<Vec<PathBuf>> {
        let mut files: Vec<PathBuf> =
            fs::read_dir(&self.dir)?.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.is_file()).collect();
        files.sort();
        Ok(files)
    }

    fn name(p: &Path) -> String {
        p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
    }

    /// Lists entries without modifying anything.
    pub fn list(&self) -> Result<CacheReport> {
        let mut report = CacheReport { directory: self.dir.display().to_string(), ..Default::default() };
        for p in self.cache_files()? {
            let name = Self::name(&p);
            if name.ends_with(".quarantined") {
                report.files.push((name, CacheEntryStatus::Quarantined { reason: "previously quarantined".into() }));
                continue;
            }
            if !name.ends_with(".json") {
                continue;
            }
            report.files.push((name, status_of(&p)));
        }
        Ok(report)
    }

    /// Checks every entry's digest; corrupt entries are quarantined.
    pub fn validate(&self) -> Result<CacheReport> {
        let mut report = self.list()?;
        for (name, status) in report.files.iter_mut() {
            if let CacheEntryStatus::Quarantined { .. } = status {
                if !name.ends_with(".quarantined") {
                    let q = Self::quarantine(&self.dir.join(&*name))?;
                    *name = Self::name(&q);
                }
            }
        }
        Ok(report)
    }

    /// Removes quarantined and leftover temporary files.
    pub fn gc(&self) -> Result<CacheReport> {
        let mut report = CacheReport { directory: self.dir.display().to_string(), ..Default::default() };
        for p in self.cache_files()? {
            let name = Self::name(&p);
            let stale_tmp = p.extension().is_some_and(|e| e.to_string_lossy().starts_with("tmp"));
            if name.ends_with(".quarantined") || stale_tmp {
                fs::remove_file(&p)?;
                report.removed.push(name);
            } else if name.ends_with(".json") {
                report.files.push((name, status_of(&p)));
            }
        }
        Ok(report)
    }
}

fn status_of(p: &Path) -> CacheEntryStatus {
    match EnumerationCache::read(p) {
        Ok(f) => CacheEntryStatus::Valid {
            rank: f.rank,
            gram_digest: f.gram_digest,
            max_norm: f.max_norm,
            projected: f.projection.is_some(),
            entries: f.entries.len(),
        },
        Err(reason) => CacheEntryStatus::Quarantined { reason },
    }
}

/// Enumeration without any cache.
pub fn compute_tally(
    lattice: &Lattice,
    max_norm: i64,
    projection: Option<&[Vec<i64>]>,
    budget: &EnumBudget,
) -> Result<PairingTally> {
    let sink = match projection {
        None => PairingTally::full(),
        Some(p) => PairingTally::projected(p.to_vec()),
    };
    let (mut t, _) = short_vectors_with(lattice, max_norm, sink, budget)?;
    t.fix_zero_key(lattice.rank());
    Ok(t)
}

/// Tally through the environment cache when configured.
pub fn cached_tally(
    lattice: &Lattice,
    max_norm: i64,
    projection: Option<&[Vec<i64>]>,
    budget: &EnumBudget,
) -> Result<PairingTally> {
    match EnumerationCache::from_env()? {
        Some(c) => c.tally(lattice, max_norm, projection, budget),
        None => compute_tally(lattice, max_norm, projection, budget),
    }
}
