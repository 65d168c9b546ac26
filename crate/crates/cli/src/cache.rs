//! On-disk memo of recursion values, keyed by `P:l,m,d,n` and `S:i,d,n`.
//!
//! The file is advisory. Anything unreadable, malformed or written by another
//! format version is ignored and overwritten on the next save.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use stablemaps_core::poincare::{CacheKey, Recursion};
use stablemaps_core::qpoly::QPoly;

pub const CACHE_VERSION: &str = "stablemaps-cache-1";
pub const CACHE_ENV: &str = "STABLEMAPS_CACHE";

#[derive(Debug, Default, Serialize, Deserialize)]
pub struct CacheFile {
    pub version: String,
    /// Coefficients in ascending powers of `q`, as exact rationals.
    pub entries: BTreeMap<String, Vec<String>>,
}

/// `$STABLEMAPS_CACHE`, else `$XDG_CACHE_HOME/stablemaps/recursion.json`,
/// else `$HOME/.cache/stablemaps/recursion.json`.
pub fn default_path() -> Option<PathBuf> {
    let env = |k: &str| std::env::var_os(k).filter(|v| !v.is_empty());
    if let Some(p) = env(CACHE_ENV) {
        return Some(PathBuf::from(p));
    }
    let base = env("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| env("HOME").map(|h| PathBuf::from(h).join(".cache")))?;
    Some(base.join("stablemaps").join("recursion.json"))
}

fn decode(key: &str, coeffs: &[String]) -> Option<(CacheKey, QPoly)> {
    let key: CacheKey = key.parse().ok()?;
    let coeffs = coeffs
        .iter()
        .map(|c| c.parse::<BigRational>().ok())
        .collect::<Option<Vec<_>>>()?;
    Some((key, QPoly::from_coeffs(coeffs)))
}

fn encode(p: &QPoly) -> Vec<String> {
    p.coeffs().iter().map(ToString::to_string).collect()
}

/// All well-formed entries of a current-version cache, or nothing.
pub fn load(path: &Path) -> BTreeMap<CacheKey, QPoly> {
    let Ok(text) = fs::read_to_string(path) else {
        return BTreeMap::new();
    };
    let Ok(file) = serde_json::from_str::<CacheFile>(&text) else {
        return BTreeMap::new();
    };
    if file.version != CACHE_VERSION {
        return BTreeMap::new();
    }
    let decoded: Option<BTreeMap<_, _>> = file.entries.iter().map(|(k, v)| decode(k, v)).collect();
    decoded.unwrap_or_default()
}

/// Seeds `rec` from the cache. A cache that contradicts itself is dropped.
pub fn seed(rec: &Recursion, path: &Path) {
    let entries = load(path);
    if entries.is_empty() {
        return;
    }
    let probe = Recursion::new(rec.n()).expect("n was validated");
    if probe.seed(entries.clone()).is_ok() {
        rec.seed(entries)
            .expect("seeding a fresh recursion twice is consistent");
    }
}

/// Merges the values of `rec` into the cache file and replaces it atomically.
pub fn save(rec: &Recursion, path: &Path) -> std::io::Result<()> {
    let mut entries = load(path);
    entries.extend(rec.export());
    let file = CacheFile {
        version: CACHE_VERSION.to_string(),
        entries: entries
            .iter()
            .map(|(k, v)| (k.to_string(), encode(v)))
            .collect(),
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(serde_json::to_string(&file)?.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
