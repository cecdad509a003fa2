//! Persistent cache of external twist results.
//!
//! One JSON document holds everything, keyed by the adapter request
//! line, so a twist is never sent to a subprocess twice.  A version
//! field and a checksum over the entry table keep a damaged or
//! foreign file from being trusted silently.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::twists::{TwistEquation, TwistOutcome};
use crate::{Error, Result};

const CACHE_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CacheEntry {
    x_candidates: Vec<String>,
    complete: bool,
    backend: String,
    diagnostics: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    checksum: String,
    entries: BTreeMap<String, CacheEntry>,
}

/// On-disk memo of twist outcomes, keyed by request line.
#[derive(Debug)]
pub struct TwistCache {
    path: PathBuf,
    entries: BTreeMap<String, CacheEntry>,
    dirty: bool,
    load_warning: Option<String>,
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn checksum_of(entries: &BTreeMap<String, CacheEntry>) -> String {
    let canonical = serde_json::to_string(entries).expect("entry table serializes");
    format!("{:016x}", fnv1a64(canonical.as_bytes()))
}

fn parse_entries(text: &str) -> Result<BTreeMap<String, CacheEntry>> {
    let file: CacheFile = serde_json::from_str(text)
        .map_err(|e| Error::CacheCorrupt(format!("invalid JSON: {e}")))?;
    if file.version != CACHE_VERSION {
        return Err(Error::CacheCorrupt(format!(
            "version {} is not {CACHE_VERSION}",
            file.version
        )));
    }
    let expected = checksum_of(&file.entries);
    if file.checksum != expected {
        return Err(Error::CacheCorrupt(format!(
            "checksum {} does not match entries ({expected})",
            file.checksum
        )));
    }
    for (key, entry) in &file.entries {
        for x in &entry.x_candidates {
            if x.parse::<BigInt>().is_err() {
                return Err(Error::CacheCorrupt(format!(
                    "entry {key:?} holds a non-integer candidate {x:?}"
                )));
            }
        }
    }
    Ok(file.entries)
}

impl TwistCache {
    /// Strict load: a missing file is an empty cache, anything
    /// unreadable or inconsistent is an error.
    pub fn load(path: &Path) -> Result<Self> {
        let entries = match std::fs::read_to_string(path) {
            Ok(text) => parse_entries(&text)?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => BTreeMap::new(),
            Err(e) => return Err(e.into()),
        };
        Ok(TwistCache {
            path: path.to_path_buf(),
            entries,
            dirty: false,
            load_warning: None,
        })
    }

    /// Tolerant open: a damaged file is set aside as a warning and
    /// the cache starts empty instead of failing the run.
    pub fn open(path: &Path) -> Self {
        match Self::load(path) {
            Ok(cache) => cache,
            Err(e) => TwistCache {
                path: path.to_path_buf(),
                entries: BTreeMap::new(),
                dirty: false,
                load_warning: Some(e.to_string()),
            },
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The complaint from a tolerant open of a damaged file, if any.
    pub fn load_warning(&self) -> Option<&str> {
        self.load_warning.as_deref()
    }

    /// Replays a stored outcome for this twist, marking it as a hit.
    pub fn get(&self, key: &str, eq: &TwistEquation) -> Option<TwistOutcome> {
        let entry = self.entries.get(key)?;
        let xs = entry
            .x_candidates
            .iter()
            .map(|x| x.parse::<BigInt>().expect("validated at load"))
            .collect();
        let mut diagnostics = entry.diagnostics.clone();
        diagnostics.push("cache hit".into());
        Some(TwistOutcome {
            twist: eq.clone(),
            x_candidates: xs,
            complete: entry.complete,
            backend: entry.backend.clone(),
            diagnostics,
        })
    }

    pub fn put(&mut self, key: &str, outcome: &TwistOutcome) {
        let entry = CacheEntry {
            x_candidates: outcome.x_candidates.iter().map(BigInt::to_string).collect(),
            complete: outcome.complete,
            backend: outcome.backend.clone(),
            diagnostics: outcome.diagnostics.clone(),
        };
        self.entries.insert(key.to_string(), entry);
        self.dirty = true;
    }

    /// Writes the cache back atomically; a no-op when nothing changed.
    pub fn flush(&mut self) -> Result<()> {
        if !self.dirty {
            return Ok(());
        }
        let file = CacheFile {
            version: CACHE_VERSION,
            checksum: checksum_of(&self.entries),
            entries: self.entries.clone(),
        };
        let text = serde_json::to_string_pretty(&file).expect("cache serializes");
        if let Some(parent) = self.path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        let tmp = self.path.with_extension(format!("tmp.{}", std::process::id()));
        std::fs::write(&tmp, text)?;
        std::fs::rename(&tmp, &self.path)?;
        self.dirty = false;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twists::build_binomial_twist;

    fn sample_eq() -> TwistEquation {
        build_binomial_twist(&BigInt::from(1), &BigInt::from(691), 3, &BigInt::from(2)).unwrap()
    }

    fn sample_outcome(eq: &TwistEquation) -> TwistOutcome {
        TwistOutcome {
            twist: eq.clone(),
            x_candidates: vec![BigInt::from(-3), BigInt::from(13)],
            complete: true,
            backend: "external".into(),
            diagnostics: vec!["adapter mock returned 2 points, complete = true".into()],
        }
    }

    #[test]
    fn roundtrip_preserves_everything() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("twists.json");
        let eq = sample_eq();
        let outcome = sample_outcome(&eq);

        let mut cache = TwistCache::load(&path).unwrap();
        assert!(cache.is_empty());
        cache.put("key-1", &outcome);
        cache.flush().unwrap();

        let reloaded = TwistCache::load(&path).unwrap();
        assert_eq!(reloaded.len(), 1);
        let hit = reloaded.get("key-1", &eq).unwrap();
        assert_eq!(hit.x_candidates, outcome.x_candidates);
        assert_eq!(hit.complete, outcome.complete);
        assert_eq!(hit.backend, "external");
        assert!(hit.diagnostics.iter().any(|d| d == "cache hit"));
        assert!(reloaded.get("key-2", &eq).is_none());
    }

    #[test]
    fn incomplete_flag_survives() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("twists.json");
        let eq = sample_eq();
        let mut outcome = sample_outcome(&eq);
        outcome.complete = false;

        let mut cache = TwistCache::load(&path).unwrap();
        cache.put("key", &outcome);
        cache.flush().unwrap();
        let hit = TwistCache::load(&path).unwrap().get("key", &eq).unwrap();
        assert!(!hit.complete);
    }

    #[test]
    fn missing_file_is_an_empty_cache() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("absent.json");
        let cache = TwistCache::load(&path).unwrap();
        assert!(cache.is_empty());
        let cache = TwistCache::open(&path);
        assert!(cache.is_empty());
        assert!(cache.load_warning().is_none());
    }

    #[test]
    fn wrong_version_is_corrupt() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("twists.json");
        std::fs::write(&path, r#"{"version":2,"checksum":"0","entries":{}}"#).unwrap();
        assert!(matches!(
            TwistCache::load(&path),
            Err(Error::CacheCorrupt(_))
        ));
        let cache = TwistCache::open(&path);
        assert!(cache.is_empty());
        assert!(cache.load_warning().unwrap().contains("version"));
    }

    #[test]
    fn tampered_entries_fail_the_checksum() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("twists.json");
        let eq = sample_eq();
        let mut cache = TwistCache::load(&path).unwrap();
        cache.put("key", &sample_outcome(&eq));
        cache.flush().unwrap();

        let text = std::fs::read_to_string(&path).unwrap();
        let tampered = text.replace("\"13\"", "\"14\"");
        assert_ne!(text, tampered);
        std::fs::write(&path, tampered).unwrap();
        match TwistCache::load(&path) {
            Err(Error::CacheCorrupt(msg)) => assert!(msg.contains("checksum")),
            other => panic!("expected corrupt cache, got {other:?}"),
        }
    }

    #[test]
    fn garbage_is_corrupt() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("twists.json");
        std::fs::write(&path, "not json at all").unwrap();
        assert!(matches!(
            TwistCache::load(&path),
            Err(Error::CacheCorrupt(_))
        ));
    }

    #[test]
    fn flush_creates_parent_directories() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/deeper/twists.json");
        let eq = sample_eq();
        let mut cache = TwistCache::load(&path).unwrap();
        cache.put("key", &sample_outcome(&eq));
        cache.flush().unwrap();
        cache.flush().unwrap();
        assert_eq!(TwistCache::load(&path).unwrap().len(), 1);
    }
}
