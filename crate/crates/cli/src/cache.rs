//! File-backed store for configuration realizations.
//!
//! # Format
//!
//! One JSON file per entry under the cache directory, named
//! `<sha256 of the canonical key>.json`, containing
//!
//! ```json
//! { "key": "<counts>|<bin w>|<bin h>|<gamma>|<seed>",
//!   "placements": [ { "class": 0, "x": "p/q", "y": "p/q" }, ... ] }
//! ```
//!
//! The canonical key comes from `circlepack::configs::cache_key`: the
//! comma-joined count vector and the exact `p/q` bin dimensions, packer
//! height allowance and seed. Entries are re-verified when read, so a
//! corrupt cache can cost time but never correctness.

use circlepack::configs::RealizationCache;
use circlepack::rat::{self, Rat};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::PathBuf;

#[derive(Serialize, Deserialize)]
struct SlotDto {
    class: usize,
    x: String,
    y: String,
}

#[derive(Serialize, Deserialize)]
struct EntryDto {
    key: String,
    placements: Vec<SlotDto>,
}

pub struct FileCache {
    dir: PathBuf,
}

impl FileCache {
    pub fn new(dir: PathBuf) -> std::io::Result<Self> {
        std::fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    fn path(&self, key: &str) -> PathBuf {
        let digest = Sha256::digest(key.as_bytes());
        self.dir.join(format!("{digest:x}.json"))
    }
}

impl RealizationCache for FileCache {
    fn get(&self, key: &str) -> Option<Vec<(usize, Rat, Rat)>> {
        let data = std::fs::read_to_string(self.path(key)).ok()?;
        let entry: EntryDto = serde_json::from_str(&data).ok()?;
        if entry.key != key {
            return None; // hash collision or tampering
        }
        entry
            .placements
            .iter()
            .map(|s| Some((s.class, rat::parse(&s.x).ok()?, rat::parse(&s.y).ok()?)))
            .collect()
    }

    fn put(&self, key: &str, value: &[(usize, Rat, Rat)]) {
        let entry = EntryDto {
            key: key.to_string(),
            placements: value
                .iter()
                .map(|(class, x, y)| SlotDto {
                    class: *class,
                    x: rat::format(x),
                    y: rat::format(y),
                })
                .collect(),
        };
        if let Ok(json) = serde_json::to_string(&entry) {
            let _ = std::fs::write(self.path(key), json);
        }
    }
}
