//! File-backed cache for power sums: one JSON file per key under the
//! cache directory, with an embedded key echo and a checksum. Corrupt or
//! mismatched entries are ignored and recomputed. Writes go through a
//! temporary file and an atomic rename.

use lnp_core::cyclotomic::CyclotomicNumber;
use lnp_core::lfunction::{SumCache, SumKey};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

pub struct FileSumCache {
    dir: PathBuf,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    canonical_f: String,
    p: u64,
    q_degree: u32,
    k: u32,
    value: CyclotomicNumber,
    checksum: String,
}

fn key_string(key: &SumKey) -> String {
    format!(
        "f={};p={};a={};k={}",
        key.canonical_f, key.p, key.q_degree, key.k
    )
}

fn sha_hex(data: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(data);
    format!("{:x}", h.finalize())
}

fn value_checksum(value: &CyclotomicNumber) -> String {
    sha_hex(serde_json::to_string(value).expect("cyclotomic serializes").as_bytes())
}

impl FileSumCache {
    pub fn new(dir: impl AsRef<Path>) -> std::io::Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(FileSumCache { dir: dir.as_ref().to_path_buf() })
    }

    fn path_for(&self, key: &SumKey) -> PathBuf {
        self.dir.join(format!("{}.json", sha_hex(key_string(key).as_bytes())))
    }
}

impl SumCache for FileSumCache {
    fn get(&self, key: &SumKey) -> Option<CyclotomicNumber> {
        let path = self.path_for(key);
        let data = fs::read_to_string(&path).ok()?;
        let entry: Entry = match serde_json::from_str(&data) {
            Ok(e) => e,
            Err(_) => {
                eprintln!(
                    "warning: unreadable cache entry {} ignored; recomputing",
                    path.display()
                );
                return None;
            }
        };
        let echo_matches = entry.canonical_f == key.canonical_f
            && entry.p == key.p
            && entry.q_degree == key.q_degree
            && entry.k == key.k;
        if !echo_matches || entry.checksum != value_checksum(&entry.value) {
            eprintln!(
                "warning: cache entry {} failed verification; recomputing",
                path.display()
            );
            return None;
        }
        Some(entry.value)
    }

    fn put(&self, key: &SumKey, value: &CyclotomicNumber) {
        let entry = Entry {
            canonical_f: key.canonical_f.clone(),
            p: key.p,
            q_degree: key.q_degree,
            k: key.k,
            value: value.clone(),
            checksum: value_checksum(value),
        };
        let path = self.path_for(key);
        let tmp = path.with_extension("tmp");
        let body = match serde_json::to_vec_pretty(&entry) {
            Ok(b) => b,
            Err(e) => {
                eprintln!("warning: cache serialization failed: {e}");
                return;
            }
        };
        if let Err(e) = fs::write(&tmp, &body).and_then(|_| fs::rename(&tmp, &path)) {
            eprintln!("warning: cache write to {} failed: {e}", path.display());
        }
    }
}
