//! On-disk cache of decomposition columns.
//!
//! Each column (p, f, s, μ) is stored as `<sha256>.json` where the hash is taken over the
//! canonical key string, which includes the format version. Files are written to a
//! temporary name and renamed into place, and existing files are never rewritten.

use super::decompose;
use crate::error::{Error, Result};
use crate::weights::{Character, SerreWeight, Weyl};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub format_version: u32,
    pub p: u64,
    pub f: usize,
    pub s: Weyl,
    pub mu: Character,
    pub weights: Vec<SerreWeight>,
}

pub fn key_string(p: u64, s: &Weyl, mu: &Character) -> String {
    format!("v{FORMAT_VERSION}|p={p}|f={}|s={s}|mu={mu}", mu.f())
}

pub fn key_hash(p: u64, s: &Weyl, mu: &Character) -> String {
    let d = Sha256::digest(key_string(p, s, mu).as_bytes());
    d.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, Default)]
pub struct Cache {
    pub dir: Option<PathBuf>,
    memo: Arc<Mutex<HashMap<String, Vec<SerreWeight>>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub checked: usize,
    /// keys whose decomposition was recomputed
    pub recomputed: Vec<String>,
    pub bad: Vec<String>,
}

/// Which stored columns `verify` recomputes from scratch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recompute {
    None,
    All,
    /// one column, chosen by a seeded generator
    One(u64),
}

fn io(e: std::io::Error) -> Error {
    Error::Cache(e.to_string())
}

impl Cache {
    /// A cache rooted at `dir`; `None` disables persistence.
    pub fn new(dir: Option<PathBuf>) -> Cache {
        Cache { dir, memo: Arc::default() }
    }

    fn path(&self, p: u64, s: &Weyl, mu: &Character) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{}.json", key_hash(p, s, mu))))
    }

    pub fn get(&self, p: u64, s: &Weyl, mu: &Character) -> Result<Option<Column>> {
        let Some(path) = self.path(p, s, mu) else { return Ok(None) };
        match fs::read_to_string(&path) {
            Ok(txt) => {
                let c: Column = serde_json::from_str(&txt).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
                if c.format_version != FORMAT_VERSION || c.p != p || &c.s != s || &c.mu != mu {
                    return Err(Error::Cache(format!("{} does not match its key", path.display())));
                }
                Ok(Some(c))
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(io(e)),
        }
    }

    fn put(&self, c: &Column) -> Result<()> {
        let Some(path) = self.path(c.p, &c.s, &c.mu) else { return Ok(()) };
        if path.exists() {
            return Ok(());
        }
        let dir = path.parent().unwrap();
        fs::create_dir_all(dir).map_err(io)?;
        let tmp = dir.join(format!(".{}.{}.tmp", path.file_name().unwrap().to_string_lossy(), std::process::id()));
        let txt = serde_json::to_string_pretty(c).map_err(|e| Error::Cache(e.to_string()))?;
        fs::write(&tmp, txt).map_err(io)?;
        if path.exists() {
            let _ = fs::remove_file(&tmp);
            return Ok(());
        }
        fs::rename(&tmp, &path).map_err(io)
    }

    /// Cached decomposition of R_s(μ - sη), computing and storing it on a miss.
    pub fn decompose(&self, p: u64, s: &Weyl, mu: &Character) -> Result<Vec<SerreWeight>> {
        let key = key_string(p, s, mu);
        if let Some(w) = self.memo.lock().unwrap().get(&key) {
            return Ok(w.clone());
        }
        let weights = match self.get(p, s, mu)? {
            Some(c) => c.weights,
            None => {
                let weights = decompose(p, s, mu)?;
                let col = Column { format_version: FORMAT_VERSION, p, f: mu.f(), s: s.clone(), mu: mu.clone(), weights };
                self.put(&col)?;
                col.weights
            }
        };
        self.memo.lock().unwrap().insert(key, weights.clone());
        Ok(weights)
    }

    fn entries(&self) -> Result<Vec<(PathBuf, Result<Column>)>> {
        let Some(dir) = &self.dir else { return Ok(vec![]) };
        if !dir.exists() {
            return Ok(vec![]);
        }
        let mut out = vec![];
        for e in fs::read_dir(dir).map_err(io)? {
            let path = e.map_err(io)?.path();
            if path.extension().and_then(|x| x.to_str()) != Some("json") {
                continue;
            }
            let c = fs::read_to_string(&path)
                .map_err(io)
                .and_then(|t| serde_json::from_str::<Column>(&t).map_err(|e| Error::Cache(e.to_string())));
            out.push((path, c));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    pub fn list(&self) -> Result<Vec<Column>> {
        Ok(self.entries()?.into_iter().filter_map(|(_, c)| c.ok()).collect())
    }

    /// Check every file: parseable and stored under its own key hash. The columns selected by
    /// `recompute` are also compared with a fresh decomposition.
    pub fn verify(&self, recompute: Recompute) -> Result<VerifyReport> {
        use rand::{Rng, SeedableRng};
        let entries = self.entries()?;
        let chosen = match recompute {
            Recompute::One(seed) if !entries.is_empty() => {
                Some(rand_chacha::ChaCha8Rng::seed_from_u64(seed).gen_range(0..entries.len()))
            }
            _ => None,
        };
        let (mut bad, mut recomputed) = (vec![], vec![]);
        for (k, (path, c)) in entries.iter().enumerate() {
            let name = path.file_stem().unwrap().to_string_lossy().to_string();
            match c {
                Err(e) => bad.push(format!("{name}: {e}")),
                Ok(c) => {
                    if c.format_version != FORMAT_VERSION || key_hash(c.p, &c.s, &c.mu) != name {
                        bad.push(format!("{name}: key mismatch"));
                    } else if recompute == Recompute::All || chosen == Some(k) {
                        recomputed.push(name.clone());
                        if decompose(c.p, &c.s, &c.mu).ok().as_ref() != Some(&c.weights) {
                            bad.push(format!("{name}: stored decomposition differs"));
                        }
                    }
                }
            }
        }
        Ok(VerifyReport { checked: entries.len(), recomputed, bad })
    }

    pub fn purge(&self) -> Result<usize> {
        self.memo.lock().unwrap().clear();
        let entries = self.entries()?;
        for (path, _) in &entries {
            fs::remove_file(path).map_err(io)?;
        }
        Ok(entries.len())
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }
}

/// Decomposition matrix restricted to a list of tame types.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionTable {
    pub p: u64,
    pub f: usize,
    pub columns: Vec<(Weyl, Character)>,
    pub rows: Vec<SerreWeight>,
    /// entries[row][column]
    pub entries: Vec<Vec<u32>>,
}

impl DecompositionTable {
    pub fn build(cache: &Cache, p: u64, f: usize, types: &[(Weyl, Character)]) -> Result<Self> {
        let mut cols: Vec<Vec<SerreWeight>> = vec![];
        for (s, mu) in types {
            if mu.f() != f {
                return Err(Error::Param("type of the wrong degree".into()));
            }
            cols.push(cache.decompose(p, s, mu)?);
        }
        let mut rows: BTreeMap<SerreWeight, Vec<u32>> = BTreeMap::new();
        for (j, c) in cols.iter().enumerate() {
            for w in c {
                rows.entry(w.clone()).or_insert_with(|| vec![0; cols.len()])[j] += 1;
            }
        }
        let (rows, entries) = rows.into_iter().unzip();
        Ok(DecompositionTable { p, f, columns: types.to_vec(), rows, entries })
    }
}
