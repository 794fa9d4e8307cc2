//! On-disk cache of reduced relation systems, one JSON file per (space, weight).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{GenId, RelationSystem, Space};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational};

pub const FORMAT_VERSION: u32 = 1;
pub const CACHE_DIR_ENV: &str = "FDES_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format_version: u32,
    space: Space,
    weight: u32,
    basis: Vec<GenId>,
    rows: Vec<Vec<(usize, String)>>,
}

/// Explicit directory, else `$FDES_CACHE_DIR`, else `$XDG_CACHE_HOME/fdes`, else `~/.cache/fdes`.
pub fn resolve_cache_dir(explicit: Option<&Path>) -> PathBuf {
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    if let Some(p) = std::env::var_os(CACHE_DIR_ENV).filter(|v| !v.is_empty()) {
        return PathBuf::from(p);
    }
    if let Some(p) = std::env::var_os("XDG_CACHE_HOME").filter(|v| !v.is_empty()) {
        return PathBuf::from(p).join("fdes");
    }
    let home = std::env::var_os("HOME").map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    home.join(".cache").join("fdes")
}

fn file_name(space: Space, weight: u32) -> String {
    let tag = match space {
        Space::Eisenstein => "E",
        Space::Zeta => "D",
    };
    format!("{tag}{weight:03}.json")
}

#[derive(Clone, Debug)]
pub struct RelationCache {
    dir: PathBuf,
}

/// One cached system as reported by [`RelationCache::status`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CacheEntry {
    pub space: Space,
    pub weight: u32,
    pub bytes: u64,
}

impl RelationCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        RelationCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, space: Space, weight: u32) -> PathBuf {
        self.dir.join(file_name(space, weight))
    }

    /// Reads a cached system; `Ok(None)` if absent, an error if present but unusable.
    pub fn load(&self, space: Space, weight: u32) -> Result<Option<RelationSystem>> {
        let path = self.path(space, weight);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let file: CacheFile = serde_json::from_str(&text)?;
        if file.format_version != FORMAT_VERSION {
            return Err(Error::Cache(format!("{}: format version {} unsupported", path.display(), file.format_version)));
        }
        if file.space != space || file.weight != weight {
            return Err(Error::Cache(format!("{}: does not hold {space} weight {weight}", path.display())));
        }
        let mut rows = Vec::with_capacity(file.rows.len());
        for row in file.rows {
            let mut parsed = Vec::with_capacity(row.len());
            for (c, v) in row {
                parsed.push((c, parse_rational(&v)?));
            }
            rows.push(parsed);
        }
        let sys = RelationSystem::from_reduced(space, weight, rows)?;
        if sys.basis() != file.basis.as_slice() {
            return Err(Error::Cache(format!("{}: basis does not match", path.display())));
        }
        Ok(Some(sys))
    }

    /// Writes atomically: a temporary file in the same directory is renamed into place.
    pub fn store(&self, sys: &RelationSystem) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let file = CacheFile {
            format_version: FORMAT_VERSION,
            space: sys.space(),
            weight: sys.weight(),
            basis: sys.basis().to_vec(),
            rows: sys
                .rref()
                .rows()
                .iter()
                .map(|r| r.iter().map(|(c, v)| (*c, format_rational(v))).collect())
                .collect(),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, &file)?;
        tmp.flush()?;
        tmp.persist(self.path(sys.space(), sys.weight())).map_err(|e| Error::Io(e.error))?;
        Ok(())
    }

    /// Cached system if present and valid, otherwise builds and stores it.
    pub fn get_or_build(&self, space: Space, weight: u32) -> Result<RelationSystem> {
        if let Ok(Some(sys)) = self.load(space, weight) {
            return Ok(sys);
        }
        let sys = RelationSystem::build(space, weight)?;
        self.store(&sys)?;
        Ok(sys)
    }

    pub fn status(&self) -> Result<Vec<CacheEntry>> {
        let mut out = Vec::new();
        let entries = match fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(e.into()),
        };
        for entry in entries {
            let entry = entry?;
            let name = entry.file_name().to_string_lossy().into_owned();
            if let Some((space, weight)) = parse_file_name(&name) {
                out.push(CacheEntry { space, weight, bytes: entry.metadata()?.len() });
            }
        }
        out.sort_by_key(|e| (e.space, e.weight));
        Ok(out)
    }

    /// Removes cached systems; returns how many files were deleted.
    pub fn clear(&self) -> Result<usize> {
        let entries = self.status()?;
        for e in &entries {
            fs::remove_file(self.path(e.space, e.weight))?;
        }
        Ok(entries.len())
    }
}

fn parse_file_name(name: &str) -> Option<(Space, u32)> {
    let stem = name.strip_suffix(".json")?;
    let (space, digits) = match stem.split_at_checked(1)? {
        ("E", d) => (Space::Eisenstein, d),
        ("D", d) => (Space::Zeta, d),
        _ => return None,
    };
    if digits.len() != 3 || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some((space, digits.parse().ok()?))
}
