//! On-disk document cache. Entries are whole documents keyed by kind,
//! level and parameters; a stale or unreadable entry is recomputed.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

use crate::document::{OutputDocument, Provenance, SCHEMA_VERSION};

pub struct Cache {
    dir: PathBuf,
}

pub enum Lookup {
    Hit(OutputDocument),
    Miss,
    /// Present but unusable; the reason goes to stderr.
    Stale(String),
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn lookup(&self, key: &str, expected: &Provenance) -> Lookup {
        let path = self.path(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Lookup::Miss,
            Err(e) => return Lookup::Stale(format!("cannot read {}: {e}", path.display())),
        };
        match serde_json::from_str::<OutputDocument>(&text) {
            Err(e) => Lookup::Stale(format!("corrupt cache entry {}: {e}", path.display())),
            Ok(doc) if doc.schema_version != SCHEMA_VERSION => Lookup::Stale(format!(
                "cache entry {} has schema {}",
                path.display(),
                doc.schema_version
            )),
            Ok(doc) if doc.provenance != *expected => Lookup::Stale(format!(
                "cache entry {} was written with different provenance",
                path.display()
            )),
            Ok(doc) => Lookup::Hit(doc),
        }
    }

    pub fn store(&self, key: &str, doc: &OutputDocument) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        write_atomic(&self.path(key), doc.to_json().as_bytes())
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
