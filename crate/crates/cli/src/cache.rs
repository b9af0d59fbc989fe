//! On-disk cache of tree enumerations.
//!
//! One file per leaf count, `trees-n<n>.slk`. The first line is the header
//! `SLK1 n=<n>`; every further line is a canonical tree string, sorted by
//! internal vertex count and then canonically. A file that fails the header,
//! a parse, or the completeness check is ignored and rewritten.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use slk_core::forest::{check_tree_levels, enumerate_all_trees, Tree};

#[derive(Clone, Debug)]
pub struct TreeCache {
    dir: Option<PathBuf>,
}

/// How a lookup was answered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheEvent {
    Disabled,
    Hit,
    Miss,
    /// The file existed but was rejected.
    Rejected,
}

impl TreeCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        TreeCache { dir }
    }

    pub fn disabled() -> Self {
        TreeCache { dir: None }
    }

    pub fn path_for(&self, n: u32) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("trees-n{n}.slk")))
    }

    /// Trees on `n` leaves grouped by internal vertex count, from the cache
    /// when it holds a valid copy.
    pub fn trees(&self, n: u32) -> (Vec<Vec<Tree>>, CacheEvent) {
        let Some(path) = self.path_for(n) else {
            return (enumerate_all_trees(n), CacheEvent::Disabled);
        };
        let event = match fs::read_to_string(&path) {
            Ok(text) => match decode(n, &text) {
                Some(levels) => return (levels, CacheEvent::Hit),
                None => CacheEvent::Rejected,
            },
            Err(_) => CacheEvent::Miss,
        };
        let levels = enumerate_all_trees(n);
        if let Err(e) = write_atomic(&path, &encode(n, &levels)) {
            eprintln!("slk: cache: could not write {}: {e}", path.display());
        }
        (levels, event)
    }
}

pub fn header(n: u32) -> String {
    format!("SLK1 n={n}")
}

pub fn encode(n: u32, levels: &[Vec<Tree>]) -> String {
    let mut out = header(n);
    out.push('\n');
    for t in levels.iter().flatten() {
        out.push_str(&t.to_string());
        out.push('\n');
    }
    out
}

/// Parses a cache file, returning `None` unless it is a complete and
/// correctly ordered listing for `n`.
pub fn decode(n: u32, text: &str) -> Option<Vec<Vec<Tree>>> {
    let mut lines = text.lines();
    if lines.next()? != header(n) {
        return None;
    }
    let mut levels = vec![Vec::new(); (n as usize).checked_sub(1)?];
    for line in lines {
        let t: Tree = line.parse().ok()?;
        if t.leaves() != n {
            return None;
        }
        levels.get_mut(t.internal_vertices().checked_sub(1)?)?.push(t);
    }
    check_tree_levels(n, &levels).ok()?;
    Some(levels)
}

/// Writes through a temporary file in the same directory and renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
