use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

/// Files produced by one command, written together once everything has been
/// computed. If any write fails the files already written are removed.
#[derive(Debug, Default)]
pub struct OutputSet {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl OutputSet {
    pub fn add(&mut self, path: PathBuf, contents: impl Into<Vec<u8>>) {
        self.files.push((path, contents.into()));
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.files.iter().map(|(p, _)| p.as_path())
    }

    pub fn commit(self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut written = Vec::with_capacity(self.files.len());
        for (path, bytes) in self.files {
            if let Err(e) = std::fs::write(&path, &bytes) {
                for p in &written {
                    let _ = std::fs::remove_file(p);
                }
                return Err(e).with_context(|| format!("writing {}", path.display()));
            }
            log::info!("wrote {}", path.display());
            written.push(path);
        }
        Ok(written)
    }
}
