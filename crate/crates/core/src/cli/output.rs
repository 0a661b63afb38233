//! Atomic file output with provenance sidecars.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use kspace_extrap::kspace::{io, ComplexGrid, RealImage};

use super::error::{CliError, CliResult};

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Write `bytes` to a temporary file next to `path`, then rename it over
/// `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(path, e))?;
    tmp.write_all(bytes).map_err(|e| io_err(path, e))?;
    tmp.as_file().sync_all().map_err(|e| io_err(path, e))?;
    tmp.persist(path).map_err(|e| io_err(path, e.error))?;
    Ok(())
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

/// Output writer for one command run: every file gets a `.meta` sidecar
/// holding the command name and the effective settings.
pub struct Outputs {
    command: &'static str,
    settings: BTreeMap<String, String>,
}

impl Outputs {
    pub fn new(command: &'static str, settings: BTreeMap<String, String>) -> Self {
        Self { command, settings }
    }

    fn meta(&self, role: &str) -> String {
        let mut s = format!(
            "tool = {} {}\ncommand = {}\nrole = {role}\n",
            env!("CARGO_PKG_NAME"),
            env!("CARGO_PKG_VERSION"),
            self.command
        );
        for (k, v) in &self.settings {
            s.push_str(&format!("{k} = {v}\n"));
        }
        s
    }

    pub fn write(&self, path: &Path, role: &str, bytes: &[u8]) -> CliResult<()> {
        write_atomic(path, bytes)?;
        write_atomic(&sidecar_path(path), self.meta(role).as_bytes())
    }

    pub fn grid(&self, path: &Path, role: &str, grid: &ComplexGrid) -> CliResult<()> {
        self.write(path, role, &io::to_bytes(grid))
    }

    pub fn image(&self, path: &Path, role: &str, image: &RealImage) -> CliResult<()> {
        self.grid(path, role, &ComplexGrid::from_real(image))
    }
}

pub fn read_grid(path: &Path) -> CliResult<ComplexGrid> {
    let bytes = std::fs::read(path).map_err(|e| io_err(path, e))?;
    io::from_bytes(&bytes).map_err(|e| io_err(path, e))
}

pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_and_leaves_no_temp() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn sidecar_lists_settings() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.cks");
        let mut s = BTreeMap::new();
        s.insert("q".to_string(), "10".to_string());
        Outputs::new("mask", s)
            .write(&p, "partial", b"data")
            .unwrap();
        let meta = std::fs::read_to_string(sidecar_path(&p)).unwrap();
        assert!(meta.contains("command = mask\n"));
        assert!(meta.contains("q = 10\n"));
    }

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_num(12.5), "1.2500000000000000e1");
    }
}
