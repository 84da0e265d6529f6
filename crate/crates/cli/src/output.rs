use std::io::Write;
use std::path::{Path, PathBuf};

use naq_core::HardwareProfile;

use crate::CliError;

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `contents` to a temporary file next to `path`, then renames it
/// into place so readers never see a partial document.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let err = |source: std::io::Error| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(err)?;
    tmp.write_all(contents.as_bytes()).map_err(err)?;
    tmp.flush().map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}

/// A built-in profile name or a path to a profile document.
pub fn load_profile(spec: &str) -> Result<HardwareProfile, CliError> {
    if naq_core::profile::BUILTIN_PROFILES.contains(&spec) {
        return Ok(HardwareProfile::builtin(spec).expect("listed built-in"));
    }
    let path = Path::new(spec);
    let text = read(path)?;
    HardwareProfile::from_json(&text).map_err(|source| CliError::Profile {
        path: path.to_path_buf(),
        source,
    })
}

pub fn to_pretty(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("document serializes");
    s.push('\n');
    s
}

/// Prints `human` (or `document` under `--json`) and writes `document` to
/// `out` when given.
pub fn emit(json: bool, out: Option<&Path>, document: &str, human: &str) -> Result<(), CliError> {
    if let Some(path) = out {
        write_atomic(path, document)?;
    }
    if json {
        print!("{document}");
    } else {
        print!("{human}");
    }
    Ok(())
}
