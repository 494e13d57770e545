//! Golden files for the emitted text of every catalog set at its minimal
//! size. Small sets are stored verbatim; larger ones as a digest and byte
//! count. `DEFRING_UPDATE_GOLDEN=1` rewrites them.

#![allow(dead_code)]

use std::path::PathBuf;

use defring::catalog::{minimal_names, resolve};
use defring::lang::vset_to_sexpr;
use sha2::{Digest, Sha256};

/// Sets with longer text are pinned by digest.
pub const VERBATIM_LIMIT: usize = 128 << 10;

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn file_stem(name: &str) -> String {
    name.replace([':', ','], "_").replace('=', "")
}

/// Exactly what `defring emit --set NAME` prints.
pub fn emitted(name: &str) -> String {
    vset_to_sexpr(&resolve(name).expect("catalog name")) + "\n"
}

fn digest_record(text: &str) -> String {
    let hex: String = Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256 {hex}\nbytes {}\n", text.len())
}

/// Compares one set with its golden file; `Err` describes the mismatch.
pub fn check_golden(name: &str) -> Result<(), String> {
    let text = emitted(name);
    let dir = golden_dir();
    let stem = file_stem(name);
    let (path, want) = if text.len() <= VERBATIM_LIMIT {
        (dir.join(format!("{stem}.sexpr")), text)
    } else {
        (dir.join(format!("{stem}.sha256")), digest_record(&text))
    };
    if std::env::var_os("DEFRING_UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
        std::fs::write(&path, &want).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let have = std::fs::read_to_string(&path).map_err(|e| format!("{name}: {}: {e}", path.display()))?;
    if have != want {
        let at = have.bytes().zip(want.bytes()).position(|(a, b)| a != b).unwrap_or(have.len().min(want.len()));
        return Err(format!("{name}: output differs from {} at byte {at}", path.display()));
    }
    Ok(())
}

/// Mismatches over the whole catalog.
pub fn golden_mismatches() -> Vec<String> {
    minimal_names().iter().filter_map(|n| check_golden(n).err()).collect()
}
