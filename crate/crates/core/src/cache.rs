//! On-disk memoization of S-matrices, keyed by `(n, k)`.
//!
//! Layout of `s_n{n}_k{k}.v1.bin`: the magic `TQFTSMAT`, a little-endian
//! `u32` format version, `n` and `k` as `u32`, the entry count as `u64`, then
//! every entry as a little-endian `(re, im)` pair of `f64`.

use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::s_matrix::{SLimits, SMatrix};

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "TQFT_SMATRIX_CACHE";
pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &[u8; 8] = b"TQFTSMAT";
const HEADER_LEN: usize = 8 + 4 + 4 + 4 + 8;

pub fn cache_file(dir: &Path, n: usize, k: u32) -> PathBuf {
    dir.join(format!("s_n{n}_k{k}.v{FORMAT_VERSION}.bin"))
}

pub fn encode(s: &SMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * s.entries().len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(s.n() as u32).to_le_bytes());
    out.extend_from_slice(&s.k().to_le_bytes());
    out.extend_from_slice(&(s.entries().len() as u64).to_le_bytes());
    for z in s.entries() {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    out
}

fn u32_at(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes"))
}

fn f64_at(bytes: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"))
}

/// Decodes a cache record, checking magic, version, key and length.
pub fn decode(bytes: &[u8], n: usize, k: u32) -> Result<SMatrix> {
    let bad = |why: &str| Error::InvalidInput(format!("S-matrix cache record for n={n}, k={k}: {why}"));
    if bytes.len() < HEADER_LEN || &bytes[..8] != MAGIC {
        return Err(bad("bad magic"));
    }
    if u32_at(bytes, 8) != FORMAT_VERSION {
        return Err(bad("unsupported format version"));
    }
    if u32_at(bytes, 12) as usize != n || u32_at(bytes, 16) != k {
        return Err(bad("key mismatch"));
    }
    let len = u64::from_le_bytes(bytes[20..28].try_into().expect("8 bytes")) as usize;
    if bytes.len() != HEADER_LEN + 16 * len {
        return Err(bad("truncated"));
    }
    let entries = (0..len)
        .map(|i| {
            let at = HEADER_LEN + 16 * i;
            Complex64::new(f64_at(bytes, at), f64_at(bytes, at + 8))
        })
        .collect();
    SMatrix::from_entries(n, k, entries)
}

/// Reads `(n, k)` from `dir`, computing and storing it on a miss. Unreadable
/// or stale records are recomputed and replaced.
pub fn load_or_compute_in(dir: &Path, n: usize, k: u32, limits: &SLimits) -> Result<SMatrix> {
    let path = cache_file(dir, n, k);
    if let Ok(bytes) = std::fs::read(&path) {
        if let Ok(s) = decode(&bytes, n, k) {
            return Ok(s);
        }
    }
    let s = SMatrix::with_limits(n, k, limits)?;
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(&encode(&s))?;
    tmp.persist(&path).map_err(|e| Error::Io(e.error))?;
    Ok(s)
}

/// Uses the directory named by [`CACHE_ENV`] when set, otherwise computes.
pub fn load_or_compute(n: usize, k: u32, limits: &SLimits) -> Result<SMatrix> {
    match std::env::var_os(CACHE_ENV) {
        Some(dir) if !dir.is_empty() => load_or_compute_in(Path::new(&dir), n, k, limits),
        _ => SMatrix::with_limits(n, k, limits),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let s = SMatrix::new(3, 4).unwrap();
        let back = decode(&encode(&s), 3, 4).unwrap();
        assert_eq!(back.labels(), s.labels());
        assert!(back
            .entries()
            .iter()
            .zip(s.entries())
            .all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()));
    }

    #[test]
    fn rejects_bad_records() {
        let s = SMatrix::new(2, 3).unwrap();
        let bytes = encode(&s);
        assert!(decode(&bytes, 2, 4).is_err());
        assert!(decode(&bytes[..bytes.len() - 1], 2, 3).is_err());
        let mut wrong = bytes.clone();
        wrong[8] = 9;
        assert!(decode(&wrong, 2, 3).is_err());
        assert!(decode(b"nonsense", 2, 3).is_err());
    }

    #[test]
    fn directory_cache_hits_and_repairs() {
        let dir = tempfile::tempdir().unwrap();
        let limits = SLimits::default();
        let a = load_or_compute_in(dir.path(), 2, 5, &limits).unwrap();
        let path = cache_file(dir.path(), 2, 5);
        assert!(path.exists());
        let b = load_or_compute_in(dir.path(), 2, 5, &limits).unwrap();
        assert_eq!(a.entries(), b.entries());
        std::fs::write(&path, b"garbage").unwrap();
        let c = load_or_compute_in(dir.path(), 2, 5, &limits).unwrap();
        assert_eq!(a.entries(), c.entries());
        assert!(decode(&std::fs::read(&path).unwrap(), 2, 5).is_ok());
    }
}
