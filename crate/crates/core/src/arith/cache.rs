//! On-disk sieve cache.
//!
//! Layout (all little-endian): a 16-byte header (magic `PMSV`, format
//! version `u32`, limit `u64`), followed by `limit + 1` entries each of
//! μ (`i8`), spf (`u32`) and Λ (`f64`), in that order.

use std::fs;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use super::sieve::{build_sieve, SieveTable};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"PMSV";
pub const VERSION: u32 = 1;
pub const CACHE_ENV: &str = "POWMOD_SIEVE_CACHE";

pub fn write_sieve(path: &Path, t: &SieveTable) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&t.limit().to_le_bytes())?;
    let mu: Vec<u8> = t.mu_slice().iter().map(|&m| m as u8).collect();
    w.write_all(&mu)?;
    for &s in t.spf_slice() {
        w.write_all(&s.to_le_bytes())?;
    }
    for &l in t.lambda_slice() {
        w.write_all(&l.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sieve(path: &Path) -> Result<SieveTable> {
    let mut r = BufReader::new(fs::File::open(path)?);
    let mut header = [0u8; 16];
    r.read_exact(&mut header)?;
    if &header[0..4] != MAGIC {
        return Err(Error::Format("bad sieve cache magic".into()));
    }
    let version = u32::from_le_bytes(header[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(Error::Format(format!("unsupported sieve cache version {version}")));
    }
    let limit = u64::from_le_bytes(header[8..16].try_into().unwrap());
    let len = usize::try_from(limit)
        .ok()
        .and_then(|l| l.checked_add(1))
        .ok_or_else(|| Error::Format("sieve cache limit too large".into()))?;

    let mut raw = vec![0u8; len];
    r.read_exact(&mut raw)?;
    let mu = raw.into_iter().map(|b| b as i8).collect();

    let mut raw = vec![0u8; len * 4];
    r.read_exact(&mut raw)?;
    let spf = raw.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect();

    let mut raw = vec![0u8; len * 8];
    r.read_exact(&mut raw)?;
    let lambda = raw.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();

    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(Error::Format("trailing bytes in sieve cache".into()));
    }
    SieveTable::from_parts(limit, mu, lambda, spf)
}

pub fn cache_path(dir: &Path, limit: u64) -> PathBuf {
    dir.join(format!("sieve-{limit}.pmsv"))
}

/// Builds a sieve, reading from and writing to `$POWMOD_SIEVE_CACHE` when set.
/// An unreadable cache file is rebuilt and overwritten.
pub fn cached_sieve(limit: u64) -> Result<SieveTable> {
    match std::env::var_os(CACHE_ENV) {
        Some(dir) => cached_sieve_in(Path::new(&dir), limit),
        None => build_sieve(limit),
    }
}

pub fn cached_sieve_in(dir: &Path, limit: u64) -> Result<SieveTable> {
    let path = cache_path(dir, limit);
    if let Ok(t) = read_sieve(&path) {
        if t.limit() == limit {
            return Ok(t);
        }
    }
    let t = build_sieve(limit)?;
    fs::create_dir_all(dir)?;
    write_sieve(&path, &t)?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("powmod-cache-{}-{name}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn header_layout() {
        let dir = tmp("header");
        let t = build_sieve(10).unwrap();
        let path = dir.join("s.pmsv");
        write_sieve(&path, &t).unwrap();
        let bytes = fs::read(&path).unwrap();
        assert_eq!(&bytes[0..4], b"PMSV");
        assert_eq!(&bytes[4..8], &[1, 0, 0, 0]);
        assert_eq!(&bytes[8..16], &10u64.to_le_bytes());
        assert_eq!(bytes.len(), 16 + 11 * (1 + 4 + 8));
        // μ(2) = −1 stored as 0xff
        assert_eq!(bytes[16 + 2], 0xff);
        assert_eq!(read_sieve(&path).unwrap(), t);
    }

    #[test]
    fn rejects_corruption() {
        let dir = tmp("corrupt");
        let t = build_sieve(50).unwrap();
        let path = dir.join("s.pmsv");
        write_sieve(&path, &t).unwrap();
        let mut bytes = fs::read(&path).unwrap();
        bytes[0] = b'X';
        fs::write(&path, &bytes).unwrap();
        assert!(matches!(read_sieve(&path), Err(Error::Format(_))));
        bytes[0] = b'P';
        bytes.pop();
        fs::write(&path, &bytes).unwrap();
        assert!(read_sieve(&path).is_err());
    }

    #[test]
    fn cache_round_trip_through_directory() {
        let dir = tmp("dir");
        let a = cached_sieve_in(&dir, 1000).unwrap();
        assert!(cache_path(&dir, 1000).exists());
        let b = cached_sieve_in(&dir, 1000).unwrap();
        assert_eq!(a, b);
    }
}
