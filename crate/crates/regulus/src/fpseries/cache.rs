//! On-disk cache for byte-modulus series.
//!
//! Format (little endian throughout): the magic bytes `QSER`, a one-byte
//! format version (currently 1), the modulus as u64, the truncation length
//! as u64, then exactly that many coefficient bytes. Only byte-storage
//! series (modulus below 256) are cached; word-modulus series are cheap to
//! recompute relative to their size on disk.

use super::FpSeries;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;
use thiserror::Error;

const MAGIC: &[u8; 4] = b"QSER";
const VERSION: u8 = 1;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("not a series cache file (bad magic)")]
    BadMagic,
    #[error("unsupported cache format version {0}")]
    BadVersion(u8),
    #[error("cache file is truncated or has trailing data")]
    Malformed,
    #[error("modulus {0} stored in cache is invalid")]
    BadModulus(u64),
    #[error("only series with modulus below 256 can be cached; got {0}")]
    WordModulus(u64),
}

/// Write a byte-modulus series to `path`.
pub fn write_series(path: &Path, series: &FpSeries) -> Result<(), CacheError> {
    let bytes = series
        .as_bytes()
        .ok_or(CacheError::WordModulus(series.modulus()))?;
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&[VERSION])?;
    w.write_all(&series.modulus().to_le_bytes())?;
    w.write_all(&(bytes.len() as u64).to_le_bytes())?;
    w.write_all(bytes)?;
    w.flush()?;
    Ok(())
}

/// Read a series previously written by [`write_series`].
pub fn read_series(path: &Path) -> Result<FpSeries, CacheError> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    read_exact_or_malformed(&mut r, &mut magic)?;
    if &magic != MAGIC {
        return Err(CacheError::BadMagic);
    }
    let mut version = [0u8; 1];
    read_exact_or_malformed(&mut r, &mut version)?;
    if version[0] != VERSION {
        return Err(CacheError::BadVersion(version[0]));
    }
    let mut word = [0u8; 8];
    read_exact_or_malformed(&mut r, &mut word)?;
    let modulus = u64::from_le_bytes(word);
    if !(2..256).contains(&modulus) {
        return Err(CacheError::BadModulus(modulus));
    }
    read_exact_or_malformed(&mut r, &mut word)?;
    let len = u64::from_le_bytes(word);
    let len = usize::try_from(len).map_err(|_| CacheError::Malformed)?;
    if len == 0 {
        return Err(CacheError::Malformed);
    }
    let mut coeffs = vec![0u8; len];
    read_exact_or_malformed(&mut r, &mut coeffs)?;
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(CacheError::Malformed);
    }
    if coeffs.iter().any(|&c| c as u64 >= modulus) {
        return Err(CacheError::BadModulus(modulus));
    }
    FpSeries::from_fn(modulus, len, |i| coeffs[i] as u64).map_err(|_| CacheError::Malformed)
}

fn read_exact_or_malformed(r: &mut impl Read, buf: &mut [u8]) -> Result<(), CacheError> {
    r.read_exact(buf).map_err(|e| {
        if e.kind() == io::ErrorKind::UnexpectedEof {
            CacheError::Malformed
        } else {
            CacheError::Io(e)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpseries::regular_partition_series;

    #[test]
    fn roundtrip_preserves_series() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("b4.qser");
        let s = regular_partition_series(4, 100, 500).unwrap();
        write_series(&path, &s).unwrap();
        let back = read_series(&path).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.digest_hex(), s.digest_hex());
    }

    #[test]
    fn word_modulus_is_refused() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("big.qser");
        let s = FpSeries::one(1_000_000_007, 4).unwrap();
        assert!(matches!(
            write_series(&path, &s),
            Err(CacheError::WordModulus(1_000_000_007))
        ));
    }

    #[test]
    fn corrupted_files_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("series.qser");
        let s = regular_partition_series(6, 5, 64).unwrap();
        write_series(&path, &s).unwrap();

        let good = std::fs::read(&path).unwrap();

        std::fs::write(&path, &good[..good.len() - 3]).unwrap();
        assert!(matches!(read_series(&path), Err(CacheError::Malformed)));

        let mut bad_magic = good.clone();
        bad_magic[0] = b'X';
        std::fs::write(&path, &bad_magic).unwrap();
        assert!(matches!(read_series(&path), Err(CacheError::BadMagic)));

        let mut bad_version = good.clone();
        bad_version[4] = 9;
        std::fs::write(&path, &bad_version).unwrap();
        assert!(matches!(read_series(&path), Err(CacheError::BadVersion(9))));

        let mut trailing = good.clone();
        trailing.push(0);
        std::fs::write(&path, &trailing).unwrap();
        assert!(matches!(read_series(&path), Err(CacheError::Malformed)));

        let mut out_of_range = good;
        let last = out_of_range.len() - 1;
        out_of_range[last] = 200;
        std::fs::write(&path, &out_of_range).unwrap();
        assert!(matches!(read_series(&path), Err(CacheError::BadModulus(5))));
    }
}
