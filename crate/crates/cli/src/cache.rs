//! On-disk store of built matrices, keyed by `(rank, n, format version)`.
//!
//! Each entry is a triples file, its JSON sidecar, and a SHA-256 over both.
//! Builds resume from the largest cached size below the request.

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use omega_core::matrix::{Sidecar, SparseIntMatrix};
use omega_core::rank2::{build_o2, build_o2_from, build_v, VBlock};
use omega_core::rank3::{base_o3_4, build_o3_from};
use sha2::{Digest, Sha256};

/// Bumped whenever the on-disk layout or column order changes.
pub const FORMAT_VERSION: u32 = 1;

/// Message prefix for integrity failures.
pub const CHECKSUM_MISMATCH: &str = "checksum mismatch";

#[derive(Clone, Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
}

struct Entry {
    triples: PathBuf,
    sidecar: PathBuf,
    checksum: PathBuf,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn digest(triples: &[u8], sidecar: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(triples);
    h.update(sidecar);
    hex(&h.finalize())
}

/// Triples bytes and sidecar bytes exactly as stored.
pub fn serialize(m: &SparseIntMatrix) -> Result<(Vec<u8>, Vec<u8>)> {
    let mut triples = Vec::new();
    m.write_triples(&mut triples)?;
    let mut sidecar = serde_json::to_vec_pretty(&m.sidecar())?;
    sidecar.push(b'\n');
    Ok((triples, sidecar))
}

/// SHA-256 of a matrix's serialized form, as lowercase hex.
pub fn fingerprint(m: &SparseIntMatrix) -> Result<String> {
    let (t, s) = serialize(m)?;
    Ok(digest(&t, &s))
}

impl Cache {
    /// No persistence; every request builds from scratch.
    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: Some(dir.into()) }
    }

    /// `OMEGA_CACHE_DIR`, else `$HOME/.cache/omega`, else disabled.
    pub fn from_env() -> Self {
        if let Some(d) = std::env::var_os("OMEGA_CACHE_DIR") {
            return Cache::at(d);
        }
        match std::env::var_os("HOME") {
            Some(h) => Cache::at(Path::new(&h).join(".cache").join("omega")),
            None => Cache::disabled(),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn entry(&self, rank: usize, n: usize) -> Option<Entry> {
        let dir = self.dir.as_ref()?;
        let stem = format!("o{rank}-{n}-v{FORMAT_VERSION}");
        Some(Entry {
            triples: dir.join(format!("{stem}.triples")),
            sidecar: dir.join(format!("{stem}.sidecar.json")),
            checksum: dir.join(format!("{stem}.sha256")),
        })
    }

    /// Path of the cached triples file for `(rank, n)`, present or not.
    pub fn triples_path(&self, rank: usize, n: usize) -> Option<PathBuf> {
        self.entry(rank, n).map(|e| e.triples)
    }

    /// The cached matrix, `None` if absent, an error if present but corrupt.
    pub fn load(&self, rank: usize, n: usize) -> Result<Option<SparseIntMatrix>> {
        let Some(e) = self.entry(rank, n) else { return Ok(None) };
        if !e.checksum.exists() {
            return Ok(None);
        }
        let expected = fs::read_to_string(&e.checksum)?;
        let triples = fs::read(&e.triples).with_context(|| format!("reading {}", e.triples.display()))?;
        let sidecar = fs::read(&e.sidecar).with_context(|| format!("reading {}", e.sidecar.display()))?;
        let actual = digest(&triples, &sidecar);
        if actual != expected.trim() {
            bail!("{CHECKSUM_MISMATCH} for cached O({rank},{n}) in {}", e.triples.display());
        }
        let side: Sidecar = serde_json::from_slice(&sidecar)?;
        let m = SparseIntMatrix::read_triples(BufReader::new(&triples[..]), side)
            .map_err(|err| anyhow!("cached O({rank},{n}) unreadable: {err}"))?;
        Ok(Some(m))
    }

    /// Writes `m` under its key. Silently does nothing when disabled.
    pub fn store(&self, m: &SparseIntMatrix) -> Result<()> {
        let Some(e) = self.entry(m.rank(), m.n()) else { return Ok(()) };
        let dir = self.dir.as_ref().expect("entry implies a directory");
        fs::create_dir_all(dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
        let (t, s) = serialize(m)?;
        fs::write(&e.triples, &t)?;
        fs::write(&e.sidecar, &s)?;
        // checksum last, so a partial write reads as a miss
        fs::write(&e.checksum, digest(&t, &s) + "\n")?;
        Ok(())
    }

    /// `O_{rank,n}`, from the cache or by extending the largest cached smaller matrix.
    pub fn matrix(&self, rank: usize, n: usize) -> Result<SparseIntMatrix> {
        crate::check_range(rank, n)?;
        if let Some(m) = self.load(rank, n)? {
            return Ok(m);
        }
        let mut k = n - 1;
        let mut m = loop {
            if k < 4 {
                break base(rank)?;
            }
            if let Some(m) = self.load(rank, k)? {
                break m;
            }
            k -= 1;
        };
        while m.n() < n {
            m = self.step(&m)?;
            log::info!("built O({rank},{}) with {} columns", m.n(), m.ncols());
            self.store(&m)?;
        }
        Ok(m)
    }

    fn step(&self, prev: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        let k = prev.n();
        let next = match prev.rank() {
            2 => {
                let v = if k >= 4 { build_v(k)? } else { VBlock { n: 3, columns: vec![], profiles: vec![] } };
                build_o2_from(prev, &v)?.0
            }
            // rank 3 starts at O(3,4), so k >= 4 here
            _ => build_o3_from(prev, &self.matrix(2, k)?)?,
        };
        Ok(next)
    }
}

/// The matrix the recursion starts from: `O_{2,3}` or `O_{3,4}`.
fn base(rank: usize) -> Result<SparseIntMatrix> {
    Ok(match rank {
        2 => build_o2(3)?,
        _ => base_o3_4(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn temp_dir(tag: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("omega-cache-unit-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&d);
        d
    }

    #[test]
    fn round_trip_and_resume() {
        let dir = temp_dir("resume");
        let cache = Cache::at(&dir);
        let cold = Cache::disabled().matrix(2, 7).unwrap();
        let warm = cache.matrix(2, 7).unwrap();
        assert_eq!(fingerprint(&cold).unwrap(), fingerprint(&warm).unwrap());
        assert!(cache.load(2, 5).unwrap().is_some());
        let again = cache.matrix(2, 8).unwrap();
        assert_eq!(fingerprint(&again).unwrap(), fingerprint(&build_o2(8).unwrap()).unwrap());
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn corruption_is_detected() {
        let dir = temp_dir("corrupt");
        let cache = Cache::at(&dir);
        cache.matrix(2, 5).unwrap();
        let path = cache.triples_path(2, 5).unwrap();
        let mut bytes = fs::read(&path).unwrap();
        let last = bytes.len() - 2;
        bytes[last] = if bytes[last] == b'1' { b'2' } else { b'1' };
        fs::write(&path, bytes).unwrap();
        let err = cache.matrix(2, 5).unwrap_err().to_string();
        assert!(err.contains(CHECKSUM_MISMATCH), "{err}");
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn hex_encoding() {
        assert_eq!(hex(&[0, 15, 255]), "000fff");
    }
}
