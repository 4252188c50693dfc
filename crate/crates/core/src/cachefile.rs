//! Binary persistence for cube-sum caches.
//!
//! Layout: a 20-byte header (magic "C3CB", version u32 LE, limit u64 LE,
//! flags u32 LE with bit 0 marking counts), then ceil(X/8) membership
//! bytes (bit j of byte i is integer 8i + j + 1), then, when present,
//! X little-endian u32 representation counts. Files are byte-identical
//! across runs and thread counts; reloads go through a memory map.

use std::io::Write;
use std::path::Path;

use crate::cubes::CubeCache;
use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"C3CB";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CacheFileHeader {
    pub version: u32,
    pub limit: u64,
    pub counts_present: bool,
}

impl CacheFileHeader {
    pub fn to_bytes(self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[..4].copy_from_slice(&MAGIC);
        out[4..8].copy_from_slice(&self.version.to_le_bytes());
        out[8..16].copy_from_slice(&self.limit.to_le_bytes());
        let flags: u32 = if self.counts_present { 1 } else { 0 };
        out[16..20].copy_from_slice(&flags.to_le_bytes());
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<CacheFileHeader> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::Io("cache file shorter than its header".into()));
        }
        if bytes[..4] != MAGIC {
            return Err(Error::Io("bad cache magic".into()));
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        if version != VERSION {
            return Err(Error::Io(format!("unsupported cache version {version}")));
        }
        let limit = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
        let flags = u32::from_le_bytes(bytes[16..20].try_into().unwrap());
        Ok(CacheFileHeader {
            version,
            limit,
            counts_present: flags & 1 == 1,
        })
    }

    fn membership_len(&self) -> usize {
        (self.limit as usize).div_ceil(8)
    }

    fn expected_file_len(&self) -> usize {
        HEADER_LEN
            + self.membership_len()
            + if self.counts_present {
                4 * self.limit as usize
            } else {
                0
            }
    }
}

/// Write a cache to disk in the versioned binary format.
pub fn write_cache(cache: &CubeCache, path: &Path) -> Result<()> {
    let header = CacheFileHeader {
        version: VERSION,
        limit: cache.limit(),
        counts_present: cache.has_counts(),
    };
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    file.write_all(&header.to_bytes())?;
    let mem_len = header.membership_len();
    let mut written = 0usize;
    for word in cache.membership_words() {
        let bytes = word.to_le_bytes();
        let take = bytes.len().min(mem_len - written);
        file.write_all(&bytes[..take])?;
        written += take;
        if written == mem_len {
            break;
        }
    }
    debug_assert_eq!(written, mem_len);
    if let Some(counts) = cache.counts_slice() {
        for &c in counts {
            file.write_all(&c.to_le_bytes())?;
        }
    }
    file.flush()?;
    Ok(())
}

/// A cache opened read-only through a memory map; queries read the
/// mapped bytes directly.
pub struct MappedCubeCache {
    map: memmap2::Mmap,
    header: CacheFileHeader,
}

impl MappedCubeCache {
    pub fn open(path: &Path) -> Result<MappedCubeCache> {
        let file = std::fs::File::open(path)?;
        // read-only map of an immutable cache file
        let map = unsafe { memmap2::Mmap::map(&file) }?;
        let header = CacheFileHeader::parse(&map)?;
        if map.len() != header.expected_file_len() {
            return Err(Error::Io(format!(
                "cache file length {} does not match header ({} expected)",
                map.len(),
                header.expected_file_len()
            )));
        }
        Ok(MappedCubeCache { map, header })
    }

    pub fn limit(&self) -> u64 {
        self.header.limit
    }

    pub fn has_counts(&self) -> bool {
        self.header.counts_present
    }

    pub fn contains(&self, n: u64) -> bool {
        if n == 0 || n > self.header.limit {
            return false;
        }
        let idx = (n - 1) as usize;
        self.map[HEADER_LEN + (idx >> 3)] >> (idx & 7) & 1 == 1
    }

    pub fn r3(&self, n: u64) -> Option<u32> {
        if !self.header.counts_present {
            return None;
        }
        if n == 0 || n > self.header.limit {
            return Some(0);
        }
        let base = HEADER_LEN + self.header.membership_len() + 4 * (n as usize - 1);
        Some(u32::from_le_bytes(
            self.map[base..base + 4].try_into().unwrap(),
        ))
    }

    /// Materialize an owned cache from the map.
    pub fn to_cache(&self) -> CubeCache {
        let limit = self.header.limit;
        let words = (limit as usize).div_ceil(64).max(1);
        let mem = &self.map[HEADER_LEN..HEADER_LEN + self.header.membership_len()];
        let mut membership = vec![0u64; words];
        for (i, chunk) in mem.chunks(8).enumerate() {
            let mut bytes = [0u8; 8];
            bytes[..chunk.len()].copy_from_slice(chunk);
            membership[i] = u64::from_le_bytes(bytes);
        }
        let counts = self.header.counts_present.then(|| {
            let base = HEADER_LEN + self.header.membership_len();
            (0..limit as usize)
                .map(|i| {
                    u32::from_le_bytes(self.map[base + 4 * i..base + 4 * i + 4].try_into().unwrap())
                })
                .collect()
        });
        CubeCache::from_raw(limit, membership, counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_twenty_bytes() {
        let h = CacheFileHeader {
            version: VERSION,
            limit: 12345,
            counts_present: true,
        };
        let bytes = h.to_bytes();
        assert_eq!(bytes.len(), 20);
        assert_eq!(CacheFileHeader::parse(&bytes).unwrap(), h);
    }

    #[test]
    fn round_trip_with_counts() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.bin");
        let cache = CubeCache::build(5000, true).unwrap();
        write_cache(&cache, &path).unwrap();
        let mapped = MappedCubeCache::open(&path).unwrap();
        assert_eq!(mapped.limit(), 5000);
        assert!(mapped.has_counts());
        for n in 1..=5000u64 {
            assert_eq!(mapped.contains(n), cache.contains(n), "n = {n}");
            assert_eq!(mapped.r3(n), cache.r3(n), "n = {n}");
        }
        let owned = mapped.to_cache();
        for n in 1..=5000u64 {
            assert_eq!(owned.contains(n), cache.contains(n));
            assert_eq!(owned.r3(n), cache.r3(n));
        }
    }

    #[test]
    fn files_byte_identical_across_builds() {
        let dir = tempfile::tempdir().unwrap();
        let p1 = dir.path().join("a.bin");
        let p2 = dir.path().join("b.bin");
        // two separately built caches, one under a single-thread pool
        let c1 = CubeCache::build(20_000, true).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c2 = pool.install(|| CubeCache::build(20_000, true).unwrap());
        write_cache(&c1, &p1).unwrap();
        write_cache(&c2, &p2).unwrap();
        let b1 = std::fs::read(&p1).unwrap();
        let b2 = std::fs::read(&p2).unwrap();
        assert_eq!(b1, b2);
        assert_eq!(b1.len(), 20 + 20_000usize.div_ceil(8) + 4 * 20_000);
    }

    #[test]
    fn rejects_bad_magic_and_truncation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.bin");
        std::fs::write(&path, b"XXXX0000000000000000").unwrap();
        assert!(MappedCubeCache::open(&path).is_err());
        let cache = CubeCache::build(100, false).unwrap();
        write_cache(&cache, &path).unwrap();
        let full = std::fs::read(&path).unwrap();
        std::fs::write(&path, &full[..full.len() - 3]).unwrap();
        assert!(MappedCubeCache::open(&path).is_err());
    }
}
