//! Binary cache for enumerated groups.
//!
//! Layout, all integers little-endian: magic `QRBG`, `u32` version, `u32` d, `u32` n,
//! `u64` cardinality, then for each element the `(2n)^2` matrix entries (row-major)
//! followed by the `2n` phases, each as `u32`.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::group::CliffordGroupTable;
use super::tableau::CliffordTableau;
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"QRBG";
const VERSION: u32 = 1;

pub fn encode_group(table: &CliffordGroupTable) -> Vec<u8> {
    let m = 2 * table.num_qudits();
    let mut out = Vec::with_capacity(24 + table.len() * (m * m + m) * 4);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&table.d().to_le_bytes());
    out.extend_from_slice(&(table.num_qudits() as u32).to_le_bytes());
    out.extend_from_slice(&(table.len() as u64).to_le_bytes());
    for t in table.elements() {
        for &v in t.matrix().iter().chain(t.phases()) {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

pub fn decode_group(bytes: &[u8]) -> Result<CliffordGroupTable> {
    let bad = |msg: &str| Error::CacheFormat(msg.to_string());
    if bytes.len() < 24 || &bytes[0..4] != MAGIC {
        return Err(bad("missing QRBG header"));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().expect("4 bytes"));
    let version = u32_at(4);
    if version != VERSION {
        return Err(Error::CacheFormat(format!("unsupported version {version}")));
    }
    let d = u32_at(8);
    let n = u32_at(12) as usize;
    let count = u64::from_le_bytes(bytes[16..24].try_into().expect("8 bytes")) as usize;
    let m = 2 * n;
    let words = m * m + m;
    if n == 0 || bytes.len() != 24 + count * words * 4 {
        return Err(Error::CacheFormat(format!(
            "body has {} bytes, expected {} for {count} elements",
            bytes.len() - 24,
            count * words * 4
        )));
    }
    let elements = (0..count)
        .map(|i| {
            let base = 24 + i * words * 4;
            let vals: Vec<u32> = (0..words).map(|w| u32_at(base + 4 * w)).collect();
            let (matrix, phases) = vals.split_at(m * m);
            CliffordTableau::from_parts(d, n, matrix.to_vec(), phases.to_vec())
        })
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::CacheFormat(e.to_string()))?;
    CliffordGroupTable::from_elements(d, n, elements).map_err(|e| Error::CacheFormat(e.to_string()))
}

pub fn write_group_cache(table: &CliffordGroupTable, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    w.write_all(&encode_group(table))?;
    w.flush()?;
    Ok(())
}

pub fn read_group_cache(path: &Path) -> Result<CliffordGroupTable> {
    decode_group(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::enumerate_group;

    #[test]
    fn round_trip_is_bit_exact() {
        let g = enumerate_group(3, 1).unwrap();
        let bytes = encode_group(&g);
        assert_eq!(bytes.len(), 24 + 216 * 6 * 4);
        let back = decode_group(&bytes).unwrap();
        assert_eq!(back.elements(), g.elements());
        assert_eq!(encode_group(&back), bytes);
    }

    #[test]
    fn rejects_corruption() {
        let g = enumerate_group(2, 1).unwrap();
        let mut bytes = encode_group(&g);
        assert!(decode_group(&bytes[..bytes.len() - 1]).is_err());
        bytes[0] = b'X';
        assert!(decode_group(&bytes).is_err());
        let mut dup = encode_group(&g);
        let w = 6 * 4;
        let (head, tail) = dup.split_at_mut(24 + w);
        tail[..w].copy_from_slice(&head[24..24 + w]);
        assert!(matches!(decode_group(&dup), Err(Error::CacheFormat(_))));
    }
}
