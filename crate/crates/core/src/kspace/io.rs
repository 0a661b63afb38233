//! `CKS1` binary grid format.
//!
//! Layout: magic `CKS1`, little-endian `u32` ny, nx, center_k, center_n,
//! then ny·nx pairs of little-endian `f64` (real, imag), row-major.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::grid::ComplexGrid;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"CKS1";
const HEADER_LEN: usize = 20;

pub fn write_cks1<W: Write>(grid: &ComplexGrid, mut w: W) -> Result<()> {
    w.write_all(MAGIC)?;
    for v in [grid.ny(), grid.nx(), grid.center_k(), grid.center_n()] {
        let v =
            u32::try_from(v).map_err(|_| Error::Format(format!("dimension {v} overflows u32")))?;
        w.write_all(&v.to_le_bytes())?;
    }
    for z in grid.data() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_cks1<R: Read>(mut r: R) -> Result<ComplexGrid> {
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header)
        .map_err(|e| Error::Format(format!("truncated header: {e}")))?;
    if &header[..4] != MAGIC {
        return Err(Error::Format("bad magic, expected CKS1".into()));
    }
    let field = |i: usize| {
        let b: [u8; 4] = header[4 + 4 * i..8 + 4 * i].try_into().unwrap();
        u32::from_le_bytes(b) as usize
    };
    let (ny, nx, ck, cn) = (field(0), field(1), field(2), field(3));
    let count = ny
        .checked_mul(nx)
        .ok_or_else(|| Error::Format("grid size overflow".into()))?;
    let mut payload = Vec::new();
    r.read_to_end(&mut payload)?;
    if payload.len() != count * 16 {
        return Err(Error::Format(format!(
            "expected {} payload bytes, found {}",
            count * 16,
            payload.len()
        )));
    }
    let data = payload
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect();
    ComplexGrid::new(ny, nx, ck, cn, data).map_err(|e| Error::Format(e.to_string()))
}

pub fn to_bytes(grid: &ComplexGrid) -> Vec<u8> {
    let mut buf = Vec::with_capacity(HEADER_LEN + grid.data().len() * 16);
    write_cks1(grid, &mut buf).expect("writing to memory");
    buf
}

pub fn from_bytes(bytes: &[u8]) -> Result<ComplexGrid> {
    read_cks1(bytes)
}

pub fn save(grid: &ComplexGrid, path: impl AsRef<Path>) -> Result<()> {
    let f = File::create(path)?;
    write_cks1(grid, BufWriter::new(f))
}

pub fn load(path: impl AsRef<Path>) -> Result<ComplexGrid> {
    let f = File::open(path)?;
    read_cks1(BufReader::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn header_layout() {
        let g = ComplexGrid::new(2, 3, 1, 2, vec![Complex64::new(1.5, -2.0); 6]).unwrap();
        let b = to_bytes(&g);
        assert_eq!(&b[..4], b"CKS1");
        assert_eq!(&b[4..8], &2u32.to_le_bytes());
        assert_eq!(&b[8..12], &3u32.to_le_bytes());
        assert_eq!(&b[12..16], &1u32.to_le_bytes());
        assert_eq!(&b[16..20], &2u32.to_le_bytes());
        assert_eq!(&b[20..28], &1.5f64.to_le_bytes());
        assert_eq!(&b[28..36], &(-2.0f64).to_le_bytes());
        assert_eq!(b.len(), 20 + 6 * 16);
    }

    #[test]
    fn rejects_corrupt_input() {
        let g = ComplexGrid::zeros(2, 2);
        let mut b = to_bytes(&g);
        assert!(from_bytes(&b[..10]).is_err());
        assert!(from_bytes(&b[..b.len() - 1]).is_err());
        b[0] = b'X';
        assert!(from_bytes(&b).is_err());
        let mut bad_center = to_bytes(&g);
        bad_center[12..16].copy_from_slice(&9u32.to_le_bytes());
        assert!(from_bytes(&bad_center).is_err());
    }

    proptest! {
        #[test]
        fn byte_exact_round_trip(
            ny in 1usize..6, nx in 1usize..6,
            bits in proptest::collection::vec(any::<u64>(), 72),
        ) {
            let data: Vec<Complex64> = (0..ny * nx)
                .map(|i| Complex64::new(f64::from_bits(bits[2 * i]), f64::from_bits(bits[2 * i + 1])))
                .collect();
            let g = ComplexGrid::new(ny, nx, ny / 2, nx / 2, data).unwrap();
            let bytes = to_bytes(&g);
            let back = from_bytes(&bytes).unwrap();
            prop_assert_eq!(to_bytes(&back), bytes);
        }
    }
}
