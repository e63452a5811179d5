//! Binary matrix-field files.
//!
//! Layout, all little-endian:
//!
//! | offset | size | content                                   |
//! |--------|------|-------------------------------------------|
//! | 0      | 4    | magic `GMF1`                              |
//! | 4      | 4    | `u32` grid resolution `G`                 |
//! | 8      | 4    | `u32` matrix rows                         |
//! | 12     | 4    | `u32` matrix columns                      |
//! | 16     | ...  | `G*G*rows*cols` pairs `(f64 re, f64 im)`  |
//!
//! Values are ordered `[iy][ix][row][col]`, where cell `(ix, iy)` has centre
//! `(-R + (ix + 1/2) h, -R + (iy + 1/2) h)` and `h = 2R / G`.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::grid::MatrixField;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"GMF1";

pub fn write_field<W: Write>(mut out: W, resolution: usize, field: &MatrixField) -> Result<()> {
    if field.cells() != resolution * resolution {
        return Err(Error::ShapeMismatch(
            "field does not match the grid resolution".into(),
        ));
    }
    let header =
        |v: usize| u32::try_from(v).map_err(|_| Error::Invalid(format!("dimension {v} too large")));
    out.write_all(MAGIC)?;
    for v in [resolution, field.rows(), field.cols()] {
        out.write_all(&header(v)?.to_le_bytes())?;
    }
    let mut buf = Vec::with_capacity(field.data().len() * 16);
    for v in field.data() {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

/// Reads a field, returning the grid resolution recorded in its header.
pub fn read_field<R: Read>(mut input: R) -> Result<(usize, MatrixField)> {
    let mut head = [0u8; 16];
    input
        .read_exact(&mut head)
        .map_err(|e| Error::Invalid(format!("truncated field header: {e}")))?;
    if &head[0..4] != MAGIC {
        return Err(Error::Invalid("not a matrix-field file (bad magic)".into()));
    }
    let word =
        |i: usize| u32::from_le_bytes(head[i..i + 4].try_into().expect("four bytes")) as usize;
    let (g, rows, cols) = (word(4), word(8), word(12));
    let count = g
        .checked_mul(g)
        .and_then(|c| c.checked_mul(rows))
        .and_then(|c| c.checked_mul(cols))
        .ok_or_else(|| Error::Invalid("field dimensions overflow".into()))?;
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    if bytes.len() != count * 16 {
        return Err(Error::Invalid(format!(
            "field body has {} bytes, header implies {}",
            bytes.len(),
            count * 16
        )));
    }
    let f = |c: &[u8]| f64::from_le_bytes(c.try_into().expect("eight bytes"));
    let data = bytes
        .chunks_exact(16)
        .map(|c| Complex64::new(f(&c[..8]), f(&c[8..])))
        .collect();
    Ok((g, MatrixField::from_data(g * g, rows, cols, data)?))
}

pub fn save_field(path: &Path, resolution: usize, field: &MatrixField) -> Result<()> {
    let file =
        std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    write_field(std::io::BufWriter::new(file), resolution, field)
}

pub fn load_field(path: &Path) -> Result<(usize, MatrixField)> {
    let file =
        std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_field(std::io::BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_bit_exact() {
        let field = MatrixField::from_fn(16, 1, 2, |c, _, j| Complex64::new(c as f64, -(j as f64)));
        let mut bytes = Vec::new();
        write_field(&mut bytes, 4, &field).unwrap();
        assert_eq!(&bytes[..4], b"GMF1");
        assert_eq!(&bytes[4..16], &[4, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0]);
        assert_eq!(bytes.len(), 16 + 16 * 2 * 16);
        // cell 1, column 1: re = 1.0, im = -1.0
        let at = 16 + 16 * 3;
        assert_eq!(&bytes[at..at + 8], &1.0f64.to_le_bytes());
        assert_eq!(&bytes[at + 8..at + 16], &(-1.0f64).to_le_bytes());
        let (g, back) = read_field(&bytes[..]).unwrap();
        assert_eq!((g, back), (4, field));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(read_field(&b"XXXX"[..]).is_err());
        let mut bytes = Vec::new();
        write_field(&mut bytes, 4, &MatrixField::zeros(16, 1, 1)).unwrap();
        bytes.pop();
        assert!(matches!(read_field(&bytes[..]), Err(Error::Invalid(_))));
    }
}
