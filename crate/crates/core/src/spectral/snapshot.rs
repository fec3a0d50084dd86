//! Binary field snapshots.
//!
//! Layout (all integers and floats little-endian):
//!
//! | offset | size          | content                                   |
//! |--------|---------------|-------------------------------------------|
//! | 0      | 8             | magic `FKSNAP01`                          |
//! | 8      | 4 (`u32`)     | spatial dimension `n`                     |
//! | 12     | 4 (`u32`)     | points per axis `N`                       |
//! | 16     | 4 (`u32`)     | scalar width in bytes (4 or 8)            |
//! | 20     | 8 (`f64`)     | torus period                              |
//! | 28     | `2·w·Nⁿ`      | coefficients as `(re, im)` pairs          |
//!
//! Coefficients follow the in-memory storage order: row-major over the wave
//! index with the last axis fastest, FFT ordering per axis (`0..N/2` then
//! `-N/2..-1`). They use the mean normalization of [`SpectralField`].

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex;

use super::field::SpectralField;
use super::grid::Grid;
use crate::{Error, Result, Scalar};

pub const SNAPSHOT_MAGIC: &[u8; 8] = b"FKSNAP01";
const HEADER_LEN: usize = 28;

pub fn encode_snapshot<T: Scalar>(field: &SpectralField<T>) -> Vec<u8> {
    let g = field.grid();
    let mut out = Vec::with_capacity(HEADER_LEN + 2 * T::BYTES * g.len());
    out.extend_from_slice(SNAPSHOT_MAGIC);
    out.extend_from_slice(&(g.dim() as u32).to_le_bytes());
    out.extend_from_slice(&(g.points_per_axis() as u32).to_le_bytes());
    out.extend_from_slice(&(T::BYTES as u32).to_le_bytes());
    out.extend_from_slice(&g.period().to_f64_lossy().to_le_bytes());
    for c in field.coeffs() {
        c.re.to_le_vec(&mut out);
        c.im.to_le_vec(&mut out);
    }
    out
}

pub fn decode_snapshot<T: Scalar>(bytes: &[u8]) -> Result<SpectralField<T>> {
    if bytes.len() < HEADER_LEN || &bytes[..8] != SNAPSHOT_MAGIC {
        return Err(Error::Snapshot("missing magic header".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap()) as usize;
    let dim = u32_at(8);
    let n = u32_at(12);
    let width = u32_at(16);
    let period = f64::from_le_bytes(bytes[20..28].try_into().unwrap());
    if width != T::BYTES {
        return Err(Error::Snapshot(format!(
            "scalar width {width} does not match requested type ({} bytes)",
            T::BYTES
        )));
    }
    let grid = Grid::new(dim, n, T::lit(period))?;
    let expected = HEADER_LEN + 2 * width * grid.len();
    if bytes.len() != expected {
        return Err(Error::Snapshot(format!(
            "expected {expected} bytes, found {}",
            bytes.len()
        )));
    }
    let coeffs = bytes[HEADER_LEN..]
        .chunks_exact(2 * width)
        .map(|pair| Complex::new(T::from_le_slice(&pair[..width]), T::from_le_slice(&pair[width..])))
        .collect();
    SpectralField::from_coeffs(&grid, coeffs)
}

pub fn write_snapshot<T: Scalar>(field: &SpectralField<T>, path: impl AsRef<Path>) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(&encode_snapshot(field))?;
    Ok(())
}

pub fn read_snapshot<T: Scalar>(path: impl AsRef<Path>) -> Result<SpectralField<T>> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    decode_snapshot(&bytes)
}
