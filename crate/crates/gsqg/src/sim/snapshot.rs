//! Flat binary grid snapshots: an 8-byte header (u32 LE grid size n,
//! u32 LE reserved zero) followed by n² f64 LE values in row-major
//! (ix·n + iy) order. Box length and time are run metadata, not stored.

use std::fs;
use std::path::Path;

use super::ScalarField;
use crate::error::{Error, Result};

pub fn write_snapshot(field: &ScalarField, path: impl AsRef<Path>) -> Result<()> {
    let mut buf = Vec::with_capacity(8 + 8 * field.values.len());
    buf.extend_from_slice(&(field.n as u32).to_le_bytes());
    buf.extend_from_slice(&0_u32.to_le_bytes());
    for v in &field.values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, buf)?;
    Ok(())
}

/// Read a snapshot back onto a box of the given side length (time 0).
pub fn read_snapshot(path: impl AsRef<Path>, box_length: f64) -> Result<ScalarField> {
    let path = path.as_ref();
    let bytes = fs::read(path)?;
    if bytes.len() < 8 {
        return Err(Error::Io(format!("snapshot {}: truncated header", path.display())));
    }
    let n = u32::from_le_bytes(bytes[0..4].try_into().unwrap()) as usize;
    if n < 8 || n > (1 << 16) || !n.is_power_of_two() {
        return Err(Error::Io(format!(
            "snapshot {}: implausible grid size {n}",
            path.display()
        )));
    }
    let expect = 8 + 8 * n * n;
    if bytes.len() != expect {
        return Err(Error::Io(format!(
            "snapshot {}: {} bytes, expected {expect} for n = {n}",
            path.display(),
            bytes.len()
        )));
    }
    let values: Vec<f64> = bytes[8..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    ScalarField::new(n, box_length, values, 0.0)
}
