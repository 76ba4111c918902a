//! Field and trace export.
//!
//! CSV files are RFC-4180 (CRLF line endings). The binary field dump is
//! little-endian: magic `FLD1`, version `u32`, cell count `u64`, snapshot
//! count `u64`, domain end points as two `f64`, then all snapshot times, then
//! the cell data snapshot-major. Trace logs are CSV only.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::{CoreError, Result};

use super::{Field1D, Side, TRACE_OFFSETS};

const MAGIC: &[u8; 4] = b"FLD1";
const VERSION: u32 = 1;

/// Writes `(t, x, u)` rows for every snapshot and cell.
pub fn write_field_csv(field: &Field1D, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(b"t,x,u\r\n")?;
    for (n, &t) in field.times().iter().enumerate() {
        let snap = field.snapshot(n);
        for (i, &u) in snap.iter().enumerate() {
            write!(w, "{t},{x},{u}\r\n", x = field.cell_center(i))?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes `(t, side, offset, value)` rows for the near-boundary log.
pub fn write_trace_csv(field: &Field1D, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(b"t,side,offset,value\r\n")?;
    for (n, &t) in field.times().iter().enumerate() {
        for side in [Side::Left, Side::Right] {
            for (j, &rho) in field.trace_offsets().iter().enumerate() {
                let v = field.trace_value(side, n, j);
                write!(w, "{t},{side},{rho},{v}\r\n", side = side.label())?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes the compact binary dump.
pub fn write_field_binary(field: &Field1D, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(field.cells() as u64).to_le_bytes())?;
    w.write_all(&(field.times().len() as u64).to_le_bytes())?;
    let (a, b) = field.domain();
    w.write_all(&a.to_le_bytes())?;
    w.write_all(&b.to_le_bytes())?;
    for &t in field.times() {
        w.write_all(&t.to_le_bytes())?;
    }
    for n in 0..field.times().len() {
        for &u in field.snapshot(n) {
            w.write_all(&u.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a binary dump back into a field (no trace log, no candidate).
pub fn read_field_binary(path: &Path) -> Result<Field1D> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(CoreError::InvalidInput(format!("{}: not a field dump", path.display())));
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4)?;
    let version = u32::from_le_bytes(b4);
    if version != VERSION {
        return Err(CoreError::InvalidInput(format!("unsupported field dump version {version}")));
    }
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let m = u64::from_le_bytes(b8) as usize;
    r.read_exact(&mut b8)?;
    let n = u64::from_le_bytes(b8) as usize;
    let next_f64 = |r: &mut BufReader<File>| -> Result<f64> {
        let mut b = [0u8; 8];
        r.read_exact(&mut b)?;
        Ok(f64::from_le_bytes(b))
    };
    let a = next_f64(&mut r)?;
    let b = next_f64(&mut r)?;
    let mut times = Vec::with_capacity(n);
    for _ in 0..n {
        times.push(next_f64(&mut r)?);
    }
    let mut snapshots = Vec::with_capacity(n);
    for _ in 0..n {
        let mut snap = Vec::with_capacity(m);
        for _ in 0..m {
            snap.push(next_f64(&mut r)?);
        }
        snapshots.push(snap);
    }
    Field1D::from_samples((a, b), m, times, snapshots)
}

/// Sanity range for the offset table when reading external trace CSVs.
pub fn trace_offsets_per_side() -> usize {
    TRACE_OFFSETS
}
