//! Binary and CSV serialization of fields.
//!
//! Binary layout (little endian): magic `FGFIELD1`, `u32` dimension, per axis
//! `u64` size, `f64` period, `f64` origin, then a `u8` precision flag
//! (0 = complex64, 1 = complex128) followed by the interleaved samples.

use std::io::{Read, Write};

use num_complex::Complex64;

use super::{Field, Grid};
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"FGFIELD1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Complex64,
    Complex128,
}

pub fn write_field(field: &Field, precision: Precision, mut w: impl Write) -> Result<()> {
    let g = field.grid();
    w.write_all(MAGIC)?;
    w.write_all(&(g.dim() as u32).to_le_bytes())?;
    for axis in 0..g.dim() {
        w.write_all(&(g.sizes()[axis] as u64).to_le_bytes())?;
        w.write_all(&g.periods()[axis].to_le_bytes())?;
        w.write_all(&g.origin()[axis].to_le_bytes())?;
    }
    match precision {
        Precision::Complex64 => {
            w.write_all(&[0u8])?;
            for v in field.values() {
                w.write_all(&(v.re as f32).to_le_bytes())?;
                w.write_all(&(v.im as f32).to_le_bytes())?;
            }
        }
        Precision::Complex128 => {
            w.write_all(&[1u8])?;
            for v in field.values() {
                w.write_all(&v.re.to_le_bytes())?;
                w.write_all(&v.im.to_le_bytes())?;
            }
        }
    }
    Ok(())
}

fn take<const N: usize>(r: &mut impl Read) -> Result<[u8; N]> {
    let mut b = [0u8; N];
    r.read_exact(&mut b)?;
    Ok(b)
}

pub fn read_field(mut r: impl Read) -> Result<Field> {
    if &take::<8>(&mut r)? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let dim = u32::from_le_bytes(take(&mut r)?) as usize;
    if !(1..=2).contains(&dim) {
        return Err(Error::Format(format!("dimension {dim}")));
    }
    let mut sizes = Vec::new();
    let mut periods = Vec::new();
    let mut origin = Vec::new();
    for _ in 0..dim {
        sizes.push(u64::from_le_bytes(take(&mut r)?) as usize);
        periods.push(f64::from_le_bytes(take(&mut r)?));
        origin.push(f64::from_le_bytes(take(&mut r)?));
    }
    let grid = Grid::new(sizes, periods, origin)?;
    let flag = take::<1>(&mut r)?[0];
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let v = match flag {
            0 => Complex64::new(
                f32::from_le_bytes(take(&mut r)?) as f64,
                f32::from_le_bytes(take(&mut r)?) as f64,
            ),
            1 => Complex64::new(f64::from_le_bytes(take(&mut r)?), f64::from_le_bytes(take(&mut r)?)),
            other => return Err(Error::Format(format!("precision flag {other}"))),
        };
        values.push(v);
    }
    Field::new(grid, values)
}

/// One line per sample: coordinates, real part, imaginary part.
pub fn write_field_csv(field: &Field, mut w: impl Write) -> Result<()> {
    let g = field.grid();
    if g.dim() == 1 {
        writeln!(w, "x,re,im")?;
    } else {
        writeln!(w, "x,y,re,im")?;
    }
    for (k, v) in field.values().iter().enumerate() {
        let p = g.point(k);
        if g.dim() == 1 {
            writeln!(w, "{:.12e},{:.17e},{:.17e}", p[0], v.re, v.im)?;
        } else {
            writeln!(w, "{:.12e},{:.12e},{:.17e},{:.17e}", p[0], p[1], v.re, v.im)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_round_trip() {
        let g = Grid::centered(vec![8, 16], vec![2.0, 3.0]).unwrap();
        let f = Field::from_fn(&g, |p| Complex64::new(p[0], p[1] * p[0])).unwrap();
        let mut buf = Vec::new();
        write_field(&f, Precision::Complex128, &mut buf).unwrap();
        assert_eq!(read_field(&buf[..]).unwrap(), f);
        buf.clear();
        write_field(&f, Precision::Complex64, &mut buf).unwrap();
        let back = read_field(&buf[..]).unwrap();
        assert!(back.sub(&f).unwrap().max_abs() < 1e-6);
    }

    #[test]
    fn truncated_input_is_an_error() {
        let g = Grid::line(8, 1.0).unwrap();
        let mut buf = Vec::new();
        write_field(&Field::zeros(&g), Precision::Complex128, &mut buf).unwrap();
        assert!(read_field(&buf[..buf.len() - 3]).is_err());
        assert!(read_field(&b"NOTAFILE"[..]).is_err());
    }
}
