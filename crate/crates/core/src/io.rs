//! File formats: a flat little-endian binary dump of [`SampledFunction`]s,
//! CSV tables, and fixed-precision number formatting for reports.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid, SampledFunction, SpaceTag};

const HEADER_LEN: usize = 4 + 8 + 8 + 1;

/// Rounds to 12 significant digits so that reports are stable across
/// platforms and summation-order noise in the last bits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// `round_sig` rendered with the shortest round-trip representation.
pub fn fmt_num(x: f64) -> String {
    format!("{}", round_sig(x))
}

/// Header `(dim: u32, N: u64, R: f64, tag: u8)`, then interleaved `re, im`.
pub fn to_bytes(f: &SampledFunction) -> Vec<u8> {
    let g = f.grid();
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * f.values().len());
    out.extend_from_slice(&(g.dim() as u32).to_le_bytes());
    out.extend_from_slice(&(g.points_per_axis() as u64).to_le_bytes());
    out.extend_from_slice(&g.half_extent().to_le_bytes());
    out.push(f.space().to_byte());
    for v in f.values() {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
    out
}

pub fn from_bytes(bytes: &[u8]) -> Result<SampledFunction> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format(format!(
            "{} bytes is shorter than the header",
            bytes.len()
        )));
    }
    let dim = u32::from_le_bytes(bytes[0..4].try_into().unwrap()) as usize;
    let n = u64::from_le_bytes(bytes[4..12].try_into().unwrap()) as usize;
    let r = f64::from_le_bytes(bytes[12..20].try_into().unwrap());
    let tag = SpaceTag::from_byte(bytes[20])
        .ok_or_else(|| Error::Format(format!("unknown space tag {}", bytes[20])))?;
    let grid = Grid::new(dim, n, r)?;
    let body = &bytes[HEADER_LEN..];
    if body.len() != 16 * grid.len() {
        return Err(Error::Format(format!(
            "expected {} sample bytes, found {}",
            16 * grid.len(),
            body.len()
        )));
    }
    let values = body
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[0..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..16].try_into().unwrap()),
            )
        })
        .collect();
    SampledFunction::new(grid, values, tag)
}

pub fn write_binary(f: &SampledFunction, path: &Path) -> Result<()> {
    fs::write(path, to_bytes(f))?;
    Ok(())
}

pub fn read_binary(path: &Path) -> Result<SampledFunction> {
    from_bytes(&fs::read(path)?)
}

/// CSV with one row per node: coordinates, then `re,im`.
pub fn to_csv(f: &SampledFunction) -> String {
    let g = f.grid();
    let var = match f.space() {
        SpaceTag::Position => "x",
        SpaceTag::Frequency => "u",
    };
    let mut s = String::new();
    if g.dim() == 1 {
        s.push_str(var);
    } else {
        let cols: Vec<String> = (1..=g.dim()).map(|i| format!("{var}{i}")).collect();
        s.push_str(&cols.join(","));
    }
    s.push_str(",re,im\n");
    let mut p = [0.0; 3];
    for (k, v) in f.values().iter().enumerate() {
        g.point(k, &mut p);
        for c in &p[..g.dim()] {
            let _ = write!(s, "{},", fmt_num(*c));
        }
        let _ = writeln!(s, "{},{}", fmt_num(v.re), fmt_num(v.im));
    }
    s
}

pub fn write_csv(f: &SampledFunction, path: &Path) -> Result<()> {
    fs::write(path, to_csv(f))?;
    Ok(())
}

/// Writes a two-or-more column numeric table.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut file = fs::File::create(path)?;
    writeln!(file, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| fmt_num(*v)).collect();
        writeln!(file, "{}", cells.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_round_trip() {
        let g = Grid::new(2, 8, 1.5).unwrap();
        let f = SampledFunction::from_fn(g, SpaceTag::Frequency, |u| {
            Complex64::new(u[0], -u[1] * 0.1)
        })
        .unwrap();
        let bytes = to_bytes(&f);
        assert_eq!(bytes.len(), 21 + 16 * 64);
        assert_eq!(&bytes[0..4], &2u32.to_le_bytes());
        assert_eq!(bytes[20], 1);
        assert_eq!(from_bytes(&bytes).unwrap(), f);
        assert!(from_bytes(&bytes[..100]).is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid::new(1, 16, 2.0).unwrap();
        let f = SampledFunction::from_real_fn(g, SpaceTag::Position, |x| x[0] * x[0]).unwrap();
        let path = dir.path().join("f.bin");
        write_binary(&f, &path).unwrap();
        assert_eq!(read_binary(&path).unwrap(), f);
    }

    #[test]
    fn csv_layout() {
        let g = Grid::new(2, 8, 1.0).unwrap();
        let f = SampledFunction::zeros(g, SpaceTag::Position);
        let csv = to_csv(&f);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("x1,x2,re,im"));
        assert_eq!(lines.next(), Some("-1,-1,0,0"));
        assert_eq!(csv.lines().count(), 65);
    }

    #[test]
    fn rounding() {
        assert_eq!(fmt_num(0.1 + 0.2), "0.3");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(round_sig(0.0), 0.0);
    }
}
