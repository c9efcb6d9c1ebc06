//! Uniform centered grids and the sampled-function carrier.
//!
//! A [`Grid`] samples the cube `[-R, R)^d` with `N` points per axis; node `j`
//! on an axis sits at `(j - N/2) * h` with `h = 2R / N`, so the origin is the
//! node with index `N/2`. Flattened indices are row-major: the last axis
//! varies fastest.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the total number of grid points (`N^d`).
pub const DEFAULT_MAX_POINTS: usize = 1 << 24;

/// Environment variable overriding [`DEFAULT_MAX_POINTS`] for the CLI.
pub const MAX_POINTS_ENV: &str = "FIOLAB_MAX_POINTS";

/// Reads the point budget from [`MAX_POINTS_ENV`], falling back to the default.
pub fn max_points_from_env() -> usize {
    std::env::var(MAX_POINTS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(DEFAULT_MAX_POINTS)
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    points_per_axis: usize,
    half_extent: f64,
}

impl Grid {
    pub fn new(dim: usize, points_per_axis: usize, half_extent: f64) -> Result<Grid> {
        Grid::with_budget(dim, points_per_axis, half_extent, DEFAULT_MAX_POINTS)
    }

    pub fn with_budget(
        dim: usize,
        points_per_axis: usize,
        half_extent: f64,
        max_points: usize,
    ) -> Result<Grid> {
        if !(1..=3).contains(&dim) {
            return Err(Error::BadDimension(dim));
        }
        if points_per_axis < 8 || !points_per_axis.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(points_per_axis));
        }
        if !(half_extent.is_finite() && half_extent > 0.0) {
            return Err(Error::BadExtent(half_extent));
        }
        let points = points_per_axis
            .checked_pow(dim as u32)
            .ok_or(Error::MemoryBudget {
                points: usize::MAX,
                budget: max_points,
            })?;
        if points > max_points {
            return Err(Error::MemoryBudget {
                points,
                budget: max_points,
            });
        }
        Ok(Grid {
            dim,
            points_per_axis,
            half_extent,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn half_extent(&self) -> f64 {
        self.half_extent
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_extent / self.points_per_axis as f64
    }

    /// `h^d`, the Riemann-sum weight of one node.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate of axis index `i`.
    #[inline]
    pub fn coordinate(&self, i: usize) -> f64 {
        (i as f64 - (self.points_per_axis / 2) as f64) * self.spacing()
    }

    /// All axis coordinates in index order.
    pub fn axis(&self) -> Vec<f64> {
        (0..self.points_per_axis)
            .map(|i| self.coordinate(i))
            .collect()
    }

    /// Writes the coordinates of flat index `flat` into `out` (length `dim`).
    pub fn point(&self, flat: usize, out: &mut [f64]) {
        let n = self.points_per_axis;
        let mut rest = flat;
        for axis in (0..self.dim).rev() {
            out[axis] = self.coordinate(rest % n);
            rest /= n;
        }
    }

    /// Splits a flat index into per-axis indices.
    pub fn unflatten(&self, flat: usize) -> [usize; 3] {
        let n = self.points_per_axis;
        let mut idx = [0usize; 3];
        let mut rest = flat;
        for axis in (0..self.dim).rev() {
            idx[axis] = rest % n;
            rest /= n;
        }
        idx
    }

    pub fn flatten(&self, idx: &[usize]) -> usize {
        idx[..self.dim]
            .iter()
            .fold(0, |acc, &i| acc * self.points_per_axis + i)
    }

    /// The frequency grid paired with this one by the discrete transform:
    /// spacing `1/(2R)`, half extent `N/(4R)`.
    /// The frequency grid of the centered DFT. `dual` is an involution up to
    /// rounding of the half extent, which grid equality tolerates.
    pub fn dual(&self) -> Grid {
        Grid {
            dim: self.dim,
            points_per_axis: self.points_per_axis,
            half_extent: self.points_per_axis as f64 / (4.0 * self.half_extent),
        }
    }

    /// Continuous axis position of `coord` in units of nodes (may be fractional
    /// or out of range).
    #[inline]
    pub fn fractional_index(&self, coord: f64) -> f64 {
        coord / self.spacing() + (self.points_per_axis / 2) as f64
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Grid) -> bool {
        self.dim == other.dim
            && self.points_per_axis == other.points_per_axis
            && (self.half_extent - other.half_extent).abs()
                <= 4.0 * f64::EPSILON * self.half_extent.max(other.half_extent)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceTag {
    Position,
    Frequency,
}

impl SpaceTag {
    pub fn to_byte(self) -> u8 {
        match self {
            SpaceTag::Position => 0,
            SpaceTag::Frequency => 1,
        }
    }

    pub fn from_byte(b: u8) -> Option<SpaceTag> {
        match b {
            0 => Some(SpaceTag::Position),
            1 => Some(SpaceTag::Frequency),
            _ => None,
        }
    }
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceTag::Position => f.write_str("position"),
            SpaceTag::Frequency => f.write_str("frequency"),
        }
    }
}

/// Complex samples on a [`Grid`], tagged with the variable they live in.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    grid: Grid,
    values: Vec<Complex64>,
    space: SpaceTag,
}

impl SampledFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>, space: SpaceTag) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        if values
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::NonFinite("sampled function".into()));
        }
        Ok(SampledFunction {
            grid,
            values,
            space,
        })
    }

    /// Construction without the finiteness scan, for values produced by
    /// operations on already-validated inputs.
    pub(crate) fn from_parts(grid: Grid, values: Vec<Complex64>, space: SpaceTag) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        SampledFunction {
            grid,
            values,
            space,
        }
    }

    pub fn zeros(grid: Grid, space: SpaceTag) -> Self {
        SampledFunction::from_parts(grid, vec![Complex64::new(0.0, 0.0); grid.len()], space)
    }

    /// Samples `f` at every node.
    pub fn from_fn<F>(grid: Grid, space: SpaceTag, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Complex64,
    {
        let mut x = [0.0; 3];
        let values = (0..grid.len())
            .map(|k| {
                grid.point(k, &mut x);
                f(&x[..grid.dim()])
            })
            .collect();
        SampledFunction::new(grid, values, space)
    }

    pub fn from_real_fn<F>(grid: Grid, space: SpaceTag, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64,
    {
        SampledFunction::from_fn(grid, space, |x| Complex64::new(f(x), 0.0))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn space(&self) -> SpaceTag {
        self.space
    }

    pub fn scaled(&self, c: Complex64) -> SampledFunction {
        let values = self.values.iter().map(|v| v * c).collect();
        SampledFunction::from_parts(self.grid, values, self.space)
    }

    /// Pointwise `a*self + b*other`.
    pub fn combine(&self, a: Complex64, other: &SampledFunction, b: Complex64) -> Result<Self> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(SampledFunction::from_parts(self.grid, values, self.space))
    }

    /// Pointwise product.
    pub fn multiply(&self, other: &SampledFunction) -> Result<Self> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| x * y)
            .collect();
        Ok(SampledFunction::from_parts(self.grid, values, self.space))
    }

    /// Riemann-sum inner product `h^d Σ f conj(g)`.
    pub fn inner(&self, other: &SampledFunction) -> Result<Complex64> {
        self.check_compatible(other)?;
        let s: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| x * y.conj())
            .sum();
        Ok(s * self.grid.cell_volume())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub(crate) fn check_space(&self, expected: SpaceTag) -> Result<()> {
        if self.space != expected {
            return Err(Error::WrongSpace {
                expected,
                found: self.space,
            });
        }
        Ok(())
    }

    fn check_compatible(&self, other: &SampledFunction) -> Result<()> {
        if self.grid != other.grid || self.space != other.space {
            return Err(Error::InvalidArgument(
                "functions live on different grids or spaces".into(),
            ));
        }
        Ok(())
    }
}

pub fn l1_norm(f: &SampledFunction) -> f64 {
    f.grid.cell_volume() * f.values.iter().map(|v| v.norm()).sum::<f64>()
}

/// Norm of `L^1_v` with `v(y) = (1 + |y|)^s`.
pub fn weighted_l1_norm(f: &SampledFunction, s: f64) -> Result<f64> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "weight exponent must be >= 0, got {s}"
        )));
    }
    let grid = f.grid;
    let mut x = [0.0; 3];
    let mut acc = 0.0;
    for (k, v) in f.values.iter().enumerate() {
        grid.point(k, &mut x);
        let r = x[..grid.dim()].iter().map(|c| c * c).sum::<f64>().sqrt();
        acc += (1.0 + r).powf(s) * v.norm();
    }
    Ok(grid.cell_volume() * acc)
}

pub fn l2_norm(f: &SampledFunction) -> f64 {
    (f.grid.cell_volume() * f.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn gaussian(grid: Grid) -> SampledFunction {
        SampledFunction::from_real_fn(grid, SpaceTag::Position, |x| {
            (-PI * x.iter().map(|t| t * t).sum::<f64>()).exp()
        })
        .unwrap()
    }

    #[test]
    fn make_grid_examples() {
        let g = Grid::new(1, 1024, 32.0).unwrap();
        assert_eq!(g.spacing(), 0.0625);
        let g = Grid::new(2, 256, 8.0).unwrap();
        assert_eq!(g.spacing(), 0.0625);
        assert_eq!(g.len(), 65536);
        assert!(matches!(
            Grid::new(1, 1000, 32.0),
            Err(Error::NotPowerOfTwo(1000))
        ));
    }

    #[test]
    fn grid_rejections() {
        assert!(matches!(Grid::new(4, 8, 1.0), Err(Error::BadDimension(4))));
        assert!(matches!(Grid::new(1, 4, 1.0), Err(Error::NotPowerOfTwo(4))));
        assert!(matches!(Grid::new(1, 8, 0.0), Err(Error::BadExtent(_))));
        assert!(matches!(
            Grid::with_budget(3, 256, 1.0, 1 << 20),
            Err(Error::MemoryBudget { .. })
        ));
    }

    #[test]
    fn spacing_times_n_is_twice_extent() {
        for &(n, r) in &[(8usize, 0.3), (1024, 32.0), (4096, 7.25)] {
            let g = Grid::new(1, n, r).unwrap();
            assert_eq!(g.spacing() * n as f64, 2.0 * r);
        }
    }

    #[test]
    fn origin_is_center_node() {
        let g = Grid::new(2, 16, 4.0).unwrap();
        let mut p = [0.0; 3];
        g.point(g.flatten(&[8, 8]), &mut p);
        assert_eq!(&p[..2], &[0.0, 0.0]);
        assert_eq!(g.unflatten(g.flatten(&[3, 11]))[..2], [3, 11]);
        assert_eq!(g.dual().dual(), g);
    }

    #[test]
    fn l1_of_gaussian() {
        let g = Grid::new(1, 4096, 64.0).unwrap();
        assert!((l1_norm(&gaussian(g)) - 1.0).abs() < 1e-8);
        assert_eq!(l1_norm(&SampledFunction::zeros(g, SpaceTag::Position)), 0.0);
    }

    #[test]
    fn l1_of_indicator() {
        let g = Grid::new(1, 4096, 64.0).unwrap();
        let f = SampledFunction::from_real_fn(g, SpaceTag::Position, |x| {
            if (0.0..1.0).contains(&x[0]) {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        assert!((l1_norm(&f) - 1.0).abs() <= g.spacing());
    }

    #[test]
    fn weighted_l1_of_gaussian() {
        let g = Grid::new(1, 4096, 64.0).unwrap();
        let f = gaussian(g);
        assert_eq!(weighted_l1_norm(&f, 0.0).unwrap(), l1_norm(&f));
        // 1 + 2 E|t| + E t^2 for the density e^{-pi t^2}; the kink of |t| at
        // the origin node costs an O(h^2) Riemann-sum error (h^2/3 here)
        let expected = 1.0 + 2.0 / PI + 1.0 / (2.0 * PI);
        let h = g.spacing();
        assert!((weighted_l1_norm(&f, 2.0).unwrap() - expected).abs() < 0.5 * h * h);
        let z = SampledFunction::zeros(g, SpaceTag::Position);
        assert_eq!(weighted_l1_norm(&z, 3.5).unwrap(), 0.0);
        assert!(weighted_l1_norm(&f, -1.0).is_err());
    }

    #[test]
    fn l2_of_gaussian() {
        let g = Grid::new(1, 4096, 64.0).unwrap();
        assert!((l2_norm(&gaussian(g)) - 2f64.powf(-0.25)).abs() < 1e-8);
        assert_eq!(l2_norm(&SampledFunction::zeros(g, SpaceTag::Position)), 0.0);
    }

    #[test]
    fn l1_is_absolutely_homogeneous() {
        let g = Grid::new(1, 256, 8.0).unwrap();
        let f = gaussian(g);
        let c = Complex64::new(-3.0, 4.0);
        let lhs = l1_norm(&f.scaled(c));
        assert!((lhs - 5.0 * l1_norm(&f)).abs() <= 1e-15 * lhs);
    }

    #[test]
    fn rejects_bad_samples() {
        let g = Grid::new(1, 8, 1.0).unwrap();
        assert!(
            SampledFunction::new(g, vec![Complex64::new(0.0, 0.0); 7], SpaceTag::Position).is_err()
        );
        let mut v = vec![Complex64::new(0.0, 0.0); 8];
        v[3] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(
            SampledFunction::new(g, v, SpaceTag::Position),
            Err(Error::NonFinite(_))
        ));
    }
}
