//! Local interpolation on uniform grids.
//!
//! Interpolants are linear in the data, so every evaluation is a short
//! stencil of (node, weight) pairs; the same stencil drives the transpose
//! used by the operator adjoint. Nodes outside the grid are treated as zeros.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::grid::Grid;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    /// Keys cubic convolution (a = -1/2), third-order accurate.
    #[default]
    Cubic,
    Linear,
}

const KEYS_A: f64 = -0.5;

fn keys(s: f64) -> f64 {
    let s = s.abs();
    if s <= 1.0 {
        ((KEYS_A + 2.0) * s - (KEYS_A + 3.0)) * s * s + 1.0
    } else if s < 2.0 {
        ((KEYS_A * s - 5.0 * KEYS_A) * s + 8.0 * KEYS_A) * s - 4.0 * KEYS_A
    } else {
        0.0
    }
}

/// Up to four (index, weight) pairs along one axis.
#[derive(Clone, Copy, Debug)]
struct AxisStencil {
    idx: [usize; 4],
    w: [f64; 4],
    len: usize,
}

fn axis_stencil(n: usize, t: f64, kind: Interpolation) -> AxisStencil {
    let mut st = AxisStencil {
        idx: [0; 4],
        w: [0.0; 4],
        len: 0,
    };
    let base = t.floor();
    let frac = t - base;
    let base = base as i64;
    let mut push = |i: i64, w: f64| {
        if i >= 0 && (i as usize) < n && w != 0.0 {
            st.idx[st.len] = i as usize;
            st.w[st.len] = w;
            st.len += 1;
        }
    };
    match kind {
        Interpolation::Linear => {
            push(base, 1.0 - frac);
            push(base + 1, frac);
        }
        Interpolation::Cubic => {
            for off in -1..=2i64 {
                push(base + off, keys(frac - off as f64));
            }
        }
    }
    st
}

/// Tensor-product stencil for one evaluation point.
#[derive(Clone, Debug)]
pub(crate) struct Stencil {
    pub nodes: Vec<(usize, f64)>,
}

/// Stencil at `point`, or `None` when the point lies outside the grid's
/// sampled cube (beyond the first or last node on some axis).
pub(crate) fn stencil(grid: &Grid, point: &[f64], kind: Interpolation) -> Option<Stencil> {
    let n = grid.points_per_axis();
    let dim = grid.dim();
    let mut axes = [AxisStencil {
        idx: [0; 4],
        w: [0.0; 4],
        len: 0,
    }; 3];
    for a in 0..dim {
        let t = grid.fractional_index(point[a]);
        if !(t >= 0.0 && t <= (n - 1) as f64) {
            return None;
        }
        axes[a] = axis_stencil(n, t, kind);
    }
    let mut nodes = Vec::with_capacity(axes[..dim].iter().map(|s| s.len).product());
    match dim {
        1 => {
            let s = &axes[0];
            for i in 0..s.len {
                nodes.push((s.idx[i], s.w[i]));
            }
        }
        2 => {
            let (s0, s1) = (&axes[0], &axes[1]);
            for i in 0..s0.len {
                for j in 0..s1.len {
                    nodes.push((s0.idx[i] * n + s1.idx[j], s0.w[i] * s1.w[j]));
                }
            }
        }
        _ => {
            let (s0, s1, s2) = (&axes[0], &axes[1], &axes[2]);
            for i in 0..s0.len {
                for j in 0..s1.len {
                    for k in 0..s2.len {
                        nodes.push((
                            (s0.idx[i] * n + s1.idx[j]) * n + s2.idx[k],
                            s0.w[i] * s1.w[j] * s2.w[k],
                        ));
                    }
                }
            }
        }
    }
    Some(Stencil { nodes })
}

/// Interpolated value of grid data at `point`; zero outside the grid.
pub fn sample(grid: &Grid, data: &[Complex64], point: &[f64], kind: Interpolation) -> Complex64 {
    match stencil(grid, point, kind) {
        Some(st) => st.nodes.iter().map(|&(i, w)| data[i] * w).sum(),
        None => Complex64::new(0.0, 0.0),
    }
}

/// Fast 1-D path used by hot loops.
#[inline]
pub(crate) fn sample_1d(
    grid: &Grid,
    data: &[Complex64],
    x: f64,
    kind: Interpolation,
) -> Option<Complex64> {
    let n = grid.points_per_axis();
    let t = grid.fractional_index(x);
    if !(t >= 0.0 && t <= (n - 1) as f64) {
        return None;
    }
    let st = axis_stencil(n, t, kind);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..st.len {
        acc += data[st.idx[i]] * st.w[i];
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_kernel_is_interpolating_partition_of_unity() {
        assert_eq!(keys(0.0), 1.0);
        assert_eq!(keys(1.0), 0.0);
        assert_eq!(keys(2.0), 0.0);
        for &f in &[0.1, 0.37, 0.5, 0.93] {
            let s: f64 = (-1..=2).map(|o| keys(f - o as f64)).sum();
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn reproduces_quadratics_in_the_interior() {
        let g = Grid::new(1, 64, 4.0).unwrap();
        let data: Vec<Complex64> = g
            .axis()
            .iter()
            .map(|&x| Complex64::new(1.0 + 2.0 * x - 0.5 * x * x, 0.0))
            .collect();
        for &x in &[-1.3, 0.01, 0.77, 2.2] {
            let v = sample(&g, &data, &[x], Interpolation::Cubic);
            assert!((v.re - (1.0 + 2.0 * x - 0.5 * x * x)).abs() < 1e-12);
            let v1 = sample_1d(&g, &data, x, Interpolation::Cubic).unwrap();
            assert!((v1 - v).norm() < 1e-14);
        }
    }

    #[test]
    fn linear_is_exact_on_lines_2d() {
        let g = Grid::new(2, 16, 2.0).unwrap();
        let mut p = [0.0; 3];
        let data: Vec<Complex64> = (0..g.len())
            .map(|k| {
                g.point(k, &mut p);
                Complex64::new(3.0 * p[0] - p[1], p[1])
            })
            .collect();
        let v = sample(&g, &data, &[0.3, -0.71], Interpolation::Linear);
        assert!((v - Complex64::new(0.9 + 0.71, -0.71)).norm() < 1e-12);
    }

    #[test]
    fn outside_points_have_no_stencil() {
        let g = Grid::new(1, 16, 1.0).unwrap();
        assert!(stencil(&g, &[1.5], Interpolation::Cubic).is_none());
        assert!(stencil(&g, &[-1.0], Interpolation::Cubic).is_some());
    }
}
