//! Discrete transforms scaled to approximate `f̂(u) = ∫ f(t) e^{-2πi t·u} dt`.
//!
//! With nodes `x_j = (j - N/2) h` and `u_k = (k - N/2)/(2R)` the kernel
//! `e^{-2πi x_j u_k}` factors as `(-1)^j (-1)^k e^{-2πi jk/N}` (N/2 is even),
//! so the centered transform is a plain FFT between two sign flips.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::error::Result;
use crate::grid::{Grid, SampledFunction, SpaceTag};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Direction {
    Forward,
    Inverse,
}

/// In-place centered DFT along every axis, without the `h^d` scaling.
pub(crate) fn centered_dft(grid: &Grid, data: &mut [Complex64], direction: Direction) {
    let n = grid.points_per_axis();
    let dim = grid.dim();
    let mut planner = FftPlanner::<f64>::new();
    let fft = match direction {
        Direction::Forward => planner.plan_fft_forward(n),
        Direction::Inverse => planner.plan_fft_inverse(n),
    };
    flip_signs(grid, data);
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..dim {
        transform_axis(&*fft, data, n, dim, axis, &mut line);
    }
    flip_signs(grid, data);
}

/// Centered 1-D DFT of a buffer whose length is even and whose centre node is
/// at index `len/2`. Returns bins `ξ_k = (k - len/2)/(len h)`.
pub(crate) fn centered_dft_1d(fft: &Arc<dyn Fft<f64>>, data: &mut [Complex64]) {
    let len = data.len();
    debug_assert!(len % 2 == 0);
    // (-1)^{j + k} pattern plus the global factor e^{-πi len/2} = (-1)^{len/2}.
    for (j, v) in data.iter_mut().enumerate() {
        if j % 2 == 1 {
            *v = -*v;
        }
    }
    fft.process(data);
    let global = if (len / 2) % 2 == 1 { -1.0 } else { 1.0 };
    for (k, v) in data.iter_mut().enumerate() {
        if k % 2 == 1 {
            *v = -*v * global;
        } else {
            *v *= global;
        }
    }
}

fn flip_signs(grid: &Grid, data: &mut [Complex64]) {
    let dim = grid.dim();
    for (k, v) in data.iter_mut().enumerate() {
        let idx = grid.unflatten(k);
        let parity: usize = idx[..dim].iter().sum();
        if parity % 2 == 1 {
            *v = -*v;
        }
    }
}

fn transform_axis(
    fft: &dyn Fft<f64>,
    data: &mut [Complex64],
    n: usize,
    dim: usize,
    axis: usize,
    line: &mut [Complex64],
) {
    let stride = n.pow((dim - 1 - axis) as u32);
    let block = stride * n;
    for base in (0..data.len()).step_by(block) {
        for offset in 0..stride {
            let start = base + offset;
            if stride == 1 {
                fft.process(&mut data[start..start + n]);
                continue;
            }
            for (i, slot) in line.iter_mut().enumerate() {
                *slot = data[start + i * stride];
            }
            fft.process(line);
            for (i, v) in line.iter().enumerate() {
                data[start + i * stride] = *v;
            }
        }
    }
}

/// Continuous-normalized Fourier transform onto the dual grid.
pub fn forward_ft(f: &SampledFunction) -> Result<SampledFunction> {
    f.check_space(SpaceTag::Position)?;
    Ok(forward_unchecked(f))
}

/// Inverse of [`forward_ft`]; maps a frequency function back to position space.
pub fn inverse_ft(f: &SampledFunction) -> Result<SampledFunction> {
    f.check_space(SpaceTag::Frequency)?;
    Ok(inverse_unchecked(f))
}

pub(crate) fn forward_unchecked(f: &SampledFunction) -> SampledFunction {
    let grid = *f.grid();
    let mut data = f.values().to_vec();
    centered_dft(&grid, &mut data, Direction::Forward);
    let scale = grid.cell_volume();
    data.iter_mut().for_each(|v| *v *= scale);
    SampledFunction::from_parts(grid.dual(), data, SpaceTag::Frequency)
}

pub(crate) fn inverse_unchecked(f: &SampledFunction) -> SampledFunction {
    let grid = *f.grid();
    let mut data = f.values().to_vec();
    centered_dft(&grid, &mut data, Direction::Inverse);
    let scale = grid.cell_volume();
    data.iter_mut().for_each(|v| *v *= scale);
    SampledFunction::from_parts(grid.dual(), data, SpaceTag::Position)
}
