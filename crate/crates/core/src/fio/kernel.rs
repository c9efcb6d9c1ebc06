//! Kernel slices `K(·, y) = F⁻¹[Φ e^{-2πi φ̃·y}]` and Schur integrals.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::policy::{plan_grid, GridChoice, GridPolicy};
use crate::error::{Error, Result};
use crate::fourier::inverse_unchecked;
use crate::grid::{l1_norm, Grid, SampledFunction, SpaceTag};
use crate::phase::PhaseSpec;
use crate::symbol::SymbolSpec;

#[derive(Clone, Debug)]
pub struct KernelSlice {
    pub y: Vec<f64>,
    pub kernel: SampledFunction,
    pub grid_policy_used: GridChoice,
    pub schur_value: f64,
}

/// `Φ(u) e^{-2πi φ̃(u)·y}` on a frequency grid.
pub fn modulated_symbol(
    phase: &PhaseSpec,
    symbol: &SymbolSpec,
    y: &[f64],
    freq: Grid,
) -> Result<SampledFunction> {
    let dim = freq.dim();
    let mut values = vec![Complex64::new(0.0, 0.0); freq.len()];
    values
        .par_chunks_mut(4096)
        .enumerate()
        .for_each(|(chunk, out)| {
            let mut u = [0.0; 3];
            for (i, v) in out.iter_mut().enumerate() {
                freq.point(chunk * 4096 + i, &mut u);
                let amp = symbol.value(&u[..dim]);
                if amp == 0.0 {
                    continue;
                }
                let theta = if dim == 1 {
                    phase.phi_tilde_1d(u[0]) * y[0]
                } else {
                    phase.phase_dot(&u[..dim], y)
                };
                *v = Complex64::from_polar(amp, -2.0 * std::f64::consts::PI * theta);
            }
        });
    SampledFunction::new(freq, values, SpaceTag::Frequency)
}

/// Fraction of `∫|f|` carried by the outermost dyadic shell
/// `R/2 <= |x|_∞ < R`.
pub fn tail_fraction(f: &SampledFunction) -> f64 {
    let g = f.grid();
    let n = g.points_per_axis();
    let (lo, hi) = (n / 4, 3 * n / 4);
    let mut tail = 0.0;
    let mut total = 0.0;
    for (k, v) in f.values().iter().enumerate() {
        let idx = g.unflatten(k);
        let a = v.norm();
        total += a;
        if idx[..g.dim()].iter().any(|&i| i <= lo || i >= hi) {
            tail += a;
        }
    }
    if total > 0.0 {
        tail / total
    } else {
        0.0
    }
}

fn slice_on(
    phase: &PhaseSpec,
    symbol: &SymbolSpec,
    y: &[f64],
    choice: &GridChoice,
    max_points: usize,
) -> Result<SampledFunction> {
    let grid = choice.grid(y.len(), max_points)?;
    let modulated = modulated_symbol(phase, symbol, y, grid.dual())?;
    let mut kernel = inverse_unchecked(&modulated);
    // keep the exact position grid rather than the dual of the dual
    kernel = SampledFunction::from_parts(grid, kernel.into_values(), SpaceTag::Position);
    if kernel
        .values()
        .iter()
        .any(|v| !(v.re.is_finite() && v.im.is_finite()))
    {
        return Err(Error::NonFinite("kernel slice".into()));
    }
    Ok(kernel)
}

/// Kernel slice at `y` with a certified Schur integral: under an automatic
/// policy the grid is doubled until the outer shell holds less than the
/// tail limit.
pub fn synthesize_kernel_slice(
    phase: &PhaseSpec,
    symbol: &SymbolSpec,
    y: &[f64],
    policy: &GridPolicy,
) -> Result<KernelSlice> {
    let y_mag = y.iter().map(|c| c * c).sum::<f64>().sqrt();
    let mut choice = plan_grid(phase, symbol, y, policy)?;
    loop {
        let kernel = slice_on(phase, symbol, y, &choice, policy.max_points)?;
        let tail = tail_fraction(&kernel);
        choice.tail_fraction = tail;
        if tail <= policy.tail_limit {
            let schur_value = l1_norm(&kernel);
            return Ok(KernelSlice {
                y: y.to_vec(),
                kernel,
                grid_policy_used: choice,
                schur_value,
            });
        }
        let bigger = (2 * choice.points_per_axis)
            .checked_pow(y.len() as u32)
            .unwrap_or(usize::MAX);
        if policy.is_fixed() || bigger > policy.max_points {
            return Err(Error::TailNotCertified {
                y_mag,
                fraction: tail,
                limit: policy.tail_limit,
            });
        }
        choice.points_per_axis *= 2;
        choice.half_extent *= 2.0;
        choice.frequency_spacing /= 2.0;
        choice.doublings += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchurPoint {
    pub y_mag: f64,
    pub schur: f64,
    pub grid: GridChoice,
}

/// `I(y) = ∫|K(x, y)| dx` along `y = |y| · direction`. Slices are independent
/// and evaluated in parallel; each slice sums in a fixed order.
pub fn schur_curve(
    phase: &PhaseSpec,
    symbol: &SymbolSpec,
    y_magnitudes: &[f64],
    direction: &[f64],
    policy: &GridPolicy,
) -> Result<Vec<SchurPoint>> {
    let norm = direction.iter().map(|c| c * c).sum::<f64>().sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::InvalidArgument(
            "direction must be a nonzero vector".into(),
        ));
    }
    if let Some(w) = y_magnitudes.windows(2).find(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument(format!(
            "|y| schedule must be sorted, found {} after {}",
            w[1], w[0]
        )));
    }
    if let Some(&bad) = y_magnitudes.iter().find(|&&m| !(m >= 0.0 && m.is_finite())) {
        return Err(Error::InvalidArgument(format!("invalid |y| = {bad}")));
    }
    y_magnitudes
        .par_iter()
        .map(|&m| {
            let y: Vec<f64> = direction.iter().map(|c| c * m / norm).collect();
            synthesize_kernel_slice(phase, symbol, &y, policy)
                .map(|s| SchurPoint {
                    y_mag: m,
                    schur: s.schur_value,
                    grid: s.grid_policy_used,
                })
                .map_err(|e| e.at_y(m))
        })
        .collect()
}
