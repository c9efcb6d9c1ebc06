//! Brute-force trapezoid evaluation of `K(x, y)` at single points; the
//! reference the FFT path is checked against.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::PhaseSpec;
use crate::symbol::SymbolSpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureOptions {
    /// The integrand is cut where `Φ < truncation · sup Φ`.
    pub truncation: f64,
    /// Relative change between successive halvings that counts as converged.
    pub tolerance: f64,
    /// Changes below this are converged regardless of the value's size.
    pub absolute_floor: f64,
    pub max_doublings: u32,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            truncation: 1e-12,
            tolerance: 1e-6,
            absolute_floor: 1e-10,
            max_doublings: 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureValue {
    pub value: Complex64,
    /// False when three halvings did not settle the value; it is still the
    /// finest estimate.
    pub converged: bool,
    pub last_change: f64,
    pub nodes: usize,
    pub step: f64,
}

pub fn direct_quadrature_kernel(
    phase: &PhaseSpec,
    symbol: &SymbolSpec,
    x: &[f64],
    y: &[f64],
    refinement: u32,
) -> Result<QuadratureValue> {
    direct_quadrature_kernel_with(
        phase,
        symbol,
        x,
        y,
        refinement,
        &QuadratureOptions::default(),
    )
}

pub fn direct_quadrature_kernel_with(
    phase: &PhaseSpec,
    symbol: &SymbolSpec,
    x: &[f64],
    y: &[f64],
    refinement: u32,
    opts: &QuadratureOptions,
) -> Result<QuadratureValue> {
    let dim = y.len();
    phase.check_dim(dim)?;
    if x.len() != dim {
        return Err(Error::InvalidArgument(
            "x and y must have the same dimension".into(),
        ));
    }
    if refinement < 1 {
        return Err(Error::InvalidArgument("refinement must be >= 1".into()));
    }
    let u_max = symbol.effective_radius(opts.truncation);
    if !u_max.is_finite() {
        return Err(Error::Unsupported(
            "symbol without finite effective support".into(),
        ));
    }
    let l = phase.gradient_bound(u_max);
    let norm = |v: &[f64]| v.iter().map(|c| c * c).sum::<f64>().sqrt();
    // largest frequency of u ↦ u·x - φ̃(u)·y, plus room for the symbol; the
    // coarsest level samples it at about the Nyquist rate
    let bandwidth = norm(x) + l * norm(y);
    let mut m = ((2.0 * u_max) * (bandwidth + 4.0)).ceil() as usize * refinement as usize;
    m = m.max(64);
    let integrand = |u: &[f64]| -> Complex64 {
        let amp = symbol.value(u);
        if amp == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let theta = u.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() - phase.phase_dot(u, y);
        Complex64::from_polar(amp, 2.0 * std::f64::consts::PI * theta)
    };

    // One Richardson step removes the h² error of the kinks that radial
    // symbols and phases have at the origin.
    let mut coarse = trapezoid(&integrand, dim, u_max, m);
    let mut estimate = Complex64::new(f64::NAN, f64::NAN);
    let mut change = f64::INFINITY;
    let mut converged = false;
    for _ in 0..=opts.max_doublings {
        m *= 2;
        let fine = trapezoid(&integrand, dim, u_max, m);
        let extrapolated = (fine * 4.0 - coarse) / 3.0;
        if estimate.re.is_finite() {
            change = (extrapolated - estimate).norm();
            if change <= opts.tolerance * extrapolated.norm() || change <= opts.absolute_floor {
                estimate = extrapolated;
                converged = true;
                break;
            }
        }
        estimate = extrapolated;
        coarse = fine;
    }
    if !(estimate.re.is_finite() && estimate.im.is_finite()) {
        return Err(Error::NonFinite("quadrature value".into()));
    }
    Ok(QuadratureValue {
        value: estimate,
        converged,
        last_change: change,
        nodes: (m + 1).pow(dim as u32),
        step: 2.0 * u_max / m as f64,
    })
}

/// Tensor trapezoid on `[-U, U]^d` with `m` intervals per axis.
fn trapezoid(g: &dyn Fn(&[f64]) -> Complex64, dim: usize, u_max: f64, m: usize) -> Complex64 {
    let h = 2.0 * u_max / m as f64;
    let weight = |j: usize| if j == 0 || j == m { 0.5 } else { 1.0 };
    let node = |j: usize| -u_max + j as f64 * h;
    let mut acc = Complex64::new(0.0, 0.0);
    match dim {
        1 => {
            for j in 0..=m {
                acc += g(&[node(j)]) * weight(j);
            }
        }
        2 => {
            for i in 0..=m {
                let mut row = Complex64::new(0.0, 0.0);
                for j in 0..=m {
                    row += g(&[node(i), node(j)]) * weight(j);
                }
                acc += row * weight(i);
            }
        }
        _ => {
            for i in 0..=m {
                for j in 0..=m {
                    let mut row = Complex64::new(0.0, 0.0);
                    for k in 0..=m {
                        row += g(&[node(i), node(j), node(k)]) * weight(k);
                    }
                    acc += row * weight(i) * weight(j);
                }
            }
        }
    }
    acc * h.powi(dim as i32)
}
