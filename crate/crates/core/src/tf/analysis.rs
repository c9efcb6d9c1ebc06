//! Numerical checks built on the STFT: dilations, chirp growth, and decay of
//! homogeneous symbols.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::norms::amalgam_norm;
use super::stft::{stft, LatticeSpec, Window};
use crate::error::{Error, Result};
use crate::fit::{fit_growth_exponent, fit_power_law, GrowthFit};
use crate::grid::{Grid, SampledFunction, SpaceTag};
use crate::interp::{sample_1d, Interpolation};
use crate::phase::PhaseSpec;
use crate::symbol::SymbolSpec;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DilationRatio {
    pub lambda: f64,
    pub norm: f64,
    pub ratio: f64,
}

/// `f_λ(x) = f(λx)` on the same grid. Integer `λ` reads nodes directly;
/// anything else goes through cubic interpolation.
pub fn dilate(f: &SampledFunction, lambda: f64) -> Result<SampledFunction> {
    if !(lambda >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "dilation factor must be >= 1, got {lambda}"
        )));
    }
    let grid = *f.grid();
    if grid.dim() != 1 {
        return Err(Error::Unsupported(
            "dilations are implemented for d = 1".into(),
        ));
    }
    let n = grid.points_per_axis() as i64;
    let v = f.values();
    let values: Vec<Complex64> = if lambda.fract() == 0.0 {
        let l = lambda as i64;
        (0..n)
            .map(|j| {
                let src = l * (j - n / 2) + n / 2;
                if (0..n).contains(&src) {
                    v[src as usize]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect()
    } else {
        (0..n as usize)
            .map(|j| {
                sample_1d(&grid, v, lambda * grid.coordinate(j), Interpolation::Cubic)
                    .unwrap_or_default()
            })
            .collect()
    };
    Ok(SampledFunction::from_parts(grid, values, f.space()))
}

/// Ratios `‖f_λ‖ / (λ^{1/p - 1/q} ‖f‖)` in `W(FL^p, L^q)`.
pub fn check_dilation(
    f: &SampledFunction,
    lambdas: &[f64],
    p: f64,
    q: f64,
) -> Result<Vec<DilationRatio>> {
    check_dilation_on(f, lambdas, p, q, &LatticeSpec::default())
}

/// [`check_dilation`] on a caller-chosen lattice. Narrow `f_λ` make the
/// step-1/2 lattice sums drift by ~1e-3 from their integrals; halving both
/// steps removes that.
pub fn check_dilation_on(
    f: &SampledFunction,
    lambdas: &[f64],
    p: f64,
    q: f64,
    lattice: &LatticeSpec,
) -> Result<Vec<DilationRatio>> {
    let lat = lattice.clone();
    let base = amalgam_norm(&stft(f, Window::Gaussian, &lat)?, p, q);
    if base == 0.0 {
        return Err(Error::InvalidArgument(
            "zero function has no dilation ratio".into(),
        ));
    }
    let exponent = 1.0 / p - 1.0 / q;
    lambdas
        .iter()
        .map(|&lambda| {
            let norm = if lambda == 1.0 {
                base
            } else {
                amalgam_norm(&stft(&dilate(f, lambda)?, Window::Gaussian, &lat)?, p, q)
            };
            Ok(DilationRatio {
                lambda,
                norm,
                ratio: norm / (lambda.powf(exponent) * base),
            })
        })
        .collect()
}

/// Windows kept away from the grid edge by this many window widths.
pub const CHIRP_MARGIN: f64 = 4.0;

/// `W(FL¹, L^∞)` norms of `u ↦ e^{-2πi φ̃(u)|y|}` (d = 1) sampled on
/// `truncation`, and their growth fit against `1 + |y|`.
///
/// The supremum over positions stops `CHIRP_MARGIN` window widths short of
/// the grid edge, so no window sees the cut. The grid must resolve the
/// fastest chirp: `h <= 1 / (4 |y| L)`.
pub fn chirp_amalgam_growth(
    phase: &PhaseSpec,
    y_mags: &[f64],
    truncation: &Grid,
) -> Result<GrowthFit> {
    phase.check_dim(1)?;
    if truncation.dim() != 1 {
        return Err(Error::Unsupported(
            "chirp norms are implemented for d = 1".into(),
        ));
    }
    let r = truncation.half_extent();
    let window = Window::Gaussian;
    let reach = r - CHIRP_MARGIN * window.effective_width();
    if reach - window.radius() < 0.0 {
        return Err(Error::BadExtent(r));
    }
    let l = phase.gradient_bound(r);
    let lat = LatticeSpec {
        x_range: Some(reach - window.radius()),
        ..LatticeSpec::default()
    };
    let mut points = Vec::with_capacity(y_mags.len());
    for &y in y_mags {
        let need = 1.0 / (4.0 * y.abs() * l);
        if truncation.spacing() > need {
            let n = ((2.0 * r / need).ceil() as usize).next_power_of_two();
            return Err(Error::GridTooCoarse {
                y_mag: y,
                required_n: n,
                required_half_extent: r,
                have_n: truncation.points_per_axis(),
            });
        }
        let chirp = SampledFunction::from_fn(*truncation, SpaceTag::Position, |u| {
            Complex64::from_polar(
                1.0,
                -2.0 * std::f64::consts::PI * phase.phi_tilde_1d(u[0]) * y,
            )
        })?;
        let s = stft(&chirp, window, &lat)?;
        points.push((y, amalgam_norm(&s, 1.0, f64::INFINITY)));
    }
    let lo = y_mags.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = y_mags.iter().copied().fold(0.0, f64::max);
    fit_growth_exponent(&points, (lo, hi))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    /// `(|ξ|, max_x |V(x, ±ξ)|)` for every non-negative lattice frequency.
    pub shells: Vec<(f64, f64)>,
    /// Power law fitted on `fit_range`, against `1 + |ξ|`.
    pub fit: GrowthFit,
}

/// Max-over-positions STFT modulus per frequency and its power-law decay
/// over `|ξ| ∈ range`. Values under `1e-13` of the peak are treated as
/// round-off and left out of the fit.
pub fn stft_decay_profile(f: &SampledFunction, range: (f64, f64)) -> Result<DecayProfile> {
    let s = stft(f, Window::Gaussian, &LatticeSpec::default())?;
    let nk = s.lattice_xi.count;
    let k0 = nk / 2;
    let col_max = |k: usize| {
        (0..s.lattice_x.count)
            .map(|j| s.at(j, k).norm())
            .fold(0.0, f64::max)
    };
    let shells: Vec<(f64, f64)> = (0..=k0)
        .map(|i| {
            (
                s.lattice_xi.coordinate(k0 + i),
                col_max(k0 + i).max(col_max(k0 - i)),
            )
        })
        .collect();
    let peak = shells.iter().map(|s| s.1).fold(0.0, f64::max);
    let pts: Vec<(f64, f64)> = shells
        .iter()
        .filter(|(xi, v)| *xi >= range.0 && *xi <= range.1 && *v > 1e-13 * peak)
        .map(|&(xi, v)| (1.0 + xi, v))
        .collect();
    let fit = fit_power_law(&pts)?;
    Ok(DecayProfile { shells, fit })
}

/// Decay profile of `|x|^degree · χ(x)` where `χ` is `cutoff` read as a
/// function of position.
///
/// The singularity at the origin aliases from `ξ ± k/h`; the Nyquist
/// frequency must be at least 8× the top of `range` or the measured tail
/// flattens (refused with `InvalidArgument`).
pub fn homogeneous_stft_decay(
    degree: f64,
    grid: &Grid,
    cutoff: &SymbolSpec,
    range: (f64, f64),
) -> Result<DecayProfile> {
    if !(degree > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "degree must be positive, got {degree}"
        )));
    }
    let nyquist = 0.5 / grid.spacing();
    if nyquist < 8.0 * range.1 {
        return Err(Error::InvalidArgument(format!(
            "Nyquist frequency {nyquist} is too close to the fitted band (up to {})",
            range.1
        )));
    }
    let f = SampledFunction::from_real_fn(*grid, SpaceTag::Position, |x| {
        x[0].abs().powf(degree) * cutoff.value(x)
    })?;
    stft_decay_profile(&f, range)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn gaussian(grid: Grid) -> SampledFunction {
        SampledFunction::from_real_fn(grid, SpaceTag::Position, |x| {
            2f64.powf(0.25) * (-PI * x[0] * x[0]).exp()
        })
        .unwrap()
    }

    #[test]
    fn unit_dilation_is_exact() {
        let f = gaussian(Grid::new(1, 1024, 32.0).unwrap());
        let r = check_dilation(&f, &[1.0], 1.0, f64::INFINITY).unwrap();
        assert_eq!(r[0].ratio, 1.0);
    }

    #[test]
    fn l2_scaling_of_dilations() {
        let f = gaussian(Grid::new(1, 8192, 32.0).unwrap());
        let fine = LatticeSpec {
            x_step: 0.25,
            xi_step: 0.25,
            ..LatticeSpec::default()
        };
        for r in check_dilation_on(&f, &[2.0, 4.0, 8.0], 2.0, 2.0, &fine).unwrap() {
            let want = r.lambda.powf(-0.5);
            assert!((r.ratio / want - 1.0).abs() < 1e-3, "{r:?}");
        }
    }

    #[test]
    fn gaussian_local_fourier_mass_is_dilation_invariant() {
        // sup_x ∫|V_g f_λ(x, ξ)| dξ = √2 for every λ, so the ratio is 1/λ
        let f = gaussian(Grid::new(1, 8192, 32.0).unwrap());
        for r in check_dilation(&f, &[2.0, 4.0, 8.0], 1.0, f64::INFINITY).unwrap() {
            assert!((r.norm - 2f64.sqrt()).abs() < 1e-6, "{r:?}");
            assert!((r.ratio * r.lambda - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn fractional_dilation_interpolates() {
        let g = Grid::new(1, 4096, 32.0).unwrap();
        let f = gaussian(g);
        let d = dilate(&f, 1.5).unwrap();
        let exact = SampledFunction::from_real_fn(g, SpaceTag::Position, |x| {
            2f64.powf(0.25) * (-PI * 2.25 * x[0] * x[0]).exp()
        })
        .unwrap();
        let err = d
            .values()
            .iter()
            .zip(exact.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
        assert!(dilate(&f, 0.5).is_err());
    }

    #[test]
    fn constant_phase_chirp_is_flat() {
        let g = Grid::new(1, 1 << 14, 32.0).unwrap();
        let fit =
            chirp_amalgam_growth(&PhaseSpec::constant(1.0), &[4.0, 8.0, 16.0, 32.0], &g).unwrap();
        assert!(fit.slope.abs() < 1e-6, "{fit:?}");
    }

    #[test]
    fn coarse_chirp_grid_is_refused() {
        let g = Grid::new(1, 1024, 32.0).unwrap();
        let r = chirp_amalgam_growth(&PhaseSpec::constant(1.0), &[64.0], &g);
        assert!(matches!(r, Err(Error::GridTooCoarse { .. })));
    }

    #[test]
    fn kink_decays_like_inverse_square() {
        let g = Grid::new(1, 16384, 8.0).unwrap();
        let cutoff = SymbolSpec::bump(2.0).unwrap();
        let p = homogeneous_stft_decay(1.0, &g, &cutoff, (4.0, 32.0)).unwrap();
        assert!(p.fit.slope <= -1.8, "{:?}", p.fit);
        // far-field value of the kink: 2 g(0) / (2πξ)²
        let (xi, v) = p.shells[32];
        let want = 2.0 * 2f64.powf(0.25) / (2.0 * PI * xi).powi(2);
        assert!((v / want - 1.0).abs() < 0.05, "{v} {want}");
        let coarse = Grid::new(1, 1024, 8.0).unwrap();
        assert!(homogeneous_stft_decay(1.0, &coarse, &cutoff, (4.0, 32.0)).is_err());
    }

    #[test]
    fn gaussian_decay_is_super_polynomial() {
        let g = Grid::new(1, 8192, 64.0).unwrap();
        let p = stft_decay_profile(&gaussian(g), (2.0, 6.0)).unwrap();
        assert!(p.fit.slope < -6.0, "{:?}", p.fit);
    }
}
