//! `A f = F⁻¹[Φ · f̂∘φ̃]` by resampling `f̂` at warped frequencies, and its
//! exact discrete adjoint.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{forward_unchecked, inverse_unchecked};
use crate::grid::{Grid, SampledFunction, SpaceTag};
use crate::interp::{stencil, Interpolation, Stencil};
use crate::phase::PhaseSpec;
use crate::symbol::SymbolSpec;

/// Largest tolerated share of `‖Φ · f̂∘φ̃‖²` whose warped frequencies fall
/// outside the grid.
pub const WARP_MASS_LIMIT: f64 = 1e-4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct WarpStats {
    /// Frequency nodes with `Φ(u) != 0` whose image `φ̃(u)` left the grid.
    pub out_of_grid_nodes: usize,
    /// Estimated share of the warped mass lost there.
    pub out_of_grid_fraction: f64,
}

/// Frequency-side data shared by `A` and `A†`: `Φ` at every node and the
/// interpolation stencil at `φ̃(u)`.
struct Warp {
    symbol: Vec<f64>,
    stencils: Vec<Option<Stencil>>,
    clamped: Vec<Option<Stencil>>,
}

fn build_warp(phase: &PhaseSpec, symbol: &SymbolSpec, freq: &Grid, kind: Interpolation) -> Warp {
    let dim = freq.dim();
    let lim = freq.half_extent() * (1.0 - 1.0 / freq.points_per_axis() as f64);
    let mut u = [0.0; 3];
    let mut w = [0.0; 3];
    let mut sym = Vec::with_capacity(freq.len());
    let mut stencils = Vec::with_capacity(freq.len());
    let mut clamped = Vec::with_capacity(freq.len());
    for k in 0..freq.len() {
        freq.point(k, &mut u);
        let amp = symbol.value(&u[..dim]);
        sym.push(amp);
        if amp == 0.0 {
            stencils.push(None);
            clamped.push(None);
            continue;
        }
        phase.phi_tilde_into(&u[..dim], &mut w[..dim]);
        let st = stencil(freq, &w[..dim], kind);
        if st.is_none() {
            // nearest in-grid proxy, only used to estimate the lost mass
            let mut c = [0.0; 3];
            for a in 0..dim {
                c[a] = w[a].clamp(-freq.half_extent(), lim);
            }
            clamped.push(stencil(freq, &c[..dim], kind));
        } else {
            clamped.push(None);
        }
        stencils.push(st);
    }
    Warp {
        symbol: sym,
        stencils,
        clamped,
    }
}

fn check_input(phase: &PhaseSpec, f: &SampledFunction) -> Result<()> {
    if f.space() != SpaceTag::Position {
        return Err(Error::WrongSpace {
            expected: SpaceTag::Position,
            found: f.space(),
        });
    }
    phase.check_dim(f.grid().dim())
}

/// `A f` on `f`'s grid together with the warp bookkeeping.
pub fn apply_operator_with_stats(
    phase: &PhaseSpec,
    symbol: &SymbolSpec,
    f: &SampledFunction,
    interpolation: Interpolation,
) -> Result<(SampledFunction, WarpStats)> {
    check_input(phase, f)?;
    let fh = forward_unchecked(f);
    let freq = *fh.grid();
    let warp = build_warp(phase, symbol, &freq, interpolation);
    let data = fh.values();
    let eval = |st: &Stencil| -> Complex64 { st.nodes.iter().map(|&(i, w)| data[i] * w).sum() };
    let mut out = vec![Complex64::new(0.0, 0.0); freq.len()];
    let mut stats = WarpStats::default();
    let (mut kept, mut lost) = (0.0, 0.0);
    for k in 0..freq.len() {
        let amp = warp.symbol[k];
        if amp == 0.0 {
            continue;
        }
        match &warp.stencils[k] {
            Some(st) => {
                let v = eval(st) * amp;
                kept += v.norm_sqr();
                out[k] = v;
            }
            None => {
                stats.out_of_grid_nodes += 1;
                if let Some(st) = &warp.clamped[k] {
                    lost += (eval(st) * amp).norm_sqr();
                }
            }
        }
    }
    stats.out_of_grid_fraction = if kept + lost > 0.0 {
        lost / (kept + lost)
    } else {
        0.0
    };
    if stats.out_of_grid_fraction > WARP_MASS_LIMIT {
        return Err(Error::WarpOutOfGrid {
            fraction: stats.out_of_grid_fraction,
            limit: WARP_MASS_LIMIT,
        });
    }
    let g = SampledFunction::from_parts(freq, out, SpaceTag::Frequency);
    let af = inverse_unchecked(&g);
    Ok((
        SampledFunction::from_parts(*f.grid(), af.into_values(), SpaceTag::Position),
        stats,
    ))
}

pub fn apply_operator(
    phase: &PhaseSpec,
    symbol: &SymbolSpec,
    f: &SampledFunction,
    interpolation: Interpolation,
) -> Result<SampledFunction> {
    apply_operator_with_stats(phase, symbol, f, interpolation).map(|(af, _)| af)
}

/// `A† g = F⁻¹ Wᵀ Φ F g`, the transpose of the discretised operator under
/// the grid inner products: `⟨A f, g⟩ = ⟨f, A† g⟩` up to rounding.
pub fn apply_adjoint(
    phase: &PhaseSpec,
    symbol: &SymbolSpec,
    g: &SampledFunction,
    interpolation: Interpolation,
) -> Result<SampledFunction> {
    check_input(phase, g)?;
    let gh = forward_unchecked(g);
    let freq = *gh.grid();
    let warp = build_warp(phase, symbol, &freq, interpolation);
    let mut out = vec![Complex64::new(0.0, 0.0); freq.len()];
    for (k, v) in gh.values().iter().enumerate() {
        let amp = warp.symbol[k];
        if amp == 0.0 {
            continue;
        }
        if let Some(st) = &warp.stencils[k] {
            let s = v * amp;
            for &(i, w) in &st.nodes {
                out[i] += s * w;
            }
        }
    }
    let back = inverse_unchecked(&SampledFunction::from_parts(freq, out, SpaceTag::Frequency));
    Ok(SampledFunction::from_parts(
        *g.grid(),
        back.into_values(),
        SpaceTag::Position,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::l2_norm;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn gaussian(grid: Grid, shift: f64, freq: f64) -> SampledFunction {
        SampledFunction::from_fn(grid, SpaceTag::Position, |x| {
            Complex64::from_polar((-PI * (x[0] - shift).powi(2)).exp(), 2.0 * PI * freq * x[0])
        })
        .unwrap()
    }

    #[test]
    fn constant_phase_is_gaussian_blur() {
        // Φ = ĝ and f = g: A f = g * g = 2^{-1/2} e^{-π x²/2}
        let grid = Grid::new(1, 1024, 16.0).unwrap();
        let af = apply_operator(
            &PhaseSpec::constant(1.0),
            &SymbolSpec::gaussian(1.0).unwrap(),
            &gaussian(grid, 0.0, 0.0),
            Interpolation::Cubic,
        )
        .unwrap();
        for (k, v) in af.values().iter().enumerate() {
            let x = grid.coordinate(k);
            let want = (-PI * x * x / 2.0).exp() / 2f64.sqrt();
            assert!((v - want).norm() < 1e-10);
        }
    }

    #[test]
    fn dilation_phase_matches_closed_form() {
        // β ≡ 2, Φ ≡ 1 near the support of f̂(2u): A f(x) = f(x/2)/2
        let grid = Grid::new(1, 2048, 32.0).unwrap();
        let f = gaussian(grid, 0.0, 0.0);
        let af = apply_operator(
            &PhaseSpec::constant(2.0),
            &SymbolSpec::bump(8.0).unwrap(),
            &f,
            Interpolation::Cubic,
        )
        .unwrap();
        for (k, v) in af.values().iter().enumerate() {
            let x = grid.coordinate(k);
            let want = 0.5 * (-PI * x * x / 4.0).exp();
            assert!((v - want).norm() < 1e-6, "x = {x}: {v} vs {want}");
        }
    }

    #[test]
    fn low_frequency_ratio_approaches_sup_of_symbol() {
        let grid = Grid::new(1, 4096, 128.0).unwrap();
        let f = SampledFunction::from_real_fn(grid, SpaceTag::Position, |x| {
            (-PI * (x[0] / 20.0).powi(2)).exp()
        })
        .unwrap();
        let af = apply_operator(
            &PhaseSpec::constant(1.0),
            &SymbolSpec::gaussian(1.0).unwrap(),
            &f,
            Interpolation::Cubic,
        )
        .unwrap();
        let ratio = l2_norm(&af) / l2_norm(&f);
        assert!(ratio <= 1.0 && ratio > 0.99);
    }

    #[test]
    fn warp_leaving_the_grid_is_an_error() {
        let grid = Grid::new(1, 256, 16.0).unwrap(); // frequencies in [-4, 4)
        let f = gaussian(grid, 0.0, 3.0);
        let err = apply_operator(
            &PhaseSpec::constant(2.0),
            &SymbolSpec::bump(2.0).unwrap(),
            &f,
            Interpolation::Cubic,
        )
        .unwrap_err();
        assert!(matches!(err, Error::WarpOutOfGrid { .. }));
        let freq = SampledFunction::zeros(grid, SpaceTag::Frequency);
        assert!(apply_operator(
            &PhaseSpec::constant(1.0),
            &SymbolSpec::bump(1.0).unwrap(),
            &freq,
            Interpolation::Linear
        )
        .is_err());
    }

    fn random_function(grid: Grid, seed: u64) -> SampledFunction {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let atoms: Vec<(f64, f64, f64)> = (0..4)
            .map(|_| {
                (
                    rng.gen_range(-4.0..4.0),
                    rng.gen_range(-1.5..1.5),
                    rng.gen_range(0.5..1.5),
                )
            })
            .collect();
        SampledFunction::from_fn(grid, SpaceTag::Position, |x| {
            atoms
                .iter()
                .map(|&(s, w, a)| {
                    Complex64::from_polar(a * (-PI * (x[0] - s).powi(2)).exp(), 2.0 * PI * w * x[0])
                })
                .sum()
        })
        .unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn adjoint_and_linearity(seed in any::<u64>(), linear in any::<bool>(), gamma in 0.2f64..1.0) {
            let grid = Grid::new(1, 512, 16.0).unwrap();
            let phase = PhaseSpec::hoelder_power(1.0, 1.0, gamma, 1.0).unwrap();
            let symbol = SymbolSpec::bump(1.0).unwrap();
            let kind = if linear { Interpolation::Linear } else { Interpolation::Cubic };
            let f = random_function(grid, seed);
            let g = random_function(grid, seed.wrapping_add(1));
            let af = apply_operator(&phase, &symbol, &f, kind).unwrap();
            let ag = apply_adjoint(&phase, &symbol, &g, kind).unwrap();
            let lhs = af.inner(&g).unwrap();
            let rhs = f.inner(&ag).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-6 * lhs.norm().max(1e-12), "{} vs {}", lhs, rhs);

            let (a, b) = (Complex64::new(0.3, -1.2), Complex64::new(-2.0, 0.5));
            let combo = f.combine(a, &g, b).unwrap();
            let lhs = apply_operator(&phase, &symbol, &combo, kind).unwrap();
            let ag = apply_operator(&phase, &symbol, &g, kind).unwrap();
            let rhs = af.combine(a, &ag, b).unwrap();
            let err = lhs.values().iter().zip(rhs.values()).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
            prop_assert!(err <= 1e-10 * rhs.max_abs().max(1.0));
        }
    }
}
