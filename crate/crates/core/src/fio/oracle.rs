//! Closed-form `‖A f‖²` for the pure power phase `φ̃(u) = |u|^γ u` in one
//! dimension, after the substitution `ũ = φ̃(u)`:
//!
//! ```text
//! ‖A f‖² = 1/(1+γ) ∫ |ũ|^{1/(1+γ) - 1} |h(|ũ|^{1/(1+γ)})|² |f̂(ũ)|² dũ.
//! ```

use crate::cutoff::interval_bump;
use crate::error::{Error, Result};
use crate::grid::{l2_norm, Grid, SampledFunction, SpaceTag};
use crate::interp::{sample_1d, Interpolation};

/// Nodes per octave of the geometric mesh in `|ũ|`.
pub const NODES_PER_OCTAVE: usize = 64;

/// Right-hand side of the identity above. `f_hat` is read by cubic
/// interpolation; the integrable singularity at `ũ = 0` is handled by a
/// geometric mesh down to `du/64` plus the exact integral of the weight on
/// the innermost piece. Away from the origin the mesh is never coarser than
/// `du/4`.
pub fn oracle_l2_identity(
    h: &dyn Fn(f64) -> f64,
    gamma: f64,
    f_hat: &SampledFunction,
) -> Result<f64> {
    let grid = f_hat.grid();
    if grid.dim() != 1 {
        return Err(Error::Unsupported(
            "the change-of-variables identity is one-dimensional".into(),
        ));
    }
    if f_hat.space() != SpaceTag::Frequency {
        return Err(Error::WrongSpace {
            expected: SpaceTag::Frequency,
            found: f_hat.space(),
        });
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!("need γ > 0, got {gamma}")));
    }
    let p = 1.0 / (1.0 + gamma);
    let data = f_hat.values();
    let fh2 = |u: f64| {
        sample_1d(grid, data, u, Interpolation::Cubic)
            .map(|v| v.norm_sqr())
            .unwrap_or(0.0)
    };
    let integrand = |u: f64| {
        let a = u.abs();
        let hv = h(a.powf(p));
        p * a.powf(p - 1.0) * hv * hv * fh2(u)
    };

    // geometric mesh from du/64 until its step reaches du/4, uniform beyond
    let du = grid.spacing();
    let u_lo = du / 64.0;
    let u_hi = grid.half_extent();
    let ratio = 2f64.powf(1.0 / NODES_PER_OCTAVE as f64);
    let mut nodes = vec![u_lo];
    loop {
        let u = *nodes.last().unwrap();
        let next = u + (u * (ratio - 1.0)).min(du / 4.0);
        if next >= u_hi {
            nodes.push(u_hi);
            break;
        }
        nodes.push(next);
    }

    // ∫_0^{u_lo} p ũ^{p-1} dũ = u_lo^p on each side, smooth factor frozen at 0
    let h0 = h(0.0);
    let mut total = 2.0 * u_lo.powf(p) * h0 * h0 * fh2(0.0);
    for sign in [1.0, -1.0] {
        let mut g_prev = integrand(sign * nodes[0]);
        for w in nodes.windows(2) {
            let g = integrand(sign * w[1]);
            total += 0.5 * (g + g_prev) * (w[1] - w[0]);
            g_prev = g;
        }
    }
    Ok(total)
}

/// `f̂_ε`: flat-top bump on `[ε, 2ε]` with ramps of width `ε/4`, normalised
/// to unit `L²` norm on the frequency grid.
pub fn concentration_bump(freq: Grid, epsilon: f64) -> Result<SampledFunction> {
    if freq.dim() != 1 {
        return Err(Error::Unsupported(
            "concentration family is one-dimensional".into(),
        ));
    }
    if !(epsilon > 0.0) || 2.0 * epsilon >= freq.half_extent() {
        return Err(Error::InvalidArgument(format!(
            "ε = {epsilon} does not fit the frequency grid"
        )));
    }
    if freq.spacing() > epsilon / 16.0 {
        return Err(Error::InvalidArgument(format!(
            "frequency spacing {} cannot resolve ramps of width ε/4 = {}",
            freq.spacing(),
            epsilon / 4.0
        )));
    }
    let raw = SampledFunction::from_real_fn(freq, SpaceTag::Frequency, |u| {
        interval_bump(u[0], epsilon, 2.0 * epsilon, epsilon / 4.0)
    })?;
    let n = l2_norm(&raw);
    Ok(raw.scaled((1.0 / n).into()))
}
