//! Mixed lattice norms of an STFT matrix.

use super::stft::{stft, LatticeSpec, StftMatrix, Window};
use crate::error::{Error, Result};
use crate::grid::SampledFunction;

/// `(Σ |a_i|^p w)^{1/p}`, or `max |a_i|` for `p = ∞`.
fn lp(values: impl Iterator<Item = f64>, p: f64, weight: f64) -> f64 {
    if p.is_infinite() {
        values.fold(0.0, f64::max)
    } else if p == 1.0 {
        values.sum::<f64>() * weight
    } else {
        (values.map(|v| v.powf(p)).sum::<f64>() * weight).powf(1.0 / p)
    }
}

fn check_exponents(p: f64, q: f64) {
    assert!(
        p >= 1.0 && q >= 1.0,
        "mixed-norm exponents must lie in [1, ∞], got ({p}, {q})"
    );
}

/// `M^{p,q}`: inner `L^p` over positions, outer `L^q` over frequencies.
///
/// # Panics
/// If `p` or `q` is below 1 (or NaN).
pub fn modulation_norm(s: &StftMatrix, p: f64, q: f64) -> f64 {
    check_exponents(p, q);
    let (nx, nk) = (s.lattice_x.count, s.lattice_xi.count);
    let inner: Vec<f64> = (0..nk)
        .map(|k| lp((0..nx).map(|j| s.at(j, k).norm()), p, s.lattice_x.step))
        .collect();
    lp(inner.into_iter(), q, s.lattice_xi.step)
}

/// `W(FL^p, L^q)`: inner `L^p` over frequencies, outer `L^q` over positions.
///
/// # Panics
/// As [`modulation_norm`].
pub fn amalgam_norm(s: &StftMatrix, p: f64, q: f64) -> f64 {
    check_exponents(p, q);
    let nk = s.lattice_xi.count;
    let inner: Vec<f64> = (0..s.lattice_x.count)
        .map(|j| lp((0..nk).map(|k| s.at(j, k).norm()), p, s.lattice_xi.step))
        .collect();
    lp(inner.into_iter(), q, s.lattice_x.step)
}

/// Relative size of `f` on the outer 1/32 of the grid.
pub fn edge_ratio(f: &SampledFunction) -> f64 {
    let v = f.values();
    let n = v.len();
    let band = (n / 32).max(1);
    let peak = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let edge = v[..band]
        .iter()
        .chain(&v[n - band..])
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    edge / peak
}

/// Feichtinger-algebra norm with the default Gaussian window and lattice.
pub fn m1_norm(f: &SampledFunction) -> Result<f64> {
    if f.grid().dim() != 1 {
        return Err(Error::Unsupported(
            "the STFT is implemented for d = 1".into(),
        ));
    }
    let r = edge_ratio(f);
    if r > 1e-8 {
        return Err(Error::InsufficientDecay(r));
    }
    let s = stft(f, Window::Gaussian, &LatticeSpec::default())?;
    Ok(modulation_norm(&s, 1.0, 1.0))
}
