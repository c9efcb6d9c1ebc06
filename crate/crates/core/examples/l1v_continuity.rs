//! `‖Af‖₁ ≤ C ‖f‖_{L¹_v}` with `v(x) = (1+|x|)^s`: the constant read off the
//! Schur curve against ratios for a few modulated Gaussians.
//!
//!     cargo run --release --example l1v_continuity

use std::f64::consts::PI;

use num_complex::Complex64;

use collision_fio::fio::{apply_operator, schur_curve, GridPolicy};
use collision_fio::{
    l1_norm, weighted_l1_norm, Grid, Interpolation, PhaseSpec, SampledFunction, SpaceTag,
    SymbolSpec,
};

fn main() -> anyhow::Result<()> {
    let gamma = 0.5;
    let s = 1.0 / (1.0 + gamma);
    let phase = PhaseSpec::hoelder_power(1.0, 1.0, gamma, 1.0)?;
    let symbol = SymbolSpec::phiex(2.0)?;

    let ys = [0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0];
    let curve = schur_curve(&phase, &symbol, &ys, &[1.0], &GridPolicy::auto())?;
    let c = curve
        .iter()
        .map(|p| p.schur / (1.0 + p.y_mag).powf(s))
        .fold(0.0, f64::max);
    println!("s = {s:.4}, C = max I(y)/(1+|y|)^s = {c:.4}");

    let grid = Grid::new(1, 1 << 16, 256.0)?;
    println!("{:>8} {:>6} {:>6} {:>10}", "centre", "σ", "ω", "ratio");
    for (x0, sigma, w) in [
        (0.0, 1.0, 0.5),
        (20.0, 0.5, -0.8),
        (-40.0, 1.5, 0.3),
        (60.0, 0.3, 0.9),
    ] {
        let f = SampledFunction::from_fn(grid, SpaceTag::Position, |x| {
            Complex64::from_polar(
                (-PI * ((x[0] - x0) / sigma).powi(2)).exp(),
                2.0 * PI * w * x[0],
            )
        })?;
        let af = apply_operator(&phase, &symbol, &f, Interpolation::Cubic)?;
        let ratio = l1_norm(&af) / weighted_l1_norm(&f, s)?;
        println!("{x0:>8} {sigma:>6} {w:>6} {ratio:>10.4}");
    }
    Ok(())
}
