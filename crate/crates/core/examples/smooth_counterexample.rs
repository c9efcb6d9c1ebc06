//! A smooth, non-affine frequency warp still makes the Schur integral grow,
//! roughly like `|y|^{1/2}`; an affine (constant β) warp does not.
//!
//!     cargo run --release --example smooth_counterexample

use collision_fio::fio::{schur_curve, GridPolicy};
use collision_fio::{fit_growth_exponent, PhaseSpec, SymbolSpec};

fn main() -> anyhow::Result<()> {
    let symbol = SymbolSpec::bump(1.0)?;
    let ys: Vec<f64> = (2..=8).map(|k| f64::from(1u32 << k)).collect();
    for (name, phase) in [
        ("constant β = 1", PhaseSpec::constant(1.0)),
        ("smooth c = 0.2", PhaseSpec::smooth_diffeo(0.2)?),
        ("smooth c = 0.45", PhaseSpec::smooth_diffeo(0.45)?),
    ] {
        let curve = schur_curve(&phase, &symbol, &ys, &[1.0], &GridPolicy::auto())?;
        let pts: Vec<(f64, f64)> = curve.iter().map(|p| (p.y_mag, p.schur)).collect();
        let fit = fit_growth_exponent(&pts, (4.0, 256.0))?;
        let values: Vec<String> = curve.iter().map(|p| format!("{:.3}", p.schur)).collect();
        println!(
            "{name:<16} slope {:>7.4} ± {:.4}   I(y) = {}",
            fit.slope,
            fit.stderr_slope,
            values.join(" ")
        );
    }
    Ok(())
}
