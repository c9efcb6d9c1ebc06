//! Growth of the Schur integral `I(y) = ∫|K(x,y)| dx` for Hölder phases
//! `β(r) = 1 + r^γ` with the physical symbol `|u|/(1+|u|²)²`.
//!
//!     cargo run --release --example schur_growth

use std::time::Instant;

use collision_fio::fio::{schur_curve, GridPolicy};
use collision_fio::{fit_growth_exponent, PhaseSpec, SymbolSpec};

fn main() -> anyhow::Result<()> {
    let symbol = SymbolSpec::phiex(2.0)?;
    let ys: Vec<f64> = (2..=8).map(|k| (1u32 << k) as f64).collect();
    println!(
        "{:>6} {:>10} {:>10} {:>9}",
        "gamma", "slope", "bound", "seconds"
    );
    for gamma in [0.25, 0.5, 1.0] {
        let phase = PhaseSpec::hoelder_power(1.0, 1.0, gamma, 1.0)?;
        let t = Instant::now();
        let curve = schur_curve(&phase, &symbol, &ys, &[1.0], &GridPolicy::auto())?;
        let pts: Vec<(f64, f64)> = curve.iter().map(|p| (p.y_mag, p.schur)).collect();
        let fit = fit_growth_exponent(&pts, (4.0, 256.0))?;
        println!(
            "{gamma:>6} {:>10.4} {:>10.4} {:>9.2}",
            fit.slope,
            1.0 / (1.0 + gamma),
            t.elapsed().as_secs_f64()
        );
        for p in &curve {
            println!(
                "    |y| = {:>5}  I = {:.6}  N = {:>8}  R = {:>8.1}  tail = {:.1e}",
                p.y_mag, p.schur, p.grid.points_per_axis, p.grid.half_extent, p.grid.tail_fraction
            );
        }
    }
    Ok(())
}
