//! `L²` behaviour: a bounded operator (β ≥ 1, (βr)' ≥ 1) against the pure
//! power β(r) = r^γ, whose concentration ratios blow up as ε → 0.
//!
//!     cargo run --release --example l2_probe

use collision_fio::fio::{l2_probe, ProbePlan};
use collision_fio::{fit_power_law, PhaseSpec, SymbolSpec};

fn main() -> anyhow::Result<()> {
    let bounded = PhaseSpec::hoelder_power(1.0, 1.0, 0.5, 1.0)?;
    let probe = l2_probe(&bounded, &SymbolSpec::bump(0.5)?, &ProbePlan::default())?;
    println!(
        "β = 1 + r^0.5: power iteration {:.5} after {} steps (converged: {})",
        probe.power_iteration_estimate, probe.power_iterations_used, probe.power_converged
    );
    for (name, r) in probe.rayleigh_values.iter().take(4) {
        println!("    {name:<28} {r:.5}");
    }

    let gamma = 0.5;
    let pure = PhaseSpec::hoelder_power(0.0, 1.0, gamma, 2.0)?;
    let plan = ProbePlan {
        points_per_axis: 1 << 17,
        half_extent: 8192.0,
        atoms: 0,
        power_iterations: 1,
        epsilons: (2..=9).map(|k| 2f64.powi(-k)).collect(),
        oracle: true,
        ..ProbePlan::default()
    };
    let probe = l2_probe(&pure, &SymbolSpec::bump(1.0)?, &plan)?;
    println!(
        "β = r^0.5:\n{:>12} {:>10} {:>10}",
        "ε", "‖Af‖/‖f‖", "oracle"
    );
    for ((eps, r), (_, o)) in probe
        .concentration_profile
        .iter()
        .zip(&probe.oracle_profile)
    {
        println!("{eps:>12.6} {r:>10.5} {o:>10.5}");
    }
    let fit = fit_power_law(&probe.concentration_profile)?;
    println!(
        "slope {:.4}, predicted {:.4}",
        fit.slope,
        -gamma / (2.0 * (1.0 + gamma))
    );
    Ok(())
}
