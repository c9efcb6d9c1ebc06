//! Checks the Hölder derivative bounds and the `L²` hypotheses on β for a
//! few phases.
//!
//!     cargo run --release --example verify_phase

use collision_fio::phase::{verify_hoelder_hypotheses, verify_l2_hypotheses, HoelderCheck};
use collision_fio::PhaseSpec;

fn main() -> anyhow::Result<()> {
    let phase = PhaseSpec::hoelder_power(1.0, 1.0, 0.5, 1.0)?;
    println!(
        "{:>7} {:>6} {:>12} {:>12}  per-decade sup",
        "tested", "pass", "small |u|", "divergence"
    );
    for g in [0.5, 0.7, 0.9] {
        let r = verify_hoelder_hypotheses(&phase, g, &HoelderCheck::default())?;
        let decades: Vec<String> = r.decade_sup.iter().map(|v| format!("{v:.3}")).collect();
        println!(
            "{g:>7} {:>6} {:>12.4} {:>12.2}  {}",
            r.pass,
            r.worst_ratio_small_u,
            r.small_u_divergence,
            decades.join(" ")
        );
    }

    println!(
        "\n{:<24} {:>10} {:>10} {:>10}  constants",
        "β", "inf β", "min (βr)'", "max (βr)'"
    );
    for (name, p) in [
        ("1", PhaseSpec::constant(1.0)),
        ("1 + r^0.5", PhaseSpec::hoelder_power(1.0, 1.0, 0.5, 1.0)?),
        ("r^0.5", PhaseSpec::hoelder_power(0.0, 1.0, 0.5, 1.0)?),
        ("1 - r^0.5", PhaseSpec::hoelder_power(1.0, -1.0, 0.5, 1.0)?),
    ] {
        let h = verify_l2_hypotheses(&p, 1e-6, 1.0, 1024)?;
        println!(
            "{name:<24} {:>10.4} {:>10.4} {:>10.4}  {:?}",
            h.beta_inf,
            h.slope_min,
            h.slope_max,
            h.constants()
        );
    }

    // β = r^0.5 only looks admissible because the sampling stops at r_min
    let pure = PhaseSpec::hoelder_power(0.0, 1.0, 0.5, 1.0)?;
    for r_min in [1e-4, 1e-8, 1e-12] {
        println!(
            "r^0.5 on [{r_min:.0e}, 1]: inf β = {:.1e}",
            verify_l2_hypotheses(&pure, r_min, 1.0, 1024)?.beta_inf
        );
    }
    Ok(())
}
