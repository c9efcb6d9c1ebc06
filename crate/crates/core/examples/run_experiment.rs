//! Runs every experiment kind with its sample configuration from `configs/`
//! and prints a verdict table; reports land in `target/experiments/<kind>`.
//!
//!     cargo run --release --example run_experiment [kind ...]

use std::path::PathBuf;

use collision_fio::experiment::{emit_report, run_experiment, ExperimentConfig, ExperimentKind};

fn main() -> anyhow::Result<()> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let wanted: Vec<ExperimentKind> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let kinds = if wanted.is_empty() {
        ExperimentKind::ALL.to_vec()
    } else {
        wanted
    };
    println!(
        "{:<22} {:>5} {:>12} {:>12}  criterion",
        "kind", "pass", "measured", "predicted"
    );
    for kind in kinds {
        let path = root.join("configs").join(format!("{kind}.json"));
        let cfg = ExperimentConfig::load(&path)?;
        let r = run_experiment(&cfg, kind)?;
        emit_report(
            std::slice::from_ref(&r),
            &root.join("../../target/experiments").join(kind.name()),
        )?;
        println!(
            "{:<22} {:>5} {:>12.5} {:>12.5}  {}",
            kind.name(),
            if r.pass { "yes" } else { "NO" },
            r.measured,
            r.predicted,
            r.criterion
        );
    }
    Ok(())
}
