//! `fiolab` — command-line front end to the experiment drivers.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use collision_fio::experiment::{
    emit_report, run_experiment, ExperimentConfig, ExperimentKind, Table,
};
use collision_fio::fio::{l2_probe, schur_curve, synthesize_kernel_slice, ProbePlan};
use collision_fio::io::{read_binary, write_binary, write_csv};
use collision_fio::phase::{verify_hoelder_hypotheses, verify_l2_hypotheses, HoelderCheck};
use collision_fio::tf::{amalgam_norm, m1_norm, modulation_norm, stft, LatticeSpec, Window};
use collision_fio::{fit_growth_exponent, SampledFunction, SpaceTag};

#[derive(Parser)]
#[command(
    name = "fiolab",
    version,
    about = "Kernel, growth and norm experiments for collision-type FIOs"
)]
struct Cli {
    /// Experiment configuration (JSON); defaults are used when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized probes (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize K(·, y) and write it as CSV and binary.
    Kernel {
        /// Components of y, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        y: Vec<f64>,
    },
    /// Schur integrals over the configured |y| schedule.
    Schur,
    /// Fit a growth exponent to a two-column CSV (|y|, value).
    GrowthFit {
        input: PathBuf,
        #[arg(long, default_value_t = 4.0)]
        lo: f64,
        #[arg(long, default_value_t = 256.0)]
        hi: f64,
    },
    /// L² probes of the configured operator.
    L2norm,
    /// Modulation / amalgam / M¹ norm of a stored 1-D function.
    Tfnorm {
        /// Binary function file as written by `kernel`.
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = NormKind::M1)]
        norm: NormKind,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
    },
    /// Check the configured phase against the Hölder and L² hypotheses.
    VerifyPhase {
        /// Exponent to test; defaults to the phase's own γ.
        #[arg(long)]
        gamma: Option<f64>,
    },
    /// Run one experiment and emit its report; exit status 0 iff it passes.
    Run {
        #[arg(long)]
        kind: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum NormKind {
    Modulation,
    Amalgam,
    M1,
}

fn out_dir(cli: &Cli, cfg: &ExperimentConfig) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| cfg.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn print_json(v: &impl serde::Serialize) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn read_pairs(path: &Path) -> anyhow::Result<Vec<(f64, f64)>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut pts = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() < 2 {
            continue;
        }
        match (cells[0].parse::<f64>(), cells[1].parse::<f64>()) {
            (Ok(a), Ok(b)) => pts.push((a, b)),
            _ if i == 0 => {} // header
            _ => bail!("{}:{}: not a numeric row", path.display(), i + 1),
        }
    }
    Ok(pts)
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p).with_context(|| format!("loading {}", p.display()))?,
        None => ExperimentConfig::default(),
    };
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    match &cli.command {
        Command::Kernel { y } => {
            let y = if y.is_empty() {
                vec![0.0; cfg.dim]
            } else {
                y.clone()
            };
            let slice = synthesize_kernel_slice(&cfg.phase, &cfg.symbol, &y, &cfg.grid)?;
            let dir = out_dir(&cli, &cfg);
            std::fs::create_dir_all(&dir)?;
            write_csv(&slice.kernel, &dir.join("kernel.csv"))?;
            write_binary(&slice.kernel, &dir.join("kernel.bin"))?;
            print_json(
                &json!({ "y": slice.y, "schur": slice.schur_value, "grid": slice.grid_policy_used }),
            )?;
        }
        Command::Schur => {
            let mut dir = vec![0.0; cfg.dim];
            dir[0] = 1.0;
            let curve = schur_curve(&cfg.phase, &cfg.symbol, &cfg.y_schedule, &dir, &cfg.grid)?;
            let table = Table::new(
                "schur",
                &["y_mag", "schur"],
                curve.iter().map(|p| vec![p.y_mag, p.schur]).collect(),
            );
            let out = out_dir(&cli, &cfg);
            std::fs::create_dir_all(&out)?;
            let header: Vec<&str> = table.header.iter().map(String::as_str).collect();
            collision_fio::io::write_table(&out.join("schur.csv"), &header, &table.rows)?;
            for p in &curve {
                println!("{},{}", p.y_mag, p.schur);
            }
        }
        Command::GrowthFit { input, lo, hi } => {
            let fit = fit_growth_exponent(&read_pairs(input)?, (*lo, *hi))?;
            print_json(&fit)?;
        }
        Command::L2norm => {
            let plan = ProbePlan {
                dim: cfg.dim,
                seed: cfg.seed.unwrap_or(cfg.probe.seed),
                ..cfg.probe.clone()
            };
            print_json(&l2_probe(&cfg.phase, &cfg.symbol, &plan)?)?;
        }
        Command::Tfnorm { input, norm, p, q } => {
            let f = read_binary(input)?;
            // the STFT reads values as a function of the grid coordinate
            let f = SampledFunction::new(*f.grid(), f.values().to_vec(), SpaceTag::Position)?;
            let value = match norm {
                NormKind::M1 => m1_norm(&f)?,
                NormKind::Modulation => modulation_norm(
                    &stft(&f, Window::Gaussian, &LatticeSpec::default())?,
                    *p,
                    *q,
                ),
                NormKind::Amalgam => amalgam_norm(
                    &stft(&f, Window::Gaussian, &LatticeSpec::default())?,
                    *p,
                    *q,
                ),
            };
            print_json(&json!({ "norm": value }))?;
        }
        Command::VerifyPhase { gamma } => {
            let g = gamma.unwrap_or(cfg.phase.gamma());
            let check = HoelderCheck {
                dim: cfg.dim,
                ..HoelderCheck::default()
            };
            let hoelder = verify_hoelder_hypotheses(&cfg.phase, g, &check)?;
            let r_max = cfg
                .symbol
                .effective_radius(cfg.grid.symbol_tolerance)
                .min(1e3);
            let l2 = verify_l2_hypotheses(&cfg.phase, r_max * 1e-6, r_max, 4096)?;
            print_json(&json!({ "hoelder": hoelder, "l2": l2, "l2_constants": l2.constants() }))?;
        }
        Command::Run { kind } => {
            let kind: ExperimentKind = kind.parse()?;
            let result = run_experiment(&cfg, kind)?;
            let dir = out_dir(&cli, &cfg);
            for p in emit_report(std::slice::from_ref(&result), &dir)? {
                eprintln!("wrote {}", p.display());
            }
            println!(
                "{}: {} (measured {}, predicted {}; {})",
                kind,
                if result.pass { "PASS" } else { "FAIL" },
                result.measured,
                result.predicted,
                result.criterion
            );
            return Ok(if result.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            });
        }
    }
    Ok(ExitCode::SUCCESS)
}
