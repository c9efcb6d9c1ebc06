//! Empirical `L²` behaviour of `A`: Rayleigh quotients on Gabor atoms, power
//! iteration on `A†A`, and the concentration family `f̂_ε`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::operator::{apply_adjoint, apply_operator, apply_operator_with_stats};
use super::oracle::{concentration_bump, oracle_l2_identity};
use crate::error::{Error, Result};
use crate::fourier::inverse_ft;
use crate::grid::{l2_norm, Grid, SampledFunction, SpaceTag};
use crate::interp::Interpolation;
use crate::phase::{PhaseKind, PhaseSpec};
use crate::symbol::SymbolSpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProbePlan {
    pub dim: usize,
    pub points_per_axis: usize,
    pub half_extent: f64,
    pub seed: u64,
    /// Number of random Gabor atoms `M_ω T_x g`.
    pub atoms: usize,
    /// Atom centres are drawn from `[-c R, c R]^d`.
    pub atom_position_fraction: f64,
    /// Atom modulations are drawn from `[-w, w]^d`.
    pub atom_frequency_range: f64,
    /// Concentration parameters; empty to skip the family (d = 1 only).
    pub epsilons: Vec<f64>,
    /// Also evaluate the change-of-variables identity on each `f̂_ε`; needs
    /// the pure power phase `a = 0, b = 1`.
    pub oracle: bool,
    pub power_iterations: usize,
    pub power_tolerance: f64,
    pub interpolation: Interpolation,
}

impl Default for ProbePlan {
    fn default() -> Self {
        ProbePlan {
            dim: 1,
            points_per_axis: 4096,
            half_extent: 256.0,
            seed: 1,
            atoms: 8,
            atom_position_fraction: 0.25,
            atom_frequency_range: 2.0,
            epsilons: Vec::new(),
            oracle: false,
            power_iterations: 20,
            power_tolerance: 1e-3,
            interpolation: Interpolation::Cubic,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorProbe {
    pub rayleigh_values: Vec<(String, f64)>,
    pub power_iteration_estimate: f64,
    pub power_iterations_used: usize,
    pub power_converged: bool,
    pub power_history: Vec<f64>,
    pub concentration_profile: Vec<(f64, f64)>,
    /// `(ε, sqrt(oracle) / ‖f‖)` when requested.
    pub oracle_profile: Vec<(f64, f64)>,
    pub out_of_grid_nodes: usize,
    pub grid: Grid,
}

/// Unit-norm `M_ω T_x g` with `g(t) = e^{-π|t|²/σ²}`.
pub fn gabor_atom(
    grid: Grid,
    center: &[f64],
    modulation: &[f64],
    sigma: f64,
) -> Result<SampledFunction> {
    let dim = grid.dim();
    let f = SampledFunction::from_fn(grid, SpaceTag::Position, |x| {
        let mut r2 = 0.0;
        let mut th = 0.0;
        for a in 0..dim {
            r2 += (x[a] - center[a]).powi(2);
            th += modulation[a] * x[a];
        }
        Complex64::from_polar(
            (-std::f64::consts::PI * r2 / (sigma * sigma)).exp(),
            2.0 * std::f64::consts::PI * th,
        )
    })?;
    let n = l2_norm(&f);
    if n == 0.0 {
        return Err(Error::InvalidArgument("atom vanishes on the grid".into()));
    }
    Ok(f.scaled((1.0 / n).into()))
}

/// Power iteration on `A†A`; returns the history of `‖A v_k‖` for unit `v_k`.
pub fn power_iteration(
    phase: &PhaseSpec,
    symbol: &SymbolSpec,
    grid: Grid,
    seed: u64,
    iterations: usize,
    tolerance: f64,
    interpolation: Interpolation,
) -> Result<(Vec<f64>, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start: Vec<Complex64> = (0..grid.len())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let mut v = SampledFunction::new(grid, start, SpaceTag::Position)?;
    v = v.scaled((1.0 / l2_norm(&v)).into());
    let mut history = Vec::with_capacity(iterations);
    for _ in 0..iterations {
        let av = apply_operator(phase, symbol, &v, interpolation)?;
        let est = l2_norm(&av);
        let converged = history
            .last()
            .map(|&prev: &f64| (est - prev).abs() <= tolerance * est)
            .unwrap_or(false);
        history.push(est);
        if converged {
            return Ok((history, true));
        }
        let w = apply_adjoint(phase, symbol, &av, interpolation)?;
        let n = l2_norm(&w);
        if n == 0.0 {
            return Ok((history, true));
        }
        v = w.scaled((1.0 / n).into());
    }
    Ok((history, false))
}

/// Runs every probe in `plan`. Atoms and ε-values are independent and run in
/// parallel; their results keep the plan's order.
pub fn l2_probe(phase: &PhaseSpec, symbol: &SymbolSpec, plan: &ProbePlan) -> Result<OperatorProbe> {
    let grid = Grid::new(plan.dim, plan.points_per_axis, plan.half_extent)?;
    phase.check_dim(plan.dim)?;
    let dim = plan.dim;

    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let atoms: Vec<(Vec<f64>, Vec<f64>, f64)> = (0..plan.atoms)
        .map(|_| {
            let c = plan.atom_position_fraction * plan.half_extent;
            let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-c..=c)).collect();
            let w: Vec<f64> = (0..dim)
                .map(|_| rng.gen_range(-plan.atom_frequency_range..=plan.atom_frequency_range))
                .collect();
            (x, w, rng.gen_range(0.6..1.6))
        })
        .collect();
    let rayleigh: Vec<(String, f64, usize)> = atoms
        .par_iter()
        .enumerate()
        .map(|(i, (x, w, s))| {
            let f = gabor_atom(grid, x, w, *s)?;
            let (af, stats) = apply_operator_with_stats(phase, symbol, &f, plan.interpolation)?;
            Ok((format!("atom{i:02}"), l2_norm(&af), stats.out_of_grid_nodes))
        })
        .collect::<Result<_>>()?;

    let (history, converged) = power_iteration(
        phase,
        symbol,
        grid,
        plan.seed ^ 0x5eed,
        plan.power_iterations,
        plan.power_tolerance,
        plan.interpolation,
    )?;

    if !plan.epsilons.is_empty() && dim != 1 {
        return Err(Error::Unsupported(
            "concentration family is one-dimensional".into(),
        ));
    }
    if plan.oracle
        && !(phase.kind() == PhaseKind::HoelderPower && phase.a() == 0.0 && phase.b() == 1.0)
    {
        return Err(Error::Unsupported(
            "the change-of-variables identity needs the pure power phase a = 0, b = 1".into(),
        ));
    }
    let conc: Vec<(f64, f64, Option<f64>, usize)> = plan
        .epsilons
        .par_iter()
        .map(|&eps| {
            let fh = concentration_bump(grid.dual(), eps)?;
            let f = inverse_ft(&fh)?;
            let f = SampledFunction::from_parts(grid, f.into_values(), SpaceTag::Position);
            let norm = l2_norm(&f);
            let (af, stats) = apply_operator_with_stats(phase, symbol, &f, plan.interpolation)?;
            let oracle = if plan.oracle {
                let h = |r: f64| symbol.profile(r);
                Some(oracle_l2_identity(&h, phase.gamma(), &fh)?.sqrt() / norm)
            } else {
                None
            };
            Ok((eps, l2_norm(&af) / norm, oracle, stats.out_of_grid_nodes))
        })
        .collect::<Result<_>>()?;

    Ok(OperatorProbe {
        rayleigh_values: rayleigh.iter().map(|(id, r, _)| (id.clone(), *r)).collect(),
        power_iteration_estimate: *history.last().unwrap_or(&0.0),
        power_iterations_used: history.len(),
        power_converged: converged,
        power_history: history,
        concentration_profile: conc.iter().map(|c| (c.0, c.1)).collect(),
        oracle_profile: conc.iter().filter_map(|c| c.2.map(|o| (c.0, o))).collect(),
        out_of_grid_nodes: rayleigh.iter().map(|r| r.2).sum::<usize>()
            + conc.iter().map(|c| c.3).sum::<usize>(),
        grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplier_norm_is_sup_of_symbol() {
        let phase = PhaseSpec::constant(1.0);
        let symbol = SymbolSpec::gaussian(1.0).unwrap();
        let mut estimates = Vec::new();
        for n in [1024, 2048] {
            let plan = ProbePlan {
                points_per_axis: n,
                half_extent: 64.0,
                ..ProbePlan::default()
            };
            let p = l2_probe(&phase, &symbol, &plan).unwrap();
            assert!((p.power_iteration_estimate - 1.0).abs() < 0.02, "{p:?}");
            assert!(p
                .rayleigh_values
                .iter()
                .all(|r| r.1 > 0.0 && r.1 <= 1.0 + 1e-9));
            estimates.push(p.power_iteration_estimate);
        }
        assert!((estimates[0] / estimates[1] - 1.0).abs() < 0.02);
    }

    #[test]
    fn atom_is_unit_norm() {
        let g = Grid::new(2, 64, 8.0).unwrap();
        let a = gabor_atom(g, &[1.0, -2.0], &[0.5, 0.0], 1.0).unwrap();
        assert!((l2_norm(&a) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_needs_pure_power() {
        let plan = ProbePlan {
            points_per_axis: 256,
            half_extent: 16.0,
            atoms: 0,
            power_iterations: 1,
            oracle: true,
            ..ProbePlan::default()
        };
        let r = l2_probe(
            &PhaseSpec::constant(1.0),
            &SymbolSpec::bump(1.0).unwrap(),
            &plan,
        );
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }
}
