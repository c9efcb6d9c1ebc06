//! Choosing `(N, R)` for a kernel slice.
//!
//! Two things must hold. The chirp `e^{-2πi φ̃(u)·y}` must be resolved on the
//! frequency grid: its instantaneous frequency is at most `|y| L` with
//! `L = sup |∂φ̃|`, and we ask for four samples per period, i.e. a frequency
//! spacing `1/(2R) <= 1/(4 |y| L)`. And the frequency grid must cover the
//! symbol's effective support `U`, i.e. `N/(4R) >= U`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{max_points_from_env, Grid};
use crate::phase::PhaseSpec;
use crate::symbol::SymbolSpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridPolicy {
    /// Fixed points per axis; must be given together with `half_extent`.
    pub points_per_axis: Option<usize>,
    pub half_extent: Option<f64>,
    /// `Φ` counts as zero below this fraction of its maximum.
    pub symbol_tolerance: f64,
    /// Largest admissible Schur mass in the outermost dyadic shell, relative
    /// to the whole integral.
    pub tail_limit: f64,
    pub min_half_extent: f64,
    /// Extra half extent on top of the chirp requirement.
    pub margin: f64,
    pub max_points: usize,
}

impl Default for GridPolicy {
    fn default() -> Self {
        GridPolicy {
            points_per_axis: None,
            half_extent: None,
            symbol_tolerance: 1e-7,
            tail_limit: 5e-3,
            min_half_extent: 32.0,
            margin: 8.0,
            max_points: max_points_from_env(),
        }
    }
}

impl GridPolicy {
    pub fn auto() -> Self {
        GridPolicy::default()
    }

    pub fn fixed(points_per_axis: usize, half_extent: f64) -> Self {
        GridPolicy {
            points_per_axis: Some(points_per_axis),
            half_extent: Some(half_extent),
            ..GridPolicy::default()
        }
    }

    pub fn is_fixed(&self) -> bool {
        self.points_per_axis.is_some()
    }
}

/// The grid a slice was computed on and the numbers that justified it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridChoice {
    pub points_per_axis: usize,
    pub half_extent: f64,
    pub frequency_half_extent: f64,
    pub frequency_spacing: f64,
    /// Smallest half extent that resolves the chirp.
    pub required_half_extent: f64,
    pub gradient_bound: f64,
    pub symbol_radius: f64,
    /// Filled in once the slice is computed.
    pub tail_fraction: f64,
    pub doublings: u32,
}

impl GridChoice {
    pub fn grid(&self, dim: usize, max_points: usize) -> Result<Grid> {
        Grid::with_budget(dim, self.points_per_axis, self.half_extent, max_points)
    }
}

fn next_pow2(x: f64) -> usize {
    let n = x.ceil().max(8.0) as usize;
    n.next_power_of_two()
}

/// Grid for the slice at `y`, or a refusal naming the grid that would work.
pub fn plan_grid(
    phase: &PhaseSpec,
    symbol: &SymbolSpec,
    y: &[f64],
    policy: &GridPolicy,
) -> Result<GridChoice> {
    let dim = y.len();
    phase.check_dim(dim)?;
    let y_mag = y.iter().map(|c| c * c).sum::<f64>().sqrt();
    let u_eff = symbol.effective_radius(policy.symbol_tolerance);
    if !u_eff.is_finite() {
        return Err(Error::Unsupported(format!(
            "symbol {symbol:?} does not decay; no finite frequency window"
        )));
    }
    let l = phase.gradient_bound(u_eff);
    let required_r = 2.0 * y_mag * l;
    let (n, r) = match (policy.points_per_axis, policy.half_extent) {
        (Some(n), Some(r)) => {
            let needed_r = required_r.max(r);
            let needed_n = next_pow2(4.0 * needed_r * u_eff);
            if r < required_r * (1.0 - 1e-12) || (n as f64) < 4.0 * r * u_eff * (1.0 - 1e-12) {
                return Err(Error::GridTooCoarse {
                    y_mag,
                    required_n: needed_n,
                    required_half_extent: needed_r,
                    have_n: n,
                });
            }
            (n, r)
        }
        (None, None) => {
            let r = policy.min_half_extent.max(required_r + policy.margin);
            (next_pow2(4.0 * r * u_eff), r)
        }
        _ => {
            return Err(Error::InvalidArgument(
                "a fixed grid needs both points_per_axis and half_extent".into(),
            ))
        }
    };
    let points = n.checked_pow(dim as u32).unwrap_or(usize::MAX);
    if points > policy.max_points {
        return Err(Error::MemoryBudget {
            points,
            budget: policy.max_points,
        });
    }
    Ok(GridChoice {
        points_per_axis: n,
        half_extent: r,
        frequency_half_extent: n as f64 / (4.0 * r),
        frequency_spacing: 1.0 / (2.0 * r),
        required_half_extent: required_r,
        gradient_bound: l,
        symbol_radius: u_eff,
        tail_fraction: f64::NAN,
        doublings: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auto_grid_resolves_chirp_and_symbol() {
        let phase = PhaseSpec::hoelder_power(1.0, 1.0, 0.5, 1.0).unwrap();
        let symbol = SymbolSpec::phiex(2.0).unwrap();
        let c = plan_grid(&phase, &symbol, &[16.0], &GridPolicy::auto()).unwrap();
        assert!(c.frequency_spacing <= 1.0 / (4.0 * 16.0 * c.gradient_bound));
        assert!(c.frequency_half_extent >= c.symbol_radius);
        assert!(c.points_per_axis.is_power_of_two());
        // β(r) r has slope 1 + 1.5 r^½ >= 2.5 at r = 1
        assert!(c.gradient_bound >= 2.5);
    }

    #[test]
    fn fixed_grid_refuses_with_requirement() {
        let phase = PhaseSpec::constant(1.0);
        let symbol = SymbolSpec::gaussian(1.0).unwrap();
        let ok = plan_grid(&phase, &symbol, &[8.0], &GridPolicy::fixed(4096, 64.0)).unwrap();
        assert_eq!(ok.points_per_axis, 4096);
        match plan_grid(&phase, &symbol, &[64.0], &GridPolicy::fixed(4096, 64.0)) {
            Err(Error::GridTooCoarse {
                required_n,
                required_half_extent,
                ..
            }) => {
                assert_eq!(required_half_extent, 128.0);
                assert!(required_n >= 4 * 128);
            }
            other => panic!("expected refusal, got {other:?}"),
        }
        // a frequency window narrower than the symbol is refused as well
        assert!(plan_grid(&phase, &symbol, &[1.0], &GridPolicy::fixed(64, 64.0)).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let phase = PhaseSpec::constant(1.0);
        let symbol = SymbolSpec::phiex(2.0).unwrap();
        let policy = GridPolicy {
            max_points: 1 << 10,
            ..GridPolicy::auto()
        };
        assert!(matches!(
            plan_grid(&phase, &symbol, &[4.0], &policy),
            Err(Error::MemoryBudget { .. })
        ));
    }
}
