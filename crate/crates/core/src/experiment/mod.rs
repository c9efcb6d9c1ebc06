//! Reproduction drivers: one [`ExperimentKind`] per claim about the
//! operator, configured by JSON and reported as JSON + CSV.

mod drivers;
mod report;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fio::{GridPolicy, ProbePlan};
use crate::phase::PhaseSpec;
use crate::symbol::SymbolSpec;

pub use drivers::{predicted_schur_exponent, run_experiment};
pub use report::{emit_report, report_json, ExperimentResult, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    SchurGrowth,
    SmoothGrowth,
    CounterexampleGrowth,
    L1vContinuity,
    L2Bounded,
    L2Unbounded,
    ChirpAmalgam,
    IntroL2Criterion,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::SchurGrowth,
        ExperimentKind::SmoothGrowth,
        ExperimentKind::CounterexampleGrowth,
        ExperimentKind::L1vContinuity,
        ExperimentKind::L2Bounded,
        ExperimentKind::L2Unbounded,
        ExperimentKind::ChirpAmalgam,
        ExperimentKind::IntroL2Criterion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::SchurGrowth => "schur_growth",
            ExperimentKind::SmoothGrowth => "smooth_growth",
            ExperimentKind::CounterexampleGrowth => "counterexample_growth",
            ExperimentKind::L1vContinuity => "l1v_continuity",
            ExperimentKind::L2Bounded => "l2_bounded",
            ExperimentKind::L2Unbounded => "l2_unbounded",
            ExperimentKind::ChirpAmalgam => "chirp_amalgam",
            ExperimentKind::IntroL2Criterion => "intro_l2_criterion",
        }
    }

    /// Kinds that draw random test data and therefore need a seed.
    pub fn is_randomized(self) -> bool {
        matches!(
            self,
            ExperimentKind::L1vContinuity | ExperimentKind::L2Bounded
        )
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().replace('-', "_");
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| {
                let names: Vec<_> = ExperimentKind::ALL.iter().map(|k| k.name()).collect();
                Error::InvalidArgument(format!(
                    "unknown experiment kind {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// Pass/fail thresholds. Defaults are the margins the claims are checked with.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// Allowed excess of a fitted slope over its predicted exponent.
    pub slope_margin: f64,
    /// `|slope|` allowed for predictions of no growth.
    pub flat_slope: f64,
    /// Counterexample slope window.
    pub counterexample_min: f64,
    pub counterexample_max: f64,
    /// `‖Af‖₁ / ‖f‖_{L¹_v} <= factor · sup I(y)/v(y)`.
    pub l1v_factor: f64,
    /// Relative change of the power-iteration estimate under `N → 2N`.
    pub grid_stability: f64,
    /// Relative slack on the analytic `L²` bound.
    pub bound_margin: f64,
    /// Relative agreement of the operator with the change-of-variables oracle.
    pub oracle_match: f64,
    /// Relative tolerance on the concentration slope.
    pub concentration_slope: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            slope_margin: 0.1,
            flat_slope: 0.05,
            counterexample_min: 0.25,
            counterexample_max: 0.6,
            l1v_factor: 1.2,
            grid_stability: 0.05,
            bound_margin: 0.1,
            oracle_match: 0.02,
            concentration_slope: 0.2,
        }
    }
}

/// Everything a driver needs. Unset fields take the defaults below.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub phase: PhaseSpec,
    pub symbol: SymbolSpec,
    pub dim: usize,
    /// `|y|` values for growth curves, ascending.
    pub y_schedule: Vec<f64>,
    pub fit_range: (f64, f64),
    /// Grid policy for kernel slices; its `max_points` is the memory budget.
    pub grid: GridPolicy,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    /// `s` in `v_s(x) = (1+|x|)^s`; defaults to `d/(γ+1)`.
    pub weight_exponent: Option<f64>,
    /// Number of random test functions for `l1v_continuity`.
    pub test_functions: usize,
    /// `(N, R)` of the position grid the operator is applied on.
    pub operator_grid: (usize, f64),
    /// Grid and sampling settings for the `L²` probes.
    pub probe: ProbePlan,
    /// Half extent of the chirp truncation grid.
    pub chirp_half_extent: f64,
    pub thresholds: Thresholds,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            phase: PhaseSpec::hoelder_power(1.0, 1.0, 0.5, 1.0).expect("valid default phase"),
            symbol: SymbolSpec::phiex(2.0).expect("valid default symbol"),
            dim: 1,
            y_schedule: dyadic(4.0, 256.0),
            fit_range: (4.0, 256.0),
            grid: GridPolicy::auto(),
            seed: None,
            out_dir: None,
            weight_exponent: None,
            test_functions: 16,
            operator_grid: (1 << 16, 256.0),
            probe: ProbePlan::default(),
            chirp_half_extent: 16.0,
            thresholds: Thresholds::default(),
        }
    }
}

/// `lo, 2 lo, 4 lo, …` up to `hi`.
pub fn dyadic(lo: f64, hi: f64) -> Vec<f64> {
    let mut v = Vec::new();
    let mut y = lo;
    while y <= hi * (1.0 + 1e-12) {
        v.push(y);
        y *= 2.0;
    }
    v
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) {
            return Err(Error::BadDimension(self.dim));
        }
        self.phase.check_dim(self.dim)?;
        if self
            .y_schedule
            .iter()
            .any(|y| !(*y >= 0.0 && y.is_finite()))
            || self.y_schedule.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::InvalidArgument(
                "y_schedule must be ascending and nonnegative".into(),
            ));
        }
        if !(self.fit_range.0 < self.fit_range.1) {
            return Err(Error::InvalidArgument(format!(
                "empty fit range {:?}",
                self.fit_range
            )));
        }
        if let Some(s) = self.weight_exponent {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "weight exponent must be >= 0, got {s}"
                )));
            }
        }
        Ok(())
    }

    /// Checks the per-kind requirements that `validate` cannot know about.
    pub fn validate_for(&self, kind: ExperimentKind) -> Result<()> {
        self.validate()?;
        if kind.is_randomized() && self.seed.is_none() {
            return Err(Error::InvalidArgument(format!(
                "{kind} draws random test data; a seed is mandatory"
            )));
        }
        Ok(())
    }

    pub fn weight_exponent_or_default(&self) -> f64 {
        self.weight_exponent
            .unwrap_or(self.dim as f64 / (self.phase.gamma() + 1.0))
    }
}
