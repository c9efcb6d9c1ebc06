//! Numerical laboratory for the Fourier integral operators that appear in
//! Boltzmann collision kernels,
//!
//! ```text
//! K(x, y) = ∫ Φ(u) e^{-2πi (β(|u|) u·y - u·x)} du,     A f = F⁻¹[Φ · f̂∘φ̃],
//! ```
//!
//! with `φ̃(u) = β(|u|) u`. The crate synthesises kernel slices on FFT grids,
//! measures Schur integrals and their growth in `|y|`, probes `L²` norms,
//! and computes the short-time Fourier transform norms (modulation and
//! Wiener amalgam spaces) used to bound them.
//!
//! The runnable programs in `examples/` are the main entry points.

pub mod cutoff;
pub mod error;
pub mod experiment;
pub mod fio;
pub mod fit;
pub mod fourier;
pub mod grid;
pub mod interp;
pub mod io;
pub mod phase;
pub mod symbol;
pub mod tf;

pub use error::{Error, Result};
pub use fit::{fit_growth_exponent, fit_power_law, GrowthFit};
pub use fourier::{forward_ft, inverse_ft};
pub use grid::{l1_norm, l2_norm, weighted_l1_norm, Grid, SampledFunction, SpaceTag};
pub use interp::{sample, Interpolation};
pub use phase::{eval_phi_tilde, PhaseKind, PhaseSpec};
pub use symbol::{eval_symbol, sample_symbol, SymbolKind, SymbolSpec};
