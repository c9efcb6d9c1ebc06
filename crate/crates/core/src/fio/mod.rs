//! The operator core: kernel slices, Schur integrals, the warped operator
//! and its adjoint, `L²` probes and the closed-form oracle.

mod kernel;
mod operator;
mod oracle;
mod policy;
mod probe;
mod quadrature;

pub use kernel::{
    modulated_symbol, schur_curve, synthesize_kernel_slice, tail_fraction, KernelSlice, SchurPoint,
};
pub use operator::{
    apply_adjoint, apply_operator, apply_operator_with_stats, WarpStats, WARP_MASS_LIMIT,
};
pub use oracle::{concentration_bump, oracle_l2_identity, NODES_PER_OCTAVE};
pub use policy::{plan_grid, GridChoice, GridPolicy};
pub use probe::{gabor_atom, l2_probe, power_iteration, OperatorProbe, ProbePlan};
pub use quadrature::{
    direct_quadrature_kernel, direct_quadrature_kernel_with, QuadratureOptions, QuadratureValue,
};
