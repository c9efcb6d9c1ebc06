//! One kernel slice `K(·, y)` for a Hölder phase, checked against brute-force
//! quadrature at a few points.
//!
//!     cargo run --release --example kernel_slice

use collision_fio::fio::{
    direct_quadrature_kernel_with, synthesize_kernel_slice, GridPolicy, QuadratureOptions,
};
use collision_fio::{PhaseSpec, SymbolSpec};

fn main() -> anyhow::Result<()> {
    let phase = PhaseSpec::hoelder_power(1.0, 1.0, 0.5, 1.0)?;
    let symbol = SymbolSpec::phiex(2.0)?;
    let y = 16.0;
    let slice = synthesize_kernel_slice(&phase, &symbol, &[y], &GridPolicy::auto())?;
    let g = slice.grid_policy_used.clone();
    println!(
        "y = {y}: N = {}, R = {}, frequency extent {:.1}, tail {:.1e}, Schur integral {:.6}",
        g.points_per_axis,
        g.half_extent,
        g.frequency_half_extent,
        g.tail_fraction,
        slice.schur_value
    );

    let grid = *slice.kernel.grid();
    let opts = QuadratureOptions {
        truncation: 1e-9,
        ..QuadratureOptions::default()
    };
    println!(
        "{:>9} {:>24} {:>24} {:>9}",
        "x", "FFT", "quadrature", "|diff|"
    );
    for x in [0.0, 8.0, 16.0, 20.0, 24.0, 40.0] {
        let i = ((x + grid.half_extent()) / grid.spacing()).round() as usize;
        let x = grid.coordinate(i);
        let fft = slice.kernel.values()[i];
        let q = direct_quadrature_kernel_with(&phase, &symbol, &[x], &[y], 4, &opts)?;
        println!(
            "{x:>9.3} {:>11.3e}{:+11.3e}i {:>11.3e}{:+11.3e}i {:>9.1e}",
            fft.re,
            fft.im,
            q.value.re,
            q.value.im,
            (fft - q.value).norm()
        );
    }
    Ok(())
}
