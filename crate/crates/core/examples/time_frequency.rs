//! Short-time Fourier transform norms: Gaussians, a chirp, and the physical
//! symbol `|u|/(1+|u|²)²` in the Feichtinger algebra.
//!
//!     cargo run --release --example time_frequency

use std::f64::consts::PI;

use num_complex::Complex64;

use collision_fio::tf::{
    amalgam_norm, check_dilation, homogeneous_stft_decay, m1_norm, modulation_norm, stft,
    LatticeSpec, Window,
};
use collision_fio::{l2_norm, Grid, SampledFunction, SpaceTag, SymbolSpec};

fn main() -> anyhow::Result<()> {
    let grid = Grid::new(1, 4096, 32.0)?;
    let gauss = SampledFunction::from_real_fn(grid, SpaceTag::Position, |x| {
        2f64.powf(0.25) * (-PI * x[0] * x[0]).exp()
    })?;
    let chirp = SampledFunction::from_fn(grid, SpaceTag::Position, |x| {
        Complex64::from_polar((-PI * x[0] * x[0] / 64.0).exp(), PI * x[0] * x[0])
    })?;

    println!(
        "{:<10} {:>9} {:>9} {:>9} {:>12}",
        "function", "L²", "M^{2,2}", "M^{1,1}", "W(FL¹,L^∞)"
    );
    for (name, f) in [("gaussian", &gauss), ("chirp", &chirp)] {
        let s = stft(f, Window::Gaussian, &LatticeSpec::default())?;
        println!(
            "{name:<10} {:>9.5} {:>9.5} {:>9.5} {:>12.5}",
            l2_norm(f),
            modulation_norm(&s, 2.0, 2.0),
            modulation_norm(&s, 1.0, 1.0),
            amalgam_norm(&s, 1.0, f64::INFINITY)
        );
    }

    println!("\ndilations f(λ·) in W(FL¹, L^∞), ratio ‖f_λ‖ / (λ ‖f‖):");
    for (name, f) in [("gaussian", &gauss), ("chirp", &chirp)] {
        let rs = check_dilation(f, &[2.0, 4.0, 8.0], 1.0, f64::INFINITY)?;
        let cells: Vec<String> = rs
            .iter()
            .map(|r| format!("λ={}: {:.4}", r.lambda, r.ratio))
            .collect();
        println!("    {name:<10} {}", cells.join("  "));
    }

    let fine = Grid::new(1, 1 << 15, 16.0)?;
    let p = homogeneous_stft_decay(1.0, &fine, &SymbolSpec::bump(2.0)?, (4.0, 32.0))?;
    println!(
        "\n|ξ| under a bump: STFT decay exponent {:.3} (kink gives -2)",
        p.fit.slope
    );

    let phiex = SymbolSpec::phiex(2.0)?;
    for r in [1024.0, 2048.0, 4096.0] {
        let g = Grid::new(1, (32.0 * r) as usize, r)?;
        let f = SampledFunction::from_real_fn(g, SpaceTag::Position, |x| phiex.value(x))?;
        println!(
            "M¹ norm of |u|/(1+|u|²)² on [-{r}, {r}]: {:.6}",
            m1_norm(&f)?
        );
    }
    Ok(())
}
