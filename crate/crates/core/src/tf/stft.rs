//! Discrete short-time Fourier transform on a lattice `x_step Z × ξ_step Z`.

use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::cutoff::plateau;
use crate::error::{Error, Result};
use crate::fourier::centered_dft_1d;
use crate::grid::SampledFunction;
use crate::io::fmt_num;

/// Analysis window, always normalised to `‖g‖₂ = 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Window {
    /// `2^{1/4} e^{-π t²}`.
    #[default]
    Gaussian,
    /// Plateau bump, flat on `|t| <= radius/2`, zero beyond `radius`.
    Bump { radius: f64 },
}

impl Window {
    /// Half-width of the sampled support.
    pub fn radius(&self) -> f64 {
        match self {
            Window::Gaussian => 4.0,
            Window::Bump { radius } => *radius,
        }
    }

    /// Width used by the oversampling rule (`x_step <= width/2`).
    pub fn effective_width(&self) -> f64 {
        match self {
            Window::Gaussian => 1.0,
            Window::Bump { radius } => *radius,
        }
    }

    pub fn effective_bandwidth(&self) -> f64 {
        match self {
            Window::Gaussian => 1.0,
            Window::Bump { radius } => 1.0 / radius,
        }
    }

    fn raw(&self, t: f64) -> f64 {
        match self {
            Window::Gaussian => (-std::f64::consts::PI * t * t).exp(),
            Window::Bump { radius } => plateau(t.abs(), radius / 2.0),
        }
    }

    fn norm_factor(&self) -> f64 {
        match self {
            Window::Gaussian => 2f64.powf(0.25),
            Window::Bump { radius } => {
                let n = 1 << 16;
                let h = 2.0 * radius / n as f64;
                let s: f64 = (0..n)
                    .map(|i| self.raw(-radius + i as f64 * h).powi(2))
                    .sum();
                1.0 / (s * h).sqrt()
            }
        }
    }
}

/// Equispaced nodes `start + i * step`, `i < count`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lattice1d {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl Lattice1d {
    pub fn coordinate(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LatticeSpec {
    pub x_step: f64,
    pub xi_step: f64,
    /// Lattice positions are restricted to `|x| <= x_range`; default: the
    /// whole grid.
    pub x_range: Option<f64>,
    /// Frequencies are restricted to `|ξ| <= xi_range`; default: the grid's
    /// Nyquist band.
    pub xi_range: Option<f64>,
}

impl Default for LatticeSpec {
    fn default() -> Self {
        LatticeSpec {
            x_step: 0.5,
            xi_step: 0.5,
            x_range: None,
            xi_range: None,
        }
    }
}

/// `V_g f(x_j, ξ_k)`, stored row-major with `x` as the slow index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StftMatrix {
    pub lattice_x: Lattice1d,
    pub lattice_xi: Lattice1d,
    pub values: Vec<Complex64>,
    pub window: Window,
}

impl StftMatrix {
    #[inline]
    pub fn at(&self, j: usize, k: usize) -> Complex64 {
        self.values[j * self.lattice_xi.count + k]
    }

    /// Exchanges the roles of `x` and `ξ`.
    pub fn transposed(&self) -> StftMatrix {
        let (nx, nk) = (self.lattice_x.count, self.lattice_xi.count);
        let mut values = Vec::with_capacity(self.values.len());
        for k in 0..nk {
            for j in 0..nx {
                values.push(self.values[j * nk + k]);
            }
        }
        StftMatrix {
            lattice_x: self.lattice_xi,
            lattice_xi: self.lattice_x,
            values,
            window: self.window,
        }
    }

    /// `x,xi,abs` rows for heat maps.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,xi,abs\n");
        for j in 0..self.lattice_x.count {
            for k in 0..self.lattice_xi.count {
                let _ = writeln!(
                    s,
                    "{},{},{}",
                    fmt_num(self.lattice_x.coordinate(j)),
                    fmt_num(self.lattice_xi.coordinate(k)),
                    fmt_num(self.at(j, k).norm())
                );
            }
        }
        s
    }
}

fn integer_ratio(a: f64, b: f64) -> Option<usize> {
    let r = a / b;
    let n = r.round();
    ((r - n).abs() < 1e-9 * r.max(1.0) && n >= 1.0).then_some(n as usize)
}

/// STFT of a one-dimensional sampled function. Positions and frequencies
/// must be commensurate with the sample spacing `h`: `x_step / h` and
/// `ξ_step · M h` are integers, where `M` is the power-of-two segment length.
pub fn stft(f: &SampledFunction, window: Window, lattice: &LatticeSpec) -> Result<StftMatrix> {
    let grid = f.grid();
    if grid.dim() != 1 {
        return Err(Error::Unsupported(
            "the STFT is implemented for d = 1".into(),
        ));
    }
    if !(lattice.x_step > 0.0 && lattice.xi_step > 0.0) {
        return Err(Error::Lattice("steps must be positive".into()));
    }
    if lattice.x_step > window.effective_width() / 2.0 + 1e-12
        || lattice.xi_step > window.effective_bandwidth() / 2.0 + 1e-12
    {
        return Err(Error::Lattice(format!(
            "steps ({}, {}) undersample the window (need <= ({}, {}))",
            lattice.x_step,
            lattice.xi_step,
            window.effective_width() / 2.0,
            window.effective_bandwidth() / 2.0
        )));
    }
    let h = grid.spacing();
    let n = grid.points_per_axis();
    let x_stride = integer_ratio(lattice.x_step, h).ok_or_else(|| {
        Error::Lattice(format!(
            "x step {} is not a multiple of the spacing {h}",
            lattice.x_step
        ))
    })?;
    let m = ((2.0 * window.radius() / h).ceil() as usize)
        .max((1.0 / (lattice.xi_step * h)).ceil() as usize)
        .next_power_of_two()
        .max(8);
    let xi_stride = integer_ratio(lattice.xi_step * m as f64 * h, 1.0).ok_or_else(|| {
        Error::Lattice(format!(
            "ξ step {} does not divide the segment resolution 1/{}",
            lattice.xi_step,
            m as f64 * h
        ))
    })?;

    // x lattice: nodes j0, j0 + stride, ... symmetric around the centre node
    let centre = n / 2;
    let x_lim = lattice.x_range.unwrap_or(grid.half_extent());
    let half_x = ((x_lim / lattice.x_step).floor() as usize).min((centre) / x_stride);
    let x_count = 2 * half_x + 1;
    let x_lat = Lattice1d {
        start: -(half_x as f64) * lattice.x_step,
        step: lattice.x_step,
        count: x_count,
    };
    // ξ lattice: bins m/2 + i·stride, within the Nyquist band
    let nyq = 0.5 / h;
    let xi_lim = lattice.xi_range.unwrap_or(nyq).min(nyq);
    let half_k = ((xi_lim / lattice.xi_step).floor() as usize).min((m / 2 - 1) / xi_stride);
    let k_count = 2 * half_k + 1;
    let xi_lat = Lattice1d {
        start: -(half_k as f64) * lattice.xi_step,
        step: lattice.xi_step,
        count: k_count,
    };

    let norm = window.norm_factor();
    let taps: Vec<f64> = (0..m)
        .map(|i| norm * window.raw((i as f64 - (m / 2) as f64) * h))
        .collect();
    let fft: Arc<dyn rustfft::Fft<f64>> = FftPlanner::new().plan_fft_forward(m);
    let data = f.values();
    let rows: Vec<Vec<Complex64>> = (0..x_count)
        .into_par_iter()
        .map(|j| {
            let node = centre as i64 + (j as i64 - half_x as i64) * x_stride as i64;
            let z = x_lat.coordinate(j);
            let mut seg = vec![Complex64::new(0.0, 0.0); m];
            for (i, s) in seg.iter_mut().enumerate() {
                let idx = node + i as i64 - (m / 2) as i64;
                if idx >= 0 && (idx as usize) < n {
                    *s = data[idx as usize] * taps[i];
                }
            }
            centered_dft_1d(&fft, &mut seg);
            (0..k_count)
                .map(|k| {
                    let bin = m / 2 + k * xi_stride - half_k * xi_stride;
                    let xi = xi_lat.coordinate(k);
                    seg[bin] * h * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * xi * z)
                })
                .collect()
        })
        .collect();
    Ok(StftMatrix {
        lattice_x: x_lat,
        lattice_xi: xi_lat,
        values: rows.into_iter().flatten().collect(),
        window,
    })
}
