//! Radial phase families `φ̃(u) = β(|u|) u` and numerical checks of their
//! derivative and monotonicity hypotheses.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cutoff::{plateau, standard_bump};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseKind {
    Constant,
    HoelderPower,
    SmoothDiffeo,
    Custom,
}

/// Black-box `u ↦ φ̃(u)`. Must be stateless: it is called concurrently.
pub type PhaseFn = Arc<dyn Fn(&[f64], &mut [f64]) + Send + Sync>;

#[derive(Clone)]
pub struct PhaseSpec {
    kind: PhaseKind,
    a: f64,
    b: f64,
    gamma: f64,
    cutoff_radius: f64,
    perturbation_amplitude: f64,
    custom: Option<(usize, PhaseFn)>,
}

impl fmt::Debug for PhaseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhaseSpec")
            .field("kind", &self.kind)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("gamma", &self.gamma)
            .field("cutoff_radius", &self.cutoff_radius)
            .field("perturbation_amplitude", &self.perturbation_amplitude)
            .finish()
    }
}

/// `max |ψ'|` for the standard bump `ψ(u) = exp(-1/(1-u²))`.
pub fn bump_max_slope() -> f64 {
    max_on_unit_interval(|u| {
        let s = 1.0 - u * u;
        (standard_bump(u) * 2.0 * u / (s * s)).abs()
    })
}

/// `max |(u ψ(u))'|`, the quantity bounding the smooth perturbation.
pub fn bump_profile_max_slope() -> f64 {
    max_on_unit_interval(|u| {
        let s = 1.0 - u * u;
        let psi = standard_bump(u);
        (psi - u * psi * 2.0 * u / (s * s)).abs()
    })
}

fn max_on_unit_interval(f: impl Fn(f64) -> f64) -> f64 {
    let n = 200_000;
    (1..n)
        .map(|i| f(-1.0 + 2.0 * i as f64 / n as f64))
        .fold(0.0, f64::max)
}

impl PhaseSpec {
    /// `β ≡ a`.
    pub fn constant(a: f64) -> PhaseSpec {
        PhaseSpec {
            kind: PhaseKind::Constant,
            a,
            b: 0.0,
            gamma: 1.0,
            cutoff_radius: 1.0,
            perturbation_amplitude: 0.0,
            custom: None,
        }
    }

    /// `β(r) = a + b ρ(r) r^γ` with the plateau cutoff `ρ` switching the power
    /// part off between `cutoff_radius` and twice that.
    pub fn hoelder_power(a: f64, b: f64, gamma: f64, cutoff_radius: f64) -> Result<PhaseSpec> {
        if !(gamma > -1.0 && gamma <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "Hölder exponent must lie in (-1, 1], got {gamma}"
            )));
        }
        if !(cutoff_radius > 0.0 && cutoff_radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "cutoff radius must be positive, got {cutoff_radius}"
            )));
        }
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::NonFinite("phase coefficients".into()));
        }
        Ok(PhaseSpec {
            kind: PhaseKind::HoelderPower,
            a,
            b,
            gamma,
            cutoff_radius,
            perturbation_amplitude: 0.0,
            custom: None,
        })
    }

    /// One-dimensional `φ̃(u) = u (1 + c ψ(u))`, equal to `u` for `|u| >= 1`.
    pub fn smooth_diffeo(c: f64) -> Result<PhaseSpec> {
        let limit = 0.5 / bump_profile_max_slope();
        if !(c.is_finite() && c.abs() <= limit * (1.0 + 1e-9)) {
            return Err(Error::InvalidArgument(format!(
                "perturbation amplitude {c} exceeds the diffeomorphism limit {limit}"
            )));
        }
        Ok(PhaseSpec {
            kind: PhaseKind::SmoothDiffeo,
            a: 1.0,
            b: 0.0,
            gamma: 0.0,
            cutoff_radius: 1.0,
            perturbation_amplitude: c,
            custom: None,
        })
    }

    /// A user-supplied phase in `dim` dimensions. `a` is the constant part
    /// removed before the small-|u| hypothesis check.
    pub fn custom(dim: usize, a: f64, gamma: f64, f: PhaseFn) -> Result<PhaseSpec> {
        if !(1..=3).contains(&dim) {
            return Err(Error::BadDimension(dim));
        }
        Ok(PhaseSpec {
            kind: PhaseKind::Custom,
            a,
            b: 0.0,
            gamma,
            cutoff_radius: 1.0,
            perturbation_amplitude: 0.0,
            custom: Some((dim, f)),
        })
    }

    pub fn kind(&self) -> PhaseKind {
        self.kind
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn cutoff_radius(&self) -> f64 {
        self.cutoff_radius
    }
    pub fn perturbation_amplitude(&self) -> f64 {
        self.perturbation_amplitude
    }

    /// The phase as a constant-coefficient family, i.e. with `a` removed.
    pub fn reduced(&self) -> PhaseSpec {
        let mut p = self.clone();
        p.a = 0.0;
        match self.kind {
            PhaseKind::Custom => {
                let (dim, f) = p.custom.take().expect("custom phase has an evaluator");
                let a = self.a;
                p.custom = Some((
                    dim,
                    Arc::new(move |u: &[f64], out: &mut [f64]| {
                        f(u, out);
                        for (o, x) in out.iter_mut().zip(u) {
                            *o -= a * x;
                        }
                    }),
                ));
            }
            PhaseKind::SmoothDiffeo => {
                // β - 1 = cψ has no closed family of its own
                let c = self.perturbation_amplitude;
                p.kind = PhaseKind::Custom;
                p.custom = Some((
                    1,
                    Arc::new(move |u: &[f64], out: &mut [f64]| {
                        out[0] = c * u[0] * standard_bump(u[0]);
                    }),
                ));
            }
            _ => {}
        }
        p
    }

    /// Rejects dimensions a family does not support.
    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if !(1..=3).contains(&dim) {
            return Err(Error::BadDimension(dim));
        }
        match (&self.kind, &self.custom) {
            (PhaseKind::SmoothDiffeo, _) if dim != 1 => Err(Error::Unsupported(
                "the smooth diffeomorphism phase is one-dimensional".into(),
            )),
            (PhaseKind::Custom, Some((d, _))) if *d != dim => Err(Error::Unsupported(format!(
                "custom phase is {d}-dimensional, requested {dim}"
            ))),
            _ => Ok(()),
        }
    }

    /// Radial multiplier `β(r)` for the built-in families.
    pub fn beta(&self, r: f64) -> f64 {
        match self.kind {
            PhaseKind::Constant => self.a,
            PhaseKind::HoelderPower => {
                if r == 0.0 {
                    if self.gamma > 0.0 {
                        self.a
                    } else if self.gamma == 0.0 {
                        self.a + self.b
                    } else {
                        f64::INFINITY.copysign(self.b)
                    }
                } else {
                    self.a + self.b * plateau(r, self.cutoff_radius) * r.powf(self.gamma)
                }
            }
            PhaseKind::SmoothDiffeo => 1.0 + self.perturbation_amplitude * standard_bump(r),
            PhaseKind::Custom => {
                let (dim, f) = self.custom.as_ref().expect("custom phase has an evaluator");
                if r == 0.0 {
                    return self.beta(1e-12);
                }
                let mut u = [0.0; 3];
                let mut out = [0.0; 3];
                u[0] = r;
                f(&u[..*dim], &mut out[..*dim]);
                out[0] / r
            }
        }
    }

    /// Radial profile `β(r) r`, well defined at `r = 0`.
    pub fn radial_profile(&self, r: f64) -> f64 {
        if r == 0.0 {
            return 0.0;
        }
        match self.kind {
            PhaseKind::HoelderPower => {
                self.a * r + self.b * plateau(r, self.cutoff_radius) * r.powf(self.gamma + 1.0)
            }
            _ => self.beta(r) * r,
        }
    }

    /// `φ̃(u)` written into `out`. No finiteness check.
    #[inline]
    pub fn phi_tilde_into(&self, u: &[f64], out: &mut [f64]) {
        if let PhaseKind::Custom = self.kind {
            let (_, f) = self.custom.as_ref().expect("custom phase has an evaluator");
            f(u, out);
            return;
        }
        let r = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r == 0.0 {
            out.iter_mut().for_each(|o| *o = 0.0);
            return;
        }
        let m = self.radial_profile(r) / r;
        for (o, x) in out.iter_mut().zip(u) {
            *o = m * x;
        }
    }

    /// One-dimensional `φ̃(u)` for hot loops.
    #[inline]
    pub fn phi_tilde_1d(&self, u: f64) -> f64 {
        match self.kind {
            PhaseKind::Custom => {
                let mut out = [0.0];
                self.phi_tilde_into(&[u], &mut out);
                out[0]
            }
            _ => self.radial_profile(u.abs()).copysign(u),
        }
    }

    /// Phase value `φ̃(u)·y`.
    #[inline]
    pub fn phase_dot(&self, u: &[f64], y: &[f64]) -> f64 {
        let mut out = [0.0; 3];
        let d = u.len();
        self.phi_tilde_into(u, &mut out[..d]);
        out[..d].iter().zip(y).map(|(a, b)| a * b).sum()
    }

    /// Upper bound for `sup |∂φ̃|` (operator norm of the Jacobian) over
    /// `|u| <= radius`, from dense radial sampling.
    pub fn gradient_bound(&self, radius: f64) -> f64 {
        let samples = 4096;
        let mut best: f64 = 0.0;
        let r_lo = (radius * 1e-6).max(1e-9);
        for i in 0..=samples {
            // half log-spaced (resolves the origin), half uniform
            let r = if i <= samples / 2 {
                r_lo * (radius / r_lo).powf(i as f64 / (samples / 2) as f64)
            } else {
                radius * (i - samples / 2) as f64 / (samples / 2) as f64
            };
            let r = r.max(r_lo);
            let jac = match self.kind {
                PhaseKind::Custom => self.custom_jacobian_norm(r),
                _ => {
                    let s = r * 1e-5;
                    let rl = (r - s).max(0.0);
                    let dr = (self.radial_profile(r + s) - self.radial_profile(rl)) / (r + s - rl);
                    dr.abs().max(self.beta(r).abs())
                }
            };
            if jac.is_finite() {
                best = best.max(jac);
            }
        }
        best
    }

    fn custom_jacobian_norm(&self, r: f64) -> f64 {
        let (dim, f) = self.custom.as_ref().expect("custom phase has an evaluator");
        let d = *dim;
        let s = r.max(1e-3) * 1e-6;
        let dirs: Vec<[f64; 3]> = if d == 1 {
            vec![[1.0, 0.0, 0.0]]
        } else {
            vec![
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2, 0.0],
            ]
        };
        let mut frob: f64 = 0.0;
        for dir in dirs {
            let mut base = [0.0; 3];
            for k in 0..d {
                base[k] = r * dir[k];
            }
            let mut total = 0.0;
            for j in 0..d {
                let (mut p, mut m) = (base, base);
                p[j] += s;
                m[j] -= s;
                let (mut fp, mut fm) = ([0.0; 3], [0.0; 3]);
                f(&p[..d], &mut fp[..d]);
                f(&m[..d], &mut fm[..d]);
                for i in 0..d {
                    let v = (fp[i] - fm[i]) / (2.0 * s);
                    total += v * v;
                }
            }
            frob = frob.max(total.sqrt());
        }
        frob
    }
}

/// Checked `φ̃(u)`.
pub fn eval_phi_tilde(phase: &PhaseSpec, u: &[f64]) -> Result<Vec<f64>> {
    phase.check_dim(u.len())?;
    let mut out = vec![0.0; u.len()];
    phase.phi_tilde_into(u, &mut out);
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("φ̃ at {u:?}")));
    }
    Ok(out)
}

/// `B_y(u) = 2π φ̃(u / |y|^{1/(γ+1)}) · y`, defined for `|y| >= 1`.
#[derive(Clone, Debug)]
pub struct RescaledPhase {
    phase: PhaseSpec,
    y: Vec<f64>,
    scale: f64,
}

impl RescaledPhase {
    pub fn eval(&self, u: &[f64]) -> f64 {
        let v: Vec<f64> = u.iter().map(|x| x / self.scale).collect();
        2.0 * std::f64::consts::PI * self.phase.phase_dot(&v, &self.y)
    }

    /// `|y|^{1/(γ+1)}`.
    pub fn dilation(&self) -> f64 {
        self.scale
    }
}

pub fn rescaled_phase(phase: &PhaseSpec, y: &[f64], gamma: f64) -> Result<RescaledPhase> {
    phase.check_dim(y.len())?;
    let y_mag = y.iter().map(|c| c * c).sum::<f64>().sqrt();
    if y_mag < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "rescaling needs |y| >= 1, got {y_mag}"
        )));
    }
    if !(gamma > -1.0 && gamma <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "Hölder exponent must lie in (-1, 1], got {gamma}"
        )));
    }
    Ok(RescaledPhase {
        phase: phase.clone(),
        y: y.to_vec(),
        scale: y_mag.powf(1.0 / (gamma + 1.0)),
    })
}

/// Settings for [`verify_hoelder_hypotheses`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HoelderCheck {
    pub dim: usize,
    /// Highest `|α|` in the small-|u| bound; defaults to `⌊d/2⌋ + 1`.
    pub max_order: Option<usize>,
    /// Highest `|α|` in the large-|u| bound; defaults to twice the above.
    pub large_max_order: Option<usize>,
    pub sample_count: usize,
    pub seed: u64,
    /// Both worst figures must stay below this.
    pub ceiling: f64,
    /// Allowed growth of the per-decade supremum from `[0.1, 1]` down to
    /// `[1e-4, 1e-3]`.
    pub divergence_limit: f64,
}

impl Default for HoelderCheck {
    fn default() -> Self {
        HoelderCheck {
            dim: 1,
            max_order: None,
            large_max_order: None,
            sample_count: 400,
            seed: 7,
            ceiling: 1e5,
            divergence_limit: 1.1,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub order_checked: usize,
    pub large_order_checked: usize,
    pub worst_ratio_small_u: f64,
    pub worst_bound_large_u: f64,
    /// Worst small-|u| ratio per `|α| = 0..=order_checked`.
    pub small_u_by_order: Vec<f64>,
    /// Worst large-|u| bound per `|α| = 2..=large_order_checked`.
    pub large_u_by_order: Vec<f64>,
    /// Supremum of the small-|u| ratios per decade, from `[1e-4, 1e-3)` up.
    pub decade_sup: Vec<f64>,
    /// `decade_sup[0] / decade_sup[last]`.
    pub small_u_divergence: f64,
    pub samples_used: usize,
    pub pass: bool,
}

fn multi_indices(dim: usize, order: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    match dim {
        1 => out.push([order, 0, 0]),
        2 => (0..=order).for_each(|i| out.push([i, order - i, 0])),
        _ => {
            for i in 0..=order {
                for j in 0..=order - i {
                    out.push([i, j, order - i - j]);
                }
            }
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Nested central differences for `∂^α` of each component; returns the
/// largest absolute component.
fn partial_derivative(phase: &PhaseSpec, u: &[f64], alpha: &[usize; 3], step: f64) -> f64 {
    let d = u.len();
    let order: usize = alpha[..d].iter().sum();
    let mut acc = [0.0f64; 3];
    let mut point = [0.0; 3];
    let mut out = [0.0; 3];
    let counts: Vec<usize> = alpha[..d].iter().map(|&k| k + 1).collect();
    let total: usize = counts.iter().product();
    for flat in 0..total {
        let mut rest = flat;
        let mut coeff = 1.0;
        for i in 0..d {
            let j = rest % counts[i];
            rest /= counts[i];
            let k = alpha[i];
            coeff *= if j % 2 == 0 { 1.0 } else { -1.0 } * binomial(k, j);
            point[i] = u[i] + (k as f64 / 2.0 - j as f64) * step;
        }
        phase.phi_tilde_into(&point[..d], &mut out[..d]);
        for c in 0..d {
            acc[c] += coeff * out[c];
        }
    }
    let scale = step.powi(order as i32);
    acc[..d]
        .iter()
        .map(|v| (v / scale).abs())
        .fold(0.0, f64::max)
}

fn random_direction(rng: &mut ChaCha8Rng, dim: usize) -> [f64; 3] {
    let mut v = [0.0; 3];
    if dim == 1 {
        v[0] = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        return v;
    }
    loop {
        let mut n2 = 0.0;
        for c in v.iter_mut().take(dim) {
            *c = rng.gen_range(-1.0..1.0);
            n2 += *c * *c;
        }
        if n2 > 1e-4 && n2 <= 1.0 {
            let n = n2.sqrt();
            v.iter_mut().take(dim).for_each(|c| *c /= n);
            return v;
        }
    }
}

/// Empirical constants of the bounds `|∂^α (β̃(|u|)u)| <= C |u|^{γ+1-|α|}`
/// near the origin (with `β̃ = β - a`) and `|∂^α φ̃| <= C'` for `|u| >= 1`,
/// `2 <= |α|`.
pub fn verify_hoelder_hypotheses(
    phase: &PhaseSpec,
    gamma: f64,
    check: &HoelderCheck,
) -> Result<HypothesisReport> {
    let dim = check.dim;
    phase.check_dim(dim)?;
    let l = dim / 2 + 1;
    let order = check.max_order.unwrap_or(l);
    let large_order = check.large_max_order.unwrap_or(2 * l);
    if order < 1 || check.sample_count < 8 {
        return Err(Error::InvalidArgument(
            "need max_order >= 1 and at least 8 samples".into(),
        ));
    }
    let reduced = phase.reduced();
    let mut rng = ChaCha8Rng::seed_from_u64(check.seed);
    let eps = f64::EPSILON;

    let mut small_by_order = vec![0.0f64; order + 1];
    let mut decade_sup = [0.0f64; 4];
    for _ in 0..check.sample_count {
        let r = 10f64.powf(rng.gen_range(-4.0..0.0));
        let dir = random_direction(&mut rng, dim);
        let u: Vec<f64> = dir[..dim].iter().map(|c| c * r).collect();
        let decade = ((r.log10() + 4.0).floor() as usize).min(3);
        for n in 0..=order {
            let step = r.max(0.01) * eps.powf(1.0 / (n as f64 + 2.0));
            for alpha in multi_indices(dim, n) {
                let deriv = partial_derivative(&reduced, &u, &alpha, step);
                if !deriv.is_finite() {
                    return Err(Error::NonFinite(format!("∂^{alpha:?} φ̃ at |u| = {r:e}")));
                }
                let ratio = deriv / r.powf(gamma + 1.0 - n as f64);
                small_by_order[n] = small_by_order[n].max(ratio);
                decade_sup[decade] = decade_sup[decade].max(ratio);
            }
        }
    }

    let mut large_by_order = vec![0.0f64; large_order.saturating_sub(1)];
    for _ in 0..check.sample_count {
        let r = rng.gen_range(1.0..8.0);
        let dir = random_direction(&mut rng, dim);
        let u: Vec<f64> = dir[..dim].iter().map(|c| c * r).collect();
        for n in 2..=large_order {
            let step = r * eps.powf(1.0 / (n as f64 + 2.0));
            for alpha in multi_indices(dim, n) {
                let deriv = partial_derivative(phase, &u, &alpha, step);
                if !deriv.is_finite() {
                    return Err(Error::NonFinite(format!("∂^{alpha:?} φ̃ at |u| = {r}")));
                }
                large_by_order[n - 2] = large_by_order[n - 2].max(deriv);
            }
        }
    }

    let worst_small = small_by_order.iter().cloned().fold(0.0, f64::max);
    let worst_large = large_by_order.iter().cloned().fold(0.0, f64::max);
    let divergence = if decade_sup[3] > 0.0 {
        decade_sup[0] / decade_sup[3]
    } else if decade_sup[0] > 0.0 {
        f64::INFINITY
    } else {
        1.0
    };
    let pass = worst_small <= check.ceiling
        && worst_large <= check.ceiling
        && divergence <= check.divergence_limit;
    Ok(HypothesisReport {
        order_checked: order,
        large_order_checked: large_order,
        worst_ratio_small_u: worst_small,
        worst_bound_large_u: worst_large,
        small_u_by_order: small_by_order,
        large_u_by_order: large_by_order,
        decade_sup: decade_sup.to_vec(),
        small_u_divergence: divergence,
        samples_used: 2 * check.sample_count,
        pass,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct L2Hypotheses {
    pub beta_inf: f64,
    pub beta_sup: f64,
    pub slope_min: f64,
    pub slope_max: f64,
}

impl L2Hypotheses {
    /// `Some((δ, B₁, B₂))` when β stays away from zero and `(βr)'` stays in a
    /// band of the same sign; the negative branch is reported with `|·|`.
    pub fn constants(&self) -> Option<(f64, f64, f64)> {
        if self.beta_inf > 0.0 && self.slope_min > 0.0 {
            Some((self.beta_inf, self.slope_min, self.slope_max))
        } else if self.beta_sup < 0.0 && self.slope_max < 0.0 {
            Some((-self.beta_sup, -self.slope_max, -self.slope_min))
        } else {
            None
        }
    }
}

/// Inf/sup of `β` and of `d/dr(β(r) r)` on a log-spaced radial grid.
pub fn verify_l2_hypotheses(
    phase: &PhaseSpec,
    r_min: f64,
    r_max: f64,
    samples: usize,
) -> Result<L2Hypotheses> {
    if !(r_min > 0.0 && r_max > r_min) || samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "need 0 < r_min < r_max and >= 2 samples, got [{r_min}, {r_max}] with {samples}"
        )));
    }
    let mut h = L2Hypotheses {
        beta_inf: f64::INFINITY,
        beta_sup: f64::NEG_INFINITY,
        slope_min: f64::INFINITY,
        slope_max: f64::NEG_INFINITY,
    };
    let step_rel = f64::EPSILON.cbrt();
    for i in 0..samples {
        let r = r_min * (r_max / r_min).powf(i as f64 / (samples - 1) as f64);
        let beta = phase.beta(r);
        let s = r * step_rel;
        let slope = (phase.radial_profile(r + s) - phase.radial_profile(r - s)) / (2.0 * s);
        h.beta_inf = h.beta_inf.min(beta);
        h.beta_sup = h.beta_sup.max(beta);
        h.slope_min = h.slope_min.min(slope);
        h.slope_max = h.slope_max.max(slope);
    }
    Ok(h)
}

#[derive(Serialize, Deserialize)]
struct PhaseRecord {
    kind: PhaseKind,
    #[serde(default)]
    a: f64,
    #[serde(default)]
    b: f64,
    #[serde(default = "one")]
    gamma: f64,
    #[serde(default = "one")]
    cutoff_radius: f64,
    #[serde(default)]
    perturbation_amplitude: f64,
}

fn one() -> f64 {
    1.0
}

impl Serialize for PhaseSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PhaseRecord {
            kind: self.kind,
            a: self.a,
            b: self.b,
            gamma: self.gamma,
            cutoff_radius: self.cutoff_radius,
            perturbation_amplitude: self.perturbation_amplitude,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PhaseSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = PhaseRecord::deserialize(d)?;
        let spec = match r.kind {
            PhaseKind::Constant => Ok(PhaseSpec::constant(r.a)),
            PhaseKind::HoelderPower => PhaseSpec::hoelder_power(r.a, r.b, r.gamma, r.cutoff_radius),
            PhaseKind::SmoothDiffeo => PhaseSpec::smooth_diffeo(r.perturbation_amplitude),
            PhaseKind::Custom => {
                return Err(D::Error::custom(
                    "custom phases are library-only and cannot be read from JSON",
                ))
            }
        };
        spec.map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn eval_examples() {
        let p = PhaseSpec::constant(1.0);
        assert_eq!(eval_phi_tilde(&p, &[3.0, 4.0]).unwrap(), vec![3.0, 4.0]);

        let h = PhaseSpec::hoelder_power(1.0, 1.0, 0.5, 1.0).unwrap();
        assert!(close(eval_phi_tilde(&h, &[0.25]).unwrap()[0], 0.375, 1e-15));

        let c = 0.2 / bump_max_slope();
        let s = PhaseSpec::smooth_diffeo(c).unwrap();
        assert_eq!(eval_phi_tilde(&s, &[2.0]).unwrap(), vec![2.0]);
        assert!(eval_phi_tilde(&s, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn origin_maps_to_origin() {
        for p in [
            PhaseSpec::constant(2.0),
            PhaseSpec::hoelder_power(1.0, 2.0, -0.5, 1.0).unwrap(),
            PhaseSpec::hoelder_power(0.0, 1.0, 0.5, 1.0).unwrap(),
            PhaseSpec::smooth_diffeo(0.1).unwrap(),
        ] {
            assert_eq!(eval_phi_tilde(&p, &[0.0]).unwrap(), vec![0.0]);
            // continuous at the origin, also for negative exponents
            assert!(p.phi_tilde_1d(1e-12).abs() < 1e-5);
            assert!(p.phi_tilde_1d(1e-12).abs() < p.phi_tilde_1d(1e-9).abs());
        }
    }

    #[test]
    fn builtins_are_odd() {
        let phases = [
            PhaseSpec::constant(-1.5),
            PhaseSpec::hoelder_power(1.0, -0.7, 0.25, 0.8).unwrap(),
            PhaseSpec::smooth_diffeo(0.3).unwrap(),
        ];
        for p in &phases {
            for i in 0..200 {
                let u = -3.0 + 6.0 * i as f64 / 199.0;
                assert_eq!(p.phi_tilde_1d(-u), -p.phi_tilde_1d(u));
            }
        }
    }

    #[test]
    fn zero_power_coefficient_is_constant() {
        let h = PhaseSpec::hoelder_power(1.7, 0.0, 0.5, 1.0).unwrap();
        let c = PhaseSpec::constant(1.7);
        for i in 0..100 {
            let u = [-4.0 + 0.08 * i as f64, 0.3];
            assert_eq!(
                eval_phi_tilde(&h, &u).unwrap(),
                eval_phi_tilde(&c, &u).unwrap()
            );
        }
    }

    #[test]
    fn smooth_diffeo_is_monotone_and_identity_outside() {
        let p = PhaseSpec::smooth_diffeo(0.5 / bump_profile_max_slope()).unwrap();
        let n = 10_000;
        let mut prev = f64::NEG_INFINITY;
        for i in 0..n {
            let u = -3.0 + 6.0 * i as f64 / (n - 1) as f64;
            let v = p.phi_tilde_1d(u);
            assert!(v > prev);
            prev = v;
            if u.abs() >= 1.0 {
                assert_eq!(v, u);
            }
        }
        assert!(PhaseSpec::smooth_diffeo(0.6 / bump_profile_max_slope()).is_err());
        // the example amplitude is admissible
        assert!(PhaseSpec::smooth_diffeo(0.2 / bump_max_slope()).is_ok());
    }

    #[test]
    fn rescaled_phase_examples() {
        let p = PhaseSpec::constant(1.0);
        let b = rescaled_phase(&p, &[4.0], 1.0).unwrap();
        assert!(close(b.eval(&[1.0]), 4.0 * std::f64::consts::PI, 1e-12));

        let h = PhaseSpec::hoelder_power(0.0, 1.0, 1.0, 1.0).unwrap();
        let b = rescaled_phase(&h, &[16.0], 1.0).unwrap();
        assert!(close(b.eval(&[1.0]), 2.0 * std::f64::consts::PI, 1e-12));

        assert!(rescaled_phase(&p, &[0.5], 1.0).is_err());
    }

    #[test]
    fn hoelder_check_constant_phase() {
        let p = PhaseSpec::constant(2.5);
        let r = verify_hoelder_hypotheses(&p, 1.0, &HoelderCheck::default()).unwrap();
        assert!(r.pass);
        assert_eq!(r.worst_ratio_small_u, 0.0);
        assert!(r.worst_bound_large_u < 1e-6);
    }

    #[test]
    fn hoelder_check_matched_exponent() {
        let p = PhaseSpec::hoelder_power(0.0, 1.0, 0.5, 1.0).unwrap();
        let r = verify_hoelder_hypotheses(&p, 0.5, &HoelderCheck::default()).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(close(r.small_u_by_order[0], 1.0, 1e-6));
        assert!(
            close(r.small_u_by_order[1], 1.5, 1e-4),
            "{:?}",
            r.small_u_by_order
        );
        // bounded uniformly: per-decade suprema within 10%
        let max = r.decade_sup.iter().cloned().fold(0.0, f64::max);
        let min = r.decade_sup.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(max / min < 1.1);
    }

    #[test]
    fn hoelder_check_wrong_exponent_diverges() {
        let p = PhaseSpec::hoelder_power(0.0, 1.0, 0.5, 1.0).unwrap();
        let r = verify_hoelder_hypotheses(&p, 0.9, &HoelderCheck::default()).unwrap();
        assert!(!r.pass);
        assert!(r.small_u_divergence >= 10.0, "{}", r.small_u_divergence);
    }

    #[test]
    fn hoelder_check_two_dimensions() {
        let p = PhaseSpec::hoelder_power(1.0, 1.0, 0.5, 1.0).unwrap();
        let check = HoelderCheck {
            dim: 2,
            sample_count: 64,
            ..HoelderCheck::default()
        };
        let r = verify_hoelder_hypotheses(&p, 0.5, &check).unwrap();
        assert_eq!(r.order_checked, 2);
        assert_eq!(r.large_order_checked, 4);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn l2_hypotheses_examples() {
        let c = verify_l2_hypotheses(&PhaseSpec::constant(1.0), 1e-4, 1.0, 200).unwrap();
        assert!(close(c.beta_inf, 1.0, 1e-15));
        assert!(close(c.slope_min, 1.0, 1e-8) && close(c.slope_max, 1.0, 1e-8));

        let h = PhaseSpec::hoelder_power(1.0, 1.0, 0.5, 1.0).unwrap();
        let r = verify_l2_hypotheses(&h, 1e-4, 1.0, 400).unwrap();
        assert!(r.beta_inf >= 1.0);
        assert!(r.slope_min >= 1.0);
        assert!(close(r.slope_max, 2.5, 1e-6), "{}", r.slope_max);
        assert_eq!(r.constants().map(|c| c.1 >= 1.0), Some(true));

        let pure = PhaseSpec::hoelder_power(0.0, 1.0, 0.5, 1.0).unwrap();
        let coarse = verify_l2_hypotheses(&pure, 1e-2, 1.0, 100).unwrap();
        let fine = verify_l2_hypotheses(&pure, 1e-6, 1.0, 100).unwrap();
        assert!(fine.beta_inf < coarse.beta_inf / 50.0);
        assert!(fine.beta_inf < 2e-3);
    }

    #[test]
    fn negative_branch_constants() {
        let p = PhaseSpec::hoelder_power(-1.0, -1.0, 0.5, 1.0).unwrap();
        let r = verify_l2_hypotheses(&p, 1e-4, 1.0, 100).unwrap();
        let (delta, b1, _) = r.constants().unwrap();
        assert!(delta >= 1.0 && b1 >= 1.0 - 1e-6);
    }

    #[test]
    fn json_round_trip_and_custom_rejection() {
        let p = PhaseSpec::hoelder_power(1.0, -0.5, 0.25, 2.0).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let q: PhaseSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(format!("{p:?}"), format!("{q:?}"));
        assert!(serde_json::from_str::<PhaseSpec>(r#"{"kind":"custom"}"#).is_err());
        assert!(serde_json::from_str::<PhaseSpec>(
            r#"{"kind":"hoelder_power","a":1,"b":1,"gamma":1.5,"cutoff_radius":1}"#
        )
        .is_err());
    }

    #[test]
    fn custom_phase_matches_builtin() {
        let f: PhaseFn = Arc::new(|u: &[f64], out: &mut [f64]| out[0] = 2.0 * u[0]);
        let p = PhaseSpec::custom(1, 2.0, 1.0, f).unwrap();
        assert_eq!(eval_phi_tilde(&p, &[1.5]).unwrap(), vec![3.0]);
        assert!(close(p.gradient_bound(4.0), 2.0, 1e-6));
        let bad: PhaseFn = Arc::new(|_: &[f64], out: &mut [f64]| out[0] = f64::NAN);
        let q = PhaseSpec::custom(1, 0.0, 1.0, bad).unwrap();
        assert!(matches!(
            eval_phi_tilde(&q, &[1.0]),
            Err(Error::NonFinite(_))
        ));
    }
}
