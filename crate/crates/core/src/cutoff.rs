//! Smooth steps and plateau bumps built from `exp(-1/x)` mollifiers.

/// `exp(-1/x)` for `x > 0`, zero otherwise.
#[inline]
fn mollifier(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// C^∞ step: 0 for `t <= 0`, 1 for `t >= 1`.
#[inline]
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = mollifier(t);
        a / (a + mollifier(1.0 - t))
    }
}

/// Radial plateau: 1 for `r <= radius`, 0 for `r >= 2 radius`.
#[inline]
pub fn plateau(r: f64, radius: f64) -> f64 {
    smooth_step((2.0 * radius - r) / radius)
}

/// Flat-top bump on `[lo, hi]` with smooth ramps of width `ramp` inside it.
#[inline]
pub fn interval_bump(u: f64, lo: f64, hi: f64, ramp: f64) -> f64 {
    smooth_step((u - lo) / ramp) * smooth_step((hi - u) / ramp)
}

/// Standard bump `exp(-1/(1-u²))` on `(-1, 1)`.
#[inline]
pub fn standard_bump(u: f64) -> f64 {
    let s = 1.0 - u * u;
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}
