//! Radial symbols `Φ(u) = h(|u|)`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cutoff::plateau;
use crate::error::{Error, Result};
use crate::grid::{Grid, SampledFunction, SpaceTag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolKind {
    Phiex,
    Bump,
    Gaussian,
    Custom,
}

pub type SymbolFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct SymbolSpec {
    kind: SymbolKind,
    m: f64,
    support_radius: f64,
    width: f64,
    custom: Option<SymbolFn>,
}

impl fmt::Debug for SymbolSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolSpec")
            .field("kind", &self.kind)
            .field("m", &self.m)
            .field("support_radius", &self.support_radius)
            .field("width", &self.width)
            .finish()
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

impl SymbolSpec {
    /// `|u| / (1 + |u|²)^m`.
    pub fn phiex(m: f64) -> Result<SymbolSpec> {
        positive("decay exponent m", m)?;
        Ok(SymbolSpec {
            kind: SymbolKind::Phiex,
            m,
            support_radius: 1.0,
            width: 1.0,
            custom: None,
        })
    }

    /// Plateau bump: 1 on `|u| <= support_radius`, 0 beyond twice that.
    pub fn bump(support_radius: f64) -> Result<SymbolSpec> {
        positive("support radius", support_radius)?;
        Ok(SymbolSpec {
            kind: SymbolKind::Bump,
            m: 0.0,
            support_radius,
            width: 1.0,
            custom: None,
        })
    }

    /// `exp(-π |u|² / width²)`.
    pub fn gaussian(width: f64) -> Result<SymbolSpec> {
        positive("width", width)?;
        Ok(SymbolSpec {
            kind: SymbolKind::Gaussian,
            m: 0.0,
            support_radius: 1.0,
            width,
            custom: None,
        })
    }

    /// Black-box symbol, assumed negligible beyond `support_radius`.
    pub fn custom(support_radius: f64, f: SymbolFn) -> Result<SymbolSpec> {
        positive("support radius", support_radius)?;
        Ok(SymbolSpec {
            kind: SymbolKind::Custom,
            m: 0.0,
            support_radius,
            width: 1.0,
            custom: Some(f),
        })
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }
    pub fn m(&self) -> f64 {
        self.m
    }
    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }
    pub fn width(&self) -> f64 {
        self.width
    }

    /// Radial profile `h(r)` for the built-in kinds.
    #[inline]
    pub fn profile(&self, r: f64) -> f64 {
        match self.kind {
            SymbolKind::Phiex => r / (1.0 + r * r).powf(self.m),
            SymbolKind::Bump => plateau(r, self.support_radius),
            SymbolKind::Gaussian => {
                (-std::f64::consts::PI * r * r / (self.width * self.width)).exp()
            }
            SymbolKind::Custom => {
                let f = self
                    .custom
                    .as_ref()
                    .expect("custom symbol has an evaluator");
                f(&[r])
            }
        }
    }

    /// `Φ(u)` without finiteness checks.
    #[inline]
    pub fn value(&self, u: &[f64]) -> f64 {
        match self.kind {
            SymbolKind::Custom => {
                let f = self
                    .custom
                    .as_ref()
                    .expect("custom symbol has an evaluator");
                f(u)
            }
            _ => self.profile(u.iter().map(|x| x * x).sum::<f64>().sqrt()),
        }
    }

    /// `sup |Φ|` (closed form where available).
    pub fn sup_norm(&self) -> f64 {
        match self.kind {
            SymbolKind::Bump | SymbolKind::Gaussian => 1.0,
            SymbolKind::Phiex if self.m > 0.5 => self.profile(1.0 / (2.0 * self.m - 1.0).sqrt()),
            SymbolKind::Phiex => f64::INFINITY,
            SymbolKind::Custom => {
                let r = self.support_radius;
                (0..=10_000)
                    .map(|i| self.profile(r * i as f64 / 10_000.0).abs())
                    .fold(0.0, f64::max)
            }
        }
    }

    /// Radius beyond which `|Φ| <= rel_tol · sup|Φ|`.
    pub fn effective_radius(&self, rel_tol: f64) -> f64 {
        match self.kind {
            SymbolKind::Bump => 2.0 * self.support_radius,
            SymbolKind::Gaussian => self.width * (-rel_tol.ln() / std::f64::consts::PI).sqrt(),
            SymbolKind::Custom => self.support_radius,
            SymbolKind::Phiex => {
                if self.m <= 0.5 {
                    return f64::INFINITY;
                }
                // profile decreases beyond its peak; bisect in log r
                let target = rel_tol * self.sup_norm();
                let peak = 1.0 / (2.0 * self.m - 1.0).sqrt();
                let (mut lo, mut hi) = (peak, peak * 2.0);
                while self.profile(hi) > target {
                    lo = hi;
                    hi *= 2.0;
                }
                for _ in 0..80 {
                    let mid = (lo * hi).sqrt();
                    if self.profile(mid) > target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                hi
            }
        }
    }
}

/// Checked `Φ(u)`.
pub fn eval_symbol(symbol: &SymbolSpec, u: &[f64]) -> Result<f64> {
    let v = symbol.value(u);
    if !v.is_finite() {
        return Err(Error::NonFinite(format!("symbol at {u:?}")));
    }
    Ok(v)
}

/// Samples `Φ` at every node of a frequency grid.
pub fn sample_symbol(symbol: &SymbolSpec, grid: Grid) -> Result<SampledFunction> {
    SampledFunction::from_real_fn(grid, SpaceTag::Frequency, |u| symbol.value(u))
}

/// Certificate of `Φ ∈ M¹(R^d)` from sufficient conditions: `m > (d+1)/2`
/// for the physical family, Schwartz class for bumps and Gaussians.
pub fn m1_admissible(symbol: &SymbolSpec, dim: usize) -> Result<bool> {
    if !(1..=3).contains(&dim) {
        return Err(Error::BadDimension(dim));
    }
    match symbol.kind {
        SymbolKind::Phiex => Ok(symbol.m > (dim as f64 + 1.0) / 2.0),
        SymbolKind::Bump | SymbolKind::Gaussian => Ok(true),
        SymbolKind::Custom => Err(Error::Unsupported(
            "no membership certificate is available for custom symbols".into(),
        )),
    }
}

#[derive(Serialize, Deserialize)]
struct SymbolRecord {
    kind: SymbolKind,
    #[serde(default = "two")]
    m: f64,
    #[serde(default = "one")]
    support_radius: f64,
    #[serde(default = "one")]
    width: f64,
}

fn one() -> f64 {
    1.0
}
fn two() -> f64 {
    2.0
}

impl Serialize for SymbolSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SymbolRecord {
            kind: self.kind,
            m: self.m,
            support_radius: self.support_radius,
            width: self.width,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymbolSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = SymbolRecord::deserialize(d)?;
        match r.kind {
            SymbolKind::Phiex => SymbolSpec::phiex(r.m),
            SymbolKind::Bump => SymbolSpec::bump(r.support_radius),
            SymbolKind::Gaussian => SymbolSpec::gaussian(r.width),
            SymbolKind::Custom => {
                return Err(D::Error::custom("custom symbols cannot be read from JSON"))
            }
        }
        .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::l1_norm;
    use proptest::prelude::*;

    #[test]
    fn eval_examples() {
        let p = SymbolSpec::phiex(2.0).unwrap();
        assert_eq!(eval_symbol(&p, &[0.0]).unwrap(), 0.0);
        assert_eq!(eval_symbol(&p, &[1.0]).unwrap(), 0.25);
        assert_eq!(eval_symbol(&p, &[0.6, 0.8]).unwrap(), 0.25);
        let b = SymbolSpec::bump(1.0).unwrap();
        assert_eq!(eval_symbol(&b, &[0.5]).unwrap(), 1.0);
    }

    #[test]
    fn sampling_examples() {
        let g = Grid::new(1, 1024, 32.0).unwrap().dual();
        let gs = SymbolSpec::gaussian(1.0).unwrap();
        let s = sample_symbol(&gs, g).unwrap();
        for (k, v) in s.values().iter().enumerate() {
            assert_eq!(v.re, eval_symbol(&gs, &[g.coordinate(k)]).unwrap());
            assert_eq!(v.im, 0.0);
        }

        // ∫|u|/(1+u²)² du = 1; tail beyond the grid is ~1/U²
        let wide = Grid::new(1, 1 << 16, 512.0).unwrap();
        let p = sample_symbol(&SymbolSpec::phiex(2.0).unwrap(), wide).unwrap();
        let p = SampledFunction::new(wide, p.into_values(), SpaceTag::Position).unwrap();
        assert!((l1_norm(&p) - 1.0).abs() < 1e-4, "{}", l1_norm(&p));

        let b = sample_symbol(&SymbolSpec::bump(1.0).unwrap(), g).unwrap();
        for (k, v) in b.values().iter().enumerate() {
            if g.coordinate(k).abs() >= 2.0 {
                assert_eq!(v.re, 0.0);
            }
        }
    }

    #[test]
    fn m1_certificate() {
        assert!(m1_admissible(&SymbolSpec::phiex(2.0).unwrap(), 1).unwrap());
        assert!(!m1_admissible(&SymbolSpec::phiex(1.0).unwrap(), 2).unwrap());
        assert!(m1_admissible(&SymbolSpec::gaussian(3.0).unwrap(), 3).unwrap());
        let c = SymbolSpec::custom(1.0, Arc::new(|_: &[f64]| 1.0)).unwrap();
        assert!(m1_admissible(&c, 1).is_err());
    }

    #[test]
    fn effective_radius_bounds_tail() {
        for s in [
            SymbolSpec::phiex(2.0).unwrap(),
            SymbolSpec::gaussian(2.0).unwrap(),
            SymbolSpec::bump(0.5).unwrap(),
        ] {
            let r = s.effective_radius(1e-7);
            for i in 0..100 {
                let u = r * (1.0 + i as f64 * 0.1);
                assert!(s.profile(u) <= 1.0001e-7 * s.sup_norm(), "{s:?} at {u}");
            }
        }
        let p = SymbolSpec::phiex(2.0).unwrap();
        assert!((p.sup_norm() - 3f64.sqrt().recip() / (4.0f64 / 3.0).powi(2)).abs() < 1e-15);
    }

    #[test]
    fn json_round_trip() {
        let s = SymbolSpec::phiex(2.5).unwrap();
        let t: SymbolSpec = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(t.m(), 2.5);
        assert!(
            serde_json::from_str::<SymbolSpec>(r#"{"kind":"bump","support_radius":-1}"#).is_err()
        );
    }

    #[test]
    fn bump_preserves_support() {
        let b = SymbolSpec::bump(0.75).unwrap();
        for i in 0..1000 {
            let u = -4.0 + 8.0 * i as f64 / 999.0;
            if u.abs() >= 1.5 {
                assert_eq!(b.value(&[u]) * (3.0 + u.sin()), 0.0);
            }
        }
    }

    proptest! {
        #[test]
        fn radial_symmetry_2d(x in -5.0f64..5.0, y in -5.0f64..5.0) {
            for s in [SymbolSpec::phiex(1.5).unwrap(), SymbolSpec::bump(1.0).unwrap(), SymbolSpec::gaussian(0.7).unwrap()] {
                let v = s.value(&[x, y]);
                for q in [[y, x], [-x, y], [x, -y], [-y, -x]] {
                    prop_assert_eq!(s.value(&q), v);
                }
            }
        }

        #[test]
        fn phiex_decay(r in 1.0f64..1e3, m in 0.6f64..4.0) {
            let s = SymbolSpec::phiex(m).unwrap();
            prop_assert!(s.profile(r) <= r.powf(1.0 - 2.0 * m) * (1.0 + 1e-12));
        }
    }
}
