//! Radial potentials `V(r)` with first and second derivatives.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numerics::CubicSpline;

/// A radial potential. Evaluators are only meaningful for `r > 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum RadialPotential {
    /// `V(r) = scale * r^exponent`
    Power { scale: f64, exponent: f64 },
    /// `V(r) = -1/r`
    Kepler,
    /// `V(r) = r^2/2`
    Harmonic,
    /// `Σ scale_i * r^exponent_i`
    PowerSum(Vec<(f64, f64)>),
    /// Natural cubic spline through tabulated `(r, V)` pairs.
    Table(CubicSpline),
}

/// Serializable description used by configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    Kepler,
    Harmonic,
    Power { scale: f64, exponent: f64 },
    PowerSum { terms: Vec<[f64; 2]> },
    Table { r: Vec<f64>, v: Vec<f64> },
}

impl PotentialSpec {
    pub fn build(&self) -> Result<RadialPotential> {
        Ok(match self {
            PotentialSpec::Kepler => RadialPotential::Kepler,
            PotentialSpec::Harmonic => RadialPotential::Harmonic,
            PotentialSpec::Power { scale, exponent } => RadialPotential::power(*scale, *exponent)?,
            PotentialSpec::PowerSum { terms } => {
                RadialPotential::power_sum(terms.iter().map(|t| (t[0], t[1])).collect())?
            }
            PotentialSpec::Table { r, v } => RadialPotential::table(r.clone(), v.clone())?,
        })
    }
}

impl RadialPotential {
    pub fn power(scale: f64, exponent: f64) -> Result<Self> {
        if !scale.is_finite() || !exponent.is_finite() {
            return invalid("power potential parameters must be finite");
        }
        Ok(RadialPotential::Power { scale, exponent })
    }

    pub fn power_sum(terms: Vec<(f64, f64)>) -> Result<Self> {
        if terms.is_empty() || terms.iter().any(|(s, p)| !s.is_finite() || !p.is_finite()) {
            return invalid("power sum needs finite terms");
        }
        Ok(RadialPotential::PowerSum(terms))
    }

    pub fn table(r: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if r.first().is_some_and(|&r0| r0 <= 0.0) {
            return invalid("tabulated radii must be positive");
        }
        Ok(RadialPotential::Table(CubicSpline::natural(r, v)?))
    }

    fn power_terms(s: f64, p: f64, r: f64) -> (f64, f64, f64) {
        (s * r.powf(p), s * p * r.powf(p - 1.0), s * p * (p - 1.0) * r.powf(p - 2.0))
    }

    /// `(V, V', V'')` at radius `r`.
    pub fn eval(&self, r: f64) -> (f64, f64, f64) {
        match self {
            RadialPotential::Power { scale, exponent } => Self::power_terms(*scale, *exponent, r),
            RadialPotential::Kepler => (-1.0 / r, 1.0 / (r * r), -2.0 / (r * r * r)),
            RadialPotential::Harmonic => (0.5 * r * r, r, 1.0),
            RadialPotential::PowerSum(terms) => {
                let mut acc = (0.0, 0.0, 0.0);
                for (s, p) in terms {
                    let t = Self::power_terms(*s, *p, r);
                    acc.0 += t.0;
                    acc.1 += t.1;
                    acc.2 += t.2;
                }
                acc
            }
            RadialPotential::Table(s) => s.eval_all(r),
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        self.eval(r).0
    }

    pub fn d1(&self, r: f64) -> f64 {
        self.eval(r).1
    }

    pub fn d2(&self, r: f64) -> f64 {
        self.eval(r).2
    }

    pub fn label(&self) -> String {
        match self {
            RadialPotential::Power { scale, exponent } => format!("{scale}*r^{exponent}"),
            RadialPotential::Kepler => "kepler".into(),
            RadialPotential::Harmonic => "harmonic".into(),
            RadialPotential::PowerSum(t) => t
                .iter()
                .map(|(s, p)| format!("{s}*r^{p}"))
                .collect::<Vec<_>>()
                .join(" + "),
            RadialPotential::Table(_) => "table".into(),
        }
    }

    /// Cross-check `V'` and `V''` against centered differences of `V` and `V'` at `r`.
    ///
    /// Returns the larger of the two relative mismatches.
    pub fn consistency_error(&self, r: f64) -> f64 {
        let h = 1e-5 * r.max(1e-3);
        let (_, d1, d2) = self.eval(r);
        let fd1 = (self.value(r + h) - self.value(r - h)) / (2.0 * h);
        let fd2 = (self.d1(r + h) - self.d1(r - h)) / (2.0 * h);
        let e1 = (fd1 - d1).abs() / d1.abs().max(1.0);
        let e2 = (fd2 - d2).abs() / d2.abs().max(1.0);
        e1.max(e2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let (v, d1, d2) = RadialPotential::Kepler.eval(2.0);
        assert_eq!((v, d1, d2), (-0.5, 0.25, -0.25));
        let (v, d1, d2) = RadialPotential::Harmonic.eval(2.0);
        assert_eq!((v, d1, d2), (2.0, 2.0, 1.0));
        let p = RadialPotential::power(-1.0, -3.0).unwrap();
        let (v, d1, d2) = p.eval(1.0);
        assert_eq!((v, d1, d2), (-1.0, 3.0, -12.0));
    }

    #[test]
    fn evaluators_are_consistent() {
        let pots = vec![
            RadialPotential::Kepler,
            RadialPotential::Harmonic,
            RadialPotential::power(-1.0, -3.0).unwrap(),
            RadialPotential::power_sum(vec![(0.25, 4.0), (-0.5, 2.0)]).unwrap(),
        ];
        for p in &pots {
            for r in [0.5, 1.0, 1.7, 3.0] {
                assert!(p.consistency_error(r) < 1e-6, "{} at {r}", p.label());
            }
        }
    }

    #[test]
    fn table_tracks_smooth_potential() {
        let r: Vec<f64> = (0..=200).map(|i| 0.5 + i as f64 * 0.02).collect();
        let v: Vec<f64> = r.iter().map(|x| -1.0 / x).collect();
        let t = RadialPotential::table(r, v).unwrap();
        let (v, d1, _) = t.eval(2.0);
        assert!((v + 0.5).abs() < 1e-7);
        assert!((d1 - 0.25).abs() < 1e-5);
        assert!(RadialPotential::table(vec![0.0, 1.0, 2.0], vec![0.0; 3]).is_err());
    }

    #[test]
    fn spec_roundtrip() {
        let s: PotentialSpec = toml::from_str("kind = \"power\"\nscale = -1.0\nexponent = -3.0").unwrap();
        assert_eq!(s.build().unwrap(), RadialPotential::power(-1.0, -3.0).unwrap());
    }
}
