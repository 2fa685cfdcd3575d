use serde::{Deserialize, Serialize};

use super::nonlinearity::InhomogeneousNonlinearity;
use super::shooting::{half_line_integral, shoot_profile_with, LineGrid, ShootOptions, StandingProfile};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub xi: f64,
    pub charge: f64,
    pub peak: f64,
    pub profile: StandingProfile,
}

/// Profiles along an increasing frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveProfileCurve {
    pub points: Vec<CurvePoint>,
    /// Why continuation stopped early, if it did.
    pub termination: Option<String>,
}

impl WaveProfileCurve {
    pub fn xis(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.xi).collect()
    }

    pub fn position(&self, xi: f64) -> Option<usize> {
        self.points.iter().position(|p| (p.xi - xi).abs() <= 1e-12 * xi.abs().max(1e-300))
    }

    pub fn last_xi(&self) -> Option<f64> {
        self.points.last().map(|p| p.xi)
    }
}

/// `steps` frequencies geometrically spaced from `lo` to `hi`.
pub fn geometric_grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0) || !(hi > lo) || steps < 2 {
        return invalid(format!("need 0 < lo < hi and at least two steps, got ({lo}, {hi}, {steps})"));
    }
    let r = (hi / lo).ln() / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i + 1 == steps { hi } else { lo * (r * i as f64).exp() })
        .collect())
}

/// Natural-parameter continuation over a geometric frequency grid, each shot warm
/// started from the previous `w(0)`.
pub fn continue_curve(
    nl: &InhomogeneousNonlinearity,
    xi_lo: f64,
    xi_hi: f64,
    steps: usize,
    grid: &LineGrid,
    opts: &ShootOptions,
) -> Result<WaveProfileCurve> {
    continue_on(nl, &geometric_grid(xi_lo, xi_hi, steps)?, grid, opts)
}

/// Continuation over explicit frequencies (strictly increasing).
pub fn continue_on(
    nl: &InhomogeneousNonlinearity,
    xis: &[f64],
    grid: &LineGrid,
    opts: &ShootOptions,
) -> Result<WaveProfileCurve> {
    if xis.is_empty() || !(xis[0] > 0.0) || xis.windows(2).any(|w| !(w[1] > w[0])) {
        return invalid("frequencies must be positive and strictly increasing");
    }
    let mut points: Vec<CurvePoint> = Vec::with_capacity(xis.len());
    let mut termination = None;
    for &xi in xis {
        let o = ShootOptions {
            guess: points.last().map(|p| p.peak).or(opts.guess),
            ..*opts
        };
        let shot = shoot_profile_with(nl, xi, grid, &o).and_then(|p| {
            let r = p.residual(nl);
            if r > 1e-8 * p.peak().max(1.0) {
                invalid(format!("residual {r:.3e} at ξ = {xi} exceeds 1e-8; refine the step"))
            } else {
                Ok(p)
            }
        });
        match shot {
            Ok(profile) => points.push(CurvePoint {
                xi,
                charge: profile.charge(),
                peak: profile.peak(),
                profile,
            }),
            Err(e) if !points.is_empty() => {
                termination = Some(format!(
                    "{e}; last good ξ = {}",
                    points.last().map(|p| p.xi).unwrap_or(f64::NAN)
                ));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(WaveProfileCurve { points, termination })
}

/// Centered (three-point, non-uniform) derivative of the charge at an interior node.
pub fn charge_slope(curve: &WaveProfileCurve, xi: f64) -> Result<f64> {
    let Some(i) = curve.position(xi) else {
        return invalid(format!("ξ = {xi} is not a node of the curve"));
    };
    if i == 0 || i + 1 >= curve.points.len() {
        return invalid(format!("ξ = {xi} is an endpoint of the curve"));
    }
    let (p0, p1, p2) = (&curve.points[i - 1], &curve.points[i], &curve.points[i + 1]);
    let h1 = p1.xi - p0.xi;
    let h2 = p2.xi - p1.xi;
    Ok(-h2 / (h1 * (h1 + h2)) * p0.charge + (h2 - h1) / (h1 * h2) * p1.charge + h1 / (h2 * (h1 + h2)) * p2.charge)
}

/// Relative defect of the integral identity linking `w`, `χ = dw/dξ` and `f`.
pub fn intid_residual_from(nl: &InhomogeneousNonlinearity, profile: &StandingProfile, chi: &[f64]) -> Result<f64> {
    if chi.len() != profile.values.len() {
        return invalid("χ must be sampled on the profile grid");
    }
    let g = &profile.grid;
    let w = &profile.values;
    let lhs = half_line_integral(g, |j| {
        let x = g.x(j);
        (2.0 * nl.f(x, w[j]) + nl.x_d1f(x, w[j]) - nl.d2f_w2(x, w[j])) * w[j] * chi[j]
    });
    let rhs = 2.0 * profile.xi * half_line_integral(g, |j| w[j] * chi[j]);
    if lhs.abs() < f64::MIN_POSITIVE && rhs.abs() < f64::MIN_POSITIVE {
        return Ok(0.0);
    }
    Ok((lhs - rhs).abs() / (rhs.abs() + 1e-12))
}

/// The identity residual at `ξ`, with `χ` from profiles reshot at `ξ ± dξ`.
pub fn intid_residual(
    nl: &InhomogeneousNonlinearity,
    xi: f64,
    dxi: f64,
    grid: &LineGrid,
    opts: &ShootOptions,
) -> Result<f64> {
    if !(dxi > 0.0 && dxi < xi) {
        return invalid(format!("need 0 < dξ < ξ, got dξ = {dxi}"));
    }
    let center = shoot_profile_with(nl, xi, grid, opts)?;
    let warm = ShootOptions {
        guess: Some(center.peak()),
        ..*opts
    };
    let up = shoot_profile_with(nl, xi + dxi, grid, &warm)?;
    let down = shoot_profile_with(nl, xi - dxi, grid, &warm)?;
    let chi: Vec<f64> = up.values.iter().zip(&down.values).map(|(a, b)| (a - b) / (2.0 * dxi)).collect();
    intid_residual_from(nl, &center, &chi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic() -> InhomogeneousNonlinearity {
        InhomogeneousNonlinearity::pt(3.0, 0.0).unwrap()
    }

    #[test]
    fn curve_follows_the_soliton_family() {
        let g = LineGrid::for_frequency(0.5, 0.01).unwrap();
        let c = continue_on(&cubic(), &[0.5, 0.75, 1.0, 1.5, 2.0], &g, &ShootOptions::default()).unwrap();
        assert!(c.termination.is_none());
        for p in &c.points {
            assert!((p.peak - (2.0 * p.xi).sqrt()).abs() < 1e-6);
        }
        assert!(c.points.windows(2).all(|w| w[1].peak > w[0].peak));
        assert!(charge_slope(&c, 0.5).is_err());
        assert!(charge_slope(&c, 0.9).is_err());
    }

    #[test]
    fn slope_is_inverse_root() {
        let g = LineGrid::for_frequency(0.9, 0.01).unwrap();
        let c = continue_on(&cubic(), &[0.98, 1.0, 1.02], &g, &ShootOptions::default()).unwrap();
        assert!((charge_slope(&c, 1.0).unwrap() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn identity_holds_for_the_soliton() {
        let g = LineGrid::for_frequency(0.9, 0.01).unwrap();
        let r = intid_residual(&cubic(), 1.0, 0.02, &g, &ShootOptions::default()).unwrap();
        assert!(r < 1e-3, "{r}");
    }

    #[test]
    fn identity_guards_zero() {
        let g = LineGrid::new(10.0, 0.1).unwrap();
        let p = StandingProfile {
            xi: 1.0,
            grid: g,
            values: vec![0.0; g.n() + 1],
            slopes: vec![0.0; g.n() + 1],
        };
        assert_eq!(intid_residual_from(&cubic(), &p, &vec![0.0; g.n() + 1]).unwrap(), 0.0);
    }

    #[test]
    fn geometric_grid_endpoints() {
        let g = geometric_grid(0.1, 10.0, 5).unwrap();
        assert_eq!(g[0], 0.1);
        assert_eq!(g[4], 10.0);
        assert!((g[2] - 1.0).abs() < 1e-14);
        assert!(geometric_grid(0.0, 1.0, 3).is_err());
    }
}
