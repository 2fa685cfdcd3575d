//! Bright solitons, Galilean boosts, and Manakov soliton data.

use num_complex::Complex64;

use super::evolve::{split_step_evolve, VectorField};
use super::model::TorusNlsModel;
use crate::error::{invalid, Result};
use crate::numerics::{PeriodicField, PeriodicGrid};

/// Offset of `x` from `center`, wrapped into `[−L/2, L/2)`.
fn wrapped(x: f64, center: f64, l: f64) -> f64 {
    (x - center + 0.5 * l).rem_euclid(l) - 0.5 * l
}

/// `α√(2/λ) sech(α(x − ct)) e^{i(cx/2 + (α² − c²/4)t)}` for `β = 1`.
///
/// The profile is centred at `ct` and the coordinate wraps at the antipode, where the
/// amplitude is negligible on admissible domains.
pub fn bright_soliton(grid: &PeriodicGrid, alpha: f64, c: f64, lambda: f64, t: f64) -> Result<PeriodicField> {
    if !(lambda > 0.0) {
        return invalid("bright solitons need a focusing nonlinearity (λ > 0)");
    }
    if !(alpha > 0.0) {
        return invalid("soliton amplitude must be positive");
    }
    let l = grid.length();
    if alpha * l < 20.0 {
        return invalid(format!("domain too short: αL = {} < 20", alpha * l));
    }
    let amp = alpha * (2.0 / lambda).sqrt();
    let center = c * t;
    let omega = alpha * alpha - 0.25 * c * c;
    Ok(PeriodicField::from_fn(grid, |x| {
        let y = wrapped(x, center, l);
        let phase = 0.5 * c * (center + y) + omega * t;
        Complex64::from_polar(amp / (alpha * y).cosh(), phase)
    }))
}

/// `Ψ_v u = e^{−ivx/2} u`; requires `v/2` on the wavenumber lattice.
pub fn boost(u: &PeriodicField, v: f64) -> Result<PeriodicField> {
    let g = u.grid();
    if g.lattice_index(0.5 * v).is_none() {
        return invalid(format!("boost velocity {v} is not lattice-admissible (v/2 must be a multiple of 2π/L)"));
    }
    let vals = u
        .values()
        .iter()
        .enumerate()
        .map(|(j, w)| w * Complex64::from_polar(1.0, -0.5 * v * g.x(j)))
        .collect();
    PeriodicField::new(g.clone(), vals)
}

/// `e^{iγ} u(x − a)`.
pub fn symmetry_action(u: &PeriodicField, shift: f64, gamma: f64) -> PeriodicField {
    u.translate(shift).scale(Complex64::from_polar(1.0, gamma))
}

/// `‖Ψ_v Φ_t Ψ_{−v} u − e^{−iβv²t/4} (Φ_t u)(x − βvt)‖_{L²}` with split-step flows.
pub fn boost_commutation_residual(model: &TorusNlsModel, u: &PeriodicField, v: f64, t: f64, dt: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let steps = (t / dt).round().max(1.0) as usize;
    let flow = |w: &PeriodicField| -> Result<PeriodicField> {
        let traj = split_step_evolve(model, w, t, dt, steps)?;
        Ok(traj.fields.last().cloned().unwrap_or_else(|| w.clone()))
    };
    let lhs = boost(&flow(&boost(u, -v)?)?, v)?;
    let rhs = symmetry_action(&flow(u)?, model.beta * v * t, -0.25 * model.beta * v * v * t);
    Ok(lhs.sub(&rhs)?.l2_norm())
}

/// Parameters `(α, c, θ, γ1, γ2)` of a Manakov soliton.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManakovSolitonParams {
    pub alpha: f64,
    pub c: f64,
    pub theta: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

/// `(cos θ e^{iγ1}, sin θ e^{iγ2}) · s(t, x)` with `s` the scalar bright soliton.
pub fn manakov_soliton(grid: &PeriodicGrid, nu: &ManakovSolitonParams, lambda: f64, t: f64) -> Result<VectorField> {
    let s = bright_soliton(grid, nu.alpha, nu.c, lambda, t)?;
    let a = Complex64::from_polar(nu.theta.cos(), nu.gamma1);
    let b = Complex64::from_polar(nu.theta.sin(), nu.gamma2);
    VectorField::new(s.scale(a), s.scale(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::make_grid;
    use crate::torus::model::stationary_residual;

    #[test]
    fn soliton_shape() {
        let g = make_grid(512, 40.0).unwrap();
        let s = bright_soliton(&g, 1.0, 0.0, 1.0, 0.0).unwrap();
        let peak = s.values()[0];
        assert!((peak.re - 2f64.sqrt()).abs() < 1e-15 && peak.im == 0.0);
        for j in 1..256 {
            let a = s.values()[j];
            let b = s.values()[512 - j];
            assert!((a - b).norm() < 1e-14);
            assert!(a.norm() < peak.norm());
        }
        assert!(bright_soliton(&g, 1.0, 0.0, -1.0, 0.0).is_err());
        assert!(bright_soliton(&g, 0.4, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn soliton_is_stationary() {
        let g = make_grid(1024, 60.0).unwrap();
        let m = TorusNlsModel::new(1.0, 1.0, g.clone()).unwrap();
        let s = bright_soliton(&g, 1.0, 0.0, 1.0, 0.0).unwrap();
        assert!(stationary_residual(&m, &s, 1.0).unwrap() < 1e-7);
    }

    #[test]
    fn boost_requires_lattice_velocity() {
        let g = make_grid(64, 16.0 * std::f64::consts::PI).unwrap();
        let u = PeriodicField::constant(&g, Complex64::new(1.0, 0.0));
        assert!(boost(&u, 1.0).is_ok());
        assert!(boost(&u, 0.3).is_err());
    }

    #[test]
    fn trivial_boost_residuals() {
        let g = make_grid(256, 16.0 * std::f64::consts::PI).unwrap();
        let m = TorusNlsModel::new(1.0, 1.0, g.clone()).unwrap();
        let s = bright_soliton(&g, 1.0, 0.0, 1.0, 0.0).unwrap();
        assert!(boost_commutation_residual(&m, &s, 0.0, 0.1, 1e-3).unwrap() < 1e-14);
        assert_eq!(boost_commutation_residual(&m, &s, 1.0, 0.0, 1e-3).unwrap(), 0.0);
    }

    #[test]
    fn manakov_reduces_to_scalar() {
        let g = make_grid(256, 40.0).unwrap();
        let nu = ManakovSolitonParams {
            alpha: 1.0,
            c: 0.5,
            theta: 0.0,
            gamma1: 0.0,
            gamma2: 0.3,
        };
        let m = manakov_soliton(&g, &nu, 1.0, 0.2).unwrap();
        let s = bright_soliton(&g, 1.0, 0.5, 1.0, 0.2).unwrap();
        assert!(m.first.sub(&s).unwrap().max_abs() < 1e-15);
        assert_eq!(m.second.max_abs(), 0.0);
    }
}
