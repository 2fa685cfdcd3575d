use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::numerics::{PeriodicField, PeriodicGrid};
use crate::spherical::{angular_momentum, momentum_jacobian, PhasePoint};

/// Vector-valued constraint `F` on a flat representation of the state.
pub trait ConstraintMap {
    fn values(&self, u: &[f64]) -> Vec<f64>;
    /// `DF(u)` as a `m × n` matrix.
    fn jacobian(&self, u: &[f64]) -> DMatrix<f64>;
    /// Exact solve of `F(u′) = target`, when one exists.
    fn closed_form(&self, _u: &[f64], _target: &[f64]) -> Option<Result<Vec<f64>>> {
        None
    }
}

pub const PROJECTION_TOL: f64 = 1e-10;
pub const PROJECTION_MAX_ITER: usize = 50;

fn defect(f: &dyn ConstraintMap, u: &[f64], target: &[f64]) -> DVector<f64> {
    let v = f.values(u);
    DVector::from_iterator(v.len(), target.iter().zip(&v).map(|(t, x)| t - x))
}

/// Newton iteration with minimum-norm steps `u ← u + DFᵀ(DF DFᵀ)⁻¹(μ − F(u))`.
pub fn project_to_level_set(u: &[f64], f: &dyn ConstraintMap, target: &[f64]) -> Result<Vec<f64>> {
    if let Some(r) = f.closed_form(u, target) {
        return r;
    }
    if f.values(u).len() != target.len() {
        return invalid("target has the wrong number of components");
    }
    let mut x = DVector::from_column_slice(u);
    let mut r = defect(f, u, target);
    for _ in 0..PROJECTION_MAX_ITER {
        if r.norm() <= PROJECTION_TOL {
            return Ok(x.as_slice().to_vec());
        }
        let j = f.jacobian(x.as_slice());
        let gram = &j * j.transpose();
        let c = gram.lu().solve(&r).ok_or_else(|| Error::NoConvergence {
            what: "level-set projection (singular constraint Jacobian)".into(),
            iterations: 0,
            residual: r.norm(),
        })?;
        x += j.transpose() * c;
        r = defect(f, x.as_slice(), target);
        if !r.norm().is_finite() {
            break;
        }
    }
    if r.norm() <= PROJECTION_TOL {
        return Ok(x.as_slice().to_vec());
    }
    Err(Error::NoConvergence {
        what: "level-set projection".into(),
        iterations: PROJECTION_MAX_ITER,
        residual: r.norm(),
    })
}

/// Angular momentum `q ∧ p` on `(q, p) ∈ ℝ⁶`.
#[derive(Debug, Clone, Copy, Default)]
pub struct AngularMomentumConstraint;

impl ConstraintMap for AngularMomentumConstraint {
    fn values(&self, u: &[f64]) -> Vec<f64> {
        angular_momentum(&PhasePoint::from_slice(u)).iter().copied().collect()
    }

    fn jacobian(&self, u: &[f64]) -> DMatrix<f64> {
        let j = momentum_jacobian(&PhasePoint::from_slice(u));
        DMatrix::from_fn(3, 6, |r, c| j[(r, c)])
    }
}

/// `‖u‖²_{L²}` of a periodic field stored as interleaved `(re, im)` pairs.
#[derive(Debug, Clone)]
pub struct ChargeConstraint {
    pub grid: PeriodicGrid,
}

impl ConstraintMap for ChargeConstraint {
    fn values(&self, u: &[f64]) -> Vec<f64> {
        vec![self.grid.dx() * u.iter().map(|v| v * v).sum::<f64>()]
    }

    fn jacobian(&self, u: &[f64]) -> DMatrix<f64> {
        DMatrix::from_fn(1, u.len(), |_, c| 2.0 * self.grid.dx() * u[c])
    }

    fn closed_form(&self, u: &[f64], target: &[f64]) -> Option<Result<Vec<f64>>> {
        Some((|| {
            let field = PeriodicField::from_real_vec(&self.grid, u)?;
            let n2 = field.l2_norm_sq();
            if !(n2 > 0.0) || !(target[0] >= 0.0) {
                return invalid("radial rescale needs a non-zero field and a non-negative target");
            }
            let s = (target[0] / n2).sqrt();
            Ok(u.iter().map(|v| v * s).collect())
        })())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::make_grid;

    #[test]
    fn already_on_level_set() {
        let u = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0];
        let f = AngularMomentumConstraint;
        assert_eq!(project_to_level_set(&u, &f, &[0.0, 0.0, 1.0]).unwrap(), u.to_vec());
    }

    #[test]
    fn newton_hits_the_target() {
        let u = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0];
        let f = AngularMomentumConstraint;
        let target = [0.0, 0.0, 1.0 + 1e-3];
        let v = project_to_level_set(&u, &f, &target).unwrap();
        let l = f.values(&v);
        assert!((l[2] - target[2]).abs() <= 1e-10 && l[0].abs() <= 1e-10 && l[1].abs() <= 1e-10);
        let step: f64 = u.iter().zip(&v).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        assert!(step > 1e-4 && step < 2e-3, "{step}");
    }

    #[test]
    fn charge_rescale() {
        let g = make_grid(16, 2.0 * std::f64::consts::PI).unwrap();
        let f = ChargeConstraint { grid: g.clone() };
        let u: Vec<f64> = (0..32).map(|i| 1.0 + 0.01 * i as f64).collect();
        let target = [2.0 * std::f64::consts::PI];
        let v = project_to_level_set(&u, &f, &target).unwrap();
        assert!((f.values(&v)[0] - target[0]).abs() < 1e-12);
        let s = v[0] / u[0];
        assert!(v.iter().zip(&u).all(|(a, b)| (a / b - s).abs() < 1e-14));
    }
}
