//! Group orbits under rotations: distances, the hat map, Poisson brackets.

use nalgebra::{Matrix3, Rotation3, Unit, Vector3};

use super::equilibrium::{CircularEquilibrium, PhasePoint};
use crate::numerics::finite_diff_gradient;

/// Skew matrix `ξ̂` with `ξ̂ x = ξ ∧ x`.
pub fn hat(xi: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -xi[2], xi[1], xi[2], 0.0, -xi[0], -xi[1], xi[0], 0.0)
}

/// Rotation by `theta` about `axis` (right-hand rule).
pub fn rotation_about(axis: &Vector3<f64>, theta: f64) -> Matrix3<f64> {
    Rotation3::from_axis_angle(&Unit::new_normalize(*axis), theta).into_inner()
}

/// Diagonal action `(q, p) ↦ (Rq, Rp)`.
pub fn rotate(r: &Matrix3<f64>, u: &PhasePoint) -> PhasePoint {
    PhasePoint { q: r * u.q, p: r * u.p }
}

/// Distance from `u` to the circle `{R_θ base}` of rotations about the equilibrium axis.
pub fn distance_to_so2_orbit(u: &PhasePoint, eq: &CircularEquilibrium) -> f64 {
    so2_distance_and_angle(u, &eq.base, &eq.axis).0
}

/// Minimal distance from `u` to `{R_θ v}` and a minimizing angle.
///
/// `⟨u, R_θ v⟩ = A + B cos θ + C sin θ`; only `B` and `C` fix the optimal angle.
pub fn so2_distance_and_angle(u: &PhasePoint, v: &PhasePoint, axis: &Vector3<f64>) -> (f64, f64) {
    let n = axis.normalize();
    let mut b = 0.0;
    let mut c = 0.0;
    for (x, y) in [(&u.q, &v.q), (&u.p, &v.p)] {
        let y_perp = y - n * n.dot(y);
        b += x.dot(&y_perp);
        c += x.dot(&n.cross(&y_perp));
    }
    let theta = c.atan2(b);
    let w = rotate(&rotation_about(&n, theta), v);
    let d = ((u.q - w.q).norm_squared() + (u.p - w.p).norm_squared()).sqrt();
    let theta = theta.rem_euclid(std::f64::consts::TAU);
    (d, if theta < std::f64::consts::TAU { theta } else { 0.0 })
}

/// Distance from `u` to the full rotation orbit `{(Rq, Rp) : R ∈ SO(3)}` of `v`.
///
/// Solved as an orthogonal Procrustes problem.
pub fn distance_to_so3_orbit(u: &PhasePoint, v: &PhasePoint) -> f64 {
    let m = u.q * v.q.transpose() + u.p * v.p.transpose();
    let svd = m.svd(true, true);
    let (Some(a), Some(bt)) = (svd.u, svd.v_t) else {
        return f64::NAN;
    };
    // maximize tr(Rᵀ m) = Σ u_i·(R v_i) over proper rotations
    let mut d = Matrix3::identity();
    if (a * bt).determinant() < 0.0 {
        let k = svd.singular_values.imin();
        d[(k, k)] = -1.0;
    }
    let r = a * d * bt;
    let w = rotate(&r, v);
    ((u.q - w.q).norm_squared() + (u.p - w.p).norm_squared()).sqrt()
}

/// Canonical Poisson bracket `∂_q F·∂_p G − ∂_p F·∂_q G` with finite-difference gradients.
pub fn poisson_bracket_fd(
    f: impl Fn(&[f64]) -> f64,
    g: impl Fn(&[f64]) -> f64,
    u: &PhasePoint,
    h: f64,
) -> f64 {
    let x = u.to_array();
    let df = finite_diff_gradient(&f, &x, h);
    let dg = finite_diff_gradient(&g, &x, h);
    let mut s = 0.0;
    for i in 0..3 {
        s += df[i] * dg[i + 3] - df[i + 3] * dg[i];
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spherical::{angular_momentum, circular_equilibrium, RadialPotential};

    #[test]
    fn so2_distance_on_orbit_is_zero() {
        let eq = circular_equilibrium(&RadialPotential::Kepler, 1.0, [0.2, 0.1, 1.0]).unwrap();
        assert!(distance_to_so2_orbit(&eq.base, &eq) < 1e-15);
        assert!(so2_distance_and_angle(&eq.base, &eq.base, &eq.axis).1 < std::f64::consts::TAU);
        let u = rotate(&rotation_about(&eq.axis, std::f64::consts::PI / 3.0), &eq.base);
        assert!(distance_to_so2_orbit(&u, &eq) < 1e-12);
        let (d, th) = so2_distance_and_angle(&u, &eq.base, &eq.axis);
        assert!(d < 1e-12);
        assert!((th - std::f64::consts::PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn hat_is_cross_product() {
        let a = Vector3::new(0.3, -1.0, 2.0);
        let b = Vector3::new(1.5, 0.2, -0.7);
        assert!((hat(&a) * b - a.cross(&b)).norm() < 1e-15);
    }

    #[test]
    fn bracket_of_momentum_components() {
        let u = PhasePoint::new([0.4, -1.1, 0.8], [0.3, 0.9, -0.2]);
        let l = |i: usize| move |x: &[f64]| angular_momentum(&PhasePoint::from_slice(x))[i];
        let b = poisson_bracket_fd(l(0), l(1), &u, 1e-5);
        assert!((b - angular_momentum(&u)[2]).abs() < 1e-6);
        assert!(poisson_bracket_fd(l(2), l(2), &u, 1e-5).abs() < 1e-12);
    }
}
