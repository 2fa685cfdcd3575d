//! Circular orbits, their stability verdict, and Lyapunov Hessians in the orbit frame.

use nalgebra::{Matrix3, SMatrix, Vector3};

use super::potential::RadialPotential;
use crate::error::{invalid, Result};
use crate::numerics::{eig_banded, BandedSymmetricMatrix};
use crate::Verdict;

pub type Matrix6 = SMatrix<f64, 6, 6>;
pub type Vector6 = SMatrix<f64, 6, 1>;

/// A point `(q, p)` of phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub q: Vector3<f64>,
    pub p: Vector3<f64>,
}

impl PhasePoint {
    pub fn new(q: [f64; 3], p: [f64; 3]) -> Self {
        Self {
            q: Vector3::from(q),
            p: Vector3::from(p),
        }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.q[0], self.q[1], self.q[2], self.p[0], self.p[1], self.p[2]]
    }

    pub fn from_slice(u: &[f64]) -> Self {
        Self {
            q: Vector3::new(u[0], u[1], u[2]),
            p: Vector3::new(u[3], u[4], u[5]),
        }
    }

    pub fn to_vector(&self) -> Vector6 {
        Vector6::from_column_slice(&self.to_array())
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    pub fn norm(&self) -> f64 {
        (self.q.norm_squared() + self.p.norm_squared()).sqrt()
    }
}

/// `q ∧ p`.
pub fn angular_momentum(u: &PhasePoint) -> Vector3<f64> {
    u.q.cross(&u.p)
}

/// `|p|^2/2 + V(|q|)`.
pub fn hamiltonian(v: &RadialPotential, u: &PhasePoint) -> f64 {
    0.5 * u.p.norm_squared() + v.value(u.q.norm())
}

/// Orbit labels `(ρ, σ, α) = (|q|, |p|, q·p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSpec {
    pub rho: f64,
    pub sigma: f64,
    pub alpha: f64,
}

impl OrbitSpec {
    pub fn new(rho: f64, sigma: f64, alpha: f64) -> Result<Self> {
        if rho < 0.0 || sigma < 0.0 || alpha.abs() > rho * sigma * (1.0 + 1e-12) {
            return invalid(format!("orbit labels need ρ, σ ≥ 0 and |α| ≤ ρσ (got {rho}, {sigma}, {alpha})"));
        }
        Ok(Self { rho, sigma, alpha })
    }

    pub fn of(u: &PhasePoint) -> Self {
        Self {
            rho: u.q.norm(),
            sigma: u.p.norm(),
            alpha: u.q.dot(&u.p),
        }
    }

    /// A canonical representative: `q` along x, `p` in the x-y plane.
    pub fn representative(&self) -> PhasePoint {
        let (c, s) = if self.rho * self.sigma > 0.0 {
            let c = (self.alpha / (self.rho * self.sigma)).clamp(-1.0, 1.0);
            (c, (1.0 - c * c).sqrt())
        } else {
            (1.0, 0.0)
        };
        PhasePoint::new([self.rho, 0.0, 0.0], [self.sigma * c, self.sigma * s, 0.0])
    }
}

/// A circular relative equilibrium of radius `rho` turning about `axis`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircularEquilibrium {
    pub rho: f64,
    pub sigma: f64,
    pub axis: Vector3<f64>,
    pub base: PhasePoint,
}

impl CircularEquilibrium {
    /// Momentum value `μ = ρσ μ̂`.
    pub fn mu(&self) -> Vector3<f64> {
        self.axis * (self.rho * self.sigma)
    }

    /// Angular velocity `ρ^-2 μ` of the rotation generating the orbit.
    pub fn angular_velocity(&self) -> Vector3<f64> {
        self.mu() / (self.rho * self.rho)
    }

    /// Check the defining relations at `u` to tolerance `tol`.
    pub fn on_orbit(&self, u: &PhasePoint, tol: f64) -> bool {
        let scale = 1.0 + self.rho.max(self.sigma).powi(2);
        (u.q.norm() - self.rho).abs() <= tol * (1.0 + self.rho)
            && (u.p.norm() - self.sigma).abs() <= tol * (1.0 + self.sigma)
            && u.q.dot(&u.p).abs() <= tol * scale
            && (angular_momentum(u) - self.mu()).norm() <= tol * scale
    }
}

/// Unit vector perpendicular to `axis`, chosen deterministically.
fn perpendicular(axis: &Vector3<f64>) -> Vector3<f64> {
    let i = axis.iamin();
    let mut e = Vector3::zeros();
    e[i] = 1.0;
    let v = e - axis * axis.dot(&e);
    v.normalize()
}

/// The circular orbit of radius `rho` whose angular momentum points along `axis`.
pub fn circular_equilibrium(v: &RadialPotential, rho: f64, axis: [f64; 3]) -> Result<CircularEquilibrium> {
    if !(rho > 0.0) {
        return invalid(format!("radius must be positive, got {rho}"));
    }
    let axis = Vector3::from(axis);
    if axis.norm() < 1e-8 {
        return invalid("rotation axis is (near) zero; μ = 0 is excluded");
    }
    let axis = axis.normalize();
    let d1 = v.d1(rho);
    if !(d1 > 0.0) {
        return invalid(format!("no circular orbit at r = {rho}: V'(r) = {d1} is not positive"));
    }
    let sigma = (rho * d1).sqrt();
    let qhat = perpendicular(&axis);
    let phat = axis.cross(&qhat);
    Ok(CircularEquilibrium {
        rho,
        sigma,
        axis,
        base: PhasePoint {
            q: qhat * rho,
            p: phat * sigma,
        },
    })
}

/// Stable iff `V''ρ² + 3σ² > 0`; marginal within 1e-9 relative.
pub fn circular_stability_verdict(v: &RadialPotential, rho: f64) -> Result<Verdict> {
    Ok(stability_margin(v, rho)?.0)
}

/// Verdict together with the value of `V''ρ² + 3σ²`.
pub fn stability_margin(v: &RadialPotential, rho: f64) -> Result<(Verdict, f64)> {
    let (_, d1, d2) = v.eval(rho);
    if !(rho > 0.0) || !(d1 > 0.0) {
        return invalid(format!("no circular orbit at r = {rho}: V'(r) = {d1}"));
    }
    let s2 = rho * d1;
    let lhs = d2 * rho * rho + 3.0 * s2;
    let scale = (d2 * rho * rho).abs() + 3.0 * s2;
    Ok((Verdict::from_sign(lhs, 1e-9 * scale), lhs))
}

/// The (unnormalized, mutually orthogonal) frame `e1..e6` at an orbit point.
///
/// `e1` is tangent to the orbit, `e2, e3` span the in-plane complement,
/// `e4..e6` leave the orbit's momentum level.
pub fn orbit_frame(eq: &CircularEquilibrium, at: &PhasePoint) -> [Vector6; 6] {
    let (rho, sigma) = (eq.rho, eq.sigma);
    let (q, p) = (at.q, at.p);
    let s = (sigma / rho).powi(2);
    let n = q.normalize().cross(&p.normalize());
    let pair = |a: Vector3<f64>, b: Vector3<f64>| Vector6::new(a[0], a[1], a[2], b[0], b[1], b[2]);
    let z = Vector3::zeros();
    let e6 = pair(q.normalize() * sigma, p.normalize() * rho) / (rho * rho + sigma * sigma).sqrt();
    [
        pair(p, -q * s),
        pair(q, -p),
        pair(p, q),
        pair(n, z),
        pair(z, n),
        e6,
    ]
}

/// Gram–Schmidt orthonormalization in order.
pub fn orthonormalize(frame: &[Vector6]) -> Vec<Vector6> {
    let mut out: Vec<Vector6> = Vec::with_capacity(frame.len());
    for v in frame {
        let mut w = *v;
        for u in &out {
            w -= u * u.dot(&w);
        }
        out.push(w.normalize());
    }
    out
}

/// Hessian of `H` at `u`.
pub fn hessian_h(v: &RadialPotential, u: &PhasePoint) -> Matrix6 {
    let r = u.q.norm();
    let qh = u.q / r;
    let (_, d1, d2) = v.eval(r);
    let hv = qh * qh.transpose() * d2 + (Matrix3::identity() - qh * qh.transpose()) * (d1 / r);
    let mut m = Matrix6::zeros();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(&hv);
    m.fixed_view_mut::<3, 3>(3, 3).copy_from(&Matrix3::identity());
    m
}

fn hat(x: &Vector3<f64>) -> Matrix3<f64> {
    x.cross_matrix()
}

/// Hessian of `u ↦ μ·L(u)` (constant in `u`).
pub fn hessian_momentum(mu: &Vector3<f64>) -> Matrix6 {
    let mut m = Matrix6::zeros();
    let h = hat(mu);
    m.fixed_view_mut::<3, 3>(0, 3).copy_from(&h.transpose());
    m.fixed_view_mut::<3, 3>(3, 0).copy_from(&h);
    m
}

/// Jacobian of `L` at `u` (3×6).
pub fn momentum_jacobian(u: &PhasePoint) -> SMatrix<f64, 3, 6> {
    let mut j = SMatrix::<f64, 3, 6>::zeros();
    j.fixed_view_mut::<3, 3>(0, 0).copy_from(&(-hat(&u.p)));
    j.fixed_view_mut::<3, 3>(0, 3).copy_from(&hat(&u.q));
    j
}

/// Closed-form Hessian blocks in the frame `e1, e2, e3` at a point of the orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct HessianBlocks {
    /// `D²H(e_i, e_j)`
    pub d2h: Matrix3<f64>,
    /// `D²(μ·L)(e_i, e_j)`
    pub d2_momentum: Matrix3<f64>,
}

impl HessianBlocks {
    /// `D²H − ρ⁻² D²(μ·L)` on the same frame.
    pub fn lagrangian(&self, rho: f64) -> Matrix3<f64> {
        self.d2h - self.d2_momentum / (rho * rho)
    }
}

/// The two 3×3 matrices of `D²H` and `D²(μ·L)` in the frame `e1, e2, e3`.
///
/// Entries depend only on `ρ, σ, V'(ρ), V''(ρ)`.
pub fn hessian_blocks(v: &RadialPotential, eq: &CircularEquilibrium, at: &PhasePoint) -> Result<HessianBlocks> {
    if !eq.on_orbit(at, 1e-8) {
        return invalid("point does not lie on the circular orbit (tolerance 1e-8)");
    }
    let (rho, sigma) = (eq.rho, eq.sigma);
    let (_, d1, d2) = v.eval(rho);
    let s2 = sigma * sigma;
    let r2 = rho * rho;
    let off = (d1 / rho - 1.0) * s2;
    let d2h = Matrix3::new(
        s2 * s2 / r2 + d1 * s2 / rho,
        0.0,
        off,
        0.0,
        s2 + d2 * r2,
        0.0,
        off,
        0.0,
        r2 + d1 * s2 / rho,
    );
    let m_off = s2 * s2 - r2 * s2;
    let d2_momentum = Matrix3::new(
        2.0 * s2 * s2,
        0.0,
        m_off,
        0.0,
        -2.0 * r2 * s2,
        0.0,
        m_off,
        0.0,
        -2.0 * r2 * s2,
    );
    Ok(HessianBlocks { d2h, d2_momentum })
}

/// `ℒ_K(u) = H(u) − ρ⁻² μ·L(u) + K |L(u) − μ|²`.
pub fn augmented_lyapunov(v: &RadialPotential, eq: &CircularEquilibrium, k: f64, u: &PhasePoint) -> f64 {
    let l = angular_momentum(u);
    let mu = eq.mu();
    hamiltonian(v, u) - mu.dot(&l) / (eq.rho * eq.rho) + k * (l - mu).norm_squared()
}

/// Full 6×6 Hessian of `ℒ_K` at an orbit point.
pub fn augmented_hessian(v: &RadialPotential, eq: &CircularEquilibrium, k: f64, at: &PhasePoint) -> Matrix6 {
    let j = momentum_jacobian(at);
    hessian_h(v, at) - hessian_momentum(&eq.mu()) / (eq.rho * eq.rho) + j.transpose() * j * (2.0 * k)
}

/// Projection of a 6×6 form onto orthonormal directions.
pub fn project_form(m: &Matrix6, basis: &[Vector6]) -> Vec<Vec<f64>> {
    basis
        .iter()
        .map(|a| basis.iter().map(|b| (a.transpose() * m * b)[(0, 0)]).collect())
        .collect()
}

/// Smallest eigenvalue of `D²ℒ_K` at the base point restricted to `span{e2..e6}`.
pub fn min_eig_restricted(v: &RadialPotential, eq: &CircularEquilibrium, k: f64) -> Result<f64> {
    if k < 0.0 {
        return invalid("augmentation constant K must be non-negative");
    }
    let basis = orthonormalize(&orbit_frame(eq, &eq.base));
    let h = augmented_hessian(v, eq, k, &eq.base);
    let m = project_form(&h, &basis[1..]);
    let sym = symmetrize(m);
    let report = eig_banded(&BandedSymmetricMatrix::from_dense(&sym, 4)?, 1)?;
    Ok(report.eigenvalues[0])
}

/// Smallest eigenvalue of `D²ℒ` on `span{e2, e3}` only.
pub fn min_eig_in_plane(v: &RadialPotential, eq: &CircularEquilibrium) -> Result<f64> {
    let basis = orthonormalize(&orbit_frame(eq, &eq.base));
    let h = augmented_hessian(v, eq, 0.0, &eq.base);
    let sym = symmetrize(project_form(&h, &basis[1..3]));
    let report = eig_banded(&BandedSymmetricMatrix::from_dense(&sym, 1)?, 1)?;
    Ok(report.eigenvalues[0])
}

fn symmetrize(mut m: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = m.len();
    for i in 0..n {
        for j in 0..i {
            let a = 0.5 * (m[i][j] + m[j][i]);
            m[i][j] = a;
            m[j][i] = a;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circular_speeds() {
        let eq = circular_equilibrium(&RadialPotential::Kepler, 1.0, [0.0, 0.0, 1.0]).unwrap();
        assert!((eq.sigma - 1.0).abs() < 1e-15);
        assert!(eq.on_orbit(&eq.base, 1e-14));
        let eq = circular_equilibrium(&RadialPotential::Harmonic, 2.0, [1.0, 1.0, 0.0]).unwrap();
        assert!((eq.sigma - 2.0).abs() < 1e-15);
        let l = angular_momentum(&eq.base);
        assert!((l.normalize() - eq.axis).norm() < 1e-14);
        let bad = RadialPotential::power(-1.0, 2.0).unwrap();
        assert!(circular_equilibrium(&bad, 1.0, [0.0, 0.0, 1.0]).is_err());
        assert!(circular_equilibrium(&RadialPotential::Kepler, 1.0, [0.0, 0.0, 1e-9]).is_err());
    }

    #[test]
    fn verdicts() {
        assert_eq!(circular_stability_verdict(&RadialPotential::Kepler, 1.0).unwrap(), Verdict::Stable);
        let v = RadialPotential::power(-1.0, -3.0).unwrap();
        assert_eq!(circular_stability_verdict(&v, 1.0).unwrap(), Verdict::Unstable);
        for r in [0.1, 1.0, 7.0] {
            assert_eq!(circular_stability_verdict(&RadialPotential::Harmonic, r).unwrap(), Verdict::Stable);
        }
        // V = -r^-2: V''ρ² + 3σ² = -6 + 6 = 0 at every radius
        let v = RadialPotential::power(-1.0, -2.0).unwrap();
        assert_eq!(circular_stability_verdict(&v, 1.3).unwrap(), Verdict::Marginal);
    }

    #[test]
    fn kepler_blocks() {
        let eq = circular_equilibrium(&RadialPotential::Kepler, 1.0, [0.0, 0.0, 1.0]).unwrap();
        let b = hessian_blocks(&RadialPotential::Kepler, &eq, &eq.base).unwrap();
        let want = Matrix3::new(2.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 2.0);
        assert!((b.d2h - want).norm() < 1e-14);
        let l = b.lagrangian(eq.rho);
        // tangent direction is null, in-plane block diagonal
        assert!(l.row(0).norm() < 1e-14);
        assert!((l[(1, 1)] - 1.0).abs() < 1e-14);
        assert!((l[(2, 2)] - 4.0).abs() < 1e-14);
    }

    #[test]
    fn blocks_reject_off_orbit_points() {
        let eq = circular_equilibrium(&RadialPotential::Kepler, 1.0, [0.0, 0.0, 1.0]).unwrap();
        let mut u = eq.base;
        u.q *= 1.001;
        assert!(hessian_blocks(&RadialPotential::Kepler, &eq, &u).is_err());
    }

    #[test]
    fn frame_is_orthogonal() {
        let eq = circular_equilibrium(&RadialPotential::Harmonic, 1.7, [0.3, -0.2, 0.9]).unwrap();
        let f = orbit_frame(&eq, &eq.base);
        for i in 0..6 {
            for j in 0..i {
                assert!(f[i].dot(&f[j]).abs() < 1e-12, "e{} . e{}", i + 1, j + 1);
            }
        }
    }

    #[test]
    fn augmented_coercivity() {
        let eq = circular_equilibrium(&RadialPotential::Kepler, 1.0, [0.0, 0.0, 1.0]).unwrap();
        assert!(min_eig_restricted(&RadialPotential::Kepler, &eq, 10.0).unwrap() > 0.0);
        assert!(min_eig_restricted(&RadialPotential::Kepler, &eq, 0.0).unwrap() <= 0.0);
        let v = RadialPotential::power(-1.0, -3.0).unwrap();
        let eq = circular_equilibrium(&v, 1.0, [0.0, 0.0, 1.0]).unwrap();
        for k in [0.0, 1.0, 100.0] {
            assert!(min_eig_restricted(&v, &eq, k).unwrap() < 0.0);
        }
        // unit-normalized e2 has |e2|² = ρ² + σ² = 4
        assert!((min_eig_in_plane(&v, &eq).unwrap() - (-0.75)).abs() < 1e-12);
    }

    #[test]
    fn lyapunov_is_constant_on_orbit() {
        let v = RadialPotential::Kepler;
        let eq = circular_equilibrium(&v, 1.3, [0.0, 1.0, 0.0]).unwrap();
        let l0 = augmented_lyapunov(&v, &eq, 0.0, &eq.base);
        for th in [0.3, 1.9, 4.0] {
            let r = nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(eq.axis), th);
            let u = PhasePoint {
                q: r * eq.base.q,
                p: r * eq.base.p,
            };
            assert!((augmented_lyapunov(&v, &eq, 2.0, &u) - l0).abs() < 1e-14);
        }
    }
}
