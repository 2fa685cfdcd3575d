//! Probe and experiment adapters for the particle and plane-wave systems.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::experiment::ExperimentSystem;
use super::probe::ProbeTarget;
use super::projection::{project_to_level_set, AngularMomentumConstraint};
use crate::error::{invalid, Result};
use crate::numerics::{gradient_energy, periodic_quadrature, PeriodicField};
use crate::spherical::{
    augmented_hessian, augmented_lyapunov, distance_to_so2_orbit, distance_to_so3_orbit, integrate_flow_with,
    orbit_frame, orthonormalize, project_form, CircularEquilibrium, PhasePoint, RadialPotential,
};
use crate::torus::{
    lyapunov, orbit_distance, project_to_charge, split_step_with, stability_margin, stationary_residual, OrbitMode,
    PlaneWaveSpec, TorusNlsModel,
};

fn gaussian(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

fn euclid(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Circular orbit in a radial potential under the Verlet flow.
#[derive(Debug, Clone)]
pub struct SphericalSystem {
    pub potential: RadialPotential,
    pub eq: CircularEquilibrium,
    pub dt: f64,
}

impl ExperimentSystem for SphericalSystem {
    fn label(&self) -> String {
        format!("spherical[{}, rho={}]", self.potential.label(), self.eq.rho)
    }

    fn base(&self) -> Vec<f64> {
        self.eq.base.to_array().to_vec()
    }

    fn perturb(&self, delta: f64, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        let d = gaussian(6, rng);
        let n = euclid(&d);
        Ok(self.base().iter().zip(&d).map(|(b, x)| b + delta * x / n).collect())
    }

    fn evolve(&self, u0: &[f64], horizon: f64, stride: usize, observe: &mut dyn FnMut(f64, &[f64])) -> Result<()> {
        integrate_flow_with(&self.potential, &PhasePoint::from_slice(u0), horizon, self.dt, stride, |_, t, u| {
            observe(t, &u.to_array())
        })
    }

    fn orbit_distance(&self, u: &[f64]) -> Result<f64> {
        Ok(distance_to_so3_orbit(&PhasePoint::from_slice(u), &self.eq.base))
    }
}

/// `H − ρ⁻²μ·L` on the angular-momentum level set of a circular orbit.
#[derive(Debug, Clone)]
pub struct SphericalProbe {
    pub potential: RadialPotential,
    pub eq: CircularEquilibrium,
}

impl ProbeTarget for SphericalProbe {
    fn dim(&self) -> usize {
        6
    }

    fn base(&self) -> Vec<f64> {
        self.eq.base.to_array().to_vec()
    }

    fn lyapunov(&self, u: &[f64]) -> Result<f64> {
        Ok(augmented_lyapunov(&self.potential, &self.eq, 0.0, &PhasePoint::from_slice(u)))
    }

    fn project(&self, u: &[f64]) -> Result<Vec<f64>> {
        let mu: Vec<f64> = self.eq.mu().iter().copied().collect();
        project_to_level_set(u, &AngularMomentumConstraint, &mu)
    }

    fn orbit_distance(&self, u: &[f64]) -> Result<f64> {
        Ok(distance_to_so2_orbit(&PhasePoint::from_slice(u), &self.eq))
    }

    fn stationary_residual(&self) -> Result<f64> {
        let b = &self.eq.base;
        let w = self.eq.angular_velocity();
        let r = b.q.norm();
        let gq = b.q * (self.potential.d1(r) / r) - b.p.cross(&w);
        let gp = b.p - w.cross(&b.q);
        Ok((gq.norm_squared() + gp.norm_squared()).sqrt())
    }

    /// The negative direction of the Hessian on the in-plane complement, if any.
    fn seeded_directions(&self) -> Vec<Vec<f64>> {
        let basis = orthonormalize(&orbit_frame(&self.eq, &self.eq.base));
        let h = augmented_hessian(&self.potential, &self.eq, 0.0, &self.eq.base);
        let m = project_form(&h, &basis[1..3]);
        let sym = DMatrix::from_fn(2, 2, |i, j| 0.5 * (m[i][j] + m[j][i]));
        let eig = sym.symmetric_eigen();
        let i = eig.eigenvalues.imin();
        if eig.eigenvalues[i] >= 0.0 {
            return Vec::new();
        }
        let c = eig.eigenvectors.column(i);
        let dir = basis[1] * c[0] + basis[2] * c[1];
        vec![dir.iter().copied().collect()]
    }
}

/// Shape of the initial perturbation of a plane wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PlaneWavePerturbation {
    /// Isotropic Gaussian in the grid values.
    Random,
    /// Real `cos(n k₁ x + φ)` with a seeded phase `φ`.
    Mode { n: usize },
}

/// Constant plane wave `α` under the split-step flow.
#[derive(Debug, Clone)]
pub struct PlaneWaveSystem {
    pub model: TorusNlsModel,
    pub alpha: f64,
    pub dt: f64,
    pub perturbation: PlaneWavePerturbation,
}

impl PlaneWaveSystem {
    fn base_field(&self) -> PeriodicField {
        PeriodicField::constant(&self.model.grid, Complex64::new(self.alpha, 0.0))
    }
}

impl ExperimentSystem for PlaneWaveSystem {
    fn label(&self) -> String {
        format!(
            "planewave[beta={}, lambda={}, L={}, N={}, alpha={}]",
            self.model.beta,
            self.model.lambda,
            self.model.length(),
            self.model.grid.n(),
            self.alpha
        )
    }

    fn base(&self) -> Vec<f64> {
        self.base_field().to_real_vec()
    }

    fn perturb(&self, delta: f64, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        let g = &self.model.grid;
        let v = match self.perturbation {
            PlaneWavePerturbation::Random => PeriodicField::from_real_vec(g, &gaussian(2 * g.n(), rng))?,
            PlaneWavePerturbation::Mode { n } => {
                if n == 0 || n >= g.n() / 2 {
                    return invalid(format!("mode {n} is not a resolved non-zero mode"));
                }
                let phase: f64 = rng.random::<f64>() * std::f64::consts::TAU;
                let k = n as f64 * g.k1();
                PeriodicField::from_fn(g, |x| Complex64::new((k * x + phase).cos(), 0.0))
            }
        };
        let s = delta / v.h1_norm();
        Ok(self.base_field().axpy(s, &v)?.to_real_vec())
    }

    fn evolve(&self, u0: &[f64], horizon: f64, stride: usize, observe: &mut dyn FnMut(f64, &[f64])) -> Result<()> {
        let u = PeriodicField::from_real_vec(&self.model.grid, u0)?;
        split_step_with(&self.model, &u, horizon, self.dt, stride, |_, t, w| observe(t, &w.to_real_vec()))
    }

    fn orbit_distance(&self, u: &[f64]) -> Result<f64> {
        let w = PeriodicField::from_real_vec(&self.model.grid, u)?;
        orbit_distance(&w, &self.base_field(), OrbitMode::GaugeOnly)
    }
}

/// `ℒ = H − (ξ + βk²)F2` around the constant plane wave, on `{F2 = −α²L/2}`.
#[derive(Debug, Clone)]
pub struct PlaneWaveProbe {
    pub model: TorusNlsModel,
    pub spec: PlaneWaveSpec,
}

impl PlaneWaveProbe {
    pub fn new(model: TorusNlsModel, alpha: f64) -> Result<Self> {
        let spec = model.plane_wave_spec(alpha, 0.0)?;
        Ok(Self { model, spec })
    }

    fn field(&self, u: &[f64]) -> Result<PeriodicField> {
        PeriodicField::from_real_vec(&self.model.grid, u)
    }

    fn base_field(&self) -> PeriodicField {
        PeriodicField::constant(&self.model.grid, Complex64::new(self.spec.alpha, 0.0))
    }
}

impl ProbeTarget for PlaneWaveProbe {
    fn dim(&self) -> usize {
        2 * self.model.grid.n()
    }

    fn base(&self) -> Vec<f64> {
        self.base_field().to_real_vec()
    }

    fn lyapunov(&self, u: &[f64]) -> Result<f64> {
        Ok(lyapunov(&self.model, &self.spec, &self.field(u)?))
    }

    /// Expanded around `α` so that no `O(1)` terms cancel.
    fn lyapunov_gap(&self, u: &[f64]) -> Result<f64> {
        let w = self.field(u)?;
        let (a, lam) = (self.spec.alpha, self.model.lambda);
        let c1 = 0.5 * (self.spec.xi - lam * a * a);
        let pot: Vec<f64> = w
            .values()
            .iter()
            .map(|z| {
                let v = z - a;
                let s = 2.0 * a * v.re + v.norm_sqr();
                c1 * s - 0.25 * lam * s * s
            })
            .collect();
        Ok(0.5 * self.model.beta * gradient_energy(&w) + periodic_quadrature(&pot, self.model.grid.dx()))
    }

    fn project(&self, u: &[f64]) -> Result<Vec<f64>> {
        Ok(project_to_charge(&self.field(u)?, self.spec.alpha)?.to_real_vec())
    }

    fn orbit_distance(&self, u: &[f64]) -> Result<f64> {
        orbit_distance(&self.field(u)?, &self.base_field(), OrbitMode::GaugeOnly)
    }

    fn norm(&self, v: &[f64]) -> f64 {
        self.field(v).map(|f| f.h1_norm()).unwrap_or(f64::NAN)
    }

    fn stationary_residual(&self) -> Result<f64> {
        stationary_residual(&self.model, &self.base_field(), self.spec.xi)
    }

    /// The real first Fourier mode when it is a negative Hessian direction.
    fn seeded_directions(&self) -> Vec<Vec<f64>> {
        if stability_margin(&self.model, self.spec.alpha) >= 0.0 {
            return Vec::new();
        }
        let k = self.model.k1();
        vec![PeriodicField::from_fn(&self.model.grid, |x| Complex64::new((k * x).cos(), 0.0)).to_real_vec()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{coercivity_probe, run_stability_experiment, ProbeConfig, StabilityExperiment};
    use crate::numerics::make_grid;
    use crate::spherical::circular_equilibrium;
    use std::f64::consts::PI;

    #[test]
    fn kepler_probe_positive() {
        let v = RadialPotential::Kepler;
        let eq = circular_equilibrium(&v, 1.0, [0.0, 0.0, 1.0]).unwrap();
        let p = SphericalProbe { potential: v, eq };
        assert!(p.stationary_residual().unwrap() < 1e-14);
        assert!(p.seeded_directions().is_empty());
        let r = coercivity_probe(&p, &ProbeConfig { eta: 1e-2, samples: 2000, seed: 5 }).unwrap();
        assert!(r.c_min > 0.0, "{}", r.c_min);
    }

    #[test]
    fn inverse_cube_probe_negative() {
        let v = RadialPotential::power(-1.0, -3.0).unwrap();
        let eq = circular_equilibrium(&v, 1.0, [0.0, 0.0, 1.0]).unwrap();
        let p = SphericalProbe { potential: v, eq };
        assert_eq!(p.seeded_directions().len(), 1);
        let r = coercivity_probe(&p, &ProbeConfig { eta: 1e-3, samples: 10, seed: 5 }).unwrap();
        assert!(r.c_min < 0.0);
    }

    #[test]
    fn planewave_gap_matches_difference() {
        let m = TorusNlsModel::new(1.3, 0.7, make_grid(32, 2.0 * PI).unwrap()).unwrap();
        let p = PlaneWaveProbe::new(m.clone(), 0.8).unwrap();
        let u = PeriodicField::from_fn(&m.grid, |x| Complex64::new(0.8 + 0.05 * x.cos(), 0.03 * (2.0 * x).sin()));
        let u = u.to_real_vec();
        let plain = p.lyapunov(&u).unwrap() - p.lyapunov(&p.base()).unwrap();
        assert!((p.lyapunov_gap(&u).unwrap() - plain).abs() < 1e-13, "{plain}");
    }

    #[test]
    fn tiny_radius_ratios_stay_resolved() {
        let m = TorusNlsModel::new(1.0, -1.0, make_grid(64, 2.0 * PI).unwrap()).unwrap();
        let p = PlaneWaveProbe::new(m, 1.0).unwrap();
        let r = coercivity_probe(&p, &ProbeConfig { eta: 1e-9, samples: 50, seed: 3 }).unwrap();
        assert!(r.c_min > 0.45, "{}", r.c_min);
    }

    #[test]
    fn zero_perturbation_stays_put() {
        let m = TorusNlsModel::new(1.0, -1.0, make_grid(32, 2.0 * PI).unwrap()).unwrap();
        let s = PlaneWaveSystem {
            model: m,
            alpha: 1.0,
            dt: 1e-3,
            perturbation: PlaneWavePerturbation::Random,
        };
        let e = StabilityExperiment {
            deltas: vec![0.0],
            horizon: 1.0,
            stride: 100,
            seed: 1,
        };
        let r = run_stability_experiment(&s, &e).unwrap();
        assert!(r.summary.max_distance <= 1e-8, "{}", r.summary.max_distance);
    }

    #[test]
    fn determinism() {
        let v = RadialPotential::Kepler;
        let eq = circular_equilibrium(&v, 1.0, [0.0, 0.0, 1.0]).unwrap();
        let s = SphericalSystem { potential: v, eq, dt: 1e-2 };
        let e = StabilityExperiment {
            deltas: vec![1e-3, 1e-2],
            horizon: 5.0,
            stride: 10,
            seed: 42,
        };
        let a = run_stability_experiment(&s, &e).unwrap();
        let b = run_stability_experiment(&s, &e).unwrap();
        assert!(a.same_results(&b));
    }
}
