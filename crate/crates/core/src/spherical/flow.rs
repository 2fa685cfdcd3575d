//! Störmer–Verlet integration of `q' = p, p' = -V'(|q|) q̂`.

use nalgebra::Vector3;

use super::equilibrium::PhasePoint;
use super::potential::RadialPotential;
use crate::error::{invalid, Error, Result};

/// Positions closer than this to the origin abort the run.
pub const CLOSE_APPROACH: f64 = 1e-8;

/// Samples of a trajectory at uniform spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<PhasePoint>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> Option<&PhasePoint> {
        self.states.last()
    }
}

fn force(v: &RadialPotential, q: &Vector3<f64>) -> Vector3<f64> {
    let r = q.norm();
    q * (-v.d1(r) / r)
}

/// Number of steps of size `dt` covering `[0, t_end]`.
pub(crate) fn step_count(t_end: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !dt.is_finite() {
        return invalid(format!("time step must be positive, got {dt}"));
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return invalid(format!("horizon must be non-negative, got {t_end}"));
    }
    Ok((t_end / dt).round() as usize)
}

/// Verlet run calling `observe(step, t, state)` every `stride` steps (and at t = 0).
///
/// On abort the error carries the step and time; states already observed stay observed.
pub fn integrate_flow_with(
    v: &RadialPotential,
    u0: &PhasePoint,
    t_end: f64,
    dt: f64,
    stride: usize,
    mut observe: impl FnMut(usize, f64, &PhasePoint),
) -> Result<()> {
    let steps = step_count(t_end, dt)?;
    let stride = stride.max(1);
    let mut u = *u0;
    if u.q.norm() < CLOSE_APPROACH {
        return Err(Error::Aborted {
            step: 0,
            time: 0.0,
            reason: "initial position at the origin".into(),
        });
    }
    observe(0, 0.0, &u);
    let mut f = force(v, &u.q);
    for n in 1..=steps {
        u.p += f * (0.5 * dt);
        u.q += u.p * dt;
        let r = u.q.norm();
        let t = n as f64 * dt;
        if !(r >= CLOSE_APPROACH) {
            return Err(Error::Aborted {
                step: n,
                time: t,
                reason: format!("close approach |q| = {r:.3e}"),
            });
        }
        f = force(v, &u.q);
        u.p += f * (0.5 * dt);
        if !u.is_finite() {
            return Err(Error::Aborted {
                step: n,
                time: t,
                reason: "non-finite state".into(),
            });
        }
        if n % stride == 0 || n == steps {
            observe(n, t, &u);
        }
    }
    Ok(())
}

/// Verlet trajectory sampled at every step.
pub fn integrate_flow(v: &RadialPotential, u0: &PhasePoint, t_end: f64, dt: f64) -> Result<Trajectory> {
    integrate_flow_strided(v, u0, t_end, dt, 1)
}

pub fn integrate_flow_strided(
    v: &RadialPotential,
    u0: &PhasePoint,
    t_end: f64,
    dt: f64,
    stride: usize,
) -> Result<Trajectory> {
    let mut traj = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
    };
    integrate_flow_with(v, u0, t_end, dt, stride, |_, t, u| {
        traj.times.push(t);
        traj.states.push(*u);
    })?;
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spherical::{angular_momentum, circular_equilibrium, hamiltonian};

    #[test]
    fn kepler_circle_stays_circular() {
        let v = RadialPotential::Kepler;
        let eq = circular_equilibrium(&v, 1.0, [0.0, 0.0, 1.0]).unwrap();
        let traj = integrate_flow_strided(&v, &eq.base, 10.0, 1e-3, 10).unwrap();
        let h0 = hamiltonian(&v, &eq.base);
        for u in &traj.states {
            assert!((u.q.norm() - 1.0).abs() < 1e-6);
            assert!((hamiltonian(&v, u) - h0).abs() < 1e-8);
        }
    }

    #[test]
    fn momentum_is_conserved_for_random_start() {
        let v = RadialPotential::Harmonic;
        let u0 = PhasePoint::new([0.3, -1.2, 0.5], [0.7, 0.1, -0.4]);
        let l0 = angular_momentum(&u0);
        let traj = integrate_flow_strided(&v, &u0, 10.0, 1e-3, 100).unwrap();
        for u in &traj.states {
            assert!((angular_momentum(u) - l0).norm() < 1e-9);
        }
    }

    #[test]
    fn start_at_origin_aborts() {
        let v = RadialPotential::Kepler;
        let u0 = PhasePoint::new([1e-9, 0.0, 0.0], [-1.0, 0.0, 0.0]);
        let err = integrate_flow(&v, &u0, 1.0, 1e-3).unwrap_err();
        assert!(matches!(err, Error::Aborted { step: 0, .. }), "{err}");
        // free fall straight through the origin at unit speed
        let free = RadialPotential::power(0.0, 2.0).unwrap();
        let u0 = PhasePoint::new([0.5, 0.0, 0.0], [-1.0, 0.0, 0.0]);
        let err = integrate_flow(&free, &u0, 1.0, 0.25).unwrap_err();
        assert!(matches!(err, Error::Aborted { step: 2, .. }), "{err}");
    }

    #[test]
    fn rejects_bad_steps() {
        let u0 = PhasePoint::new([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        assert!(integrate_flow(&RadialPotential::Kepler, &u0, 1.0, 0.0).is_err());
        assert!(integrate_flow(&RadialPotential::Kepler, &u0, 1.0, -1e-3).is_err());
    }
}
