//! Strang split-step Fourier evolution for scalar and two-component (Manakov) NLS.

use num_complex::Complex64;

use super::model::TorusNlsModel;
use crate::error::{invalid, Error, Result};
use crate::numerics::grid::check_same as check_same_grid;
use crate::numerics::{PeriodicField, PeriodicGrid};

/// Largest accepted time step.
pub const MAX_DT: f64 = 1e-2;
/// Runs abort once `‖u‖∞` exceeds this.
pub const BLOWUP_GUARD: f64 = 1e3;

/// Stored samples of an evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldTrajectory {
    pub times: Vec<f64>,
    pub fields: Vec<PeriodicField>,
}

fn steps_for(t_end: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !dt.is_finite() {
        return invalid(format!("time step must be positive, got {dt}"));
    }
    if dt > MAX_DT {
        return invalid(format!("time step {dt} exceeds the accuracy limit {MAX_DT}"));
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return invalid(format!("horizon must be non-negative, got {t_end}"));
    }
    Ok((t_end / dt).round() as usize)
}

/// `exp(-iβk²τ)` per FFT slot.
fn linear_propagator(grid: &PeriodicGrid, beta: f64, tau: f64) -> Vec<Complex64> {
    (0..grid.n())
        .map(|idx| {
            let k = grid.wavenumber(idx);
            Complex64::from_polar(1.0, -beta * k * k * tau)
        })
        .collect()
}

fn apply_linear(grid: &PeriodicGrid, buf: &mut [Complex64], prop: &[Complex64]) {
    grid.fft_in_place(buf);
    for (c, p) in buf.iter_mut().zip(prop) {
        *c *= p;
    }
    grid.ifft_in_place(buf);
}

fn guard(values: &[Complex64], step: usize, t: f64) -> Result<()> {
    let mut max: f64 = 0.0;
    for v in values {
        let a = v.norm();
        if !a.is_finite() {
            return Err(Error::Aborted {
                step,
                time: t,
                reason: "NaN in field".into(),
            });
        }
        max = max.max(a);
    }
    if max > BLOWUP_GUARD {
        return Err(Error::Aborted {
            step,
            time: t,
            reason: format!("sup norm {max:.3e} exceeds {BLOWUP_GUARD:e}"),
        });
    }
    Ok(())
}

/// Split-step evolution calling `observe(step, t, u)` at t = 0 and every `stride` steps.
///
/// Each step is a half linear step, the pointwise phase rotation `e^{iλ|u|²dt}`, and
/// another half linear step. Consecutive half steps between observations are fused.
pub fn split_step_with(
    model: &TorusNlsModel,
    u0: &PeriodicField,
    t_end: f64,
    dt: f64,
    stride: usize,
    mut observe: impl FnMut(usize, f64, &PeriodicField),
) -> Result<()> {
    check_same_grid(&model.grid, u0.grid())?;
    let steps = steps_for(t_end, dt)?;
    let stride = stride.max(1);
    let grid = &model.grid;
    let half = linear_propagator(grid, model.beta, 0.5 * dt);
    let full = linear_propagator(grid, model.beta, dt);
    let mut u = u0.clone();
    observe(0, 0.0, &u);
    let mut pending_half = false;
    for n in 1..=steps {
        let buf = u.values_mut();
        apply_linear(grid, buf, if pending_half { &full } else { &half });
        for v in buf.iter_mut() {
            *v *= Complex64::from_polar(1.0, model.lambda * v.norm_sqr() * dt);
        }
        let t = n as f64 * dt;
        if n % stride == 0 || n == steps {
            apply_linear(grid, buf, &half);
            pending_half = false;
            guard(buf, n, t)?;
            observe(n, t, &u);
        } else {
            pending_half = true;
            if n % 64 == 0 {
                guard(buf, n, t)?;
            }
        }
    }
    Ok(())
}

/// Split-step evolution storing a sample every `stride` steps.
pub fn split_step_evolve(
    model: &TorusNlsModel,
    u0: &PeriodicField,
    t_end: f64,
    dt: f64,
    stride: usize,
) -> Result<FieldTrajectory> {
    let mut out = FieldTrajectory {
        times: Vec::new(),
        fields: Vec::new(),
    };
    split_step_with(model, u0, t_end, dt, stride, |_, t, u| {
        out.times.push(t);
        out.fields.push(u.clone());
    })?;
    Ok(out)
}

/// A two-component field on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub first: PeriodicField,
    pub second: PeriodicField,
}

impl VectorField {
    pub fn new(first: PeriodicField, second: PeriodicField) -> Result<Self> {
        check_same_grid(first.grid(), second.grid())?;
        Ok(Self { first, second })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        self.first.grid()
    }

    /// `(‖u1‖², ‖u2‖²)` in `L²`.
    pub fn component_charges(&self) -> (f64, f64) {
        (self.first.l2_norm_sq(), self.second.l2_norm_sq())
    }

    pub fn l2_distance(&self, other: &Self) -> Result<f64> {
        let a = self.first.sub(&other.first)?.l2_norm_sq();
        let b = self.second.sub(&other.second)?.l2_norm_sq();
        Ok((a + b).sqrt())
    }
}

/// Manakov split-step (`β = 1`) with the coupled phase `e^{iλ(|u1|² + |u2|²)dt}`.
pub fn manakov_evolve_with(
    u0: &VectorField,
    lambda: f64,
    t_end: f64,
    dt: f64,
    stride: usize,
    mut observe: impl FnMut(usize, f64, &VectorField),
) -> Result<()> {
    let steps = steps_for(t_end, dt)?;
    let stride = stride.max(1);
    let grid = u0.grid().clone();
    let half = linear_propagator(&grid, 1.0, 0.5 * dt);
    let mut u = u0.clone();
    observe(0, 0.0, &u);
    for n in 1..=steps {
        apply_linear(&grid, u.first.values_mut(), &half);
        apply_linear(&grid, u.second.values_mut(), &half);
        {
            let (a, b) = (u.first.values_mut(), u.second.values_mut());
            for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                let rot = Complex64::from_polar(1.0, lambda * (x.norm_sqr() + y.norm_sqr()) * dt);
                *x *= rot;
                *y *= rot;
            }
        }
        apply_linear(&grid, u.first.values_mut(), &half);
        apply_linear(&grid, u.second.values_mut(), &half);
        let t = n as f64 * dt;
        if n % stride == 0 || n == steps {
            guard(u.first.values(), n, t)?;
            guard(u.second.values(), n, t)?;
            observe(n, t, &u);
        }
    }
    Ok(())
}

pub fn manakov_evolve(
    u0: &VectorField,
    lambda: f64,
    t_end: f64,
    dt: f64,
    stride: usize,
) -> Result<(Vec<f64>, Vec<VectorField>)> {
    let mut times = Vec::new();
    let mut fields = Vec::new();
    manakov_evolve_with(u0, lambda, t_end, dt, stride, |_, t, u| {
        times.push(t);
        fields.push(u.clone());
    })?;
    Ok((times, fields))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::make_grid;
    use crate::torus::model::{charge, plane_wave};
    use std::f64::consts::PI;

    #[test]
    fn linear_plane_wave_is_exact() {
        let m = TorusNlsModel::new(1.3, 0.0, make_grid(32, 2.0 * PI).unwrap()).unwrap();
        let u0 = plane_wave(&m, 0.7, 3.0, 0.0).unwrap();
        let traj = split_step_evolve(&m, &u0, 1.0, 1e-3, 1000).unwrap();
        let exact = plane_wave(&m, 0.7, 3.0, 1.0).unwrap();
        let err = traj.fields.last().unwrap().sub(&exact).unwrap().max_abs();
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn nonlinear_plane_wave_keeps_its_phase() {
        let m = TorusNlsModel::new(1.0, 1.0, make_grid(32, 2.0 * PI).unwrap()).unwrap();
        let u0 = plane_wave(&m, 0.9, 1.0, 0.0).unwrap();
        let traj = split_step_evolve(&m, &u0, 1.0, 1e-3, 1000).unwrap();
        let exact = plane_wave(&m, 0.9, 1.0, 1.0).unwrap();
        let err = traj.fields.last().unwrap().sub(&exact).unwrap().max_abs() / 0.9;
        assert!(err < 1e-8, "{err}");
    }

    #[test]
    fn charge_is_preserved() {
        let m = TorusNlsModel::new(1.0, 1.0, make_grid(64, 2.0 * PI).unwrap()).unwrap();
        let u0 = PeriodicField::from_fn(&m.grid, |x| Complex64::new(1.0 + 0.1 * x.cos(), 0.05 * (2.0 * x).sin()));
        let f0 = charge(&u0);
        let mut worst: f64 = 0.0;
        split_step_with(&m, &u0, 2.0, 1e-3, 100, |_, _, u| worst = worst.max((charge(u) - f0).abs())).unwrap();
        assert!(worst < 1e-12, "{worst}");
    }

    #[test]
    fn rejects_large_steps_and_blowup() {
        let m = TorusNlsModel::new(1.0, 1.0, make_grid(16, 2.0 * PI).unwrap()).unwrap();
        let u0 = PeriodicField::constant(&m.grid, Complex64::new(1.0, 0.0));
        assert!(split_step_evolve(&m, &u0, 1.0, 0.02, 1).is_err());
        let big = PeriodicField::constant(&m.grid, Complex64::new(2e3, 0.0));
        let err = split_step_evolve(&m, &big, 1e-3, 1e-3, 1).unwrap_err();
        assert!(matches!(err, Error::Aborted { step: 1, .. }));
    }
}
