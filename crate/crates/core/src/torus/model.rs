//! Cubic NLS `i u_t + β u_xx + λ|u|²u = 0` on a periodic interval, its plane waves and
//! conserved quantities.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numerics::{gradient_energy, spectral_derivative, PeriodicField, PeriodicGrid};

#[derive(Debug, Clone, PartialEq)]
pub struct TorusNlsModel {
    pub beta: f64,
    pub lambda: f64,
    pub grid: PeriodicGrid,
}

impl TorusNlsModel {
    pub fn new(beta: f64, lambda: f64, grid: PeriodicGrid) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return invalid(format!("dispersion coefficient must be positive, got {beta}"));
        }
        if !lambda.is_finite() {
            return invalid("nonlinearity coefficient must be finite");
        }
        Ok(Self { beta, lambda, grid })
    }

    pub fn length(&self) -> f64 {
        self.grid.length()
    }

    /// `2π/L`.
    pub fn k1(&self) -> f64 {
        self.grid.k1()
    }

    /// Frequency fixed by `ξ + βk² = λα²`.
    pub fn frequency(&self, alpha: f64, k: f64) -> f64 {
        self.lambda * alpha * alpha - self.beta * k * k
    }

    pub fn plane_wave_spec(&self, alpha: f64, k: f64) -> Result<PlaneWaveSpec> {
        if self.grid.lattice_index(k).is_none() {
            return invalid(format!("wavenumber {k} is not a multiple of 2π/L = {}", self.k1()));
        }
        Ok(PlaneWaveSpec {
            alpha,
            k,
            xi: self.frequency(alpha, k),
        })
    }
}

/// Plane-wave parameters; `xi` always satisfies the dispersion relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneWaveSpec {
    pub alpha: f64,
    pub k: f64,
    pub xi: f64,
}

/// Samples of `α e^{i(ξt − kx)}`.
pub fn plane_wave(model: &TorusNlsModel, alpha: f64, k: f64, t: f64) -> Result<PeriodicField> {
    let spec = model.plane_wave_spec(alpha, k)?;
    Ok(PeriodicField::from_fn(&model.grid, |x| {
        Complex64::from_polar(alpha, spec.xi * t - k * x)
    }))
}

/// Energy, momentum and (negative half) charge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConservedTriple {
    pub h: f64,
    pub f1: f64,
    pub f2: f64,
}

/// `H = ½(β∫|u_x|² − (λ/2)∫|u|⁴)`, `F1 = −(i/2)∫ū u_x`, `F2 = −½∫|u|²`.
pub fn conserved(model: &TorusNlsModel, u: &PeriodicField) -> ConservedTriple {
    ConservedTriple {
        h: energy(model, u),
        f1: momentum(u),
        f2: charge(u),
    }
}

pub fn energy(model: &TorusNlsModel, u: &PeriodicField) -> f64 {
    let dx = u.grid().dx();
    let mut quartic = 0.0;
    for v in u.values() {
        quartic += v.norm_sqr() * v.norm_sqr();
    }
    0.5 * (model.beta * gradient_energy(u) - 0.5 * model.lambda * quartic * dx)
}

/// `F1`, with the Nyquist mode excluded.
pub fn momentum(u: &PeriodicField) -> f64 {
    let grid = u.grid();
    let c = u.fourier();
    let nyq = grid.nyquist_slot();
    let mut s = 0.0;
    for (idx, ci) in c.iter().enumerate() {
        if idx != nyq {
            s += grid.wavenumber(idx) * ci.norm_sqr();
        }
    }
    let n = grid.n() as f64;
    0.5 * s * grid.length() / (n * n)
}

pub fn charge(u: &PeriodicField) -> f64 {
    -0.5 * u.l2_norm_sq()
}

/// `ℒ = H − (ξ + βk²) F2`.
pub fn lyapunov(model: &TorusNlsModel, spec: &PlaneWaveSpec, u: &PeriodicField) -> f64 {
    energy(model, u) - (spec.xi + model.beta * spec.k * spec.k) * charge(u)
}

/// `‖−β w_xx − λ|w|²w + ξw‖_{L²}`.
pub fn stationary_residual(model: &TorusNlsModel, w: &PeriodicField, xi: f64) -> Result<f64> {
    let wxx = spectral_derivative(w, 2)?;
    let r: Vec<Complex64> = w
        .values()
        .iter()
        .zip(wxx.values())
        .map(|(&v, &d)| -d * model.beta - v * (model.lambda * v.norm_sqr()) + v * xi)
        .collect();
    let dx = w.grid().dx();
    let mut s = 0.0;
    for v in &r {
        s += v.norm_sqr();
    }
    Ok((s * dx).sqrt())
}

/// Action of the `L²` gradient of `ℒ` (used by Hessian checks).
pub fn lyapunov_gradient(model: &TorusNlsModel, spec: &PlaneWaveSpec, u: &PeriodicField) -> Result<PeriodicField> {
    let uxx = spectral_derivative(u, 2)?;
    let shift = spec.xi + model.beta * spec.k * spec.k;
    let vals = u
        .values()
        .iter()
        .zip(uxx.values())
        .map(|(&v, &d)| -d * model.beta - v * (model.lambda * v.norm_sqr()) + v * shift)
        .collect();
    PeriodicField::new(u.grid().clone(), vals)
}

/// `∇²ℒ(U) V = −βV_xx − λ(2|U|²V + U²V̄) + (ξ + βk²)V`.
pub fn hessian_apply(
    model: &TorusNlsModel,
    spec: &PlaneWaveSpec,
    base: &PeriodicField,
    v: &PeriodicField,
) -> Result<PeriodicField> {
    let vxx = spectral_derivative(v, 2)?;
    let shift = spec.xi + model.beta * spec.k * spec.k;
    let vals = base
        .values()
        .iter()
        .zip(v.values())
        .zip(vxx.values())
        .map(|((&u, &w), &d)| {
            -d * model.beta - (w * (2.0 * u.norm_sqr()) + u * u * w.conj()) * model.lambda + w * shift
        })
        .collect();
    PeriodicField::new(base.grid().clone(), vals)
}

/// Real `L²` pairing `Re ∫ u v̄`.
pub fn l2_real_inner(u: &PeriodicField, v: &PeriodicField) -> f64 {
    let mut s = 0.0;
    for (a, b) in u.values().iter().zip(v.values()) {
        s += (a * b.conj()).re;
    }
    s * u.grid().dx()
}
