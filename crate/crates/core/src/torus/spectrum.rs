//! Spectral data of constant-amplitude plane waves: verdict, coercivity constant,
//! Hessian Fourier blocks and linearized growth rates.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::model::TorusNlsModel;
use crate::error::{invalid, Result};
use crate::numerics::{spectral_derivative, PeriodicField};
use crate::Verdict;

/// `β(2π/L)² − 2λα²`; positive means stable.
pub fn stability_margin(model: &TorusNlsModel, alpha: f64) -> f64 {
    model.beta * model.k1().powi(2) - 2.0 * model.lambda * alpha * alpha
}

/// Orbital stability of the plane wave of amplitude `alpha`.
pub fn stability_verdict(model: &TorusNlsModel, alpha: f64) -> Result<Verdict> {
    if alpha == 0.0 || !alpha.is_finite() {
        return invalid("plane-wave amplitude must be non-zero");
    }
    let m = stability_margin(model, alpha);
    let scale = model.beta * model.k1().powi(2) + (2.0 * model.lambda * alpha * alpha).abs();
    Ok(Verdict::from_sign(m, 1e-12 * scale))
}

/// Lower bound `c` with `D²ℒ(V,V) ≥ c‖V‖²_{H¹}` on the constrained complement.
pub fn coercivity_constant(model: &TorusNlsModel, alpha: f64) -> Result<f64> {
    if stability_verdict(model, alpha)? != Verdict::Stable {
        return invalid("coercivity constant is only defined in the stable regime");
    }
    let k2 = model.k1().powi(2);
    let a2 = alpha * alpha;
    if model.lambda <= 0.0 {
        Ok((model.beta * k2 / (1.0 + k2)).min(-2.0 * model.lambda * a2))
    } else {
        Ok((model.beta * k2 - 2.0 * model.lambda * a2) / (1.0 + k2))
    }
}

/// Per-mode data for mode number `n ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeEntry {
    pub n: usize,
    pub wavenumber: f64,
    /// Hessian coefficients on the real and imaginary perturbation parts.
    pub hessian: [f64; 2],
    /// `±ω` eigenvalues of the linearized flow (absent for `n = 0`).
    pub linearization: Option<[Complex64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSpectrum {
    pub entries: Vec<ModeEntry>,
}

impl ModeSpectrum {
    /// Largest real part among the linearization eigenvalues.
    pub fn max_growth_rate(&self) -> f64 {
        self.entries
            .iter()
            .filter_map(|e| e.linearization)
            .map(|p| p[0].re.max(p[1].re))
            .fold(0.0, f64::max)
    }

    /// Smallest Hessian coefficient over modes `n ≥ 1`.
    pub fn min_constrained_hessian(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.n >= 1)
            .map(|e| e.hessian[0].min(e.hessian[1]))
            .fold(f64::INFINITY, f64::min)
    }
}

fn mode_table(model: &TorusNlsModel, alpha: f64, n_max: usize) -> Result<ModeSpectrum> {
    if alpha == 0.0 || !alpha.is_finite() {
        return invalid("plane-wave amplitude must be non-zero");
    }
    let g = 2.0 * model.lambda * alpha * alpha;
    let entries = (0..=n_max)
        .map(|n| {
            let k = n as f64 * model.k1();
            let omega = model.beta * k * k;
            let linearization = (n >= 1).then(|| {
                let r = Complex64::new(omega * (g - omega), 0.0).sqrt();
                [r, -r]
            });
            ModeEntry {
                n,
                wavenumber: k,
                hessian: [omega - g, omega],
                linearization,
            }
        })
        .collect();
    Ok(ModeSpectrum { entries })
}

/// Hessian Fourier coefficients `(βk_n² − 2λα², βk_n²)` for `n = 0..=n_max`.
pub fn hessian_mode_spectrum(model: &TorusNlsModel, alpha: f64, n_max: usize) -> Result<ModeSpectrum> {
    mode_table(model, alpha, n_max)
}

/// Eigenvalues `±√(Ω(2λα² − Ω))`, `Ω = βk_n²`, of the 2×2 linearized blocks.
pub fn linearization_growth_rates(model: &TorusNlsModel, alpha: f64, n_max: usize) -> Result<ModeSpectrum> {
    mode_table(model, alpha, n_max)
}

/// Real matrix of the spectral second derivative on the grid.
pub fn second_derivative_matrix(model: &TorusNlsModel) -> DMatrix<f64> {
    let n = model.grid.n();
    let mut d2 = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = PeriodicField::zeros(&model.grid);
        e.values_mut()[j] = Complex64::new(1.0, 0.0);
        let col = spectral_derivative(&e, 2).expect("order 2 is valid");
        for (i, v) in col.values().iter().enumerate() {
            d2[(i, j)] = v.re;
        }
    }
    d2
}

/// The Hessian `∇²ℒ` at the constant plane wave as a real `2N × 2N` matrix acting
/// on `(Re V, Im V)`.
pub fn assembled_hessian(model: &TorusNlsModel, alpha: f64) -> DMatrix<f64> {
    let n = model.grid.n();
    let d2 = second_derivative_matrix(model);
    let g = 2.0 * model.lambda * alpha * alpha;
    let mut h = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] = -model.beta * d2[(i, j)];
            h[(n + i, n + j)] = -model.beta * d2[(i, j)];
        }
        h[(i, i)] -= g;
    }
    h
}

/// The linearized flow around the constant plane wave on `(Re V, Im V)`.
pub fn assembled_linearization(model: &TorusNlsModel, alpha: f64) -> DMatrix<f64> {
    let n = model.grid.n();
    let d2 = second_derivative_matrix(model);
    let g = 2.0 * model.lambda * alpha * alpha;
    let mut a = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            a[(i, n + j)] = -model.beta * d2[(i, j)];
            a[(n + i, j)] = model.beta * d2[(i, j)];
        }
        a[(n + i, i)] += g;
    }
    a
}

/// All closed-form Hessian eigenvalues over the grid's modes, sorted.
pub fn closed_form_hessian_eigenvalues(model: &TorusNlsModel, alpha: f64) -> Vec<f64> {
    let g = 2.0 * model.lambda * alpha * alpha;
    let mut out: Vec<f64> = (0..model.grid.n())
        .flat_map(|idx| {
            let k = model.grid.wavenumber(idx);
            let om = model.beta * k * k;
            [om - g, om]
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Largest deviation between the assembled Hessian spectrum and the closed form.
pub fn hessian_cross_check(model: &TorusNlsModel, alpha: f64) -> f64 {
    let h = assembled_hessian(model, alpha);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    let cf = closed_form_hessian_eigenvalues(model, alpha);
    ev.iter().zip(&cf).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::make_grid;
    use std::f64::consts::PI;

    fn model(lambda: f64) -> TorusNlsModel {
        TorusNlsModel::new(1.0, lambda, make_grid(32, 2.0 * PI).unwrap()).unwrap()
    }

    #[test]
    fn verdict_examples() {
        assert_eq!(stability_verdict(&model(-1.0), 1.0).unwrap(), Verdict::Stable);
        assert_eq!(stability_verdict(&model(1.0), 0.6).unwrap(), Verdict::Stable);
        assert_eq!(stability_verdict(&model(1.0), 1.2).unwrap(), Verdict::Unstable);
        assert!(stability_verdict(&model(1.0), 0.0).is_err());
        assert_eq!(stability_verdict(&model(0.5), 1.0).unwrap(), Verdict::Marginal);
    }

    #[test]
    fn coercivity_examples() {
        assert!((coercivity_constant(&model(-1.0), 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((coercivity_constant(&model(1.0), 0.6).unwrap() - 0.14).abs() < 1e-15);
        assert!(coercivity_constant(&model(1.0), 1.2).is_err());
        let c = coercivity_constant(&model(-1e-9), 1.0).unwrap();
        assert!(c > 0.0 && c < 3e-9);
    }

    #[test]
    fn mode_entries() {
        let s = hessian_mode_spectrum(&model(-1.0), 1.0, 3).unwrap();
        assert_eq!(s.entries[0].hessian, [2.0, 0.0]);
        assert_eq!(s.entries[1].hessian, [3.0, 1.0]);
        let r = linearization_growth_rates(&model(1.0), 1.2, 3).unwrap();
        assert!((r.max_growth_rate() - 1.88f64.sqrt()).abs() < 1e-14);
        let stable = linearization_growth_rates(&model(-1.0), 1.0, 5).unwrap();
        assert_eq!(stable.max_growth_rate(), 0.0);
        // band edge: Ω = 2λα² exactly
        let edge = linearization_growth_rates(&model(0.5), 1.0, 2).unwrap();
        assert_eq!(edge.entries[1].linearization.unwrap()[0].norm(), 0.0);
    }

    #[test]
    fn assembled_hessian_matches_closed_form() {
        assert!(hessian_cross_check(&model(-1.0), 1.0) < 1e-8);
        assert!(hessian_cross_check(&model(1.0), 1.2) < 1e-8);
    }
}
