use serde::{Deserialize, Serialize};

use super::nonlinearity::{InhomogeneousNonlinearity, NonlinearityKind};
use super::shooting::{LineGrid, StandingProfile};
use crate::error::{invalid, Result};
use crate::numerics::{eig_banded, BandedSymmetricMatrix};

/// Eigenvalues at or above `ξ − CONTINUUM_MARGIN` belong to the box-discretized continuum.
pub const CONTINUUM_MARGIN: f64 = 1e-2;

/// `L⁺` and `L⁻` on the interior nodes of `[−R, R]` (Dirichlet ends).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearizedOperators {
    pub plus: BandedSymmetricMatrix,
    pub minus: BandedSymmetricMatrix,
    /// Interior node coordinates.
    pub nodes: Vec<f64>,
    /// Profile values at `nodes`.
    pub profile: Vec<f64>,
}

fn laplacian_with(grid: &LineGrid, shift: f64, potential: &[f64]) -> Result<BandedSymmetricMatrix> {
    let h2 = grid.step() * grid.step();
    let diag = potential.iter().map(|p| 2.0 / h2 + shift - p).collect();
    let off = vec![-1.0 / h2; potential.len() - 1];
    BandedSymmetricMatrix::tridiagonal(diag, off)
}

fn interior(profile: &StandingProfile) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = profile.full_line();
    let m = x.len();
    (x[1..m - 1].to_vec(), w[1..m - 1].to_vec())
}

/// Centered-difference `L±` for the profile at frequency `xi`.
pub fn assemble_l_operators(
    nl: &InhomogeneousNonlinearity,
    xi: f64,
    profile: &StandingProfile,
) -> Result<LinearizedOperators> {
    let r = profile.residual(nl);
    if r > 1e-8 * profile.peak().abs().max(1.0) {
        return invalid(format!("profile residual {r:.3e} exceeds 1e-8"));
    }
    if profile.grid.n() < 2 {
        return invalid("grid too coarse");
    }
    let (nodes, w) = interior(profile);
    let vp: Vec<f64> = nodes.iter().zip(&w).map(|(&x, &u)| nl.plus_potential(x, u)).collect();
    let vm: Vec<f64> = nodes.iter().zip(&w).map(|(&x, &u)| nl.f(x, u)).collect();
    Ok(LinearizedOperators {
        plus: laplacian_with(&profile.grid, xi, &vp)?,
        minus: laplacian_with(&profile.grid, xi, &vm)?,
        nodes,
        profile: w,
    })
}

/// `sup |L⁺ w'|` with `w'` the stored (odd-extended) slope.
pub fn translation_residual(ops: &LinearizedOperators, profile: &StandingProfile) -> Result<f64> {
    let n = profile.grid.n() as isize;
    let d: Vec<f64> = (-(n - 1)..n)
        .map(|i| i.signum() as f64 * profile.slopes[i.unsigned_abs()])
        .collect();
    if d.len() != ops.plus.dim() {
        return invalid("profile does not match the operators");
    }
    Ok(ops.plus.matvec(&d).iter().fold(0.0, |m, v| m.max(v.abs())))
}

/// Spectral data behind conditions (C1) and (C2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralConditions {
    pub xi: f64,
    pub plus_eigenvalues: Vec<f64>,
    pub minus_eigenvalues: Vec<f64>,
    /// Negative eigenvalues of `L⁺` below `−tol`.
    pub morse_plus: usize,
    /// `min |λ|` over the computed bound-state eigenvalues of `L⁺`.
    pub gap_plus: f64,
    pub lambda0_minus: f64,
    /// `|cos|` between the ground state of `L⁻` and the profile.
    pub cosine_minus: f64,
    /// Smallest spacing among computed eigenvalues of both operators.
    pub min_spacing: f64,
    pub c1: bool,
    pub c2: bool,
}

/// Tolerances for [`spectral_conditions`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralTolerances {
    /// Eigenvalues within this of zero count as kernel.
    pub kernel: f64,
    /// Required cosine between the `L⁻` ground state and the profile.
    pub cosine: f64,
    /// Number of eigenvalues computed per operator.
    pub count: usize,
}

impl Default for SpectralTolerances {
    fn default() -> Self {
        Self {
            kernel: 1e-4,
            cosine: 0.999,
            count: 4,
        }
    }
}

pub fn spectral_conditions(
    nl: &InhomogeneousNonlinearity,
    xi: f64,
    profile: &StandingProfile,
    tol: &SpectralTolerances,
) -> Result<SpectralConditions> {
    let ops = assemble_l_operators(nl, xi, profile)?;
    spectral_conditions_of(&ops, xi, tol)
}

pub fn spectral_conditions_of(
    ops: &LinearizedOperators,
    xi: f64,
    tol: &SpectralTolerances,
) -> Result<SpectralConditions> {
    let count = tol.count.clamp(2, ops.plus.dim());
    let plus = eig_banded(&ops.plus, count)?;
    let minus = eig_banded(&ops.minus, count)?;
    let cutoff = xi - CONTINUUM_MARGIN;
    let bound = |v: &[f64]| v.iter().copied().filter(|&l| l < cutoff).collect::<Vec<_>>();
    let bp = bound(&plus.eigenvalues);
    let morse_plus = bp.iter().filter(|&&l| l < -tol.kernel).count();
    let gap_plus = bp.iter().fold(f64::INFINITY, |m, l| m.min(l.abs()));
    let lambda0_minus = minus.eigenvalues[0];
    let v = &minus.eigenvectors[0];
    let wn = ops.profile.iter().map(|a| a * a).sum::<f64>().sqrt();
    let dot: f64 = v.iter().zip(&ops.profile).map(|(a, b)| a * b).sum();
    let cosine_minus = if wn > 0.0 { dot.abs() / wn } else { 0.0 };
    let min_spacing = plus.min_gap().min(minus.min_gap());
    let lambda1_minus = minus.eigenvalues[1];
    Ok(SpectralConditions {
        xi,
        c1: morse_plus == 1 && gap_plus > tol.kernel,
        c2: lambda0_minus.abs() <= tol.kernel && cosine_minus >= tol.cosine && lambda1_minus > tol.kernel,
        plus_eigenvalues: plus.eigenvalues,
        minus_eigenvalues: minus.eigenvalues,
        morse_plus,
        gap_plus,
        lambda0_minus,
        cosine_minus,
        min_spacing,
    })
}

/// Upper end of the frequency range for asymptotically linear growth: minus the
/// smallest Dirichlet eigenvalue of `−∂² − V` on `[−R, R]`.
pub fn xi_infinity(nl: &InhomogeneousNonlinearity, grid: &LineGrid) -> Result<f64> {
    if nl.kind != NonlinearityKind::Al {
        return invalid("the frequency range is unbounded for power-type growth");
    }
    let n = grid.n() as isize;
    let v: Vec<f64> = (-(n - 1)..n).map(|i| nl.weight(i as f64 * grid.step())).collect();
    let m = laplacian_with(grid, 0.0, &v)?;
    let low = eig_banded(&m, 1)?.eigenvalues[0];
    if low >= 0.0 {
        return invalid("no bound state of the asymptotic linearization on this box");
    }
    Ok(-low)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standing::shooting::shoot_profile;

    #[test]
    fn free_operator() {
        let g = LineGrid::new(10.0, 0.05).unwrap();
        let zero = StandingProfile {
            xi: 0.7,
            grid: g,
            values: vec![0.0; g.n() + 1],
            slopes: vec![0.0; g.n() + 1],
        };
        let nl = InhomogeneousNonlinearity::pt(3.0, 0.0).unwrap();
        let ops = assemble_l_operators(&nl, 0.7, &zero).unwrap();
        assert_eq!(ops.plus, ops.minus);
        let s = spectral_conditions_of(&ops, 0.7, &SpectralTolerances::default()).unwrap();
        let bottom = 0.7 + (std::f64::consts::PI / 20.0).powi(2);
        assert!((s.minus_eigenvalues[0] - bottom).abs() < 1e-4);
        assert_eq!(s.morse_plus, 0);
    }

    #[test]
    fn soliton_kernels() {
        let nl = InhomogeneousNonlinearity::pt(3.0, 0.0).unwrap();
        let g = LineGrid::for_frequency(1.0, 0.01).unwrap();
        let p = shoot_profile(&nl, 1.0, &g, 1e-8).unwrap();
        let ops = assemble_l_operators(&nl, 1.0, &p).unwrap();
        let s = spectral_conditions_of(&ops, 1.0, &SpectralTolerances::default()).unwrap();
        assert!(s.lambda0_minus.abs() <= 1e-4, "{}", s.lambda0_minus);
        assert!(s.cosine_minus >= 0.999);
        assert_eq!(s.morse_plus, 1);
        assert!(translation_residual(&ops, &p).unwrap() <= 1e-3);
        // translation kernel of the homogeneous case
        assert!(s.gap_plus < 1e-3);
    }

    #[test]
    fn xi_infinity_requires_al() {
        let g = LineGrid::new(40.0, 0.05).unwrap();
        assert!(xi_infinity(&InhomogeneousNonlinearity::pt(2.0, 0.5).unwrap(), &g).is_err());
        let x = xi_infinity(&InhomogeneousNonlinearity::al(2.0, 0.5).unwrap(), &g).unwrap();
        assert!(x > 0.0 && x < 1.0, "{x}");
    }
}
