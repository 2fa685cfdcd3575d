use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Power-type or asymptotically linear growth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NonlinearityKind {
    /// `V(x)|w|^{σ−1}`
    Pt,
    /// `V(x)|w|^{σ−1} / (1 + |w|^{σ−1})`
    Al,
}

/// `f(x, w²)` with the decaying weight `V(x) = (1 + x²)^{−b/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InhomogeneousNonlinearity {
    pub kind: NonlinearityKind,
    pub sigma: f64,
    pub b: f64,
}

impl InhomogeneousNonlinearity {
    /// Validated constructor; requires `1 < σ < 5 − 2b` and `0 ≤ b < 1`.
    pub fn new(kind: NonlinearityKind, sigma: f64, b: f64) -> Result<Self> {
        let nl = Self::unrestricted(kind, sigma, b)?;
        if sigma >= 5.0 - 2.0 * b {
            return invalid(format!("σ = {sigma} is outside the admissible range σ < 5 − 2b = {}", 5.0 - 2.0 * b));
        }
        Ok(nl)
    }

    /// Power-type nonlinearity without the upper bound on `σ`, for exploring the
    /// supercritical regime.
    pub fn unrestricted(kind: NonlinearityKind, sigma: f64, b: f64) -> Result<Self> {
        if !(sigma > 1.0) || !sigma.is_finite() {
            return invalid(format!("σ must exceed 1, got {sigma}"));
        }
        if !(0.0..1.0).contains(&b) {
            return invalid(format!("b must lie in [0, 1), got {b}"));
        }
        if kind == NonlinearityKind::Al && sigma >= 5.0 - 2.0 * b {
            return invalid("the unrestricted range is only available for power-type growth");
        }
        Ok(Self { kind, sigma, b })
    }

    pub fn pt(sigma: f64, b: f64) -> Result<Self> {
        Self::new(NonlinearityKind::Pt, sigma, b)
    }

    pub fn al(sigma: f64, b: f64) -> Result<Self> {
        Self::new(NonlinearityKind::Al, sigma, b)
    }

    /// `V(x) = (1 + x²)^{−b/2}`.
    pub fn weight(&self, x: f64) -> f64 {
        if self.b == 0.0 {
            1.0
        } else {
            (1.0 + x * x).powf(-0.5 * self.b)
        }
    }

    fn power(&self, w: f64) -> f64 {
        w.abs().powf(self.sigma - 1.0)
    }

    /// `f(x, w²)`.
    pub fn f(&self, x: f64, w: f64) -> f64 {
        let t = self.power(w);
        let v = self.weight(x);
        match self.kind {
            NonlinearityKind::Pt => v * t,
            NonlinearityKind::Al => v * t / (1.0 + t),
        }
    }

    /// `∂₂f(x, w²) w²`, derivative in the second argument times `w²`.
    pub fn d2f_w2(&self, x: f64, w: f64) -> f64 {
        let t = self.power(w);
        let v = self.weight(x);
        let half = 0.5 * (self.sigma - 1.0);
        match self.kind {
            NonlinearityKind::Pt => v * half * t,
            NonlinearityKind::Al => v * half * t / ((1.0 + t) * (1.0 + t)),
        }
    }

    /// `x ∂₁f(x, w²)`.
    pub fn x_d1f(&self, x: f64, w: f64) -> f64 {
        let x2 = x * x;
        -self.b * x2 / (1.0 + x2) * self.f(x, w)
    }

    /// Potential of `L⁺`: `f + 2∂₂f w²`.
    pub fn plus_potential(&self, x: f64, w: f64) -> f64 {
        self.f(x, w) + 2.0 * self.d2f_w2(x, w)
    }
}

/// Sign of the charge slope at small frequency: `+1` iff `σ < 5 − 2b`, `−1` iff
/// `σ > 5 − 2b`, `0` on the boundary.
pub fn vk_small_xi_sign(sigma: f64, b: f64) -> i32 {
    let d = 4.0 - 2.0 * b - (sigma - 1.0);
    if d.abs() <= 1e-14 * (4.0 + sigma) {
        0
    } else if d > 0.0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::finite_diff_gradient;

    #[test]
    fn sign_examples() {
        assert_eq!(vk_small_xi_sign(3.0, 0.0), 1);
        assert_eq!(vk_small_xi_sign(5.0, 0.0), 0);
        assert_eq!(vk_small_xi_sign(4.0, 0.75), -1);
    }

    #[test]
    fn range_checks() {
        assert!(InhomogeneousNonlinearity::pt(5.0, 0.0).is_err());
        assert!(InhomogeneousNonlinearity::pt(1.0, 0.0).is_err());
        assert!(InhomogeneousNonlinearity::al(2.0, 1.0).is_err());
        assert!(InhomogeneousNonlinearity::unrestricted(NonlinearityKind::Pt, 6.0, 0.5).is_ok());
        assert!(InhomogeneousNonlinearity::unrestricted(NonlinearityKind::Al, 6.0, 0.5).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for nl in [
            InhomogeneousNonlinearity::pt(2.5, 0.4).unwrap(),
            InhomogeneousNonlinearity::al(2.0, 0.5).unwrap(),
        ] {
            let (x, w) = (0.7, 1.3);
            let g = finite_diff_gradient(|z: &[f64]| nl.f(z[0], z[1].sqrt()), &[x, w * w], 1e-5);
            assert!((g[0] * x - nl.x_d1f(x, w)).abs() < 1e-8);
            assert!((g[1] * w * w - nl.d2f_w2(x, w)).abs() < 1e-8);
        }
    }
}
