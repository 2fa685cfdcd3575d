use super::shooting::{shoot_with, LineGrid, ShootOptions, StandingProfile};
use crate::error::{invalid, Result};

/// Exponent `p` in `u(x) = k^p v(kx)`.
pub fn amplitude_exponent(sigma: f64, b: f64) -> f64 {
    (2.0 - b) / (sigma - 1.0)
}

/// Ground state of `v'' − v + |y|^{−b}|v|^{σ−1}v = 0`.
///
/// On the first cell the weight is replaced by its average `h^{−b}/(1 − b)`.
pub fn limit_ground_state(b: f64, sigma: f64, grid: &LineGrid, opts: &ShootOptions) -> Result<StandingProfile> {
    if !(0.0..1.0).contains(&b) {
        return invalid(format!("b must lie in [0, 1), got {b}"));
    }
    if !(sigma > 1.0) {
        return invalid(format!("σ must exceed 1, got {sigma}"));
    }
    let h = grid.step();
    let first = h.powf(-b) / (1.0 - b);
    let coef = move |y: f64, v: f64| {
        let wgt = if b == 0.0 {
            1.0
        } else if y < h {
            first
        } else {
            y.powf(-b)
        };
        wgt * v.abs().powf(sigma - 1.0)
    };
    shoot_with(&coef, 1.0, grid, opts)
}

/// `u(x) = k^{(2−b)/(σ−1)} v(kx)` with `k = √ξ`, resampled on `target`.
pub fn scaling_transform(
    xi: f64,
    sigma: f64,
    b: f64,
    v: &StandingProfile,
    target: &LineGrid,
) -> Result<StandingProfile> {
    if !(xi > 0.0) {
        return invalid(format!("frequency must be positive, got {xi}"));
    }
    let k = xi.sqrt();
    let amp = k.powf(amplitude_exponent(sigma, b));
    let (values, slopes) = (0..=target.n())
        .map(|j| {
            let (val, der) = v.eval_with_slope(k * target.x(j));
            (amp * val, amp * k * der)
        })
        .unzip();
    Ok(StandingProfile {
        xi: v.xi * xi,
        grid: *target,
        values,
        slopes,
    })
}

/// `max_j |a_j − b(x_j)|` over the nodes of `a`.
pub fn sup_distance(a: &StandingProfile, b: &StandingProfile) -> f64 {
    (0..=a.grid.n())
        .map(|j| (a.values[j] - b.eval(a.grid.x(j))).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standing::nonlinearity::InhomogeneousNonlinearity;
    use crate::standing::shooting::shoot_profile;

    #[test]
    fn closed_form_ground_states() {
        let g = LineGrid::new(30.0, 0.01).unwrap();
        let v3 = limit_ground_state(0.0, 3.0, &g, &ShootOptions::default()).unwrap();
        assert!((v3.peak() - 2f64.sqrt()).abs() < 1e-5);
        let v2 = limit_ground_state(0.0, 2.0, &g, &ShootOptions::default()).unwrap();
        assert!((v2.peak() - 1.5).abs() < 1e-5);
        let y = 1.7;
        assert!((v2.eval(y) - 1.5 / (0.5 * y).cosh().powi(2)).abs() < 1e-5);
        assert!(limit_ground_state(1.0, 3.0, &g, &ShootOptions::default()).is_err());
    }

    #[test]
    fn transform_of_the_soliton() {
        let g = LineGrid::new(30.0, 0.01).unwrap();
        let v = limit_ground_state(0.0, 3.0, &g, &ShootOptions::default()).unwrap();
        let same = scaling_transform(1.0, 3.0, 0.0, &v, &g).unwrap();
        assert!(sup_distance(&same, &v) < 1e-15);
        let xi: f64 = 0.5;
        let tg = LineGrid::new(30.0, 0.01).unwrap();
        let u = scaling_transform(xi, 3.0, 0.0, &v, &tg).unwrap();
        let worst = (0..=tg.n())
            .map(|j| (u.values[j] - (2.0 * xi).sqrt() / (xi.sqrt() * tg.x(j)).cosh()).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-6, "{worst}");
        // ‖u‖² = ξ^{β/2} ‖v‖² with β = (4 − 2b − (σ − 1))/(σ − 1)
        let beta = (4.0 - 0.0 - 2.0) / 2.0;
        assert!((u.charge() - xi.powf(0.5 * beta) * v.charge()).abs() < 1e-6);
        let direct = shoot_profile(&InhomogeneousNonlinearity::pt(3.0, 0.0).unwrap(), xi, &tg, 1e-8).unwrap();
        assert!(sup_distance(&u, &direct) < 1e-6);
    }
}
