//! Centered finite-difference gradients and Hessians, used as derivative oracles.

/// Centered-difference gradient of `f` at `u` with step `h`.
pub fn finite_diff_gradient(f: impl Fn(&[f64]) -> f64, u: &[f64], h: f64) -> Vec<f64> {
    let mut x = u.to_vec();
    let mut g = vec![0.0; u.len()];
    for i in 0..u.len() {
        x[i] = u[i] + h;
        let fp = f(&x);
        x[i] = u[i] - h;
        let fm = f(&x);
        x[i] = u[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    g
}

/// Centered-difference Hessian of `f` at `u` with step `h`, symmetrized.
pub fn finite_diff_hessian(f: impl Fn(&[f64]) -> f64, u: &[f64], h: f64) -> Vec<Vec<f64>> {
    let m = u.len();
    let mut x = u.to_vec();
    let mut hess = vec![vec![0.0; m]; m];
    let f0 = f(u);
    for i in 0..m {
        x[i] = u[i] + h;
        let fp = f(&x);
        x[i] = u[i] - h;
        let fm = f(&x);
        x[i] = u[i];
        hess[i][i] = (fp - 2.0 * f0 + fm) / (h * h);
        for j in 0..i {
            let mut eval = |si: f64, sj: f64| {
                x[i] = u[i] + si * h;
                x[j] = u[j] + sj * h;
                let v = f(&x);
                x[i] = u[i];
                x[j] = u[j];
                v
            };
            let v = (eval(1.0, 1.0) - eval(1.0, -1.0) - eval(-1.0, 1.0) + eval(-1.0, -1.0)) / (4.0 * h * h);
            hess[i][j] = v;
            hess[j][i] = v;
        }
    }
    hess
}

/// Second directional derivative `d²/dε² f(u + ε v)` at `ε = 0`.
pub fn second_directional(f: impl Fn(&[f64]) -> f64, u: &[f64], v: &[f64], h: f64) -> f64 {
    let shifted = |s: f64| -> Vec<f64> { u.iter().zip(v).map(|(a, b)| a + s * b).collect() };
    let f0 = f(u);
    (f(&shifted(h)) - 2.0 * f0 + f(&shifted(-h))) / (h * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_gradient_is_exact() {
        let f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let g = finite_diff_gradient(f, &[1.0, 2.0], 1e-5);
        assert!((g[0] - 2.0).abs() < 1e-8);
        assert!((g[1] - 4.0).abs() < 1e-8);
    }

    #[test]
    fn constant_gradient_is_zero() {
        let g = finite_diff_gradient(|_| 3.5, &[0.3, -1.0, 2.0], 1e-4);
        assert!(g.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn hessian_of_quadratic_form() {
        let a = [[2.0, 0.5, -1.0], [0.5, 1.0, 0.0], [-1.0, 0.0, 3.0]];
        let f = |x: &[f64]| {
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    s += 0.5 * a[i][j] * x[i] * x[j];
                }
            }
            s
        };
        let h = finite_diff_hessian(f, &[0.1, -0.2, 0.4], 1e-3);
        for i in 0..3 {
            for j in 0..3 {
                assert!((h[i][j] - a[i][j]).abs() < 1e-8);
            }
        }
        let d = second_directional(f, &[0.0; 3], &[1.0, 1.0, 0.0], 1e-3);
        assert!((d - (2.0 + 1.0 + 1.0)).abs() < 1e-8);
    }
}
