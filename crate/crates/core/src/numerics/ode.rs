//! Fixed-step explicit integrators.

/// One classical Runge–Kutta step for `y' = f(t, y)`.
pub fn rk4_step<const D: usize>(f: impl Fn(f64, &[f64; D]) -> [f64; D], t: f64, y: &[f64; D], h: f64) -> [f64; D] {
    let add = |a: &[f64; D], b: &[f64; D], s: f64| -> [f64; D] {
        let mut out = *a;
        for i in 0..D {
            out[i] += s * b[i];
        }
        out
    };
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &add(y, &k1, 0.5 * h));
    let k3 = f(t + 0.5 * h, &add(y, &k2, 0.5 * h));
    let k4 = f(t + h, &add(y, &k3, h));
    let mut out = *y;
    for i in 0..D {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_fourth_order() {
        let f = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let run = |h: f64| {
            let steps = (1.0 / h).round() as usize;
            let mut y = [1.0, 0.0];
            for i in 0..steps {
                y = rk4_step(f, i as f64 * h, &y, h);
            }
            (y[0] - 1.0f64.cos()).abs()
        };
        let e1 = run(0.1);
        let e2 = run(0.05);
        let rate = (e1 / e2).log2();
        assert!((rate - 4.0).abs() < 0.2, "observed order {rate}");
    }
}
