use serde::{Deserialize, Serialize};

use super::nonlinearity::InhomogeneousNonlinearity;
use crate::error::{invalid, Error, Result};
use crate::numerics::rk4_step;

/// Uniform half-line grid `0, h, …, R`; profiles are extended evenly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineGrid {
    radius: f64,
    step: f64,
    n: usize,
}

impl LineGrid {
    /// Grid of radius `R` whose step is the largest `R/n` not exceeding `step`.
    pub fn new(radius: f64, step: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return invalid(format!("radius must be positive, got {radius}"));
        }
        if !(step > 0.0) || step > radius {
            return invalid(format!("step must lie in (0, R], got {step}"));
        }
        let n = (radius / step - 1e-9).ceil().max(1.0) as usize;
        Ok(Self {
            radius,
            step: radius / n as f64,
            n,
        })
    }

    /// Radius `20/√ξ_min`, wide enough for `sech`-type tails to drop below `1e−8`.
    pub fn for_frequency(xi_min: f64, step: f64) -> Result<Self> {
        if !(xi_min > 0.0) {
            return invalid("minimum frequency must be positive");
        }
        Self::new(20.0 / xi_min.sqrt(), step)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Index of the last node (`x_n = R`).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x(&self, j: usize) -> f64 {
        if j == self.n {
            self.radius
        } else {
            j as f64 * self.step
        }
    }
}

/// Even profile sampled on `[0, R]` with its slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandingProfile {
    pub xi: f64,
    pub grid: LineGrid,
    pub values: Vec<f64>,
    pub slopes: Vec<f64>,
}

impl StandingProfile {
    pub fn peak(&self) -> f64 {
        self.values[0]
    }

    pub fn tail(&self) -> f64 {
        self.values[self.grid.n]
    }

    /// `Q = ½∫_ℝ w² = ∫_0^R w²` by the trapezoid rule.
    pub fn charge(&self) -> f64 {
        half_line_integral(&self.grid, |j| self.values[j] * self.values[j])
    }

    /// Value at `x` by cubic Hermite interpolation, evenly extended and zero past `R`.
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_with_slope(x).0
    }

    /// Value and slope at `x`.
    pub fn eval_with_slope(&self, x: f64) -> (f64, f64) {
        let sign = if x < 0.0 { -1.0 } else { 1.0 };
        let x = x.abs();
        if x >= self.grid.radius {
            return if x == self.grid.radius {
                (self.tail(), sign * self.slopes[self.grid.n])
            } else {
                (0.0, 0.0)
            };
        }
        let h = self.grid.step;
        let j = ((x / h).floor() as usize).min(self.grid.n - 1);
        let xj = self.grid.x(j);
        if x == xj {
            return (self.values[j], sign * self.slopes[j]);
        }
        let t = (x - xj) / h;
        let (y0, y1) = (self.values[j], self.values[j + 1]);
        let (d0, d1) = (self.slopes[j] * h, self.slopes[j + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let val = (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * d0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * d1;
        let der = ((6.0 * t2 - 6.0 * t) * y0 + (3.0 * t2 - 4.0 * t + 1.0) * d0 + (-6.0 * t2 + 6.0 * t) * y1 + (3.0 * t2 - 2.0 * t) * d1) / h;
        (val, sign * der)
    }

    /// Sup norm of the residual of `w'' + f w − ξw = 0`: the Numerov defect at steps
    /// `h` and `2h`, Richardson-combined to sixth order.
    pub fn residual(&self, nl: &InhomogeneousNonlinearity) -> f64 {
        self.residual_with(|x, w| nl.f(x, w))
    }

    pub(crate) fn residual_with(&self, coef: impl Fn(f64, f64) -> f64) -> f64 {
        let g = &self.grid;
        let n = g.n as isize;
        let at = |i: isize| self.values[i.unsigned_abs()];
        let rhs = |i: isize| {
            let j = i.unsigned_abs();
            (self.xi - coef(g.x(j), self.values[j])) * self.values[j]
        };
        let numerov = |j: isize, m: isize| {
            let h = m as f64 * g.step;
            (at(j + m) - 2.0 * at(j) + at(j - m)) / (h * h) - (rhs(j + m) + 10.0 * rhs(j) + rhs(j - m)) / 12.0
        };
        let mut worst: f64 = 0.0;
        for j in 0..n {
            let r = if j + 2 <= n {
                (16.0 * numerov(j, 1) - numerov(j, 2)) / 15.0
            } else {
                numerov(j, 1)
            };
            worst = worst.max(r.abs());
        }
        worst
    }

    /// Nodes and values of the even extension on `[−R, R]`.
    pub fn full_line(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.grid.n as isize;
        (-n..=n)
            .map(|i| {
                let j = i.unsigned_abs();
                (i.signum() as f64 * self.grid.x(j), self.values[j])
            })
            .unzip()
    }
}

pub(crate) fn half_line_integral(grid: &LineGrid, f: impl Fn(usize) -> f64) -> f64 {
    let n = grid.n;
    let inner: f64 = (1..n).map(&f).sum();
    grid.step * (0.5 * f(0) + inner + 0.5 * f(n))
}

/// Bracket and bounds for the initial-value search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootOptions {
    /// Largest accepted `w(R)`.
    pub tol: f64,
    /// Upper end of the admissible `w(0)` range.
    pub w_max: f64,
    /// Explicit `(undershoot, overshoot)` bracket.
    pub bracket: Option<(f64, f64)>,
    /// Starting guess when no bracket is given.
    pub guess: Option<f64>,
}

impl Default for ShootOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            w_max: 1e6,
            bracket: None,
            guess: None,
        }
    }
}

impl ShootOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Over,
    Under,
}

struct Shot {
    states: Vec<[f64; 2]>,
    outcome: Outcome,
}

/// One grid cell as two RK4 substeps.
fn rk4_cell(rhs: &impl Fn(f64, &[f64; 2]) -> [f64; 2], x: f64, y: &[f64; 2], h: f64) -> [f64; 2] {
    let mid = rk4_step(rhs, x, y, 0.5 * h);
    rk4_step(rhs, x + 0.5 * h, &mid, 0.5 * h)
}

fn shoot_once(coef: &dyn Fn(f64, f64) -> f64, xi: f64, grid: &LineGrid, a: f64) -> Shot {
    let rhs = |x: f64, y: &[f64; 2]| [y[1], (xi - coef(x, y[0])) * y[0]];
    let mut states = Vec::with_capacity(grid.n + 1);
    let mut y = [a, 0.0];
    states.push(y);
    for j in 0..grid.n {
        y = rk4_cell(&rhs, grid.x(j), &y, grid.step);
        states.push(y);
        if !(y[0] > 0.0) {
            return Shot {
                states,
                outcome: Outcome::Over,
            };
        }
        if y[1] > 0.0 {
            return Shot {
                states,
                outcome: Outcome::Under,
            };
        }
    }
    // undecided at R: sign of the growing component
    let kappa = (xi - coef(grid.radius, y[0])).max(0.0).sqrt();
    let outcome = if y[1] + kappa * y[0] >= 0.0 { Outcome::Under } else { Outcome::Over };
    Shot { states, outcome }
}

fn fail<T>(xi: f64, message: impl Into<String>) -> Result<T> {
    Err(Error::Shooting {
        xi,
        message: message.into(),
    })
}

/// Decaying continuation of the tail from node `c` by backward integration of the
/// equation with the nonlinearity frozen at the current tail estimate.
fn tail_patch(coef: &dyn Fn(f64, f64) -> f64, xi: f64, grid: &LineGrid, c: usize, wc: f64) -> Vec<[f64; 2]> {
    let n = grid.n;
    let m = n - c;
    let h = grid.step;
    let xc = grid.x(c);
    let mut est: Vec<f64> = (0..=m).map(|i| wc * (-xi.sqrt() * (grid.x(c + i) - xc)).exp()).collect();
    let mut out = vec![[0.0; 2]; m + 1];
    for _ in 0..3 {
        let interp = |x: f64| -> f64 {
            let s = ((x - xc) / h).clamp(0.0, m as f64);
            let i = (s.floor() as usize).min(m.saturating_sub(1));
            let fr = s - i as f64;
            let (a, b) = (est[i], est[(i + 1).min(m)]);
            if a <= 0.0 || b <= 0.0 {
                0.0
            } else {
                a.powf(1.0 - fr) * b.powf(fr)
            }
        };
        let rhs = |x: f64, y: &[f64; 2]| [y[1], (xi - coef(x, interp(x))) * y[0]];
        let kappa = (xi - coef(grid.radius, est[m])).max(0.0).sqrt();
        let mut y = [1.0, -kappa];
        out[m] = y;
        for i in (0..m).rev() {
            y = rk4_cell(&rhs, grid.x(c + i + 1), &y, -h);
            out[i] = y;
        }
        let s = wc / out[0][0];
        for (o, e) in out.iter_mut().zip(est.iter_mut()) {
            o[0] *= s;
            o[1] *= s;
            *e = o[0];
        }
    }
    out
}

pub(crate) fn shoot_with(
    coef: &dyn Fn(f64, f64) -> f64,
    xi: f64,
    grid: &LineGrid,
    opts: &ShootOptions,
) -> Result<StandingProfile> {
    if !(xi > 0.0) || !xi.is_finite() {
        return invalid(format!("frequency must be positive, got {xi}"));
    }
    if !(opts.tol > 0.0) {
        return invalid("tail tolerance must be positive");
    }
    let classify = |a: f64| shoot_once(coef, xi, grid, a).outcome;
    let (mut lo, mut hi) = match opts.bracket {
        Some((lo, hi)) => {
            if !(lo > 0.0 && hi > lo && hi <= opts.w_max) {
                return invalid(format!("bad bracket ({lo}, {hi})"));
            }
            if classify(lo) != Outcome::Under || classify(hi) != Outcome::Over {
                return fail(xi, format!("({lo}, {hi}) does not bracket the decaying solution"));
            }
            (lo, hi)
        }
        None => {
            let g = opts.guess.unwrap_or(1.0).clamp(1e-12, opts.w_max);
            let mut lo = g;
            let mut tries = 0;
            while classify(lo) != Outcome::Under {
                lo *= 0.5;
                tries += 1;
                if tries > 200 {
                    return fail(xi, "no undershoot found near zero");
                }
            }
            let mut hi = g.max(lo);
            while classify(hi) != Outcome::Over {
                if hi >= opts.w_max {
                    return fail(xi, format!("bracket not found in w(0) ∈ (0, {:e}]", opts.w_max));
                }
                hi = (hi * 2.0).min(opts.w_max);
            }
            (lo, hi)
        }
    };
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match classify(mid) {
            Outcome::Under => lo = mid,
            Outcome::Over => hi = mid,
        }
    }
    let a = shoot_once(coef, xi, grid, lo).states;
    let b = shoot_once(coef, xi, grid, hi).states;
    let mut c = 0;
    while c + 1 < a.len().min(b.len()) {
        let (u, v) = (a[c + 1], b[c + 1]);
        let ok = u[0] > 0.0 && v[0] > 0.0 && u[1] < 0.0 && v[1] < 0.0 && (u[0] - v[0]).abs() <= 1e-8 * u[0];
        if !ok {
            break;
        }
        c += 1;
    }
    let n = grid.n;
    let mut states: Vec<[f64; 2]> = (0..=c).map(|j| [0.5 * (a[j][0] + b[j][0]), 0.5 * (a[j][1] + b[j][1])]).collect();
    if c < n {
        if c == 0 {
            return fail(xi, "trajectories separate immediately; refine the step");
        }
        let t = tail_patch(coef, xi, grid, c, states[c][0]);
        states[c][1] = t[0][1];
        states.extend_from_slice(&t[1..]);
    }
    let values: Vec<f64> = states.iter().map(|s| s[0]).collect();
    let slopes: Vec<f64> = states.iter().map(|s| s[1]).collect();
    let nodes = values.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();
    if nodes > 0 || values.windows(2).any(|w| !(w[1] < w[0])) {
        return fail(xi, format!("profile is not positive and decreasing ({nodes} nodes)"));
    }
    if values[n] > opts.tol {
        return fail(
            xi,
            format!("tail w(R) = {:.3e} exceeds {:.1e}; enlarge the radius", values[n], opts.tol),
        );
    }
    Ok(StandingProfile {
        xi,
        grid: *grid,
        values,
        slopes,
    })
}

/// Even decaying solution of `w'' + f(x, w²) w = ξ w` by bisection on `w(0)`.
pub fn shoot_profile(nl: &InhomogeneousNonlinearity, xi: f64, grid: &LineGrid, tol: f64) -> Result<StandingProfile> {
    shoot_profile_with(nl, xi, grid, &ShootOptions::with_tol(tol))
}

pub fn shoot_profile_with(
    nl: &InhomogeneousNonlinearity,
    xi: f64,
    grid: &LineGrid,
    opts: &ShootOptions,
) -> Result<StandingProfile> {
    let coef = |x: f64, w: f64| nl.f(x, w);
    shoot_with(&coef, xi, grid, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic() -> InhomogeneousNonlinearity {
        InhomogeneousNonlinearity::pt(3.0, 0.0).unwrap()
    }

    #[test]
    fn sech_profile() {
        for xi in [0.5, 1.0, 2.0] {
            let g = LineGrid::for_frequency(xi, 0.01).unwrap();
            let p = shoot_profile(&cubic(), xi, &g, 1e-8).unwrap();
            assert!((p.peak() - (2.0 * xi).sqrt()).abs() < 1e-6, "{}", p.peak());
            assert!((p.charge() - 2.0 * xi.sqrt()).abs() < 1e-6, "{}", p.charge());
            assert!(p.residual(&cubic()) < 1e-8, "{}", p.residual(&cubic()));
            let k = xi.sqrt();
            let worst = (0..=g.n())
                .map(|j| (p.values[j] - (2.0 * xi).sqrt() / (k * g.x(j)).cosh()).abs())
                .fold(0.0, f64::max);
            assert!(worst < 1e-6, "{worst}");
        }
    }

    #[test]
    fn rejects_bad_frequency() {
        let g = LineGrid::new(20.0, 0.01).unwrap();
        assert!(shoot_profile(&cubic(), 0.0, &g, 1e-8).is_err());
        assert!(shoot_profile(&cubic(), -1.0, &g, 1e-8).is_err());
    }

    #[test]
    fn bracket_independence() {
        let g = LineGrid::for_frequency(1.0, 0.01).unwrap();
        let a = shoot_profile_with(&cubic(), 1.0, &g, &ShootOptions { bracket: Some((0.5, 3.0)), ..Default::default() })
            .unwrap();
        let b = shoot_profile_with(&cubic(), 1.0, &g, &ShootOptions { bracket: Some((0.9, 10.0)), ..Default::default() })
            .unwrap();
        assert!((a.peak() - b.peak()).abs() < 1e-12);
        assert!(shoot_profile_with(&cubic(), 1.0, &g, &ShootOptions { bracket: Some((2.0, 3.0)), ..Default::default() })
            .is_err());
    }

    #[test]
    fn short_domain_fails_tail_check() {
        let g = LineGrid::new(5.0, 0.01).unwrap();
        assert!(matches!(shoot_profile(&cubic(), 1.0, &g, 1e-8), Err(Error::Shooting { .. })));
    }

    #[test]
    fn hermite_eval_reproduces_nodes() {
        let g = LineGrid::for_frequency(1.0, 0.05).unwrap();
        let p = shoot_profile(&cubic(), 1.0, &g, 1e-8).unwrap();
        assert_eq!(p.eval(g.x(7)), p.values[7]);
        assert_eq!(p.eval(-g.x(7)), p.values[7]);
        let x = 0.123;
        assert!((p.eval(x) - 2f64.sqrt() / x.cosh()).abs() < 1e-6);
        assert_eq!(p.eval(g.radius() + 1.0), 0.0);
    }
}
