//! Uniform periodic grids and FFT-backed spectral operations.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Error, Result};

/// Uniform grid on `[0, L)` with `N` points.
///
/// FFT plans are built once and shared between clones.
#[derive(Clone)]
pub struct PeriodicGrid {
    n: usize,
    length: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for PeriodicGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PeriodicGrid")
            .field("n", &self.n)
            .field("length", &self.length)
            .finish()
    }
}

impl PartialEq for PeriodicGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.length.to_bits() == other.length.to_bits()
    }
}

/// Build a periodic grid. `n` must be even and at least 8, `length` positive.
pub fn make_grid(n: usize, length: f64) -> Result<PeriodicGrid> {
    PeriodicGrid::new(n, length)
}

impl PeriodicGrid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 8 || n % 2 != 0 {
            return invalid(format!("grid size must be even and >= 8, got {n}"));
        }
        if !(length > 0.0) || !length.is_finite() {
            return invalid(format!("grid length must be positive, got {length}"));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            n,
            length,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.length / self.n as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Fundamental wavenumber `2π/L`.
    pub fn k1(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Signed mode number stored at FFT slot `idx` (range `-N/2..N/2`).
    pub fn mode_number(&self, idx: usize) -> i64 {
        let half = self.n / 2;
        if idx < half {
            idx as i64
        } else {
            idx as i64 - self.n as i64
        }
    }

    /// FFT slot holding signed mode `m`.
    pub fn slot(&self, m: i64) -> usize {
        m.rem_euclid(self.n as i64) as usize
    }

    /// Wavenumber at FFT slot `idx`.
    pub fn wavenumber(&self, idx: usize) -> f64 {
        self.mode_number(idx) as f64 * self.k1()
    }

    /// All wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.wavenumber(i)).collect()
    }

    pub fn nyquist_slot(&self) -> usize {
        self.n / 2
    }

    /// Unnormalized forward transform.
    pub fn fft(&self, values: &[Complex64]) -> Vec<Complex64> {
        let mut buf = values.to_vec();
        self.forward.process(&mut buf);
        buf
    }

    /// Inverse transform including the `1/N` factor.
    pub fn ifft(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let mut buf = coeffs.to_vec();
        self.inverse.process(&mut buf);
        let s = 1.0 / self.n as f64;
        for c in buf.iter_mut() {
            *c *= s;
        }
        buf
    }

    pub(crate) fn fft_in_place(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
    }

    pub(crate) fn ifft_in_place(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
        let s = 1.0 / self.n as f64;
        for c in buf.iter_mut() {
            *c *= s;
        }
    }

    /// Is `k` an integer multiple of `2π/L` (to relative precision 1e-9)?
    pub fn lattice_index(&self, k: f64) -> Option<i64> {
        let m = k / self.k1();
        let r = m.round();
        if (m - r).abs() <= 1e-9 * m.abs().max(1.0) {
            Some(r as i64)
        } else {
            None
        }
    }
}

/// Complex samples on a [`PeriodicGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicField {
    grid: PeriodicGrid,
    values: Vec<Complex64>,
}

impl PeriodicField {
    pub fn new(grid: PeriodicGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n() {
            return invalid(format!(
                "field has {} samples but grid has {}",
                values.len(),
                grid.n()
            ));
        }
        if let Some(j) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return invalid(format!("non-finite sample at index {j}"));
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_parts_unchecked(grid: PeriodicGrid, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.n());
        Self { grid, values }
    }

    pub fn zeros(grid: &PeriodicGrid) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); grid.n()],
            grid: grid.clone(),
        }
    }

    pub fn constant(grid: &PeriodicGrid, c: Complex64) -> Self {
        Self {
            values: vec![c; grid.n()],
            grid: grid.clone(),
        }
    }

    pub fn from_fn(grid: &PeriodicGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..grid.n()).map(|j| f(grid.x(j))).collect();
        Self {
            grid: grid.clone(),
            values,
        }
    }

    /// Interleaved `[re0, im0, re1, im1, ...]` layout.
    pub fn from_real_vec(grid: &PeriodicGrid, v: &[f64]) -> Result<Self> {
        if v.len() != 2 * grid.n() {
            return invalid(format!("expected {} reals, got {}", 2 * grid.n(), v.len()));
        }
        let values = v.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
        Self::new(grid.clone(), values)
    }

    pub fn to_real_vec(&self) -> Vec<f64> {
        self.values.iter().flat_map(|c| [c.re, c.im]).collect()
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|v| v * s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same(&self.grid, &other.grid)?;
        Ok(Self {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same(&self.grid, &other.grid)?;
        Ok(Self {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        })
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &Self) -> Result<Self> {
        check_same(&self.grid, &other.grid)?;
        Ok(Self {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b * s)
                .collect(),
        })
    }

    pub fn fourier(&self) -> Vec<Complex64> {
        self.grid.fft(&self.values)
    }

    /// `∫ |u|^2` by the trapezoid rule.
    pub fn l2_norm_sq(&self) -> f64 {
        let mut s = 0.0;
        for v in &self.values {
            s += v.norm_sqr();
        }
        s * self.grid.dx()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    pub fn h1_norm(&self) -> f64 {
        h1_inner(self, self).map(|v| v.max(0.0).sqrt()).unwrap_or(f64::NAN)
    }

    /// `∫ u dx` by the trapezoid rule.
    pub fn integral(&self) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for v in &self.values {
            s += v;
        }
        s * self.grid.dx()
    }

    /// Translate by a real distance `a`, i.e. return `u(x - a)`, via Fourier phase shift.
    pub fn translate(&self, a: f64) -> Self {
        let mut c = self.fourier();
        for (idx, ci) in c.iter_mut().enumerate() {
            let k = self.grid.wavenumber(idx);
            *ci *= Complex64::from_polar(1.0, -k * a);
        }
        Self {
            grid: self.grid.clone(),
            values: self.grid.ifft(&c),
        }
    }
}

pub fn check_same(a: &PeriodicGrid, b: &PeriodicGrid) -> Result<()> {
    if a != b {
        return Err(Error::GridMismatch(format!(
            "(N={}, L={}) vs (N={}, L={})",
            a.n(),
            a.length(),
            b.n(),
            b.length()
        )));
    }
    Ok(())
}

/// Fourier multiplier `(ik)^order` for `order` in {1, 2}.
///
/// The Nyquist coefficient is dropped for first derivatives and kept (as `-k^2`)
/// for second derivatives.
pub fn spectral_derivative(f: &PeriodicField, order: u32) -> Result<PeriodicField> {
    if !(1..=2).contains(&order) {
        return invalid(format!("derivative order must be 1 or 2, got {order}"));
    }
    let grid = f.grid();
    let mut c = f.fourier();
    let nyq = grid.nyquist_slot();
    for (idx, ci) in c.iter_mut().enumerate() {
        let k = grid.wavenumber(idx);
        *ci *= match order {
            1 if idx == nyq => Complex64::new(0.0, 0.0),
            1 => Complex64::new(0.0, k),
            _ => Complex64::new(-k * k, 0.0),
        };
    }
    Ok(PeriodicField::from_parts_unchecked(grid.clone(), grid.ifft(&c)))
}

/// Complex `H^1` pairing `∫ (u_x conj(v_x) + u conj(v))`, computed in Fourier space.
pub fn h1_inner_complex(u: &PeriodicField, v: &PeriodicField) -> Result<Complex64> {
    check_same(u.grid(), v.grid())?;
    let grid = u.grid();
    let cu = u.fourier();
    let cv = v.fourier();
    Ok(h1_pair_coeffs(grid, &cu, &cv))
}

pub(crate) fn h1_pair_coeffs(grid: &PeriodicGrid, cu: &[Complex64], cv: &[Complex64]) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for idx in 0..grid.n() {
        let k = grid.wavenumber(idx);
        s += cu[idx] * cv[idx].conj() * (1.0 + k * k);
    }
    let n = grid.n() as f64;
    s * (grid.length() / (n * n))
}

/// Real `H^1` inner product `Re ∫ (u_x conj(v_x) + u conj(v))`.
pub fn h1_inner(u: &PeriodicField, v: &PeriodicField) -> Result<f64> {
    h1_inner_complex(u, v).map(|z| z.re)
}

/// `∫ |u_x|^2`, Nyquist mode included.
pub fn gradient_energy(u: &PeriodicField) -> f64 {
    let grid = u.grid();
    let c = u.fourier();
    let mut s = 0.0;
    for (idx, ci) in c.iter().enumerate() {
        let k = grid.wavenumber(idx);
        s += k * k * ci.norm_sqr();
    }
    let n = grid.n() as f64;
    s * grid.length() / (n * n)
}

/// Periodic trapezoid sum `dx * Σ f_j`.
pub fn periodic_quadrature(values: &[f64], dx: f64) -> f64 {
    let mut s = 0.0;
    for v in values {
        s += v;
    }
    s * dx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, l: f64) -> PeriodicGrid {
        make_grid(n, l).unwrap()
    }

    #[test]
    fn grid_points_and_wavenumbers() {
        let g = grid(8, 2.0 * PI);
        let x = g.points();
        assert!((x[1] - PI / 4.0).abs() < 1e-15);
        assert!((x[7] - 7.0 * PI / 4.0).abs() < 1e-14);
        let mut ks: Vec<i64> = (0..8).map(|i| g.wavenumber(i).round() as i64).collect();
        ks.sort();
        assert_eq!(ks, vec![-4, -3, -2, -1, 0, 1, 2, 3]);

        let g = grid(16, 1.0);
        assert!((g.wavenumber(1) - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn grid_rejects_bad_sizes() {
        assert!(make_grid(7, 2.0 * PI).is_err());
        assert!(make_grid(6, 1.0).is_err());
        assert!(make_grid(16, 0.0).is_err());
        assert!(make_grid(16, -1.0).is_err());
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        let g = grid(32, 3.0);
        let f = PeriodicField::constant(&g, Complex64::new(2.0, -1.0));
        let d = spectral_derivative(&f, 1).unwrap();
        assert!(d.max_abs() < 1e-14);
        let d = spectral_derivative(&f, 2).unwrap();
        assert!(d.max_abs() < 1e-14);
    }

    #[test]
    fn derivative_of_exponential() {
        let g = grid(32, 2.0 * PI);
        let f = PeriodicField::from_fn(&g, |x| Complex64::from_polar(1.0, -x));
        let d = spectral_derivative(&f, 1).unwrap();
        for (j, v) in d.values().iter().enumerate() {
            let want = Complex64::new(0.0, -1.0) * Complex64::from_polar(1.0, -g.x(j));
            assert!((v - want).norm() < 1e-13);
        }
    }

    #[test]
    fn derivative_of_gaussian_matches_fourth_order_stencil() {
        let l = 10.0;
        let n = 256;
        let g = grid(n, l);
        let f = PeriodicField::from_fn(&g, |x| Complex64::new((-(x - 5.0) * (x - 5.0)).exp(), 0.0));
        let d = spectral_derivative(&f, 1).unwrap();
        let h = g.dx();
        let v = f.values();
        let mut err: f64 = 0.0;
        for j in 0..n {
            let at = |o: i64| v[(j as i64 + o).rem_euclid(n as i64) as usize];
            let fd = (-at(2) + at(1) * 8.0 - at(-1) * 8.0 + at(-2)) / (12.0 * h);
            err = err.max((fd - d.values()[j]).norm());
        }
        // fourth-order stencil error is about h^4 * max|f^(5)| / 30
        assert!(err < 5.0 * h.powi(4), "err = {err}");
    }

    #[test]
    fn h1_inner_examples() {
        let l = 2.0 * PI;
        let g = grid(16, l);
        let a = 1.7;
        let u = PeriodicField::constant(&g, Complex64::new(a, 0.0));
        assert!((h1_inner(&u, &u).unwrap() - a * a * l).abs() < 1e-12);

        let e = PeriodicField::from_fn(&g, |x| Complex64::from_polar(1.0, -x));
        assert!((h1_inner(&e, &e).unwrap() - 4.0 * PI).abs() < 1e-12);

        let one = PeriodicField::constant(&g, Complex64::new(1.0, 0.0));
        let i = PeriodicField::constant(&g, Complex64::new(0.0, 1.0));
        assert!(h1_inner(&one, &i).unwrap().abs() < 1e-14);
    }

    #[test]
    fn h1_inner_rejects_grid_mismatch() {
        let u = PeriodicField::zeros(&grid(16, 1.0));
        let v = PeriodicField::zeros(&grid(16, 2.0));
        assert!(matches!(h1_inner(&u, &v), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn translate_by_whole_cells_is_a_shift() {
        let g = grid(16, 4.0);
        let f = PeriodicField::from_fn(&g, |x| Complex64::new((x * 0.7).sin(), x.cos()));
        let t = f.translate(3.0 * g.dx());
        for j in 0..16 {
            let src = (j + 16 - 3) % 16;
            assert!((t.values()[j] - f.values()[src]).norm() < 1e-13);
        }
    }
}
