//! Distances to gauge/translation orbits, modulation, and coercivity ratios.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::model::{lyapunov, PlaneWaveSpec, TorusNlsModel};
use crate::error::{invalid, Result};
use crate::numerics::grid::check_same;
use crate::numerics::{PeriodicField, PeriodicGrid};

/// Which symmetries the orbit distance quotients out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitMode {
    GaugeOnly,
    GaugeTranslation,
}

/// Minimizer of `‖u − e^{iγ} w(· − a)‖_{H¹}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitFit {
    pub distance: f64,
    pub gamma: f64,
    pub shift: f64,
}

fn weights(grid: &PeriodicGrid) -> Vec<f64> {
    (0..grid.n())
        .map(|i| {
            let k = grid.wavenumber(i);
            1.0 + k * k
        })
        .collect()
}

/// `‖u − e^{iγ} T_a w‖_{H¹}` evaluated from Fourier coefficients.
fn residual_norm(grid: &PeriodicGrid, cu: &[Complex64], cw: &[Complex64], gamma: f64, a: f64) -> f64 {
    let mut s = 0.0;
    for idx in 0..grid.n() {
        let k = grid.wavenumber(idx);
        let rot = Complex64::from_polar(1.0, gamma - k * a);
        s += (1.0 + k * k) * (cu[idx] - cw[idx] * rot).norm_sqr();
    }
    let n = grid.n() as f64;
    (s * grid.length() / (n * n)).sqrt()
}

/// `H¹` distance from `u` to the orbit of `reference`.
pub fn orbit_distance(u: &PeriodicField, reference: &PeriodicField, mode: OrbitMode) -> Result<f64> {
    Ok(orbit_fit(u, reference, mode)?.distance)
}

/// Distance plus the optimal phase and shift.
pub fn orbit_fit(u: &PeriodicField, reference: &PeriodicField, mode: OrbitMode) -> Result<OrbitFit> {
    check_same(u.grid(), reference.grid())?;
    let grid = u.grid();
    let cu = u.fourier();
    let cw = reference.fourier();
    let wts = weights(grid);
    let x: Vec<Complex64> = (0..grid.n()).map(|i| cu[i] * cw[i].conj() * wts[i]).collect();
    let pairing = |a: f64| -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (idx, xi) in x.iter().enumerate() {
            s += xi * Complex64::from_polar(1.0, grid.wavenumber(idx) * a);
        }
        s
    };
    let shift = match mode {
        OrbitMode::GaugeOnly => 0.0,
        OrbitMode::GaugeTranslation => {
            // integer shifts in one inverse FFT
            let n = grid.n();
            let c = grid.ifft(&x);
            let mags: Vec<f64> = c.iter().map(|v| v.norm()).collect();
            let j = (0..n).fold(0, |b, i| if mags[i] > mags[b] { i } else { b });
            let dx = grid.dx();
            let (fm, f0, fp) = (mags[(j + n - 1) % n], mags[j], mags[(j + 1) % n]);
            let denom = fm - 2.0 * f0 + fp;
            let vertex = if denom < 0.0 { 0.5 * (fm - fp) / denom } else { 0.0 };
            let a0 = j as f64 * dx;
            let obj = |a: f64| pairing(a).norm();
            let mut best_a = a0;
            let mut best = obj(a0);
            let av = a0 + vertex.clamp(-1.0, 1.0) * dx;
            let fv = obj(av);
            if fv > best {
                best = fv;
                best_a = av;
            }
            // golden-section polish of the trigonometric polynomial around the peak
            let g = 0.5 * (5f64.sqrt() - 1.0);
            let (mut lo, mut hi) = (best_a - dx, best_a + dx);
            let mut c1 = hi - g * (hi - lo);
            let mut c2 = lo + g * (hi - lo);
            let mut f1 = obj(c1);
            let mut f2 = obj(c2);
            for _ in 0..80 {
                if hi - lo <= 1e-13 * dx {
                    break;
                }
                if f1 > f2 {
                    hi = c2;
                    c2 = c1;
                    f2 = f1;
                    c1 = hi - g * (hi - lo);
                    f1 = obj(c1);
                } else {
                    lo = c1;
                    c1 = c2;
                    f1 = f2;
                    c2 = lo + g * (hi - lo);
                    f2 = obj(c2);
                }
            }
            let am = 0.5 * (lo + hi);
            if obj(am) > best {
                best_a = am;
            }
            // Newton on d|c|²/da for the last digits
            let derivs = |a: f64| -> (f64, f64) {
                let (mut c0, mut c1, mut c2) = (Complex64::default(), Complex64::default(), Complex64::default());
                for (idx, xi) in x.iter().enumerate() {
                    let k = grid.wavenumber(idx);
                    let t = xi * Complex64::from_polar(1.0, k * a);
                    c0 += t;
                    c1 += t * Complex64::new(0.0, k);
                    c2 -= t * (k * k);
                }
                let f1 = 2.0 * (c0.conj() * c1).re;
                let f2 = 2.0 * (c1.norm_sqr() + (c0.conj() * c2).re);
                (f1, f2)
            };
            for _ in 0..8 {
                let (d1, d2) = derivs(best_a);
                if !(d2 < 0.0) {
                    break;
                }
                let next = best_a - d1 / d2;
                if (next - best_a).abs() > dx || obj(next) < obj(best_a) * (1.0 - 1e-12) {
                    break;
                }
                let done = (next - best_a).abs() <= 1e-15 * grid.length();
                best_a = next;
                if done {
                    break;
                }
            }
            best_a.rem_euclid(grid.length())
        }
    };
    let c = pairing(shift);
    let gamma = if c.norm() > 0.0 { c.arg() } else { 0.0 };
    let gamma = gamma.rem_euclid(std::f64::consts::TAU);
    Ok(OrbitFit {
        distance: residual_norm(grid, &cu, &cw, gamma, shift),
        gamma,
        shift,
    })
}

/// `e^{ikx} u`, which turns a wavenumber-`k` plane wave into a constant one.
pub fn remove_wavenumber(u: &PeriodicField, k: f64) -> Result<PeriodicField> {
    if u.grid().lattice_index(k).is_none() {
        return invalid(format!("wavenumber {k} is off the lattice"));
    }
    let g = u.grid();
    let vals = u
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| v * Complex64::from_polar(1.0, k * g.x(j)))
        .collect();
    PeriodicField::new(g.clone(), vals)
}

/// Phase and remainder of `e^{iγ} W = α + V` with `Im ∫ V = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Modulation {
    pub gamma: f64,
    pub remainder: PeriodicField,
}

/// Modulation decomposition around the constant plane wave `α` (wavenumber zero).
///
/// The phase is the closed-form root `γ = arg(sgn α) − arg ∫W`; the decomposition is
/// refused when `|∫W| < |α|L/2`, which is outside the neighbourhood where the root is
/// the distance-minimizing one.
pub fn modulation_decompose(w: &PeriodicField, spec: &PlaneWaveSpec) -> Result<Modulation> {
    if spec.k != 0.0 {
        return invalid("modulation is defined for wavenumber-zero plane waves; reduce first");
    }
    if spec.alpha == 0.0 {
        return invalid("plane-wave amplitude must be non-zero");
    }
    let l = w.grid().length();
    let integral = w.integral();
    if integral.norm() < 0.5 * spec.alpha.abs() * l {
        return invalid(format!(
            "field lies outside the modulation neighbourhood (|∫W| = {:.3e} < |α|L/2 = {:.3e})",
            integral.norm(),
            0.5 * spec.alpha.abs() * l
        ));
    }
    let target = if spec.alpha > 0.0 { 0.0 } else { std::f64::consts::PI };
    let gamma = (target - integral.arg()).rem_euclid(std::f64::consts::TAU);
    let rot = Complex64::from_polar(1.0, gamma);
    let remainder = w.map(|v| v * rot - spec.alpha);
    Ok(Modulation { gamma, remainder })
}

/// Radially rescale `w` onto `{F2 = −α²L/2}`.
pub fn project_to_charge(w: &PeriodicField, alpha: f64) -> Result<PeriodicField> {
    let n2 = w.l2_norm_sq();
    if !(n2 > 0.0) {
        return invalid("cannot rescale the zero field");
    }
    let s = (alpha * alpha * w.grid().length() / n2).sqrt();
    Ok(w.scale(Complex64::new(s, 0.0)))
}

/// `(ℒ(W) − ℒ(α)) / d(W, orbit)²` for `W` on the charge level of `α`.
pub fn coercivity_gap_check(model: &TorusNlsModel, alpha: f64, w: &PeriodicField) -> Result<f64> {
    check_same(&model.grid, w.grid())?;
    let spec = model.plane_wave_spec(alpha, 0.0)?;
    let l = model.length();
    let target = alpha * alpha * l;
    if (w.l2_norm_sq() - target).abs() > 1e-10 * target.max(1.0) {
        return invalid("field is not on the charge level set; project first");
    }
    let base = PeriodicField::constant(&model.grid, Complex64::new(alpha, 0.0));
    let d = orbit_distance(w, &base, OrbitMode::GaugeOnly)?;
    if d < 1e-12 {
        return invalid("field lies on the orbit; ratio undefined");
    }
    Ok((lyapunov(model, &spec, w) - lyapunov(model, &spec, &base)) / (d * d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::make_grid;
    use std::f64::consts::PI;

    fn field(grid: &PeriodicGrid) -> PeriodicField {
        PeriodicField::from_fn(grid, |x| {
            Complex64::new(1.0 + 0.3 * x.cos() + 0.1 * (2.0 * x).sin(), 0.2 * (x - 0.4).sin())
        })
    }

    #[test]
    fn distance_zero_on_orbit() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        let w = field(&g);
        assert_eq!(orbit_distance(&w, &w, OrbitMode::GaugeOnly).unwrap(), 0.0);
        let u = w.scale(Complex64::from_polar(1.0, PI / 7.0));
        assert!(orbit_distance(&u, &w, OrbitMode::GaugeOnly).unwrap() < 1e-12);
        let fit = orbit_fit(&u.translate(0.83), &w, OrbitMode::GaugeTranslation).unwrap();
        assert!(fit.distance < 1e-12, "{fit:?}");
        assert!((fit.shift - 0.83).abs() < 1e-12);
        assert!((fit.gamma - PI / 7.0).abs() < 1e-9);
    }

    #[test]
    fn modulation_examples() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        let m = crate::torus::TorusNlsModel::new(1.0, -1.0, g.clone()).unwrap();
        let spec = m.plane_wave_spec(1.3, 0.0).unwrap();
        let w = PeriodicField::constant(&g, Complex64::new(1.3, 0.0));
        let md = modulation_decompose(&w, &spec).unwrap();
        assert_eq!(md.gamma, 0.0);
        assert!(md.remainder.max_abs() < 1e-15);
        let w2 = w.scale(Complex64::from_polar(1.0, -0.4));
        let md = modulation_decompose(&w2, &spec).unwrap();
        assert!((md.gamma - 0.4).abs() < 1e-14);
        assert!(md.remainder.max_abs() < 1e-14);
        let far = PeriodicField::from_fn(&g, |x| Complex64::new(x.cos(), 0.0));
        assert!(modulation_decompose(&far, &spec).is_err());
    }

    #[test]
    fn projection_hits_the_level() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        let w = field(&g);
        let p = project_to_charge(&w, 0.7).unwrap();
        assert!((p.l2_norm_sq() - 0.49 * 2.0 * PI).abs() < 1e-12);
    }
}
