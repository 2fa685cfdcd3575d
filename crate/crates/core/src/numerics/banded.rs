//! Banded symmetric matrices and a bisection / inverse-iteration eigensolver.
//!
//! Eigenvalues are located by Sylvester inertia counts from a banded `LDLᵀ`
//! factorization of `M - x I`, then eigenvectors are refined by inverse iteration
//! with a pivoted banded LU solve.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Symmetric matrix stored by its lower band: `band[d][i] = M[i + d][i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSymmetricMatrix {
    n: usize,
    w: usize,
    band: Vec<Vec<f64>>,
}

impl BandedSymmetricMatrix {
    pub fn zeros(n: usize, w: usize) -> Result<Self> {
        if n == 0 {
            return invalid("matrix dimension must be positive");
        }
        let w = w.min(n - 1);
        let band = (0..=w).map(|d| vec![0.0; n - d]).collect();
        Ok(Self { n, w, band })
    }

    /// Tridiagonal matrix from its diagonal and off-diagonal.
    pub fn tridiagonal(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 || off.len() + 1 != n {
            return invalid(format!(
                "tridiagonal needs off.len() == diag.len() - 1 (got {} and {})",
                off.len(),
                n
            ));
        }
        let m = Self {
            n,
            w: if n > 1 { 1 } else { 0 },
            band: if n > 1 { vec![diag, off] } else { vec![diag] },
        };
        m.check_finite()?;
        Ok(m)
    }

    /// Build from a dense row-major matrix; entries outside the band must be zero
    /// and the band must be symmetric to 1e-12 relative.
    pub fn from_dense(rows: &[Vec<f64>], w: usize) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n, w)?;
        let scale = rows
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0f64, |a, v| a.max(v.abs()))
            .max(1.0);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return invalid("dense matrix is not square");
            }
            for (j, &v) in r.iter().enumerate() {
                let d = i.abs_diff(j);
                if d > m.w {
                    if v != 0.0 {
                        return invalid(format!("entry ({i},{j}) lies outside bandwidth {w}"));
                    }
                    continue;
                }
                if (v - rows[j][i]).abs() > 1e-12 * scale {
                    return invalid(format!("matrix is not symmetric at ({i},{j})"));
                }
                if i >= j {
                    m.band[d][j] = v;
                }
            }
        }
        m.check_finite()?;
        Ok(m)
    }

    fn check_finite(&self) -> Result<()> {
        if self.band.iter().flatten().all(|v| v.is_finite()) {
            Ok(())
        } else {
            invalid("matrix has non-finite entries")
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.w
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        let d = i - j;
        if d > self.w {
            0.0
        } else {
            self.band[d][j]
        }
    }

    /// Set `M[i][j]` and `M[j][i]`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        let d = i - j;
        assert!(d <= self.w, "entry ({i},{j}) outside band");
        self.band[d][j] = v;
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.band[0]
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let lo = i.saturating_sub(self.w);
            let hi = (i + self.w).min(self.n - 1);
            let mut s = 0.0;
            for j in lo..=hi {
                s += self.get(i, j) * x[j];
            }
            y[i] = s;
        }
        y
    }

    /// Infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        let mut best: f64 = 0.0;
        for i in 0..self.n {
            let lo = i.saturating_sub(self.w);
            let hi = (i + self.w).min(self.n - 1);
            let s: f64 = (lo..=hi).map(|j| self.get(i, j).abs()).sum();
            best = best.max(s);
        }
        best
    }

    fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            let a = i.saturating_sub(self.w);
            let b = (i + self.w).min(self.n - 1);
            let r: f64 = (a..=b).filter(|&j| j != i).map(|j| self.get(i, j).abs()).sum();
            let d = self.get(i, i);
            lo = lo.min(d - r);
            hi = hi.max(d + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (Sylvester's law of inertia).
    pub fn count_below(&self, x: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * self.norm_inf().max(1.0));
        self.count_below_with(x, pivmin)
    }

    fn count_below_with(&self, x: f64, pivmin: f64) -> usize {
        let n = self.n;
        let w = self.w;
        if w == 1 {
            // Sturm sequence for the tridiagonal case
            let d = &self.band[0];
            let e = &self.band[1];
            let mut count = 0;
            let mut q = d[0] - x;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
            for i in 1..n {
                q = d[i] - x - e[i - 1] * e[i - 1] / q;
                if q.abs() < pivmin {
                    q = -pivmin;
                }
                if q < 0.0 {
                    count += 1;
                }
            }
            return count;
        }
        // general band: L stored as l[i][d] = L[i][i - d], d in 1..=w
        let mut dvals = vec![0.0; n];
        let mut l = vec![vec![0.0; w + 1]; n];
        let mut count = 0;
        for j in 0..n {
            let mut dj = self.get(j, j) - x;
            for k in j.saturating_sub(w)..j {
                let ljk = l[j][j - k];
                dj -= ljk * ljk * dvals[k];
            }
            if dj.abs() < pivmin {
                dj = -pivmin;
            }
            if dj < 0.0 {
                count += 1;
            }
            dvals[j] = dj;
            for i in (j + 1)..=(j + w).min(n - 1) {
                let mut s = self.get(i, j);
                for k in i.saturating_sub(w)..j {
                    s -= l[i][i - k] * l[j][j - k] * dvals[k];
                }
                l[i][i - j] = s / dj;
            }
        }
        count
    }
}

/// Eigen-decomposition summary for a self-adjoint operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    /// Requested eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Unit eigenvectors matching `eigenvalues`.
    pub eigenvectors: Vec<Vec<f64>>,
    /// Exact count of negative eigenvalues from the inertia of `M`.
    pub negative_count: usize,
    /// Largest `‖Mv - λv‖` over the returned pairs.
    pub max_residual: f64,
    /// Total inverse-iteration sweeps used.
    pub iterations: usize,
}

impl SpectralReport {
    /// Eigenvalues below `-tol` among the computed ones.
    pub fn morse_index(&self, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|&&l| l < -tol).count()
    }

    /// Smallest distance between consecutive computed eigenvalues.
    pub fn min_gap(&self) -> f64 {
        self.eigenvalues
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest `|λ|` among computed eigenvalues.
    pub fn min_abs(&self) -> f64 {
        self.eigenvalues.iter().fold(f64::INFINITY, |m, l| m.min(l.abs()))
    }
}

/// The `count` smallest eigenpairs of `m`, ascending.
pub fn eig_banded(m: &BandedSymmetricMatrix, count: usize) -> Result<SpectralReport> {
    if count > m.n {
        return invalid(format!("requested {count} eigenvalues of a {}x{} matrix", m.n, m.n));
    }
    let norm = m.norm_inf().max(f64::MIN_POSITIVE);
    let pivmin = f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * norm.max(1.0));
    let (glo, ghi) = m.gershgorin();
    let pad = 2.0 * f64::EPSILON * norm + 2.0 * pivmin;
    let (glo, ghi) = (glo - pad, ghi + pad);

    let mut eigenvalues = Vec::with_capacity(count);
    for idx in 0..count {
        // find x with count_below(x) == idx+1 boundary
        let mut lo = glo;
        let mut hi = ghi;
        let mut iter = 0;
        while iter < 200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if hi - lo <= 2.0 * f64::EPSILON * (lo.abs().max(hi.abs())) + pivmin {
                break;
            }
            if m.count_below_with(mid, pivmin) > idx {
                hi = mid;
            } else {
                lo = mid;
            }
            iter += 1;
        }
        eigenvalues.push(0.5 * (lo + hi));
    }

    let mut eigenvectors: Vec<Vec<f64>> = Vec::with_capacity(count);
    let mut total_iters = 0;
    let mut max_residual: f64 = 0.0;
    let cluster_tol = 1e-8 * norm;
    let tol = 1e-10 * norm;
    for idx in 0..count {
        let lam = eigenvalues[idx];
        // vectors from the same cluster must be kept orthogonal
        let first_in_cluster = (0..idx)
            .rev()
            .take_while(|&j| eigenvalues[j + 1] - eigenvalues[j] <= cluster_tol)
            .last()
            .unwrap_or(idx);
        let shift = lam + pivmin.max(f64::EPSILON * norm) * if idx % 2 == 0 { 1.0 } else { -1.0 };
        let lu = BandLu::factor(m, shift);
        let n = m.n;
        // deterministic start vector
        let mut v: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.37 * ((i as f64 + 1.0) * (idx as f64 + 1.3)).sin())
            .collect();
        normalize(&mut v);
        let mut residual = f64::INFINITY;
        let mut it = 0;
        while it < 50 {
            it += 1;
            let mut y = lu.solve(&v);
            for u in &eigenvectors[first_in_cluster..idx] {
                let d = dot(&y, u);
                for (yi, ui) in y.iter_mut().zip(u) {
                    *yi -= d * ui;
                }
            }
            if !normalize(&mut y) {
                break;
            }
            v = y;
            let mv = m.matvec(&v);
            let rq = dot(&mv, &v);
            residual = mv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - rq * b).powi(2))
                .sum::<f64>()
                .sqrt();
            if residual <= tol && it >= 2 {
                eigenvalues[idx] = rq;
                break;
            }
        }
        total_iters += it;
        if !(residual <= tol) {
            return Err(Error::NoConvergence {
                what: format!("inverse iteration for eigenvalue #{idx} (λ ≈ {lam:.6e})"),
                iterations: total_iters,
                residual,
            });
        }
        // sign convention: largest component positive
        let (imax, _) = v
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |(bi, bv), (i, &x)| if x.abs() > bv { (i, x.abs()) } else { (bi, bv) });
        if v[imax] < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
        max_residual = max_residual.max(residual);
        eigenvectors.push(v);
    }
    // Rayleigh quotients can reorder nearly equal values
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| eigenvalues[i]).collect();
    let eigenvectors = order.iter().map(|&i| eigenvectors[i].clone()).collect();

    Ok(SpectralReport {
        eigenvalues,
        eigenvectors,
        negative_count: m.count_below_with(0.0, pivmin),
        max_residual,
        iterations: total_iters,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b) {
        s += x * y;
    }
    s
}

fn normalize(v: &mut [f64]) -> bool {
    let n = dot(v, v).sqrt();
    if !(n > 0.0) || !n.is_finite() {
        return false;
    }
    for x in v.iter_mut() {
        *x /= n;
    }
    true
}

/// Banded LU with partial pivoting of `M - shift I`.
///
/// Row `i` keeps columns `i - w ..= i + 2w` (fill-in from pivoting).
struct BandLu {
    n: usize,
    w: usize,
    rows: Vec<f64>,
    piv: Vec<usize>,
    mult: Vec<f64>,
}

impl BandLu {
    fn width(w: usize) -> usize {
        3 * w + 1
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.rows[i * Self::width(self.w) + (j + self.w - i)]
    }

    fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        let wd = Self::width(self.w);
        &mut self.rows[i * wd + (j + self.w - i)]
    }

    fn factor(m: &BandedSymmetricMatrix, shift: f64) -> Self {
        let n = m.n;
        let w = m.w;
        let wd = Self::width(w);
        let mut lu = Self {
            n,
            w,
            rows: vec![0.0; n * wd],
            piv: vec![0; n],
            mult: vec![0.0; n * (w + 1)],
        };
        for i in 0..n {
            for j in i.saturating_sub(w)..=(i + w).min(n - 1) {
                *lu.at_mut(i, j) = m.get(i, j) - if i == j { shift } else { 0.0 };
            }
        }
        let tiny = f64::EPSILON * m.norm_inf().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let last = (k + w).min(n - 1);
            let mut p = k;
            let mut best = lu.at(k, k).abs();
            for i in (k + 1)..=last {
                let v = lu.at(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            lu.piv[k] = p;
            let hi = (k + 2 * w).min(n - 1);
            if p != k {
                for j in k..=hi {
                    let a = if j + w >= p && j <= p + 2 * w { lu.at(p, j) } else { 0.0 };
                    let b = lu.at(k, j);
                    *lu.at_mut(k, j) = a;
                    if j + w >= p && j <= p + 2 * w {
                        *lu.at_mut(p, j) = b;
                    }
                }
            }
            if lu.at(k, k).abs() < tiny {
                *lu.at_mut(k, k) = tiny;
            }
            let pivot = lu.at(k, k);
            for i in (k + 1)..=last {
                let f = lu.at(i, k) / pivot;
                lu.mult[i * (w + 1) + (i - k)] = f;
                *lu.at_mut(i, k) = 0.0;
                if f != 0.0 {
                    for j in (k + 1)..=hi.min(i + 2 * w) {
                        let v = lu.at(k, j);
                        *lu.at_mut(i, j) -= f * v;
                    }
                }
            }
        }
        lu
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let w = self.w;
        let mut y = b.to_vec();
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                y.swap(k, p);
            }
            let last = (k + w).min(n - 1);
            for i in (k + 1)..=last {
                let f = self.mult[i * (w + 1) + (i - k)];
                y[i] -= f * y[k];
            }
        }
        for i in (0..n).rev() {
            let hi = (i + 2 * w).min(n - 1);
            let mut s = y[i];
            for j in (i + 1)..=hi {
                s -= self.at(i, j) * y[j];
            }
            y[i] = s / self.at(i, i);
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_eigenvalues() {
        let m = BandedSymmetricMatrix::tridiagonal(vec![1.0; 5], vec![0.0; 4]).unwrap();
        let r = eig_banded(&m, 5).unwrap();
        for l in &r.eigenvalues {
            assert!((l - 1.0).abs() < 1e-14);
        }
        // eigenvectors of a degenerate cluster stay orthonormal
        for i in 0..5 {
            for j in 0..5 {
                let d = dot(&r.eigenvectors[i], &r.eigenvectors[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-10, "({i},{j}) -> {d}");
            }
        }
    }

    #[test]
    fn two_by_two_swap() {
        let m = BandedSymmetricMatrix::from_dense(&[vec![0.0, 1.0], vec![1.0, 0.0]], 1).unwrap();
        let r = eig_banded(&m, 2).unwrap();
        assert!((r.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((r.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert_eq!(r.negative_count, 1);
    }

    #[test]
    fn dirichlet_laplacian_smallest_eigenvalues() {
        let n = 50;
        let h: f64 = 0.1;
        let m = BandedSymmetricMatrix::tridiagonal(vec![2.0 / (h * h); n], vec![-1.0 / (h * h); n - 1])
            .unwrap();
        let r = eig_banded(&m, 4).unwrap();
        for (j, l) in r.eigenvalues.iter().enumerate() {
            let th = (j + 1) as f64 * std::f64::consts::PI / (n + 1) as f64;
            let want = 2.0 * (1.0 - th.cos()) / (h * h);
            assert!((l - want).abs() < 1e-10 * want.max(1.0), "{l} vs {want}");
        }
    }

    #[test]
    fn dense_five_by_five_matches_sylvester_count() {
        let rows = vec![
            vec![2.0, -1.0, 0.5, 0.0, 0.3],
            vec![-1.0, -3.0, 0.2, 0.1, 0.0],
            vec![0.5, 0.2, 1.0, -0.4, 0.7],
            vec![0.0, 0.1, -0.4, 0.5, 0.2],
            vec![0.3, 0.0, 0.7, 0.2, -1.5],
        ];
        let m = BandedSymmetricMatrix::from_dense(&rows, 4).unwrap();
        let r = eig_banded(&m, 5).unwrap();
        assert!(r.max_residual <= 1e-10 * m.norm_inf());
        let trace: f64 = (0..5).map(|i| rows[i][i]).sum();
        let sum: f64 = r.eigenvalues.iter().sum();
        assert!((trace - sum).abs() < 1e-12);
        assert_eq!(r.negative_count, r.eigenvalues.iter().filter(|&&l| l < 0.0).count());
    }

    #[test]
    fn rejects_bad_requests() {
        let m = BandedSymmetricMatrix::tridiagonal(vec![1.0; 3], vec![0.0; 2]).unwrap();
        assert!(eig_banded(&m, 4).is_err());
        assert!(BandedSymmetricMatrix::from_dense(&[vec![1.0, 2.0], vec![0.0, 1.0]], 1).is_err());
        assert!(BandedSymmetricMatrix::tridiagonal(vec![1.0, f64::NAN], vec![0.0]).is_err());
    }
}
