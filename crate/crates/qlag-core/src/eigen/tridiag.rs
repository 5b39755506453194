//! Symmetric tridiagonal eigensolvers.
//!
//! `eig_all` is an implicit-shift QL iteration with eigenvector accumulation,
//! the workhorse for production cell solves (matrix dimension ~100). For very
//! fine grids where only a few low states are needed, `lowest_states` runs
//! Sturm-sequence bisection plus inverse iteration.

use crate::error::CoreError;
use crate::Result;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

/// Symmetric tridiagonal matrix: `diag[i]` couples to itself, `off[i]`
/// couples rows i and i+1.
#[derive(Debug, Clone)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// y = T x
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.dim();
        for i in 0..n {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += self.off[i] * x[i + 1];
            }
            y[i] = v;
        }
    }

    /// Infinity-norm bound on the spectrum (Gershgorin).
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn count_below(&self, x: f64) -> usize {
        let n = self.dim();
        let mut count = 0usize;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let e2 = self.off[i - 1] * self.off[i - 1];
            let denom = if q == 0.0 { 1e-300 } else { q };
            q = self.diag[i] - x - e2 / denom;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Full spectrum with eigenvectors, ascending. Vectors are returned
    /// l2-normalized, one contiguous slice per eigenvalue.
    ///
    /// Implicit-shift QL with eigenvector accumulation (the classic tql2
    /// scheme). O(n³); intended for the ~100-point production cells.
    pub fn eig_all(&self) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let n = self.dim();
        let mut d = self.diag.clone();
        // e[i] couples rows i and i+1; e[n-1] is a zero working slot
        let mut e = vec![0.0_f64; n];
        e[..n - 1].copy_from_slice(&self.off);

        // z[j] starts as basis vector j and accumulates the rotations
        let mut z = vec![vec![0.0_f64; n]; n];
        for (j, col) in z.iter_mut().enumerate() {
            col[j] = 1.0;
        }

        let mut f = 0.0_f64;
        let mut b = 0.0_f64;
        for l in 0..n {
            let mut j = 0;
            b = b.max(d[l].abs() + e[l].abs());
            // look for a negligible subdiagonal element; e[n-1] = 0 stops the scan
            let mut m = l;
            while b + e[m].abs() != b {
                m += 1;
            }
            if m != l {
                loop {
                    if j == 64 {
                        return Err(CoreError::Convergence { residuals: vec![e[l].abs()] });
                    }
                    j += 1;
                    // form the implicit shift
                    let l1 = l + 1;
                    let g = d[l];
                    let p0 = (d[l1] - g) / (2.0 * e[l]);
                    let r = libm::hypot(p0, 1.0);
                    let denom = p0 + if p0 >= 0.0 { r } else { -r };
                    d[l] = e[l] / denom;
                    d[l1] = e[l] * denom;
                    let dl1 = d[l1];
                    let h = g - d[l];
                    for di in d.iter_mut().take(n).skip(l + 2) {
                        *di -= h;
                    }
                    f += h;
                    // QL sweep from m-1 down to l
                    let mut p = d[m];
                    let mut c = 1.0_f64;
                    let mut c2 = c;
                    let mut c3 = c;
                    let el1 = e[l1];
                    let mut s = 0.0_f64;
                    let mut s2 = 0.0_f64;
                    for i in (l..m).rev() {
                        c3 = c2;
                        c2 = c;
                        s2 = s;
                        let g2 = c * e[i];
                        let h2 = c * p;
                        let r2 = libm::hypot(p, e[i]);
                        e[i + 1] = s * r2;
                        s = e[i] / r2;
                        c = p / r2;
                        p = c * d[i] - s * g2;
                        d[i + 1] = h2 + s * (c * g2 + s * d[i]);
                        // rotate accumulated vectors i and i+1
                        let (lo, hi) = z.split_at_mut(i + 1);
                        let (za, zb) = (&mut lo[i], &mut hi[0]);
                        for k in 0..n {
                            let hk = zb[k];
                            zb[k] = s * za[k] + c * hk;
                            za[k] = c * za[k] - s * hk;
                        }
                    }
                    let p = -s * s2 * c3 * el1 * e[l] / dl1;
                    e[l] = s * p;
                    d[l] = c * p;
                    if b + e[l].abs() == b {
                        break;
                    }
                }
            }
            d[l] += f;
        }

        // sort ascending, carrying eigenvectors
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).expect("eigenvalues are finite"));
        let values: Vec<f64> = order.iter().map(|&j| d[j]).collect();
        let mut vectors = Vec::with_capacity(n);
        for &j in &order {
            vectors.push(core::mem::take(&mut z[j]));
        }
        Ok((values, vectors))
    }

    /// Lowest `k` eigenpairs by bisection and inverse iteration. Meant for
    /// large matrices where the full QL sweep would be wasteful.
    pub fn lowest_states(&self, k: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let n = self.dim();
        if k == 0 || k > n {
            return Err(CoreError::Param("requested state count out of range".into()));
        }
        let (glo, ghi) = self.gershgorin_bounds();
        let scale = ghi.abs().max(glo.abs()).max(1.0);
        let tol = 1e-14 * scale;

        let mut values = Vec::with_capacity(k);
        for idx in 0..k {
            let mut lo = glo;
            let mut hi = ghi;
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                if self.count_below(mid) > idx {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            values.push(0.5 * (lo + hi));
        }

        let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
        for idx in 0..k {
            let mut v = inverse_iteration(self, values[idx], scale)?;
            // re-orthogonalize within near-degenerate clusters
            for prev in 0..idx {
                if (values[idx] - values[prev]).abs() < 1e-8 * scale {
                    let dot: f64 = v.iter().zip(&vectors[prev]).map(|(a, b)| a * b).sum();
                    for (vi, pi) in v.iter_mut().zip(&vectors[prev]) {
                        *vi -= dot * pi;
                    }
                }
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(CoreError::Convergence { residuals: vec![f64::INFINITY] });
            }
            v.iter_mut().for_each(|x| *x /= norm);
            vectors.push(v);
        }
        Ok((values, vectors))
    }
}

/// One eigenvector of (T − λ) by LU-factored inverse iteration.
fn inverse_iteration(t: &SymTridiag, lambda: f64, scale: f64) -> Result<Vec<f64>> {
    let n = t.dim();
    // deterministic quasi-random start
    let mut v: Vec<f64> = (0..n)
        .map(|i| {
            let x = libm::sin(1.0 + 2.399963 * i as f64);
            0.5 + 0.5 * x
        })
        .collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);

    for _ in 0..6 {
        let mut w = solve_shifted(t, lambda, &v, scale);
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(CoreError::Convergence { residuals: vec![norm] });
        }
        w.iter_mut().for_each(|x| *x /= norm);
        // residual check
        let mut tv = vec![0.0; n];
        t.mul_vec(&w, &mut tv);
        let res: f64 = tv
            .iter()
            .zip(&w)
            .map(|(a, b)| (a - lambda * b) * (a - lambda * b))
            .sum::<f64>()
            .sqrt();
        v = w;
        if res < 1e-11 * scale {
            break;
        }
    }
    Ok(v)
}

/// Gaussian elimination with partial pivoting for (T − λ) x = b.
fn solve_shifted(t: &SymTridiag, lambda: f64, b: &[f64], scale: f64) -> Vec<f64> {
    let n = t.dim();
    let floor = 1e-305 + 1e-20 * scale;
    // bands: sub (below), d (diag), sup1 (above), sup2 (fill-in two above)
    let mut sub = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut sup1 = vec![0.0; n];
    let mut sup2 = vec![0.0; n];
    for i in 0..n {
        d[i] = t.diag[i] - lambda;
        if i + 1 < n {
            sup1[i] = t.off[i];
            sub[i + 1] = t.off[i];
        }
    }
    let mut x: Vec<f64> = b.to_vec();
    for i in 0..n - 1 {
        if sub[i + 1].abs() > d[i].abs() {
            // pivot: swap rows i and i+1
            let (a0, a1, a2) = (d[i], sup1[i], sup2[i]);
            d[i] = sub[i + 1];
            sup1[i] = d[i + 1];
            sup2[i] = sup1[i + 1];
            d[i + 1] = a1;
            sup1[i + 1] = a2;
            sub[i + 1] = a0;
            x.swap(i, i + 1);
            // eliminate with factor from the (swapped) sub entry
            let piv = if d[i].abs() < floor { floor } else { d[i] };
            let f = sub[i + 1] / piv;
            d[i + 1] -= f * sup1[i];
            sup1[i + 1] -= f * sup2[i];
            x[i + 1] -= f * x[i];
        } else {
            let piv = if d[i].abs() < floor { floor } else { d[i] };
            let f = sub[i + 1] / piv;
            d[i + 1] -= f * sup1[i];
            sup1[i + 1] -= f * sup2[i];
            x[i + 1] -= f * x[i];
        }
    }
    // back substitution
    for i in (0..n).rev() {
        let mut s = x[i];
        if i + 1 < n {
            s -= sup1[i] * x[i + 1];
        }
        if i + 2 < n {
            s -= sup2[i] * x[i + 2];
        }
        let piv = if d[i].abs() < floor { floor } else { d[i] };
        x[i] = s / piv;
    }
    x
}
