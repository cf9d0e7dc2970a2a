//! Dense symmetric eigensolvers.
//!
//! Two independent algorithms: cyclic Jacobi rotations (small matrices,
//! high relative accuracy) and Householder tridiagonalization followed by
//! implicit QL (large matrices). Both return unsorted eigenpairs; sorting and
//! sign normalization happen in the caller.

#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};

/// Maximum number of Jacobi sweeps.
pub const MAX_SWEEPS: usize = 100;

/// Off-diagonal threshold relative to the Frobenius norm.
pub const JACOBI_REL_TOL: f64 = 1e-12;

const MAX_QL_ITERATIONS: usize = 60;

/// Cyclic Jacobi on a row-major `n x n` symmetric matrix.
///
/// Returns eigenvalues and the eigenvector matrix in row-major layout
/// (eigenvector `j` is column `j`).
pub fn jacobi(a: &[f64], n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut a = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let fro = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = JACOBI_REL_TOL * fro;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[p * n + q].abs());
            }
        }
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[k * n + p] = new_kp;
                    a[p * n + k] = new_kp;
                    a[k * n + q] = new_kq;
                    a[q * n + k] = new_kq;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }
    let values = (0..n).map(|i| a[i * n + i]).collect();
    Ok((values, v))
}

/// Householder reduction to tridiagonal form followed by implicit QL.
///
/// `want_vectors = false` skips accumulation of the orthogonal factor, which
/// is the dominant cost for large matrices. When vectors are requested they
/// are returned row-major with eigenvector `j` in column `j`.
pub fn tridiagonal_ql(a: &[f64], n: usize, want_vectors: bool) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    if n == 0 {
        return Ok((Vec::new(), want_vectors.then(Vec::new)));
    }
    // `w` holds the transpose of the working matrix so that the inner loops
    // run over contiguous memory: w[c * n + r] is entry (r, c).
    let mut w = a.to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut w, &mut d, &mut e, n, want_vectors);
    tql2(&mut w, &mut d, &mut e, n, want_vectors)?;
    let vectors = want_vectors.then(|| {
        let mut v = vec![0.0; n * n];
        for c in 0..n {
            for r in 0..n {
                v[r * n + c] = w[c * n + r];
            }
        }
        v
    });
    Ok((d, vectors))
}

#[inline]
fn at(w: &[f64], n: usize, r: usize, c: usize) -> f64 {
    w[c * n + r]
}

#[inline]
fn at_mut(w: &mut [f64], n: usize, r: usize, c: usize) -> &mut f64 {
    &mut w[c * n + r]
}

fn tred2(w: &mut [f64], d: &mut [f64], e: &mut [f64], n: usize, want_vectors: bool) {
    for j in 0..n {
        d[j] = at(w, n, n - 1, j);
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for &dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = at(w, n, i - 1, j);
                *at_mut(w, n, i, j) = 0.0;
                *at_mut(w, n, j, i) = 0.0;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                *at_mut(w, n, j, i) = f;
                g = e[j] + at(w, n, j, j) * f;
                let col = &w[j * n..j * n + n];
                for k in (j + 1)..i {
                    g += col[k] * d[k];
                    e[k] += col[k] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                let col = &mut w[j * n..j * n + n];
                for k in j..i {
                    col[k] -= f * e[k] + g * d[k];
                }
                d[j] = at(w, n, i - 1, j);
                *at_mut(w, n, i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    if want_vectors {
        for i in 0..(n - 1) {
            let vii = at(w, n, i, i);
            *at_mut(w, n, n - 1, i) = vii;
            *at_mut(w, n, i, i) = 1.0;
            let h = d[i + 1];
            if h != 0.0 {
                for k in 0..=i {
                    d[k] = at(w, n, k, i + 1) / h;
                }
                for j in 0..=i {
                    let mut g = 0.0;
                    for k in 0..=i {
                        g += at(w, n, k, i + 1) * at(w, n, k, j);
                    }
                    for k in 0..=i {
                        *at_mut(w, n, k, j) -= g * d[k];
                    }
                }
            }
            for k in 0..=i {
                *at_mut(w, n, k, i + 1) = 0.0;
            }
        }
        for j in 0..n {
            d[j] = at(w, n, n - 1, j);
            *at_mut(w, n, n - 1, j) = 0.0;
        }
        *at_mut(w, n, n - 1, n - 1) = 1.0;
    } else {
        for (j, dj) in d.iter_mut().enumerate() {
            *dj = at(w, n, j, j);
        }
    }
    e[0] = 0.0;
}

fn tql2(w: &mut [f64], d: &mut [f64], e: &mut [f64], n: usize, want_vectors: bool) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(Error::NoConvergence { sweeps: iter });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if want_vectors {
                        let (lo, hi) = w.split_at_mut((i + 1) * n);
                        let col_i = &mut lo[i * n..];
                        let col_i1 = &mut hi[..n];
                        for (vi, vi1) in col_i.iter_mut().zip(col_i1.iter_mut()) {
                            let hk = *vi1;
                            *vi1 = s * *vi + c * hk;
                            *vi = c * *vi - s * hk;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
