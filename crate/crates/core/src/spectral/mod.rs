//! Eigendecompositions, kernels, Betti numbers and the classical spectral
//! bounds (Fiedler value, Merris bound, Cheeger inequality).

pub mod eigen;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::OrientedGraph;
use crate::matrix::{DenseSymMatrix, RealMatrix};
use crate::operators::{laplacian_even, laplacian_odd};

/// Matrices up to this size are diagonalized with cyclic Jacobi; larger ones
/// go through tridiagonal QL.
pub const JACOBI_MAX_DIM: usize = 128;

/// Relative kernel tolerance: eigenvalues below `KERNEL_REL_TOL * max(1, λ_max)`
/// count as zero.
pub const KERNEL_REL_TOL: f64 = 1e-8;

/// Eigenvalues within a factor of this many of the kernel tolerance make the
/// kernel dimension ambiguous.
pub const KERNEL_GUARD_FACTOR: f64 = 10.0;

/// Slack used when checking the Merris and Cheeger inequalities.
pub const BOUND_SLACK: f64 = 1e-9;

/// Largest vertex count accepted by the brute-force Cheeger constant.
pub const CHEEGER_MAX_VERTICES: usize = 20;

/// Full eigendecomposition with ascending eigenvalues and orthonormal
/// eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: RealMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, j: usize) -> Vec<f64> {
        self.eigenvectors.column(j)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Default kernel tolerance for this spectrum.
    pub fn kernel_tol(&self) -> f64 {
        KERNEL_REL_TOL * self.max_eigenvalue().abs().max(1.0)
    }

    /// `V diag(values) Vᵀ`.
    pub fn reconstruct_with(&self, values: &[f64]) -> DenseSymMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let mut out = RealMatrix::zeros(n, n);
        for k in 0..n {
            let lk = values[k];
            if lk == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * lk;
                if vik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)];
                }
            }
        }
        DenseSymMatrix::symmetrize(out).expect("square by construction")
    }

    /// `f(M)` through the eigenbasis.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> DenseSymMatrix {
        let values: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.reconstruct_with(&values)
    }

    /// `max |M - V Λ Vᵀ|`.
    pub fn reconstruction_error(&self, m: &DenseSymMatrix) -> f64 {
        self.reconstruct_with(&self.eigenvalues)
            .as_real()
            .sub(m.as_real())
            .map(|d| d.max_abs())
            .unwrap_or(f64::INFINITY)
    }

    /// `max |VᵀV - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let v = &self.eigenvectors;
        let vtv = v.transpose().matmul(v).expect("square");
        vtv.sub(&RealMatrix::identity(self.dim()))
            .expect("same shape")
            .max_abs()
    }

    /// Number of eigenvalues with magnitude below `tol`.
    pub fn count_below(&self, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|l| l.abs() < tol).count()
    }
}

/// Which algorithm diagonalizes a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenMethod {
    Jacobi,
    TridiagonalQl,
}

impl EigenMethod {
    pub fn for_dim(n: usize) -> Self {
        if n <= JACOBI_MAX_DIM {
            EigenMethod::Jacobi
        } else {
            EigenMethod::TridiagonalQl
        }
    }
}

/// Symmetric eigendecomposition, method chosen by size.
pub fn eig_sym(m: &DenseSymMatrix) -> Result<Spectrum> {
    eig_sym_with(m, EigenMethod::for_dim(m.dim()))
}

/// Symmetric eigendecomposition with an explicit method.
///
/// Eigenvalues are ascending; each eigenvector is signed so that its
/// largest-magnitude component (first one on ties) is positive.
pub fn eig_sym_with(m: &DenseSymMatrix, method: EigenMethod) -> Result<Spectrum> {
    let n = m.dim();
    let (values, vectors) = match method {
        EigenMethod::Jacobi => eigen::jacobi(m.as_real().entries(), n)?,
        EigenMethod::TridiagonalQl => {
            let (d, v) = eigen::tridiagonal_ql(m.as_real().entries(), n, true)?;
            (d, v.expect("vectors requested"))
        }
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = RealMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues.push(values[src]);
        let mut col: Vec<f64> = (0..n).map(|i| vectors[i * n + src]).collect();
        let mut best = 0;
        for i in 1..n {
            if col[i].abs() > col[best].abs() + 1e-12 {
                best = i;
            }
        }
        if n > 0 && col[best] < 0.0 {
            col.iter_mut().for_each(|x| *x = -*x);
        }
        for i in 0..n {
            eigenvectors[(i, dst)] = col[i];
        }
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Ascending eigenvalues only. Uses tridiagonal QL without accumulating
/// eigenvectors for large matrices.
pub fn eigvals_sym(m: &DenseSymMatrix) -> Result<Vec<f64>> {
    let n = m.dim();
    let mut values = if n <= JACOBI_MAX_DIM {
        eigen::jacobi(m.as_real().entries(), n)?.0
    } else {
        eigen::tridiagonal_ql(m.as_real().entries(), n, false)?.0
    };
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Orthonormal basis of the numerical null space.
#[derive(Debug, Clone, Serialize)]
pub struct KernelBasis {
    pub vectors: Vec<Vec<f64>>,
    pub tol: f64,
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// Kernel of a symmetric matrix. `tol = None` uses
/// `1e-8 * max(1, λ_max)`.
pub fn kernel_basis(m: &DenseSymMatrix, tol: Option<f64>) -> Result<KernelBasis> {
    let spectrum = eig_sym(m)?;
    kernel_from_spectrum(&spectrum, tol)
}

pub fn kernel_from_spectrum(spectrum: &Spectrum, tol: Option<f64>) -> Result<KernelBasis> {
    let tol = tol.unwrap_or_else(|| spectrum.kernel_tol());
    check_kernel_gap(&spectrum.eigenvalues, tol)?;
    let vectors = spectrum
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, l)| l.abs() < tol)
        .map(|(j, _)| spectrum.eigenvector(j))
        .collect();
    Ok(KernelBasis { vectors, tol })
}

/// Kernel dimension from eigenvalues, with the guard-band check.
pub fn kernel_dim(eigenvalues: &[f64], tol: f64) -> Result<usize> {
    check_kernel_gap(eigenvalues, tol)?;
    Ok(eigenvalues.iter().filter(|l| l.abs() < tol).count())
}

fn check_kernel_gap(eigenvalues: &[f64], tol: f64) -> Result<()> {
    for &l in eigenvalues {
        let a = l.abs();
        if a >= tol / KERNEL_GUARD_FACTOR && a < tol * KERNEL_GUARD_FACTOR {
            return Err(Error::AmbiguousKernel { eigenvalue: l, tol });
        }
    }
    Ok(())
}

/// Spectrum of the even Laplacian.
pub fn even_spectrum(g: &OrientedGraph) -> Result<Spectrum> {
    eig_sym(&laplacian_even(g).to_sym()?)
}

/// Spectrum of the odd Laplacian.
pub fn odd_spectrum(g: &OrientedGraph) -> Result<Spectrum> {
    eig_sym(&laplacian_odd(g).to_sym()?)
}

/// `(b0, b1)` computed both as kernel dimensions and combinatorially; the
/// two routes must agree.
pub fn betti_numbers(g: &OrientedGraph) -> Result<(usize, usize)> {
    let b0 = kernel_from_spectrum(&even_spectrum(g)?, None)?.dim();
    let b1 = kernel_from_spectrum(&odd_spectrum(g)?, None)?.dim();
    let components = g.component_count();
    let cycles = g.cycle_rank();
    if (b0, b1) != (components, cycles) {
        return Err(Error::RouteDisagreement {
            quantity: "betti numbers",
            detail: format!("kernel dims ({b0}, {b1}) vs combinatorial ({components}, {cycles})"),
        });
    }
    Ok((b0, b1))
}

/// Second-smallest eigenvalue of `Δ+`.
pub fn fiedler_value(g: &OrientedGraph) -> Result<f64> {
    if g.vertex_count() < 2 {
        return Err(Error::Precondition(
            "the Fiedler value needs at least 2 vertices".into(),
        ));
    }
    Ok(even_spectrum(g)?.eigenvalues[1])
}

#[derive(Debug, Clone, Serialize)]
pub struct MerrisReport {
    pub lambda_max: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Checks `λ_max(Δ+) <= max_v (d(v) + m(v))` where `m(v)` is the mean degree
/// of the neighbours of `v`. Isolated vertices have no `m(v)` and are skipped.
pub fn merris_bound_check(g: &OrientedGraph) -> Result<MerrisReport> {
    if g.edge_count() == 0 {
        return Err(Error::Precondition(
            "the Merris bound is undefined on an edgeless graph".into(),
        ));
    }
    let bound = merris_bound(g);
    let lambda_max = even_spectrum(g)?.max_eigenvalue();
    Ok(MerrisReport {
        lambda_max,
        bound,
        holds: lambda_max <= bound + BOUND_SLACK,
    })
}

pub fn merris_bound(g: &OrientedGraph) -> f64 {
    let degrees = g.degrees();
    (0..g.vertex_count())
        .filter(|&v| degrees[v] > 0)
        .map(|v| {
            let sum: usize = g.neighbors(v).map(|w| degrees[w]).sum();
            degrees[v] as f64 + sum as f64 / degrees[v] as f64
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `I - D^{-1/2} A D^{-1/2}`; every vertex must have positive degree.
pub fn normalized_laplacian(g: &OrientedGraph) -> Result<DenseSymMatrix> {
    let n = g.vertex_count();
    let degrees = g.degrees();
    if let Some(v) = degrees.iter().position(|&d| d == 0) {
        return Err(Error::Precondition(format!(
            "isolated vertex `{}` has no normalized Laplacian row",
            g.vertices()[v]
        )));
    }
    let mut m = RealMatrix::identity(n);
    for e in g.edges() {
        let w = -1.0 / ((degrees[e.tail] * degrees[e.head]) as f64).sqrt();
        m[(e.tail, e.head)] = w;
        m[(e.head, e.tail)] = w;
    }
    DenseSymMatrix::new(m)
}

/// Brute-force Cheeger constant
/// `min_S |∂S| / min(vol S, vol S̄)` over nonempty proper vertex subsets.
pub fn cheeger_constant(g: &OrientedGraph) -> Result<f64> {
    let n = g.vertex_count();
    if n > CHEEGER_MAX_VERTICES {
        return Err(Error::CapExceeded(format!(
            "Cheeger brute force is capped at {CHEEGER_MAX_VERTICES} vertices, graph has {n}"
        )));
    }
    if n < 2 || !g.is_connected() {
        return Err(Error::Precondition(
            "the Cheeger constant needs a connected graph with at least 2 vertices".into(),
        ));
    }
    let degrees = g.degrees();
    let total: usize = degrees.iter().sum();
    let mut best = f64::INFINITY;
    // fixing the last vertex outside S visits each bipartition once
    for mask in 1u32..(1u32 << (n - 1)) {
        let vol: usize = (0..n).filter(|&v| mask >> v & 1 == 1).map(|v| degrees[v]).sum();
        let cut = g
            .edges()
            .iter()
            .filter(|e| (mask >> e.tail & 1) != (mask >> e.head & 1))
            .count();
        let denom = vol.min(total - vol);
        best = best.min(cut as f64 / denom as f64);
    }
    Ok(best)
}

#[derive(Debug, Clone, Serialize)]
pub struct CheegerReport {
    pub h: f64,
    pub lambda2: f64,
    pub holds: bool,
}

/// Checks `2h >= λ2 >= h²/2` for the normalized Laplacian.
pub fn cheeger_report(g: &OrientedGraph) -> Result<CheegerReport> {
    let h = cheeger_constant(g)?;
    let lambda2 = eigvals_sym(&normalized_laplacian(g)?)?[1];
    let holds = 2.0 * h >= lambda2 - BOUND_SLACK && lambda2 >= h * h / 2.0 - BOUND_SLACK;
    Ok(CheegerReport { h, lambda2, holds })
}

/// Eigenvalues with magnitude at least `tol`.
pub fn nonzero_part(eigenvalues: &[f64], tol: f64) -> Vec<f64> {
    eigenvalues.iter().copied().filter(|l| l.abs() >= tol).collect()
}

/// Whether two ascending lists agree entrywise within `tol`.
pub fn multisets_match(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}
