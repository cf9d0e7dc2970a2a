//! Cycle graph spectra and their metric scaling toward the circle.
//!
//! With edge length `h = 2π/n`, the scaled Laplacian `Δ+ / h²` on `C_n` has
//! eigenvalues `(n/π)² sin²(kπ/n)`, which tend to `k²` as `n → ∞`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::OrientedGraph;
use crate::operators::{laplacian_even, laplacian_odd};
use crate::spectral::{eigvals_sym, multisets_match, nonzero_part, KERNEL_REL_TOL};

/// Agreement required between even and odd nonzero spectra, relative to the
/// largest eigenvalue.
pub const SECTOR_MATCH_TOL: f64 = 1e-9;

/// Directed cycle `v1 -> v2 -> ... -> vn -> v1`.
pub fn cycle_graph(n: usize) -> Result<OrientedGraph> {
    require_cycle(n)?;
    let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    OrientedGraph::from_pairs(format!("c{n}"), n, &pairs)
}

fn require_cycle(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::Precondition(format!(
            "a cycle needs at least 3 vertices, got {n}"
        )));
    }
    Ok(())
}

/// `{4 sin²(kπ/n) : k = 0..n-1}`, ascending.
pub fn cycle_spectrum_exact(n: usize) -> Result<Vec<f64>> {
    require_cycle(n)?;
    let mut values: Vec<f64> = (0..n).map(|k| 4.0 * (k as f64 * PI / n as f64).sin().powi(2)).collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// `(n/π)² sin²(kπ/n)` for one mode.
pub fn scaled_mode(n: usize, k: usize) -> f64 {
    let n = n as f64;
    (n / PI).powi(2) * (k as f64 * PI / n).sin().powi(2)
}

/// The spectrum of `Δ+ / h²` with `h = 2π/n`, ascending.
pub fn scaled_spectrum(n: usize) -> Result<Vec<f64>> {
    require_cycle(n)?;
    let mut values: Vec<f64> = (0..n).map(|k| scaled_mode(n, k)).collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Numerical eigenvalues of `Δ+` on `C_n`, ascending.
pub fn cycle_spectrum_numeric(n: usize) -> Result<Vec<f64>> {
    eigvals_sym(&laplacian_even(&cycle_graph(n)?).to_sym()?)
}

/// Largest deviation between the numerical and closed-form spectra of `C_n`.
pub fn closed_form_deviation(n: usize) -> Result<f64> {
    let exact = cycle_spectrum_exact(n)?;
    let numeric = cycle_spectrum_numeric(n)?;
    Ok(exact
        .iter()
        .zip(&numeric)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub k: usize,
    /// Scaled eigenvalue from the numerical spectrum.
    pub scaled: f64,
    /// Scaled eigenvalue from the closed form.
    pub scaled_exact: f64,
    pub target: f64,
    /// `|scaled - k²| / max(k², 1)`
    pub relative_error: f64,
    /// Same, from the closed form.
    pub exact_relative_error: f64,
    /// `(kπ/n)² / 3`
    pub taylor_bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SectorCheck {
    pub n: usize,
    pub matches: bool,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceStudy {
    pub rows: Vec<ConvergenceRow>,
    /// Closed-form errors are nonincreasing in `n` for every mode.
    pub monotone: bool,
    /// Every row lies within its Taylor bound.
    pub within_taylor_bound: bool,
    pub sectors: Vec<SectorCheck>,
}

/// Rows for every `n` in `n_list` (ascending) and `k = 0..=k_max`.
///
/// Mode `k >= 1` is read from the sorted numerical spectrum at index
/// `2k - 1`; for `k < n/2` the value appears twice, `k = n/2` sits at the top once.
pub fn convergence_study(n_list: &[usize], k_max: usize) -> Result<ConvergenceStudy> {
    let mut ns: Vec<usize> = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let Some(&n_min) = ns.first() else {
        return Err(Error::Precondition("no cycle lengths given".into()));
    };
    require_cycle(n_min)?;
    if 2 * k_max > n_min {
        return Err(Error::Precondition(format!(
            "k_max = {k_max} must be at most n/2 for every n; smallest n is {n_min}"
        )));
    }
    let mut rows = Vec::new();
    let mut sectors = Vec::new();
    for &n in &ns {
        let g = cycle_graph(n)?;
        let even = eigvals_sym(&laplacian_even(&g).to_sym()?)?;
        let odd = eigvals_sym(&laplacian_odd(&g).to_sym()?)?;
        let scale = even.last().copied().unwrap_or(0.0).max(1.0);
        let ktol = KERNEL_REL_TOL * scale;
        let (ne, no) = (nonzero_part(&even, ktol), nonzero_part(&odd, ktol));
        let max_deviation = if ne.len() == no.len() {
            ne.iter().zip(&no).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        sectors.push(SectorCheck {
            n,
            matches: multisets_match(&ne, &no, SECTOR_MATCH_TOL * scale),
            max_deviation,
        });

        let h2 = (2.0 * PI / n as f64).powi(2);
        for k in 0..=k_max {
            let raw = if k == 0 { even[0] } else { even[2 * k - 1] };
            let scaled = raw / h2;
            let scaled_exact = scaled_mode(n, k);
            let target = (k * k) as f64;
            let denom = target.max(1.0);
            rows.push(ConvergenceRow {
                n,
                k,
                scaled,
                scaled_exact,
                target,
                relative_error: (scaled - target).abs() / denom,
                exact_relative_error: (scaled_exact - target).abs() / denom,
                taylor_bound: (k as f64 * PI / n as f64).powi(2) / 3.0,
            });
        }
    }
    let monotone = (0..=k_max).all(|k| {
        let errs: Vec<f64> = rows
            .iter()
            .filter(|r| r.k == k)
            .map(|r| r.exact_relative_error)
            .collect();
        errs.windows(2).all(|w| w[1] <= w[0])
    });
    let within_taylor_bound = rows.iter().all(|r| r.exact_relative_error <= r.taylor_bound + 1e-9);
    Ok(ConvergenceStudy {
        rows,
        monotone,
        within_taylor_bound,
        sectors,
    })
}
