//! Witten index, supersymmetric degeneracy and vacuum structure.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::OrientedGraph;
use crate::operators::{laplacian_even, laplacian_odd};
use crate::spectral::{even_spectrum, kernel_dim, odd_spectrum, Spectrum};

/// Inverse temperatures used by the trace route by default.
pub const DEFAULT_BETAS: [f64; 3] = [0.5, 1.0, 2.0];

/// Largest distance from an integer tolerated when rounding the trace route.
pub const TRACE_GUARD: f64 = 1e-6;

/// Relative tolerance for grouping degenerate eigenvalues.
pub const GROUP_REL_TOL: f64 = 1e-8;

/// Gaps between `GROUP_REL_TOL` and this multiple of it are ambiguous.
pub const GROUP_GUARD_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, Serialize)]
pub struct TraceRoute {
    pub beta: f64,
    pub value: f64,
    pub rounded: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WittenRoutes {
    /// `|V| - |E|`
    pub euler: i64,
    /// `#components - cycle rank`
    pub topological: i64,
    /// `dim ker Δ+ - dim ker Δ-`
    pub kernel: i64,
    /// `tr F e^{-βΔ_S}` per β
    pub trace: Vec<TraceRoute>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WittenReport {
    pub witten: i64,
    pub routes: WittenRoutes,
    /// Largest difference between trace values at different β.
    pub beta_drift: f64,
}

fn sector_spectra(g: &OrientedGraph) -> Result<(Spectrum, Spectrum)> {
    Ok((even_spectrum(g)?, odd_spectrum(g)?))
}

fn kernel_tol(even: &Spectrum, odd: &Spectrum, tol: Option<f64>) -> f64 {
    tol.unwrap_or_else(|| even.kernel_tol().max(odd.kernel_tol()))
}

fn kernel_dims(even: &Spectrum, odd: &Spectrum, tol: Option<f64>) -> Result<(usize, usize)> {
    let tol = kernel_tol(even, odd, tol);
    Ok((kernel_dim(&even.eigenvalues, tol)?, kernel_dim(&odd.eigenvalues, tol)?))
}

/// `tr F e^{-βΔ_S} = Σ_even e^{-βλ} - Σ_odd e^{-βλ}`.
pub fn witten_trace(even: &[f64], odd: &[f64], beta: f64) -> f64 {
    let weight = |l: &f64| (-beta * l).exp();
    even.iter().map(weight).sum::<f64>() - odd.iter().map(weight).sum::<f64>()
}

/// Witten index by four routes; all must agree.
///
/// `betas` defaults to [`DEFAULT_BETAS`] when empty. `tol` overrides the
/// kernel tolerance.
pub fn witten_index(g: &OrientedGraph, betas: &[f64], tol: Option<f64>) -> Result<WittenReport> {
    let betas = if betas.is_empty() { &DEFAULT_BETAS[..] } else { betas };
    let (even, odd) = sector_spectra(g)?;
    let (ker_even, ker_odd) = kernel_dims(&even, &odd, tol)?;

    let euler = g.euler_characteristic();
    let topological = g.component_count() as i64 - g.cycle_rank() as i64;
    let kernel = ker_even as i64 - ker_odd as i64;
    let mut trace = Vec::with_capacity(betas.len());
    for &beta in betas {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::Precondition(format!("β must be positive, got {beta}")));
        }
        let value = witten_trace(&even.eigenvalues, &odd.eigenvalues, beta);
        let rounded = value.round();
        if (value - rounded).abs() > TRACE_GUARD {
            return Err(Error::RouteDisagreement {
                quantity: "witten index",
                detail: format!("trace route at β = {beta} gives {value}, not within {TRACE_GUARD:e} of an integer"),
            });
        }
        trace.push(TraceRoute {
            beta,
            value,
            rounded: rounded as i64,
        });
    }
    let beta_drift = trace
        .iter()
        .flat_map(|a| trace.iter().map(move |b| (a.value - b.value).abs()))
        .fold(0.0, f64::max);

    let routes = WittenRoutes {
        euler,
        topological,
        kernel,
        trace,
    };
    let all_agree = [topological, kernel]
        .into_iter()
        .chain(routes.trace.iter().map(|t| t.rounded))
        .all(|w| w == euler);
    if !all_agree {
        return Err(Error::RouteDisagreement {
            quantity: "witten index",
            detail: serde_json::to_string(&routes).unwrap_or_default(),
        });
    }
    Ok(WittenReport {
        witten: euler,
        routes,
        beta_drift,
    })
}

/// Supersymmetry is broken when neither sector has a zero mode.
pub fn is_susy_broken(g: &OrientedGraph, tol: Option<f64>) -> Result<bool> {
    let (even, odd) = sector_spectra(g)?;
    let (b, f) = kernel_dims(&even, &odd, tol)?;
    Ok(b == 0 && f == 0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegeneracyGroup {
    pub eigenvalue: f64,
    pub even_multiplicity: usize,
    pub odd_multiplicity: usize,
    pub is_zero: bool,
}

impl DegeneracyGroup {
    pub fn is_paired(&self) -> bool {
        self.is_zero || self.even_multiplicity == self.odd_multiplicity
    }
}

/// Groups the spectrum of `Δ_S = Δ+ ⊕ Δ-` into degenerate levels, each with
/// its multiplicity in the two sectors.
pub fn degeneracy_report(g: &OrientedGraph, tol: Option<f64>) -> Result<Vec<DegeneracyGroup>> {
    let (even, odd) = sector_spectra(g)?;
    let ktol = kernel_tol(&even, &odd, tol);
    let scale = even.max_eigenvalue().max(odd.max_eigenvalue()).max(1.0);
    let gtol = GROUP_REL_TOL * scale;

    let mut tagged: Vec<(f64, bool)> = even
        .eigenvalues
        .iter()
        .map(|&l| (l, true))
        .chain(odd.eigenvalues.iter().map(|&l| (l, false)))
        .collect();
    tagged.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut groups: Vec<(Vec<f64>, usize, usize)> = Vec::new();
    let mut last: Option<f64> = None;
    for (l, is_even) in tagged {
        let joins = match last {
            Some(prev) => {
                let gap = l - prev;
                if gap > gtol && gap < gtol * GROUP_GUARD_FACTOR {
                    return Err(Error::AmbiguousGrouping { gap, tol: gtol });
                }
                gap <= gtol
            }
            None => false,
        };
        if !joins {
            groups.push((Vec::new(), 0, 0));
        }
        let group = groups.last_mut().expect("group exists");
        group.0.push(l);
        if is_even {
            group.1 += 1;
        } else {
            group.2 += 1;
        }
        last = Some(l);
    }
    Ok(groups
        .into_iter()
        .map(|(values, even_multiplicity, odd_multiplicity)| {
            let eigenvalue = values.iter().sum::<f64>() / values.len() as f64;
            DegeneracyGroup {
                eigenvalue,
                even_multiplicity,
                odd_multiplicity,
                is_zero: eigenvalue.abs() < ktol,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct IntertwinerReport {
    /// `max ‖Δ-(Iᵀv) - λ Iᵀv‖` over nonzero even eigenpairs.
    pub even_to_odd: f64,
    /// `max ‖Δ+(Iw) - λ Iw‖` over nonzero odd eigenpairs.
    pub odd_to_even: f64,
    /// `max |‖Iᵀv‖² - λ|`, the norm identity of the map.
    pub norm_defect: f64,
    pub pairs_checked: usize,
}

impl IntertwinerReport {
    pub fn max_residual(&self) -> f64 {
        self.even_to_odd.max(self.odd_to_even)
    }
}

fn residual(m: &crate::matrix::RealMatrix, u: &[f64], lambda: f64) -> Result<f64> {
    let mu = m.apply(u)?;
    Ok(mu
        .iter()
        .zip(u)
        .map(|(a, b)| (a - lambda * b).powi(2))
        .sum::<f64>()
        .sqrt())
}

/// Carries eigenvectors across sectors with the incidence matrix and
/// measures how far the images are from being eigenvectors.
pub fn intertwiner_residuals(g: &OrientedGraph, tol: Option<f64>) -> Result<IntertwinerReport> {
    let (even, odd) = sector_spectra(g)?;
    let ktol = kernel_tol(&even, &odd, tol);
    let inc = g.incidence_matrix().to_real();
    let inc_t = g.incidence_matrix().transpose().to_real();
    let (lp, lm) = (laplacian_even(g).to_real(), laplacian_odd(g).to_real());

    let mut report = IntertwinerReport {
        even_to_odd: 0.0,
        odd_to_even: 0.0,
        norm_defect: 0.0,
        pairs_checked: 0,
    };
    for (j, &l) in even.eigenvalues.iter().enumerate() {
        if l.abs() < ktol {
            continue;
        }
        let u = inc_t.apply(&even.eigenvector(j))?;
        let norm2: f64 = u.iter().map(|x| x * x).sum();
        report.norm_defect = report.norm_defect.max((norm2 - l).abs());
        report.even_to_odd = report.even_to_odd.max(residual(&lm, &u, l)?);
        report.pairs_checked += 1;
    }
    for (j, &l) in odd.eigenvalues.iter().enumerate() {
        if l.abs() < ktol {
            continue;
        }
        let u = inc.apply(&odd.eigenvector(j))?;
        report.odd_to_even = report.odd_to_even.max(residual(&lp, &u, l)?);
        report.pairs_checked += 1;
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VacuumKind {
    Broken,
    PurelyBosonic,
    Mixed,
    PurelyFermionic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VacuumReport {
    pub n_bosonic_zero: usize,
    pub n_fermionic_zero: usize,
    pub witten_index: i64,
    pub broken: bool,
    pub kind: VacuumKind,
}

impl VacuumReport {
    pub fn from_counts(n_bosonic_zero: usize, n_fermionic_zero: usize) -> Self {
        let kind = match (n_bosonic_zero > 0, n_fermionic_zero > 0) {
            (false, false) => VacuumKind::Broken,
            (true, false) => VacuumKind::PurelyBosonic,
            (true, true) => VacuumKind::Mixed,
            (false, true) => VacuumKind::PurelyFermionic,
        };
        Self {
            n_bosonic_zero,
            n_fermionic_zero,
            witten_index: n_bosonic_zero as i64 - n_fermionic_zero as i64,
            broken: kind == VacuumKind::Broken,
            kind,
        }
    }
}

/// Zero-mode counts of both sectors. A purely fermionic vacuum cannot occur
/// (every cycle lies in some component) and is reported as an error.
pub fn vacuum_classification(g: &OrientedGraph, tol: Option<f64>) -> Result<VacuumReport> {
    let (even, odd) = sector_spectra(g)?;
    let (b, f) = kernel_dims(&even, &odd, tol)?;
    let report = VacuumReport::from_counts(b, f);
    if report.kind == VacuumKind::PurelyFermionic {
        return Err(Error::RouteDisagreement {
            quantity: "vacuum",
            detail: format!("{f} fermionic zero modes without a bosonic one"),
        });
    }
    Ok(report)
}
