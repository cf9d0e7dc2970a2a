//! Walk enumeration and signed walk sums.
//!
//! Four kinds of walks are enumerated exhaustively:
//!
//! * plain walks on vertices (counted by powers of `A`),
//! * vertex superwalks `v -e- v'`, where a step through `e` back to the
//!   starting vertex is a hesitation with sign `+1` and a step across `e` has
//!   sign `-1` (summed by powers of `Δ+ = D - A`),
//! * edge superwalks `e -v- e'` with sign `+1` when both edges point into or
//!   both out of `v` and `-1` otherwise (summed by powers of `Δ-`),
//! * vertex-edge walks alternating between vertices and edges, each step
//!   signed `-1` when the edge leaves the vertex and `+1` when it enters
//!   (summed by powers of the incidence Dirac operator).
//!
//! Enumeration is exponential and capped; the walk-sum propagator instead
//! accumulates signed walk sums step by step with the same local rules,
//! which lets the series run long enough to meet a rigorous tail bound.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::OrientedGraph;
use crate::matrix::IntMatrix;
use crate::operators::{dirac_incidence, laplacian_even, laplacian_odd, laplacian_susy};
use crate::spectral::eig_sym;

/// Longest walk the explicit enumerators accept.
pub const ENUM_MAX_LEN: usize = 8;

/// Largest edge count the explicit enumerators accept.
pub const ENUM_MAX_EDGES: usize = 12;

/// Upper limit on the number of series terms in walk-sum propagators.
pub const MAX_SERIES_TERMS: usize = 2000;

/// A vertex or an edge, addressed by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "type", content = "index", rename_all = "lowercase")]
pub enum Simplex {
    Vertex(usize),
    Edge(usize),
}

impl Simplex {
    /// Position in the vertex-first ordering of the vertex-edge space.
    pub fn index_in(self, g: &OrientedGraph) -> usize {
        match self {
            Simplex::Vertex(v) => v,
            Simplex::Edge(e) => g.vertex_count() + e,
        }
    }

    pub fn from_index(g: &OrientedGraph, k: usize) -> Self {
        if k < g.vertex_count() {
            Simplex::Vertex(k)
        } else {
            Simplex::Edge(k - g.vertex_count())
        }
    }

    /// Resolves a vertex or edge id.
    pub fn parse(g: &OrientedGraph, id: &str) -> Result<Self> {
        if let Ok(v) = g.vertex_index(id) {
            return Ok(Simplex::Vertex(v));
        }
        g.edge_index(id)
            .map(Simplex::Edge)
            .map_err(|_| Error::UnknownVertex(id.to_string()))
    }

    pub fn id<'a>(&self, g: &'a OrientedGraph) -> &'a str {
        match *self {
            Simplex::Vertex(v) => &g.vertices()[v],
            Simplex::Edge(e) => &g.edges()[e].id,
        }
    }

    fn check(self, g: &OrientedGraph) -> Result<()> {
        let (index, len, what) = match self {
            Simplex::Vertex(v) => (v, g.vertex_count(), "vertices"),
            Simplex::Edge(e) => (e, g.edge_count(), "edges"),
        };
        if index >= len {
            return Err(Error::IndexOutOfRange { what, index, len });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WalkKind {
    Plain,
    VertexSuper,
    EdgeSuper,
    VertexEdge,
}

/// One enumerated walk.
///
/// `steps` lists every simplex visited: vertices only for plain walks, and
/// the alternating vertex/edge sequence for the other kinds (a superwalk of
/// length `k` has `2k + 1` entries).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WalkRecord {
    pub kind: WalkKind,
    pub steps: Vec<Simplex>,
    pub sign: i64,
    pub hesitations: usize,
}

impl WalkRecord {
    /// Length in units of the walk's own steps.
    pub fn len(&self) -> usize {
        match self.kind {
            WalkKind::Plain | WalkKind::VertexEdge => self.steps.len() - 1,
            WalkKind::VertexSuper | WalkKind::EdgeSuper => (self.steps.len() - 1) / 2,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

struct StepOption {
    via: Option<Simplex>,
    next: Simplex,
    sign: i64,
    hesitation: bool,
}

fn step_options(g: &OrientedGraph, kind: WalkKind, from: Simplex, prev: Option<Simplex>) -> Vec<StepOption> {
    let mut out = Vec::new();
    match (kind, from) {
        (WalkKind::Plain, Simplex::Vertex(v)) => {
            let mut ns: Vec<usize> = g.neighbors(v).collect();
            ns.sort_unstable();
            out.extend(ns.into_iter().map(|w| StepOption {
                via: None,
                next: Simplex::Vertex(w),
                sign: 1,
                hesitation: false,
            }));
        }
        (WalkKind::VertexSuper, Simplex::Vertex(v)) => {
            for &k in g.incident_edges(v) {
                let w = g.edges()[k].other(v);
                let mut pair = [
                    StepOption {
                        via: Some(Simplex::Edge(k)),
                        next: Simplex::Vertex(v),
                        sign: 1,
                        hesitation: true,
                    },
                    StepOption {
                        via: Some(Simplex::Edge(k)),
                        next: Simplex::Vertex(w),
                        sign: -1,
                        hesitation: false,
                    },
                ];
                if w < v {
                    pair.swap(0, 1);
                }
                out.extend(pair);
            }
        }
        (WalkKind::EdgeSuper, Simplex::Edge(k)) => {
            let e = &g.edges()[k];
            let mut ends = [e.tail, e.head];
            ends.sort_unstable();
            for v in ends {
                for &k2 in g.incident_edges(v) {
                    let sign = e.incidence(v) * g.edges()[k2].incidence(v);
                    out.push(StepOption {
                        via: Some(Simplex::Vertex(v)),
                        next: Simplex::Edge(k2),
                        sign,
                        hesitation: k2 == k,
                    });
                }
            }
        }
        (WalkKind::VertexEdge, Simplex::Vertex(v)) => {
            for &k in g.incident_edges(v) {
                out.push(StepOption {
                    via: None,
                    next: Simplex::Edge(k),
                    sign: g.edges()[k].incidence(v),
                    hesitation: prev == Some(Simplex::Edge(k)),
                });
            }
        }
        (WalkKind::VertexEdge, Simplex::Edge(k)) => {
            let e = &g.edges()[k];
            let mut ends = [e.tail, e.head];
            ends.sort_unstable();
            for v in ends {
                out.push(StepOption {
                    via: None,
                    next: Simplex::Vertex(v),
                    sign: e.incidence(v),
                    hesitation: prev == Some(Simplex::Vertex(v)),
                });
            }
        }
        _ => {}
    }
    out
}

/// Depth-first traversal of every walk prefix of length `<= max_len` from
/// `start`. The visitor receives `(steps, sign, hesitations, length)`.
fn traverse<F>(g: &OrientedGraph, kind: WalkKind, start: Simplex, max_len: usize, visit: &mut F)
where
    F: FnMut(&[Simplex], i64, usize, usize),
{
    #[allow(clippy::too_many_arguments)]
    fn go<F>(
        g: &OrientedGraph,
        kind: WalkKind,
        path: &mut Vec<Simplex>,
        sign: i64,
        hesitations: usize,
        len: usize,
        max_len: usize,
        visit: &mut F,
    ) where
        F: FnMut(&[Simplex], i64, usize, usize),
    {
        visit(path, sign, hesitations, len);
        if len == max_len {
            return;
        }
        let cur = *path.last().expect("walk is nonempty");
        let prev = path.len().checked_sub(2).map(|i| path[i]);
        for opt in step_options(g, kind, cur, prev) {
            let pushed = if let Some(via) = opt.via {
                path.push(via);
                2
            } else {
                1
            };
            path.push(opt.next);
            go(
                g,
                kind,
                path,
                sign * opt.sign,
                hesitations + opt.hesitation as usize,
                len + 1,
                max_len,
                visit,
            );
            path.truncate(path.len() - pushed);
        }
    }
    let mut path = vec![start];
    go(g, kind, &mut path, 1, 0, 0, max_len, visit);
}

fn check_caps(g: &OrientedGraph, k: usize) -> Result<()> {
    if k > ENUM_MAX_LEN {
        return Err(Error::CapExceeded(format!(
            "walk length {k} exceeds the enumeration cap {ENUM_MAX_LEN}"
        )));
    }
    if g.edge_count() > ENUM_MAX_EDGES {
        return Err(Error::CapExceeded(format!(
            "{} edges exceed the enumeration cap {ENUM_MAX_EDGES}",
            g.edge_count()
        )));
    }
    Ok(())
}

fn check_endpoint_types(kind: WalkKind, s: Simplex) -> Result<()> {
    let ok = match kind {
        WalkKind::Plain | WalkKind::VertexSuper => matches!(s, Simplex::Vertex(_)),
        WalkKind::EdgeSuper => matches!(s, Simplex::Edge(_)),
        WalkKind::VertexEdge => true,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{s:?} is not a valid endpoint for {kind:?} walks"
        )))
    }
}

/// Every walk of the given kind and length from `from` to `to`, in
/// lexicographic order of their step sequences.
pub fn enumerate_walks(
    g: &OrientedGraph,
    from: Simplex,
    to: Simplex,
    k: usize,
    kind: WalkKind,
) -> Result<Vec<WalkRecord>> {
    check_caps(g, k)?;
    from.check(g)?;
    to.check(g)?;
    check_endpoint_types(kind, from)?;
    check_endpoint_types(kind, to)?;
    let mut records = Vec::new();
    traverse(g, kind, from, k, &mut |steps, sign, hesitations, len| {
        if len == k && steps.last() == Some(&to) {
            records.push(WalkRecord {
                kind,
                steps: steps.to_vec(),
                sign,
                hesitations,
            });
        }
    });
    records.sort_by(|a, b| a.steps.cmp(&b.steps));
    Ok(records)
}

/// `[A^k]_{ij}`.
pub fn count_walks(g: &OrientedGraph, i: usize, j: usize, k: u32) -> Result<i64> {
    Simplex::Vertex(i).check(g)?;
    Simplex::Vertex(j).check(g)?;
    Ok(g.adjacency_matrix().pow(k)?[(i, j)])
}

fn kind_dim(g: &OrientedGraph, kind: WalkKind) -> usize {
    match kind {
        WalkKind::Plain | WalkKind::VertexSuper => g.vertex_count(),
        WalkKind::EdgeSuper => g.edge_count(),
        WalkKind::VertexEdge => g.vertex_count() + g.edge_count(),
    }
}

fn kind_position(g: &OrientedGraph, kind: WalkKind, s: Simplex) -> usize {
    match (kind, s) {
        (WalkKind::VertexEdge, s) => s.index_in(g),
        (_, Simplex::Vertex(v)) => v,
        (_, Simplex::Edge(e)) => e,
    }
}

/// Signed walk sums by exhaustive enumeration: entry `(i, j)` of
/// `result[k]` is the sum of signs over all walks of length `k` from `i` to
/// `j`. Vertex-edge walks use the vertex-first index layout.
pub fn signed_walk_sums(g: &OrientedGraph, kind: WalkKind, k_max: usize) -> Result<Vec<IntMatrix>> {
    check_caps(g, k_max)?;
    let dim = kind_dim(g, kind);
    let mut tables = vec![IntMatrix::zeros(dim, dim); k_max + 1];
    for start in 0..dim {
        let s = match kind {
            WalkKind::VertexEdge => Simplex::from_index(g, start),
            WalkKind::EdgeSuper => Simplex::Edge(start),
            _ => Simplex::Vertex(start),
        };
        traverse(g, kind, s, k_max, &mut |steps, sign, _, len| {
            let end = kind_position(g, kind, *steps.last().expect("nonempty"));
            tables[len][(start, end)] += sign;
        });
    }
    Ok(tables)
}

/// One mismatch between a matrix power and its walk-sum oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityViolation {
    pub identity: &'static str,
    pub k: usize,
    pub i: usize,
    pub j: usize,
    pub matrix_value: i64,
    pub walk_sum: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PowerIdentityReport {
    pub k_max: usize,
    pub entries_checked: usize,
    pub violations: Vec<IdentityViolation>,
}

impl PowerIdentityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, for all `k <= k_max`, that
/// `[A^k]` counts plain walks, `[Δ+^k]` sums vertex-superwalk signs,
/// `[Δ-^k]` sums edge-superwalk signs and `[D^k]` sums vertex-edge walk
/// signs, entry by entry and exactly. The Laplacian here is `Δ+ = D - A`.
pub fn verify_power_identities(g: &OrientedGraph, k_max: usize) -> Result<PowerIdentityReport> {
    check_caps(g, k_max)?;
    let cases: [(&'static str, WalkKind, IntMatrix); 4] = [
        ("adjacency", WalkKind::Plain, g.adjacency_matrix()),
        ("even", WalkKind::VertexSuper, laplacian_even(g)),
        ("odd", WalkKind::EdgeSuper, laplacian_odd(g)),
        ("dirac", WalkKind::VertexEdge, dirac_incidence(g).entries().clone()),
    ];
    let mut entries_checked = 0;
    let mut violations = Vec::new();
    for (identity, kind, base) in cases {
        let sums = signed_walk_sums(g, kind, k_max)?;
        let mut power = IntMatrix::identity(base.rows());
        for (k, table) in sums.iter().enumerate() {
            if k > 0 {
                power = power.matmul(&base)?;
            }
            for i in 0..base.rows() {
                for j in 0..base.cols() {
                    entries_checked += 1;
                    if power[(i, j)] != table[(i, j)] {
                        violations.push(IdentityViolation {
                            identity,
                            k,
                            i,
                            j,
                            matrix_value: power[(i, j)],
                            walk_sum: table[(i, j)],
                        });
                    }
                }
            }
        }
    }
    Ok(PowerIdentityReport {
        k_max,
        entries_checked,
        violations,
    })
}

/// Number of terms `K` such that `Σ_{k>K} x^k / k! < tol`, with the bound
/// used to certify it.
fn series_cutoff(x: f64, tol: f64) -> Result<(usize, f64)> {
    let x = x.abs();
    // term = x^(K+1) / (K+1)!
    let mut term = x;
    for k in 0..MAX_SERIES_TERMS {
        let ratio = x / (k as f64 + 2.0);
        if ratio < 1.0 {
            let bound = term / (1.0 - ratio);
            if bound < tol {
                return Ok((k, bound));
            }
        }
        term *= x / (k as f64 + 2.0);
    }
    Err(Error::CapExceeded(format!(
        "walk-sum series needs more than {MAX_SERIES_TERMS} terms to reach tail bound {tol:e}"
    )))
}

/// One step of signed vertex-superwalk accumulation: every unit of weight
/// on `v` either hesitates through an incident edge (sign `+1`) or crosses it
/// (sign `-1`).
fn superwalk_step(g: &OrientedGraph, w: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; w.len()];
    for (v, &x) in w.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for &k in g.incident_edges(v) {
            out[v] += x;
            out[g.edges()[k].other(v)] -= x;
        }
    }
    out
}

fn superwalk_step_exact(g: &OrientedGraph, w: &[i128]) -> Vec<i128> {
    let mut out = vec![0; w.len()];
    for (v, &x) in w.iter().enumerate() {
        for &k in g.incident_edges(v) {
            out[v] += x;
            out[g.edges()[k].other(v)] -= x;
        }
    }
    out
}

/// Result of a walk-sum propagator evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct WalkSum {
    pub value: f64,
    /// Highest walk length included.
    pub terms: usize,
    /// Rigorous bound on the truncated tail.
    pub tail_bound: f64,
}

/// `⟨i| e^{t(A - D)} |j⟩` as
/// `Σ_k (t^k / k!) (-1)^k Σ_{γ ∈ W_k(i→j)} deg(γ)`, where `W_k` ranges over
/// vertex superwalks and `deg(γ) = (-1)^{#non-hesitant steps}`.
///
/// The series stops once `Σ_{k>K} (|t| ‖Δ‖_∞)^k / k! < tail_tol`.
pub fn walk_sum_propagator(g: &OrientedGraph, i: usize, j: usize, t: f64, tail_tol: f64) -> Result<WalkSum> {
    Simplex::Vertex(i).check(g)?;
    Simplex::Vertex(j).check(g)?;
    let norm = 2.0 * g.max_degree() as f64;
    let (terms, tail_bound) = series_cutoff(t * norm, tail_tol)?;
    let mut w = vec![0.0; g.vertex_count()];
    w[i] = 1.0;
    let mut value = w[j];
    for k in 1..=terms {
        w = superwalk_step(g, &w);
        let factor = -t / k as f64;
        w.iter_mut().for_each(|x| *x *= factor);
        value += w[j];
    }
    Ok(WalkSum {
        value,
        terms,
        tail_bound,
    })
}

/// Regular-graph form `e^{-dt} Σ_n (t^n / n!) W_n(i, j)` with plain walk
/// counts `W_n`. Fails on non-regular graphs.
pub fn regular_walk_sum_propagator(g: &OrientedGraph, i: usize, j: usize, t: f64, tail_tol: f64) -> Result<WalkSum> {
    Simplex::Vertex(i).check(g)?;
    Simplex::Vertex(j).check(g)?;
    let d = g
        .regular_degree()
        .ok_or_else(|| Error::Precondition("graph is not regular".into()))?;
    let damping = (-(d as f64) * t).exp();
    // the damping factor scales the tail as well
    let (terms, raw_bound) = series_cutoff(t * d as f64, tail_tol / damping.max(f64::MIN_POSITIVE))?;
    let mut w = vec![0.0; g.vertex_count()];
    w[i] = 1.0;
    let mut sum = w[j];
    for n in 1..=terms {
        let mut next = vec![0.0; w.len()];
        for (v, &x) in w.iter().enumerate() {
            for u in g.neighbors(v) {
                next[u] += x;
            }
        }
        let factor = t / n as f64;
        next.iter_mut().for_each(|x| *x *= factor);
        w = next;
        sum += w[j];
    }
    Ok(WalkSum {
        value: damping * sum,
        terms,
        tail_bound: raw_bound * damping,
    })
}

/// Outcome of checking the step-accumulated signed sums against explicit
/// enumeration.
#[derive(Debug, Clone, Serialize)]
pub struct OracleCheck {
    pub max_len: usize,
    pub agrees: bool,
}

/// Walk sum, matrix-exponential value and optional enumeration check.
#[derive(Debug, Clone, Serialize)]
pub struct WalkSumReport {
    pub from: String,
    pub to: String,
    pub t: f64,
    pub walk_sum: WalkSum,
    pub matrix_exponential: f64,
    pub difference: f64,
    pub oracle: Option<OracleCheck>,
}

/// Evaluates the walk-sum propagator next to the eigenbasis value of
/// `[e^{t(A-D)}]_{ij}`. With `oracle`, the per-length signed sums
/// accumulated by the propagator are compared against explicit enumeration
/// up to the enumeration cap.
pub fn walk_sum_report(
    g: &OrientedGraph,
    i: usize,
    j: usize,
    t: f64,
    tail_tol: f64,
    oracle: bool,
) -> Result<WalkSumReport> {
    let walk_sum = walk_sum_propagator(g, i, j, t, tail_tol)?;
    let spectrum = eig_sym(&laplacian_even(g).to_sym()?)?;
    let matrix_exponential = spectrum.map(|l| (-t * l).exp())[(i, j)];
    let oracle = if oracle {
        let max_len = ENUM_MAX_LEN.min(walk_sum.terms);
        let sums = signed_walk_sums(g, WalkKind::VertexSuper, max_len)?;
        let mut w = vec![0i128; g.vertex_count()];
        w[i] = 1;
        let mut agrees = true;
        for (k, table) in sums.iter().enumerate() {
            if k > 0 {
                w = superwalk_step_exact(g, &w);
            }
            agrees &= w[j] == table[(i, j)] as i128;
        }
        Some(OracleCheck { max_len, agrees })
    } else {
        None
    };
    Ok(WalkSumReport {
        from: g.vertices()[i].clone(),
        to: g.vertices()[j].clone(),
        t,
        difference: (walk_sum.value - matrix_exponential).abs(),
        walk_sum,
        matrix_exponential,
        oracle,
    })
}

/// `tr e^{t(A - D)}` through the eigenbasis.
pub fn partition_function(g: &OrientedGraph, t: f64) -> Result<f64> {
    let spectrum = eig_sym(&laplacian_even(g).to_sym()?)?;
    Ok(spectrum.eigenvalues.iter().map(|l| (-t * l).exp()).sum())
}

/// Partition function as a sum of closed-walk sums.
pub fn partition_function_walk_sum(g: &OrientedGraph, t: f64, tail_tol: f64) -> Result<f64> {
    (0..g.vertex_count())
        .map(|v| walk_sum_propagator(g, v, v, t, tail_tol).map(|w| w.value))
        .sum()
}

/// One series coefficient of a diagonal propagator entry.
#[derive(Debug, Clone, Serialize)]
pub struct SeriesOrder {
    pub order: u32,
    /// `[Δ_S^k]_{σσ}`
    pub exact: i64,
    /// `m^k`, with `m` the one-step return count
    pub formula: i64,
    pub agrees: bool,
}

/// Comparison of the diagonal entry `[e^{tD²}]_{σσ}` with the closed-walk
/// formula `e^{t m}` that raises the one-step return count `m` to the k-th
/// power instead of taking the k-th matrix power.
#[derive(Debug, Clone, Serialize)]
pub struct DiracTraceReport {
    pub simplex: Simplex,
    pub t: f64,
    pub one_step_return: i64,
    pub exact: f64,
    pub formula: f64,
    pub series: Vec<SeriesOrder>,
    /// First series order at which the two disagree, if any up to order 3.
    pub first_divergent_order: Option<u32>,
}

/// Highest series order tabulated by [`dirac_trace_comparison`].
pub const TRACE_SERIES_MAX_ORDER: u32 = 3;

pub fn dirac_trace_comparison(g: &OrientedGraph, sigma: Simplex, t: f64) -> Result<DiracTraceReport> {
    sigma.check(g)?;
    let idx = sigma.index_in(g);
    let susy = laplacian_susy(g);
    let one_step_return = match sigma {
        Simplex::Vertex(v) => g.degree(v) as i64,
        Simplex::Edge(_) => 2,
    };
    debug_assert_eq!(one_step_return, susy.entries()[(idx, idx)]);
    let exact = eig_sym(&susy.to_sym()?)?.map(|l| (t * l).exp())[(idx, idx)];
    let formula = (t * one_step_return as f64).exp();

    let base = susy.entries();
    let mut power = IntMatrix::identity(base.rows());
    let mut series = Vec::new();
    for order in 0..=TRACE_SERIES_MAX_ORDER {
        if order > 0 {
            power = power.matmul(base)?;
        }
        let exact_coeff = power[(idx, idx)];
        let formula_coeff = one_step_return.pow(order);
        series.push(SeriesOrder {
            order,
            exact: exact_coeff,
            formula: formula_coeff,
            agrees: exact_coeff == formula_coeff,
        });
    }
    let first_divergent_order = series.iter().find(|s| !s.agrees).map(|s| s.order);
    Ok(DiracTraceReport {
        simplex: sigma,
        t,
        one_step_return,
        exact,
        formula,
        series,
        first_divergent_order,
    })
}
