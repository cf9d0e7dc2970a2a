//! Acceptance run. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use susy_graph::continuum::{closed_form_deviation, convergence_study};
use susy_graph::generate::{
    bottleneck, complete, connected_graphs, cycle, disjoint_triangles, random_corpus, triangle_pendant,
};
use susy_graph::graph::OrientedGraph;
use susy_graph::morse::{is_discrete_morse, morse_consistency, random_morse_function};
use susy_graph::operators::{dirac_incidence, laplacian_even, laplacian_odd, laplacian_susy};
use susy_graph::rewiring::{apply_move, component_cycle_delta, verify_witten_invariance, Endpoint, RewiringMove};
use susy_graph::spectral::{
    cheeger_report, even_spectrum, kernel_dim, merris_bound_check, multisets_match, nonzero_part, odd_spectrum,
};
use susy_graph::susy::{intertwiner_residuals, is_susy_broken, witten_index};
use susy_graph::walks::{
    dirac_trace_comparison, regular_walk_sum_propagator, verify_power_identities, walk_sum_propagator, walk_sum_report,
    Simplex,
};

const CORPUS_SEED: u64 = 20_240_611;
const CORPUS_SIZE: usize = 200;

const PAIRING_TOL: f64 = 1e-8;
const INTERTWINER_TOL: f64 = 1e-8;
const WALK_SUM_TOL: f64 = 1e-8;
const WALK_TAIL_TOL: f64 = 1e-10;
const BETA_DRIFT_TOL: f64 = 1e-8;
const CONTINUUM_REL_TOL: f64 = 1e-4;
const CLOSED_FORM_TOL: f64 = 1e-9;
const MORSE_SAMPLES: usize = 100;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn corpus() -> Vec<OrientedGraph> {
    random_corpus(CORPUS_SEED, CORPUS_SIZE, 3, 12)
}

fn oracle_corpus() -> Vec<OrientedGraph> {
    connected_graphs(5, 7, CORPUS_SEED)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || {
        format!("took {:.2}s, limit {limit_s}s", elapsed.as_secs_f64())
    })
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn operator_identity() -> Outcome {
    let start = Instant::now();
    let graphs = corpus();
    for g in &graphs {
        let d = dirac_incidence(g);
        let lhs = d.compose(&d).map_err(err)?;
        let rhs = laplacian_susy(g);
        ensure(lhs == rhs, || format!("{}: D² differs from Δ+ ⊕ Δ-", g.name()))?;
        let block = rhs.entries();
        let n = g.vertex_count();
        let even = laplacian_even(g);
        let odd = laplacian_odd(g);
        let split = (0..block.rows()).all(|i| {
            (0..block.cols()).all(|j| {
                let expected = match (i < n, j < n) {
                    (true, true) => even[(i, j)],
                    (false, false) => odd[(i - n, j - n)],
                    _ => 0,
                };
                block[(i, j)] == expected
            })
        });
        ensure(split, || format!("{}: Δ_S is not block diagonal", g.name()))?;
    }
    within(start.elapsed(), 5.0)?;
    Ok(format!("{} graphs, exact integer equality", graphs.len()))
}

fn spectral_pairing() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut pairs = 0;
    for g in &corpus() {
        let even = even_spectrum(g).map_err(err)?;
        let odd = odd_spectrum(g).map_err(err)?;
        let tol = even.kernel_tol().max(odd.kernel_tol());
        let (a, b) = (
            nonzero_part(&even.eigenvalues, tol),
            nonzero_part(&odd.eigenvalues, tol),
        );
        ensure(multisets_match(&a, &b, PAIRING_TOL), || {
            format!("{}: nonzero spectra differ: {a:?} vs {b:?}", g.name())
        })?;
        let report = intertwiner_residuals(g, None).map_err(err)?;
        worst = worst.max(report.even_to_odd);
        pairs += report.pairs_checked;
        ensure(report.even_to_odd < INTERTWINER_TOL, || {
            format!("{}: intertwiner residual {:e}", g.name(), report.even_to_odd)
        })?;
    }
    within(start.elapsed(), 30.0)?;
    Ok(format!("{pairs} eigenpairs, max residual {worst:.1e}"))
}

fn topology_kernels() -> Outcome {
    let graphs = corpus();
    for g in &graphs {
        let even = even_spectrum(g).map_err(err)?;
        let odd = odd_spectrum(g).map_err(err)?;
        let tol = even.kernel_tol().max(odd.kernel_tol());
        let b0 = kernel_dim(&even.eigenvalues, tol).map_err(err)?;
        let b1 = kernel_dim(&odd.eigenvalues, tol).map_err(err)?;
        ensure(b0 == g.component_count() && b1 == g.cycle_rank(), || {
            format!(
                "{}: kernels ({b0}, {b1}) vs topology ({}, {})",
                g.name(),
                g.component_count(),
                g.cycle_rank()
            )
        })?;
        let inc = g.incidence_matrix();
        for c in g.fundamental_cycle_basis() {
            let image = inc.apply(&c).map_err(err)?;
            ensure(image.iter().all(|&x| x == 0), || format!("{}: I·c != 0", g.name()))?;
        }
    }
    Ok(format!("{} graphs", graphs.len()))
}

fn walk_oracles() -> Outcome {
    let start = Instant::now();
    let graphs = oracle_corpus();
    let mut entries = 0;
    for g in &graphs {
        let report = verify_power_identities(g, 5).map_err(err)?;
        entries += report.entries_checked;
        ensure(report.holds(), || format!("{}: {:?}", g.name(), report.violations[0]))?;
    }
    within(start.elapsed(), 60.0)?;
    Ok(format!("{} connected graphs, {entries} entries, k <= 5", graphs.len()))
}

fn walk_sum() -> Outcome {
    let mut worst = 0.0f64;
    let graphs = oracle_corpus();
    for g in &graphs {
        for t in [0.1, 0.5, 1.0] {
            for i in 0..g.vertex_count() {
                for j in 0..g.vertex_count() {
                    let r = walk_sum_report(g, i, j, t, WALK_TAIL_TOL, false).map_err(err)?;
                    worst = worst.max(r.difference);
                    ensure(r.difference < WALK_SUM_TOL, || {
                        format!("{} ({i},{j}) t={t}: difference {:e}", g.name(), r.difference)
                    })?;
                }
            }
        }
    }
    for g in [cycle(3), cycle(4), complete(4)] {
        for t in [0.1, 0.5, 1.0] {
            for i in 0..g.vertex_count() {
                for j in 0..g.vertex_count() {
                    let general = walk_sum_propagator(&g, i, j, t, WALK_TAIL_TOL).map_err(err)?.value;
                    let regular = regular_walk_sum_propagator(&g, i, j, t, WALK_TAIL_TOL)
                        .map_err(err)?
                        .value;
                    ensure((general - regular).abs() < WALK_SUM_TOL, || {
                        format!("{} ({i},{j}) t={t}: general {general} vs regular {regular}", g.name())
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{} graphs, max difference {worst:.1e}; C3, C4, K4 formulas agree",
        graphs.len()
    ))
}

fn witten_routes() -> Outcome {
    let graphs = corpus();
    let mut drift = 0.0f64;
    for g in &graphs {
        let r = witten_index(g, &[0.5, 1.0, 2.0], None).map_err(err)?;
        let routes = &r.routes;
        let agree = routes.euler == r.witten
            && routes.topological == r.witten
            && routes.kernel == r.witten
            && routes.trace.iter().all(|tr| tr.rounded == r.witten);
        ensure(agree, || format!("{}: routes disagree {routes:?}", g.name()))?;
        ensure(r.beta_drift < BETA_DRIFT_TOL, || {
            format!("{}: β drift {:e}", g.name(), r.beta_drift)
        })?;
        drift = drift.max(r.beta_drift);
    }
    Ok(format!("{} graphs, max β drift {drift:.1e}", graphs.len()))
}

fn breaking() -> Outcome {
    ensure(is_susy_broken(&OrientedGraph::null(), None).map_err(err)?, || {
        "null graph not reported broken".into()
    })?;
    let graphs: Vec<_> = corpus().into_iter().chain(oracle_corpus()).collect();
    for g in &graphs {
        ensure(!is_susy_broken(g, None).map_err(err)?, || {
            format!("{}: reported broken", g.name())
        })?;
    }
    Ok(format!("null graph broken, {} others unbroken", graphs.len()))
}

fn scenario(
    g: &OrientedGraph,
    edge: &str,
    endpoint: Endpoint,
    to: &str,
    before: (usize, usize),
    after: (usize, usize),
) -> Result<(), String> {
    let m = RewiringMove::from_ids(g, edge, endpoint, to).map_err(err)?;
    let h = apply_move(g, &m).map_err(err)?;
    let got_before = (g.component_count(), g.cycle_rank());
    let got_after = (h.component_count(), h.cycle_rank());
    ensure(got_before == before && got_after == after, || {
        format!(
            "{}: {got_before:?} -> {got_after:?}, expected {before:?} -> {after:?}",
            g.name()
        )
    })?;
    let (dc, dl) = component_cycle_delta(g, &m).map_err(err)?;
    ensure(dc == dl, || format!("{}: deltas ({dc}, {dl})", g.name()))
}

fn rewiring() -> Outcome {
    let graphs: Vec<_> = corpus().into_iter().filter(|g| g.vertex_count() <= 8).collect();
    let mut moves = 0;
    for g in &graphs {
        let r = verify_witten_invariance(g, None).map_err(err)?;
        moves += r.moves.len();
        ensure(r.witten_invariant && r.deltas_equal, || {
            format!("{}: rewiring invariant broken", g.name())
        })?;
    }
    scenario(&triangle_pendant(), "e3", Endpoint::Tail, "v4", (2, 1), (1, 0))?;
    scenario(&bottleneck(), "e3", Endpoint::Tail, "v6", (1, 1), (2, 2))?;
    scenario(&disjoint_triangles(), "e2", Endpoint::Head, "v4", (2, 2), (1, 1))?;
    Ok(format!(
        "{} graphs, {moves} moves; 3 scenarios reproduced",
        graphs.len()
    ))
}

fn morse() -> Outcome {
    let graphs: Vec<_> = corpus().into_iter().filter(|g| g.vertex_count() <= 8).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    for g in &graphs {
        for _ in 0..MORSE_SAMPLES {
            let f = random_morse_function(g, &mut rng);
            ensure(is_discrete_morse(g, &f).map_err(err)?.is_morse, || {
                format!("{}: invalid sample", g.name())
            })?;
            let r = morse_consistency(g, &f).map_err(err)?;
            ensure(r.holds(), || format!("{}: {r:?}", g.name()))?;
        }
    }
    Ok(format!("{} graphs x {MORSE_SAMPLES} functions", graphs.len()))
}

fn continuum() -> Outcome {
    let start = Instant::now();
    let study = convergence_study(&[10, 100, 1000], 5).map_err(err)?;
    ensure(study.monotone, || "closed-form errors not monotone in n".into())?;
    ensure(study.sectors.iter().all(|s| s.matches), || {
        "sector spectra differ".into()
    })?;
    let mut worst = 0.0f64;
    for row in study.rows.iter().filter(|r| r.n == 1000 && r.k >= 1) {
        worst = worst.max(row.relative_error);
        ensure(row.relative_error < CONTINUUM_REL_TOL, || {
            format!("n=1000 k={}: relative error {:e}", row.k, row.relative_error)
        })?;
    }
    let mut deviation = 0.0f64;
    for n in [3, 10, 100, 1000, 2000] {
        let d = closed_form_deviation(n).map_err(err)?;
        deviation = deviation.max(d);
        ensure(d < CLOSED_FORM_TOL, || format!("n={n}: closed form deviates by {d:e}"))?;
    }
    within(start.elapsed(), 60.0)?;
    Ok(format!(
        "n=1000 worst relative error {worst:.1e}; closed form deviation {deviation:.1e} up to n=2000"
    ))
}

fn cheeger_merris() -> Outcome {
    let graphs: Vec<_> = corpus()
        .into_iter()
        .chain(oracle_corpus())
        .filter(|g| g.is_connected() && g.vertex_count() >= 2 && g.vertex_count() <= 10)
        .collect();
    for g in &graphs {
        let c = cheeger_report(g).map_err(err)?;
        ensure(c.holds, || format!("{}: h={} λ2={}", g.name(), c.h, c.lambda2))?;
        let m = merris_bound_check(g).map_err(err)?;
        ensure(m.holds, || {
            format!("{}: λmax={} bound={}", g.name(), m.lambda_max, m.bound)
        })?;
    }
    Ok(format!("{} connected graphs", graphs.len()))
}

fn trace_discrepancy() -> Outcome {
    let graphs = corpus();
    let mut simplices = 0;
    for g in &graphs {
        let all = (0..g.vertex_count())
            .map(Simplex::Vertex)
            .chain((0..g.edge_count()).map(Simplex::Edge));
        for s in all {
            let r = dirac_trace_comparison(g, s, 0.1).map_err(err)?;
            simplices += 1;
            ensure(r.series[0].agrees && r.series[1].agrees, || {
                format!("{} {s:?}: low orders disagree", g.name())
            })?;
        }
    }
    let triangle = cycle(3);
    for s in [Simplex::Vertex(0), Simplex::Edge(0)] {
        let r = dirac_trace_comparison(&triangle, s, 0.1).map_err(err)?;
        ensure(r.first_divergent_order == Some(2), || {
            format!("triangle {s:?}: first divergence at {:?}", r.first_divergent_order)
        })?;
    }
    Ok(format!(
        "{simplices} simplices agree at t^0, t^1; triangle diverges at t^2"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("operator identity", operator_identity),
        ("spectral pairing", spectral_pairing),
        ("topology from kernels", topology_kernels),
        ("walk oracles", walk_oracles),
        ("walk-sum propagator", walk_sum),
        ("witten index routes", witten_routes),
        ("breaking", breaking),
        ("rewiring", rewiring),
        ("morse", morse),
        ("continuum limit", continuum),
        ("cheeger and merris bounds", cheeger_merris),
        ("trace formula discrepancy", trace_discrepancy),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
