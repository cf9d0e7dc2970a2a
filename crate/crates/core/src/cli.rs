//! Command-line front end.
//!
//! Every command writes one JSON document to stdout:
//! `{"status": "ok", "payload": {"schema": ..., ...}, "diagnostics": [...]}`.
//! Failures write the same envelope with `"status": "error"` to stderr and
//! exit nonzero. `--csv` replaces the envelope with plain rows for the
//! commands that produce tables.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::continuum::convergence_study;
use crate::dynamics::{evolve, is_steady, steady_basis, QuantumState, StateDoc, StateSector};
use crate::error::{Error, Result};
use crate::generate::{named, random_corpus};
use crate::graph::{GraphDoc, OrientedGraph};
use crate::matrix::{RectMatrixDoc, SquareMatrixDoc};
use crate::morse::{
    critical_simplices, gradient_pairs, is_discrete_morse, morse_consistency, random_morse_function, MorseFunction,
};
use crate::operators::{build_operator, dirac_incidence, laplacian_susy, BuiltOperator, OperatorKind, Phase};
use crate::rewiring::{apply_move, minimize_cycles, rewiring_report, Endpoint, RewiringMove};
use crate::spectral::{
    cheeger_report, eigvals_sym, even_spectrum, fiedler_value, kernel_dim, merris_bound_check, KERNEL_REL_TOL,
};
use crate::susy::{degeneracy_report, vacuum_classification, witten_index};
use crate::walks::{dirac_trace_comparison, verify_power_identities, walk_sum_report, Simplex};

/// Version tag appended to every payload schema name.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "susy-graph",
    version,
    about = "Supersymmetric quantum mechanics on oriented graphs"
)]
pub struct Cli {
    /// Kernel tolerance override; for `walksum`, the series tail tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV rows where the output is tabular.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Seed for randomized generators.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Counts, degrees and topology of a graph.
    Info(GraphArg),
    /// Print a named operator as a matrix.
    Operators {
        graph: PathBuf,
        /// Operator name; all operators when omitted.
        #[arg(long)]
        operator: Option<String>,
    },
    /// Eigenvalues and bounds of a Laplacian or Dirac operator.
    Spectrum {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = SpectrumOperator::Even)]
        operator: SpectrumOperator,
    },
    /// Orthonormal basis of steady states in one sector.
    Steady {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = SectorArg::Vertex)]
        sector: SectorArg,
    },
    /// Evolve a state under `e^{iΔt}`.
    Evolve {
        graph: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Witten index by every route.
    Witten {
        graph: PathBuf,
        /// Inverse temperatures for the trace route.
        #[arg(long, value_delimiter = ',')]
        beta: Vec<f64>,
    },
    /// Zero-mode counts and breaking status.
    Vacuum(GraphArg),
    /// Diagonal propagator entries against the one-step return formula.
    Dirac {
        graph: PathBuf,
        /// Vertex or edge id; every simplex when omitted.
        #[arg(long)]
        simplex: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Propagator entry as a signed walk sum.
    Walksum {
        graph: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Cross-check the step sums against explicit enumeration.
        #[arg(long)]
        oracle: bool,
    },
    /// Check matrix powers against signed walk enumeration.
    Oracle {
        graph: PathBuf,
        #[arg(long, default_value_t = 4)]
        k: usize,
    },
    /// Discrete Morse functions.
    Morse {
        #[command(subcommand)]
        action: MorseAction,
    },
    /// Single-edge rewirings.
    Rewire {
        #[command(subcommand)]
        action: RewireAction,
    },
    /// Scaled cycle spectra approaching the circle.
    Continuum {
        #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        modes: usize,
    },
    /// Cheeger constant, normalized Fiedler value and Merris bound.
    Cheeger(GraphArg),
    /// Emit named or random graphs.
    Generate {
        /// Family name (path, cycle, complete, star, edgeless, null or a scenario graph).
        #[arg(long, conflicts_with = "random")]
        family: Option<String>,
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Random corpus instead of a named family.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        min_vertices: usize,
        #[arg(long, default_value_t = 12)]
        max_vertices: usize,
    },
}

#[derive(Debug, Args)]
pub struct GraphArg {
    pub graph: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum MorseAction {
    /// Validate a function.
    Check {
        graph: PathBuf,
        #[arg(long)]
        function: PathBuf,
    },
    /// Critical simplices, gradient pairs and the Morse inequalities.
    Critical {
        graph: PathBuf,
        #[arg(long)]
        function: PathBuf,
    },
    /// A random discrete Morse function for the graph.
    Random(GraphArg),
}

#[derive(Debug, Subcommand)]
pub enum RewireAction {
    /// Every legal move with its Witten index and count changes.
    Enumerate {
        graph: PathBuf,
        /// Keep one move per isomorphism class of results.
        #[arg(long)]
        dedup_iso: bool,
    },
    /// Apply one move and print the new graph.
    Apply {
        graph: PathBuf,
        #[arg(long)]
        edge: String,
        #[arg(long, value_enum)]
        endpoint: EndpointArg,
        #[arg(long)]
        to: String,
    },
    /// Trade cycles for components until one runs out.
    Minimize(GraphArg),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SpectrumOperator {
    Even,
    Odd,
    Susy,
    Dirac,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SectorArg {
    Vertex,
    Edge,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EndpointArg {
    Tail,
    Head,
}

impl From<EndpointArg> for Endpoint {
    fn from(e: EndpointArg) -> Self {
        match e {
            EndpointArg::Tail => Endpoint::Tail,
            EndpointArg::Head => Endpoint::Head,
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Serialize)]
struct CommandResult {
    status: &'static str,
    payload: Value,
    diagnostics: Vec<String>,
}

enum Output {
    Json {
        schema: &'static str,
        payload: Value,
        diagnostics: Vec<String>,
    },
    Csv(String),
}

fn json_out(schema: &'static str, payload: impl Serialize) -> Result<Output> {
    Ok(Output::Json {
        schema,
        payload: to_value(payload)?,
        diagnostics: Vec::new(),
    })
}

fn to_value(v: impl Serialize) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Io(e.to_string()))
}

fn csv_rows<T: Serialize>(rows: &[T]) -> Result<Output> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(Output::Csv(
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))?,
    ))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let envelope = CommandResult {
                    status: "error",
                    payload: Value::Null,
                    diagnostics: vec![text.trim_end().to_string()],
                };
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: render(&envelope),
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok(Output::Json {
            schema,
            mut payload,
            diagnostics,
        }) => {
            if let Value::Object(map) = payload {
                let mut tagged = serde_json::Map::new();
                tagged.insert("schema".into(), Value::String(format!("{schema}/{SCHEMA_VERSION}")));
                tagged.extend(map);
                payload = Value::Object(tagged);
            }
            let envelope = CommandResult {
                status: "ok",
                payload,
                diagnostics,
            };
            Outcome {
                code: 0,
                stdout: render(&envelope),
                stderr: String::new(),
            }
        }
        Ok(Output::Csv(text)) => Outcome {
            code: 0,
            stdout: text,
            stderr: String::new(),
        },
        Err(e) => {
            let envelope = CommandResult {
                status: "error",
                payload: Value::Null,
                diagnostics: vec![e.to_string()],
            };
            Outcome {
                code: 1,
                stdout: String::new(),
                stderr: render(&envelope),
            }
        }
    }
}

fn render(v: &CommandResult) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("envelope serializes");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Reads a graph as JSON, or as the line-based text format when the file
/// does not start with `{`. Unnamed graphs take the file stem as name.
pub fn load_graph(path: &Path) -> Result<OrientedGraph> {
    let text = read(path)?;
    let g = if text.trim_start().starts_with('{') {
        OrientedGraph::from_json(&text)?
    } else {
        OrientedGraph::from_text(&text)?
    };
    if g.name().is_empty() {
        if let Some(stem) = path.file_stem() {
            return Ok(g.with_name(stem.to_string_lossy()));
        }
    }
    Ok(g)
}

fn csv_unsupported(cli: &Cli, command: &str) -> Result<()> {
    if cli.csv {
        return Err(Error::Precondition(format!("--csv is not available for `{command}`")));
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let tol = cli.tol;
    match &cli.command {
        Command::Info(a) => {
            csv_unsupported(cli, "info")?;
            info(&load_graph(&a.graph)?, tol)
        }
        Command::Operators { graph, operator } => {
            csv_unsupported(cli, "operators")?;
            operators(&load_graph(graph)?, operator.as_deref())
        }
        Command::Spectrum { graph, operator } => {
            csv_unsupported(cli, "spectrum")?;
            spectrum(&load_graph(graph)?, *operator, tol)
        }
        Command::Steady { graph, sector } => {
            csv_unsupported(cli, "steady")?;
            let g = load_graph(graph)?;
            let sector = match sector {
                SectorArg::Vertex => StateSector::Vertex,
                SectorArg::Edge => StateSector::Edge,
            };
            let basis = steady_basis(&g, sector, tol)?;
            json_out(
                "steady",
                json!({"sector": sector, "dim": basis.dim(), "tol": basis.tol, "basis": basis.vectors}),
            )
        }
        Command::Evolve { graph, state, t } => {
            csv_unsupported(cli, "evolve")?;
            let g = load_graph(graph)?;
            let doc: StateDoc =
                serde_json::from_str(&read(state)?).map_err(|e| Error::MalformedGraph(format!("state: {e}")))?;
            let psi = QuantumState::from_doc(&doc, g.vertex_count())?;
            let out = evolve(&psi, *t, &g)?;
            let steady = is_steady(&psi, &g, tol.unwrap_or(KERNEL_REL_TOL)).ok();
            json_out(
                "evolve",
                json!({"t": t, "state": out.to_doc(), "norm": out.norm(), "initial_norm": psi.norm(), "steady": steady}),
            )
        }
        Command::Witten { graph, beta } => {
            csv_unsupported(cli, "witten")?;
            json_out("witten", witten_index(&load_graph(graph)?, beta, tol)?)
        }
        Command::Vacuum(a) => {
            csv_unsupported(cli, "vacuum")?;
            json_out("vacuum", vacuum_classification(&load_graph(&a.graph)?, tol)?)
        }
        Command::Dirac { graph, simplex, t } => {
            csv_unsupported(cli, "dirac")?;
            let g = load_graph(graph)?;
            let targets = match simplex {
                Some(id) => vec![Simplex::parse(&g, id)?],
                None => (0..g.vertex_count() + g.edge_count())
                    .map(|k| Simplex::from_index(&g, k))
                    .collect(),
            };
            let reports = targets
                .into_iter()
                .map(|s| {
                    let r = dirac_trace_comparison(&g, s, *t)?;
                    let mut v = to_value(&r)?;
                    v["id"] = Value::String(s.id(&g).to_string());
                    Ok(v)
                })
                .collect::<Result<Vec<_>>>()?;
            json_out("dirac", json!({ "t": t, "reports": reports }))
        }
        Command::Walksum {
            graph,
            from,
            to,
            t,
            oracle,
        } => {
            csv_unsupported(cli, "walksum")?;
            let g = load_graph(graph)?;
            let (i, j) = (g.vertex_index(from)?, g.vertex_index(to)?);
            json_out("walksum", walk_sum_report(&g, i, j, *t, tol.unwrap_or(1e-10), *oracle)?)
        }
        Command::Oracle { graph, k } => {
            csv_unsupported(cli, "oracle")?;
            let g = load_graph(graph)?;
            let report = verify_power_identities(&g, *k)?;
            json_out("oracle", json!({"holds": report.holds(), "report": report}))
        }
        Command::Morse { action } => {
            csv_unsupported(cli, "morse")?;
            morse(action, cli.seed)
        }
        Command::Rewire { action } => rewire(action, tol, cli.csv),
        Command::Continuum { n, modes } => {
            let study = convergence_study(n, *modes)?;
            if cli.csv {
                csv_rows(&study.rows)
            } else {
                json_out("continuum", study)
            }
        }
        Command::Cheeger(a) => {
            csv_unsupported(cli, "cheeger")?;
            let g = load_graph(&a.graph)?;
            let merris = if g.edge_count() > 0 {
                Some(merris_bound_check(&g)?)
            } else {
                None
            };
            json_out("cheeger", json!({"cheeger": cheeger_report(&g)?, "merris": merris}))
        }
        Command::Generate {
            family,
            n,
            random,
            count,
            min_vertices,
            max_vertices,
        } => {
            csv_unsupported(cli, "generate")?;
            let graphs = if *random {
                if min_vertices > max_vertices {
                    return Err(Error::Precondition("--min-vertices exceeds --max-vertices".into()));
                }
                random_corpus(cli.seed, *count, *min_vertices, *max_vertices)
            } else {
                let family = family
                    .as_deref()
                    .ok_or_else(|| Error::Precondition("pass --family or --random".into()))?;
                vec![named(family, *n)?]
            };
            let docs: Vec<GraphDoc> = graphs.iter().map(OrientedGraph::to_doc).collect();
            json_out("generate", json!({ "seed": cli.seed, "graphs": docs }))
        }
    }
}

fn info(g: &OrientedGraph, tol: Option<f64>) -> Result<Output> {
    let vacuum = vacuum_classification(g, tol)?;
    json_out(
        "info",
        json!({
            "name": g.name(),
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "degrees": g.degrees(),
            "regular_degree": g.regular_degree(),
            "components": g.component_count(),
            "cycle_rank": g.cycle_rank(),
            "euler_characteristic": g.euler_characteristic(),
            "bridges": g.bridge_ids(),
            "fundamental_cycles": g.fundamental_cycle_basis(),
            "betti": [vacuum.n_bosonic_zero, vacuum.n_fermionic_zero],
        }),
    )
}

fn operator_json(g: &OrientedGraph, kind: OperatorKind) -> Result<Value> {
    let built = build_operator(g, kind)?;
    let (phase, matrix) = match built {
        BuiltOperator::Int { matrix, phase } => {
            let phase = match phase {
                Phase::Real => "real",
                Phase::Imaginary => "imaginary",
            };
            let doc = if matrix.rows() == matrix.cols() {
                to_value(SquareMatrixDoc {
                    dim: matrix.rows(),
                    entries: matrix.entries().to_vec(),
                })?
            } else {
                to_value(RectMatrixDoc::from(&matrix))?
            };
            (phase, doc)
        }
        BuiltOperator::Real(m) => (
            "real",
            to_value(SquareMatrixDoc {
                dim: m.rows(),
                entries: m.entries().to_vec(),
            })?,
        ),
    };
    Ok(json!({"operator": kind.name(), "phase": phase, "matrix": matrix}))
}

fn operators(g: &OrientedGraph, name: Option<&str>) -> Result<Output> {
    let kinds: Vec<OperatorKind> = match name {
        Some(n) => vec![OperatorKind::parse(n).ok_or_else(|| {
            let names: Vec<_> = OperatorKind::ALL.iter().map(|k| k.name()).collect();
            Error::Precondition(format!("unknown operator {n:?}; expected one of {}", names.join(", ")))
        })?],
        None => OperatorKind::ALL.to_vec(),
    };
    let ops = kinds
        .into_iter()
        .map(|k| operator_json(g, k))
        .collect::<Result<Vec<_>>>()?;
    json_out("operators", json!({ "graph": g.name(), "operators": ops }))
}

fn spectrum(g: &OrientedGraph, op: SpectrumOperator, tol: Option<f64>) -> Result<Output> {
    let (name, eigenvalues) = match op {
        SpectrumOperator::Even => ("even", even_spectrum(g)?.eigenvalues),
        SpectrumOperator::Odd => ("odd", crate::spectral::odd_spectrum(g)?.eigenvalues),
        SpectrumOperator::Susy => ("susy", eigvals_sym(&laplacian_susy(g).to_sym()?)?),
        SpectrumOperator::Dirac => ("dirac", eigvals_sym(&dirac_incidence(g).to_sym()?)?),
    };
    let max_abs = eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let ktol = tol.unwrap_or(KERNEL_REL_TOL * max_abs.max(1.0));
    let kernel = kernel_dim(&eigenvalues, ktol)?;
    let fiedler = if g.vertex_count() >= 2 {
        Some(fiedler_value(g)?)
    } else {
        None
    };
    let merris = if g.edge_count() > 0 {
        Some(merris_bound_check(g)?)
    } else {
        None
    };
    let mut payload = json!({
        "operator": name,
        "eigenvalues": eigenvalues,
        "kernel_dim": kernel,
        "kernel_tol": ktol,
        "fiedler": fiedler,
        "merris": merris,
    });
    if matches!(op, SpectrumOperator::Susy) {
        payload["levels"] = to_value(degeneracy_report(g, tol)?)?;
    }
    json_out("spectrum", payload)
}

fn morse(action: &MorseAction, seed: u64) -> Result<Output> {
    match action {
        MorseAction::Check { graph, function } => {
            let g = load_graph(graph)?;
            let f = MorseFunction::from_json(&g, &read(function)?)?;
            json_out("morse-check", is_discrete_morse(&g, &f)?)
        }
        MorseAction::Critical { graph, function } => {
            let g = load_graph(graph)?;
            let f = MorseFunction::from_json(&g, &read(function)?)?;
            let critical = critical_simplices(&g, &f)?;
            let pairs = gradient_pairs(&g, &f)?;
            let report = morse_consistency(&g, &f)?;
            json_out(
                "morse-critical",
                json!({
                    "critical_vertices": report.critical_vertices,
                    "critical_edges": report.critical_edges,
                    "pairs": report.pairs,
                    "counts": [critical.vertices.len(), critical.edges.len(), pairs.len()],
                    "consistency": report,
                    "holds": report.holds(),
                }),
            )
        }
        MorseAction::Random(a) => {
            let g = load_graph(&a.graph)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_morse_function(&g, &mut rng);
            json_out("morse-function", f.to_doc(&g))
        }
    }
}

fn rewire(action: &RewireAction, tol: Option<f64>, csv: bool) -> Result<Output> {
    match action {
        RewireAction::Enumerate { graph, dedup_iso } => {
            let g = load_graph(graph)?;
            let report = rewiring_report(&g, tol, *dedup_iso)?;
            if csv {
                csv_rows(&report.moves.iter().map(MoveRow::from).collect::<Vec<_>>())
            } else {
                json_out("rewire-enumerate", report)
            }
        }
        RewireAction::Apply {
            graph,
            edge,
            endpoint,
            to,
        } => {
            if csv {
                return Err(Error::Precondition("--csv is not available for `rewire apply`".into()));
            }
            let g = load_graph(graph)?;
            let m = RewiringMove::from_ids(&g, edge, (*endpoint).into(), to)?;
            let h = apply_move(&g, &m)?;
            json_out(
                "rewire-apply",
                json!({
                    "move": m.to_doc(&g),
                    "graph": h.to_doc(),
                    "before": [g.component_count(), g.cycle_rank()],
                    "after": [h.component_count(), h.cycle_rank()],
                }),
            )
        }
        RewireAction::Minimize(a) => {
            if csv {
                return Err(Error::Precondition(
                    "--csv is not available for `rewire minimize`".into(),
                ));
            }
            let g = load_graph(&a.graph)?;
            let r = minimize_cycles(&g, tol)?;
            json_out(
                "rewire-minimize",
                json!({"steps": r.steps, "vacuum": r.vacuum, "graph": r.graph.to_doc()}),
            )
        }
    }
}

#[derive(Serialize)]
struct MoveRow<'a> {
    edge: &'a str,
    endpoint: Endpoint,
    to: &'a str,
    orientation_only: bool,
    witten: i64,
    delta_components: i64,
    delta_cycles: i64,
    class_size: Option<usize>,
}

impl<'a> From<&'a crate::rewiring::MoveOutcome> for MoveRow<'a> {
    fn from(m: &'a crate::rewiring::MoveOutcome) -> Self {
        MoveRow {
            edge: &m.mv.edge,
            endpoint: m.mv.endpoint,
            to: &m.mv.to,
            orientation_only: m.mv.orientation_only,
            witten: m.witten,
            delta_components: m.delta_components,
            delta_cycles: m.delta_cycles,
            class_size: m.class_size,
        }
    }
}
