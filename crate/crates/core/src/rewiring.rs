//! Single-edge rewirings that keep the graph simple.
//!
//! A move reattaches one endpoint of one edge to a different vertex. Moving
//! an endpoint onto the edge's other endpoint is read as reversing the edge;
//! such moves are kept but flagged `orientation_only`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, OrientedGraph};
use crate::susy::{vacuum_classification, VacuumReport};

/// Largest vertex count for isomorphism deduplication.
pub const DEDUP_MAX_VERTICES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    Tail,
    Head,
}

impl Endpoint {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "tail" => Ok(Endpoint::Tail),
            "head" => Ok(Endpoint::Head),
            _ => Err(Error::Precondition(format!("endpoint must be tail or head, got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RewiringMove {
    pub edge: usize,
    pub endpoint: Endpoint,
    pub target: usize,
}

/// A move in id form, as read from or written to JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveDoc {
    pub edge: String,
    pub endpoint: Endpoint,
    pub to: String,
    pub orientation_only: bool,
}

impl RewiringMove {
    pub fn from_ids(g: &OrientedGraph, edge: &str, endpoint: Endpoint, to: &str) -> Result<Self> {
        Ok(Self {
            edge: g.edge_index(edge)?,
            endpoint,
            target: g.vertex_index(to)?,
        })
    }

    /// Whether the move only swaps the edge's endpoints.
    pub fn is_orientation_only(&self, g: &OrientedGraph) -> bool {
        let e = &g.edges()[self.edge];
        match self.endpoint {
            Endpoint::Tail => self.target == e.head,
            Endpoint::Head => self.target == e.tail,
        }
    }

    pub fn to_doc(&self, g: &OrientedGraph) -> MoveDoc {
        MoveDoc {
            edge: g.edges()[self.edge].id.clone(),
            endpoint: self.endpoint,
            to: g.vertices()[self.target].clone(),
            orientation_only: self.is_orientation_only(g),
        }
    }

    fn check(&self, g: &OrientedGraph) -> Result<()> {
        if self.edge >= g.edge_count() {
            return Err(Error::IndexOutOfRange {
                what: "edges",
                index: self.edge,
                len: g.edge_count(),
            });
        }
        if self.target >= g.vertex_count() {
            return Err(Error::IndexOutOfRange {
                what: "vertices",
                index: self.target,
                len: g.vertex_count(),
            });
        }
        let e = &g.edges()[self.edge];
        let (moving, fixed) = match self.endpoint {
            Endpoint::Tail => (e.tail, e.head),
            Endpoint::Head => (e.head, e.tail),
        };
        if self.target == moving {
            return Err(Error::IllegalMove(format!(
                "{} already ends at {}",
                e.id,
                g.vertices()[moving]
            )));
        }
        if self.target != fixed {
            if let Some(existing) = g.edge_between(fixed, self.target) {
                return Err(Error::IllegalMove(format!(
                    "moving {} onto {} duplicates {}",
                    e.id,
                    g.vertices()[self.target],
                    g.edges()[existing].id
                )));
            }
        }
        Ok(())
    }
}

/// All legal moves, ordered by edge, endpoint and target. Orientation flips
/// appear once per edge, as the tail move onto the head.
pub fn enumerate_moves(g: &OrientedGraph) -> Vec<RewiringMove> {
    let mut moves = Vec::new();
    for (k, e) in g.edges().iter().enumerate() {
        for endpoint in [Endpoint::Tail, Endpoint::Head] {
            for target in 0..g.vertex_count() {
                let m = RewiringMove {
                    edge: k,
                    endpoint,
                    target,
                };
                if endpoint == Endpoint::Head && target == e.tail {
                    continue;
                }
                if m.check(g).is_ok() {
                    moves.push(m);
                }
            }
        }
    }
    moves
}

/// The rewired graph; vertex and edge order are preserved.
pub fn apply_move(g: &OrientedGraph, m: &RewiringMove) -> Result<OrientedGraph> {
    m.check(g)?;
    let mut edges: Vec<Edge> = g.edges().to_vec();
    let e = &mut edges[m.edge];
    if m.is_orientation_only(g) {
        std::mem::swap(&mut e.tail, &mut e.head);
    } else {
        match m.endpoint {
            Endpoint::Tail => e.tail = m.target,
            Endpoint::Head => e.head = m.target,
        }
    }
    OrientedGraph::new(g.name(), g.vertices().to_vec(), edges)
}

/// `(Δ components, Δ cycle rank)` caused by a move.
pub fn component_cycle_delta(g: &OrientedGraph, m: &RewiringMove) -> Result<(i64, i64)> {
    let h = apply_move(g, m)?;
    Ok((
        h.component_count() as i64 - g.component_count() as i64,
        h.cycle_rank() as i64 - g.cycle_rank() as i64,
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct MoveOutcome {
    #[serde(flatten)]
    pub mv: MoveDoc,
    /// Witten index of the rewired graph from its zero-mode counts.
    pub witten: i64,
    pub delta_components: i64,
    pub delta_cycles: i64,
    /// Number of enumerated moves whose result falls in this move's
    /// isomorphism class; present only with deduplication.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_size: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RewiringReport {
    pub witten: i64,
    pub structural_moves: usize,
    pub orientation_moves: usize,
    pub moves: Vec<MoveOutcome>,
    pub witten_invariant: bool,
    pub deltas_equal: bool,
}

/// Rewires along every legal move and checks that the Witten index (from
/// kernel dimensions) is unchanged and that components and cycles change
/// together.
pub fn verify_witten_invariance(g: &OrientedGraph, tol: Option<f64>) -> Result<RewiringReport> {
    rewiring_report(g, tol, false)
}

/// As [`verify_witten_invariance`]; with `dedup` the move list keeps one
/// representative per isomorphism class of (unoriented) result graphs.
pub fn rewiring_report(g: &OrientedGraph, tol: Option<f64>, dedup: bool) -> Result<RewiringReport> {
    if dedup && g.vertex_count() > DEDUP_MAX_VERTICES {
        return Err(Error::CapExceeded(format!(
            "isomorphism deduplication supports at most {DEDUP_MAX_VERTICES} vertices"
        )));
    }
    let witten = vacuum_classification(g, tol)?.witten_index;
    let moves = enumerate_moves(g);
    let mut outcomes: Vec<MoveOutcome> = Vec::with_capacity(moves.len());
    let mut classes: BTreeMap<u64, usize> = BTreeMap::new();
    let mut witten_invariant = true;
    let mut deltas_equal = true;
    for m in &moves {
        let h = apply_move(g, m)?;
        let w = vacuum_classification(&h, tol)?.witten_index;
        let dc = h.component_count() as i64 - g.component_count() as i64;
        let dz = h.cycle_rank() as i64 - g.cycle_rank() as i64;
        witten_invariant &= w == witten;
        deltas_equal &= dc == dz;
        let outcome = MoveOutcome {
            mv: m.to_doc(g),
            witten: w,
            delta_components: dc,
            delta_cycles: dz,
            class_size: None,
        };
        if dedup {
            let key = canonical_form(&h);
            match classes.get(&key) {
                Some(&slot) => {
                    let size: &mut Option<usize> = &mut outcomes[slot].class_size;
                    *size = Some(size.unwrap_or(1) + 1);
                }
                None => {
                    classes.insert(key, outcomes.len());
                    outcomes.push(MoveOutcome {
                        class_size: Some(1),
                        ..outcome
                    });
                }
            }
        } else {
            outcomes.push(outcome);
        }
    }
    let orientation_moves = moves.iter().filter(|m| m.is_orientation_only(g)).count();
    Ok(RewiringReport {
        witten,
        structural_moves: moves.len() - orientation_moves,
        orientation_moves,
        moves: outcomes,
        witten_invariant,
        deltas_equal,
    })
}

/// Smallest upper-triangle adjacency bit pattern over all vertex
/// relabelings. Orientation is ignored.
pub fn canonical_form(g: &OrientedGraph) -> u64 {
    let n = g.vertex_count();
    assert!(
        n <= DEDUP_MAX_VERTICES,
        "canonical form needs at most {DEDUP_MAX_VERTICES} vertices"
    );
    let pairs: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.tail, e.head)).collect();
    let bit = |a: usize, b: usize| {
        let (i, j) = (a.min(b), a.max(b));
        // index of (i, j), i < j, in row-major upper-triangle order
        i * (2 * n - i - 1) / 2 + (j - i - 1)
    };
    let encode = |perm: &[usize]| -> u64 {
        pairs
            .iter()
            .fold(0u64, |acc, &(a, b)| acc | (1u64 << bit(perm[a], perm[b])))
    };
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = encode(&perm);
    // Heap's algorithm
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            best = best.min(encode(&perm));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimizeStep {
    #[serde(flatten)]
    pub mv: MoveDoc,
    pub components: usize,
    pub cycles: usize,
    pub witten: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimizeResult {
    pub steps: Vec<MinimizeStep>,
    #[serde(skip)]
    pub moves: Vec<RewiringMove>,
    #[serde(skip)]
    pub graph: OrientedGraph,
    pub vacuum: VacuumReport,
}

/// Greedily trades cycles for components: while the graph has a cycle and
/// more than one component, the lowest-index edge lying on a cycle has its
/// head moved to the smallest vertex of the lowest-index other component.
/// Each step lowers both counts by one. The run ends acyclic when the
/// Witten index is positive and connected otherwise.
pub fn minimize_cycles(g: &OrientedGraph, tol: Option<f64>) -> Result<MinimizeResult> {
    let mut current = g.clone();
    let mut steps = Vec::new();
    let mut moves = Vec::new();
    while current.cycle_rank() > 0 && current.component_count() > 1 {
        let bridges = current.bridges();
        let edge = (0..current.edge_count())
            .find(|k| !bridges.contains(k))
            .expect("a graph with a cycle has a non-bridge edge");
        let labels = current.component_labels();
        let own = labels[current.edges()[edge].tail];
        let target = (0..current.vertex_count())
            .find(|&v| labels[v] != own)
            .expect("more than one component");
        let m = RewiringMove {
            edge,
            endpoint: Endpoint::Head,
            target,
        };
        let next = apply_move(&current, &m)?;
        steps.push(MinimizeStep {
            mv: m.to_doc(&current),
            components: next.component_count(),
            cycles: next.cycle_rank(),
            witten: next.euler_characteristic(),
        });
        moves.push(m);
        current = next;
    }
    let vacuum = vacuum_classification(&current, tol)?;
    Ok(MinimizeResult {
        steps,
        moves,
        graph: current,
        vacuum,
    })
}
