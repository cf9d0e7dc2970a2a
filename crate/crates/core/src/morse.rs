//! Discrete Morse functions on graphs.
//!
//! A function on vertices and edges is a discrete Morse function when every
//! vertex has at most one incident edge with value `<=` its own and every
//! edge has at most one endpoint with value `>=` its own. Criticality uses
//! strict inequalities: a vertex is critical when all incident edges are
//! strictly higher, an edge when both endpoints are strictly lower.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::OrientedGraph;

#[derive(Debug, Clone, PartialEq)]
pub struct MorseFunction {
    vertex_values: Vec<f64>,
    edge_values: Vec<f64>,
}

/// JSON layout: `{"vertex_values": {id: real}, "edge_values": {id: real}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorseDoc {
    pub vertex_values: BTreeMap<String, f64>,
    pub edge_values: BTreeMap<String, f64>,
}

impl MorseFunction {
    pub fn new(g: &OrientedGraph, vertex_values: Vec<f64>, edge_values: Vec<f64>) -> Result<Self> {
        if vertex_values.len() != g.vertex_count() {
            return Err(Error::DimensionMismatch {
                expected: g.vertex_count(),
                found: vertex_values.len(),
            });
        }
        if edge_values.len() != g.edge_count() {
            return Err(Error::DimensionMismatch {
                expected: g.edge_count(),
                found: edge_values.len(),
            });
        }
        if let Some(x) = vertex_values.iter().chain(&edge_values).find(|x| !x.is_finite()) {
            return Err(Error::MalformedGraph(format!("non-finite Morse value {x}")));
        }
        Ok(Self {
            vertex_values,
            edge_values,
        })
    }

    /// `f(σ) = dim σ`: zero on vertices, one on edges.
    pub fn dimension(g: &OrientedGraph) -> Self {
        Self {
            vertex_values: vec![0.0; g.vertex_count()],
            edge_values: vec![1.0; g.edge_count()],
        }
    }

    pub fn from_doc(g: &OrientedGraph, doc: &MorseDoc) -> Result<Self> {
        for id in doc.vertex_values.keys() {
            g.vertex_index(id)?;
        }
        for id in doc.edge_values.keys() {
            g.edge_index(id)?;
        }
        let vertex_values = g
            .vertices()
            .iter()
            .map(|id| {
                doc.vertex_values
                    .get(id)
                    .copied()
                    .ok_or_else(|| Error::MissingValue(format!("vertex {id}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let edge_values = g
            .edges()
            .iter()
            .map(|e| {
                doc.edge_values
                    .get(&e.id)
                    .copied()
                    .ok_or_else(|| Error::MissingValue(format!("edge {}", e.id)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(g, vertex_values, edge_values)
    }

    pub fn from_json(g: &OrientedGraph, text: &str) -> Result<Self> {
        let doc: MorseDoc = serde_json::from_str(text).map_err(|e| Error::MalformedGraph(e.to_string()))?;
        Self::from_doc(g, &doc)
    }

    pub fn to_doc(&self, g: &OrientedGraph) -> MorseDoc {
        MorseDoc {
            vertex_values: g
                .vertices()
                .iter()
                .cloned()
                .zip(self.vertex_values.iter().copied())
                .collect(),
            edge_values: g
                .edges()
                .iter()
                .map(|e| e.id.clone())
                .zip(self.edge_values.iter().copied())
                .collect(),
        }
    }

    pub fn vertex_value(&self, v: usize) -> f64 {
        self.vertex_values[v]
    }

    pub fn edge_value(&self, e: usize) -> f64 {
        self.edge_values[e]
    }

    fn check_shape(&self, g: &OrientedGraph) -> Result<()> {
        if self.vertex_values.len() != g.vertex_count() || self.edge_values.len() != g.edge_count() {
            return Err(Error::MissingValue(format!(
                "function covers {} vertices and {} edges, graph has {} and {}",
                self.vertex_values.len(),
                self.edge_values.len(),
                g.vertex_count(),
                g.edge_count()
            )));
        }
        Ok(())
    }

    /// Incident edges of `v` with value `<=` `f(v)`.
    fn low_edges(&self, g: &OrientedGraph, v: usize) -> Vec<usize> {
        g.incident_edges(v)
            .iter()
            .copied()
            .filter(|&k| self.edge_values[k] <= self.vertex_values[v])
            .collect()
    }

    /// Endpoints of edge `k` with value `>=` `f(k)`.
    fn high_ends(&self, g: &OrientedGraph, k: usize) -> Vec<usize> {
        let e = &g.edges()[k];
        let mut ends = vec![e.tail, e.head];
        ends.sort_unstable();
        ends.retain(|&v| self.vertex_values[v] >= self.edge_values[k]);
        ends
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MorseViolation {
    /// A vertex with several incident edges at or below its value.
    Vertex { vertex: String, edges: Vec<String> },
    /// An edge with both endpoints at or above its value.
    Edge { edge: String, vertices: Vec<String> },
}

#[derive(Debug, Clone, Serialize)]
pub struct MorseCheck {
    pub is_morse: bool,
    pub violations: Vec<MorseViolation>,
}

pub fn is_discrete_morse(g: &OrientedGraph, f: &MorseFunction) -> Result<MorseCheck> {
    f.check_shape(g)?;
    let mut violations = Vec::new();
    for v in 0..g.vertex_count() {
        let low = f.low_edges(g, v);
        if low.len() > 1 {
            violations.push(MorseViolation::Vertex {
                vertex: g.vertices()[v].clone(),
                edges: low.iter().map(|&k| g.edges()[k].id.clone()).collect(),
            });
        }
    }
    for k in 0..g.edge_count() {
        let high = f.high_ends(g, k);
        if high.len() > 1 {
            violations.push(MorseViolation::Edge {
                edge: g.edges()[k].id.clone(),
                vertices: high.iter().map(|&v| g.vertices()[v].clone()).collect(),
            });
        }
    }
    Ok(MorseCheck {
        is_morse: violations.is_empty(),
        violations,
    })
}

fn require_morse(g: &OrientedGraph, f: &MorseFunction) -> Result<()> {
    let check = is_discrete_morse(g, f)?;
    if let Some(v) = check.violations.first() {
        return Err(Error::NotMorse(format!(
            "{} violation(s), first: {}",
            check.violations.len(),
            serde_json::to_string(v).unwrap_or_default()
        )));
    }
    Ok(())
}

/// Critical vertex and edge indices, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalSet {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

pub fn critical_simplices(g: &OrientedGraph, f: &MorseFunction) -> Result<CriticalSet> {
    require_morse(g, f)?;
    Ok(critical_unchecked(g, f))
}

fn critical_unchecked(g: &OrientedGraph, f: &MorseFunction) -> CriticalSet {
    let vertices = (0..g.vertex_count())
        .filter(|&v| {
            g.incident_edges(v)
                .iter()
                .all(|&k| f.edge_values[k] > f.vertex_values[v])
        })
        .collect();
    let edges = (0..g.edge_count())
        .filter(|&k| {
            let e = &g.edges()[k];
            f.vertex_values[e.tail] < f.edge_values[k] && f.vertex_values[e.head] < f.edge_values[k]
        })
        .collect();
    CriticalSet { vertices, edges }
}

/// Gradient pairs `(vertex, edge)`: each non-critical edge with its unique
/// endpoint of value `>=` the edge value, in edge order.
pub fn gradient_pairs(g: &OrientedGraph, f: &MorseFunction) -> Result<Vec<(usize, usize)>> {
    require_morse(g, f)?;
    Ok(pairs_unchecked(g, f))
}

fn pairs_unchecked(g: &OrientedGraph, f: &MorseFunction) -> Vec<(usize, usize)> {
    (0..g.edge_count())
        .filter_map(|k| f.high_ends(g, k).first().map(|&v| (v, k)))
        .collect()
}

/// Whether critical simplices and gradient pairs partition all simplices,
/// with every pair adjacent.
pub fn is_perfect_matching(g: &OrientedGraph, critical: &CriticalSet, pairs: &[(usize, usize)]) -> bool {
    let mut vertex_seen = vec![0usize; g.vertex_count()];
    let mut edge_seen = vec![0usize; g.edge_count()];
    for &v in &critical.vertices {
        vertex_seen[v] += 1;
    }
    for &k in &critical.edges {
        edge_seen[k] += 1;
    }
    for &(v, k) in pairs {
        if v >= g.vertex_count() || k >= g.edge_count() || !g.edges()[k].is_incident(v) {
            return false;
        }
        vertex_seen[v] += 1;
        edge_seen[k] += 1;
    }
    vertex_seen.iter().chain(&edge_seen).all(|&c| c == 1)
}

#[derive(Debug, Clone, Serialize)]
pub struct MorseReport {
    pub critical_vertices: Vec<String>,
    pub critical_edges: Vec<String>,
    pub pairs: Vec<(String, String)>,
    pub euler_characteristic: i64,
    pub b0: usize,
    pub b1: usize,
    pub perfect_matching: bool,
    pub euler_holds: bool,
    pub weak_inequality_0: bool,
    pub weak_inequality_1: bool,
}

impl MorseReport {
    pub fn holds(&self) -> bool {
        self.perfect_matching && self.euler_holds && self.weak_inequality_0 && self.weak_inequality_1
    }
}

/// Checks `crit0 - crit1 = χ`, `crit0 >= b0`, `crit1 >= b1` and the
/// pairing partition.
pub fn morse_consistency(g: &OrientedGraph, f: &MorseFunction) -> Result<MorseReport> {
    require_morse(g, f)?;
    let critical = critical_unchecked(g, f);
    let pairs = pairs_unchecked(g, f);
    let perfect_matching = is_perfect_matching(g, &critical, &pairs);
    let chi = g.euler_characteristic();
    let b0 = g.component_count();
    let b1 = g.cycle_rank();
    let c0 = critical.vertices.len();
    let c1 = critical.edges.len();
    Ok(MorseReport {
        critical_vertices: critical.vertices.iter().map(|&v| g.vertices()[v].clone()).collect(),
        critical_edges: critical.edges.iter().map(|&k| g.edges()[k].id.clone()).collect(),
        pairs: pairs
            .iter()
            .map(|&(v, k)| (g.vertices()[v].clone(), g.edges()[k].id.clone()))
            .collect(),
        euler_characteristic: chi,
        b0,
        b1,
        perfect_matching,
        euler_holds: c0 as i64 - c1 as i64 == chi,
        weak_inequality_0: c0 >= b0,
        weak_inequality_1: c1 >= b1,
    })
}

/// Random discrete Morse function with distinct values.
///
/// Values start as a random injection into `[0, 1)`. Edges with both
/// endpoints at or above them are lifted between their endpoint values, then
/// every vertex with several low edges keeps one at random and the rest are
/// lifted above the vertex. Lifting an edge only shrinks the low-edge sets of
/// other vertices and the high-endpoint sets of the edge, so one pass of each
/// repair suffices.
pub fn random_morse_function<R: Rng + ?Sized>(g: &OrientedGraph, rng: &mut R) -> MorseFunction {
    let vertex_values: Vec<f64> = (0..g.vertex_count()).map(|_| rng.gen::<f64>()).collect();
    let mut edge_values: Vec<f64> = (0..g.edge_count()).map(|_| rng.gen::<f64>()).collect();
    for (k, e) in g.edges().iter().enumerate() {
        let (a, b) = (vertex_values[e.tail], vertex_values[e.head]);
        if a >= edge_values[k] && b >= edge_values[k] {
            let (lo, hi) = (a.min(b), a.max(b));
            edge_values[k] = lo + (hi - lo) * rng.gen_range(0.05..0.95);
            if edge_values[k] <= lo {
                edge_values[k] = hi + rng.gen_range(0.05..1.0);
            }
        }
    }
    for (v, &value) in vertex_values.iter().enumerate() {
        let low: Vec<usize> = g
            .incident_edges(v)
            .iter()
            .copied()
            .filter(|&k| edge_values[k] <= value)
            .collect();
        if low.len() > 1 {
            let keep = low[rng.gen_range(0..low.len())];
            for k in low {
                if k != keep {
                    edge_values[k] = vertex_values[v] + rng.gen_range(0.05..1.0);
                }
            }
        }
    }
    MorseFunction {
        vertex_values,
        edge_values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn triangle() -> OrientedGraph {
        OrientedGraph::from_pairs("c3", 3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn staircase(g: &OrientedGraph) -> MorseFunction {
        MorseFunction::new(g, vec![0.0, 2.0, 4.0], vec![1.0, 3.0, 5.0]).unwrap()
    }

    #[test]
    fn staircase_on_triangle() {
        let g = triangle();
        let f = staircase(&g);
        assert!(is_discrete_morse(&g, &f).unwrap().is_morse);
        let c = critical_simplices(&g, &f).unwrap();
        assert_eq!(
            c,
            CriticalSet {
                vertices: vec![0],
                edges: vec![2]
            }
        );
        assert_eq!(gradient_pairs(&g, &f).unwrap(), vec![(1, 0), (2, 1)]);
        let r = morse_consistency(&g, &f).unwrap();
        assert!(r.holds());
        assert_eq!(r.euler_characteristic, 0);
    }

    #[test]
    fn peak_vertex_is_rejected() {
        let g = triangle();
        let f = MorseFunction::new(&g, vec![5.0, 0.0, 0.5], vec![1.0, 2.0, 3.0]).unwrap();
        let check = is_discrete_morse(&g, &f).unwrap();
        assert!(!check.is_morse);
        assert!(check.violations.contains(&MorseViolation::Vertex {
            vertex: "v1".into(),
            edges: vec!["e1".into(), "e3".into()],
        }));
        assert!(matches!(critical_simplices(&g, &f), Err(Error::NotMorse(_))));
    }

    #[test]
    fn constant_on_p2_fails() {
        let g = OrientedGraph::from_pairs("p2", 2, &[(0, 1)]).unwrap();
        let f = MorseFunction::new(&g, vec![0.0, 0.0], vec![0.0]).unwrap();
        let check = is_discrete_morse(&g, &f).unwrap();
        assert_eq!(
            check.violations,
            vec![MorseViolation::Edge {
                edge: "e1".into(),
                vertices: vec!["v1".into(), "v2".into()],
            }]
        );
    }

    #[test]
    fn dimension_function_is_all_critical() {
        let g = OrientedGraph::from_pairs("g", 4, &[(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        let f = MorseFunction::dimension(&g);
        let c = critical_simplices(&g, &f).unwrap();
        assert_eq!(c.vertices.len(), 4);
        assert_eq!(c.edges.len(), 4);
        assert!(gradient_pairs(&g, &f).unwrap().is_empty());
        assert!(morse_consistency(&g, &f).unwrap().holds());
    }

    #[test]
    fn json_round_trip_and_missing_values() {
        let g = triangle();
        let f = staircase(&g);
        let text = serde_json::to_string(&f.to_doc(&g)).unwrap();
        assert_eq!(MorseFunction::from_json(&g, &text).unwrap(), f);
        let partial = r#"{"vertex_values": {"v1": 0, "v2": 1, "v3": 2}, "edge_values": {"e1": 1}}"#;
        assert!(matches!(
            MorseFunction::from_json(&g, partial),
            Err(Error::MissingValue(_))
        ));
        let unknown = r#"{"vertex_values": {"v9": 0}, "edge_values": {}}"#;
        assert!(MorseFunction::from_json(&g, unknown).is_err());
    }

    #[test]
    fn random_functions_are_morse() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = OrientedGraph::from_pairs("k4", 4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        for _ in 0..200 {
            let f = random_morse_function(&g, &mut rng);
            assert!(morse_consistency(&g, &f).unwrap().holds());
        }
    }
}
