//! Oriented simple graphs and their combinatorial topology.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// An oriented edge between two vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

impl Edge {
    /// The endpoint opposite to `v`. `v` must be an endpoint.
    pub fn other(&self, v: usize) -> usize {
        if v == self.tail {
            self.head
        } else {
            self.tail
        }
    }

    pub fn is_incident(&self, v: usize) -> bool {
        self.tail == v || self.head == v
    }

    /// Incidence sign of `v` on this edge: `+1` at the head, `-1` at the tail.
    pub fn incidence(&self, v: usize) -> i64 {
        if v == self.head {
            1
        } else if v == self.tail {
            -1
        } else {
            0
        }
    }

    fn key(&self) -> (usize, usize) {
        (self.tail.min(self.head), self.tail.max(self.head))
    }
}

/// A finite simple graph with an ordered vertex list and an ordered list of
/// oriented edges.
///
/// Vertex order fixes matrix row order and edge order fixes column order of
/// the incidence matrix. No self-loops, no parallel edges in either
/// orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedGraph {
    name: String,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    incident: Vec<Vec<usize>>,
}

impl OrientedGraph {
    /// Builds and validates a graph from ids and index-based edges.
    pub fn new(name: impl Into<String>, vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let mut seen_v = HashSet::new();
        for v in &vertices {
            if !seen_v.insert(v.as_str()) {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let mut seen_e = HashSet::new();
        let mut pairs: HashMap<(usize, usize), &str> = HashMap::new();
        for e in &edges {
            if !seen_e.insert(e.id.as_str()) {
                return Err(Error::DuplicateEdge(e.id.clone()));
            }
            for &end in &[e.tail, e.head] {
                if end >= vertices.len() {
                    return Err(Error::DanglingEndpoint {
                        edge: e.id.clone(),
                        vertex: format!("#{end}"),
                    });
                }
            }
            if e.tail == e.head {
                return Err(Error::SelfLoop(e.id.clone()));
            }
            if let Some(existing) = pairs.insert(e.key(), &e.id) {
                return Err(Error::ParallelEdge {
                    edge: e.id.clone(),
                    existing: existing.to_string(),
                });
            }
        }
        let mut incident = vec![Vec::new(); vertices.len()];
        for (k, e) in edges.iter().enumerate() {
            incident[e.tail].push(k);
            incident[e.head].push(k);
        }
        Ok(Self {
            name: name.into(),
            vertices,
            edges,
            incident,
        })
    }

    /// Graph on `n` vertices named `v1..vn` with edges `e1..` given as
    /// `(tail, head)` index pairs.
    pub fn from_pairs(name: impl Into<String>, n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let vertices = (1..=n).map(|i| format!("v{i}")).collect();
        let edges = pairs
            .iter()
            .enumerate()
            .map(|(k, &(tail, head))| Edge {
                id: format!("e{}", k + 1),
                tail,
                head,
            })
            .collect();
        Self::new(name, vertices, edges)
    }

    /// The graph with no vertices and no edges.
    pub fn null() -> Self {
        Self {
            name: "null".into(),
            vertices: Vec::new(),
            edges: Vec::new(),
            incident: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_null(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == id)
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn edge_index(&self, id: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e.id == id)
            .ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    /// Edge indices incident to `v`, in edge order.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.incident.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.incident.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.incident[v].iter().map(move |&k| self.edges[k].other(v))
    }

    /// Index of the edge joining `a` and `b`, in either orientation.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.incident
            .get(a)?
            .iter()
            .copied()
            .find(|&k| self.edges[k].other(a) == b)
    }

    /// `Some(k)` when every vertex has degree `k`.
    pub fn regular_degree(&self) -> Option<usize> {
        let first = self.incident.first().map(Vec::len)?;
        self.incident.iter().all(|i| i.len() == first).then_some(first)
    }

    /// Copy with the orientation of edge `k` reversed.
    pub fn with_edge_reversed(&self, k: usize) -> Self {
        let mut g = self.clone();
        let e = &mut g.edges[k];
        std::mem::swap(&mut e.tail, &mut e.head);
        g
    }

    /// Copy with edge `k` deleted.
    pub fn without_edge(&self, k: usize) -> Self {
        let mut edges = self.edges.clone();
        edges.remove(k);
        Self::new(self.name.clone(), self.vertices.clone(), edges).expect("removing an edge preserves simplicity")
    }

    /// Symmetric 0/1 adjacency matrix.
    pub fn adjacency_matrix(&self) -> IntMatrix {
        let n = self.vertex_count();
        let mut a = IntMatrix::zeros(n, n);
        for e in &self.edges {
            a[(e.tail, e.head)] = 1;
            a[(e.head, e.tail)] = 1;
        }
        a
    }

    /// Diagonal degree matrix.
    pub fn degree_matrix(&self) -> IntMatrix {
        let n = self.vertex_count();
        let mut d = IntMatrix::zeros(n, n);
        for v in 0..n {
            d[(v, v)] = self.degree(v) as i64;
        }
        d
    }

    /// `|V| x |E|` incidence matrix: `+1` at the head, `-1` at the tail.
    pub fn incidence_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.vertex_count(), self.edge_count());
        for (k, e) in self.edges.iter().enumerate() {
            m[(e.head, k)] = 1;
            m[(e.tail, k)] = -1;
        }
        m
    }

    /// Connected components, each sorted, ordered by smallest vertex index.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let labels = self.component_labels();
        let count = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut comps = vec![Vec::new(); count];
        for (v, &c) in labels.iter().enumerate() {
            comps[c].push(v);
        }
        comps
    }

    /// Component label per vertex; labels are assigned in order of the
    /// smallest vertex of each component.
    pub fn component_labels(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut stack = Vec::new();
        for root in 0..n {
            if label[root] != usize::MAX {
                continue;
            }
            label[root] = next;
            stack.push(root);
            while let Some(v) = stack.pop() {
                for w in self.neighbors(v) {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.connected_components().len()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// `|E| - |V| + #components`.
    pub fn cycle_rank(&self) -> usize {
        self.edge_count() + self.component_count() - self.vertex_count()
    }

    /// `|V| - |E|`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64
    }

    /// Depth-first spanning forest, rooted at the smallest vertex of each
    /// component with neighbours visited in incidence order.
    pub fn spanning_forest(&self) -> SpanningForest {
        let n = self.vertex_count();
        let mut parent_edge = vec![None; n];
        let mut depth = vec![usize::MAX; n];
        let mut in_tree = vec![false; self.edge_count()];
        for root in 0..n {
            if depth[root] != usize::MAX {
                continue;
            }
            depth[root] = 0;
            // iterative DFS keeping an explicit cursor per frame
            let mut stack = vec![(root, 0usize)];
            while let Some(&mut (v, ref mut cursor)) = stack.last_mut() {
                if let Some(&k) = self.incident[v].get(*cursor) {
                    *cursor += 1;
                    let w = self.edges[k].other(v);
                    if depth[w] == usize::MAX {
                        depth[w] = depth[v] + 1;
                        parent_edge[w] = Some(k);
                        in_tree[k] = true;
                        stack.push((w, 0));
                    }
                } else {
                    stack.pop();
                }
            }
        }
        SpanningForest {
            parent_edge,
            depth,
            in_tree,
        }
    }

    /// One signed edge vector per non-tree edge of the spanning forest.
    ///
    /// The cycle runs along the non-tree edge from tail to head and returns
    /// through the tree. An edge traversed along its orientation gets `+1`,
    /// against it `-1`. Every vector lies in the integer kernel of the
    /// incidence matrix.
    pub fn fundamental_cycle_basis(&self) -> Vec<Vec<i64>> {
        let forest = self.spanning_forest();
        let mut basis = Vec::new();
        for (k, e) in self.edges.iter().enumerate() {
            if forest.in_tree[k] {
                continue;
            }
            let mut c = vec![0i64; self.edge_count()];
            c[k] = 1;
            // walk head -> tail through the tree
            let (mut a, mut b) = (e.head, e.tail);
            let mut tail_side = Vec::new();
            while a != b {
                if forest.depth[a] >= forest.depth[b] {
                    let pk = forest.parent_edge[a].expect("non-root has a parent");
                    let next = self.edges[pk].other(a);
                    // traversing a -> next
                    c[pk] += if self.edges[pk].tail == a { 1 } else { -1 };
                    a = next;
                } else {
                    let pk = forest.parent_edge[b].expect("non-root has a parent");
                    let next = self.edges[pk].other(b);
                    tail_side.push((pk, next, b));
                    b = next;
                }
            }
            // the tail side is traversed in reverse: next -> b
            for (pk, from, _to) in tail_side {
                c[pk] += if self.edges[pk].tail == from { 1 } else { -1 };
            }
            basis.push(c);
        }
        basis
    }

    /// Edges whose removal increases the component count, in edge order.
    ///
    /// An edge is a bridge exactly when it is a tree edge that no
    /// fundamental cycle passes through.
    pub fn bridges(&self) -> Vec<usize> {
        let forest = self.spanning_forest();
        let mut covered = forest.in_tree.iter().map(|t| !t).collect::<Vec<_>>();
        for c in self.fundamental_cycle_basis() {
            for (k, &x) in c.iter().enumerate() {
                if x != 0 {
                    covered[k] = true;
                }
            }
        }
        covered
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(k, _)| k)
            .collect()
    }

    pub fn bridge_ids(&self) -> Vec<String> {
        self.bridges().into_iter().map(|k| self.edges[k].id.clone()).collect()
    }

    /// Parses the canonical JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphDoc = serde_json::from_str(text).map_err(|e| Error::MalformedGraph(e.to_string()))?;
        doc.try_into()
    }

    pub fn to_doc(&self) -> GraphDoc {
        GraphDoc {
            name: self.name.clone(),
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc::Oriented {
                    id: e.id.clone(),
                    tail: self.vertices[e.tail].clone(),
                    head: self.vertices[e.head].clone(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("graph serializes")
    }

    /// Parses the plain-text edge list.
    ///
    /// One edge per line as `tail head [id]`; `# vertex <name>` declares a
    /// vertex (useful for isolated ones). Other `#` lines and blank lines are
    /// ignored. Vertices are numbered in order of first appearance; edges
    /// without an id are named `e1, e2, ...` by position.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut vertices: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut intern = |name: &str, vertices: &mut Vec<String>| -> usize {
            *index.entry(name.to_string()).or_insert_with(|| {
                vertices.push(name.to_string());
                vertices.len() - 1
            })
        };
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut parts = rest.split_whitespace();
                if parts.next() == Some("vertex") {
                    let name = parts
                        .next()
                        .ok_or_else(|| Error::MalformedGraph(format!("line {}: vertex without name", lineno + 1)))?;
                    intern(name, &mut vertices);
                }
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if !(2..=3).contains(&parts.len()) {
                return Err(Error::MalformedGraph(format!(
                    "line {}: expected `tail head [id]`",
                    lineno + 1
                )));
            }
            let tail = intern(parts[0], &mut vertices);
            let head = intern(parts[1], &mut vertices);
            let id = parts
                .get(2)
                .map(|s| s.to_string())
                .unwrap_or_else(|| format!("e{}", edges.len() + 1));
            edges.push(Edge { id, tail, head });
        }
        Self::new("", vertices, edges)
    }
}

/// Parent pointers of a spanning forest.
#[derive(Debug, Clone)]
pub struct SpanningForest {
    pub parent_edge: Vec<Option<usize>>,
    pub depth: Vec<usize>,
    pub in_tree: Vec<bool>,
}

/// Canonical JSON graph document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDoc {
    #[serde(default)]
    pub name: String,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
}

/// An edge entry. Oriented entries carry `tail`/`head`; unoriented entries
/// carry `endpoints` and are oriented from the lower vertex index to the
/// higher.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum EdgeDoc {
    Oriented { id: String, tail: String, head: String },
    Unoriented { id: String, endpoints: [String; 2] },
}

impl TryFrom<GraphDoc> for OrientedGraph {
    type Error = Error;

    fn try_from(doc: GraphDoc) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, v) in doc.vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let lookup = |edge: &str, v: &str| {
            index.get(v).copied().ok_or_else(|| Error::DanglingEndpoint {
                edge: edge.to_string(),
                vertex: v.to_string(),
            })
        };
        let mut edges = Vec::with_capacity(doc.edges.len());
        for e in &doc.edges {
            let edge = match e {
                EdgeDoc::Oriented { id, tail, head } => Edge {
                    id: id.clone(),
                    tail: lookup(id, tail)?,
                    head: lookup(id, head)?,
                },
                EdgeDoc::Unoriented { id, endpoints } => {
                    let a = lookup(id, &endpoints[0])?;
                    let b = lookup(id, &endpoints[1])?;
                    Edge {
                        id: id.clone(),
                        tail: a.min(b),
                        head: a.max(b),
                    }
                }
            };
            edges.push(edge);
        }
        OrientedGraph::new(doc.name, doc.vertices, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> OrientedGraph {
        OrientedGraph::from_pairs("triangle", 3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn parse_triangle_json() {
        let text = r#"{"name":"t","vertices":["v1","v2","v3"],
            "edges":[{"id":"e1","tail":"v1","head":"v2"},
                     {"id":"e2","tail":"v2","head":"v3"},
                     {"id":"e3","tail":"v3","head":"v1"}]}"#;
        let g = OrientedGraph::from_json(text).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g, triangle().with_name("t"));
    }

    #[test]
    fn parse_errors_are_distinct() {
        let loop_doc = r#"{"vertices":["v1"],"edges":[{"id":"e1","tail":"v1","head":"v1"}]}"#;
        assert_eq!(OrientedGraph::from_json(loop_doc), Err(Error::SelfLoop("e1".into())));
        let par = r#"{"vertices":["v1","v2"],"edges":[{"id":"e1","tail":"v1","head":"v2"},{"id":"e2","tail":"v2","head":"v1"}]}"#;
        assert_eq!(
            OrientedGraph::from_json(par),
            Err(Error::ParallelEdge {
                edge: "e2".into(),
                existing: "e1".into()
            })
        );
        let dup = r#"{"vertices":["v1","v1"],"edges":[]}"#;
        assert_eq!(OrientedGraph::from_json(dup), Err(Error::DuplicateVertex("v1".into())));
        let dup_e = r#"{"vertices":["v1","v2","v3"],"edges":[{"id":"e1","tail":"v1","head":"v2"},{"id":"e1","tail":"v2","head":"v3"}]}"#;
        assert_eq!(OrientedGraph::from_json(dup_e), Err(Error::DuplicateEdge("e1".into())));
        let dangling = r#"{"vertices":["v1"],"edges":[{"id":"e1","tail":"v1","head":"v9"}]}"#;
        assert_eq!(
            OrientedGraph::from_json(dangling),
            Err(Error::DanglingEndpoint {
                edge: "e1".into(),
                vertex: "v9".into()
            })
        );
        assert!(matches!(
            OrientedGraph::from_json("{not json"),
            Err(Error::MalformedGraph(_))
        ));
    }

    #[test]
    fn unoriented_edges_default_low_to_high() {
        let text = r#"{"vertices":["a","b","c"],"edges":[{"id":"x","endpoints":["c","a"]}]}"#;
        let g = OrientedGraph::from_json(text).unwrap();
        assert_eq!((g.edges()[0].tail, g.edges()[0].head), (0, 2));
    }

    #[test]
    fn text_format() {
        let g = OrientedGraph::from_text("# vertex z\na b\nb c e7\n# comment\n").unwrap();
        assert_eq!(g.vertices(), &["z", "a", "b", "c"]);
        assert_eq!(g.edges()[0].id, "e1");
        assert_eq!(g.edges()[1].id, "e7");
        assert_eq!(g.component_count(), 2);
        assert!(OrientedGraph::from_text("a a").is_err());
        assert!(OrientedGraph::from_text("a b c d").is_err());
    }

    #[test]
    fn canonical_matrices() {
        let t = triangle();
        assert_eq!(
            t.adjacency_matrix(),
            IntMatrix::from_rows(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]])
        );
        assert_eq!(
            t.incidence_matrix(),
            IntMatrix::from_rows(&[vec![-1, 0, 1], vec![1, -1, 0], vec![0, 1, -1]])
        );
        let p2 = OrientedGraph::from_pairs("p2", 2, &[(0, 1)]).unwrap();
        assert_eq!(p2.adjacency_matrix(), IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]));
        assert_eq!(p2.incidence_matrix(), IntMatrix::from_rows(&[vec![-1], vec![1]]));
        let e3 = OrientedGraph::from_pairs("e3", 3, &[]).unwrap();
        let i = e3.incidence_matrix();
        assert_eq!((i.rows(), i.cols()), (3, 0));
        let null = OrientedGraph::null();
        assert_eq!(null.adjacency_matrix(), IntMatrix::zeros(0, 0));
    }

    #[test]
    fn topology_small_cases() {
        let t = triangle();
        assert_eq!(t.component_count(), 1);
        assert_eq!(t.cycle_rank(), 1);
        assert!(t.bridges().is_empty());
        assert_eq!(t.fundamental_cycle_basis(), vec![vec![1, 1, 1]]);

        let path = OrientedGraph::from_pairs("p3", 3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.bridges(), vec![0, 1]);
        assert!(path.fundamental_cycle_basis().is_empty());
        assert_eq!(path.euler_characteristic(), 1);

        let null = OrientedGraph::null();
        assert_eq!(null.component_count(), 0);
        assert_eq!(null.cycle_rank(), 0);
        assert_eq!(null.euler_characteristic(), 0);
    }

    #[test]
    fn triangle_with_pendant_has_one_bridge() {
        let g = OrientedGraph::from_pairs("paw", 4, &[(0, 1), (1, 2), (2, 3), (2, 0)]).unwrap();
        assert_eq!(g.bridge_ids(), vec!["e3".to_string()]);
    }

    #[test]
    fn disjoint_triangles_have_disjoint_cycles() {
        let g = OrientedGraph::from_pairs("tt", 6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_eq!(g.component_count(), 2);
        let basis = g.fundamental_cycle_basis();
        assert_eq!(basis.len(), 2);
        let inc = g.incidence_matrix();
        for c in &basis {
            assert!(inc.apply(c).unwrap().iter().all(|&x| x == 0));
        }
        let overlap = basis[0].iter().zip(&basis[1]).any(|(a, b)| *a != 0 && *b != 0);
        assert!(!overlap);
    }

    #[test]
    fn cycle_vectors_against_orientation() {
        // e3 reversed relative to the cyclic orientation
        let g = OrientedGraph::from_pairs("t", 3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let basis = g.fundamental_cycle_basis();
        assert_eq!(basis.len(), 1);
        assert!(g.incidence_matrix().apply(&basis[0]).unwrap().iter().all(|&x| x == 0));
        assert!(basis[0].iter().all(|&x| x.abs() == 1));
    }
}
