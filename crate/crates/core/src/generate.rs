//! Named graph families, the rewiring scenario graphs and seeded random
//! corpora.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::OrientedGraph;

pub fn path(n: usize) -> OrientedGraph {
    let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    OrientedGraph::from_pairs(format!("p{n}"), n, &pairs).expect("path is simple")
}

/// Directed cycle; `n < 3` degenerates to a path.
pub fn cycle(n: usize) -> OrientedGraph {
    if n < 3 {
        return path(n).with_name(format!("c{n}"));
    }
    let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    OrientedGraph::from_pairs(format!("c{n}"), n, &pairs).expect("cycle is simple")
}

/// Complete graph with every edge oriented from lower to higher index.
pub fn complete(n: usize) -> OrientedGraph {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((i, j));
        }
    }
    OrientedGraph::from_pairs(format!("k{n}"), n, &pairs).expect("complete graph is simple")
}

/// Star with centre `v1` and `n - 1` leaves.
pub fn star(n: usize) -> OrientedGraph {
    let pairs: Vec<_> = (1..n).map(|i| (0, i)).collect();
    OrientedGraph::from_pairs(format!("s{n}"), n, &pairs).expect("star is simple")
}

pub fn edgeless(n: usize) -> OrientedGraph {
    OrientedGraph::from_pairs(format!("e{n}"), n, &[]).expect("edgeless graph is simple")
}

/// Triangle `e1 = v1v2, e2 = v2v3, e3 = v1v3` and an isolated vertex `v4`.
/// Moving the tail of `e3` to `v4` turns it into the path `v1 v2 v3 v4`.
pub fn triangle_pendant() -> OrientedGraph {
    OrientedGraph::from_pairs("triangle_pendant", 4, &[(0, 1), (1, 2), (0, 2)]).expect("simple")
}

/// Triangle with a pendant edge `e4 = v3v4`; `e4` is its only bridge.
pub fn triangle_tail() -> OrientedGraph {
    OrientedGraph::from_pairs("triangle_tail", 4, &[(0, 1), (1, 2), (2, 0), (2, 3)]).expect("simple")
}

/// Two disjoint directed triangles `v1v2v3` and `v4v5v6`. Moving the head of
/// `e2` from `v3` to `v4` joins them into one graph with one cycle.
pub fn disjoint_triangles() -> OrientedGraph {
    OrientedGraph::from_pairs(
        "disjoint_triangles",
        6,
        &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)],
    )
    .expect("simple")
}

/// Triangle `v1v2v3` joined to the path `v4v5v6` by the bridge
/// `e3 = v3v4`. Moving the tail of `e3` to `v6` cuts the graph in two and
/// closes a new cycle `v4v5v6`.
pub fn bottleneck() -> OrientedGraph {
    OrientedGraph::from_pairs("bottleneck", 6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 2)]).expect("simple")
}

/// Every generator name accepted by [`named`].
pub const FAMILIES: [&str; 9] = [
    "path",
    "cycle",
    "complete",
    "star",
    "edgeless",
    "triangle_pendant",
    "triangle_tail",
    "disjoint_triangles",
    "bottleneck",
];

/// Graph by family name; `n` is ignored by the fixed scenario graphs.
pub fn named(family: &str, n: usize) -> Result<OrientedGraph> {
    Ok(match family {
        "path" => path(n),
        "cycle" => cycle(n),
        "complete" => complete(n),
        "star" => star(n),
        "edgeless" => edgeless(n),
        "null" => OrientedGraph::null(),
        "triangle_pendant" => triangle_pendant(),
        "triangle_tail" => triangle_tail(),
        "disjoint_triangles" => disjoint_triangles(),
        "bottleneck" => bottleneck(),
        _ => {
            return Err(Error::Precondition(format!(
                "unknown family {family:?}; expected one of {}, null",
                FAMILIES.join(", ")
            )))
        }
    })
}

/// `G(n, p)` with each edge oriented at random.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64, name: impl Into<String>) -> OrientedGraph {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(p) {
                pairs.push(if rng.gen_bool(0.5) { (i, j) } else { (j, i) });
            }
        }
    }
    pairs.shuffle(rng);
    OrientedGraph::from_pairs(name, n, &pairs).expect("random graph is simple")
}

/// `count` random graphs with vertex counts drawn from
/// `min_vertices..=max_vertices` and an edge density drawn per graph.
pub fn random_corpus(seed: u64, count: usize, min_vertices: usize, max_vertices: usize) -> Vec<OrientedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(min_vertices..=max_vertices);
            let p = rng.gen_range(0.05..0.95);
            random_graph(&mut rng, n, p, format!("random-{seed}-{i}"))
        })
        .collect()
}

/// All connected labeled graphs on `1..=max_vertices` vertices with at most
/// `max_edges` edges. Orientations are drawn from `seed`.
pub fn connected_graphs(max_vertices: usize, max_edges: usize, seed: u64) -> Vec<OrientedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
        for mask in 0u64..(1u64 << slots.len()) {
            if mask.count_ones() as usize > max_edges {
                continue;
            }
            let pairs: Vec<_> = slots
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &(i, j))| if rng.gen_bool(0.5) { (i, j) } else { (j, i) })
                .collect();
            let g = OrientedGraph::from_pairs(format!("conn-{n}-{mask}"), n, &pairs).expect("simple");
            if g.is_connected() {
                out.push(g);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_shapes() {
        assert_eq!((path(4).vertex_count(), path(4).edge_count()), (4, 3));
        assert_eq!(cycle(6).cycle_rank(), 1);
        assert_eq!(complete(5).edge_count(), 10);
        assert_eq!(star(5).max_degree(), 4);
        assert_eq!(edgeless(3).component_count(), 3);
        assert_eq!(cycle(2).edge_count(), 1);
        assert!(named("nope", 3).is_err());
        assert!(named("null", 0).unwrap().is_null());
    }

    #[test]
    fn scenario_counts() {
        let g = triangle_pendant();
        assert_eq!(
            (g.component_count(), g.cycle_rank(), g.euler_characteristic()),
            (2, 1, 1)
        );
        let g = bottleneck();
        assert_eq!((g.component_count(), g.cycle_rank()), (1, 1));
        assert_eq!(g.bridge_ids(), vec!["e3", "e4", "e5"]);
        let g = disjoint_triangles();
        assert_eq!((g.component_count(), g.cycle_rank()), (2, 2));
        assert_eq!(triangle_tail().bridge_ids(), vec!["e4"]);
    }

    #[test]
    fn corpora_are_deterministic() {
        let a = random_corpus(11, 20, 3, 12);
        let b = random_corpus(11, 20, 3, 12);
        assert_eq!(a, b);
        assert!(a.iter().all(|g| (3..=12).contains(&g.vertex_count())));
        assert_ne!(a, random_corpus(12, 20, 3, 12));
    }

    #[test]
    fn connected_graph_counts() {
        // labeled connected graphs on 1..=4 vertices: 1, 1, 4, 38
        assert_eq!(connected_graphs(4, 6, 0).len(), 44);
        // on 4 vertices with at most 3 edges only the 16 spanning trees remain
        let trees = connected_graphs(4, 3, 0)
            .into_iter()
            .filter(|g| g.vertex_count() == 4)
            .count();
        assert_eq!(trees, 16);
    }
}
