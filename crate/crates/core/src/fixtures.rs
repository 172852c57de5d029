//! Reference graphs shipped with the crate, plus random graph generators.

use rand::Rng;

use crate::graph::{parse_graph, Graph};

/// Bundled fixture files, by file stem.
pub const BUNDLED: &[(&str, &str)] = &[
    ("g1_n1", include_str!("../fixtures/g1_n1.json")),
    ("g1_n2", include_str!("../fixtures/g1_n2.json")),
    ("g1_n3", include_str!("../fixtures/g1_n3.json")),
    ("g2_n2", include_str!("../fixtures/g2_n2.json")),
    ("g2_n3", include_str!("../fixtures/g2_n3.json")),
    ("g3", include_str!("../fixtures/g3.json")),
    ("two_cycle", include_str!("../fixtures/two_cycle.json")),
];

/// All bundled fixtures, parsed.
pub fn bundled() -> Vec<(&'static str, Graph)> {
    BUNDLED
        .iter()
        .map(|(name, text)| (*name, parse_graph(text).expect("bundled fixture is valid")))
        .collect()
}

pub fn bundled_by_name(name: &str) -> Option<Graph> {
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse_graph(text).expect("bundled fixture is valid"))
}

fn labeled(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Graph {
    let edges = pairs.into_iter().enumerate().map(|(k, (s, t))| (s, t, Some(format!("e{}", k + 1))));
    Graph::new(n, edges).expect("generated fixture is valid")
}

/// Two vertices: loop `e1` at v1, `e2: v1 -> v2`, `e3: v2 -> v1`.
pub fn g3() -> Graph {
    labeled(2, [(1, 1), (1, 2), (2, 1)])
}

/// One vertex carrying `n` loops.
pub fn loops(n: usize) -> Graph {
    labeled(1, std::iter::repeat_n((1, 1), n))
}

/// `n` vertices with exactly one edge for every ordered pair (loops included).
pub fn complete(n: usize) -> Graph {
    labeled(n, (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))))
}

/// A directed cycle through `n` vertices.
pub fn cycle(n: usize) -> Graph {
    labeled(n, (1..=n).map(|i| (i, i % n + 1)))
}

/// A random strongly connected graph with at most `max_vertices` vertices and
/// at most `max_edges` edges: a Hamiltonian cycle over a random vertex order
/// plus random extra edges.
pub fn random_irreducible<R: Rng + ?Sized>(rng: &mut R, max_vertices: usize, max_edges: usize) -> Graph {
    assert!(max_vertices >= 1 && max_edges >= max_vertices);
    let n = rng.gen_range(1..=max_vertices);
    let total = rng.gen_range(n..=max_edges);
    let mut order: Vec<usize> = (1..=n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut pairs: Vec<(usize, usize)> = (0..n).map(|k| (order[k], order[(k + 1) % n])).collect();
    while pairs.len() < total {
        pairs.push((rng.gen_range(1..=n), rng.gen_range(1..=n)));
    }
    // Shuffle so edge ids don't encode the cycle.
    for i in (1..pairs.len()).rev() {
        pairs.swap(i, rng.gen_range(0..=i));
    }
    Graph::new(n, pairs.into_iter().map(|(s, t)| (s, t, None::<String>))).expect("cycle cover is valid")
}

/// A random graph satisfying only the degree conditions (possibly reducible).
pub fn random_valid<R: Rng + ?Sized>(rng: &mut R, vertices: usize, max_edges: usize) -> Graph {
    loop {
        let m = rng.gen_range(vertices..=max_edges);
        let pairs: Vec<_> = (0..m)
            .map(|_| (rng.gen_range(1..=vertices), rng.gen_range(1..=vertices), None::<String>))
            .collect();
        if let Ok(g) = Graph::new(vertices, pairs) {
            return g;
        }
    }
}
