//! Finite directed multigraphs and their vertex/edge transition matrices.
//!
//! Vertices are numbered `1..=N`; edges carry dense 0-based ids assigned in
//! input order. Every vertex must have at least one incoming and one outgoing
//! edge, which is exactly the condition for the edge matrix to have no zero
//! rows or columns.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex, numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vertex(pub usize);

impl Vertex {
    /// 0-based position, for indexing tables.
    #[inline]
    pub fn index(self) -> usize {
        self.0 - 1
    }

    #[inline]
    pub fn from_index(i: usize) -> Self {
        Vertex(i + 1)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A 0-based edge id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub source: Vertex,
    pub target: Vertex,
    pub label: Option<String>,
}

/// A validated directed multigraph. Parallel edges and loops are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<Edge>,
    in_edges: Vec<Vec<EdgeId>>,
    out_edges: Vec<Vec<EdgeId>>,
    by_label: HashMap<String, EdgeId>,
}

fn valid_label(label: &str) -> bool {
    !label.is_empty()
        && !label.chars().all(|c| c.is_ascii_digit())
        && !label
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '*' | ':' | '(' | ')' | ',' | '#'))
}

impl Graph {
    /// Builds a graph from `(source, target, label)` triples, vertices 1-based.
    pub fn new<I, L>(num_vertices: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Option<L>)>,
        L: Into<String>,
    {
        if num_vertices == 0 {
            return Err(Error::InvalidGraph("graph needs at least one vertex".into()));
        }
        let mut out = Vec::new();
        let mut by_label = HashMap::new();
        let mut in_edges = vec![Vec::new(); num_vertices];
        let mut out_edges = vec![Vec::new(); num_vertices];
        for (k, (s, t, label)) in edges.into_iter().enumerate() {
            for v in [s, t] {
                if v == 0 || v > num_vertices {
                    return Err(Error::InvalidGraph(format!(
                        "edge {k} references vertex {v} outside 1..={num_vertices}"
                    )));
                }
            }
            let label = label.map(Into::into);
            if let Some(l) = &label {
                if !valid_label(l) {
                    return Err(Error::InvalidGraph(format!("edge {k} has unusable label {l:?}")));
                }
                if by_label.insert(l.clone(), EdgeId(k)).is_some() {
                    return Err(Error::InvalidGraph(format!("duplicate edge label {l:?}")));
                }
            }
            out_edges[s - 1].push(EdgeId(k));
            in_edges[t - 1].push(EdgeId(k));
            out.push(Edge { id: EdgeId(k), source: Vertex(s), target: Vertex(t), label });
        }
        for i in 0..num_vertices {
            if in_edges[i].is_empty() {
                return Err(Error::MissingEdge { vertex: Vertex::from_index(i), missing: "incoming" });
            }
            if out_edges[i].is_empty() {
                return Err(Error::MissingEdge { vertex: Vertex::from_index(i), missing: "outgoing" });
            }
        }
        Ok(Graph { num_vertices, edges: out, in_edges, out_edges, by_label })
    }

    /// Builds an unlabeled graph from a vertex matrix (`m[i][j]` edges `v_{i+1} -> v_{j+1}`).
    /// Edges are numbered row-major.
    pub fn from_vertex_matrix(m: &[Vec<u64>]) -> Result<Self> {
        let n = m.len();
        let mut edges = Vec::new();
        for (i, row) in m.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGraph("vertex matrix is not square".into()));
            }
            for (j, &count) in row.iter().enumerate() {
                for _ in 0..count {
                    edges.push((i + 1, j + 1, None::<String>));
                }
            }
        }
        Graph::new(n, edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (1..=self.num_vertices).map(Vertex)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    #[inline]
    pub fn source(&self, e: EdgeId) -> Vertex {
        self.edges[e.0].source
    }

    #[inline]
    pub fn target(&self, e: EdgeId) -> Vertex {
        self.edges[e.0].target
    }

    /// Edges ending at `v`, ascending by id.
    pub fn in_edges(&self, v: Vertex) -> &[EdgeId] {
        &self.in_edges[v.index()]
    }

    /// Edges leaving `v`, ascending by id.
    pub fn out_edges(&self, v: Vertex) -> &[EdgeId] {
        &self.out_edges[v.index()]
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        e.0 < self.edges.len()
    }

    /// `t(e) = s(f)`: `f` may follow `e` in a path.
    #[inline]
    pub fn composable(&self, e: EdgeId, f: EdgeId) -> bool {
        self.target(e) == self.source(f)
    }

    /// Display name of an edge: its label, or its numeric id.
    pub fn edge_name(&self, e: EdgeId) -> String {
        match &self.edges[e.0].label {
            Some(l) => l.clone(),
            None => e.0.to_string(),
        }
    }

    /// Resolves an edge by label, falling back to a numeric id.
    pub fn edge_by_name(&self, name: &str) -> Result<EdgeId> {
        if let Some(&e) = self.by_label.get(name) {
            return Ok(e);
        }
        match name.parse::<usize>() {
            Ok(k) if k < self.edges.len() => Ok(EdgeId(k)),
            _ => Err(Error::Parse(format!("unknown edge {name:?}"))),
        }
    }

    pub fn vertex_matrix(&self) -> VertexMatrix {
        let n = self.num_vertices;
        let mut data = vec![0u64; n * n];
        for e in &self.edges {
            data[e.source.index() * n + e.target.index()] += 1;
        }
        VertexMatrix { n, data }
    }

    pub fn edge_matrix(&self) -> EdgeMatrix {
        let m = self.edges.len();
        let mut data = vec![false; m * m];
        for e in &self.edges {
            for &f in self.out_edges(e.target) {
                data[e.id.0 * m + f.0] = true;
            }
        }
        EdgeMatrix { m, data }
    }

    /// True iff the vertex digraph is strongly connected.
    pub fn is_irreducible(&self) -> bool {
        let forward = self.reach_from(Vertex(1), false);
        let backward = self.reach_from(Vertex(1), true);
        forward.iter().all(|&r| r) && backward.iter().all(|&r| r)
    }

    fn reach_from(&self, start: Vertex, reversed: bool) -> Vec<bool> {
        let mut seen = vec![false; self.num_vertices];
        let mut queue = VecDeque::from([start]);
        seen[start.index()] = true;
        while let Some(v) = queue.pop_front() {
            let next = if reversed { self.in_edges(v) } else { self.out_edges(v) };
            for &e in next {
                let w = if reversed { self.source(e) } else { self.target(e) };
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// The gcd of all cycle lengths. Requires irreducibility.
    pub fn period(&self) -> Result<usize> {
        if !self.is_irreducible() {
            return Err(Error::NotIrreducible);
        }
        // BFS levels; every edge u->w contributes level(u) + 1 - level(w).
        let mut level = vec![usize::MAX; self.num_vertices];
        level[0] = 0;
        let mut queue = VecDeque::from([Vertex(1)]);
        while let Some(v) = queue.pop_front() {
            for &e in self.out_edges(v) {
                let w = self.target(e);
                if level[w.index()] == usize::MAX {
                    level[w.index()] = level[v.index()] + 1;
                    queue.push_back(w);
                }
            }
        }
        let mut g = 0usize;
        for e in &self.edges {
            let d = (level[e.source.index()] + 1).abs_diff(level[e.target.index()]);
            g = g.gcd(&d);
        }
        Ok(g)
    }

    /// True iff the (irreducible) graph has period 1.
    pub fn is_aperiodic(&self) -> Result<bool> {
        Ok(self.period()? == 1)
    }

    pub fn to_json(&self) -> String {
        let file = GraphFile {
            vertices: self.num_vertices,
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec { src: e.source.0, dst: e.target.0, label: e.label.clone() })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("graph serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("vertices {}\n", self.num_vertices);
        for e in &self.edges {
            match &e.label {
                Some(l) => s.push_str(&format!("{} {} {}\n", e.source.0, e.target.0, l)),
                None => s.push_str(&format!("{} {}\n", e.source.0, e.target.0)),
            }
        }
        s
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    vertices: usize,
    edges: Vec<EdgeSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeSpec {
    src: usize,
    dst: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

/// Parses a graph file, JSON or the line-oriented text format (detected by
/// the first non-blank character).
pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph JSON: {e}")))?;
        Graph::new(file.vertices, file.edges.into_iter().map(|e| (e.src, e.dst, e.label)))
    } else {
        parse_text(text)
    }
}

fn parse_text(text: &str) -> Result<Graph> {
    let mut vertices = None;
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::Parse(format!("line {}: malformed {raw:?}", lineno + 1));
        if vertices.is_none() {
            match fields.as_slice() {
                ["vertices", n] => vertices = Some(n.parse::<usize>().map_err(|_| bad())?),
                _ => return Err(Error::Parse(format!("line {}: expected `vertices N` header", lineno + 1))),
            }
            continue;
        }
        let (s, t, label) = match fields.as_slice() {
            [s, t] => (s, t, None),
            [s, t, l] => (s, t, Some(l.to_string())),
            _ => return Err(bad()),
        };
        edges.push((s.parse::<usize>().map_err(|_| bad())?, t.parse::<usize>().map_err(|_| bad())?, label));
    }
    let n = vertices.ok_or_else(|| Error::Parse("missing `vertices N` header".into()))?;
    Graph::new(n, edges)
}

/// `A_G(i, j)`: number of edges from `v_i` to `v_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexMatrix {
    n: usize,
    data: Vec<u64>,
}

impl VertexMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry by 0-based row/column.
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    pub fn get(&self, from: Vertex, to: Vertex) -> u64 {
        self.at(from.index(), to.index())
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// In-degree of column `j` (0-based): `sum_i A(i, j)`.
    pub fn column_sum(&self, j: usize) -> u64 {
        (0..self.n).map(|i| self.at(i, j)).sum()
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        (0..self.n).map(|j| self.at(i, j)).sum()
    }

    /// Maximum column sum, `max_i sum_j A(j, i)`.
    pub fn column_sum_norm(&self) -> u64 {
        (0..self.n).map(|j| self.column_sum(j)).max().unwrap_or(0)
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.n, self.n, |i, j| self.at(i, j) as f64)
    }
}

/// `A^G(e, f) = 1` iff `t(e) = s(f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeMatrix {
    m: usize,
    data: Vec<bool>,
}

impl EdgeMatrix {
    pub fn dim(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, e: EdgeId, f: EdgeId) -> bool {
        self.data[e.0 * self.m + f.0]
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        self.data.chunks(self.m).map(|r| r.iter().map(|&b| b as u8).collect()).collect()
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.m, self.m, |i, j| if self.data[i * self.m + j] { 1.0 } else { 0.0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parses_g3_json() {
        let g = parse_graph(r#"{"vertices": 2, "edges": [{"src":1,"dst":1},{"src":1,"dst":2},{"src":2,"dst":1}]}"#)
            .unwrap();
        assert_eq!(g.num_vertices(), 2);
        assert_eq!(g.num_edges(), 3);
        assert_eq!(g.vertex_matrix().rows(), vec![vec![1, 1], vec![1, 0]]);
    }

    #[test]
    fn parses_text_format() {
        let g = parse_graph("# single loop\nvertices 1\n1 1 loop\n").unwrap();
        assert_eq!(g.num_vertices(), 1);
        assert_eq!(g.num_edges(), 1);
        assert_eq!(g.edge_by_name("loop").unwrap(), EdgeId(0));
    }

    #[test]
    fn rejects_vertex_without_incoming_edge() {
        let err = parse_graph("vertices 2\n1 2\n").unwrap_err();
        assert_eq!(err, Error::MissingEdge { vertex: Vertex(1), missing: "incoming" });
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse_graph("vertices x\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_graph("1 1\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_graph("{\"vertices\": 1}"), Err(Error::Parse(_))));
        assert!(matches!(parse_graph("vertices 1\n1 3\n"), Err(Error::InvalidGraph(_))));
        assert!(matches!(parse_graph("vertices 1\n1 1 a\n1 1 a\n"), Err(Error::InvalidGraph(_))));
        assert!(matches!(parse_graph("vertices 1\n1 1 7\n"), Err(Error::InvalidGraph(_))));
    }

    #[test]
    fn vertex_matrices_of_fixtures() {
        assert_eq!(fixtures::loops(3).vertex_matrix().rows(), vec![vec![3]]);
        assert_eq!(fixtures::complete(3).vertex_matrix().rows(), vec![vec![1; 3]; 3]);
    }

    #[test]
    fn g3_edge_matrix() {
        let g = fixtures::g3();
        assert_eq!(g.edge_matrix().rows(), vec![vec![1, 1, 0], vec![0, 0, 1], vec![1, 1, 0]]);
        assert_eq!(fixtures::loops(1).edge_matrix().rows(), vec![vec![1]]);
    }

    #[test]
    fn irreducibility_and_period() {
        let g3 = fixtures::g3();
        assert!(g3.is_irreducible());
        assert!(g3.is_aperiodic().unwrap());

        let disjoint = Graph::new(2, [(1, 1, None::<String>), (2, 2, None)]).unwrap();
        assert!(!disjoint.is_irreducible());
        assert_eq!(disjoint.is_aperiodic(), Err(Error::NotIrreducible));

        let two_cycle = Graph::new(2, [(1, 2, None::<String>), (2, 1, None)]).unwrap();
        assert!(two_cycle.is_irreducible());
        assert_eq!(two_cycle.period().unwrap(), 2);
        assert!(!two_cycle.is_aperiodic().unwrap());
    }

    #[test]
    fn serialization_is_stable() {
        let g = fixtures::g3();
        let json = g.to_json();
        assert_eq!(parse_graph(&json).unwrap(), g);
        assert_eq!(parse_graph(&json).unwrap().to_json(), json);
        assert_eq!(parse_graph(&g.to_text()).unwrap(), g);
    }
}
