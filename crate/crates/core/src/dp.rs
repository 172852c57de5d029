//! Exact generalized Catalan numbers from the convolution recurrence
//!
//! ```text
//! c_{n+1}(i) = sum_{k=0}^{n} c_{n-k}(i) * sum_j A_G(j, i) c_k(j),   c_0(i) = 1.
//! ```

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::graph::{EdgeId, Graph, Vertex};

/// `per_vertex[i][n] = c_n(v_{i+1})`, `totals[n] = sum_i c_n(v_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalanTable {
    pub per_vertex: Vec<Vec<BigUint>>,
    pub totals: Vec<BigUint>,
}

impl CatalanTable {
    pub fn nmax(&self) -> usize {
        self.totals.len() - 1
    }

    pub fn num_vertices(&self) -> usize {
        self.per_vertex.len()
    }

    pub fn get(&self, n: usize, v: Vertex) -> &BigUint {
        &self.per_vertex[v.index()][n]
    }

    /// Rows `n, c_n(v1), ..., c_n(vN), c_n` as decimal strings.
    pub fn rows(&self) -> Vec<Vec<String>> {
        (0..=self.nmax())
            .map(|n| {
                let mut row = vec![n.to_string()];
                row.extend(self.per_vertex.iter().map(|c| c[n].to_string()));
                row.push(self.totals[n].to_string());
                row
            })
            .collect()
    }

    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["n".to_string()];
        h.extend((1..=self.num_vertices()).map(|i| format!("v{i}")));
        h.push("total".into());
        h
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header().join(",");
        out.push('\n');
        for row in self.rows() {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Row {
            n: usize,
            per_vertex: Vec<String>,
            total: String,
        }
        let rows: Vec<Row> = (0..=self.nmax())
            .map(|n| Row {
                n,
                per_vertex: self.per_vertex.iter().map(|c| c[n].to_string()).collect(),
                total: self.totals[n].to_string(),
            })
            .collect();
        serde_json::to_value(rows).expect("rows serialize")
    }
}

/// Computes `c_n(i)` for all vertices and `n <= nmax`.
pub fn catalan_table(g: &Graph, nmax: usize) -> CatalanTable {
    let nv = g.num_vertices();
    let a = g.vertex_matrix();
    // incoming[i] = [(j, A(j, i))] with A(j, i) > 0
    let incoming: Vec<Vec<(usize, u64)>> = (0..nv)
        .map(|i| (0..nv).filter(|&j| a.at(j, i) > 0).map(|j| (j, a.at(j, i))).collect())
        .collect();
    let mut c: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]; nv];
    // weighted[i][k] = sum_j A(j, i) c_k(j)
    let mut weighted: Vec<Vec<BigUint>> = vec![Vec::with_capacity(nmax); nv];
    for n in 0..nmax {
        for i in 0..nv {
            let w: BigUint = incoming[i].iter().map(|&(j, m)| &c[j][n] * m).sum();
            weighted[i].push(w);
        }
        for i in 0..nv {
            let next: BigUint = (0..=n).map(|k| &c[i][n - k] * &weighted[i][k]).sum();
            c[i].push(next);
        }
    }
    let totals = (0..=nmax).map(|n| c.iter().map(|row| &row[n]).sum()).collect();
    CatalanTable { per_vertex: c, totals }
}

/// `c_n[e] = c_n(s(e))` for `n <= nmax`.
pub fn catalan_edge(g: &Graph, nmax: usize, e: EdgeId) -> Vec<BigUint> {
    let t = catalan_table(g, nmax);
    t.per_vertex[g.source(e).index()].clone()
}

/// Edge-indexed form of the recurrence, run independently over edges:
/// `c_{n+1}[e] = sum_k c_{n-k}[e] * sum_f A^G(f, e) c_k[f]`.
pub fn catalan_edge_table(g: &Graph, nmax: usize) -> Vec<Vec<BigUint>> {
    let am = g.edge_matrix();
    // predecessors[e] = {f : A^G(f, e) = 1}
    let predecessors: Vec<Vec<EdgeId>> =
        g.edge_ids().map(|e| g.edge_ids().filter(|&f| am.get(f, e)).collect()).collect();
    let mut c: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]; g.num_edges()];
    for n in 0..nmax {
        let next: Vec<BigUint> = g
            .edge_ids()
            .map(|e| {
                (0..=n)
                    .map(|k| {
                        let inner: BigUint = predecessors[e.0].iter().map(|f| &c[f.0][k]).sum();
                        &c[e.0][n - k] * inner
                    })
                    .sum()
            })
            .collect();
        for (row, v) in c.iter_mut().zip(next) {
            row.push(v);
        }
    }
    c
}

/// `C(2n, n) / (n + 1)`.
pub fn classical_catalan(n: usize) -> BigUint {
    binomial(2 * n as u64, n as u64) / BigUint::from(n as u64 + 1)
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}
