use num_traits::ToPrimitive;
use serde::Serialize;

use crate::dp::CatalanTable;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Perron-Frobenius data of the edge matrix and the induced vertex weights.
#[derive(Clone, Debug, Serialize)]
pub struct KmsData {
    pub r_g: f64,
    /// Right eigenvector `A^G t = r_G t`, unit sum.
    pub edge_vector: Vec<f64>,
    /// `phi(P_v) = r_G t_e` for any edge `e` ending at `v`.
    pub vertex_weights: Vec<f64>,
    /// `max |A^G t - r_G t|`.
    pub residual: f64,
}

/// Weighted counts `c_n(i) phi(P_{v_i})` and their totals.
#[derive(Clone, Debug, Serialize)]
pub struct KmsSequences {
    pub per_vertex: Vec<Vec<f64>>,
    pub totals: Vec<f64>,
}

fn require_aperiodic(g: &Graph) -> Result<()> {
    match g.period()? {
        1 => Ok(()),
        period => Err(Error::Periodic { period }),
    }
}

/// Power iteration on the edge matrix with unit-sum normalization.
pub fn perron_frobenius(g: &Graph, tol: f64) -> Result<KmsData> {
    require_aperiodic(g)?;
    let am = g.edge_matrix();
    let m = g.num_edges();
    let successors: Vec<Vec<usize>> = (0..m)
        .map(|e| (0..m).filter(|&f| am.get(crate::EdgeId(e), crate::EdgeId(f))).collect())
        .collect();
    let apply = |t: &[f64]| -> Vec<f64> { successors.iter().map(|row| row.iter().map(|&f| t[f]).sum()).collect() };
    let mut t = vec![1.0 / m as f64; m];
    let mut converged = false;
    for _ in 0..1_000_000 {
        let next = apply(&t);
        let total = next.iter().sum::<f64>();
        let next: Vec<f64> = next.iter().map(|v| v / total).collect();
        let delta = next.iter().zip(&t).fold(0.0f64, |d, (p, q)| d.max((p - q).abs()));
        t = next;
        if delta <= 1e-15 {
            converged = true;
            break;
        }
    }
    let image = apply(&t);
    let r = image.iter().sum::<f64>();
    let residual = image.iter().zip(&t).fold(0.0f64, |d, (p, q)| d.max((p - r * q).abs()));
    if !converged && residual > tol {
        return Err(Error::NonConvergence(format!("power iteration residual {residual:e}")));
    }
    if t.iter().any(|&v| v <= 0.0) {
        return Err(Error::NegativeComponent("Perron vector not positive".into()));
    }
    let mut vertex_weights = Vec::with_capacity(g.num_vertices());
    for v in g.vertices() {
        let incoming = g.in_edges(v);
        let w = r * t[incoming[0].0];
        for &e in &incoming[1..] {
            let other = r * t[e.0];
            if (other - w).abs() > 1e-9 * w.abs().max(1.0) {
                return Err(Error::NonConvergence(format!("incoming edges of {v} disagree: {w} vs {other}")));
            }
        }
        vertex_weights.push(w);
    }
    Ok(KmsData { r_g: r, edge_vector: t, vertex_weights, residual })
}

/// `c_n^phi(i) = c_n(i) phi(P_{v_i})` for `n <= nmax`.
pub fn kms_catalan(g: &Graph, table: &CatalanTable, nmax: usize, tol: f64) -> Result<(KmsData, KmsSequences)> {
    if nmax > table.nmax() {
        return Err(Error::InvalidArgument(format!("table depth {} below {nmax}", table.nmax())));
    }
    let data = perron_frobenius(g, tol)?;
    let per_vertex: Vec<Vec<f64>> = table
        .per_vertex
        .iter()
        .zip(&data.vertex_weights)
        .map(|(c, w)| c[..=nmax].iter().map(|cn| cn.to_f64().unwrap_or(f64::INFINITY) * w).collect())
        .collect();
    let totals = (0..=nmax).map(|n| per_vertex.iter().map(|row| row[n]).sum()).collect();
    Ok((data, KmsSequences { per_vertex, totals }))
}
