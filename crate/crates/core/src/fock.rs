//! Truncated path space of the edge shift and the vacuum moments of
//! `T + T*`, where `T = sum_e T_e` and `T_e` prepends `e` to an admissible word.
//!
//! Level 0 holds one length-zero path per vertex, `T_e` sends the path at
//! `v` to the word `e` when `t(e) = v`, and the vacuum is the sum of the
//! level-0 vectors.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Vertex};

/// Default cap on the number of basis words.
pub const DEFAULT_BASIS_CAP: usize = 2_000_000;

/// Admissible words of length `1..=L` in lexicographic order of edge ids,
/// preceded by the `N` length-zero paths in vertex order.
#[derive(Clone, Debug)]
pub struct FockBasis {
    /// Empty for the first `N` positions.
    words: Vec<Vec<EdgeId>>,
    offsets: Vec<usize>,
    index: HashMap<Vec<EdgeId>, usize>,
    /// `(e, position of e w)` for each admissible prefix `e` of word `w`.
    children: Vec<Vec<(EdgeId, usize)>>,
    /// Position of the word with its first letter removed; a single edge
    /// `e` maps to the length-zero path at `t(e)`.
    parent: Vec<Option<usize>>,
}

impl FockBasis {
    pub fn max_level(&self) -> usize {
        self.offsets.len() - 2
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn level(&self, k: usize) -> &[Vec<EdgeId>] {
        &self.words[self.offsets[k]..self.offsets[k + 1]]
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn word(&self, pos: usize) -> &[EdgeId] {
        &self.words[pos]
    }

    /// Position of a nonempty admissible word.
    pub fn position(&self, word: &[EdgeId]) -> Option<usize> {
        self.index.get(word).copied()
    }

    /// Position of the length-zero path at `v`.
    pub fn vertex_position(&self, v: Vertex) -> usize {
        v.index()
    }

    pub fn num_vertices(&self) -> usize {
        self.offsets[1]
    }
}

/// Builds all admissible words up to length `max_level`, failing once more
/// than `cap` words would be stored.
pub fn build_fock_basis(g: &Graph, max_level: usize, cap: usize) -> Result<FockBasis> {
    let am = g.edge_matrix();
    let nv = g.num_vertices();
    if nv > cap {
        return Err(Error::BudgetExceeded(format!("Fock basis exceeds {cap} words at level 0")));
    }
    let mut words: Vec<Vec<EdgeId>> = vec![Vec::new(); nv];
    let mut offsets = vec![0, nv];
    for k in 0..max_level {
        let mut level = Vec::new();
        for e in g.edge_ids() {
            if k == 0 {
                level.push(vec![e]);
            } else {
                for w in &words[offsets[k]..offsets[k + 1]] {
                    if am.get(e, w[0]) {
                        let mut word = Vec::with_capacity(k + 1);
                        word.push(e);
                        word.extend_from_slice(w);
                        level.push(word);
                    }
                }
            }
            if words.len() + level.len() > cap {
                return Err(Error::BudgetExceeded(format!("Fock basis exceeds {cap} words at level {}", k + 1)));
            }
        }
        words.extend(level);
        offsets.push(words.len());
    }
    let index: HashMap<Vec<EdgeId>, usize> =
        words.iter().enumerate().skip(nv).map(|(p, w)| (w.clone(), p)).collect();
    let mut children = vec![Vec::new(); words.len()];
    let mut parent = vec![None; words.len()];
    for (p, w) in words.iter().enumerate() {
        if let Some((&e, tail)) = w.split_first() {
            let q = if tail.is_empty() { g.target(e).index() } else { index[tail] };
            parent[p] = Some(q);
            children[q].push((e, p));
        }
    }
    Ok(FockBasis { words, offsets, index, children, parent })
}

/// One application of `T + T*` to exact coordinates.
fn step(basis: &FockBasis, v: &[BigUint]) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); v.len()];
    for (p, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for &(_, q) in &basis.children[p] {
            out[q] += c;
        }
        if let Some(q) = basis.parent[p] {
            out[q] += c;
        }
    }
    out
}

/// `<(T + T*)^{2n} vacuum, vacuum>` on the basis truncated at `max_level`.
pub fn fock_moment_truncated(g: &Graph, n: usize, max_level: usize, cap: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidArgument("moment identity needs n >= 1".into()));
    }
    let basis = build_fock_basis(g, max_level, cap)?;
    let nv = basis.num_vertices();
    let mut v = vec![BigUint::zero(); basis.len()];
    for c in &mut v[..nv] {
        *c = BigUint::from(1u32);
    }
    for _ in 0..2 * n {
        v = step(&basis, &v);
    }
    Ok(v[..nv].iter().sum())
}

/// The vacuum moment of order `2n`, with the basis truncated at level `n`.
pub fn fock_moment(g: &Graph, n: usize) -> Result<BigUint> {
    fock_moment_truncated(g, n, n, DEFAULT_BASIS_CAP)
}

/// Dense 0/1 matrix of `T_e` on the truncated basis; `m[row][col]`.
pub fn creation_matrix(basis: &FockBasis, e: EdgeId) -> Vec<Vec<u8>> {
    let mut m = vec![vec![0u8; basis.len()]; basis.len()];
    for (col, kids) in basis.children.iter().enumerate() {
        for &(f, row) in kids {
            if f == e {
                m[row][col] = 1;
            }
        }
    }
    m
}

/// Dense 0/1 matrix of `T_e*` on the truncated basis.
pub fn annihilation_matrix(basis: &FockBasis, e: EdgeId) -> Vec<Vec<u8>> {
    let mut m = vec![vec![0u8; basis.len()]; basis.len()];
    for (col, w) in basis.words.iter().enumerate() {
        if w.first() == Some(&e) {
            let row = basis.parent[col].expect("nonempty word has a tail");
            m[row][col] = 1;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn g3_levels() {
        let g = fixtures::g3();
        let b = build_fock_basis(&g, 2, 100).unwrap();
        assert_eq!(b.level_sizes(), vec![2, 3, 5]);
        assert_eq!(b.position(&[EdgeId(1), EdgeId(2)]), Some(7));
        let names: Vec<String> =
            b.level(2).iter().map(|w| w.iter().map(|&e| g.edge_name(e)).collect::<Vec<_>>().join("")).collect();
        assert_eq!(names, ["e1e1", "e1e2", "e2e3", "e3e1", "e3e2"]);
    }

    #[test]
    fn full_shift_levels() {
        let b = build_fock_basis(&fixtures::loops(3), 4, 1000).unwrap();
        assert_eq!(b.vertex_position(Vertex(1)), 0);
        assert_eq!(b.level_sizes(), vec![1, 3, 9, 27, 81]);
    }

    #[test]
    fn cap_enforced() {
        let err = build_fock_basis(&fixtures::loops(3), 6, 100).unwrap_err();
        assert_eq!(err.code(), "E-GUARD");
    }

    #[test]
    fn moments() {
        let g = fixtures::g3();
        assert_eq!(fock_moment(&g, 1).unwrap(), BigUint::from(3u32));
        assert_eq!(fock_moment(&g, 2).unwrap(), BigUint::from(10u32));
        assert_eq!(fock_moment(&g, 3).unwrap(), BigUint::from(42u32));
        assert_eq!(fock_moment(&fixtures::loops(2), 4).unwrap(), BigUint::from(224u32));
        assert!(fock_moment(&g, 0).is_err());
    }

    #[test]
    fn truncation_level_is_enough() {
        let g = fixtures::g3();
        for n in 1..=5 {
            assert_eq!(
                fock_moment_truncated(&g, n, n, 10_000).unwrap(),
                fock_moment_truncated(&g, n, n + 1, 10_000).unwrap()
            );
        }
    }

    #[test]
    fn creation_and_annihilation_are_transposes() {
        let g = fixtures::g3();
        let b = build_fock_basis(&g, 3, 1000).unwrap();
        for e in g.edge_ids() {
            let t = creation_matrix(&b, e);
            let ts = annihilation_matrix(&b, e);
            for (i, row) in t.iter().enumerate() {
                for (j, &x) in row.iter().enumerate() {
                    assert_eq!(x, ts[j][i]);
                }
            }
        }
    }
}
