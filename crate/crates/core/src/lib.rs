//! Catalan numbers generalized to finite directed graphs.
//!
//! For a graph `G` the numbers `c_n^G(v)` count balanced words in the
//! Cuntz-Krieger generators of `G` that multiply to the vertex projection
//! `P_v`. This crate computes them exactly and checks the count four
//! independent ways:
//!
//! * [`word`]: reduction of generator words and enumeration of Catalan words;
//! * [`combinatorics`]: labeled Dyck paths and rooted plane trees;
//! * [`fock`]: vacuum moments of `T + T*` on the sub-Fock space of the edge shift;
//! * [`dp`]: the convolution recurrence, the production path.
//!
//! [`series`] verifies the generating-function equations with exact rationals
//! and [`analytic`] solves the floating-point problems: radius of
//! convergence, contour coefficient extraction and KMS-weighted counts.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod combinatorics;
pub mod dp;
pub mod error;
pub mod fixtures;
pub mod fock;
pub mod graph;
pub mod series;
pub mod word;

pub use error::{Error, Result};
pub use graph::{parse_graph, EdgeId, EdgeMatrix, Graph, Vertex, VertexMatrix};

/// Limits for exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest half-length `n` accepted.
    pub max_n: usize,
    /// Largest number of objects materialized in one call.
    pub max_objects: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_n: 6, max_objects: 1_000_000 }
    }
}

impl Budget {
    /// Object cap only, no limit on `n`.
    pub fn objects(max_objects: usize) -> Self {
        Budget { max_n: usize::MAX, max_objects }
    }

    pub(crate) fn check_n(&self, n: usize) -> Result<()> {
        if n > self.max_n {
            return Err(Error::BudgetExceeded(format!("n = {n} exceeds enumeration limit {}", self.max_n)));
        }
        Ok(())
    }

    pub(crate) fn check_objects(&self, count: usize) -> Result<()> {
        if count > self.max_objects {
            return Err(Error::BudgetExceeded(format!("more than {} objects", self.max_objects)));
        }
        Ok(())
    }
}
