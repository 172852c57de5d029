//! Floating-point side: radius of convergence, condition (C), contour
//! extraction of coefficients, and Perron-Frobenius weighted counts.
//!
//! With `t_i = x f_i(x)` the generating-function equations become
//!
//! ```text
//! x = t_i - t_i * sum_j A_G(j, i) t_j        (i = 1..N)
//! ```
//!
//! and the radius `x0` is the fold of this branch, where additionally
//! `det(t A_G t - x0) = 0` with `(t A_G t)_{ij} = t_i A_G(i, j) t_j`.

mod contour;
mod kms;
mod radius;

pub use contour::{cauchy_coefficient, contour_all, contour_coefficient, default_contour_params, solve_w};
pub use kms::{kms_catalan, perron_frobenius, KmsData, KmsSequences};
pub use radius::{
    check_condition_c, radius_continuation, radius_newton, radius_ratio, radius_ratio_estimate,
    radius_ratio_richardson, ContinuationOptions,
};

use nalgebra::{DMatrix, DVector};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RadiusMethod {
    Newton,
    Continuation,
    Ratio,
}

/// A solution point of the radius problem with its diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct RadiusResult {
    pub x0: f64,
    /// `t_i = x0 f_i(x0)`.
    pub t: Vec<f64>,
    /// Eigenvector of `t A_G t` for `x0`, normalized to unit sum.
    pub s: Vec<f64>,
    /// `N` branch residuals, then the determinant, then `x0 - sum t_i s_i / 2`.
    pub residuals: Vec<f64>,
    pub condition_c_ok: bool,
    pub method: RadiusMethod,
    pub tol: f64,
}

impl RadiusResult {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()))
    }
}

/// `A_G` transposed times `t`: entry `i` is `sum_j A_G(j, i) t_j`.
fn incoming(a: &DMatrix<f64>, t: &[f64]) -> Vec<f64> {
    let n = t.len();
    (0..n).map(|i| (0..n).map(|j| a[(j, i)] * t[j]).sum()).collect()
}

/// `x - t_i + t_i sum_j A_G(j, i) t_j`.
fn branch_residual(a: &DMatrix<f64>, t: &[f64], x: f64) -> Vec<f64> {
    let inc = incoming(a, t);
    t.iter().zip(&inc).map(|(ti, ci)| x - ti + ti * ci).collect()
}

fn tat(a: &DMatrix<f64>, t: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(t.len(), t.len(), |i, j| t[i] * a[(i, j)] * t[j])
}

/// `det(t A_G t - x)`; nalgebra uses explicit formulas up to 3x3 and LU beyond.
fn fold_determinant(a: &DMatrix<f64>, t: &[f64], x: f64) -> f64 {
    let n = t.len();
    (tat(a, t) - DMatrix::identity(n, n) * x).determinant()
}

/// Right singular vector of the smallest singular value, and that value.
fn null_vector(m: &DMatrix<f64>) -> (DVector<f64>, f64) {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let (k, sigma) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (k, &s)| if s < best.1 { (k, s) } else { best });
    (v_t.row(k).transpose(), sigma)
}

/// Unit-sum eigenvector of `t A_G t` at `x`, if its coordinate sum is usable.
fn unit_sum_eigenvector(a: &DMatrix<f64>, t: &[f64], x: f64) -> Option<Vec<f64>> {
    let n = t.len();
    let (v, _) = null_vector(&(tat(a, t) - DMatrix::identity(n, n) * x));
    let sum: f64 = v.iter().sum();
    if sum.abs() < 1e-12 {
        return None;
    }
    Some(v.iter().map(|c| c / sum).collect())
}

/// Assembles a result from a solution point, computing `s` and all residuals.
fn finish(g: &Graph, t: Vec<f64>, x0: f64, method: RadiusMethod, tol: f64) -> RadiusResult {
    let a = g.vertex_matrix().to_f64();
    let mut residuals = branch_residual(&a, &t, x0);
    residuals.push(fold_determinant(&a, &t, x0));
    let s = unit_sum_eigenvector(&a, &t, x0).unwrap_or_else(|| vec![f64::NAN; t.len()]);
    let half: f64 = 0.5 * t.iter().zip(&s).map(|(ti, si)| ti * si).sum::<f64>();
    residuals.push(x0 - half);
    let condition_c_ok = check_condition_c(g, &t, x0, tol.max(1e-9));
    RadiusResult { x0, t, s, residuals, condition_c_ok, method, tol }
}

/// Natural log of a positive big integer.
fn ln_big(c: &BigUint) -> f64 {
    let bits = c.bits();
    if bits <= 1000 {
        return c.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    (c >> shift).to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `a / b` in double precision without overflowing on huge operands.
fn ratio_big(a: &BigUint, b: &BigUint) -> f64 {
    let shift = a.bits().max(b.bits()).saturating_sub(64);
    let a = (a >> shift).to_f64().unwrap_or(f64::NAN);
    let b = (b >> shift).to_f64().unwrap_or(f64::NAN);
    a / b
}

/// Partial sum `sum_n c_n x^n` over a column of exact coefficients.
fn eval_partial_sum(coeffs: &[BigUint], x: f64) -> f64 {
    let lx = x.ln();
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.bits() > 0)
        .map(|(n, c)| (ln_big(c) + n as f64 * lx).exp())
        .sum()
}
