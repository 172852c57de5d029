use std::f64::consts::PI;
use std::thread;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::radius::radius_ratio;
use crate::dp::catalan_table;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

const FIXED_POINT_TOL: f64 = 1e-13;
const MAX_ITER: usize = 200_000;
const BLOWUP: f64 = 1e8;

/// `F_i(w) = (w_i + 1) sum_j A_G(j, i) (w_j + 1)`.
fn big_f(a: &DMatrix<f64>, w: &[Complex64]) -> Vec<Complex64> {
    let n = w.len();
    (0..n)
        .map(|i| {
            let s: Complex64 = (0..n).map(|j| (w[j] + 1.0) * a[(j, i)]).sum();
            (w[i] + 1.0) * s
        })
        .collect()
}

fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().fold(0.0f64, |m, c| m.max(c.norm()))
}

fn solve_w_with(a: &DMatrix<f64>, z: Complex64, tol: f64) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    for _ in 0..MAX_ITER {
        let next: Vec<Complex64> = big_f(a, &w).into_iter().map(|f| z * f).collect();
        let delta = next.iter().zip(&w).fold(0.0f64, |m, (p, q)| m.max((p - q).norm()));
        w = next;
        if !w.iter().all(|c| c.is_finite()) || max_abs(&w) > BLOWUP {
            return Err(Error::Divergence(z.norm()));
        }
        if delta <= tol {
            let residual = w.iter().zip(big_f(a, &w)).fold(0.0f64, |m, (wi, fi)| m.max((wi - z * fi).norm()));
            if residual <= tol.max(1e-15) * 10.0 {
                return Ok(w);
            }
        }
    }
    Err(Error::Divergence(z.norm()))
}

/// Principal solution of `w = z F(w)` by iteration from `w = 0`; `w_i = f_i - 1`.
pub fn solve_w(g: &Graph, z: Complex64, tol: f64) -> Result<Vec<Complex64>> {
    solve_w_with(&g.vertex_matrix().to_f64(), z, tol)
}

/// `dw/dz` from `(I - z J_F(w)) w' = F(w)`.
fn derivative(a: &DMatrix<f64>, z: Complex64, w: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = w.len();
    let inc: Vec<Complex64> = (0..n).map(|i| (0..n).map(|j| (w[j] + 1.0) * a[(j, i)]).sum()).collect();
    let m = DMatrix::from_fn(n, n, |i, k| {
        let jf = if i == k { inc[i] } else { Complex64::new(0.0, 0.0) } + (w[i] + 1.0) * a[(k, i)];
        let id = if i == k { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
        id - z * jf
    });
    let sv = m.clone().singular_values();
    let (smin, smax) = sv.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &s| (lo.min(s), hi.max(s)));
    if !(smin > smax * 1e-12) {
        return Err(Error::IllConditioned(format!("derivative system at |z| = {} has condition {:e}", z.norm(), smax / smin)));
    }
    let rhs = DVector::from_vec(big_f(a, w));
    let d = m.lu().solve(&rhs).ok_or_else(|| Error::IllConditioned("singular derivative system".into()))?;
    Ok(d.iter().copied().collect())
}

/// Default `(rho, M)`: half the ratio estimate and `64 (n + 1)` samples.
pub fn default_contour_params(g: &Graph, n: usize) -> Result<(f64, usize)> {
    let bound = radius_ratio(&catalan_table(g, 64))?;
    Ok((0.5 * bound, 64 * (n + 1)))
}

fn check_args(g: &Graph, n: usize, rho: f64, samples: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("contour formula needs n >= 1".into()));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample point".into()));
    }
    let bound = radius_ratio(&catalan_table(g, 64))?;
    if !(rho > 0.0 && rho < bound) {
        return Err(Error::RhoOutOfRange { rho, bound });
    }
    Ok(())
}

/// Evaluates `per_sample` at the `M` points `rho e^{2 pi i k / M}` on scoped
/// threads and returns the values in index order.
fn sample_circle<T, F>(rho: f64, samples: usize, per_sample: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(Complex64) -> Result<T> + Sync,
{
    let workers = thread::available_parallelism().map(|p| p.get()).unwrap_or(1).min(samples);
    let chunk = samples.div_ceil(workers);
    let point = |k: usize| Complex64::from_polar(rho, 2.0 * PI * k as f64 / samples as f64);
    let parts: Vec<Result<Vec<T>>> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let f = &per_sample;
                s.spawn(move || (w * chunk..((w + 1) * chunk).min(samples)).map(|k| f(point(k))).collect())
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sample worker panicked")).collect()
    });
    let mut out = Vec::with_capacity(samples);
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

/// The contour formula for every choice of the auxiliary index `j`:
/// entry `j` approximates
/// `(1 / (2 pi i n)) * oint (F_j(w) / w_j)^n w_i'(z) dz` over `|z| = rho`
/// with the `M`-point trapezoid rule, real part.
pub fn contour_all(g: &Graph, n: usize, i: Vertex, rho: f64, samples: usize) -> Result<Vec<f64>> {
    check_args(g, n, rho, samples)?;
    let a = g.vertex_matrix().to_f64();
    let nv = g.num_vertices();
    let terms = sample_circle(rho, samples, |z| {
        let w = solve_w_with(&a, z, FIXED_POINT_TOL)?;
        let dw = derivative(&a, z, &w)?;
        let f = big_f(&a, &w);
        Ok((0..nv).map(|j| (f[j] / w[j]).powu(n as u32) * dw[i.index()] * z).collect::<Vec<_>>())
    })?;
    let scale = 1.0 / (n as f64 * samples as f64);
    Ok((0..nv).map(|j| terms.iter().map(|t| t[j]).sum::<Complex64>().re * scale).collect())
}

/// `c_n(i)` from the contour formula with auxiliary index `j`.
pub fn contour_coefficient(g: &Graph, n: usize, i: Vertex, j: Vertex, rho: f64, samples: usize) -> Result<f64> {
    if j.0 == 0 || j.0 > g.num_vertices() {
        return Err(Error::InvalidArgument(format!("no vertex {j}")));
    }
    Ok(contour_all(g, n, i, rho, samples)?[j.index()])
}

/// Plain Cauchy estimate `(1 / 2 pi i) oint f_i(z) / z^{n+1} dz`.
pub fn cauchy_coefficient(g: &Graph, n: usize, i: Vertex, rho: f64, samples: usize) -> Result<f64> {
    check_args(g, n.max(1), rho, samples)?;
    let a = g.vertex_matrix().to_f64();
    let terms = sample_circle(rho, samples, |z| {
        let w = solve_w_with(&a, z, FIXED_POINT_TOL)?;
        Ok((w[i.index()] + 1.0) / z.powu(n as u32))
    })?;
    Ok(terms.iter().sum::<Complex64>().re / samples as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::eval_partial_sum;
    use crate::fixtures;

    #[test]
    fn w_at_zero() {
        let w = solve_w(&fixtures::g3(), Complex64::new(0.0, 0.0), 1e-10).unwrap();
        assert!(w.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn w_matches_series() {
        let g = fixtures::g3();
        let w = solve_w(&g, Complex64::new(0.05, 0.0), 1e-12).unwrap();
        let t = catalan_table(&g, 80);
        for (wi, c) in w.iter().zip(&t.per_vertex) {
            assert!((wi.re - (eval_partial_sum(c, 0.05) - 1.0)).abs() < 1e-10);
            assert_eq!(wi.im, 0.0);
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let g = fixtures::g3();
        let z = Complex64::new(0.03, 0.07);
        let w = solve_w(&g, z, 1e-12).unwrap();
        let wc = solve_w(&g, z.conj(), 1e-12).unwrap();
        for (p, q) in w.iter().zip(&wc) {
            assert!((p.conj() - q).norm() < 1e-12);
        }
    }

    #[test]
    fn divergence_outside_radius() {
        let err = solve_w(&fixtures::g3(), Complex64::new(0.3, 0.0), 1e-10).unwrap_err();
        assert_eq!(err.code(), "E-SOLVER");
    }

    #[test]
    fn g3_coefficients() {
        let g = fixtures::g3();
        let (rho, m) = default_contour_params(&g, 2).unwrap();
        for j in [Vertex(1), Vertex(2)] {
            assert!((contour_coefficient(&g, 2, Vertex(1), j, rho, m).unwrap() - 7.0).abs() < 1e-6);
            assert!((contour_coefficient(&g, 2, Vertex(2), j, rho, m).unwrap() - 3.0).abs() < 1e-6);
        }
        assert!((cauchy_coefficient(&g, 2, Vertex(1), rho, m).unwrap() - 7.0).abs() < 1e-6);
    }

    #[test]
    fn two_loops_n3() {
        let g = fixtures::loops(2);
        let (rho, m) = default_contour_params(&g, 3).unwrap();
        assert!((contour_coefficient(&g, 3, Vertex(1), Vertex(1), rho, m).unwrap() - 40.0).abs() < 1e-6);
    }

    #[test]
    fn rho_range_checked() {
        let g = fixtures::g3();
        assert!(matches!(contour_coefficient(&g, 2, Vertex(1), Vertex(1), 0.5, 64), Err(Error::RhoOutOfRange { .. })));
        assert!(matches!(contour_coefficient(&g, 2, Vertex(1), Vertex(1), -0.1, 64), Err(Error::RhoOutOfRange { .. })));
    }
}
