use nalgebra::{DMatrix, DVector};

use super::{
    branch_residual, eval_partial_sum, finish, fold_determinant, incoming, ratio_big, tat, RadiusMethod,
    RadiusResult,
};
use crate::dp::{catalan_table, CatalanTable};
use crate::error::{Error, Result};
use crate::graph::Graph;

const MIN_RATIO_DEPTH: usize = 32;
const INIT_DEPTH: usize = 256;

fn check_depth(table: &CatalanTable) -> Result<usize> {
    let n = table.nmax();
    if n < MIN_RATIO_DEPTH {
        return Err(Error::InvalidArgument(format!(
            "ratio estimate needs table depth >= {MIN_RATIO_DEPTH}, got {n}"
        )));
    }
    Ok(n)
}

/// `c_{n-1} / c_n` at the deepest `n` of the table. The error is `O(1/n)`,
/// and the estimate approaches the radius from above.
pub fn radius_ratio(table: &CatalanTable) -> Result<f64> {
    let n = check_depth(table)?;
    Ok(ratio_big(&table.totals[n - 1], &table.totals[n]))
}

/// `2 r_{2m} - r_m` with `r_k = c_k / c_{k+1}`, cancelling the `1/n` term.
pub fn radius_ratio_richardson(table: &CatalanTable) -> Result<f64> {
    let n = check_depth(table)?;
    let m = (n - 1) / 2;
    let r = |k: usize| ratio_big(&table.totals[k], &table.totals[k + 1]);
    Ok(2.0 * r(2 * m) - r(m))
}

/// The ratio estimate packaged as a [`RadiusResult`], with `t` from the
/// truncated series. Residuals are only as small as the estimate is good.
pub fn radius_ratio_estimate(g: &Graph, depth: usize) -> Result<RadiusResult> {
    let table = catalan_table(g, depth);
    let x = radius_ratio(&table)?;
    let t = series_point(&table, x);
    Ok(finish(g, t, x, RadiusMethod::Ratio, 0.0))
}

/// `t_i = x f_i(x)` from the truncated series.
fn series_point(table: &CatalanTable, x: f64) -> Vec<f64> {
    table.per_vertex.iter().map(|c| x * eval_partial_sum(c, x)).collect()
}

fn require_irreducible(g: &Graph) -> Result<()> {
    if g.is_irreducible() {
        Ok(())
    } else {
        Err(Error::NotIrreducible)
    }
}

fn augmented(a: &DMatrix<f64>, z: &[f64]) -> Vec<f64> {
    let (t, x) = z.split_at(z.len() - 1);
    let mut r = branch_residual(a, t, x[0]);
    r.push(fold_determinant(a, t, x[0]));
    r
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn central_jacobian(a: &DMatrix<f64>, z: &[f64]) -> DMatrix<f64> {
    let n = z.len();
    let mut jac = DMatrix::zeros(n, n);
    let mut zp = z.to_vec();
    for k in 0..n {
        let h = 1e-6 * z[k].abs().max(1e-6);
        zp[k] = z[k] + h;
        let fp = augmented(a, &zp);
        zp[k] = z[k] - h;
        let fm = augmented(a, &zp);
        zp[k] = z[k];
        for i in 0..n {
            jac[(i, k)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    jac
}

/// Solves the branch equations together with `det(t A_G t - x) = 0` by damped
/// Newton. Without `init`, starts from the Richardson ratio estimate and the
/// truncated series evaluated there.
pub fn radius_newton(g: &Graph, init: Option<(Vec<f64>, f64)>, tol: f64) -> Result<RadiusResult> {
    require_irreducible(g)?;
    let (t0, x0) = match init {
        Some((t, x)) => {
            if t.len() != g.num_vertices() {
                return Err(Error::InvalidArgument(format!("initial t has {} entries", t.len())));
            }
            (t, x)
        }
        None => {
            let table = catalan_table(g, INIT_DEPTH);
            let x = radius_ratio_richardson(&table)?;
            (series_point(&table, x), x)
        }
    };
    let a = g.vertex_matrix().to_f64();
    let mut z: Vec<f64> = t0.into_iter().chain(std::iter::once(x0)).collect();
    if z.iter().any(|&c| !(c > 0.0)) {
        return Err(Error::NegativeComponent("initial point outside the positive cone".into()));
    }
    let mut f = augmented(&a, &z);
    for _ in 0..200 {
        let jac = central_jacobian(&a, &z);
        let rhs = DVector::from_iterator(z.len(), f.iter().map(|v| -v));
        let step = jac
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::NonConvergence("singular Newton matrix".into()))?;
        let f_norm = norm_inf(&f);
        let mut lambda = 1.0;
        let (next, f_next) = loop {
            let cand: Vec<f64> = z.iter().zip(step.iter()).map(|(zi, si)| zi + lambda * si).collect();
            if cand.iter().all(|&c| c > 0.0) {
                let fc = augmented(&a, &cand);
                if norm_inf(&fc) < f_norm || lambda < 1e-3 {
                    break (cand, fc);
                }
            } else if lambda < 1e-10 {
                return Err(Error::NegativeComponent(format!("Newton step left the positive cone near x = {}", z[z.len() - 1])));
            }
            lambda *= 0.5;
        };
        let moved = norm_inf(&next.iter().zip(&z).map(|(p, q)| p - q).collect::<Vec<_>>());
        z = next;
        f = f_next;
        if moved <= 1e-15 * (1.0 + norm_inf(&z)) || norm_inf(&f) == 0.0 {
            break;
        }
    }
    if !(norm_inf(&f) <= tol) {
        return Err(Error::NonConvergence(format!("Newton residual {:e} above {tol:e}", norm_inf(&f))));
    }
    let x = z.pop().expect("x component");
    let result = finish(g, z, x, RadiusMethod::Newton, tol);
    let identity_gap = result.residuals[result.residuals.len() - 1];
    if !(identity_gap.abs() <= tol) {
        return Err(Error::NonConvergence(format!("eigenvector identity off by {identity_gap:e}")));
    }
    Ok(result)
}

/// Step control for [`radius_continuation`].
#[derive(Clone, Copy, Debug)]
pub struct ContinuationOptions {
    pub initial_step: f64,
    pub max_step: f64,
    pub min_step: f64,
    pub max_steps: usize,
    pub tol: f64,
}

impl Default for ContinuationOptions {
    fn default() -> Self {
        ContinuationOptions { initial_step: 1e-2, max_step: 5e-2, min_step: 1e-13, max_steps: 100_000, tol: 1e-8 }
    }
}

/// Jacobian of the branch equations in `(t, x)`, `N x (N+1)`.
fn branch_jacobian(a: &DMatrix<f64>, y: &[f64]) -> DMatrix<f64> {
    let n = y.len() - 1;
    let t = &y[..n];
    let inc = incoming(a, t);
    DMatrix::from_fn(n, n + 1, |i, k| {
        if k == n {
            1.0
        } else {
            let diag = if i == k { inc[i] - 1.0 } else { 0.0 };
            diag + t[i] * a[(k, i)]
        }
    })
}

fn bordered(a: &DMatrix<f64>, y: &[f64], tau: &[f64]) -> DMatrix<f64> {
    let n = y.len();
    let jac = branch_jacobian(a, y);
    DMatrix::from_fn(n, n, |i, k| if i + 1 < n { jac[(i, k)] } else { tau[k] })
}

/// Unit tangent at `y`, oriented along `prev`.
fn tangent(a: &DMatrix<f64>, y: &[f64], prev: &[f64]) -> Option<Vec<f64>> {
    let n = y.len();
    let mut rhs = DVector::zeros(n);
    rhs[n - 1] = 1.0;
    let tau = bordered(a, y, prev).lu().solve(&rhs)?;
    let norm = tau.norm();
    Some(tau.iter().map(|v| v / norm).collect())
}

/// Newton corrector on the hyperplane through `pred` orthogonal to `tau`.
fn correct(a: &DMatrix<f64>, pred: &[f64], tau: &[f64]) -> Option<Vec<f64>> {
    let n = pred.len();
    let mut y = pred.to_vec();
    for _ in 0..12 {
        let mut g = branch_residual(a, &y[..n - 1], y[n - 1]);
        g.push(y.iter().zip(pred).zip(tau).map(|((yi, pi), ti)| (yi - pi) * ti).sum());
        let rhs = DVector::from_iterator(n, g.iter().map(|v| -v));
        let step = bordered(a, &y, tau).lu().solve(&rhs)?;
        for (yi, si) in y.iter_mut().zip(step.iter()) {
            *yi += si;
        }
        if !y.iter().all(|v| v.is_finite()) {
            return None;
        }
        if step.amax() <= 1e-14 * (1.0 + norm_inf(&y)) {
            let res = norm_inf(&branch_residual(a, &y[..n - 1], y[n - 1]));
            return (res <= 1e-13).then_some(y);
        }
    }
    None
}

fn advance(y: &[f64], tau: &[f64], h: f64) -> Vec<f64> {
    y.iter().zip(tau).map(|(yi, ti)| yi + h * ti).collect()
}

/// Follows the branch from `(t, x) = (0, 0)` by pseudo-arclength
/// predictor-corrector until the `x` component of the tangent changes sign,
/// then bisects on the arclength to locate the fold.
pub fn radius_continuation(g: &Graph, opts: ContinuationOptions) -> Result<RadiusResult> {
    require_irreducible(g)?;
    let a = g.vertex_matrix().to_f64();
    let n = g.num_vertices();
    let mut y = vec![0.0; n + 1];
    let start = 1.0 / ((n + 1) as f64).sqrt();
    let mut tau = vec![start; n + 1];
    let mut h = opts.initial_step;
    let x_of = |y: &[f64]| y[n];
    for _ in 0..opts.max_steps {
        if h < opts.min_step {
            return Err(Error::StepUnderflow { x: x_of(&y) });
        }
        let Some(y_new) = correct(&a, &advance(&y, &tau, h), &tau) else {
            h *= 0.5;
            continue;
        };
        let Some(tau_new) = tangent(&a, &y_new, &tau) else {
            h *= 0.5;
            continue;
        };
        let turn: f64 = tau.iter().zip(&tau_new).map(|(p, q)| p * q).sum();
        if turn < 0.95 {
            h *= 0.5;
            continue;
        }
        if y_new[..n].iter().any(|&c| c <= 0.0) {
            return Err(Error::NegativeComponent(format!("branch left the positive cone at x = {}", y_new[n])));
        }
        if tau_new[n] <= 0.0 {
            let fold = bisect_fold(&a, &y, &tau, h, opts.min_step)?;
            let x0 = fold[n];
            let t = fold[..n].to_vec();
            return Ok(finish(g, t, x0, RadiusMethod::Continuation, opts.tol));
        }
        y = y_new;
        tau = tau_new;
        h = (h * 1.5).min(opts.max_step);
    }
    Err(Error::NonConvergence(format!("no fold within {} continuation steps", opts.max_steps)))
}

fn bisect_fold(a: &DMatrix<f64>, y: &[f64], tau: &[f64], h: f64, min_step: f64) -> Result<Vec<f64>> {
    let n = y.len() - 1;
    let (mut lo, mut hi) = (0.0, h);
    let mut best = y.to_vec();
    while hi - lo > 1e-15 * (1.0 + h) {
        let mid = 0.5 * (lo + hi);
        let point = correct(a, &advance(y, tau, mid), tau);
        let along = point.as_ref().and_then(|p| tangent(a, p, tau).map(|tn| (p.clone(), tn)));
        match along {
            Some((p, tn)) if tn[n] > 0.0 => {
                lo = mid;
                best = p;
            }
            Some((p, _)) => {
                hi = mid;
                if p[n] > best[n] {
                    best = p;
                }
            }
            None if hi - lo < min_step => return Err(Error::StepUnderflow { x: best[n] }),
            None => hi = mid,
        }
    }
    Ok(best)
}

/// Whether `t A_G t - x` has a trivial kernel, or a one-dimensional kernel
/// whose spanning vector has coordinate sum bounded away from zero.
pub fn check_condition_c(g: &Graph, t: &[f64], x: f64, tol: f64) -> bool {
    let a = g.vertex_matrix().to_f64();
    let n = t.len();
    let m = tat(&a, t) - DMatrix::identity(n, n) * x;
    let svd = m.svd(false, true);
    let smax = svd.singular_values.max();
    let threshold = tol * smax.max(1.0);
    let kernel: Vec<usize> = (0..n).filter(|&k| svd.singular_values[k] <= threshold).collect();
    match kernel.as_slice() {
        [] => true,
        [k] => {
            let v_t = svd.v_t.expect("requested V^T");
            let sum: f64 = v_t.row(*k).iter().sum();
            sum.abs() > 1e-6
        }
        _ => false,
    }
}
