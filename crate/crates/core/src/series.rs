//! Truncated power series over exact rationals, and the generating-function
//! identities they must satisfy.

use std::ops::{Add, Mul, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dp::CatalanTable;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// `sum_{k <= order} coeffs[k] x^k`, everything above `order` unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl PowerSeries {
    /// Panics on an empty coefficient list.
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        PowerSeries { coeffs }
    }

    pub fn from_integers<'a>(coeffs: impl IntoIterator<Item = &'a BigUint>) -> Self {
        PowerSeries::new(
            coeffs.into_iter().map(|c| BigRational::from_integer(BigInt::from(c.clone()))).collect(),
        )
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries { coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        let mut s = PowerSeries::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        PowerSeries::constant(BigRational::one(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, value: BigRational) {
        self.coeffs[k] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order());
        PowerSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// `x * self`, same order (the top coefficient drops out).
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(BigRational::zero());
        coeffs.extend_from_slice(&self.coeffs[..self.order()]);
        PowerSeries { coeffs }
    }

    /// `self / x`, losing one order; the constant term must vanish.
    pub fn shift_down(&self) -> Self {
        assert!(self.coeffs[0].is_zero(), "constant term must vanish");
        assert!(self.order() >= 1);
        PowerSeries { coeffs: self.coeffs[1..].to_vec() }
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Self {
        let c0 = &self.coeffs[0];
        assert!(!c0.is_zero(), "series is not invertible");
        let inv0 = c0.recip();
        let mut out = vec![inv0.clone()];
        for k in 1..=self.order() {
            let s: BigRational = (1..=k).map(|j| &self.coeffs[j] * &out[k - j]).sum();
            out.push(-s * &inv0);
        }
        PowerSeries { coeffs: out }
    }

    /// Square root with constant term 1 by Newton's iteration
    /// `y <- (y + a / y) / 2`; each step doubles the number of correct terms.
    pub fn sqrt(&self) -> Self {
        assert!(self.coeffs[0].is_one(), "sqrt needs constant term 1");
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let order = self.order();
        let mut y = PowerSeries::one(order);
        let mut correct = 1usize;
        while correct <= order {
            y = (&y + &(self * &y.inverse())).scale(&half);
            correct *= 2;
        }
        y
    }

    /// Floating-point value at `x` (partial sum).
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Coefficients as `"p/q"` strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| format!("{}/{}", c.numer(), c.denom())).collect()
    }

    pub fn from_strings<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::Parse("empty series".into()));
        }
        let coeffs = items
            .iter()
            .map(|s| {
                let s = s.as_ref();
                let parsed = match s.split_once('/') {
                    Some((p, q)) => p.trim().parse::<BigInt>().ok().zip(q.trim().parse::<BigInt>().ok()),
                    None => s.trim().parse::<BigInt>().ok().map(|p| (p, BigInt::one())),
                };
                match parsed {
                    Some((_, q)) if q.is_zero() => Err(Error::Parse(format!("zero denominator in {s:?}"))),
                    Some((p, q)) => Ok(BigRational::new(p, q)),
                    None => Err(Error::Parse(format!("bad rational {s:?}"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PowerSeries { coeffs })
    }

    pub fn max_abs_coeff(&self) -> BigRational {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_else(BigRational::zero)
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;

    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        PowerSeries { coeffs: (0..=order).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect() }
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;

    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        PowerSeries { coeffs: (0..=order).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect() }
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;

    /// Truncated Cauchy product at the smaller order.
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|k| {
                (0..=k)
                    .filter(|&j| !self.coeffs[j].is_zero())
                    .map(|j| &self.coeffs[j] * &rhs.coeffs[k - j])
                    .sum()
            })
            .collect();
        PowerSeries { coeffs }
    }
}

/// Per-vertex generating functions and their sum, truncated at the table depth.
pub fn series_from_table(t: &CatalanTable) -> (Vec<PowerSeries>, PowerSeries) {
    let per_vertex: Vec<PowerSeries> = t.per_vertex.iter().map(PowerSeries::from_integers).collect();
    let total = PowerSeries::from_integers(&t.totals);
    (per_vertex, total)
}

/// `sum_j A_G(j, i) f_j` for each `i`.
fn incoming_sums(series: &[PowerSeries], g: &Graph) -> Vec<PowerSeries> {
    let a = g.vertex_matrix();
    let order = series[0].order();
    (0..series.len())
        .map(|i| {
            (0..series.len()).filter(|&j| a.at(j, i) > 0).fold(PowerSeries::zero(order), |acc, j| {
                &acc + &series[j].scale(&rat(a.at(j, i) as i64))
            })
        })
        .collect()
}

/// `r_i = f_i - 1 - x f_i sum_j A_G(j, i) f_j`, truncated at the common order.
pub fn functional_equation_residual(series: &[PowerSeries], g: &Graph) -> Result<Vec<PowerSeries>> {
    if series.len() != g.num_vertices() {
        return Err(Error::InvalidArgument(format!(
            "{} series for {} vertices",
            series.len(),
            g.num_vertices()
        )));
    }
    let order = series[0].order();
    if let Some(s) = series.iter().find(|s| s.order() != order) {
        return Err(Error::OrderMismatch(order, s.order()));
    }
    let sums = incoming_sums(series, g);
    let one = PowerSeries::one(order);
    Ok(series
        .iter()
        .zip(&sums)
        .map(|(f, s)| &(f - &one) - &(f * s).shift_up())
        .collect())
}

/// Solves `f_i = 1 + x f_i sum_j A_G(j, i) f_j` in the series ring.
/// Coefficient `k + 1` of the right side only involves coefficients up to `k`,
/// so the unknowns are filled in one degree at a time.
pub fn solve_functional_equations(g: &Graph, order: usize) -> Vec<PowerSeries> {
    let nv = g.num_vertices();
    let a = g.vertex_matrix();
    let mut f: Vec<Vec<BigRational>> = vec![vec![BigRational::one()]; nv];
    let mut sums: Vec<Vec<BigRational>> = vec![Vec::with_capacity(order); nv];
    for k in 0..order {
        for (i, sum) in sums.iter_mut().enumerate() {
            let s = (0..nv)
                .filter(|&j| a.at(j, i) > 0)
                .fold(BigRational::zero(), |acc, j| acc + &f[j][k] * rat(a.at(j, i) as i64));
            sum.push(s);
        }
        for i in 0..nv {
            let next = (0..=k).fold(BigRational::zero(), |acc, m| acc + &f[i][m] * &sums[i][k - m]);
            f[i].push(next);
        }
    }
    f.into_iter().map(PowerSeries::new).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    /// One vertex with `N` loops.
    G1,
    /// Complete graph on `N` vertices.
    G2,
}

/// `(1 - sqrt(1 - 4Nx)) / (2Nx)`, the per-vertex series of both families.
pub fn loop_closed_form(n: u64, order: usize) -> PowerSeries {
    let mut radicand = PowerSeries::one(order + 1);
    radicand.set_coeff(1, rat(-4 * n as i64));
    let root = radicand.sqrt();
    let numer = &PowerSeries::one(order + 1) - &root;
    numer.shift_down().scale(&BigRational::new(BigInt::one(), BigInt::from(2 * n)))
}

/// Compares the recurrence output for the `kind` family on `n` vertices/loops
/// with the closed form, coefficient by coefficient.
pub fn closed_form_check(kind: ClosedForm, n: u64, order: usize) -> bool {
    use crate::dp::catalan_table;
    use crate::fixtures;

    let f1 = loop_closed_form(n, order);
    match kind {
        ClosedForm::G1 => {
            let (per_vertex, total) = series_from_table(&catalan_table(&fixtures::loops(n as usize), order));
            per_vertex[0] == f1 && total == f1
        }
        ClosedForm::G2 => {
            let (per_vertex, total) =
                series_from_table(&catalan_table(&fixtures::complete(n as usize), order));
            per_vertex.iter().all(|f| *f == f1) && total == f1.scale(&rat(n as i64))
        }
    }
}
