//! Forward differencing, the Weyl differencing inequality in exhaustive
//! form, sums of minima, and the shifted-product correlation weight.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use super::e_unit;
use crate::modarith::RationalApprox;

#[derive(Debug, Clone, PartialEq)]
pub enum ExpSumError {
    InvalidCase(String),
    HypothesisViolated(String),
    ConstraintViolated(Vec<String>),
    IndexOutOfRange { index: usize, len: usize },
}

impl fmt::Display for ExpSumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpSumError::InvalidCase(m) => write!(f, "invalid case: {m}"),
            ExpSumError::HypothesisViolated(m) => write!(f, "hypothesis violated: {m}"),
            ExpSumError::ConstraintViolated(v) => {
                write!(f, "parameter constraints violated: {}", v.join("; "))
            }
            ExpSumError::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for table of length {len}")
            }
        }
    }
}

impl std::error::Error for ExpSumError {}

/// Steps d_1, ..., d_l of an iterated forward difference, each nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceSpec {
    steps: Vec<i64>,
}

impl DifferenceSpec {
    pub fn new(steps: Vec<i64>) -> Result<DifferenceSpec, ExpSumError> {
        if steps.is_empty() {
            return Err(ExpSumError::InvalidCase("difference spec needs at least one step".into()));
        }
        if steps.iter().any(|&d| d == 0) {
            return Err(ExpSumError::InvalidCase("difference steps must be nonzero".into()));
        }
        Ok(DifferenceSpec { steps })
    }

    pub fn steps(&self) -> &[i64] {
        &self.steps
    }
}

/// Delta_{d_l, ..., d_1}(f)(x) by direct recursion (2^l evaluations).
pub fn forward_difference<F: Fn(f64) -> f64>(f: &F, spec: &DifferenceSpec, x: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, steps: &[i64], x: f64) -> f64 {
        match steps.split_last() {
            None => f(x),
            Some((&d, rest)) => rec(f, rest, x + d as f64) - rec(f, rest, x),
        }
    }
    rec(f, &spec.steps, x)
}

fn delta_at<F: Fn(i64) -> f64>(f: &F, steps: &[i64], n: i64) -> f64 {
    match steps.split_last() {
        None => f(n),
        Some((&d, rest)) => delta_at(f, rest, n + d) - delta_at(f, rest, n),
    }
}

/// Both sides of the Weyl differencing inequality
///
///   |sum_{n=N1+1}^{N2} e(f(n))|^{2^l}
///     <= (2N)^{2^l - l - 1} sum_{|d_1|<N} ... sum_{|d_l|<N}
///            sum_{n in I(d)} e(Delta_{d_l,...,d_1} f(n)),
///
/// with I(d) the interval intersection produced by the inductive proof:
/// I() = [N1+1, N2], I(d_j, ...) = I_prev intersect (I_prev - d_j).
/// Exhaustive mode: N <= 60, l <= 4.
pub fn weyl_inequality_check<F>(f: &F, n1: i64, n2: i64, n: i64, ell: u32) -> (f64, f64)
where
    F: Fn(i64) -> f64 + Sync,
{
    assert!(ell >= 1 && ell <= 4, "exhaustive mode handles l <= 4");
    assert!(n1 < n2 && n2 - n1 <= n && n <= 60);

    let mut lhs_sum = Complex64::new(0.0, 0.0);
    for m in (n1 + 1)..=n2 {
        lhs_sum += e_unit(f(m));
    }
    let lhs = lhs_sum.norm().powi(1 << ell);

    let side = 2 * n - 1; // d ranges over -(N-1)..=(N-1)
    let count = (side as u64).pow(ell);
    let total: Complex64 = (0..count)
        .into_par_iter()
        .map(|code| {
            let mut c = code;
            let mut steps = [0i64; 4];
            for s in steps.iter_mut().take(ell as usize) {
                *s = (c % side as u64) as i64 - (n - 1);
                c /= side as u64;
            }
            let steps = &steps[..ell as usize];
            // interval intersection
            let (mut lo, mut hi) = (n1 + 1, n2);
            for &d in steps {
                lo = lo.max(lo - d);
                hi = hi.min(hi - d);
                if lo > hi {
                    break;
                }
            }
            let mut acc = Complex64::new(0.0, 0.0);
            if lo <= hi {
                for m in lo..=hi {
                    acc += e_unit(delta_at(f, steps, m));
                }
            }
            acc
        })
        .reduce(|| Complex64::new(0.0, 0.0), |a, b| a + b);

    let factor = (2.0 * n as f64).powi((1i32 << ell) - ell as i32 - 1);
    (lhs, factor * total.re)
}

/// lhs = sum_{h=1}^{H} min(N, 1/||alpha h||), with ||alpha h|| = 0
/// contributing N; rhs is the classical bound
/// (b + H + N + HN/b) max(1, log b) for any |alpha - a/b| <= 1/b^2.
pub fn minima_sum(
    alpha: f64,
    h_max: u64,
    n: u64,
    approx: &RationalApprox,
) -> Result<(f64, f64), ExpSumError> {
    let b = approx.b as f64;
    if (alpha - approx.a as f64 / b).abs() > 1.0 / (b * b) + 1e-15 {
        return Err(ExpSumError::HypothesisViolated(format!(
            "|alpha - {}/{}| exceeds 1/b^2",
            approx.a, approx.b
        )));
    }
    let mut lhs = 0.0;
    for h in 1..=h_max {
        let x = alpha * h as f64;
        let dist = (x - x.round()).abs();
        lhs += if dist == 0.0 { n as f64 } else { (n as f64).min(1.0 / dist) };
    }
    let rhs = (b + h_max as f64 + n as f64 + h_max as f64 * n as f64 / b) * (b.ln().max(1.0));
    Ok((lhs, rhs))
}

/// Psi(n, y_1..y_s): the product of psi over n shifted by every subset sum
/// of the y_i (2^s factors including the empty subset).
pub fn psi_correlate(psi: &[f64], n: usize, ys: &[usize]) -> Result<f64, ExpSumError> {
    assert!(ys.len() <= 20, "subset enumeration limited to s <= 20");
    let mut prod = 1.0;
    for mask in 0u32..(1u32 << ys.len()) {
        let mut idx = n;
        for (i, &y) in ys.iter().enumerate() {
            if mask >> i & 1 == 1 {
                idx += y;
            }
        }
        let v = psi
            .get(idx)
            .ok_or(ExpSumError::IndexOutOfRange { index: idx, len: psi.len() })?;
        prod *= v;
    }
    Ok(prod)
}
