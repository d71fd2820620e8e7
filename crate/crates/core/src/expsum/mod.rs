//! Exponential sums over integer ranges, computed exactly where the inputs
//! permit (128-bit fractional phases, certified floors) and with
//! deterministic parallel reduction everywhere.

pub mod bounds;
pub mod vaughan;
pub mod weyl;

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::hp::Dd;
use crate::modarith::Frac128;
use crate::pseudo::{CoreError, PseudoPolynomial};

pub use bounds::{predicted_exponent, vdc_bound, BoundCase};
pub use vaughan::{vaughan_decompose, vaughan_params, vaughan_params_raw, VaughanParams, VaughanReport};
pub use weyl::{forward_difference, minima_sum, psi_correlate, weyl_inequality_check, DifferenceSpec};

/// Which bound formula a report was compared against.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ExponentCase {
    LargeInt,
    MediumInt,
    LargePrime,
    MediumPrime,
    None,
}

impl fmt::Display for ExponentCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ExponentCase::LargeInt => "large-int",
            ExponentCase::MediumInt => "medium-int",
            ExponentCase::LargePrime => "large-prime",
            ExponentCase::MediumPrime => "medium-prime",
            ExponentCase::None => "none",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct ExpSumReport {
    pub value: Complex64,
    pub modulus: f64,
    pub terms: u64,
    /// Sum of |w(n)| over the range; equals `terms` for unit weights.
    pub weight_l1: f64,
    pub kahan_error_bound: f64,
    pub predicted_bound: Option<f64>,
    pub exponent_case: ExponentCase,
}

impl ExpSumReport {
    pub fn from_sum(value: Complex64, terms: u64, weight_l1: f64) -> ExpSumReport {
        // Pairwise reduction error: eps * depth * sum|w|.
        let depth = (terms.max(2) as f64).log2() + 4.0;
        ExpSumReport {
            value,
            modulus: value.norm(),
            terms,
            weight_l1,
            kahan_error_bound: f64::EPSILON * depth * weight_l1,
            predicted_bound: None,
            exponent_case: ExponentCase::None,
        }
    }

    pub fn with_prediction(mut self, case: ExponentCase, bound: f64) -> ExpSumReport {
        self.exponent_case = case;
        self.predicted_bound = Some(bound);
        self
    }

    pub fn csv_header() -> &'static str {
        "case,N,beta_hex,value_re,value_im,modulus,predicted_bound,ratio"
    }

    pub fn to_csv_row(&self, n: u64, beta: Frac128) -> String {
        let (pb, ratio) = match self.predicted_bound {
            Some(b) if b > 0.0 => (format!("{b}"), format!("{}", self.modulus / b)),
            Some(b) => (format!("{b}"), String::new()),
            None => (String::new(), String::new()),
        };
        format!(
            "{},{},{},{},{},{},{},{}",
            self.exponent_case,
            n,
            beta.to_hex(),
            self.value.re,
            self.value.im,
            self.modulus,
            pb,
            ratio
        )
    }
}

/// e(x) = exp(2 pi i x) for an exact 128-bit fraction, with quadrant
/// reduction so quarter values come out exact.
pub fn e(x: Frac128) -> Complex64 {
    let k = ((x.0.wrapping_add(1u128 << 125)) >> 126) as u32 & 3;
    let t_bits = x.0.wrapping_sub((k as u128) << 126);
    let t = (t_bits as i128) as f64 * 2.938735877055719e-39; // 2^-128
    rotate(k, t)
}

/// e(x) for an f64 phase; x is reduced mod 1 first.
pub fn e_unit(x: f64) -> Complex64 {
    let x = x - x.floor();
    let k4 = (4.0 * x).round();
    let t = x - k4 / 4.0;
    rotate(k4 as u32 & 3, t)
}

#[inline]
fn rotate(k: u32, t: f64) -> Complex64 {
    let (s, c) = (2.0 * std::f64::consts::PI * t).sin_cos();
    match k {
        0 => Complex64::new(c, s),
        1 => Complex64::new(-s, c),
        2 => Complex64::new(-c, -s),
        _ => Complex64::new(s, -c),
    }
}

/// Fixed chunk size for deterministic parallel reduction.
pub(crate) const CHUNK: u64 = 1 << 16;

/// Deterministic chunked pairwise sum of `term(n)` over the inclusive range
/// [lo, hi]. Chunk boundaries depend only on n, partial sums are reduced in
/// index order, so the result is bit-identical for any thread count.
pub(crate) fn sum_chunked<E, F>(lo: u64, hi: u64, term: &F) -> Result<(Complex64, f64), E>
where
    F: Fn(u64) -> Result<(Complex64, f64), E> + Sync,
    E: Send,
{
    if lo > hi {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    let starts: Vec<u64> = {
        let mut v = Vec::new();
        let mut s = lo;
        loop {
            v.push(s);
            match s.checked_add(CHUNK) {
                Some(next) if next <= hi => s = next,
                _ => break,
            }
        }
        v
    };
    let partials: Result<Vec<(Complex64, f64)>, E> = starts
        .par_iter()
        .map(|&s| pairwise(s, (s + (CHUNK - 1)).min(hi), term))
        .collect();
    Ok(tree_reduce(&partials?))
}

fn pairwise<E, F>(lo: u64, hi: u64, term: &F) -> Result<(Complex64, f64), E>
where
    F: Fn(u64) -> Result<(Complex64, f64), E>,
{
    if hi - lo < 32 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut w = 0.0;
        for n in lo..=hi {
            let (t, a) = term(n)?;
            acc += t;
            w += a;
        }
        return Ok((acc, w));
    }
    let mid = lo + (hi - lo) / 2;
    let (a, wa) = pairwise(lo, mid, term)?;
    let (b, wb) = pairwise(mid + 1, hi, term)?;
    Ok((a + b, wa + wb))
}

fn tree_reduce(v: &[(Complex64, f64)]) -> (Complex64, f64) {
    match v.len() {
        0 => (Complex64::new(0.0, 0.0), 0.0),
        1 => v[0],
        n => {
            let (a, wa) = tree_reduce(&v[..n / 2]);
            let (b, wb) = tree_reduce(&v[n / 2..]);
            (a + b, wa + wb)
        }
    }
}

/// How the phase beta*f(n) is formed.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PhaseMode {
    /// beta * f(n) mod 1 through double-double evaluation of f.
    Continuous,
    /// beta * floor(f(n)) mod 1, exact via `mul_int_mod1`.
    Floor,
}

/// Sum of w(n) e(beta * f(n)) (or the floor variant) over [lo, hi].
pub fn direct_sum(
    f: &PseudoPolynomial,
    beta: Frac128,
    lo: u64,
    hi: u64,
    weights: Option<&(dyn Fn(u64) -> f64 + Sync)>,
    mode: PhaseMode,
    ambiguity_tol: f64,
) -> Result<ExpSumReport, CoreError> {
    assert!(lo >= 1 && lo <= hi);
    let beta_dd = beta.to_dd();
    let term = |n: u64| -> Result<(Complex64, f64), CoreError> {
        let ch = match mode {
            PhaseMode::Floor => {
                let m = f.floor_exact(n, ambiguity_tol)?;
                e(beta.mul_int_mod1_signed(m))
            }
            PhaseMode::Continuous => {
                let v = f.eval_at(n);
                e_unit(beta_dd.mul(v.value).fract().value())
            }
        };
        let w = weights.map_or(1.0, |g| g(n));
        Ok((ch * w, w.abs()))
    };
    let (value, l1) = sum_chunked(lo, hi, &term)?;
    Ok(ExpSumReport::from_sum(value, hi - lo + 1, l1))
}

/// Sum of e(alpha n) over n in (n1, n2], with the standard linear-phase
/// bound min(n2 - n1, 1/||alpha||).
///
/// Closed ratio form, except that near-coherent sums (||alpha|| * length
/// small) are added directly: the ratio form loses absolute accuracy there.
/// Both branches use exact Frac128 phase arguments.
pub fn geometric_sum(alpha: Frac128, n1: i64, n2: i64) -> (Complex64, f64) {
    assert!(n1 < n2);
    let len = (n2 - n1) as u64;
    let dist = alpha.dist_to_z();
    let bound = if dist > 0.0 { (len as f64).min(1.0 / dist) } else { len as f64 };
    if dist == 0.0 {
        return (Complex64::new(len as f64, 0.0), bound);
    }
    if (len as f64) * dist <= 4.0 && len <= (1 << 22) || len <= 4096 {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in (n1 + 1)..=n2 {
            acc += e(alpha.mul_int_mod1_signed(j));
        }
        return (acc, bound);
    }
    let first = e(alpha.mul_int_mod1_signed(n1 + 1));
    let num = e(alpha.mul_int_mod1_signed(n2 - n1)) - Complex64::new(1.0, 0.0);
    let den = e(alpha) - Complex64::new(1.0, 0.0);
    (first * num / den, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudo::{parse_pseudo, DEFAULT_AMBIGUITY_TOL};

    #[test]
    fn character_quarter_points_exact() {
        assert_eq!(e(Frac128::ZERO), Complex64::new(1.0, 0.0));
        assert_eq!(e(Frac128::HALF), Complex64::new(-1.0, 0.0));
        assert_eq!(e(Frac128::from_f64(0.25)), Complex64::new(0.0, 1.0));
        assert_eq!(e_unit(0.75), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn direct_sum_full_period_cancels() {
        let f = parse_pseudo("x").unwrap();
        let r = direct_sum(
            &f,
            Frac128::from_f64(0.25),
            1,
            4,
            None,
            PhaseMode::Floor,
            DEFAULT_AMBIGUITY_TOL,
        )
        .unwrap();
        assert!(r.modulus < 1e-14, "modulus={}", r.modulus);

        let r = direct_sum(
            &f,
            Frac128::HALF,
            1,
            3,
            None,
            PhaseMode::Floor,
            DEFAULT_AMBIGUITY_TOL,
        )
        .unwrap();
        assert!((r.value.re + 1.0).abs() < 1e-14 && r.value.im.abs() < 1e-14);
    }

    #[test]
    fn direct_sum_floor_phases() {
        // floors of n^2.5 for n = 1..4 are 1, 5, 15, 32;
        // at beta = 1/2 the characters are -1, -1, -1, +1.
        let f = parse_pseudo("x^2.5").unwrap();
        let r = direct_sum(
            &f,
            Frac128::HALF,
            1,
            4,
            None,
            PhaseMode::Floor,
            DEFAULT_AMBIGUITY_TOL,
        )
        .unwrap();
        assert!((r.value.re + 2.0).abs() < 1e-14 && r.value.im.abs() < 1e-14);
        assert_eq!(r.terms, 4);
        assert!(r.modulus <= r.weight_l1 + r.kahan_error_bound);
    }

    #[test]
    fn direct_sum_modes_agree_on_integer_valued_f() {
        let f = parse_pseudo("3*x^2 + x").unwrap();
        let beta = Frac128::from_f64(0.37);
        let a = direct_sum(&f, beta, 1, 500, None, PhaseMode::Floor, DEFAULT_AMBIGUITY_TOL)
            .unwrap();
        let b = direct_sum(&f, beta, 1, 500, None, PhaseMode::Continuous, DEFAULT_AMBIGUITY_TOL)
            .unwrap();
        assert!((a.value - b.value).norm() < 1e-9);
    }

    #[test]
    fn geometric_examples() {
        let (v, b) = geometric_sum(Frac128::HALF, 0, 3);
        assert!((v.re + 1.0).abs() < 1e-14 && v.im.abs() < 1e-14);
        assert_eq!(b, 2.0);

        let (v, b) = geometric_sum(Frac128::ZERO, 0, 5);
        assert_eq!(v, Complex64::new(5.0, 0.0));
        assert_eq!(b, 5.0);

        let (v, b) = geometric_sum(Frac128::from_f64(0.25), 0, 4);
        assert!(v.norm() < 1e-14);
        assert_eq!(b, 4.0);
    }

    #[test]
    fn geometric_closed_form_matches_direct() {
        for i in 0..200u64 {
            let alpha = Frac128::from_f64((i as f64 * 0.7237 + 0.011).fract());
            let len = 200 + (i % 800) as i64 * 5;
            let (v, bound) = geometric_sum(alpha, 0, len);
            let mut direct = Complex64::new(0.0, 0.0);
            for j in 1..=len {
                direct += e(alpha.mul_int_mod1_signed(j));
            }
            assert!((v - direct).norm() < 1e-10, "i={i} diff={}", (v - direct).norm());
            assert!(v.norm() <= bound + 1e-9);
        }
    }
}
