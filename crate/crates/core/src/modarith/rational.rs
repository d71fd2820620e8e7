//! Rational approximation by continued fractions on the 128-bit fixed-point
//! quantization of the target. Convergents are exact (u128 Euclid), which
//! keeps them drift-free up to denominators ~2^63.

use std::fmt;

use super::frac::Frac128;
use crate::hp::Dd;

/// A reduced rational a/b with the achieved approximation error.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct RationalApprox {
    pub a: i64,
    pub b: u64,
    pub err: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModArithError {
    /// No continued-fraction convergent lands in the required denominator
    /// window; per the governing lemma this indicates N below threshold.
    NoAdmissibleDenominator { lo: f64, hi: f64, found: Option<u64> },
    HypothesisViolated(String),
}

impl fmt::Display for ModArithError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModArithError::NoAdmissibleDenominator { lo, hi, found } => write!(
                f,
                "no convergent denominator in [{lo}, {hi}] (first candidate {found:?})"
            ),
            ModArithError::HypothesisViolated(m) => write!(f, "hypothesis violated: {m}"),
        }
    }
}

impl std::error::Error for ModArithError {}

/// Continued-fraction convergents p/q of x = num/2^128, ascending q.
/// Stops when q would exceed `q_limit` or the expansion terminates.
pub fn convergents(x: Frac128, q_limit: u64) -> Vec<(i64, u64)> {
    let mut out: Vec<(i64, u64)> = Vec::new();
    let num = x.0;
    // x < 1 so a0 = 0; seed the recurrence with p/q = 0/1 and 1/0.
    let (mut p0, mut q0): (u128, u128) = (1, 0);
    let (mut p1, mut q1): (u128, u128) = (0, 1);
    out.push((0, 1));
    if num == 0 {
        return out;
    }
    // First partial quotient: floor(2^128 / num), done without overflow.
    let mut r_prev = num;
    let mut a = num.wrapping_neg() / num + 1;
    let mut r = num.wrapping_neg() % num; // 2^128 mod num
    loop {
        let p2 = match a.checked_mul(p1).and_then(|v| v.checked_add(p0)) {
            Some(v) => v,
            None => break,
        };
        let q2 = match a.checked_mul(q1).and_then(|v| v.checked_add(q0)) {
            Some(v) => v,
            None => break,
        };
        if q2 > q_limit as u128 || p2 > i64::MAX as u128 {
            break;
        }
        out.push((p2 as i64, q2 as u64));
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        if r == 0 {
            break;
        }
        a = r_prev / r;
        let nr = r_prev % r;
        r_prev = r;
        r = nr;
    }
    out
}

fn approx_err(x: Frac128, a: i64, b: u64) -> f64 {
    // |x - a/b| computed in double-double.
    let d = x.to_dd().sub(Dd::from_ratio(a, b));
    d.abs().value()
}

/// Dirichlet approximation: a/b with 1 <= b <= bmax and
/// |xi - a/b| <= 1/(b (bmax + 1)), found as the last convergent with
/// admissible denominator.
pub fn dirichlet_approx(xi: f64, bmax: u64) -> RationalApprox {
    assert!(bmax >= 1);
    let ip = xi.floor();
    let frac = Frac128::from_f64(xi);
    let conv = convergents(frac, bmax);
    let &(p, q) = conv.last().expect("0/1 always present");
    let a = p + (ip as i64) * q as i64;
    RationalApprox { a, b: q, err: approx_err(frac, p, q) }
}

/// Constructive medium-range approximation: the first convergent of
/// xi*alpha with denominator b >= N^{2 rho}; checks b <= N^{k - 2 rho}.
///
/// Validated hypotheses: k >= 2, rho (k+3) < 1, |xi*alpha| > N^{3 rho - k}.
/// The upper range |xi*alpha| <= N^{rho - theta_r} involves theta_r, which is
/// not an argument here; it remains the caller's obligation.
pub fn medium_range_approx(
    xialpha: f64,
    n: f64,
    k: u32,
    rho: f64,
) -> Result<RationalApprox, ModArithError> {
    if k < 2 {
        return Err(ModArithError::HypothesisViolated(format!(
            "polynomial degree k = {k} must be >= 2"
        )));
    }
    if !(rho > 0.0 && rho * (k as f64 + 3.0) < 1.0) {
        return Err(ModArithError::HypothesisViolated(format!(
            "rho = {rho} violates 0 < rho < 1/(k+3) with k = {k}"
        )));
    }
    let lo_mag = n.powf(3.0 * rho - k as f64);
    if xialpha.abs() <= lo_mag {
        return Err(ModArithError::HypothesisViolated(format!(
            "|xi*alpha| = {} must exceed N^(3 rho - k) = {lo_mag}",
            xialpha.abs()
        )));
    }
    let b_lo = n.powf(2.0 * rho);
    let b_hi = n.powf(k as f64 - 2.0 * rho);
    let x = xialpha.abs();
    let ip = x.floor();
    let frac = Frac128::from_f64(x);
    let limit = if b_hi >= u64::MAX as f64 { u64::MAX } else { b_hi.ceil() as u64 };
    let conv = convergents(frac, limit);
    let picked = conv.iter().find(|&&(_, q)| q as f64 >= b_lo);
    match picked {
        Some(&(p, q)) if (q as f64) <= b_hi => {
            let mut a = p + (ip as i64) * q as i64;
            let err = approx_err(frac, p, q);
            if xialpha < 0.0 {
                a = -a;
            }
            Ok(RationalApprox { a, b: q, err })
        }
        other => Err(ModArithError::NoAdmissibleDenominator {
            lo: b_lo,
            hi: b_hi,
            found: other.map(|&(_, q)| q),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirichlet_sqrt2() {
        let r = dirichlet_approx(std::f64::consts::SQRT_2, 5);
        assert_eq!((r.a, r.b), (7, 5));
    }

    #[test]
    fn dirichlet_exact_rational() {
        let r = dirichlet_approx(0.5, 10);
        assert_eq!((r.a, r.b), (1, 2));
        assert_eq!(r.err, 0.0);

        let r = dirichlet_approx(0.0, 3);
        assert_eq!((r.a, r.b), (0, 1));
    }

    #[test]
    fn dirichlet_bound_holds() {
        // ||b xi|| <= 1/(bmax+1) for the returned denominator.
        for i in 1..200u64 {
            let xi = (i as f64 * 0.017_324_619).fract();
            let bmax = 1 + (i % 40);
            let r = dirichlet_approx(xi, bmax);
            assert!(r.b >= 1 && r.b <= bmax);
            let dist = Frac128::from_f64(xi).mul_int_mod1(r.b).dist_to_z();
            assert!(
                dist <= 1.0 / (bmax as f64 + 1.0) + 1e-18,
                "xi={xi} bmax={bmax} b={} dist={dist}",
                r.b
            );
        }
    }

    #[test]
    fn medium_range_examples() {
        // 0.4 = 2/5 with window [100^0.2, 100^1.8]
        let r = medium_range_approx(0.4, 100.0, 2, 0.1).unwrap();
        assert_eq!((r.a, r.b), (2, 5));

        // 1/7 with window [49^0.1, 49^2.9]
        let r = medium_range_approx(1.0 / 7.0, 49.0, 3, 0.05).unwrap();
        assert_eq!((r.a, r.b), (1, 7));

        // Golden-ratio tail: some Fibonacci denominator in [10^0.8, ...]
        let phi = (1.0 + 5f64.sqrt()) / 2.0 - 1.0;
        let r = medium_range_approx(phi, 1e4, 2, 0.1).unwrap();
        assert!(r.b >= 7 && (r.b as f64) <= 1e4f64.powf(1.8));
        assert!(r.err <= 1.0 / (r.b as f64 * r.b as f64));
    }

    #[test]
    fn medium_range_hypothesis_checks() {
        assert!(medium_range_approx(0.4, 100.0, 1, 0.1).is_err());
        assert!(medium_range_approx(0.4, 100.0, 2, 0.3).is_err());
        assert!(medium_range_approx(1e-9, 100.0, 2, 0.1).is_err());
    }

    #[test]
    fn convergent_error_bound() {
        // every convergent satisfies |x - p/q| <= 1/q^2
        let x = Frac128::from_f64(std::f64::consts::PI - 3.0);
        for (p, q) in convergents(x, 1 << 20) {
            if q > 1 {
                let err = (x.to_f64() - p as f64 / q as f64).abs();
                assert!(err <= 1.0 / (q as f64 * q as f64) + 1e-18);
            }
        }
    }
}
