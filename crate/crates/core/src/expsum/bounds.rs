//! Saving-exponent and van der Corput bound calculators: closed-form
//! evaluation of the predicted upper bounds, with hypothesis validation.

use super::weyl::ExpSumError;

/// Parameterized bound case. `LargeInt`/`LargePrime` cover the
/// differencing range N^{rho - theta_r} <= |beta| <= N^{1/10};
/// `MediumInt`/`MediumPrime` the partial-summation range; the corollary
/// cases give the fractional-part exponent for floor(n^c + n^k).
#[derive(Clone, Debug, PartialEq)]
pub enum BoundCase {
    LargeInt { k: u32, theta_r: f64 },
    LargePrime { k: u32, theta_r: f64 },
    MediumInt { k: u32, rho: f64 },
    MediumPrime { k: u32, rho: f64 },
    CorollaryInt { c: f64, k: u32 },
    CorollaryPrime { c: f64, k: u32 },
}

/// The saving eta such that the predicted bound is N^{1 - eta} (sum cases)
/// or N^{-eta} (corollary minima).
pub fn predicted_exponent(case: &BoundCase) -> Result<f64, ExpSumError> {
    match *case {
        BoundCase::LargeInt { k, theta_r } => {
            let (kk, ll) = differencing_sizes(k, theta_r)?;
            Ok(1.0 / (8.0 * kk * ll - 4.0 * kk))
        }
        BoundCase::LargePrime { k, theta_r } => {
            let (kk, ll) = differencing_sizes(k, theta_r)?;
            Ok(1.0 / (64.0 * kk * ll.powi(5) - 4.0 * kk))
        }
        BoundCase::MediumInt { k, rho } => {
            medium_hypotheses(k, rho)?;
            Ok(rho * 2f64.powi(1 - k as i32))
        }
        BoundCase::MediumPrime { k, rho } => {
            medium_hypotheses(k, rho)?;
            Ok(rho * 4f64.powi(1 - k as i32))
        }
        BoundCase::CorollaryInt { c, k } => {
            corollary_hypotheses(c, k)?;
            if c > k as f64 {
                Ok(0.5 / (2f64.powi(c.ceil() as i32 + 1) - 1.0))
            } else {
                Ok(1.0 / (2f64.powi(k as i32 - 1) * (k as f64 + 2.0)))
            }
        }
        BoundCase::CorollaryPrime { c, k } => {
            corollary_hypotheses(c, k)?;
            if c > k as f64 {
                Ok(0.5 / (2f64.powi(c.ceil() as i32 + 1) - 1.0))
            } else {
                Ok(1.0 / (4f64.powi(k as i32 - 1) * (k as f64 + 2.0)))
            }
        }
    }
}

fn differencing_sizes(k: u32, theta_r: f64) -> Result<(f64, f64), ExpSumError> {
    let ell = theta_r.floor();
    if theta_r <= 1.0 || theta_r == ell {
        return Err(ExpSumError::InvalidCase(format!(
            "theta_r = {theta_r} must be non-integral and > 1"
        )));
    }
    if k > 30 || ell > 30.0 {
        return Err(ExpSumError::InvalidCase("exponent sizes out of range".into()));
    }
    Ok((2f64.powi(k as i32), 2f64.powi(ell as i32)))
}

fn medium_hypotheses(k: u32, rho: f64) -> Result<(), ExpSumError> {
    if k < 1 || k > 30 {
        return Err(ExpSumError::InvalidCase(format!("polynomial degree k = {k} out of range")));
    }
    if !(rho > 0.0 && rho * (k as f64 + 3.0) < 1.0) {
        return Err(ExpSumError::InvalidCase(format!(
            "rho = {rho} violates rho (k + 3) < 1 with k = {k}"
        )));
    }
    Ok(())
}

fn corollary_hypotheses(c: f64, k: u32) -> Result<(), ExpSumError> {
    if !(c > 1.0) || c.fract() == 0.0 {
        return Err(ExpSumError::InvalidCase(format!(
            "c = {c} must be non-integral and > 1"
        )));
    }
    if k < 1 || c == k as f64 {
        return Err(ExpSumError::InvalidCase(format!("need k >= 1 and c != k (c = {c}, k = {k})")));
    }
    Ok(())
}

/// The three-term van der Corput differencing bound
///
///   X^{1 - 1/K} + X (log^k X / G)^{1/K} + X (G / X^{q+2})^{1/(4KQ - 2K)}
///
/// with K = 2^k, Q = 2^q. The asymptotic hypothesis G = o(X^{q+2}) is
/// replaced by the explicit guard G < X^{q+2} / logfac.
pub fn vdc_bound(x: f64, g: f64, k: u32, q: u32, logfac: f64) -> Result<f64, ExpSumError> {
    assert!(x > 1.0 && g > 0.0 && logfac >= 1.0);
    let growth = x.powf(q as f64 + 2.0);
    if g >= growth / logfac {
        return Err(ExpSumError::HypothesisViolated(format!(
            "G = {g} is not small against X^(q+2) = {growth} (guard factor {logfac})"
        )));
    }
    let kk = 2f64.powi(k as i32);
    let qq = 2f64.powi(q as i32);
    let t1 = x.powf(1.0 - 1.0 / kk);
    let t2 = x * (x.ln().powi(k as i32) / g).powf(1.0 / kk);
    let t3 = x * (g / growth).powf(1.0 / (4.0 * kk * qq - 2.0 * kk));
    Ok(t1 + t2 + t3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_examples() {
        // k=1, theta_r=2.5: K=2, L=4, 8KL-4K = 56.
        let e = predicted_exponent(&BoundCase::LargeInt { k: 1, theta_r: 2.5 }).unwrap();
        assert!((e - 1.0 / 56.0).abs() < 1e-15);

        // rho 2^{1-k} with k=3, rho=0.1.
        let e = predicted_exponent(&BoundCase::MediumInt { k: 3, rho: 0.1 }).unwrap();
        assert!((e - 0.025).abs() < 1e-15);

        // c = 2.5 > k = 1: (1/2) / (2^4 - 1) = 1/30.
        let e = predicted_exponent(&BoundCase::CorollaryInt { c: 2.5, k: 1 }).unwrap();
        assert!((e - 1.0 / 30.0).abs() < 1e-15);

        // prime corollary agrees for c > k.
        let ep = predicted_exponent(&BoundCase::CorollaryPrime { c: 2.5, k: 1 }).unwrap();
        assert_eq!(e, ep);

        // c = 1.5 < k = 3: integers 1/(2^2 * 5), primes 1/(4^2 * 5).
        let ei = predicted_exponent(&BoundCase::CorollaryInt { c: 1.5, k: 3 }).unwrap();
        assert!((ei - 1.0 / 20.0).abs() < 1e-15);
        let ep = predicted_exponent(&BoundCase::CorollaryPrime { c: 1.5, k: 3 }).unwrap();
        assert!((ep - 1.0 / 80.0).abs() < 1e-15);

        // large-prime formula: 64 K L^5 - 4K at k=0, theta=2.5: K=1, L=4.
        let e = predicted_exponent(&BoundCase::LargePrime { k: 0, theta_r: 2.5 }).unwrap();
        assert!((e - 1.0 / (64.0 * 1024.0 - 4.0)).abs() < 1e-15);
    }

    #[test]
    fn exponent_rejects_bad_cases() {
        assert!(predicted_exponent(&BoundCase::MediumInt { k: 2, rho: 0.3 }).is_err());
        assert!(predicted_exponent(&BoundCase::LargeInt { k: 1, theta_r: 3.0 }).is_err());
        assert!(predicted_exponent(&BoundCase::CorollaryInt { c: 2.0, k: 1 }).is_err());
    }

    #[test]
    fn vdc_bound_shapes() {
        // k=0, q=2, G=X^2: third term X * (X^-2)^{1/6}, all finite positive.
        let x = (1u64 << 20) as f64;
        let b = vdc_bound(x, x * x, 0, 2, 2.0).unwrap();
        assert!(b.is_finite() && b > 0.0);

        // K=1 makes the first term X^0 = 1.
        let b = vdc_bound(x, x, 0, 0, 2.0).unwrap();
        assert!(b >= 1.0 + x * (x.ln().powi(0) / x) - 1e-9);

        // G too large is rejected.
        assert!(vdc_bound(100.0, 1e8, 1, 1, 2.0).is_err());
    }

    #[test]
    fn vdc_bound_monotone_second_term() {
        // With G = 1 the middle term dominates: X (log^k X)^{1/K}.
        let x = 1e6;
        let b = vdc_bound(x, 1.0, 2, 1, 2.0).unwrap();
        let mid = x * x.ln().powi(2).powf(0.25);
        assert!(b >= mid);
    }
}
