//! Trigonometric approximations to indicator functions: Vaaler polynomials
//! for intervals (with the Fejér-weighted error majorant) and the triangle
//! kernel underlying the gamma <= delta comparison.

pub mod vaaler;

use std::fmt;

use crate::vdcsets::CosinePolynomial;

pub use vaaler::{product_indicator_error, vaaler_build, vaaler_eval, VaalerPolynomial};

#[derive(Debug, Clone, PartialEq)]
pub enum ApproxError {
    /// The analytic tail bound of the triangle coefficients beyond Mmax
    /// exceeds the requested tolerance.
    TailTooLarge { bound: f64, tol: f64 },
}

impl fmt::Display for ApproxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ApproxError::TailTooLarge { bound, tol } => {
                write!(f, "triangle coefficient tail {bound} exceeds tolerance {tol}")
            }
        }
    }
}

impl std::error::Error for ApproxError {}

/// Fourier coefficient of f(x) = max(0, 1 - ||x||/eps):
/// eps * (sin(pi m eps)/(pi m eps))^2 for m != 0 and eps at m = 0.
/// Nonnegative for every m (the Fejér square).
pub fn triangle_fourier(eps: f64, m: i64) -> f64 {
    assert!(eps > 0.0 && eps <= 0.5, "eps must lie in (0, 1/2]");
    if m == 0 {
        return eps;
    }
    let t = std::f64::consts::PI * m as f64 * eps;
    let s = t.sin() / t;
    eps * s * s
}

/// The triangle kernel with its coefficient function.
#[derive(Copy, Clone, Debug)]
pub struct TriangleKernel {
    pub epsilon: f64,
}

impl TriangleKernel {
    pub fn new(epsilon: f64) -> TriangleKernel {
        assert!(epsilon > 0.0 && epsilon <= 0.5);
        TriangleKernel { epsilon }
    }

    pub fn coeff(&self, m: i64) -> f64 {
        triangle_fourier(self.epsilon, m)
    }

    /// f(x) = max(0, 1 - ||x||/eps) directly.
    pub fn value(&self, x: f64) -> f64 {
        let d = (x - x.round()).abs();
        (1.0 - d / self.epsilon).max(0.0)
    }

    /// Partial Fourier sum sum_{|m| <= mmax} f_hat(m) cos(2 pi m x), via a
    /// cosine recurrence (no per-term trig calls).
    pub fn partial_sum(&self, x: f64, mmax: u64) -> f64 {
        let mut acc = self.epsilon;
        let theta = 2.0 * std::f64::consts::PI * x;
        let phi = std::f64::consts::PI * self.epsilon;
        // cos(m theta) and sin(m phi) by Chebyshev-style recurrences.
        let (ct, st) = (theta.cos(), phi.sin());
        let cp = phi.cos();
        let mut c_prev = 1.0; // cos(0)
        let mut c_cur = ct; // cos(theta)
        let mut s_prev = 0.0; // sin(0)
        let mut s_cur = st; // sin(phi)
        let inv = 1.0 / (std::f64::consts::PI * std::f64::consts::PI * self.epsilon);
        for m in 1..=mmax {
            let mf = m as f64;
            let coeff = s_cur * s_cur * inv / (mf * mf);
            acc += 2.0 * coeff * c_cur;
            let c_next = 2.0 * ct * c_cur - c_prev;
            c_prev = c_cur;
            c_cur = c_next;
            // sin((m+1) phi) = 2 cos(phi) sin(m phi) - sin((m-1) phi)
            let s_next = 2.0 * cp * s_cur - s_prev;
            s_prev = s_cur;
            s_cur = s_next;
        }
        acc
    }

    /// Bound on sum_{|m| > mmax} f_hat(m): each term is at most
    /// 1/(pi^2 eps m^2), so the tail is below 2/(pi^2 eps mmax).
    pub fn tail_bound(&self, mmax: u64) -> f64 {
        2.0 / (std::f64::consts::PI.powi(2) * self.epsilon * mmax as f64)
    }
}

/// Truncated evaluation of g(xi) = sum_{|m| <= mmax} f_hat(m) T(m xi) for a
/// nonnegative cosine polynomial T with T(0) = 1.
///
/// Every term is nonnegative, so the returned partial sum is a certified
/// lower bound on g(xi) at any truncation; in particular the m = 0 term
/// alone gives g(xi) >= eps. `tail_tol` bounds the truncation error of the
/// returned value (the coefficients decay like 1/(eps m^2), so tolerances
/// below ~1e-9 are not reachable by summation).
pub fn g_lower_bound_check(
    t_poly: &CosinePolynomial,
    eps: f64,
    xi: &[f64],
    mmax: u64,
    tail_tol: f64,
) -> Result<f64, ApproxError> {
    assert_eq!(xi.len(), t_poly.dim);
    let kernel = TriangleKernel::new(eps);
    let tail = kernel.tail_bound(mmax);
    if tail > tail_tol {
        return Err(ApproxError::TailTooLarge { bound: tail, tol: tail_tol });
    }
    // T(m xi) for m = 0.. via per-frequency Chebyshev recurrences.
    let k = t_poly.terms.len();
    let mut cos_prev = vec![1.0f64; k];
    let mut cos_cur = vec![0.0f64; k];
    let mut step = vec![0.0f64; k];
    for (j, (h, _)) in t_poly.terms.iter().enumerate() {
        let dot: f64 = h.iter().zip(xi).map(|(&hc, &xc)| hc as f64 * xc).sum();
        let ang = 2.0 * std::f64::consts::PI * (dot - dot.round());
        step[j] = ang.cos();
        cos_cur[j] = step[j];
    }
    let t_at = |cosv: &[f64]| -> f64 {
        let mut acc = t_poly.a0;
        for (j, (_, a)) in t_poly.terms.iter().enumerate() {
            acc += a * cosv[j];
        }
        acc
    };

    let mut g = kernel.coeff(0) * t_at(&cos_prev); // m = 0: all cosines 1
    for m in 1..=mmax {
        let tm = t_at(&cos_cur);
        g += 2.0 * kernel.coeff(m as i64) * tm;
        for j in 0..k {
            let next = 2.0 * step[j] * cos_cur[j] - cos_prev[j];
            cos_prev[j] = cos_cur[j];
            cos_cur[j] = next;
        }
    }
    Ok(g)
}
