//! Vaaler's trigonometric approximation to interval indicators.
//!
//! For I = [lo, hi) in [0,1) and degree H, the polynomial is assembled from
//! Vaaler's sawtooth approximation V_H (built on the weight
//! phi(t) = pi t (1 - t) cot(pi t) + t) through the identity
//! chi_I(x) = |I| + psi(lo - x) + psi(x - hi), where psi is the centered
//! sawtooth. The error admits the explicit Fejér majorant
//! (F_H(lo - x) + F_H(x - hi)) / (2H + 2), evaluated here in closed form.

use num_complex::Complex64;

use crate::expsum::e_unit;
use crate::modarith::Frac128;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Degree-H approximation to the indicator of [lo, hi) with its majorant.
#[derive(Clone, Debug)]
pub struct VaalerPolynomial {
    pub lo: f64,
    pub hi: f64,
    pub h_degree: usize,
    /// a_H(h) for h = 1..=H (negative frequencies by conjugation).
    pub main_coeffs: Vec<Complex64>,
    /// C_h = (e(-h lo) + e(-h hi))/2 for h = 0..=H.
    pub majorant_coeffs: Vec<Complex64>,
}

/// Vaaler's interpolation weight, continuous on (0, 1) with phi(0+) = 1,
/// phi(1-) = 0 and 0 <= phi <= 1.
fn phi(t: f64) -> f64 {
    debug_assert!(t > 0.0 && t < 1.0);
    let pt = std::f64::consts::PI * t;
    pt * (1.0 - t) * (pt.cos() / pt.sin()) + t
}

/// Construct the approximation for [lo, hi) at degree H >= 1.
pub fn vaaler_build(lo: f64, hi: f64, h_degree: usize) -> VaalerPolynomial {
    assert!(h_degree >= 1);
    assert!((0.0..1.0).contains(&lo) && lo < hi && hi <= 1.0);
    let np1 = (h_degree + 1) as f64;
    let mut main = Vec::with_capacity(h_degree);
    let mut maj = Vec::with_capacity(h_degree + 1);
    maj.push(Complex64::new(1.0, 0.0)); // C_0
    for h in 1..=h_degree {
        let w = phi(h as f64 / np1);
        let e_lo = e_unit(-(h as f64) * lo);
        let e_hi = e_unit(-(h as f64) * hi);
        // a_H(h) = phi * (i/2) (e(-h hi) - e(-h lo)), so |a_H(h)| <= phi <= 1.
        let i_half = Complex64::new(0.0, 0.5);
        main.push(w * i_half * (e_hi - e_lo));
        maj.push((e_lo + e_hi) * 0.5);
    }
    VaalerPolynomial { lo, hi, h_degree, main_coeffs: main, majorant_coeffs: maj }
}

impl VaalerPolynomial {
    /// chi*(t) = |I| + (1/pi) sum_{0<|h|<=H} a_H(h)/|h| e(ht), real-valued.
    pub fn approx_at(&self, t: f64) -> f64 {
        let mut acc = self.hi - self.lo;
        for (idx, a) in self.main_coeffs.iter().enumerate() {
            let h = (idx + 1) as f64;
            let ch = e_unit(h * t);
            acc += 2.0 / (std::f64::consts::PI * h) * (a * ch).re;
        }
        acc
    }

    /// The Fejér error majorant (F_H(lo - t) + F_H(t - hi)) / (2H + 2),
    /// nonnegative by construction.
    pub fn majorant_at(&self, t: f64) -> f64 {
        let np1 = (self.h_degree + 1) as f64;
        (fejer_closed(self.lo - t, np1) + fejer_closed(t - self.hi, np1)) / (2.0 * np1)
    }

    /// Indicator of [lo, hi) on the torus.
    pub fn indicator(&self, t: f64) -> f64 {
        let t = t - t.floor();
        if t >= self.lo && t < self.hi {
            1.0
        } else {
            0.0
        }
    }

    pub fn csv_header() -> &'static str {
        "h,re,im,C_h"
    }

    /// Rows (h, Re a_H(h), Im a_H(h), |C_h|) for h = 0..=H.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::csv_header());
        out.push('\n');
        out.push_str(&format!("0,{},0,{}\n", self.hi - self.lo, self.majorant_coeffs[0].norm()));
        for (idx, a) in self.main_coeffs.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                idx + 1,
                a.re,
                a.im,
                self.majorant_coeffs[idx + 1].norm()
            ));
        }
        out
    }
}

/// F_H(y) = sum_{|h| <= H} (1 - |h|/(H+1)) e(hy) = sin^2(pi (H+1) y) /
/// ((H+1) sin^2(pi y)), extended by continuity at integers.
fn fejer_closed(y: f64, np1: f64) -> f64 {
    let fy = y - y.round();
    let s = (std::f64::consts::PI * fy).sin();
    if s.abs() < 1e-14 {
        return np1;
    }
    let sn = (std::f64::consts::PI * np1 * fy).sin();
    sn * sn / (np1 * s * s)
}

/// (approx, majorant) at t; the contract |chi_I(t) - approx| <= majorant
/// holds pointwise, endpoints included.
pub fn vaaler_eval(vp: &VaalerPolynomial, t: Frac128) -> (f64, f64) {
    let tf = t.to_f64();
    (vp.approx_at(tf), vp.majorant_at(tf))
}

/// Product form for k intervals: approx = prod chi*_j(t_j) and the
/// envelope prod (1 + maj_j(t_j)) - 1, which dominates
/// |prod chi_j - prod chi*_j| because each |chi_j| <= 1.
pub fn product_indicator_error(
    polys: &[VaalerPolynomial],
    point: &[f64],
) -> (f64, f64) {
    assert!(!polys.is_empty() && polys.len() == point.len() && polys.len() <= 4);
    let mut approx = 1.0;
    let mut env = 1.0;
    for (vp, &t) in polys.iter().zip(point) {
        approx *= vp.approx_at(t);
        env *= 1.0 + vp.majorant_at(t);
    }
    (approx, env - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_range() {
        for i in 1..100 {
            let t = i as f64 / 100.0;
            let v = phi(t);
            assert!((0.0..=1.0).contains(&v), "phi({t}) = {v}");
        }
        assert!((phi(0.5) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn full_interval_is_constant_one() {
        let vp = vaaler_build(0.0, 1.0, 16);
        for a in &vp.main_coeffs {
            assert!(a.norm() < 1e-12);
        }
        for j in 0..100 {
            let t = j as f64 / 100.0;
            let (approx, maj) = vaaler_eval(&vp, Frac128::from_f64(t));
            assert!((approx - 1.0).abs() < 1e-12);
            assert!((vp.indicator(t) - approx).abs() <= maj + 1e-12);
        }
    }

    #[test]
    fn coefficient_bounds() {
        for &(lo, hi, h) in &[(0.0, 0.5, 16usize), (0.13, 0.77, 64), (0.4, 0.41, 256)] {
            let vp = vaaler_build(lo, hi, h);
            for a in &vp.main_coeffs {
                assert!(a.norm() <= 1.0 + 1e-12);
            }
            for c in &vp.majorant_coeffs {
                assert!(c.norm() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn constant_term_is_length_on_average() {
        // mean over a uniform grid of chi* equals |I| (the constant term).
        let vp = vaaler_build(0.2, 0.65, 32);
        let grid = 4096;
        let mean: f64 =
            (0..grid).map(|j| vp.approx_at(j as f64 / grid as f64)).sum::<f64>() / grid as f64;
        assert!((mean - 0.45).abs() < 1e-10, "mean={mean}");
    }

    #[test]
    fn pointwise_error_bounded_by_majorant() {
        let vp = vaaler_build(0.0, 0.5, 16);
        for j in 0..20_000 {
            let t = j as f64 / 20_000.0;
            let (approx, maj) = vaaler_eval(&vp, Frac128::from_f64(t));
            let err = (vp.indicator(t) - approx).abs();
            assert!(err <= maj + 1e-10, "t={t} err={err} maj={maj}");
        }
    }

    #[test]
    fn majorant_matches_coefficient_series() {
        let vp = vaaler_build(0.3, 0.8, 24);
        let np1 = 25.0;
        for j in 0..500 {
            let t = j as f64 / 500.0;
            // series form: (1/(H+1)) sum_{|h|<=H} C_h (1 - |h|/(H+1)) e(ht)
            let mut acc = vp.majorant_coeffs[0].re / np1;
            for h in 1..=24usize {
                let w = 1.0 - h as f64 / np1;
                let term = vp.majorant_coeffs[h] * e_unit(h as f64 * t);
                acc += 2.0 * w * term.re / np1;
            }
            let closed = vp.majorant_at(t);
            assert!((acc - closed).abs() < 1e-10, "t={t} series={acc} closed={closed}");
            assert!(closed >= -1e-12);
        }
    }

    #[test]
    fn product_reduces_to_single() {
        let vp = vaaler_build(0.1, 0.6, 32);
        let (a1, e1) = product_indicator_error(std::slice::from_ref(&vp), &[0.37]);
        let (a2, e2) = vaaler_eval(&vp, Frac128::from_f64(0.37));
        assert!((a1 - a2).abs() < 1e-15);
        assert!((e1 - e2).abs() < 1e-15);
    }

    #[test]
    fn product_error_contract() {
        let p1 = vaaler_build(0.05, 0.3, 32);
        let p2 = vaaler_build(0.5, 0.9, 32);
        for j in 0..2000 {
            let t1 = (j as f64 * 0.001_733).fract();
            let t2 = (j as f64 * 0.002_971 + 0.41).fract();
            let (approx, env) = product_indicator_error(&[p1.clone(), p2.clone()], &[t1, t2]);
            let truth = p1.indicator(t1) * p2.indicator(t2);
            assert!((truth - approx).abs() <= env + 1e-10);
        }
    }
}
