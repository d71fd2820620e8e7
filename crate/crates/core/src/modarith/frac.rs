//! Exact arithmetic on the torus R/Z at 128-bit fixed point.
//!
//! A [`Frac128`] stores a value in [0,1) as numerator/2^128. Addition and
//! integer multiplication are exact modulo 1 (two's-complement wrapping is
//! the reduction), so quantities like ||xi * floor(f(n))|| carry no rounding
//! error beyond the single initial 2^-128 quantization of xi.

use crate::hp::Dd;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Frac128(pub u128);

const TWO_NEG64: f64 = 5.421010862427522e-20; // 2^-64
const TWO_NEG128: f64 = 2.938735877055719e-39; // 2^-128

impl Frac128 {
    pub const ZERO: Frac128 = Frac128(0);
    pub const HALF: Frac128 = Frac128(1u128 << 127);

    /// Quantize the fractional part of `x` to the 2^-128 grid (truncation;
    /// error below 2^-128).
    pub fn from_f64(x: f64) -> Frac128 {
        let frac = x - x.floor();
        if frac <= 0.0 || frac >= 1.0 {
            return Frac128(0);
        }
        let scaled = frac * 1.8446744073709552e19; // 2^64, exact scaling
        let hi = scaled.floor();
        let rem = scaled - hi; // exact: both representable multiples of ulp
        let lo = (rem * 1.8446744073709552e19).floor();
        Frac128(((hi as u128) << 64) | lo as u128)
    }

    /// Exact a/b mod 1 for b >= 1.
    pub fn from_ratio(a: u64, b: u64) -> Frac128 {
        assert!(b > 0);
        let r0 = (a % b) as u128;
        let b = b as u128;
        // Long division of r0 * 2^128 by b, one 64-bit limb at a time.
        let x1 = r0 << 64;
        let q1 = x1 / b;
        let r1 = x1 % b;
        let x2 = r1 << 64;
        let q2 = x2 / b;
        Frac128((q1 << 64) | q2)
    }

    pub fn to_f64(self) -> f64 {
        let hi = (self.0 >> 64) as u64;
        let lo = self.0 as u64;
        hi as f64 * TWO_NEG64 + lo as f64 * TWO_NEG128
    }

    /// Two-part conversion carrying ~106 significant bits.
    pub fn to_dd(self) -> Dd {
        let hi = (self.0 >> 64) as u64;
        let lo = self.0 as u64;
        Dd::from_u64(hi)
            .mul_f64(TWO_NEG64)
            .add(Dd::from_u64(lo).mul_f64(TWO_NEG128))
    }

    /// Exact fractional part of m * self (m >= 0).
    #[inline]
    pub fn mul_int_mod1(self, m: u64) -> Frac128 {
        Frac128(self.0.wrapping_mul(m as u128))
    }

    /// Exact fractional part of m * self for signed m.
    #[inline]
    pub fn mul_int_mod1_signed(self, m: i64) -> Frac128 {
        if m >= 0 {
            self.mul_int_mod1(m as u64)
        } else {
            Frac128(self.0.wrapping_mul(m.unsigned_abs() as u128).wrapping_neg())
        }
    }

    /// Exact addition mod 1.
    #[inline]
    pub fn add(self, o: Frac128) -> Frac128 {
        Frac128(self.0.wrapping_add(o.0))
    }

    /// ||self||: distance to the nearest integer, in [0, 1/2].
    #[inline]
    pub fn dist_to_z(self) -> f64 {
        let d = self.0.min(self.0.wrapping_neg());
        let hi = (d >> 64) as u64;
        let lo = d as u64;
        hi as f64 * TWO_NEG64 + lo as f64 * TWO_NEG128
    }

    pub fn to_hex(self) -> String {
        format!("{:032x}", self.0)
    }

    pub fn from_hex(s: &str) -> Option<Frac128> {
        u128::from_str_radix(s.trim(), 16).ok().map(Frac128)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_int_examples() {
        // {3 * 0.5} = 0.5
        assert_eq!(Frac128::HALF.mul_int_mod1(3), Frac128::HALF);
        // {4 * 0.25} = 0
        let q = Frac128::from_f64(0.25);
        assert_eq!(q.mul_int_mod1(4), Frac128::ZERO);
        // quantized 1/3 times 3 lands within 3 * 2^-128 of 0
        let t = Frac128::from_ratio(1, 3);
        let r = t.mul_int_mod1(3);
        assert!(r.dist_to_z() <= 3.0 * TWO_NEG128);
    }

    #[test]
    fn dist_examples() {
        assert_eq!(Frac128::from_f64(0.75).dist_to_z(), 0.25);
        assert_eq!(Frac128::ZERO.dist_to_z(), 0.0);
        assert_eq!(Frac128::HALF.dist_to_z(), 0.5);
    }

    #[test]
    fn ratio_and_hex_roundtrip() {
        let x = Frac128::from_ratio(22, 7);
        assert!((x.to_f64() - 1.0 / 7.0).abs() < 1e-18);
        assert_eq!(Frac128::from_hex(&x.to_hex()), Some(x));
    }

    #[test]
    fn signed_multiplication() {
        let x = Frac128::from_f64(0.3);
        let a = x.mul_int_mod1_signed(-2);
        let b = x.mul_int_mod1(2);
        assert_eq!(a.add(b), Frac128::ZERO);
    }

    #[test]
    fn from_f64_is_faithful() {
        for &v in &[0.5, 0.25, 0.125, 0.3, 1.0 / 3.0, 0.9999999] {
            let f = Frac128::from_f64(v);
            assert!((f.to_f64() - v).abs() < 1e-18, "v={v}");
        }
    }
}
