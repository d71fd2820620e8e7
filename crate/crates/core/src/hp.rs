//! Double-double arithmetic with a tracked error radius.
//!
//! A [`Dd`] is an unevaluated sum `hi + lo` of two `f64` values with
//! `|lo| <= ulp(hi)/2`, giving roughly 106 significand bits. [`HpReal`]
//! wraps a `Dd` together with a conservative absolute error radius so that
//! downstream consumers (floor extraction in particular) can certify their
//! results instead of silently rounding.
//!
//! The kernels (`two_sum`, `quick_two_sum`, `two_prod`) are the classical
//! error-free transformations; `two_prod` uses `f64::mul_add`, which is
//! exactly rounded on every platform Rust targets.

/// Effective relative rounding unit of one double-double operation.
///
/// The accurate add/mul variants used here are within a few ulps of the
/// 2^-106 ideal; 2^-100 leaves headroom for the sloppier division path.
pub const DD_EPS: f64 = 7.888609052210118e-31; // 2^-100

const LN2_HI: f64 = 0.693_147_180_559_945_3;
const LN2_LO: f64 = 2.319_046_813_846_299_6e-17;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// Unevaluated double-double value `hi + lo`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact: splits into two 53-bit halves.
    pub fn from_i64(n: i64) -> Dd {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        Dd::new(hi, lo)
    }

    pub fn from_u64(n: u64) -> Dd {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        Dd::new(hi, lo)
    }

    /// Exact ratio p/q rounded to double-double.
    pub fn from_ratio(p: i64, q: u64) -> Dd {
        Dd::from_i64(p).div(Dd::from_u64(q))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (s1, s2) = quick_two_sum(s1, s2 + t2);
        Dd { hi: s1, lo: s2 }
    }

    #[inline]
    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let p2 = p2 + self.hi * o.lo + self.lo * o.hi;
        let (s, e) = quick_two_sum(p1, p2);
        Dd { hi: s, lo: e }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_f64(q1));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul_f64(q2));
        let q3 = r.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::new(s, e + q3)
    }

    #[inline]
    pub fn mul_f64(self, x: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, x);
        let (s, e) = quick_two_sum(p1, p2 + self.lo * x);
        Dd { hi: s, lo: e }
    }

    /// Exact scaling by a power of two.
    #[inline]
    pub fn scale_pow2(self, k: i32) -> Dd {
        let f = (2.0f64).powi(k);
        Dd { hi: self.hi * f, lo: self.lo * f }
    }

    pub fn powi(self, n: u32) -> Dd {
        let mut acc = Dd::ONE;
        let mut base = self;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            n >>= 1;
        }
        acc
    }

    /// exp(self) by argument reduction mod ln 2, a scaled Taylor series,
    /// and repeated squaring. Relative error a few units of 2^-100.
    pub fn exp(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ONE;
        }
        assert!(self.hi.abs() < 700.0, "dd exp argument out of range");
        let ln2 = Dd { hi: LN2_HI, lo: LN2_LO };
        let m = (self.hi / LN2_HI).round();
        let r = self.sub(ln2.mul_f64(m));
        // |r| <= ln2/2; shrink to ~6.8e-4 so the series converges fast.
        let r = r.scale_pow2(-9);
        let mut term = r;
        let mut sum = Dd::ONE.add(r);
        for k in 2..=14u32 {
            term = term.mul(r).div(Dd::from_u64(k as u64));
            sum = sum.add(term);
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        let mut e = sum;
        for _ in 0..9 {
            e = e.mul(e);
        }
        e.scale_pow2(m as i32)
    }

    /// Natural logarithm via Newton iteration on exp. Requires self > 0.
    pub fn ln(self) -> Dd {
        assert!(self.hi > 0.0, "dd ln of non-positive value");
        let mut y = Dd::from_f64(self.hi.ln());
        // Each step doubles the correct digits; two steps from 53 bits
        // land at the representation floor.
        for _ in 0..2 {
            let e = y.neg().exp();
            y = y.add(self.mul(e)).sub(Dd::ONE);
        }
        y
    }

    /// Largest integer <= self, exact.
    pub fn floor(self) -> Dd {
        let fh = self.hi.floor();
        if fh != self.hi {
            return Dd { hi: fh, lo: 0.0 };
        }
        // hi is integral; the fractional information lives in lo.
        let fl = self.lo.floor();
        Dd::new(fh, fl)
    }

    /// self - floor(self), exact within the representation.
    pub fn fract(self) -> Dd {
        let f = self.floor();
        self.sub(f)
    }

    /// Exact conversion of an integral double-double to i128.
    pub fn to_i128_exact(self) -> i128 {
        debug_assert_eq!(self.hi.fract(), 0.0);
        debug_assert_eq!(self.lo.fract(), 0.0);
        self.hi as i128 + self.lo as i128
    }

    pub fn lt(self, o: Dd) -> bool {
        self.hi < o.hi || (self.hi == o.hi && self.lo < o.lo)
    }
}

/// Double-double value with a conservative absolute error radius.
#[derive(Copy, Clone, Debug)]
pub struct HpReal {
    pub value: Dd,
    pub radius: f64,
}

impl HpReal {
    pub fn exact(v: Dd) -> HpReal {
        HpReal { value: v, radius: 0.0 }
    }

    pub fn from_u64(n: u64) -> HpReal {
        HpReal::exact(Dd::from_u64(n))
    }

    pub fn from_f64(x: f64) -> HpReal {
        HpReal::exact(Dd::from_f64(x))
    }

    fn round_term(v: Dd) -> f64 {
        DD_EPS * v.hi.abs()
    }

    pub fn add(self, o: HpReal) -> HpReal {
        let v = self.value.add(o.value);
        HpReal { value: v, radius: self.radius + o.radius + Self::round_term(v) }
    }

    pub fn sub(self, o: HpReal) -> HpReal {
        let v = self.value.sub(o.value);
        HpReal { value: v, radius: self.radius + o.radius + Self::round_term(v) }
    }

    pub fn mul(self, o: HpReal) -> HpReal {
        let v = self.value.mul(o.value);
        let r = self.value.hi.abs() * o.radius
            + o.value.hi.abs() * self.radius
            + self.radius * o.radius
            + Self::round_term(v);
        HpReal { value: v, radius: r * 1.000_000_1 }
    }

    pub fn mul_dd(self, c: Dd) -> HpReal {
        let v = self.value.mul(c);
        HpReal {
            value: v,
            radius: (c.hi.abs() * self.radius + Self::round_term(v)) * 1.000_000_1,
        }
    }

    pub fn div_u64(self, q: u64) -> HpReal {
        let v = self.value.div(Dd::from_u64(q));
        HpReal { value: v, radius: self.radius / q as f64 + 2.0 * Self::round_term(v) }
    }

    pub fn exp(self) -> HpReal {
        let v = self.value.exp();
        // |exp(x+d) - exp(x)| <= exp(x) (e^|d| - 1); radius stays small in
        // every intended use, so a 1.5 slack factor covers the expm1 term.
        debug_assert!(self.radius < 0.5);
        let r = v.hi.abs() * (1.5 * self.radius + 8.0 * DD_EPS);
        HpReal { value: v, radius: r }
    }

    pub fn ln(self) -> HpReal {
        let x = self.value.hi;
        assert!(x > 0.0 && self.radius < 0.5 * x, "ln argument not certified positive");
        let v = self.value.ln();
        let r = self.radius / (x - self.radius) + 8.0 * DD_EPS * v.hi.abs().max(1.0);
        HpReal { value: v, radius: r }
    }

    /// x^(p/q) for x > 0 via exp((p/q) ln x).
    pub fn pow_ratio(self, p: i64, q: u64) -> HpReal {
        let theta = Dd::from_ratio(p, q);
        self.ln().mul_dd(theta).exp()
    }

    pub fn powi(self, n: u32) -> HpReal {
        let mut acc = HpReal::exact(Dd::ONE);
        let mut base = self;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            n >>= 1;
        }
        acc
    }
}
