//! Pseudo-polynomials: finite sums of real-coefficient power terms with
//! non-integral exponents, plus an ordinary polynomial part. Evaluation is
//! certified (double-double with error radii) so integer parts can be
//! extracted exactly or rejected as ambiguous, never silently rounded.

use std::fmt;

use crate::hp::{Dd, HpReal};

/// Reduced rational exponent p/q with q >= 1. Exponents are stored exactly
/// so integrality is decidable.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Rational {
    pub num: i64,
    pub den: u64,
}

impl Rational {
    pub fn new(num: i64, den: u64) -> Rational {
        assert!(den != 0, "zero denominator");
        let g = gcd(num.unsigned_abs(), den);
        Rational { num: num / g as i64, den: den / g }
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn to_dd(&self) -> Dd {
        Dd::from_ratio(self.num, self.den)
    }

    /// Strict comparison by cross multiplication, exact in i128.
    fn cmp_key(&self) -> (i128, i128) {
        (self.num as i128, self.den as i128)
    }

    pub fn lt(&self, o: &Rational) -> bool {
        let (an, ad) = self.cmp_key();
        let (bn, bd) = o.cmp_key();
        an * bd < bn * ad
    }

    pub fn gt_int(&self, k: i64) -> bool {
        self.num as i128 > k as i128 * self.den as i128
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// One power term alpha * x^theta with a non-integral exponent theta > 1.
#[derive(Copy, Clone, Debug)]
pub struct PseudoTerm {
    pub alpha: Dd,
    pub theta: Rational,
}

/// f(x) = sum_j alpha_j x^{theta_j} + P(x).
///
/// Invariants enforced at construction: the theta_j are strictly increasing,
/// non-integral and > 1; if there are no power terms the polynomial part is
/// nonzero. Coefficients are double-double values and are treated as exact.
#[derive(Clone, Debug)]
pub struct PseudoPolynomial {
    terms: Vec<PseudoTerm>,
    /// Polynomial coefficients c_0..c_k, ascending by degree.
    poly: Vec<Dd>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// The certified interval around f(n) contains (or comes within the
    /// ambiguity tolerance of) an integer; the floor cannot be trusted.
    AmbiguousFloor { n: u64, value: f64, radius: f64 },
    /// Value does not fit the 64-bit floor contract.
    FloorOutOfRange { n: u64, value: f64 },
    InvalidPolynomial(String),
    Parse(String),
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::AmbiguousFloor { n, value, radius } => write!(
                f,
                "ambiguous floor at n={n}: f(n)={value} with radius {radius} straddles an integer"
            ),
            CoreError::FloorOutOfRange { n, value } => {
                write!(f, "floor out of i64 range at n={n}: f(n)={value}")
            }
            CoreError::InvalidPolynomial(m) => write!(f, "invalid pseudo-polynomial: {m}"),
            CoreError::Parse(m) => write!(f, "parse error: {m}"),
        }
    }
}

impl std::error::Error for CoreError {}

/// Which side of the degree split dominates.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DegreeCase {
    PseudoDominant,
    PolynomialDominant,
}

/// Default floor ambiguity tolerance, 2^-80.
pub const DEFAULT_AMBIGUITY_TOL: f64 = 8.271806125530277e-25;

impl PseudoPolynomial {
    pub fn new(mut terms: Vec<PseudoTerm>, poly: Vec<Dd>) -> Result<PseudoPolynomial, CoreError> {
        terms.retain(|t| t.alpha.hi != 0.0 || t.alpha.lo != 0.0);
        terms.sort_by(|a, b| {
            let l = (a.theta.num as i128) * (b.theta.den as i128);
            let r = (b.theta.num as i128) * (a.theta.den as i128);
            l.cmp(&r)
        });
        for w in terms.windows(2) {
            if w[0].theta == w[1].theta {
                return Err(CoreError::InvalidPolynomial(format!(
                    "duplicate exponent {}",
                    w[0].theta
                )));
            }
        }
        for t in &terms {
            if t.theta.is_integer() {
                return Err(CoreError::InvalidPolynomial(format!(
                    "exponent {} is an integer; it belongs to the polynomial part",
                    t.theta
                )));
            }
            if !t.theta.gt_int(1) {
                return Err(CoreError::InvalidPolynomial(format!(
                    "exponent {} must exceed 1",
                    t.theta
                )));
            }
        }
        let mut poly = poly;
        while poly.len() > 1 && poly.last().map(|c| c.hi == 0.0 && c.lo == 0.0) == Some(true) {
            poly.pop();
        }
        let poly_zero = poly.iter().all(|c| c.hi == 0.0 && c.lo == 0.0);
        if terms.is_empty() && poly_zero {
            return Err(CoreError::InvalidPolynomial(
                "need at least one power term or a nonzero polynomial part".into(),
            ));
        }
        Ok(PseudoPolynomial { terms, poly })
    }

    pub fn terms(&self) -> &[PseudoTerm] {
        &self.terms
    }

    /// Polynomial coefficients c_0..c_k, ascending.
    pub fn poly(&self) -> &[Dd] {
        &self.poly
    }

    /// Degree k of the polynomial part (0 when P is constant or absent).
    pub fn poly_degree(&self) -> u32 {
        let mut k = 0u32;
        for (i, c) in self.poly.iter().enumerate() {
            if c.hi != 0.0 || c.lo != 0.0 {
                k = i as u32;
            }
        }
        k
    }

    /// Largest non-integral exponent, if any power term exists.
    pub fn theta_r(&self) -> Option<Rational> {
        self.terms.last().map(|t| t.theta)
    }

    /// deg f: theta_r if theta_r > k, otherwise k, with the case tag.
    pub fn degree(&self) -> (f64, DegreeCase) {
        let k = self.poly_degree();
        match self.theta_r() {
            Some(t) if t.gt_int(k as i64) => (t.to_f64(), DegreeCase::PseudoDominant),
            Some(_) => (k as f64, DegreeCase::PolynomialDominant),
            None => (k as f64, DegreeCase::PolynomialDominant),
        }
    }

    /// Upper limit for the differencing parameter rho: 1/(floor(deg f) + 3).
    /// Experiment drivers must choose rho strictly below this.
    pub fn rho_max(&self) -> f64 {
        let (d, _) = self.degree();
        1.0 / (d.floor() + 3.0)
    }

    /// f(x) with a certified error radius. Requires x >= 1.
    pub fn eval(&self, x: HpReal) -> HpReal {
        assert!(x.value.hi >= 1.0, "eval requires x >= 1");
        let lnx = if self.terms.is_empty() { None } else { Some(x.ln()) };
        let mut acc = HpReal::exact(Dd::ZERO);
        if let Some(lnx) = lnx {
            for t in &self.terms {
                let powed = lnx.mul_dd(t.theta.to_dd()).exp();
                acc = acc.add(powed.mul_dd(t.alpha));
            }
        }
        if !self.poly.is_empty() {
            // Horner on the polynomial part.
            let mut p = HpReal::exact(*self.poly.last().unwrap());
            for c in self.poly.iter().rev().skip(1) {
                p = p.mul(x).add(HpReal::exact(*c));
            }
            acc = acc.add(p);
        }
        acc
    }

    pub fn eval_at(&self, n: u64) -> HpReal {
        self.eval(HpReal::from_u64(n))
    }

    /// floor(f(n)) for integer n >= 1, certified.
    ///
    /// An exact integer fast path covers inputs where every power term is a
    /// perfect power with integer coefficients; otherwise the double-double
    /// interval decides. `AmbiguousFloor` signals that the caller should
    /// re-evaluate at higher precision or skip n.
    pub fn floor_exact(&self, n: u64, ambiguity_tol: f64) -> Result<i64, CoreError> {
        assert!(n >= 1, "floor_exact requires n >= 1");
        if let Some(v) = self.try_exact_integer(n) {
            return i64::try_from(v).map_err(|_| CoreError::FloorOutOfRange {
                n,
                value: v as f64,
            });
        }
        let v = self.eval_at(n);
        let rad = Dd::from_f64(v.radius + ambiguity_tol);
        let lo = v.value.sub(rad).floor().to_i128_exact();
        let hi = v.value.add(rad).floor().to_i128_exact();
        if lo != hi {
            return Err(CoreError::AmbiguousFloor {
                n,
                value: v.value.value(),
                radius: v.radius,
            });
        }
        i64::try_from(lo).map_err(|_| CoreError::FloorOutOfRange { n, value: v.value.value() })
    }

    /// f(n) as an exact i128 when all terms are integers: every n^{p/q} is a
    /// perfect power and all coefficients are integral.
    fn try_exact_integer(&self, n: u64) -> Option<i128> {
        let mut total: i128 = 0;
        for t in &self.terms {
            let c = dd_as_i128(t.alpha)?;
            let root = integer_root_exact(n, t.theta.den)?;
            let p = u32::try_from(t.theta.num).ok()?;
            let powed = checked_pow_i128(root as i128, p)?;
            total = total.checked_add(c.checked_mul(powed)?)?;
        }
        let mut xp: i128 = 1;
        for (i, c) in self.poly.iter().enumerate() {
            if i > 0 {
                xp = xp.checked_mul(n as i128)?;
            }
            let c = dd_as_i128(*c)?;
            total = total.checked_add(c.checked_mul(xp)?)?;
        }
        Some(total)
    }

    /// Render in the text grammar, e.g. `0.5*x^5/2 + 3*x^2 + 1`.
    pub fn to_text(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for t in self.terms.iter().rev() {
            parts.push(format!("{}*x^{}", t.alpha.value(), t.theta));
        }
        for (i, c) in self.poly.iter().enumerate().rev() {
            if c.hi == 0.0 && c.lo == 0.0 {
                continue;
            }
            match i {
                0 => parts.push(format!("{}", c.value())),
                1 => parts.push(format!("{}*x", c.value())),
                _ => parts.push(format!("{}*x^{}", c.value(), i)),
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn dd_as_i128(d: Dd) -> Option<i128> {
    if d.hi.fract() != 0.0 || d.lo.fract() != 0.0 || d.hi.abs() >= 9.2e18 {
        return None;
    }
    Some(d.hi as i128 + d.lo as i128)
}

fn checked_pow_i128(base: i128, exp: u32) -> Option<i128> {
    let mut acc: i128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
        if acc.abs() > (1i128 << 100) {
            return None;
        }
    }
    Some(acc)
}

/// Integer q-th root of n when n is a perfect q-th power.
fn integer_root_exact(n: u64, q: u64) -> Option<u64> {
    if n == 0 || n == 1 || q == 1 {
        return Some(n);
    }
    let q32 = u32::try_from(q).ok()?;
    let guess = (n as f64).powf(1.0 / q as f64).round() as u64;
    for cand in guess.saturating_sub(1)..=guess + 1 {
        if let Some(p) = cand.checked_pow(q32) {
            if p == n {
                return Some(cand);
            }
        }
    }
    None
}

// --- text grammar -----------------------------------------------------------

/// Parse the experiment grammar: terms joined by `+`/`-`, each of the form
/// `coeff*x^exp`, `coeff*x`, `x^exp`, `x` or `coeff`. Exponents are decimals
/// (`2.5`) or fractions (`5/2`); integral exponents go to the polynomial part.
pub fn parse_pseudo(text: &str) -> Result<PseudoPolynomial, CoreError> {
    let mut terms: Vec<PseudoTerm> = Vec::new();
    let mut poly: Vec<(u32, Dd)> = Vec::new();
    for (sign, chunk) in split_terms(text)? {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            return Err(CoreError::Parse("empty term".into()));
        }
        let (coeff_txt, var_txt) = match chunk.find('*') {
            Some(i) => (&chunk[..i], &chunk[i + 1..]),
            None => {
                if chunk.starts_with('x') {
                    ("1", chunk)
                } else {
                    (chunk, "")
                }
            }
        };
        let mut coeff = parse_decimal_dd(coeff_txt.trim())?;
        if sign < 0 {
            coeff = coeff.neg();
        }
        let var_txt = var_txt.trim();
        if var_txt.is_empty() {
            poly.push((0, coeff));
            continue;
        }
        if !var_txt.starts_with('x') {
            return Err(CoreError::Parse(format!("expected variable term, got `{var_txt}`")));
        }
        let exp_txt = var_txt[1..].trim();
        let theta = if exp_txt.is_empty() {
            Rational::new(1, 1)
        } else if let Some(rest) = exp_txt.strip_prefix('^') {
            parse_exponent(rest.trim())?
        } else {
            return Err(CoreError::Parse(format!("malformed term `{chunk}`")));
        };
        if theta.is_integer() {
            let k = u32::try_from(theta.num)
                .map_err(|_| CoreError::Parse(format!("negative exponent {theta}")))?;
            poly.push((k, coeff));
        } else {
            terms.push(PseudoTerm { alpha: coeff, theta });
        }
    }
    let deg = poly.iter().map(|(k, _)| *k).max().unwrap_or(0) as usize;
    let mut coeffs = vec![Dd::ZERO; deg + 1];
    for (k, c) in poly {
        coeffs[k as usize] = coeffs[k as usize].add(c);
    }
    PseudoPolynomial::new(terms, coeffs)
}

fn split_terms(text: &str) -> Result<Vec<(i32, String)>, CoreError> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut sign = 1i32;
    let mut started = false;
    for ch in text.chars() {
        match ch {
            '+' | '-' if started && !cur.trim().is_empty() && !cur.trim_end().ends_with(['^', '*', '/', 'e', 'E']) => {
                out.push((sign, std::mem::take(&mut cur)));
                sign = if ch == '-' { -1 } else { 1 };
            }
            '-' if !started || cur.trim().is_empty() => {
                sign = -sign;
                started = true;
            }
            '+' if cur.trim().is_empty() => {
                started = true;
            }
            _ => {
                cur.push(ch);
                started = true;
            }
        }
    }
    if !cur.trim().is_empty() {
        out.push((sign, cur));
    }
    if out.is_empty() {
        return Err(CoreError::Parse("empty polynomial text".into()));
    }
    Ok(out)
}

/// Decimal like `0.5`, `12`, `-3.25` as an exact double-double
/// (integer mantissa divided by a power of ten).
fn parse_decimal_dd(s: &str) -> Result<Dd, CoreError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(CoreError::Parse("empty number".into()));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.find('.') {
        Some(i) => (&body[..i], &body[i + 1..]),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(CoreError::Parse(format!("malformed number `{s}`")));
    }
    let digits: String = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(CoreError::Parse(format!("malformed number `{s}`")));
    }
    let mantissa: u64 = digits
        .parse()
        .map_err(|_| CoreError::Parse(format!("number `{s}` out of range")))?;
    let mut v = Dd::from_u64(mantissa);
    if !frac_part.is_empty() {
        let scale = 10u64
            .checked_pow(frac_part.len() as u32)
            .ok_or_else(|| CoreError::Parse(format!("number `{s}` out of range")))?;
        v = v.div(Dd::from_u64(scale));
    }
    Ok(if neg { v.neg() } else { v })
}

/// Exponent: `5/2`, `2.5` or `3`, as an exact rational.
fn parse_exponent(s: &str) -> Result<Rational, CoreError> {
    if let Some(i) = s.find('/') {
        let p: i64 = s[..i]
            .trim()
            .parse()
            .map_err(|_| CoreError::Parse(format!("bad exponent `{s}`")))?;
        let q: u64 = s[i + 1..]
            .trim()
            .parse()
            .map_err(|_| CoreError::Parse(format!("bad exponent `{s}`")))?;
        if q == 0 {
            return Err(CoreError::Parse("zero exponent denominator".into()));
        }
        return Ok(Rational::new(p, q));
    }
    let (int_part, frac_part) = match s.find('.') {
        Some(i) => (&s[..i], &s[i + 1..]),
        None => (s, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    let p: i64 = digits
        .parse()
        .map_err(|_| CoreError::Parse(format!("bad exponent `{s}`")))?;
    let q = 10u64
        .checked_pow(frac_part.len() as u32)
        .ok_or_else(|| CoreError::Parse(format!("bad exponent `{s}`")))?;
    Ok(Rational::new(p, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(text: &str) -> PseudoPolynomial {
        parse_pseudo(text).unwrap()
    }

    #[test]
    fn parse_grammar() {
        let f = pp("0.5*x^2.5 + 1*x^1 + 3");
        assert_eq!(f.terms().len(), 1);
        assert_eq!(f.terms()[0].theta, Rational::new(5, 2));
        assert_eq!(f.poly_degree(), 1);
        assert_eq!(f.poly()[0].value(), 3.0);
        assert_eq!(f.poly()[1].value(), 1.0);

        let g = pp("x^5/2 - 2*x");
        assert_eq!(g.terms()[0].theta, Rational::new(5, 2));
        assert_eq!(g.poly()[1].value(), -2.0);
    }

    #[test]
    fn parse_rejects_integral_only_violations() {
        assert!(parse_pseudo("x^1.5 + x^3/2").is_err()); // duplicate exponent
        assert!(parse_pseudo("0").is_ok() == false);
        assert!(parse_pseudo("x^0.5").is_err()); // theta must exceed 1
    }

    #[test]
    fn eval_examples() {
        // 4^{2.5} = 32 exactly.
        let f = pp("x^2.5");
        let v = f.eval_at(4);
        assert!((v.value.value() - 32.0).abs() <= v.radius.max(1e-26));

        // 1^theta = 1.
        let f = pp("x^2.5 + x");
        let v = f.eval_at(1);
        assert!((v.value.value() - 2.0).abs() <= v.radius.max(1e-28));

        // 0.5 * 9^{1.5} = 13.5.
        let f = pp("0.5*x^1.5");
        let v = f.eval_at(9);
        assert!((v.value.value() - 13.5).abs() <= v.radius.max(1e-26));
    }

    #[test]
    fn floor_examples() {
        let f = pp("x^2.5");
        assert_eq!(f.floor_exact(2, DEFAULT_AMBIGUITY_TOL).unwrap(), 5); // 5.656...
        assert_eq!(f.floor_exact(4, DEFAULT_AMBIGUITY_TOL).unwrap(), 32); // exact
        let g = pp("x^2.5 + x");
        assert_eq!(g.floor_exact(3, DEFAULT_AMBIGUITY_TOL).unwrap(), 18); // 15.588... + 3
        assert_eq!(g.floor_exact(4, DEFAULT_AMBIGUITY_TOL).unwrap(), 36); // exact path
    }

    #[test]
    fn degree_and_rho() {
        let f = pp("x^2.5 + x");
        assert_eq!(f.degree(), (2.5, DegreeCase::PseudoDominant));
        assert!((f.rho_max() - 0.2).abs() < 1e-15);

        let g = pp("x^1.5 + x^3");
        assert_eq!(g.degree(), (3.0, DegreeCase::PolynomialDominant));
        assert!((g.rho_max() - 1.0 / 6.0).abs() < 1e-15);

        let h = pp("x^1.5");
        assert_eq!(h.degree(), (1.5, DegreeCase::PseudoDominant));
        assert!((h.rho_max() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn floor_of_pure_polynomial() {
        let f = pp("2*x^2 + 1");
        assert_eq!(f.floor_exact(10, DEFAULT_AMBIGUITY_TOL).unwrap(), 201);
    }

    #[test]
    fn text_roundtrip() {
        let f = pp("0.5*x^2.5 + 1*x^1 + 3");
        let g = pp(&f.to_text());
        assert_eq!(g.terms()[0].theta, Rational::new(5, 2));
        assert_eq!(g.poly()[0].value(), 3.0);
    }
}
