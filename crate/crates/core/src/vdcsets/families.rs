//! Preset generators for the catalogue of van der Corput set families.

use super::{ShiftSet, VdcError};
use crate::modarith::{intersective_check, primes_upto};

/// Family descriptor. Irrationality of real parameters cannot be decided
/// numerically; the generator records the caller's flag instead.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyTag {
    /// {n^2 : n <= N}
    Squares,
    /// {p + shift <= N : p prime}, shift in {-1, +1}
    ShiftedPrimes { shift: i8 },
    /// {floor(b n^c) : n <= N}, c > 1 irrational (asserted by the caller)
    FloorPower { b: f64, c: f64, c_irrational: bool },
    /// {floor(b n^c + d n^a) : n <= N}, b/d irrational (asserted), c >= 1,
    /// a > 0, a != c
    FloorPowerSum { b: f64, c: f64, d: f64, a: f64, ratio_irrational: bool },
    /// {floor(b n^c (log n)^d) : n <= N}, c > 1, and either c irrational or
    /// d != 0
    FloorPowerLog { b: f64, c: f64, d: f64, c_irrational: bool },
    /// {floor(b n^c + d (log n)^a) : n <= N}, b, d != 0, c >= 1, a > 1
    FloorPowerPlusLog { b: f64, c: f64, d: f64, a: f64 },
    /// {(f(n), g(n)) : n <= N} for integer polynomials with common roots
    /// modulo every q (finitely pre-checked here)
    PolyPair { f: Vec<i64>, g: Vec<i64> },
    /// {(f(p-1), g(p-1)) : p prime, p-1 <= N}, zero constant terms
    PrimePolyPair { f: Vec<i64>, g: Vec<i64> },
}

impl FamilyTag {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyTag::Squares => "squares",
            FamilyTag::ShiftedPrimes { .. } => "shifted-primes",
            FamilyTag::FloorPower { .. } => "floor-power",
            FamilyTag::FloorPowerSum { .. } => "floor-power-sum",
            FamilyTag::FloorPowerLog { .. } => "floor-power-log",
            FamilyTag::FloorPowerPlusLog { .. } => "floor-power-plus-log",
            FamilyTag::PolyPair { .. } => "poly-pair",
            FamilyTag::PrimePolyPair { .. } => "prime-poly-pair",
        }
    }

    pub fn params_string(&self) -> String {
        match self {
            FamilyTag::Squares => String::new(),
            FamilyTag::ShiftedPrimes { shift } => format!("shift={shift:+}"),
            FamilyTag::FloorPower { b, c, c_irrational } => {
                format!("b={b};c={c};c_irrational={c_irrational}")
            }
            FamilyTag::FloorPowerSum { b, c, d, a, ratio_irrational } => {
                format!("b={b};c={c};d={d};a={a};ratio_irrational={ratio_irrational}")
            }
            FamilyTag::FloorPowerLog { b, c, d, c_irrational } => {
                format!("b={b};c={c};d={d};c_irrational={c_irrational}")
            }
            FamilyTag::FloorPowerPlusLog { b, c, d, a } => format!("b={b};c={c};d={d};a={a}"),
            FamilyTag::PolyPair { f, g } => format!("f={f:?};g={g:?}").replace(", ", " "),
            FamilyTag::PrimePolyPair { f, g } => format!("f={f:?};g={g:?}").replace(", ", " "),
        }
    }
}

fn eval_poly(coeffs: &[i64], x: i64) -> i64 {
    let mut acc = 0i64;
    for &c in coeffs.iter().rev() {
        acc = acc.saturating_mul(x).saturating_add(c);
    }
    acc
}

/// Truncation of the named family. Power families truncate by the index
/// n <= N; the shifted-prime family by the element value p + shift <= N.
pub fn family_generate(tag: &FamilyTag, n: u64) -> Result<ShiftSet, VdcError> {
    if n == 0 {
        return Err(VdcError::InvalidFamilyParams("truncation bound must be positive".into()));
    }
    let mut set = match tag {
        FamilyTag::Squares => {
            ShiftSet::one_dim((1..=n as i64).map(|k| k * k))?
        }
        FamilyTag::ShiftedPrimes { shift } => {
            if !matches!(shift, -1 | 1) {
                return Err(VdcError::InvalidFamilyParams("shift must be -1 or +1".into()));
            }
            let cap = if *shift < 0 { n + 1 } else { n.saturating_sub(1) };
            let elems: Vec<i64> = primes_upto(cap)
                .into_iter()
                .map(|p| p as i64 + *shift as i64)
                .filter(|&v| v > 0 && v <= n as i64)
                .collect();
            if elems.is_empty() {
                return Err(VdcError::InvalidFamilyParams(format!(
                    "no shifted primes at or below {n}"
                )));
            }
            ShiftSet::one_dim(elems)?
        }
        FamilyTag::FloorPower { b, c, c_irrational } => {
            if *b == 0.0 || *c <= 1.0 {
                return Err(VdcError::InvalidFamilyParams("need b != 0 and c > 1".into()));
            }
            if !c_irrational {
                return Err(VdcError::InvalidFamilyParams(
                    "c must be flagged irrational by the caller".into(),
                ));
            }
            ShiftSet::one_dim((1..=n).map(|k| (b * (k as f64).powf(*c)).floor() as i64))?
        }
        FamilyTag::FloorPowerSum { b, c, d, a, ratio_irrational } => {
            if *b == 0.0 || *d == 0.0 || *c < 1.0 || *a <= 0.0 || a == c {
                return Err(VdcError::InvalidFamilyParams(
                    "need b, d != 0, c >= 1, a > 0, a != c".into(),
                ));
            }
            if !ratio_irrational {
                return Err(VdcError::InvalidFamilyParams(
                    "b/d must be flagged irrational by the caller".into(),
                ));
            }
            ShiftSet::one_dim((1..=n).map(|k| {
                let x = k as f64;
                (b * x.powf(*c) + d * x.powf(*a)).floor() as i64
            }))?
        }
        FamilyTag::FloorPowerLog { b, c, d, c_irrational } => {
            if *b == 0.0 || *c <= 1.0 {
                return Err(VdcError::InvalidFamilyParams("need b != 0 and c > 1".into()));
            }
            if !c_irrational && *d == 0.0 {
                return Err(VdcError::InvalidFamilyParams(
                    "need c irrational or d != 0".into(),
                ));
            }
            ShiftSet::one_dim((1..=n).map(|k| {
                let x = k as f64;
                (b * x.powf(*c) * x.ln().powf(*d)).floor() as i64
            }))?
        }
        FamilyTag::FloorPowerPlusLog { b, c, d, a } => {
            if *b == 0.0 || *d == 0.0 || *c < 1.0 || *a <= 1.0 {
                return Err(VdcError::InvalidFamilyParams(
                    "need b, d != 0, c >= 1, a > 1".into(),
                ));
            }
            ShiftSet::one_dim((1..=n).map(|k| {
                let x = k as f64;
                (b * x.powf(*c) + d * x.ln().powf(*a)).floor() as i64
            }))?
        }
        FamilyTag::PolyPair { f, g } => {
            // finite pre-check of the joint root condition
            let rows = intersective_check(&[f.clone(), g.clone()], 16);
            if let Some(row) = rows.iter().find(|r| r.witness.is_none()) {
                return Err(VdcError::InvalidFamilyParams(format!(
                    "polynomials share no root mod {}",
                    row.q
                )));
            }
            ShiftSet::new(
                2,
                (1..=n as i64).map(|k| vec![eval_poly(f, k), eval_poly(g, k)]).collect(),
            )?
        }
        FamilyTag::PrimePolyPair { f, g } => {
            if f.first().copied().unwrap_or(0) != 0 || g.first().copied().unwrap_or(0) != 0 {
                return Err(VdcError::InvalidFamilyParams(
                    "polynomials must have zero constant term".into(),
                ));
            }
            let elems: Vec<Vec<i64>> = primes_upto(n + 1)
                .into_iter()
                .map(|p| p as i64 - 1)
                .filter(|&v| v <= n as i64)
                .map(|v| vec![eval_poly(f, v), eval_poly(g, v)])
                .collect();
            ShiftSet::new(2, elems)?
        }
    };
    set.family = Some(format!("{}[{}]", tag.name(), tag.params_string()));
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares_by_index() {
        let s = family_generate(&FamilyTag::Squares, 5).unwrap();
        let want: Vec<Vec<i64>> = [1, 4, 9, 16, 25].iter().map(|&v| vec![v]).collect();
        assert_eq!(s.elements(), &want[..]);
    }

    #[test]
    fn shifted_primes_by_element() {
        let s = family_generate(&FamilyTag::ShiftedPrimes { shift: -1 }, 12).unwrap();
        let want: Vec<Vec<i64>> = [1, 2, 4, 6, 10, 12].iter().map(|&v| vec![v]).collect();
        assert_eq!(s.elements(), &want[..]);
    }

    #[test]
    fn floor_power_example() {
        let tag = FamilyTag::FloorPower { b: 1.0, c: 1.5, c_irrational: true };
        let s = family_generate(&tag, 4).unwrap();
        let want: Vec<Vec<i64>> = [1, 2, 5, 8].iter().map(|&v| vec![v]).collect();
        assert_eq!(s.elements(), &want[..]);
    }

    #[test]
    fn family_validation() {
        assert!(family_generate(
            &FamilyTag::FloorPower { b: 0.0, c: 1.5, c_irrational: true },
            5
        )
        .is_err());
        assert!(family_generate(
            &FamilyTag::FloorPower { b: 1.0, c: 1.5, c_irrational: false },
            5
        )
        .is_err());
        // n^2 + 1 has no root mod 3, so the pair check fails.
        assert!(family_generate(
            &FamilyTag::PolyPair { f: vec![1, 0, 1], g: vec![0, 1] },
            5
        )
        .is_err());
    }

    #[test]
    fn prime_poly_pair_dimension() {
        let tag = FamilyTag::PrimePolyPair { f: vec![0, 1], g: vec![0, 0, 1] };
        let s = family_generate(&tag, 10).unwrap();
        assert_eq!(s.dim(), 2);
        // p = 2: (1, 1); p = 3: (2, 4); ...
        assert!(s.elements().contains(&vec![1, 1]));
        assert!(s.elements().contains(&vec![2, 4]));
    }
}
