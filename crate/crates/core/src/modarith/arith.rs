//! Classical arithmetic functions: primes by segmented sieve, the von
//! Mangoldt function, s-fold divisor counts, and the joint-intersectivity
//! checker for systems of integer polynomials.

use std::fs;
use std::io::{self, Read};
use std::path::Path;

const PRIMETAB_MAGIC: &[u8; 9] = b"PRIMETAB1";

/// All primes <= n, ascending. Segmented sieve with 2^20 segments.
pub fn primes_upto(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let root = (n as f64).sqrt() as u64 + 1;
    let mut small = vec![true; (root + 1) as usize];
    small[0] = false;
    if root >= 1 {
        small[1] = false;
    }
    let mut i = 2u64;
    while i * i <= root {
        if small[i as usize] {
            let mut j = i * i;
            while j <= root {
                small[j as usize] = false;
                j += i;
            }
        }
        i += 1;
    }
    let base: Vec<u64> = (2..=root).filter(|&p| small[p as usize]).collect();

    let mut out: Vec<u64> = base.iter().copied().filter(|&p| p <= n).collect();
    const SEG: u64 = 1 << 20;
    let mut lo = root + 1;
    let mut mark = vec![true; SEG as usize];
    while lo <= n {
        let hi = (lo + SEG - 1).min(n);
        let len = (hi - lo + 1) as usize;
        mark[..len].fill(true);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut j = lo.div_ceil(p) * p;
            if j < p * p {
                j = p * p;
            }
            while j <= hi {
                mark[(j - lo) as usize] = false;
                j += p;
            }
        }
        for (k, &m) in mark[..len].iter().enumerate() {
            if m {
                out.push(lo + k as u64);
            }
        }
        lo = hi + 1;
    }
    out
}

/// Write a prime table as magic + count + little-endian u64 entries.
pub fn primes_save(path: &Path, primes: &[u64]) -> io::Result<()> {
    let mut buf = Vec::with_capacity(9 + 8 + primes.len() * 8);
    buf.extend_from_slice(PRIMETAB_MAGIC);
    buf.extend_from_slice(&(primes.len() as u64).to_le_bytes());
    for &p in primes {
        buf.extend_from_slice(&p.to_le_bytes());
    }
    fs::write(path, buf)
}

pub fn primes_load(path: &Path) -> io::Result<Vec<u64>> {
    let mut f = fs::File::open(path)?;
    let mut magic = [0u8; 9];
    f.read_exact(&mut magic)?;
    if &magic != PRIMETAB_MAGIC {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "bad prime table magic"));
    }
    let mut cnt = [0u8; 8];
    f.read_exact(&mut cnt)?;
    let count = u64::from_le_bytes(cnt) as usize;
    let mut data = Vec::new();
    f.read_to_end(&mut data)?;
    if data.len() != count * 8 {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "truncated prime table"));
    }
    Ok(data
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

/// Von Mangoldt Lambda(n): log p when n = p^k, else 0.
pub fn mangoldt(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let mut m = n;
    let mut p = 0u64;
    for d in 2.. {
        if d * d > m {
            break;
        }
        if m % d == 0 {
            p = d;
            break;
        }
    }
    if p == 0 {
        p = m; // n itself prime
    }
    while m % p == 0 {
        m /= p;
    }
    if m == 1 {
        (p as f64).ln()
    } else {
        0.0
    }
}

/// Lambda table for 0..=n via a smallest-prime-factor sieve.
pub fn mangoldt_table(n: usize) -> Vec<f64> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let mut out = vec![0.0f64; n + 1];
    for i in 2..=n {
        let p = spf[i] as usize;
        let mut m = i;
        while m % p == 0 {
            m /= p;
        }
        if m == 1 {
            out[i] = (p as f64).ln();
        }
    }
    out
}

/// d_s(n): ordered s-tuples with product n, via binomial counts on the
/// exponents of the prime factorization.
pub fn divisor_s(n: u64, s: u32) -> u64 {
    assert!(n >= 1 && s >= 1);
    let mut m = n;
    let mut acc: u64 = 1;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            let mut e = 0u64;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            acc *= binomial(e + s as u64 - 1, s as u64 - 1);
        }
        d += 1;
    }
    if m > 1 {
        acc *= s as u64;
    }
    acc
}

/// Table of d_s for 0..=n by repeated Dirichlet convolution with 1.
pub fn divisor_s_table(n: usize, s: u32) -> Vec<u64> {
    let mut cur = vec![1u64; n + 1];
    cur[0] = 0;
    for _ in 1..s {
        let mut next = vec![0u64; n + 1];
        for d in 1..=n {
            let mut j = d;
            while j <= n {
                next[j] += cur[j / d];
                j += d;
            }
        }
        cur = next;
    }
    cur
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut num: u64 = 1;
    for i in 0..k {
        num = num * (n - i) / (i + 1);
    }
    num
}

/// Joint intersectivity report for one modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectiveRow {
    pub q: u64,
    /// Smallest n in [0, q) with h_i(n) = 0 mod q for every polynomial.
    pub witness: Option<u64>,
}

/// For each q <= qmax, search n in [0, q) for a simultaneous root of all
/// polynomials mod q. Coefficients ascending: h = coeffs[0] + coeffs[1] x + ...
pub fn intersective_check(polys: &[Vec<i64>], qmax: u64) -> Vec<IntersectiveRow> {
    assert!(qmax >= 1 && !polys.is_empty());
    (1..=qmax)
        .map(|q| {
            let witness = (0..q).find(|&n| {
                polys.iter().all(|h| eval_mod(h, n, q) == 0)
            });
            IntersectiveRow { q, witness }
        })
        .collect()
}

fn eval_mod(coeffs: &[i64], n: u64, q: u64) -> u64 {
    let q = q as i128;
    let n = n as i128;
    let mut acc: i128 = 0;
    for &c in coeffs.iter().rev() {
        acc = (acc * n + c as i128).rem_euclid(q);
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_small() {
        assert_eq!(primes_upto(10), vec![2, 3, 5, 7]);
        assert_eq!(primes_upto(2), vec![2]);
        assert_eq!(primes_upto(1), Vec::<u64>::new());
    }

    #[test]
    fn primes_crossing_segment_boundary() {
        let ps = primes_upto(3_000_000);
        assert_eq!(ps.len(), 216_816);
        assert!(ps.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn mangoldt_values() {
        assert_eq!(mangoldt(8), 2f64.ln());
        assert_eq!(mangoldt(6), 0.0);
        assert_eq!(mangoldt(1), 0.0);
        assert_eq!(mangoldt(97), 97f64.ln());
        let table = mangoldt_table(1000);
        for n in 0..=1000u64 {
            assert_eq!(table[n as usize], mangoldt(n), "n={n}");
        }
    }

    #[test]
    fn divisor_counts() {
        assert_eq!(divisor_s(4, 3), 6);
        assert_eq!(divisor_s(1, 3), 1);
        assert_eq!(divisor_s(6, 4), 16);
        let t3 = divisor_s_table(100, 3);
        let t4 = divisor_s_table(100, 4);
        for n in 1..=100 {
            assert_eq!(t3[n], divisor_s(n as u64, 3), "d3({n})");
            assert_eq!(t4[n], divisor_s(n as u64, 4), "d4({n})");
        }
    }

    #[test]
    fn intersective_examples() {
        // h(n) = n: zero constant term, witness 0 for all q.
        let rows = intersective_check(&[vec![0, 1]], 50);
        assert!(rows.iter().all(|r| r.witness == Some(0)));

        // h(n) = n^2 + 1 fails at q = 3.
        let rows = intersective_check(&[vec![1, 0, 1]], 3);
        assert_eq!(rows[2].witness, None);

        // n^2 and n^2 - n share the root 0 mod 4.
        let rows = intersective_check(&[vec![0, 0, 1], vec![0, -1, 1]], 4);
        assert_eq!(rows[3].witness, Some(0));
    }

    #[test]
    fn prime_table_roundtrip() {
        let dir = std::env::temp_dir().join("heilbronn-primetab-test");
        let _ = std::fs::create_dir_all(&dir);
        let path = dir.join("primes.bin");
        let ps = primes_upto(10_000);
        primes_save(&path, &ps).unwrap();
        assert_eq!(primes_load(&path).unwrap(), ps);
        let _ = std::fs::remove_file(&path);
    }
}
