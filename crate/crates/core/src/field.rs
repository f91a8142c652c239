//! Arithmetic modulo an odd prime: residue tables, Legendre symbols, the
//! closed-form character sums used by the moment computations, and the small
//! integer utilities (2-adic valuation, coprime representatives, prime lists).

use std::collections::BTreeSet;

use bitvec::prelude::*;
use num_integer::Integer;

use crate::error::{Error, Result};

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// An odd prime together with its table of nonzero quadratic residues.
#[derive(Clone)]
pub struct PrimeCtx {
    p: u64,
    qr: BitVec,
}

impl std::fmt::Debug for PrimeCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PrimeCtx").field("p", &self.p).finish()
    }
}

impl PrimeCtx {
    /// Largest modulus for which a residue table is built. Beyond this the
    /// O(p) bitmap stops being a sensible cache.
    pub const TABLE_LIMIT: u64 = 1 << 32;

    pub fn new(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::EvenPrime);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= Self::TABLE_LIMIT {
            return Err(Error::PrimeTooLarge(p));
        }
        let mut qr = bitvec![0; p as usize];
        // x and p - x have the same square
        for x in 1..=(p - 1) / 2 {
            qr.set(mul_mod(x, x, p) as usize, true);
        }
        Ok(PrimeCtx { p, qr })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// True iff `a` (already reduced) is a nonzero square.
    #[inline]
    pub fn is_residue(&self, a: u64) -> bool {
        self.qr[a as usize]
    }

    /// Legendre symbol of a reduced residue; the hot-loop entry point.
    #[inline]
    pub fn chi(&self, a: u64) -> i64 {
        if a == 0 {
            0
        } else if self.qr[a as usize] {
            1
        } else {
            -1
        }
    }

    pub fn reduce(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    pub fn residue_count(&self) -> usize {
        self.qr.count_ones()
    }
}

/// Legendre symbol (a/p) for any integer `a`.
pub fn legendre(a: i64, ctx: &PrimeCtx) -> i64 {
    ctx.chi(ctx.reduce(a))
}

/// Euler's criterion, independent of the residue table.
pub fn euler_criterion(a: i64, p: u64) -> i64 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Σ_{t mod p} ((a t² + b t + c)/p) by its closed form.
///
/// Quadratic case: (p−1)(a/p) when p | b² − 4ac, otherwise −(a/p).
/// Linear case (a ≡ 0, b ≢ 0): the sum runs over every residue once and vanishes.
pub fn quadratic_char_sum(a: i64, b: i64, c: i64, ctx: &PrimeCtx) -> Result<i64> {
    let p = ctx.p();
    let (ar, br, cr) = (ctx.reduce(a), ctx.reduce(b), ctx.reduce(c));
    if ar == 0 && br == 0 {
        return Err(Error::DegenerateCharSum);
    }
    if ar == 0 {
        return Ok(0);
    }
    let disc = (mul_mod(br, br, p) + p - mul_mod(4 % p, mul_mod(ar, cr, p), p)) % p;
    let chi_a = ctx.chi(ar);
    Ok(if disc == 0 { (p as i64 - 1) * chi_a } else { -chi_a })
}

/// Number of pairs (x, y) mod p with xⁿ ≡ yⁿ: gcd(p−1, n)(p−1) + 1.
pub fn power_pair_count(n: u64, ctx: &PrimeCtx) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("power_pair_count needs n >= 1".into()));
    }
    let pm1 = ctx.p() - 1;
    Ok(pm1.gcd(&n) * pm1 + 1)
}

/// S_h(p) = Σ_{xʰ ≡ yʰ} (xy/p) for even h, in closed form.
pub fn double_sum_s(h: u64, ctx: &PrimeCtx) -> Result<u64> {
    if h < 2 || h % 2 == 1 {
        return Err(Error::InvalidArgument(format!("double_sum_s needs even h >= 2, got {h}")));
    }
    let pm1 = ctx.p() - 1;
    Ok(if nu2(pm1)? > nu2(h)? { h.gcd(&pm1) * pm1 } else { 0 })
}

/// 2-adic valuation.
pub fn nu2(m: u64) -> Result<u32> {
    if m == 0 {
        return Err(Error::InvalidArgument("nu2 of 0".into()));
    }
    Ok(m.trailing_zeros())
}

/// First m in k, k + n2, k + 2·n2, … with gcd(m, n1) = 1 (starting from the
/// least positive residue when k ≤ 0).
pub fn gcd_representative(k: i64, n1: u64, n2: u64) -> Result<u64> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidArgument("gcd_representative needs n1, n2 >= 1".into()));
    }
    let k_abs = k.unsigned_abs();
    if k_abs.gcd(&n1).gcd(&n2) != 1 {
        return Err(Error::InvalidArgument(format!(
            "gcd({k}, {n1}, {n2}) > 1, no coprime representative"
        )));
    }
    let mut m = if k > 0 { k_abs } else { k.rem_euclid(n2 as i64) as u64 };
    if m == 0 {
        m = n2;
    }
    // Terminates: the progression contains a prime exceeding n1.
    while m.gcd(&n1) != 1 {
        m += n2;
    }
    Ok(m)
}

/// Inclusive prime range with an explicit exclusion set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeRange {
    pub lo: u64,
    pub hi: u64,
    pub skip: BTreeSet<u64>,
}

impl PrimeRange {
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        Self::with_skip(lo, hi, BTreeSet::new())
    }

    pub fn with_skip(lo: u64, hi: u64, skip: BTreeSet<u64>) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidRange { lo, hi });
        }
        Ok(PrimeRange { lo, hi, skip })
    }
}

/// The odd primes in `[lo, hi]` minus the skip set, ascending (segment sieve
/// over the window).
pub fn primes_in(range: &PrimeRange) -> Vec<u64> {
    let lo = range.lo.max(3);
    let hi = range.hi;
    if lo > hi {
        return Vec::new();
    }
    let root = (hi as f64).sqrt() as u64 + 1;
    let mut small = bitvec![1; (root + 1) as usize];
    small.set(0, false);
    small.set(1, false);
    let mut i = 2;
    while i * i <= root {
        if small[i as usize] {
            let mut j = i * i;
            while j <= root {
                small.set(j as usize, false);
                j += i;
            }
        }
        i += 1;
    }
    let width = (hi - lo + 1) as usize;
    let mut window = bitvec![1; width];
    for q in small.iter_ones().map(|q| q as u64) {
        let mut j = (lo.div_ceil(q) * q).max(q * q);
        while j <= hi {
            window.set((j - lo) as usize, false);
            j += q;
        }
    }
    window
        .iter_ones()
        .map(|off| lo + off as u64)
        .filter(|&p| p % 2 == 1 && !range.skip.contains(&p))
        .collect()
}
