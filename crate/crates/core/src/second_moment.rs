//! Second moments of y² = xⁿ + xʰTᵏ.

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{gcd_representative, nu2, primes_in, PrimeCtx, PrimeRange};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PowerFamily {
    n: u32,
    h: u32,
    k: u32,
}

impl PowerFamily {
    pub fn new(n: u32, h: u32, k: u32) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::InvalidFamily(format!("n must be odd and at least 3, got {n}")));
        }
        if h >= n || k >= n {
            return Err(Error::InvalidFamily(format!("need 0 <= h, k < n, got h={h}, k={k}, n={n}")));
        }
        Ok(PowerFamily { n, h, k })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn genus(&self) -> u32 {
        (self.n - 1) / 2
    }

    /// gcd(k, n − h, p − 1) = 1
    pub fn applicable(&self, ctx: &PrimeCtx) -> bool {
        (self.k as u64).gcd(&((self.n - self.h) as u64)).gcd(&(ctx.p() - 1)) == 1
    }
}

fn powers(e: u64, p: u64) -> Vec<u64> {
    (0..p).map(|x| crate::field::pow_mod(x, e, p)).collect()
}

/// Σ_t (Σ_x ((xⁿ + xʰtᵏ)/p))² with arbitrary exponents; 0⁰ = 1.
fn brute_exponents(n: u64, h: u64, k: u64, ctx: &PrimeCtx) -> i64 {
    let p = ctx.p();
    let xn = powers(n, p);
    let xh = powers(h, p);
    let tk = powers(k, p);
    // Each inner sum depends on t only through tᵏ.
    let mut inner = vec![None; p as usize];
    let mut total = 0i64;
    for &s in &tk {
        let a = *inner[s as usize].get_or_insert_with(|| {
            (0..p as usize).map(|x| ctx.chi((xn[x] + crate::field::mul_mod(xh[x], s, p)) % p)).sum::<i64>()
        });
        total += a * a;
    }
    total
}

/// p·A₂ by direct summation over all t ∈ F_p.
pub fn second_moment_brute(fam: &PowerFamily, ctx: &PrimeCtx) -> i64 {
    brute_exponents(fam.n as u64, fam.h as u64, fam.k as u64, ctx)
}

/// Closed form for p·A₂, or `None` when gcd(k, n − h, p − 1) ≠ 1.
pub fn second_moment_closed(fam: &PowerFamily, ctx: &PrimeCtx) -> Option<i128> {
    if !fam.applicable(ctx) {
        return None;
    }
    let p = ctx.p() as i128;
    let pm1 = ctx.p() - 1;
    let m = (fam.n - fam.h) as u64;
    let g = pm1.gcd(&m) as i128;
    let base = p * p - p;
    Some(if fam.h.is_multiple_of(2) {
        (g - 1) * base
    } else if nu2(pm1).expect("p > 2") > nu2(m).expect("n > h") {
        g * base
    } else {
        0
    })
}

/// Whether exponents k and k + (n − h) give the same p·A₂.
pub fn check_periodicity(n: u32, h: u32, k: u32, ctx: &PrimeCtx) -> Result<bool> {
    let fam = PowerFamily::new(n, h, k)?;
    let shifted = (k + n - h) as u64;
    Ok(second_moment_brute(&fam, ctx) == brute_exponents(n as u64, h as u64, shifted, ctx))
}

/// The exponent m ≡ k (mod n − h) with gcd(m, p − 1) = 1 carrying exponent k to 1.
pub fn reduction_exponent(fam: &PowerFamily, ctx: &PrimeCtx) -> Result<u64> {
    if !fam.applicable(ctx) {
        return Err(Error::InvalidArgument(format!(
            "gcd({}, {}, {}) > 1",
            fam.k,
            fam.n - fam.h,
            ctx.p() - 1
        )));
    }
    gcd_representative(fam.k as i64, ctx.p() - 1, (fam.n - fam.h) as u64)
}

/// Whether exponents k and 1 give the same p·A₂.
pub fn check_gcd_reduction(fam: &PowerFamily, ctx: &PrimeCtx) -> Result<bool> {
    reduction_exponent(fam, ctx)?;
    let one = PowerFamily { k: 1, ..*fam };
    Ok(second_moment_brute(fam, ctx) == second_moment_brute(&one, ctx))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiasRow {
    pub p: u64,
    pub p_a2_brute: Option<i64>,
    #[serde(serialize_with = "crate::ser_display")]
    pub p_a2_closed: i128,
    pub c2: i64,
    pub c1: i64,
    /// (pA₂ − p²)/p^{3/2}, using the brute value when present.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiasReport {
    pub family: PowerFamily,
    #[serde(rename = "P")]
    pub cutoff: u64,
    pub rows: Vec<BiasRow>,
    pub mean_c1: Option<f64>,
}

/// Splits the closed form as c₂p² + c₁p over the applicable primes in range.
/// With `brute` set each row also carries the direct sum.
pub fn bias_report(fam: &PowerFamily, range: &PrimeRange, brute: bool) -> Result<BiasReport> {
    let primes = primes_in(range);
    let rows = primes
        .par_iter()
        .map(|&p| {
            let ctx = PrimeCtx::new(p)?;
            let Some(closed) = second_moment_closed(fam, &ctx) else {
                return Ok(None);
            };
            let pi = p as i128;
            let c2 = (closed / (pi * pi - pi)) as i64;
            let c1 = -c2;
            debug_assert_eq!(c2 as i128 * pi * pi + c1 as i128 * pi, closed);
            let p_a2_brute = brute.then(|| second_moment_brute(fam, &ctx));
            let val = p_a2_brute.map_or(closed as f64, |v| v as f64);
            let pf = p as f64;
            let deviation = (val - pf * pf) / pf.powf(1.5);
            Ok(Some(BiasRow { p, p_a2_brute, p_a2_closed: closed, c2, c1, deviation }))
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<BiasRow> = rows.into_iter().flatten().collect();
    let mean_c1 = if rows.is_empty() {
        None
    } else {
        Some(rows.iter().map(|r| r.c1 as f64).sum::<f64>() / rows.len() as f64)
    };
    Ok(BiasReport { family: *fam, cutoff: range.hi, rows, mean_c1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> PrimeCtx {
        PrimeCtx::new(p).unwrap()
    }

    fn fam(n: u32, h: u32, k: u32) -> PowerFamily {
        PowerFamily::new(n, h, k).unwrap()
    }

    #[test]
    fn validation() {
        assert!(PowerFamily::new(4, 0, 1).is_err());
        assert!(PowerFamily::new(1, 0, 0).is_err());
        assert!(PowerFamily::new(5, 5, 1).is_err());
        assert!(PowerFamily::new(5, 1, 5).is_err());
        assert_eq!(fam(7, 2, 0).genus(), 3);
    }

    #[test]
    fn brute_examples() {
        assert_eq!(second_moment_brute(&fam(3, 0, 1), &ctx(7)), 84);
        assert_eq!(second_moment_brute(&fam(3, 1, 1), &ctx(5)), 40);
        assert_eq!(second_moment_brute(&fam(3, 1, 1), &ctx(7)), 0);
        assert_eq!(second_moment_brute(&fam(3, 0, 1), &ctx(13)), 312);
    }

    #[test]
    fn brute_matches_naive_loop() {
        for &(n, h, k, p) in &[(3u32, 2u32, 0u32, 5u64), (5, 2, 3, 11), (7, 4, 6, 13)] {
            let c = ctx(p);
            let direct: i64 = (0..p)
                .map(|t| {
                    let a: i64 = (0..p)
                        .map(|x| {
                            let v = crate::field::pow_mod(x, n as u64, p)
                                + crate::field::pow_mod(x, h as u64, p) * crate::field::pow_mod(t, k as u64, p);
                            c.chi(v % p)
                        })
                        .sum();
                    a * a
                })
                .sum();
            assert_eq!(second_moment_brute(&fam(n, h, k), &c), direct);
        }
    }

    #[test]
    fn closed_examples() {
        assert_eq!(second_moment_closed(&fam(5, 2, 3), &ctx(11)), Some(0));
        assert_eq!(second_moment_closed(&fam(3, 0, 1), &ctx(13)), Some(312));
        assert_eq!(second_moment_closed(&fam(5, 2, 3), &ctx(7)), None);
        assert_eq!(second_moment_closed(&fam(3, 1, 1), &ctx(5)), Some(40));
        assert_eq!(second_moment_closed(&fam(3, 1, 1), &ctx(7)), Some(0));
    }

    #[test]
    fn closed_form_agrees_off_the_even_positive_branch() {
        for p in primes_in(&PrimeRange::new(3, 60).unwrap()) {
            let c = ctx(p);
            for n in [3, 5, 7] {
                for h in (0..n).filter(|h| *h == 0 || h % 2 == 1) {
                    for k in 0..n {
                        let f = fam(n, h, k);
                        if let Some(v) = second_moment_closed(&f, &c) {
                            assert_eq!(second_moment_brute(&f, &c) as i128, v, "n={n} h={h} k={k} p={p}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn even_positive_h_is_offset_by_p_minus_one() {
        // Observed: the direct sum exceeds the closed form by exactly p − 1 when k ≥ 1.
        for p in primes_in(&PrimeRange::new(3, 60).unwrap()) {
            let c = ctx(p);
            for n in [3, 5, 7] {
                for h in (2..n).step_by(2) {
                    for k in 1..n {
                        let f = fam(n, h, k);
                        if let Some(v) = second_moment_closed(&f, &c) {
                            assert_eq!(second_moment_brute(&f, &c) as i128, v + p as i128 - 1, "n={n} h={h} k={k} p={p}");
                        }
                    }
                }
            }
        }
        assert_eq!(second_moment_brute(&fam(5, 2, 3), &ctx(11)), 10);
    }

    #[test]
    fn closed_values_are_multiples_of_p_squared_minus_p() {
        for p in primes_in(&PrimeRange::new(3, 200).unwrap()) {
            let base = (p * p - p) as i128;
            for (n, h, k) in [(3, 0, 1), (5, 2, 1), (7, 3, 2), (5, 1, 4)] {
                if let Some(v) = second_moment_closed(&fam(n, h, k), &ctx(p)) {
                    assert_eq!(v % base, 0);
                }
            }
        }
    }

    #[test]
    fn periodicity_for_positive_k() {
        assert!(check_periodicity(5, 2, 1, &ctx(7)).unwrap());
        assert!(check_periodicity(3, 1, 1, &ctx(5)).unwrap());
        for p in primes_in(&PrimeRange::new(3, 40).unwrap()) {
            for n in [3, 5, 7] {
                for h in 0..n {
                    for k in 1..n {
                        assert!(check_periodicity(n, h, k, &ctx(p)).unwrap(), "n={n} h={h} k={k} p={p}");
                    }
                }
            }
        }
    }

    #[test]
    fn periodicity_breaks_at_k_zero() {
        // t = 0 contributes xⁿ + xʰ at k = 0 but xⁿ at k = n − h.
        assert_eq!(second_moment_brute(&fam(3, 2, 0), &ctx(5)), 5);
        assert_eq!(second_moment_brute(&fam(3, 2, 1), &ctx(5)), 4);
        assert!(!check_periodicity(3, 2, 0, &ctx(5)).unwrap());
    }

    #[test]
    fn gcd_reduction() {
        assert!(check_gcd_reduction(&fam(5, 2, 3), &ctx(11)).unwrap());
        assert!(check_gcd_reduction(&fam(3, 0, 2), &ctx(5)).unwrap());
        assert!(check_gcd_reduction(&fam(7, 3, 1), &ctx(13)).unwrap());
        assert!(check_gcd_reduction(&fam(5, 2, 3), &ctx(7)).is_err());
        assert_eq!(reduction_exponent(&fam(5, 2, 3), &ctx(11)).unwrap(), 3);
        for p in primes_in(&PrimeRange::new(3, 40).unwrap()) {
            for n in [3, 5, 7] {
                for h in 0..n {
                    for k in 1..n {
                        let f = fam(n, h, k);
                        if f.applicable(&ctx(p)) {
                            assert!(check_gcd_reduction(&f, &ctx(p)).unwrap(), "n={n} h={h} k={k} p={p}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bias_means() {
        let r = bias_report(&fam(3, 0, 1), &PrimeRange::new(3, 10_000).unwrap(), false).unwrap();
        let m = r.mean_c1.unwrap();
        assert!((-1.1..=-0.9).contains(&m), "{m}");
        let r = bias_report(&fam(5, 2, 1), &PrimeRange::new(3, 10_000).unwrap(), false).unwrap();
        assert!(r.rows.iter().all(|row| row.c1 <= 0));
        let r = bias_report(&fam(5, 2, 3), &PrimeRange::new(7, 7).unwrap(), false).unwrap();
        assert!(r.rows.is_empty() && r.mean_c1.is_none());
    }

    #[test]
    fn bias_rows_decompose_and_carry_brute() {
        let r = bias_report(&fam(3, 0, 1), &PrimeRange::new(3, 60).unwrap(), true).unwrap();
        for row in &r.rows {
            let p = row.p as i128;
            assert_eq!(row.c2 as i128 * p * p + row.c1 as i128 * p, row.p_a2_closed);
            assert_eq!(row.p_a2_brute.map(i128::from), Some(row.p_a2_closed));
        }
    }
}
