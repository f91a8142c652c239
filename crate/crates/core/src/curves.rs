//! One-parameter families y² = F(x, T) of odd-degree hyperelliptic curves and
//! their traces of Frobenius, a = −Σₓ (F(x,t)/p).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeCtx;
use crate::poly::{BiPolyJson, Bivariate, IntPoly, ModPoly};

pub type BiPoly = Bivariate<BigInt>;

#[derive(Debug, Clone, PartialEq)]
pub struct HyperFamily {
    label: String,
    genus: u32,
    f: BiPoly,
    bad_primes: BTreeSet<u64>,
}

impl HyperFamily {
    /// Validates deg_x F = 2g + 1 and that the generic fiber is squarefree.
    pub fn new(label: impl Into<String>, genus: u32, f: BiPoly, bad_primes: BTreeSet<u64>) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidFamily("genus must be at least 1".into()));
        }
        let n = 2 * genus + 1;
        if f.deg_x() != Some(n) {
            return Err(Error::InvalidFamily(format!(
                "genus {genus} needs deg_x F = {n}, found {:?}",
                f.deg_x()
            )));
        }
        if !generic_fiber_squarefree(&f) {
            return Err(Error::InvalidFamily("F(x, T) has a repeated factor in x over Q(T)".into()));
        }
        Ok(HyperFamily { label: label.into(), genus, f, bad_primes })
    }

    /// Genus read off from deg_x F, which must be odd and at least 3.
    pub fn infer(label: impl Into<String>, f: BiPoly, bad_primes: BTreeSet<u64>) -> Result<Self> {
        match f.deg_x() {
            Some(d) if d >= 3 && d % 2 == 1 => Self::new(label, (d - 1) / 2, f, bad_primes),
            d => Err(Error::InvalidFamily(format!("deg_x F must be odd and at least 3, found {d:?}"))),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn polynomial(&self) -> &BiPoly {
        &self.f
    }

    pub fn bad_primes(&self) -> &BTreeSet<u64> {
        &self.bad_primes
    }

    pub fn with_bad_primes(mut self, extra: impl IntoIterator<Item = u64>) -> Self {
        self.bad_primes.extend(extra);
        self
    }

    pub fn specialize(&self, t: &BigInt) -> Specialization {
        Specialization { t: Some(t.clone()), fx: self.f.specialize_t(t) }
    }

    pub fn to_json(&self) -> FamilyJson {
        FamilyJson {
            label: self.label.clone(),
            genus: self.genus,
            f: BiPolyJson::from(&self.f),
            bad_primes: self.bad_primes.iter().copied().collect(),
        }
    }

    pub fn from_json(j: FamilyJson) -> Result<Self> {
        let f = BiPoly::try_from(j.f)?;
        Self::new(j.label, j.genus, f, j.bad_primes.into_iter().collect())
    }
}

/// `{"label": .., "genus": g, "F": {"terms": [..]}, "bad_primes": [..]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub label: String,
    pub genus: u32,
    #[serde(rename = "F")]
    pub f: BiPolyJson,
    #[serde(default)]
    pub bad_primes: Vec<u64>,
}

// The x-discriminant of F is a polynomial in T of degree at most
// (2n − 2)·deg_T; it is nonzero iff it is nonzero at one of that many + 1
// integer points where the leading coefficient survives.
fn generic_fiber_squarefree(f: &BiPoly) -> bool {
    let Some(n) = f.deg_x() else { return false };
    let dt = f.deg_t().unwrap_or(0);
    let needed = (2 * n as u64).saturating_sub(2) * dt as u64 + 1;
    let lead = &f.x_coeffs()[n as usize];
    let mut tried = 0;
    let mut t = 0i64;
    while tried < needed {
        let tt = BigInt::from(t);
        t += 1;
        if lead.eval(&tt).is_zero() {
            continue;
        }
        tried += 1;
        if f.specialize_t(&tt).to_rational().is_squarefree() {
            return true;
        }
    }
    false
}

/// A single curve y² = f(x), usually the fiber of a family at T = t.
#[derive(Debug, Clone, PartialEq)]
pub struct Specialization {
    t: Option<BigInt>,
    fx: IntPoly,
}

impl Specialization {
    pub fn from_poly(fx: IntPoly) -> Self {
        Specialization { t: None, fx }
    }

    pub fn parameter(&self) -> Option<&BigInt> {
        self.t.as_ref()
    }

    pub fn poly(&self) -> &IntPoly {
        &self.fx
    }
}

/// Per-prime traces a_{X_t}(p) for t = 0..p−1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRow {
    pub p: u64,
    pub traces: Vec<i64>,
    /// Fibers whose x-degree drops mod p; still counted with the affine sum.
    pub degree_drops: usize,
}

impl TraceRow {
    pub fn sum(&self) -> i64 {
        self.traces.iter().sum()
    }
}

#[inline]
fn legendre_sum(f: &ModPoly, ctx: &PrimeCtx) -> i64 {
    let p = ctx.p();
    let cs = f.coeffs();
    // p < 2^32 so products of residues fit in u64
    (0..p)
        .map(|x| ctx.chi(cs.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p)))
        .sum()
}

/// a = −Σₓ (f(x)/p); with one point at infinity this is p + 1 − #C(F_p).
pub fn trace(spec: &Specialization, ctx: &PrimeCtx) -> i64 {
    -legendre_sum(&spec.fx.reduce_mod(ctx), ctx)
}

/// All traces of a family at p. F is reduced once; each fiber costs p
/// table lookups.
pub fn trace_row(fam: &HyperFamily, ctx: &PrimeCtx) -> Result<TraceRow> {
    let p = ctx.p();
    if fam.bad_primes.contains(&p) {
        return Err(Error::InvalidArgument(format!("{p} is a listed bad prime of {}", fam.label)));
    }
    let coeffs_in_t = fam.f.reduce_mod(ctx).x_coeffs();
    let n = 2 * fam.genus as usize + 1;
    let mut fiber = vec![0u64; coeffs_in_t.len()];
    let mut traces = Vec::with_capacity(p as usize);
    let mut degree_drops = 0;
    for t in 0..p {
        for (slot, c) in fiber.iter_mut().zip(&coeffs_in_t) {
            *slot = c.coeffs().iter().rev().fold(0u64, |acc, &k| (acc * t + k) % p);
        }
        if fiber.get(n).copied().unwrap_or(0) == 0 {
            degree_drops += 1;
        }
        let mut s = 0i64;
        for x in 0..p {
            let v = fiber.iter().rev().fold(0u64, |acc, &k| (acc * x + k) % p);
            s += ctx.chi(v);
        }
        traces.push(-s);
    }
    Ok(TraceRow { p, traces, degree_drops })
}

/// Slack Weil bound |a| ≤ 2g⌊2√p⌋; singular fibers may violate it.
pub fn hasse_weil_ok(a: i64, genus: u32, p: u64) -> bool {
    let s = (4 * p) as f64;
    let mut r = s.sqrt() as u64;
    while r * r > 4 * p {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= 4 * p {
        r += 1;
    }
    a.unsigned_abs() <= 2 * genus as u64 * r
}
