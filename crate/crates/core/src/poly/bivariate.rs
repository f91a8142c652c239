use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use super::{write_terms, IntPoly, ModPoly, Poly, Scalar};
use crate::error::{Error, Result};
use crate::field::{mul_mod, PrimeCtx};

/// Sparse polynomial Σ c_ij xⁱ Tʲ with no stored zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Bivariate<C> {
    terms: BTreeMap<(u32, u32), C>,
}

impl<C: Scalar> Default for Bivariate<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Scalar> Bivariate<C> {
    pub fn zero() -> Self {
        Bivariate { terms: BTreeMap::new() }
    }

    /// Builds from (coefficient, x-exponent, T-exponent) triples; repeated
    /// exponents are summed.
    pub fn from_terms(terms: impl IntoIterator<Item = (C, u32, u32)>) -> Self {
        let mut out = Self::zero();
        for (c, i, j) in terms {
            out.add_term(c, i, j);
        }
        out
    }

    pub fn add_term(&mut self, c: C, i: u32, j: u32) {
        let entry = self.terms.entry((i, j)).or_insert_with(C::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    /// p(x) viewed as a polynomial constant in T.
    pub fn from_x_poly(f: &Poly<C>) -> Self {
        Self::from_terms(f.coeffs().iter().enumerate().map(|(i, c)| (c.clone(), i as u32, 0)))
    }

    /// Σ_j c_j(x) Tʲ from the list of x-polynomials c_j.
    pub fn from_t_coeffs(cs: &[Poly<C>]) -> Self {
        let mut out = Self::zero();
        for (j, cj) in cs.iter().enumerate() {
            for (i, c) in cj.coeffs().iter().enumerate() {
                out.add_term(c.clone(), i as u32, j as u32);
            }
        }
        out
    }

    /// Σ_i c_i(T) xⁱ from the list of T-polynomials c_i.
    pub fn from_x_coeffs(cs: &[Poly<C>]) -> Self {
        let mut out = Self::zero();
        for (i, ci) in cs.iter().enumerate() {
            for (j, c) in ci.coeffs().iter().enumerate() {
                out.add_term(c.clone(), i as u32, j as u32);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&C, u32, u32)> {
        self.terms.iter().map(|(&(i, j), c)| (c, i, j))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> C {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(C::zero)
    }

    pub fn deg_x(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).max()
    }

    pub fn deg_t(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    /// Coefficient of xⁱ as a polynomial in T, for i = 0..=deg_x.
    pub fn x_coeffs(&self) -> Vec<Poly<C>> {
        let Some(dx) = self.deg_x() else { return Vec::new() };
        let mut rows: Vec<Vec<C>> = vec![Vec::new(); dx as usize + 1];
        for (&(i, j), c) in &self.terms {
            let row = &mut rows[i as usize];
            if row.len() <= j as usize {
                row.resize(j as usize + 1, C::zero());
            }
            row[j as usize] = c.clone();
        }
        rows.into_iter().map(Poly::new).collect()
    }

    /// Coefficient of Tʲ as a polynomial in x, for j = 0..=deg_T.
    pub fn t_coeffs(&self) -> Vec<Poly<C>> {
        let Some(dt) = self.deg_t() else { return Vec::new() };
        let mut rows: Vec<Vec<C>> = vec![Vec::new(); dt as usize + 1];
        for (&(i, j), c) in &self.terms {
            let row = &mut rows[j as usize];
            if row.len() <= i as usize {
                row.resize(i as usize + 1, C::zero());
            }
            row[i as usize] = c.clone();
        }
        rows.into_iter().map(Poly::new).collect()
    }

    /// F(x, t) as a polynomial in x.
    pub fn specialize_t(&self, t: &C) -> Poly<C> {
        Poly::new(self.x_coeffs().iter().map(|c| c.eval(t)).collect())
    }

    /// F(x₀, T) as a polynomial in T.
    pub fn eval_x(&self, x0: &C) -> Poly<C> {
        Poly::new(self.t_coeffs().iter().map(|c| c.eval(x0)).collect())
    }

    pub fn eval(&self, x0: &C, t: &C) -> C {
        self.specialize_t(t).eval(x0)
    }

    pub fn derivative_x(&self) -> Self {
        Self::from_terms(self.terms().filter(|&(_, i, _)| i > 0).map(|(c, i, j)| {
            (c.clone() * C::from_u32(i).expect("exponent fits the scalar type"), i - 1, j)
        }))
    }

    pub fn scale(&self, k: &C) -> Self {
        Self::from_terms(self.terms().map(|(c, i, j)| (c.clone() * k.clone(), i, j)))
    }

    /// Substitute T ↦ k·T.
    pub fn scale_t(&self, k: &C) -> Self {
        Self::from_terms(self.terms().map(|(c, i, j)| {
            let mut v = c.clone();
            for _ in 0..j {
                v = v * k.clone();
            }
            (v, i, j)
        }))
    }
}

impl<C: Scalar> Add for &Bivariate<C> {
    type Output = Bivariate<C>;
    fn add(self, rhs: &Bivariate<C>) -> Bivariate<C> {
        let mut out = self.clone();
        for (c, i, j) in rhs.terms() {
            out.add_term(c.clone(), i, j);
        }
        out
    }
}

impl<C: Scalar> Neg for &Bivariate<C> {
    type Output = Bivariate<C>;
    fn neg(self) -> Bivariate<C> {
        Bivariate::from_terms(self.terms().map(|(c, i, j)| (-c.clone(), i, j)))
    }
}

impl<C: Scalar> Sub for &Bivariate<C> {
    type Output = Bivariate<C>;
    fn sub(self, rhs: &Bivariate<C>) -> Bivariate<C> {
        self + &(-rhs)
    }
}

impl<C: Scalar> Mul for &Bivariate<C> {
    type Output = Bivariate<C>;
    fn mul(self, rhs: &Bivariate<C>) -> Bivariate<C> {
        let mut out = Bivariate::zero();
        for (a, i1, j1) in self.terms() {
            for (b, i2, j2) in rhs.terms() {
                out.add_term(a.clone() * b.clone(), i1 + i2, j1 + j2);
            }
        }
        out
    }
}

impl<C: Scalar + Signed + fmt::Display> fmt::Display for Bivariate<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ordered = self.terms.iter().rev().map(|(&(i, j), c)| (c, i as usize, j as usize));
        write_terms(f, ordered, "x", "T")
    }
}

impl<C: Scalar + Signed + fmt::Display> fmt::Debug for Bivariate<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bivariate({self})")
    }
}

impl Bivariate<BigInt> {
    pub fn reduce_mod(&self, ctx: &PrimeCtx) -> ModBiPoly {
        let p = BigInt::from(ctx.p());
        let mut terms = BTreeMap::new();
        for (c, i, j) in self.terms() {
            let r = u64::try_from(&c.mod_floor(&p)).expect("residue below p");
            if r != 0 {
                terms.insert((i, j), r);
            }
        }
        ModBiPoly { p: ctx.p(), terms }
    }
}

/// Bivariate polynomial with coefficients reduced modulo p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModBiPoly {
    p: u64,
    terms: BTreeMap<(u32, u32), u64>,
}

impl ModBiPoly {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, u32, u32)> + '_ {
        self.terms.iter().map(|(&(i, j), &c)| (c, i, j))
    }

    /// Coefficient of xⁱ as a polynomial in T over F_p.
    pub fn x_coeffs(&self) -> Vec<ModPoly> {
        let dx = self.terms.keys().map(|&(i, _)| i).max().map_or(0, |d| d as usize + 1);
        let mut rows = vec![Vec::new(); dx];
        for (&(i, j), &c) in &self.terms {
            let row: &mut Vec<u64> = &mut rows[i as usize];
            if row.len() <= j as usize {
                row.resize(j as usize + 1, 0);
            }
            row[j as usize] = c;
        }
        rows.into_iter().map(|r| ModPoly::new(self.p, r)).collect()
    }

    /// F(x, t) mod p as a polynomial in x.
    pub fn specialize_t(&self, t: u64) -> ModPoly {
        let p = self.p;
        let coeffs = self.x_coeffs().iter().map(|c| c.eval(t % p)).collect();
        ModPoly::new(p, coeffs)
    }

    pub fn eval(&self, x: u64, t: u64) -> u64 {
        let p = self.p;
        self.terms.iter().fold(0, |acc, (&(i, j), &c)| {
            let term = mul_mod(c, mul_mod(crate::field::pow_mod(x, i as u64, p), crate::field::pow_mod(t, j as u64, p), p), p);
            (acc + term) % p
        })
    }
}

/// (b/2)² − a·c for F = a(x)T² + b(x)T + c(x), i.e. a quarter of the
/// discriminant of F in T.
pub fn disc_t_quarter(f: &Bivariate<BigInt>) -> Result<IntPoly> {
    if f.deg_t() != Some(2) {
        return Err(Error::InvalidArgument(format!(
            "expected degree 2 in T, got {:?}",
            f.deg_t()
        )));
    }
    let cs = f.t_coeffs();
    let (c, b, a) = (&cs[0], &cs[1], &cs[2]);
    let two = BigInt::from(2);
    if b.coeffs().iter().any(|k| k.is_odd()) {
        return Err(Error::InvalidArgument("T-linear coefficient has an odd coefficient".into()));
    }
    let half_b = b.map(|k| k / &two);
    Ok(&(&half_b * &half_b) - &(a * c))
}
