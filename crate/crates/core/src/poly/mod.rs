//! Exact dense univariate polynomials over any num-traits ring, sparse
//! bivariate polynomials in (x, T), and their reductions modulo a prime.

mod bivariate;
mod modp;
mod parse;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::PrimeCtx;

pub use bivariate::{disc_t_quarter, Bivariate, ModBiPoly};
pub use modp::{DegreePattern, ModPoly};
pub use parse::{parse_bivariate, parse_univariate, BiPolyJson};

/// Coefficient ring for [`Poly`] and [`Bivariate`].
pub trait Scalar: Clone + PartialEq + fmt::Debug + Num + Neg<Output = Self> + FromPrimitive {}

impl<T> Scalar for T where T: Clone + PartialEq + fmt::Debug + Num + Neg<Output = T> + FromPrimitive {}

/// Dense polynomial; `coeffs[i]` is the coefficient of xⁱ, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

impl<C: Scalar> Poly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    /// c·xᵏ
    pub fn monomial(c: C, k: usize) -> Self {
        let mut coeffs = vec![C::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn x() -> Self {
        Self::monomial(C::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn eval(&self, at: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc * at.clone() + c.clone())
    }

    pub fn scale(&self, k: &C) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * C::from_usize(i).expect("index fits the scalar type"))
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Π (x − rᵢ)
    pub fn from_roots(roots: &[C]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| {
            let mut next = vec![C::zero(); acc.coeffs.len() + 1];
            for (i, a) in acc.coeffs.iter().enumerate() {
                next[i + 1] = next[i + 1].clone() + a.clone();
                next[i] = next[i].clone() - r.clone() * a.clone();
            }
            Self::new(next)
        })
    }

    /// self(g(x))
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * inner) + &Self::constant(c.clone()))
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<C: Scalar> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<C: Scalar> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<C: Scalar> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<C: Scalar> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Scalar> $tr for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: Poly<C>) -> Poly<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Scalar + Signed + fmt::Display> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.coeffs.iter().enumerate().rev().map(|(i, c)| (c, i, 0)), "x", "T")
    }
}

impl<C: Scalar + Signed + fmt::Display> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

pub(crate) fn write_terms<'a, C: Scalar + Signed + fmt::Display + 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a C, usize, usize)>,
    xvar: &str,
    tvar: &str,
) -> fmt::Result {
    let mut first = true;
    for (c, i, j) in terms {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        let mag = c.abs();
        let mut parts = Vec::new();
        if !mag.is_one() || (i == 0 && j == 0) {
            parts.push(mag.to_string());
        }
        for (var, e) in [(xvar, i), (tvar, j)] {
            match e {
                0 => {}
                1 => parts.push(var.to_string()),
                _ => parts.push(format!("{var}^{e}")),
            }
        }
        write!(f, "{}", parts.join("*"))?;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Integer polynomial.
pub type IntPoly = Poly<BigInt>;
/// Rational polynomial, coefficients in lowest terms.
pub type RatPoly = Poly<BigRational>;

impl IntPoly {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn to_rational(&self) -> RatPoly {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    /// Coefficient-wise reduction into F_p.
    pub fn reduce_mod(&self, ctx: &PrimeCtx) -> ModPoly {
        let p = BigInt::from(ctx.p());
        ModPoly::new(
            ctx.p(),
            self.coeffs
                .iter()
                .map(|c| {
                    let r = c.mod_floor(&p);
                    u64::try_from(&r).expect("residue below p")
                })
                .collect(),
        )
    }

    /// Division that must leave no remainder.
    pub fn exact_div(&self, divisor: &IntPoly) -> Result<IntPoly> {
        let lead = divisor.leading().ok_or(Error::DivisionByZero)?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return if self.is_zero() { Ok(IntPoly::zero()) } else { Err(Error::InexactDivision) };
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Err(Error::InexactDivision);
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &q * d;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::InexactDivision);
        }
        Ok(IntPoly::new(quot))
    }
}

impl RatPoly {
    /// Euclidean division over Q.
    pub fn div_rem(&self, divisor: &RatPoly) -> Result<(RatPoly, RatPoly)> {
        let lead = divisor.leading().ok_or(Error::DivisionByZero)?.clone();
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((RatPoly::zero(), self.clone()));
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dd] / &lead;
            if q.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = &rem[k + i] - &q * d;
            }
            quot[k] = q;
        }
        Ok((RatPoly::new(quot), RatPoly::new(rem)))
    }

    pub fn monic(&self) -> RatPoly {
        match self.leading() {
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
            None => RatPoly::zero(),
        }
    }

    /// Monic gcd over Q.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("b is nonzero");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// Least common multiple of all coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// The integer polynomial when every coefficient is integral.
    pub fn to_integer(&self) -> Option<IntPoly> {
        if self.coeffs.iter().all(|c| c.is_integer()) {
            Some(IntPoly::new(self.coeffs.iter().map(|c| c.to_integer()).collect()))
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn trims_and_degree() {
        assert_eq!(ip(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(ip(&[0, 0]).degree(), None);
        assert!(ip(&[]).is_zero());
    }

    #[test]
    fn product_of_linears() {
        assert_eq!(&ip(&[1, 1]) * &ip(&[-1, 1]), ip(&[-1, 0, 1]));
        let f = IntPoly::from_roots(&[1, 2, 3].map(BigInt::from));
        assert_eq!(f, ip(&[-6, 11, -6, 1]));
    }

    #[test]
    fn squares_product_constant_term() {
        let roots: Vec<BigInt> = (1..=10).map(|i: i64| BigInt::from(i * i)).collect();
        let f = IntPoly::from_roots(&roots);
        assert_eq!(f.coeff(0), "13168189440000".parse::<BigInt>().unwrap());
        for r in &roots {
            assert!(f.eval(r).is_zero());
        }
    }

    #[test]
    fn exact_division() {
        let f = ip(&[-1, 0, 1]);
        assert_eq!(f.exact_div(&ip(&[-1, 1])).unwrap(), ip(&[1, 1]));
        assert!(matches!(f.exact_div(&ip(&[0, 1])), Err(Error::InexactDivision)));
        assert!(matches!(ip(&[1, 0, 1]).exact_div(&ip(&[0, 2])), Err(Error::InexactDivision)));
        assert!(matches!(f.exact_div(&IntPoly::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn rational_gcd_and_squarefree() {
        let f = IntPoly::from_roots(&[1, 1, 2].map(BigInt::from)).to_rational();
        assert!(!f.is_squarefree());
        assert_eq!(f.gcd(&f.derivative()), ip(&[-1, 1]).to_rational());
        assert!(ip(&[1, 0, 1]).to_rational().is_squarefree());
    }

    #[test]
    fn generic_over_floats() {
        let f: Poly<f64> = Poly::new(vec![1.0, 0.0, 2.0]);
        assert_eq!(f.eval(&3.0), 19.0);
        assert_eq!(f.derivative(), Poly::new(vec![0.0, 4.0]));
    }

    #[test]
    fn display() {
        assert_eq!(ip(&[-6, 11, -6, 1]).to_string(), "x^3 - 6*x^2 + 11*x - 6");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }

    #[test]
    fn composition() {
        // (x+1)^2 at x -> 2x
        let f = ip(&[1, 2, 1]);
        assert_eq!(f.compose(&ip(&[0, 2])), ip(&[1, 4, 4]));
    }

    fn big_poly() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec((any::<i128>(), any::<bool>()), 0..8).prop_map(|cs| {
            IntPoly::new(
                cs.into_iter()
                    .map(|(c, neg)| {
                        let v = BigInt::from(c) * BigInt::from(u64::MAX);
                        if neg { -v } else { v }
                    })
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn reduction_is_a_ring_map(f in big_poly(), g in big_poly(), idx in 0usize..200) {
            let p = crate::field::primes_in(&crate::field::PrimeRange::new(999_000, 1_000_000).unwrap())[idx % 60];
            let ctx = PrimeCtx::new(p).unwrap();
            prop_assert_eq!((&f * &g).reduce_mod(&ctx), &f.reduce_mod(&ctx) * &g.reduce_mod(&ctx));
            prop_assert_eq!((&f + &g).reduce_mod(&ctx), &f.reduce_mod(&ctx) + &g.reduce_mod(&ctx));
        }

        #[test]
        fn roots_are_roots(roots in prop::collection::vec(-1000i64..1000, 1..8)) {
            let rs: Vec<BigInt> = roots.iter().map(|&r| BigInt::from(r)).collect();
            let f = IntPoly::from_roots(&rs);
            prop_assert_eq!(f.degree(), Some(rs.len()));
            for r in &rs {
                prop_assert!(f.eval(r).is_zero());
            }
        }

        #[test]
        fn exact_div_inverts_mul(f in big_poly(), g in big_poly()) {
            prop_assume!(!g.is_zero());
            prop_assert_eq!((&f * &g).exact_div(&g).unwrap(), f);
        }
    }
}
