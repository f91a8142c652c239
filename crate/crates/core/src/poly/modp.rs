use std::ops::{Add, Mul, Sub};

use crate::field::{mul_mod, pow_mod};

/// Polynomial over F_p with reduced residues and no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModPoly {
    p: u64,
    coeffs: Vec<u64>,
}

/// Factor degrees of a polynomial over F_p, or the marker for a repeated factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DegreePattern {
    /// Sorted ascending.
    Squarefree(Vec<usize>),
    Ramified,
}

impl ModPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        ModPoly { p, coeffs: Vec::new() }
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation at a reduced residue.
    #[inline]
    pub fn eval(&self, x0: u64) -> u64 {
        let p = self.p;
        self.coeffs.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x0, p) + c) % p)
    }

    fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    pub fn monic(&self) -> ModPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&l) => {
                let inv = self.inv(l);
                ModPoly::new(self.p, self.coeffs.iter().map(|&c| mul_mod(c, inv, self.p)).collect())
            }
        }
    }

    pub fn derivative(&self) -> ModPoly {
        let p = self.p;
        ModPoly::new(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
                .collect(),
        )
    }

    /// Remainder of division by a nonzero polynomial.
    pub fn rem(&self, m: &ModPoly) -> ModPoly {
        let dm = m.degree().expect("division by the zero polynomial");
        let p = self.p;
        let inv_lead = self.inv(m.coeffs[dm]);
        let mut r = self.coeffs.clone();
        while r.len() > dm {
            let top = r.len() - 1;
            let q = mul_mod(r[top], inv_lead, p);
            if q != 0 {
                let shift = top - dm;
                for (i, &c) in m.coeffs.iter().enumerate() {
                    r[shift + i] = (r[shift + i] + p - mul_mod(q, c, p)) % p;
                }
            }
            r.pop();
        }
        ModPoly::new(p, r)
    }

    /// Quotient of an exact division by a nonzero polynomial.
    pub fn div_exact(&self, m: &ModPoly) -> ModPoly {
        let dm = m.degree().expect("division by the zero polynomial");
        let p = self.p;
        let inv_lead = self.inv(m.coeffs[dm]);
        let mut r = self.coeffs.clone();
        if r.len() <= dm {
            return ModPoly::zero(p);
        }
        let mut q = vec![0; r.len() - dm];
        for k in (0..q.len()).rev() {
            let c = mul_mod(r[k + dm], inv_lead, p);
            q[k] = c;
            if c != 0 {
                for (i, &mc) in m.coeffs.iter().enumerate() {
                    r[k + i] = (r[k + i] + p - mul_mod(c, mc, p)) % p;
                }
            }
        }
        debug_assert!(r.iter().all(|&c| c == 0), "division was not exact");
        ModPoly::new(p, q)
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &ModPoly) -> ModPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// self^e mod m by square-and-multiply.
    pub fn pow_mod(&self, mut e: u64, m: &ModPoly) -> ModPoly {
        let mut base = self.rem(m);
        let mut acc = ModPoly::new(self.p, vec![1]).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).rem(m);
            }
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// Number of distinct roots in F_p: deg gcd(x^p − x, f).
    pub fn distinct_root_count(&self) -> usize {
        match self.degree() {
            None | Some(0) => 0,
            Some(_) => {
                let f = self.monic();
                let xp = ModPoly::x(self.p).pow_mod(self.p, &f);
                let g = (&xp - &ModPoly::x(self.p)).gcd(&f);
                g.degree().unwrap_or(0)
            }
        }
    }

    /// Degrees of the irreducible factors via distinct-degree factorization.
    pub fn degree_pattern(&self) -> DegreePattern {
        if !self.is_squarefree() {
            return DegreePattern::Ramified;
        }
        let mut f = self.monic();
        let x = ModPoly::x(self.p);
        let mut degrees = Vec::new();
        let mut frob = x.clone();
        let mut d = 0;
        while let Some(df) = f.degree() {
            if df == 0 {
                break;
            }
            d += 1;
            if 2 * d > df {
                // what is left is irreducible
                degrees.push(df);
                break;
            }
            frob = frob.pow_mod(self.p, &f);
            let g = (&frob - &x).gcd(&f);
            let dg = g.degree().unwrap_or(0);
            if dg > 0 {
                degrees.extend(std::iter::repeat_n(d, dg / d));
                f = f.div_exact(&g);
                frob = frob.rem(&f);
            }
        }
        degrees.sort_unstable();
        DegreePattern::Squarefree(degrees)
    }
}

impl Add for &ModPoly {
    type Output = ModPoly;
    fn add(self, rhs: &ModPoly) -> ModPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ModPoly::new(self.p, (0..n).map(|i| (self.coeff(i) + rhs.coeff(i)) % self.p).collect())
    }
}

impl Sub for &ModPoly {
    type Output = ModPoly;
    fn sub(self, rhs: &ModPoly) -> ModPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ModPoly::new(self.p, (0..n).map(|i| (self.coeff(i) + self.p - rhs.coeff(i)) % self.p).collect())
    }
}

impl Mul for &ModPoly {
    type Output = ModPoly;
    fn mul(self, rhs: &ModPoly) -> ModPoly {
        if self.is_zero() || rhs.is_zero() {
            return ModPoly::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        ModPoly::new(p, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{primes_in, PrimeCtx, PrimeRange};
    use crate::poly::IntPoly;
    use num_bigint::BigInt;

    fn reduce(c: &[i64], p: u64) -> ModPoly {
        IntPoly::from_i64(c).reduce_mod(&PrimeCtx::new(p).unwrap())
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(reduce(&[-6, 11, -6, 1], 5), ModPoly::new(5, vec![4, 1, 4, 1]));
        assert!(reduce(&[0, 0, 7], 7).is_zero());
    }

    #[test]
    fn evaluation() {
        assert_eq!(ModPoly::new(5, vec![1, 0, 1]).eval(2), 0);
        assert_eq!(ModPoly::new(7, vec![0, 0, 0, 1]).eval(3), 6);
        assert_eq!(ModPoly::zero(7).eval(4), 0);
    }

    #[test]
    fn gcd_over_fp() {
        let g = reduce(&[-1, 0, 1], 7).gcd(&reduce(&[-1, 1], 7));
        assert_eq!(g, reduce(&[-1, 1], 7));
    }

    #[test]
    fn root_counts() {
        let split = IntPoly::from_roots(&[1, 2, 3].map(BigInt::from));
        assert_eq!(split.reduce_mod(&PrimeCtx::new(7).unwrap()).distinct_root_count(), 3);
        assert_eq!(reduce(&[1, 0, 1], 7).distinct_root_count(), 0);
        assert_eq!(reduce(&[1, 0, 1], 5).distinct_root_count(), 2);
        // repeated root counted once
        assert_eq!(reduce(&[1, -2, 1], 5).distinct_root_count(), 1);
    }

    #[test]
    fn root_count_matches_enumeration() {
        let polys: [&[i64]; 5] = [&[1, 0, 1], &[-6, 11, -6, 1], &[2, 0, 0, 1], &[3, 1, 4, 1, 5, 9], &[0, 0, 1, 1]];
        for p in primes_in(&PrimeRange::new(3, 200).unwrap()) {
            for c in polys {
                let f = reduce(c, p);
                if f.is_zero() {
                    continue;
                }
                let brute = (0..p).filter(|&x| f.eval(x) == 0).count();
                assert_eq!(f.distinct_root_count(), brute, "p={p} f={c:?}");
            }
        }
    }

    #[test]
    fn degree_patterns() {
        assert_eq!(reduce(&[1, 0, 1], 5).degree_pattern(), DegreePattern::Squarefree(vec![1, 1]));
        assert_eq!(reduce(&[1, 0, 1], 7).degree_pattern(), DegreePattern::Squarefree(vec![2]));
        assert_eq!(reduce(&[1, -2, 1], 5).degree_pattern(), DegreePattern::Ramified);
        // x^4 + 1 over F_3 is a product of two quadratics
        assert_eq!(reduce(&[1, 0, 0, 0, 1], 3).degree_pattern(), DegreePattern::Squarefree(vec![2, 2]));
        // (x^2+1)(x-1)(x-2)(x^3 + x + 1) over F_7
        let f = &(&reduce(&[1, 0, 1], 7) * &reduce(&[2, -3, 1], 7)) * &reduce(&[1, 1, 0, 1], 7);
        assert_eq!(f.degree_pattern(), DegreePattern::Squarefree(vec![1, 1, 2, 3]));
    }

    #[test]
    fn patterns_sum_to_degree() {
        let f = IntPoly::from_i64(&[1, -3, 0, 2, 0, 0, 1, 5]);
        for p in primes_in(&PrimeRange::new(3, 300).unwrap()) {
            let fp = f.reduce_mod(&PrimeCtx::new(p).unwrap());
            if let DegreePattern::Squarefree(ds) = fp.degree_pattern() {
                assert_eq!(ds.iter().sum::<usize>(), fp.degree().unwrap());
                assert_eq!(ds.iter().filter(|&&d| d == 1).count(), fp.distinct_root_count());
            }
        }
        let split = IntPoly::from_roots(&(1..=7).map(BigInt::from).collect::<Vec<_>>());
        for p in primes_in(&PrimeRange::new(11, 100).unwrap()) {
            let fp = split.reduce_mod(&PrimeCtx::new(p).unwrap());
            assert_eq!(fp.degree_pattern(), DegreePattern::Squarefree(vec![1; 7]));
        }
    }
}
