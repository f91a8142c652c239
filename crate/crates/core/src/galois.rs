//! Heuristic certificate that a polynomial has Galois group Sₙ, read off from
//! the factorization patterns of its reductions (Frobenius cycle types).
//!
//! A transitive subgroup of Sₙ containing an (n−1)-cycle and a transposition
//! is all of Sₙ, so seeing the patterns {n}, {1, n−1} and {1ⁿ⁻², 2} proves
//! the claim. Not seeing them proves nothing.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{primes_in, PrimeCtx, PrimeRange};
use crate::poly::{DegreePattern, IntPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum WitnessStatus {
    Found,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnWitness {
    pub status: WitnessStatus,
    pub degree: usize,
    /// Smallest prime where f is irreducible.
    pub n_cycle: Option<u64>,
    /// Smallest prime with pattern {1, n−1}.
    pub n_minus_one_cycle: Option<u64>,
    /// Smallest prime with pattern {1, …, 1, 2}.
    pub transposition: Option<u64>,
    /// Pattern (ascending factor degrees) → number of primes.
    pub census: BTreeMap<String, usize>,
    /// Primes where f is not squarefree of full degree.
    pub ramified: Vec<u64>,
    pub primes_scanned: usize,
}

fn pattern_key(ds: &[usize]) -> String {
    ds.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

pub fn sn_witness(f: &IntPoly, range: &PrimeRange) -> Result<SnWitness> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Err(Error::InvalidArgument("sn_witness needs a nonconstant polynomial".into()));
    }
    if !f.to_rational().is_squarefree() {
        return Err(Error::InvalidArgument("polynomial is not squarefree over Q".into()));
    }
    let full_cycle = vec![n];
    let long_cycle = if n >= 2 { vec![1, n - 1] } else { vec![] };
    let mut transposition = vec![1; n.saturating_sub(2)];
    transposition.push(2);

    let mut out = SnWitness {
        status: WitnessStatus::Inconclusive,
        degree: n,
        n_cycle: None,
        n_minus_one_cycle: None,
        transposition: None,
        census: BTreeMap::new(),
        ramified: Vec::new(),
        primes_scanned: 0,
    };
    for p in primes_in(range) {
        let ctx = PrimeCtx::new(p)?;
        let fp = f.reduce_mod(&ctx);
        out.primes_scanned += 1;
        let pattern = match fp.degree_pattern() {
            DegreePattern::Squarefree(ds) if fp.degree() == Some(n) => ds,
            _ => {
                out.ramified.push(p);
                continue;
            }
        };
        if pattern == full_cycle {
            out.n_cycle.get_or_insert(p);
        }
        if pattern == long_cycle {
            out.n_minus_one_cycle.get_or_insert(p);
        }
        if pattern == transposition {
            out.transposition.get_or_insert(p);
        }
        *out.census.entry(pattern_key(&pattern)).or_default() += 1;
    }
    if n >= 3 && out.n_cycle.is_some() && out.n_minus_one_cycle.is_some() && out.transposition.is_some() {
        out.status = WitnessStatus::Found;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_univariate;

    #[test]
    fn quadratic_is_inconclusive() {
        let w = sn_witness(&parse_univariate("x^2 + 1").unwrap(), &PrimeRange::new(3, 100).unwrap()).unwrap();
        assert_eq!(w.status, WitnessStatus::Inconclusive);
        let keys: Vec<&str> = w.census.keys().map(String::as_str).collect();
        assert_eq!(keys, vec!["1,1", "2"]);
    }

    #[test]
    fn split_polynomial_only_splits() {
        let w = sn_witness(&parse_univariate("(x-1)*(x-2)").unwrap(), &PrimeRange::new(3, 100).unwrap()).unwrap();
        assert_eq!(w.status, WitnessStatus::Inconclusive);
        assert_eq!(w.census.keys().collect::<Vec<_>>(), vec!["1,1"]);
    }

    #[test]
    fn cyclic_cubic_never_shows_a_transposition() {
        // x^3 - 3x + 1 has Galois group A_3
        let w = sn_witness(&parse_univariate("x^3 - 3*x + 1").unwrap(), &PrimeRange::new(3, 2000).unwrap()).unwrap();
        assert_eq!(w.status, WitnessStatus::Inconclusive);
        assert!(w.transposition.is_none());
        assert!(w.n_cycle.is_some());
    }

    #[test]
    fn generic_quintic() {
        let w = sn_witness(&parse_univariate("x^5 - x - 1").unwrap(), &PrimeRange::new(3, 500).unwrap()).unwrap();
        assert_eq!(w.status, WitnessStatus::Found);
    }

    #[test]
    fn rejects_repeated_factors() {
        assert!(sn_witness(&parse_univariate("(x-1)^2*(x+3)").unwrap(), &PrimeRange::new(3, 50).unwrap()).is_err());
    }
}
