//! Moments A_{X,r}(p) = (1/p) Σ_t a_{X_t}(p)^r, the closed-form first moments
//! of the split-root families, and the prime-averaged Nagao sums.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::curves::{trace_row, BiPoly, HyperFamily, TraceRow};
use crate::error::{Error, Result};
use crate::field::{primes_in, PrimeCtx, PrimeRange};
use crate::poly::{Bivariate, IntPoly};

/// Σ_t a_t^r over a trace row; this is p·A_{X,r}(p).
pub fn power_sum(row: &TraceRow, r: u32) -> BigInt {
    row.traces.iter().map(|&a| num_traits::pow(BigInt::from(a), r as usize)).sum()
}

/// Exact A_{X,r}(p).
pub fn moment(fam: &HyperFamily, r: u32, ctx: &PrimeCtx) -> Result<BigRational> {
    if r == 0 {
        return Err(Error::InvalidArgument("moment order must be at least 1".into()));
    }
    let row = trace_row(fam, ctx)?;
    Ok(BigRational::new(power_sum(&row, r), BigInt::from(ctx.p())))
}

/// Families whose first moment has a closed form.
#[derive(Debug, Clone, PartialEq)]
pub enum FirstMomentModel {
    /// y² = f(x) + T², −p·A₁ = (L_f − 1)·p
    ShiftSquare { f: IntPoly },
    /// y² = f(x)·T + 1, −p·A₁ = L_f·p
    LinearTwist { f: IntPoly },
    /// The 4g+2 construction, −p·A₁ = (4g + 2)·p. `scale` is the constant
    /// with D_T = scale·Π(x − ρᵢ²).
    BigRank { genus: u32, root_squares: Vec<BigInt>, scale: BigInt, f: BiPoly },
}

impl FirstMomentModel {
    pub fn kind(&self) -> &'static str {
        match self {
            FirstMomentModel::ShiftSquare { .. } => "shift_square",
            FirstMomentModel::LinearTwist { .. } => "linear_twist",
            FirstMomentModel::BigRank { .. } => "big_rank",
        }
    }

    pub fn family(&self) -> Result<HyperFamily> {
        let (label, f) = match self {
            FirstMomentModel::ShiftSquare { f } => {
                let mut bi = Bivariate::from_x_poly(f);
                bi.add_term(BigInt::from(1), 0, 2);
                (format!("y^2 = {f} + T^2"), bi)
            }
            FirstMomentModel::LinearTwist { f } => {
                let mut bi = Bivariate::from_t_coeffs(&[IntPoly::zero(), f.clone()]);
                bi.add_term(BigInt::from(1), 0, 0);
                (format!("y^2 = ({f})*T + 1"), bi)
            }
            FirstMomentModel::BigRank { genus, f, .. } => {
                return HyperFamily::new(format!("big_rank genus {genus}"), *genus, f.clone(), BTreeSet::new())
            }
        };
        HyperFamily::infer(label, f, BTreeSet::new())
    }

    /// −p·A₁(p) from the closed form; `NonGeneric` when the distinctness
    /// hypotheses behind it fail at p.
    pub fn predict(&self, ctx: &PrimeCtx) -> Result<i64> {
        let p = ctx.p();
        let pi = p as i64;
        let non_generic = |reason: &str| Error::NonGeneric { p, reason: reason.into() };
        match self {
            FirstMomentModel::ShiftSquare { f } | FirstMomentModel::LinearTwist { f } => {
                let fp = f.reduce_mod(ctx);
                if fp.degree() != f.degree() {
                    return Err(non_generic("p divides the leading coefficient of f"));
                }
                if !fp.is_squarefree() {
                    return Err(non_generic("f has a repeated root mod p"));
                }
                let roots = fp.distinct_root_count() as i64;
                Ok(match self {
                    FirstMomentModel::ShiftSquare { .. } => (roots - 1) * pi,
                    _ => roots * pi,
                })
            }
            FirstMomentModel::BigRank { genus, root_squares, scale, .. } => {
                let pb = BigInt::from(p);
                if (scale % &pb).is_zero() {
                    return Err(non_generic("p divides the scale of D_T"));
                }
                let mut seen = BTreeSet::new();
                for r in root_squares {
                    let red = ((r % &pb) + &pb) % &pb;
                    if red.is_zero() || !seen.insert(red) {
                        return Err(non_generic("the squared roots do not stay distinct and nonzero mod p"));
                    }
                }
                Ok((4 * *genus as i64 + 2) * pi)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentRow {
    pub p: u64,
    /// p·A_{X,r}(p), an integer.
    #[serde(serialize_with = "crate::ser_display")]
    pub p_times_a: BigInt,
    /// Closed-form −p·A₁ when r = 1 and a model applies at p.
    pub predicted: Option<i64>,
    pub generic: bool,
}

impl MomentRow {
    pub fn value(&self) -> BigRational {
        BigRational::new(self.p_times_a.clone(), BigInt::from(self.p))
    }

    /// For r = 1, whether −p·A₁ equals the prediction.
    pub fn matches(&self) -> Option<bool> {
        self.predicted.map(|v| -&self.p_times_a == BigInt::from(v))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSeries {
    pub label: String,
    pub r: u32,
    pub rows: Vec<MomentRow>,
}

/// Brute-force moments over a prime range, parallel over primes, rows in
/// increasing p. The family's bad primes are skipped.
pub fn moment_series(
    fam: &HyperFamily,
    r: u32,
    range: &PrimeRange,
    model: Option<&FirstMomentModel>,
) -> Result<MomentSeries> {
    Ok(moment_table(fam, &[r], range, model)?.remove(0))
}

/// Several moment orders from one pass over the traces; one series per entry of `rs`.
pub fn moment_table(
    fam: &HyperFamily,
    rs: &[u32],
    range: &PrimeRange,
    model: Option<&FirstMomentModel>,
) -> Result<Vec<MomentSeries>> {
    if rs.is_empty() || rs.contains(&0) {
        return Err(Error::InvalidArgument("moment orders must be at least 1".into()));
    }
    let primes: Vec<u64> = primes_in(range).into_iter().filter(|p| !fam.bad_primes().contains(p)).collect();
    let per_prime = primes
        .par_iter()
        .map(|&p| {
            let ctx = PrimeCtx::new(p)?;
            let row = trace_row(fam, &ctx)?;
            let (predicted, generic) = match model.map(|m| m.predict(&ctx)) {
                Some(Ok(v)) => (Some(v), true),
                Some(Err(Error::NonGeneric { .. })) => (None, false),
                Some(Err(e)) => return Err(e),
                None => (None, true),
            };
            Ok(rs
                .iter()
                .map(|&r| MomentRow {
                    p,
                    p_times_a: power_sum(&row, r),
                    predicted: if r == 1 { predicted } else { None },
                    generic,
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rs
        .iter()
        .enumerate()
        .map(|(i, &r)| MomentSeries {
            label: fam.label().to_string(),
            r,
            rows: per_prime.iter().map(|rows| rows[i].clone()).collect(),
        })
        .collect())
}

/// Both normalizations of the prime-averaged first moment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NagaoEstimate<F> {
    #[serde(rename = "P")]
    pub cutoff: u64,
    /// (1/P) Σ −A₁(p) log p
    pub s_theta: F,
    /// (1/#primes) Σ −A₁(p)
    pub s_pi: F,
    pub n_primes: usize,
    pub skipped: Vec<u64>,
}

/// Aggregates per-prime values of −p·A₁(p); the input order does not matter.
pub fn nagao_from_values<F: Float + FromPrimitive>(
    cutoff: u64,
    values: &[(u64, i64)],
    skipped: Vec<u64>,
) -> NagaoEstimate<F> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let mut theta = F::zero();
    let mut plain = F::zero();
    for &(p, minus_pa1) in &sorted {
        let pf = F::from_u64(p).expect("prime fits the float type");
        let term = F::from_i64(minus_pa1).expect("sum fits the float type") / pf;
        theta = theta + term * pf.ln();
        plain = plain + term;
    }
    let n = sorted.len();
    let (s_theta, s_pi) = if n == 0 || cutoff == 0 {
        (F::zero(), F::zero())
    } else {
        (
            theta / F::from_u64(cutoff).expect("cutoff fits the float type"),
            plain / F::from_usize(n).expect("count fits the float type"),
        )
    };
    NagaoEstimate { cutoff, s_theta, s_pi, n_primes: n, skipped }
}

fn skipped_in(range: &PrimeRange, fam: &HyperFamily) -> Vec<u64> {
    let all = primes_in(&PrimeRange { skip: BTreeSet::new(), ..range.clone() });
    all.into_iter()
        .filter(|p| range.skip.contains(p) || fam.bad_primes().contains(p))
        .collect()
}

/// Nagao sums from brute-force first moments.
pub fn nagao_sum(fam: &HyperFamily, range: &PrimeRange) -> Result<NagaoEstimate<f64>> {
    let series = moment_series(fam, 1, range, None)?;
    let values: Vec<(u64, i64)> = series
        .rows
        .iter()
        .map(|row| (row.p, i64::try_from(-&row.p_times_a).expect("first moment fits i64")))
        .collect();
    Ok(nagao_from_values(range.hi, &values, skipped_in(range, fam)))
}

/// Nagao sums from the closed form, falling back to brute force at the
/// non-generic primes.
pub fn nagao_predicted<F: Float + FromPrimitive + Send>(
    model: &FirstMomentModel,
    range: &PrimeRange,
) -> Result<NagaoEstimate<F>> {
    let fam = model.family()?;
    let primes = primes_in(range);
    let values = primes
        .par_iter()
        .map(|&p| {
            let ctx = PrimeCtx::new(p)?;
            match model.predict(&ctx) {
                Ok(v) => Ok((p, v)),
                Err(Error::NonGeneric { .. }) => Ok((p, -trace_row(&fam, &ctx)?.sum())),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(nagao_from_values(range.hi, &values, skipped_in(range, &fam)))
}
