//! Moments of Frobenius traces for one-parameter families of hyperelliptic
//! curves y² = F(x, T), and a construction of families whose Jacobians have
//! large rank over Q(T).

pub mod construction;
pub mod curves;
pub mod error;
pub mod field;
pub mod galois;
pub mod lemmas;
pub mod moments;
pub mod poly;
pub mod second_moment;

pub use construction::{build_family, to_monic_model, ConstructionResult, RootData};
pub use curves::{trace, trace_row, HyperFamily, Specialization, TraceRow};
pub use error::{Error, Result};
pub use field::{primes_in, PrimeCtx, PrimeRange};
pub use moments::{moment, moment_series, moment_table, nagao_predicted, nagao_sum, FirstMomentModel, NagaoEstimate};
pub use poly::{parse_bivariate, parse_univariate, Bivariate, ModPoly, Poly};
pub use second_moment::{bias_report, PowerFamily};

/// Integer scalars.
pub type Zx = num_bigint::BigInt;
/// Rational scalars.
pub type Zq = num_rational::BigRational;
pub type IntPoly = poly::IntPoly;
pub type RatPoly = poly::RatPoly;
pub type BiPoly = curves::BiPoly;

pub(crate) fn ser_display<T: std::fmt::Display, S: serde::Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}
