//! Families y² = x^{2g+1}T² + 2q(x)T − h(x) whose quarter T-discriminant
//! q² + x^{2g+1}h has 4g+2 prescribed square roots ρᵢ².
//!
//! Pipeline: expand Π(x − ρᵢ²) into R₀..R_{4g+2}, fix A = 4R₀ and solve the
//! coefficient equations of q (recursively, over Q) and h (directly), clear
//! denominators with q → Lq, h → L²h, then read off one point per root.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::curves::{BiPoly, HyperFamily};
use crate::error::{Error, Result};
use crate::moments::FirstMomentModel;
use crate::poly::{disc_t_quarter, Bivariate, IntPoly, Poly, RatPoly, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootData {
    genus: u32,
    rho: Vec<BigInt>,
}

impl RootData {
    pub fn new(genus: u32, rho: Vec<BigInt>) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidRoots("genus must be at least 1".into()));
        }
        let want = 4 * genus as usize + 2;
        if rho.len() != want {
            return Err(Error::InvalidRoots(format!("genus {genus} needs {want} roots, got {}", rho.len())));
        }
        if rho.iter().any(Zero::is_zero) {
            return Err(Error::InvalidRoots("roots must be nonzero".into()));
        }
        let squares: BTreeSet<BigInt> = rho.iter().map(|r| r * r).collect();
        if squares.len() != rho.len() {
            return Err(Error::InvalidRoots("the squares of the roots must be distinct".into()));
        }
        Ok(RootData { genus, rho })
    }

    /// ρᵢ = i for i = 1..=4g+2.
    pub fn consecutive(genus: u32) -> Result<Self> {
        Self::new(genus, (1..=4 * genus as i64 + 2).map(BigInt::from).collect())
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn roots(&self) -> &[BigInt] {
        &self.rho
    }

    pub fn root_squares(&self) -> Vec<BigInt> {
        self.rho.iter().map(|r| r * r).collect()
    }
}

/// Coefficients R₀..R_{4g+2} of Π(x − ρᵢ²); the last is 1.
pub fn expand_roots(rd: &RootData) -> Vec<BigInt> {
    IntPoly::from_roots(&rd.root_squares()).into_coeffs()
}

/// Solves q² + x^{2g+1}h = A·Σ Rₖxᵏ with A = 4R₀, q monic of degree 2g+1
/// and q(0) = 2R₀. Returns (q, h, A).
pub fn solve_coefficients(r: &[BigInt], genus: u32) -> Result<(RatPoly, RatPoly, BigInt)> {
    let n = 2 * genus as usize + 1;
    if r.len() != 2 * n + 1 {
        return Err(Error::InvalidArgument(format!("expected {} R values, got {}", 2 * n + 1, r.len())));
    }
    if r[0].is_zero() {
        return Err(Error::DivisionByZero);
    }
    let rat = |v: &BigInt| BigRational::from_integer(v.clone());
    let scalar = &r[0] * 4;
    let a_big = rat(&scalar);
    let mut a = vec![BigRational::zero(); n + 1];
    a[0] = rat(&(&r[0] * 2));
    a[n] = BigRational::one();
    let two_a0 = &a[0] * BigRational::from_integer(2.into());
    for k in 1..n {
        let cross: BigRational = (1..k).map(|i| &a[i] * &a[k - i]).sum();
        a[k] = (rat(&r[k]) * &a_big - cross) / &two_a0;
    }
    let mut big_a = vec![BigRational::zero(); n + 1];
    for k in n..=2 * n {
        let cross: BigRational = (k - n..=n).map(|i| &a[i] * &a[k - i]).sum();
        big_a[k - n] = rat(&r[k]) * &a_big - cross;
    }
    Ok((RatPoly::new(a), RatPoly::new(big_a), scalar))
}

/// q → L·q, h → L²·h with L the lcm of all coefficient denominators.
pub fn clear_denominators(q: &RatPoly, h: &RatPoly) -> (IntPoly, IntPoly, BigInt) {
    let l = q.denominator_lcm().lcm(&h.denominator_lcm());
    let lr = BigRational::from_integer(l.clone());
    let qi = q.scale(&lr).to_integer().expect("L clears every denominator of q");
    let hi = h.scale(&(&lr * &lr)).to_integer().expect("L² clears every denominator of h");
    (qi, hi, l)
}

/// A point (x, y(T)) on the family over Q(T).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorPoint {
    pub x: BigInt,
    pub y: IntPoly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionResult {
    pub roots: RootData,
    /// R₀..R_{4g+2}
    pub r: Vec<BigInt>,
    /// The leading scalar A = 4R₀.
    pub a_scalar: BigInt,
    pub q_rational: RatPoly,
    pub h_rational: RatPoly,
    /// L·q and L²·h.
    pub q: IntPoly,
    pub h: IntPoly,
    pub l: BigInt,
    /// Extra factor d with F = d²·(x^{2g+1}T² + 2qT − h), making every point integral.
    pub point_scale: BigInt,
    pub f: BiPoly,
    /// Quarter T-discriminant of `f`.
    pub d: IntPoly,
    /// D = scale·Π(x − ρᵢ²)
    pub scale: BigInt,
    pub points: Vec<GeneratorPoint>,
}

pub fn build_family(rd: &RootData) -> Result<ConstructionResult> {
    let g = rd.genus();
    let n = 2 * g as usize + 1;
    let r = expand_roots(rd);
    let (q_rational, h_rational, a_scalar) = solve_coefficients(&r, g)?;
    let (q, h, l) = clear_denominators(&q_rational, &h_rational);

    // At x = ρ², q² + x^n h = 0, so F(ρ², T) = (ρⁿT + q(ρ²)/ρⁿ)².
    let mut lines = Vec::with_capacity(rd.roots().len());
    let mut point_scale = BigInt::one();
    for rho in rd.roots() {
        let s = num_traits::pow(rho.clone(), n);
        let c = BigRational::new(q.eval(&(rho * rho)), s.clone());
        point_scale = point_scale.lcm(c.denom());
        lines.push((rho * rho, s, c));
    }
    let ps = BigRational::from_integer(point_scale.clone());
    let points = lines
        .into_iter()
        .map(|(x, s, c)| {
            let y = RatPoly::new(vec![c * &ps, BigRational::from_integer(s) * &ps]);
            let y = y.to_integer().ok_or_else(|| Error::Verification("point is not integral after scaling".into()))?;
            Ok(GeneratorPoint { x, y })
        })
        .collect::<Result<Vec<_>>>()?;

    let xn = IntPoly::monomial(BigInt::one(), n);
    let unscaled = Bivariate::from_t_coeffs(&[-&h, q.scale(&BigInt::from(2)), xn]);
    let f = unscaled.scale(&(&point_scale * &point_scale));
    let d = disc_t_quarter(&f)?;
    let scale = num_traits::pow(point_scale.clone(), 4) * &l * &l * &a_scalar;

    let out = ConstructionResult {
        roots: rd.clone(),
        r,
        a_scalar,
        q_rational,
        h_rational,
        q,
        h,
        l,
        point_scale,
        f,
        d,
        scale,
        points,
    };
    out.verify()?;
    Ok(out)
}

impl ConstructionResult {
    pub fn genus(&self) -> u32 {
        self.roots.genus()
    }

    /// Re-checks every identity the construction promises.
    pub fn verify(&self) -> Result<()> {
        let n = 2 * self.genus() as usize + 1;
        let squares = self.roots.root_squares();
        let product = IntPoly::from_roots(&squares);
        let a = BigRational::from_integer(self.a_scalar.clone());
        let xn_r = RatPoly::monomial(BigRational::one(), n);
        let lhs = &(&self.q_rational * &self.q_rational) + &(&xn_r * &self.h_rational);
        if lhs != product.to_rational().scale(&a) {
            return Err(Error::Verification("q² + x^n·h differs from A·Π(x − ρ²) before scaling".into()));
        }
        let xn = IntPoly::monomial(BigInt::one(), n);
        let scaled = &(&self.q * &self.q) + &(&xn * &self.h);
        if scaled != product.scale(&(&self.l * &self.l * &self.a_scalar)) {
            return Err(Error::Verification("q² + x^n·h differs from L²A·Π(x − ρ²) after scaling".into()));
        }
        if self.d != product.scale(&self.scale) {
            return Err(Error::Verification("D_T differs from scale·Π(x − ρ²)".into()));
        }
        if let Some(bad) = squares.iter().find(|s| !self.d.eval(s).is_zero()) {
            return Err(Error::Verification(format!("D_T does not vanish at {bad}")));
        }
        for pt in &self.points {
            if &pt.y * &pt.y != self.f.eval_x(&pt.x) {
                return Err(Error::Verification(format!("point with x = {} is not on the curve", pt.x)));
            }
        }
        Ok(())
    }

    pub fn family(&self) -> Result<HyperFamily> {
        let g = self.genus();
        let label = format!("rank {} construction, genus {g}", 4 * g + 2);
        HyperFamily::new(label, g, self.f.clone(), BTreeSet::new())
    }

    pub fn first_moment_model(&self) -> FirstMomentModel {
        FirstMomentModel::BigRank {
            genus: self.genus(),
            root_squares: self.roots.root_squares(),
            scale: self.scale.clone(),
            f: self.f.clone(),
        }
    }

    pub fn to_json(&self) -> ConstructionJson {
        let strs = |v: &[BigInt]| v.iter().map(BigInt::to_string).collect::<Vec<_>>();
        ConstructionJson {
            roots: strs(self.roots.roots()),
            r: strs(&self.r),
            a: self.a_scalar.to_string(),
            l: self.l.to_string(),
            point_scale: self.point_scale.to_string(),
            scale: self.scale.to_string(),
            q: strs(self.q.coeffs()),
            h: strs(self.h.coeffs()),
            d: strs(self.d.coeffs()),
            points: self
                .points
                .iter()
                .map(|p| PointJson { x: p.x.to_string(), y: strs(p.y.coeffs()) })
                .collect(),
        }
    }
}

/// Coefficient lists are ascending in the variable (x for q, h, D; T for y).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructionJson {
    pub roots: Vec<String>,
    #[serde(rename = "R")]
    pub r: Vec<String>,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "L")]
    pub l: String,
    pub point_scale: String,
    pub scale: String,
    pub q: Vec<String>,
    pub h: Vec<String>,
    #[serde(rename = "D")]
    pub d: Vec<String>,
    pub points: Vec<PointJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointJson {
    pub x: String,
    pub y: Vec<String>,
}

/// Rewrites y² = u(T)x^{2g+1} + Σ cᵢ(T)xⁱ as y² = x^{2g+1} + Σ cᵢ u^{2g−i} xⁱ
/// via x → x/u, y → y/u^g, so (x, y) on the input maps to (u·x, u^g·y).
pub fn to_monic_model<C: Scalar>(f: &Bivariate<C>, genus: u32) -> Result<Bivariate<C>> {
    let n = 2 * genus as usize + 1;
    if f.deg_x() != Some(n as u32) {
        return Err(Error::InvalidArgument(format!("expected x-degree {n}, got {:?}", f.deg_x())));
    }
    let cs = f.x_coeffs();
    let unit = cs[n].clone();
    if unit.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut out: Vec<Poly<C>> = Vec::with_capacity(n + 1);
    let mut power = Poly::one();
    let mut lowered: Vec<Poly<C>> = vec![Poly::zero(); n];
    for i in (0..n).rev() {
        lowered[i] = &cs[i] * &power;
        power = &power * &unit;
    }
    out.extend(lowered);
    out.push(Poly::one());
    Ok(Bivariate::from_x_coeffs(&out))
}

/// Whether `rho` has a negative entry; only used for labels.
pub fn has_signed_roots(rd: &RootData) -> bool {
    rd.roots().iter().any(Signed::is_negative)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{trace, Specialization};
    use crate::field::PrimeCtx;

    fn big(s: &str) -> BigInt {
        s.parse().unwrap()
    }

    #[test]
    fn root_data_validation() {
        assert!(RootData::consecutive(2).is_ok());
        assert!(RootData::new(1, (1..=5).map(BigInt::from).collect()).is_err());
        assert!(RootData::new(1, [1, 2, 3, 4, 5, -5].map(BigInt::from).to_vec()).is_err());
        assert!(RootData::new(1, [0, 2, 3, 4, 5, 6].map(BigInt::from).to_vec()).is_err());
        assert!(RootData::new(0, vec![]).is_err());
    }

    #[test]
    fn expansion_of_first_ten_squares() {
        let r = expand_roots(&RootData::consecutive(2).unwrap());
        assert_eq!(r[0], big("13168189440000"));
        assert_eq!(r[4], big("151847872396"));
        assert_eq!(r[9], BigInt::from(-385));
        assert_eq!(r[10], BigInt::one());
    }

    #[test]
    fn first_coefficients_follow_the_recursion() {
        let rd = RootData::consecutive(2).unwrap();
        let r = expand_roots(&rd);
        let (q, h, a) = solve_coefficients(&r, 2).unwrap();
        assert_eq!(a, big("52672757760000"));
        assert_eq!(q.coeff(0), BigRational::from_integer(big("26336378880000")));
        assert_eq!(q.coeff(1), BigRational::from_integer(big("-20407635072000")));
        assert_eq!(q.coeff(5), BigRational::one());
        assert_eq!(h.coeff(5), BigRational::from_integer(&a - 1));
        // c = (2e·R₂ − d²)/2e
        let e = BigRational::from_integer(&r[0] * 2);
        let d = BigRational::from_integer(r[1].clone());
        let two = BigRational::from_integer(2.into());
        let c = (&two * &e * BigRational::from_integer(r[2].clone()) - &d * &d) / (&two * &e);
        assert_eq!(q.coeff(2), c);
        assert!(solve_coefficients(&[BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::one(), BigInt::one(), BigInt::one(), BigInt::one()], 1).is_err());
    }

    #[test]
    fn denominators() {
        let q = IntPoly::from_i64(&[3, 1]).to_rational();
        let h = IntPoly::from_i64(&[1]).to_rational();
        let (qi, hi, l) = clear_denominators(&q, &h);
        assert_eq!((qi, hi, l), (IntPoly::from_i64(&[3, 1]), IntPoly::from_i64(&[1]), BigInt::one()));
        let half = BigRational::new(1.into(), 2.into());
        let q = RatPoly::new(vec![half, BigRational::one()]);
        let (qi, hi, l) = clear_denominators(&q, &RatPoly::zero());
        assert_eq!((qi, hi.is_zero(), l), (IntPoly::from_i64(&[1, 2]), true, BigInt::from(2)));
    }

    #[test]
    fn builds_and_verifies_small_genera() {
        for g in 1..=3 {
            let res = build_family(&RootData::consecutive(g).unwrap()).unwrap();
            assert_eq!(res.q.degree(), Some(2 * g as usize + 1));
            assert_eq!(res.h.degree(), Some(2 * g as usize + 1));
            assert_eq!(res.points.len(), 4 * g as usize + 2);
            assert_eq!(res.d.degree(), Some(4 * g as usize + 2));
            res.family().unwrap();
        }
    }

    #[test]
    fn genus_two_points_sit_over_the_squares() {
        let res = build_family(&RootData::consecutive(2).unwrap()).unwrap();
        let xs: Vec<BigInt> = res.points.iter().map(|p| p.x.clone()).collect();
        assert_eq!(xs, (1..=10).map(|i: i64| BigInt::from(i * i)).collect::<Vec<_>>());
        for (i, pt) in res.points.iter().enumerate() {
            assert_eq!(pt.y.degree(), Some(1));
            let rho = BigInt::from(i as i64 + 1);
            assert_eq!(pt.y.coeff(1), num_traits::pow(rho, 5) * &res.point_scale);
        }
    }

    #[test]
    fn signed_roots_change_points_not_discriminant() {
        let plain = build_family(&RootData::consecutive(1).unwrap()).unwrap();
        let signed = build_family(&RootData::new(1, [1, -2, 3, -4, 5, -6].map(BigInt::from).to_vec()).unwrap()).unwrap();
        assert_eq!(plain.d, signed.d);
        assert_eq!(plain.f, signed.f);
        assert_ne!(plain.points[1], signed.points[1]);
        assert!(has_signed_roots(&signed.roots));
    }

    #[test]
    fn monic_model_matches_displayed_shape() {
        let res = build_family(&RootData::consecutive(2).unwrap()).unwrap();
        // Rational model before clearing denominators: x^5T² + 2qT − h.
        let x5 = RatPoly::monomial(BigRational::one(), 5);
        let two = BigRational::from_integer(2.into());
        let f = Bivariate::from_t_coeffs(&[-&res.h_rational, res.q_rational.scale(&two), x5]);
        let monic = to_monic_model(&f, 2).unwrap();
        let a = BigRational::from_integer(res.a_scalar.clone());
        let unit = RatPoly::new(vec![BigRational::one() - &a, two.clone(), BigRational::one()]);
        let xc = monic.x_coeffs();
        assert_eq!(xc[5], RatPoly::one());
        let b = res.q_rational.coeff(3);
        let c_big = res.h_rational.coeff(3);
        let expected_x3 = &RatPoly::new(vec![-c_big, &two * &b]) * &unit;
        assert_eq!(xc[3], expected_x3);
        let a4 = res.q_rational.coeff(4);
        let b_big = res.h_rational.coeff(4);
        assert_eq!(xc[4], RatPoly::new(vec![-b_big, &two * &a4]));
        let e = res.q_rational.coeff(0);
        let f_big = res.h_rational.coeff(0);
        assert_eq!(xc[0], &RatPoly::new(vec![-f_big, &two * &e]) * &unit.pow(4));
    }

    #[test]
    fn monic_model_preserves_traces() {
        let res = build_family(&RootData::consecutive(1).unwrap()).unwrap();
        let monic = to_monic_model(&res.f, 1).unwrap();
        let unit = res.f.x_coeffs()[3].clone();
        for p in crate::field::primes_in(&crate::field::PrimeRange::new(3, 50).unwrap()) {
            let ctx = PrimeCtx::new(p).unwrap();
            for t in -3i64..=3 {
                let tt = BigInt::from(t);
                let u = unit.eval(&tt);
                if (&u % BigInt::from(p)).is_zero() {
                    continue;
                }
                let a = trace(&Specialization::from_poly(res.f.specialize_t(&tt)), &ctx);
                let b = trace(&Specialization::from_poly(monic.specialize_t(&tt)), &ctx);
                assert_eq!(a, b, "p={p} t={t}");
            }
        }
    }

    #[test]
    fn monic_model_rejects_wrong_shape() {
        let f: BiPoly = crate::poly::parse_bivariate("x^3 + T").unwrap();
        assert!(to_monic_model(&f, 2).is_err());
        assert_eq!(to_monic_model(&f, 1).unwrap(), f);
    }
}
