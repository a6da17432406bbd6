//! Holomorphic correspondences on a complex torus `E = ℂ/Λ`, `Λ = ℤ + τℤ`.
//!
//! `Γ = {(z, w) : a z ≡ b w + c (mod Λ)}` for multipliers `a`, `b` in the
//! endomorphism ring of `E`: rational integers for a generic `τ`, Gaussian
//! integers for `τ = i`. Multiplication by `m` has degree `N(m) = |m|²`, so
//! `deg π₁ = N(b)` and `deg π₂ = N(a)`.
//!
//! # Global side
//!
//! `H⁰(E, 𝒪) = ℂ` (constants) and `π₁*π₂*` multiplies a constant by the
//! number of sheets, `N(b)`. `H¹(E, 𝒪)` is one-dimensional, spanned by the
//! class of `dz̄`. On `Γ` the relation `a dz = b dw` conjugates to
//! `π₂*[dw̄] = conj(a/b) · π₁*[dz̄]`, and summing over the `N(b)` sheets of `π₁`
//! gives `N(b) · conj(a/b) = b · conj(a)`. Hence
//!
//! ```text
//! L(Γ, 𝒪) = N(b) − b · conj(a).
//! ```
//!
//! The antilinear step and the sheet count for `π₁*` are derived here, not
//! taken from a reference formula; the local side below is computed
//! independently and would expose a wrong derivation.
//!
//! # Local side
//!
//! Fixed points solve `(a − b) z ≡ c (mod Λ)`: there are `N(a − b)` of them,
//! enumerated as lattice-coordinate solutions of `M x ≡ c (mod ℤ²)` where `M`
//! is the integer matrix of multiplication by `a − b` on the basis `(1, τ)`.
//! Locally `Γ` is the graph of `w = (a z − c)/b`, so every fixed point has
//! Jacobian `a/b` and weight `1/(1 − a/b)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::ZMatrix;
use crate::report::{Model, Value, VerificationReport};
use crate::scalar::ExactScalar;
use crate::snf::CongruenceSolutions;
use crate::text::format_rational_vector;
use crate::torus::{reduce_mod_one, CoveringDegrees};

/// An element of `ℤ[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianInteger {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInteger {
    pub fn new(re: i64, im: i64) -> Self {
        GaussianInteger {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn integer(n: i64) -> Self {
        Self::new(n, 0)
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_rational_integer(&self) -> bool {
        self.im.is_zero()
    }

    pub fn to_scalar(&self) -> ExactScalar {
        ExactScalar::gaussian(
            BigRational::from_integer(self.re.clone()),
            BigRational::from_integer(self.im.clone()),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        GaussianInteger {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        GaussianInteger {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }

    /// Matrix of `z ↦ self·z` on `ℤ[i]` with basis `(1, i)`.
    fn gaussian_matrix(&self) -> ZMatrix {
        ZMatrix::from_rows(vec![
            vec![self.re.clone(), -&self.im],
            vec![self.im.clone(), self.re.clone()],
        ])
        .expect("2x2")
    }
}

/// `m` or `m±ni`.
impl fmt::Display for GaussianInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i", self.re, sign, self.im.abs())
    }
}

impl FromStr for GaussianInteger {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let x: ExactScalar = s.parse()?;
        if !x.re().is_integer() || !x.im().is_integer() {
            return Err(Error::Parse(format!("not a Gaussian integer: {s:?}")));
        }
        Ok(GaussianInteger {
            re: x.re().to_integer(),
            im: x.im().to_integer(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LatticeSpec {
    /// `Λ = ℤ + τℤ` for an arbitrary `τ` in the upper half plane;
    /// multipliers restricted to `ℤ`.
    Generic { tau: ExactScalar },
    /// `Λ = ℤ[i]`; multipliers in `ℤ[i]`.
    Gaussian,
}

impl LatticeSpec {
    pub fn generic(tau: ExactScalar) -> Result<Self> {
        if !tau.im().is_positive() {
            return Err(Error::InvalidParameter(format!(
                "τ = {tau} must have positive imaginary part"
            )));
        }
        Ok(LatticeSpec::Generic { tau: tau.promote() })
    }

    pub fn gaussian() -> Self {
        LatticeSpec::Gaussian
    }

    pub fn tau(&self) -> ExactScalar {
        match self {
            LatticeSpec::Generic { tau } => tau.clone(),
            LatticeSpec::Gaussian => ExactScalar::i(),
        }
    }

    pub fn mode(&self) -> &'static str {
        match self {
            LatticeSpec::Generic { .. } => "generic",
            LatticeSpec::Gaussian => "gaussian",
        }
    }

    pub fn admits(&self, m: &GaussianInteger) -> bool {
        match self {
            LatticeSpec::Generic { .. } => m.is_rational_integer(),
            LatticeSpec::Gaussian => true,
        }
    }

    /// Integer matrix of multiplication by `m` on lattice coordinates.
    fn multiplication_matrix(&self, m: &GaussianInteger) -> ZMatrix {
        match self {
            LatticeSpec::Generic { .. } => {
                ZMatrix::diagonal(&[m.re.clone(), m.re.clone()])
            }
            LatticeSpec::Gaussian => m.gaussian_matrix(),
        }
    }

    fn ring_name(&self) -> &'static str {
        match self {
            LatticeSpec::Generic { .. } => "Z",
            LatticeSpec::Gaussian => "Z[i]",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexTorusCorrespondence {
    lattice: LatticeSpec,
    a: GaussianInteger,
    b: GaussianInteger,
    /// `c = c₀ + c₁τ`, coordinates in `[0, 1)`.
    offset: [BigRational; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct HoloFixedPoint {
    /// Lattice coordinates `(x₀, x₁)` in `[0, 1)²`.
    pub coords: [BigRational; 2],
    /// `x₀ + x₁τ`.
    pub location: ExactScalar,
    pub jacobian: ExactScalar,
    pub weight: ExactScalar,
}

impl ComplexTorusCorrespondence {
    pub fn new(
        lattice: LatticeSpec,
        a: GaussianInteger,
        b: GaussianInteger,
        offset: [BigRational; 2],
    ) -> Self {
        let reduced = reduce_mod_one(&offset);
        ComplexTorusCorrespondence {
            lattice,
            a,
            b,
            offset: [reduced[0].clone(), reduced[1].clone()],
        }
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn a(&self) -> &GaussianInteger {
        &self.a
    }

    pub fn b(&self) -> &GaussianInteger {
        &self.b
    }

    pub fn offset(&self) -> &[BigRational; 2] {
        &self.offset
    }

    /// `c₀ + c₁τ`.
    pub fn offset_value(&self) -> ExactScalar {
        let tau = self.lattice.tau();
        ExactScalar::rational(self.offset[0].clone()).promote()
            + &ExactScalar::rational(self.offset[1].clone()) * &tau
    }

    pub fn parameters(&self) -> BTreeMap<String, String> {
        BTreeMap::from([
            ("mode".to_string(), self.lattice.mode().to_string()),
            ("tau".to_string(), self.lattice.tau().to_string()),
            ("a".to_string(), self.a.to_string()),
            ("b".to_string(), self.b.to_string()),
            ("c".to_string(), format_rational_vector(&self.offset)),
        ])
    }

    pub fn validate(&self) -> Result<CoveringDegrees> {
        for m in [&self.a, &self.b] {
            if !self.lattice.admits(m) {
                return Err(Error::MultiplierNotInRing {
                    multiplier: m.to_string(),
                    ring: self.lattice.ring_name().to_string(),
                });
            }
        }
        if self.a.is_zero() || self.b.is_zero() {
            return Err(Error::NotACovering(format!(
                "multipliers must be nonzero (a = {}, b = {})",
                self.a, self.b
            )));
        }
        Ok(CoveringDegrees {
            first: self.b.norm(),
            second: self.a.norm(),
        })
    }

    /// `N(b) − b · conj(a)`.
    pub fn holo_lefschetz_global(&self) -> Result<ExactScalar> {
        let degrees = self.validate()?;
        let h0 = ExactScalar::from(degrees.first).promote();
        let h1 = &self.b.to_scalar() * &self.a.to_scalar().conj();
        Ok(h0 - h1)
    }

    fn require_transversal(&self) -> Result<()> {
        if self.a == self.b {
            return Err(Error::NonTransversal(format!(
                "a = b = {}: Γ is a translate of the diagonal",
                self.a
            )));
        }
        Ok(())
    }

    /// `a/b`.
    pub fn jacobian(&self) -> Result<ExactScalar> {
        self.validate()?;
        Ok(&self.a.to_scalar() / &self.b.to_scalar())
    }

    pub fn fixed_points(&self) -> Result<HoloFixedPoints> {
        self.validate()?;
        self.require_transversal()?;
        let jacobian = self.jacobian()?;
        let one = ExactScalar::one();
        let weight = &one / &(&one - &jacobian);
        let system = self
            .lattice
            .multiplication_matrix(&self.a.sub(&self.b));
        let solutions = CongruenceSolutions::new(&system, &self.offset)?;
        Ok(HoloFixedPoints {
            tau: self.lattice.tau(),
            jacobian,
            weight,
            solutions,
        })
    }

    /// Sum of `1/(1 − det J)` over the enumerated fixed points.
    pub fn holomorphic_local_sum(&self) -> Result<ExactScalar> {
        self.local_sum_of(&self.fixed_points()?)
    }

    fn local_sum_of(&self, fixed: &HoloFixedPoints) -> Result<ExactScalar> {
        let sum = fixed.weight_sum()?;
        // closed form N(a−b)·b/(b−a), kept off the computation path
        let diff = self.a.sub(&self.b);
        let closed = &ExactScalar::from(diff.norm())
            * &(&self.b.to_scalar() / &(-diff.to_scalar()));
        if sum != closed {
            return Err(Error::Inconsistent(format!(
                "weight sum {sum} differs from N(a−b)·b/(b−a) = {closed}"
            )));
        }
        Ok(sum)
    }

    pub fn verify_holomorphic(&self) -> Result<VerificationReport> {
        let global = self.holo_lefschetz_global()?;
        let fixed = self.fixed_points()?;
        let local = self.local_sum_of(&fixed)?;
        Ok(VerificationReport::new(
            Model::ComplexTorus,
            Value::Exact(global),
            Value::Exact(local),
            fixed.len(),
            self.parameters(),
        ))
    }

    /// `Γ₂ ∘ Γ₁` with `Γ₁ = self`: `a₁a₂ z ≡ b₁b₂ u + (a₂c₁ + b₁c₂)`.
    pub fn compose(&self, second: &ComplexTorusCorrespondence) -> Result<Self> {
        if self.lattice != second.lattice {
            return Err(Error::InvalidParameter("composition across different lattices".into()));
        }
        self.validate()?;
        second.validate()?;
        let shift = |m: &GaussianInteger, c: &[BigRational; 2]| -> [BigRational; 2] {
            let mat = self.lattice.multiplication_matrix(m);
            let row = |i: usize| {
                BigRational::from_integer(mat[(i, 0)].clone()) * &c[0]
                    + BigRational::from_integer(mat[(i, 1)].clone()) * &c[1]
            };
            [row(0), row(1)]
        };
        let left = shift(&second.a, &self.offset);
        let right = shift(&self.b, &second.offset);
        Ok(ComplexTorusCorrespondence::new(
            self.lattice.clone(),
            self.a.mul(&second.a),
            self.b.mul(&second.b),
            [&left[0] + &right[0], &left[1] + &right[1]],
        ))
    }
}

/// The `n`-division correspondence `z ≡ n w` on `ℂ/ℤ[i]`: `a = 1`, `b = n`,
/// `n²` branches for `w`.
pub fn hecke_like(n: u32, offset: [BigRational; 2]) -> Result<ComplexTorusCorrespondence> {
    hecke_like_on(LatticeSpec::gaussian(), n, offset)
}

pub fn hecke_like_on(
    lattice: LatticeSpec,
    n: u32,
    offset: [BigRational; 2],
) -> Result<ComplexTorusCorrespondence> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "Hecke-like correspondence needs n ≥ 2, got {n}"
        )));
    }
    Ok(ComplexTorusCorrespondence::new(
        lattice,
        GaussianInteger::integer(1),
        GaussianInteger::integer(n.into()),
        offset,
    ))
}

#[derive(Clone, Debug)]
pub struct HoloFixedPoints {
    tau: ExactScalar,
    jacobian: ExactScalar,
    weight: ExactScalar,
    solutions: CongruenceSolutions,
}

impl HoloFixedPoints {
    /// `N(a − b)`.
    pub fn len(&self) -> u64 {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn weight(&self) -> &ExactScalar {
        &self.weight
    }

    /// Adds the weight of every enumerated point, checking each against
    /// `(a − b) z ≡ c`. Numerators are accumulated over the weight's common
    /// denominator and reduced once at the end.
    pub fn weight_sum(&self) -> Result<ExactScalar> {
        let den = self.weight.re().denom().lcm(self.weight.im().denom());
        let step_re = self.weight.re().numer() * (&den / self.weight.re().denom());
        let step_im = self.weight.im().numer() * (&den / self.weight.im().denom());
        let mut acc_re = BigInt::zero();
        let mut acc_im = BigInt::zero();
        let mut bad = None;
        self.solutions.for_each_scaled(|p| {
            if bad.is_none() && !self.solutions.satisfies(p) {
                bad = Some(p.to_vec());
            }
            acc_re += &step_re;
            acc_im += &step_im;
        });
        match bad {
            Some(p) => Err(Error::Inconsistent(format!(
                "enumerated point {p:?}/{} does not solve (a−b)z ≡ c",
                self.solutions.modulus()
            ))),
            None => Ok(ExactScalar::gaussian(
                BigRational::new(acc_re, den.clone()),
                BigRational::new(acc_im, den),
            )),
        }
    }

    pub fn points(&self) -> Vec<HoloFixedPoint> {
        self.solutions
            .points()
            .into_iter()
            .map(|x| {
                let location = ExactScalar::rational(x[0].clone()).promote()
                    + &ExactScalar::rational(x[1].clone()) * &self.tau;
                HoloFixedPoint {
                    coords: [x[0].clone(), x[1].clone()],
                    location,
                    jacobian: self.jacobian.clone(),
                    weight: self.weight.clone(),
                }
            })
            .collect()
    }
}

/// Degree of a multiplier as a machine integer, for sweeps.
pub fn norm_u64(m: &GaussianInteger) -> Option<u64> {
    m.norm().to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussianInteger {
        s.parse().unwrap()
    }

    fn zero2() -> [BigRational; 2] {
        [BigRational::zero(), BigRational::zero()]
    }

    fn gauss(a: &str, b: &str) -> ComplexTorusCorrespondence {
        ComplexTorusCorrespondence::new(LatticeSpec::gaussian(), g(a), g(b), zero2())
    }

    fn generic(a: i64, b: i64) -> ComplexTorusCorrespondence {
        let tau: ExactScalar = "1/3+2*i".parse().unwrap();
        ComplexTorusCorrespondence::new(
            LatticeSpec::generic(tau).unwrap(),
            GaussianInteger::integer(a),
            GaussianInteger::integer(b),
            zero2(),
        )
    }

    fn s(x: &str) -> ExactScalar {
        x.parse().unwrap()
    }

    #[test]
    fn multiplier_syntax() {
        assert_eq!(g("1+1i"), GaussianInteger::new(1, 1));
        assert_eq!(g("3"), GaussianInteger::integer(3));
        assert_eq!(g("2-3i").to_string(), "2-3i");
        assert_eq!(g("-i").to_string(), "0-1i");
        assert!("1/2".parse::<GaussianInteger>().is_err());
    }

    #[test]
    fn validate_examples() {
        let d = gauss("1+1i", "1").validate().unwrap();
        assert_eq!((d.first, d.second), (BigInt::from(1), BigInt::from(2)));
        assert!(matches!(generic(2, 0).validate(), Err(Error::NotACovering(_))));
        let bad = ComplexTorusCorrespondence::new(
            LatticeSpec::generic(s("2i")).unwrap(),
            g("1+1i"),
            g("1"),
            zero2(),
        );
        assert!(matches!(bad.validate(), Err(Error::MultiplierNotInRing { .. })));
        assert!(LatticeSpec::generic(s("1-1*i")).is_err());
    }

    #[test]
    fn global_examples() {
        assert_eq!(generic(2, 1).holo_lefschetz_global().unwrap(), s("-1"));
        assert_eq!(gauss("2", "1").holo_lefschetz_global().unwrap(), s("-1"));
        assert_eq!(gauss("1+1i", "1").holo_lefschetz_global().unwrap(), ExactScalar::i());
        for n in 2..6 {
            let h = hecke_like(n, zero2()).unwrap();
            let n = i64::from(n);
            assert_eq!(h.holo_lefschetz_global().unwrap(), ExactScalar::from_int(n * n - n));
        }
    }

    #[test]
    fn fixed_point_examples() {
        let fp = gauss("2", "1").fixed_points().unwrap().points();
        assert_eq!(fp.len(), 1);
        assert!(fp[0].location.is_zero());
        assert_eq!(fp[0].jacobian, s("2"));
        assert_eq!(fp[0].weight, s("-1"));

        let fp = gauss("1", "2").fixed_points().unwrap().points();
        assert_eq!(fp.len(), 1);
        assert_eq!(fp[0].jacobian, s("1/2"));
        assert_eq!(fp[0].weight, s("2"));

        assert!(matches!(gauss("1", "1").fixed_points(), Err(Error::NonTransversal(_))));
    }

    #[test]
    fn local_sum_examples() {
        assert_eq!(gauss("2", "1").holomorphic_local_sum().unwrap(), s("-1"));
        assert_eq!(gauss("1+1i", "1").holomorphic_local_sum().unwrap(), ExactScalar::i());
        let c = ComplexTorusCorrespondence::new(
            LatticeSpec::gaussian(),
            g("1"),
            g("3"),
            [BigRational::new(1.into(), 5.into()), BigRational::new(2.into(), 7.into())],
        );
        assert_eq!(c.fixed_points().unwrap().len(), 4);
        assert_eq!(c.holomorphic_local_sum().unwrap(), s("6"));
    }

    #[test]
    fn fixed_points_solve_the_congruence() {
        let c = ComplexTorusCorrespondence::new(
            LatticeSpec::gaussian(),
            g("2+1i"),
            g("-1+1i"),
            [BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 3.into())],
        );
        let diff = c.a().sub(c.b()).to_scalar();
        let fps = c.fixed_points().unwrap().points();
        assert_eq!(fps.len() as u64, c.a().sub(c.b()).norm().to_u64().unwrap());
        for p in fps {
            // (a−b)z − c must be a lattice vector: integer real and imaginary parts for τ = i
            let r = &(&diff * &p.location) - &c.offset_value();
            assert!(r.re().is_integer() && r.im().is_integer(), "{r}");
            assert_eq!(&p.weight * &(ExactScalar::one() - p.jacobian.clone()), ExactScalar::one());
        }
    }

    #[test]
    fn hecke_like_family() {
        let h = hecke_like(5, [BigRational::new(1.into(), 2.into()), BigRational::zero()]).unwrap();
        let r = h.verify_holomorphic().unwrap();
        assert!(r.matches);
        assert_eq!(r.global, Value::Exact(s("20+0*i")));
        assert_eq!(r.fixed_point_count, 16);
        assert_eq!(h.fixed_points().unwrap().weight(), &s("5/4"));
        let d = h.validate().unwrap();
        assert_eq!((d.first, d.second), (BigInt::from(25), BigInt::from(1)));
        assert!(hecke_like(1, zero2()).is_err());
    }

    #[test]
    fn composition_multiplies_degrees() {
        let c = generic(3, -2);
        let sq = c.compose(&c).unwrap();
        assert_eq!(sq.validate().unwrap().first, BigInt::from(16));
        assert_eq!(sq.a(), &GaussianInteger::integer(9));
    }

    #[test]
    fn report_serialization_shape() {
        let r = gauss("1+1i", "1").verify_holomorphic().unwrap();
        assert_eq!(r.global.to_string(), "0+1*i");
        assert_eq!(r.parameters["a"], "1+1i");
        assert_eq!(r.parameters["tau"], "0+1*i");
    }
}
