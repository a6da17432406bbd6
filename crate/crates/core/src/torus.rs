//! Affine correspondences on the real torus `Tⁿ = ℝⁿ/ℤⁿ`.
//!
//! `Γ = {(x, y) : A x ≡ B y + c (mod ℤⁿ)}` with integer `A`, `B`. The
//! projection `π₁(x, y) = x` has degree `|det B|` (for fixed `x` there are
//! `|det B|` solutions `y`), and `π₂` has degree `|det A|`.
//!
//! # Induced map on cohomology
//!
//! `H^k(Tⁿ)` has basis `dx_I`, `|I| = k`. On `Γ` the defining relation
//! differentiates to `A dx = B dy`, so `π₂*(dy) = B⁻¹A · π₁*(dx)` as
//! constant-coefficient forms, hence `π₂*(dy_J) = Σ_K (Λ^k B⁻¹A)[J][K] dx_K`.
//! The pushforward sums over the `|det B|` sheets of `π₁`, and a form
//! pulled back from the base satisfies `π₁*π₁* = |det B| · id`. Therefore
//!
//! ```text
//! π₁*π₂*|H^k = |det B| · Λ^k(B⁻¹A)
//! L(Γ) = |det B| · det(I − B⁻¹A) = sign(det B) · det(B − A)
//! ```
//!
//! No connectedness of `Γ` is needed: the relation holds on every component.
//!
//! # Fixed points
//!
//! A fixed point solves `(A − B) x ≡ c`. There are `|det(A − B)|` of them,
//! enumerated through the Smith normal form of `A − B`. `Γ` is oriented so
//! that `π₁` preserves orientation; near a fixed point it is the graph of
//! `h(x) = B⁻¹(A x − c)`, whose index is `sign det(I − B⁻¹A)`, the same at
//! every fixed point.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::{QMatrix, ZMatrix};
use crate::report::{Model, Value, VerificationReport};
use crate::scalar::ExactScalar;
use crate::snf::CongruenceSolutions;
use crate::text::format_rational_vector;
use crate::trace::{
    alternating_trace, diagonal_class, exterior_power, subsets, wedge_sign, GradedMap, PairingData,
};

/// Covering degrees of the two projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringDegrees {
    /// `deg π₁`
    pub first: BigInt,
    /// `deg π₂`
    pub second: BigInt,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorusCorrespondence {
    a: ZMatrix,
    b: ZMatrix,
    offset: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusFixedPoint {
    /// Coordinates in `[0, 1)ⁿ`.
    pub location: Vec<BigRational>,
    pub index: i8,
}

/// Reduces each entry into `[0, 1)`.
pub fn reduce_mod_one(v: &[BigRational]) -> Vec<BigRational> {
    v.iter().map(|x| x - x.floor()).collect()
}

impl TorusCorrespondence {
    /// Checks shapes only; covering and transversality are checked by the
    /// operations that need them. The offset is reduced mod `ℤⁿ`.
    pub fn new(a: ZMatrix, b: ZMatrix, offset: Vec<BigRational>) -> Result<Self> {
        let n = a.rows();
        if n == 0 || !a.is_square() || !b.is_square() || b.rows() != n || offset.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "A is {}x{}, B is {}x{}, c has length {}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols(),
                offset.len()
            )));
        }
        Ok(TorusCorrespondence {
            a,
            b,
            offset: reduce_mod_one(&offset),
        })
    }

    pub fn dimension(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &ZMatrix {
        &self.a
    }

    pub fn b(&self) -> &ZMatrix {
        &self.b
    }

    pub fn offset(&self) -> &[BigRational] {
        &self.offset
    }

    pub fn parameters(&self) -> BTreeMap<String, String> {
        BTreeMap::from([
            ("A".to_string(), self.a.to_string()),
            ("B".to_string(), self.b.to_string()),
            ("c".to_string(), format_rational_vector(&self.offset)),
        ])
    }

    /// Both projections must be finite coverings: `det A ≠ 0`, `det B ≠ 0`.
    pub fn validate(&self) -> Result<CoveringDegrees> {
        let det_a = self.a.det();
        let det_b = self.b.det();
        if det_a.is_zero() || det_b.is_zero() {
            return Err(Error::NotACovering(format!(
                "det A = {det_a}, det B = {det_b}"
            )));
        }
        Ok(CoveringDegrees {
            first: det_b.abs(),
            second: det_a.abs(),
        })
    }

    /// `det(A − B)`; zero exactly when `Γ` is not transversal to the diagonal.
    pub fn difference_det(&self) -> BigInt {
        self.a.checked_sub(&self.b).expect("same shape").det()
    }

    pub fn is_transversal(&self) -> bool {
        !self.difference_det().is_zero()
    }

    /// `B⁻¹A`, the slope of every local branch `y = h(x)`.
    fn slope(&self) -> Result<QMatrix> {
        let b_inv = self
            .b
            .to_rational()
            .inverse()
            .ok_or_else(|| Error::NotACovering("det B = 0".into()))?;
        b_inv.checked_mul(&self.a.to_rational())
    }

    /// `π₁*π₂*` on `H^k(Tⁿ)`, `k = 0..=n`.
    pub fn induced_map(&self) -> Result<GradedMap> {
        let degrees = self.validate()?;
        let slope = self.slope()?;
        let deg = ExactScalar::from(degrees.first);
        let blocks = (0..=self.dimension())
            .map(|k| exterior_power(&slope, k).map(|m| m.scale(&deg)))
            .collect::<Result<Vec<_>>>()?;
        GradedMap::new(blocks)
    }

    /// `sign(det B) · det(B − A)`.
    pub fn closed_form_lefschetz(&self) -> BigInt {
        let det_b = self.b.det();
        let d = self.b.checked_sub(&self.a).expect("same shape").det();
        if det_b.is_negative() {
            -d
        } else {
            d
        }
    }

    /// Alternating trace of [`induced_map`](Self::induced_map), checked
    /// against the closed form.
    pub fn lefschetz_global(&self) -> Result<ExactScalar> {
        let trace = alternating_trace(&self.induced_map()?);
        let closed = ExactScalar::from(self.closed_form_lefschetz());
        if trace != closed {
            return Err(Error::Inconsistent(format!(
                "alternating trace {trace} differs from sign(det B)·det(B−A) = {closed}"
            )));
        }
        Ok(trace)
    }

    /// `sign det(I − B⁻¹A)`.
    pub fn fixed_point_index(&self) -> Result<i8> {
        let slope = self.slope()?;
        let d = QMatrix::identity(self.dimension())
            .checked_sub(&slope)?
            .det();
        match d.real_signum() {
            Some(0) | None => Err(Error::NonTransversal("det(I − B⁻¹A) = 0".into())),
            Some(s) => Ok(s),
        }
    }

    pub fn fixed_points(&self) -> Result<TorusFixedPoints> {
        self.validate()?;
        let diff = self.a.checked_sub(&self.b)?;
        let solutions = match CongruenceSolutions::new(&diff, &self.offset) {
            Err(Error::Singular(_)) => {
                return Err(Error::NonTransversal(
                    "det(A − B) = 0; Γ meets the diagonal in a positive-dimensional set".into(),
                ))
            }
            other => other?,
        };
        Ok(TorusFixedPoints {
            index: self.fixed_point_index()?,
            solutions,
        })
    }

    /// Global trace against the signed count of enumerated fixed points.
    pub fn verify_theorem(&self) -> Result<VerificationReport> {
        let global = self.lefschetz_global()?;
        let fixed = self.fixed_points()?;
        let local = fixed.signed_count()?;
        Ok(VerificationReport::new(
            Model::Torus,
            Value::Exact(global),
            Value::Exact(local),
            fixed.len(),
            self.parameters(),
        ))
    }

    /// `∫_Γ η_Δ`, assembled term by term from the signed Künneth expansion.
    ///
    /// Each term `∫_Γ π₁*ψᵢ ∧ π₂*ψᵢ*` is computed by rewriting `dy` as
    /// `B⁻¹A dx`, reading off the coefficient of `dx₁∧…∧dxₙ`, and scaling by
    /// `deg π₁`, the volume of `Γ` in the orientation pulled back by `π₁`.
    pub fn diagonal_integral(&self) -> Result<ExactScalar> {
        let degrees = self.validate()?;
        let n = self.dimension();
        let slope = self.slope()?;
        let pairing = PairingData::torus(n);
        let eta = diagonal_class(&pairing)?;
        let powers = (0..=n)
            .map(|k| exterior_power(&slope, k))
            .collect::<Result<Vec<_>>>()?;
        let volume = ExactScalar::from(degrees.first);

        let mut total = ExactScalar::zero();
        for term in eta.terms() {
            let k = term.dual_degree;
            let psi = &subsets(n, n - k)[term.index];
            let dual = eta.dual(k);
            let lambda = &powers[k];
            let basis_k = subsets(n, k);
            let mut top = ExactScalar::zero();
            for j in 0..basis_k.len() {
                let coeff = &dual[(j, term.index)];
                if coeff.is_zero() {
                    continue;
                }
                // π₂* dx_J = Σ_K Λ[J][K] dx_K; dx_I ∧ dx_K is ±top only for K = Iᶜ
                for (col, target) in basis_k.iter().enumerate() {
                    let s = wedge_sign(psi, target);
                    if s == 0 {
                        continue;
                    }
                    let contrib = coeff * &lambda[(j, col)];
                    top = if s > 0 { top + contrib } else { top - contrib };
                }
            }
            let integral = &volume * &top;
            total = if term.sign > 0 {
                total + integral
            } else {
                total - integral
            };
        }
        Ok(total)
    }

    pub fn integral_check(&self) -> Result<VerificationReport> {
        let global = self.lefschetz_global()?;
        let integral = self.diagonal_integral()?;
        let count = self.difference_det().abs().to_u64().unwrap_or(u64::MAX);
        Ok(VerificationReport::new(
            Model::Torus,
            Value::Exact(global),
            Value::Exact(integral),
            count,
            self.parameters(),
        ))
    }
}

/// Lazily enumerated fixed points of a transversal torus correspondence.
#[derive(Clone, Debug)]
pub struct TorusFixedPoints {
    index: i8,
    solutions: CongruenceSolutions,
}

impl TorusFixedPoints {
    /// `|det(A − B)|`.
    pub fn len(&self) -> u64 {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn index(&self) -> i8 {
        self.index
    }

    /// `Σ ι(p)` over every enumerated point, each checked against the
    /// congruence `(A − B) p ≡ c`.
    pub fn signed_count(&self) -> Result<ExactScalar> {
        let mut total: i64 = 0;
        let mut bad = None;
        self.solutions.for_each_scaled(|p| {
            if bad.is_none() && !self.solutions.satisfies(p) {
                bad = Some(p.to_vec());
            }
            total += i64::from(self.index);
        });
        if let Some(p) = bad {
            return Err(Error::Inconsistent(format!(
                "enumerated point {p:?}/{} does not solve (A−B)x ≡ c",
                self.solutions.modulus()
            )));
        }
        Ok(ExactScalar::from_int(total))
    }

    pub fn points(&self) -> Vec<TorusFixedPoint> {
        self.solutions
            .points()
            .into_iter()
            .map(|location| TorusFixedPoint {
                location,
                index: self.index,
            })
            .collect()
    }
}

/// `|det B| · id` on `H¹`, the block of `π₁*π₁*` obtained from the
/// correspondence with `A = B`.
pub fn pushforward_pullback_block(b: &ZMatrix) -> Result<QMatrix> {
    let corr = TorusCorrespondence::new(b.clone(), b.clone(), vec![BigRational::zero(); b.rows()])?;
    let map = corr.induced_map()?;
    Ok(map.block(1).clone())
}

/// `lcm` of the offset denominators, handy for reports and sweeps.
pub fn offset_denominator(c: &[BigRational]) -> BigInt {
    c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}
