//! Möbius self-maps of `ℂP¹` with their canonical lifting to `O(d)`, and
//! correspondences that are unions of such graphs.
//!
//! A self-map is given by an invertible `2×2` matrix `g`: the point map is
//! `[v] ↦ [g v]` and the lifting acts on sections of `O(d)`, the binary forms
//! of degree `d`, by `P ↦ P ∘ g`.
//!
//! For `d ≥ 0`, `H¹(ℂP¹, O(d)) = 0`, so the Lefschetz number of the triple
//! `(f, φ, O(d))` is the trace on `H⁰` alone. The alternating sum runs from
//! `k = 0`: starting at `k = 1` would drop `H⁰` and make the number vanish
//! identically on `ℂP¹`, contradicting the fixed-point side
//! `Σ tr φ_p / det(1 − f_{*,p})`.
//!
//! # Local data
//!
//! If `g` has distinct eigenvalues `μ₁ ≠ μ₂`, the fixed points are the two
//! eigendirections. In the eigenbasis `g = diag(μ₁, μ₂)`, the point map in the
//! affine chart around the `μ₁`-direction is `z ↦ (μ₂/μ₁) z`, so the
//! differential there is `μ₂/μ₁`, and the lifting acts on the fibre by
//! `μ₁^d`. The local term at that point is `μ₁^d / (1 − μ₂/μ₁)`. Summing both
//! gives the complete homogeneous polynomial `h_d(μ₁, μ₂)`, the trace of
//! `Sym^d g`.
//!
//! Exact mode needs both eigenvalues in `ℚ(i)`; otherwise the local side is
//! evaluated in floating point and compared within
//! [`FLOAT_TOLERANCE`](crate::report::FLOAT_TOLERANCE).

use std::collections::BTreeMap;

use log::warn;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::report::{Model, Value, VerificationReport};
use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq)]
pub struct BundleSelfMap {
    g: QMatrix,
    degree: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BundleFixedPoint {
    pub eigenvalue: Value,
    pub other_eigenvalue: Value,
    /// Homogeneous coordinates, normalized to `[1 : t]` or `[0 : 1]`.
    pub location: [Value; 2],
    /// `f'(p) = ν/μ`.
    pub differential: Value,
    /// `φ_p = μ^d`.
    pub phi_weight: Value,
}

impl BundleFixedPoint {
    /// `φ_p / (1 − f'(p))`.
    pub fn local_term(&self) -> Value {
        match (&self.phi_weight, &self.differential) {
            (Value::Exact(phi), Value::Exact(df)) => {
                Value::Exact(phi / &(ExactScalar::one() - df.clone()))
            }
            _ => Value::Approx(
                self.phi_weight.to_complex64() / (1.0 - self.differential.to_complex64()),
            ),
        }
    }
}

/// Coefficients of a binary form, index `k` ↔ monomial `z₀^{deg−k} z₁^k`.
type BinaryForm = Vec<ExactScalar>;

fn multiply_forms(p: &BinaryForm, q: &BinaryForm) -> BinaryForm {
    let mut out = vec![ExactScalar::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            out[i + j] += &(a * b);
        }
    }
    out
}

/// `[ℓ⁰, ℓ¹, …, ℓ^d]` for a linear form `ℓ`.
fn powers_of_linear(linear: &BinaryForm, d: usize) -> Vec<BinaryForm> {
    let mut out = Vec::with_capacity(d + 1);
    out.push(vec![ExactScalar::one()]);
    for k in 1..=d {
        let next = multiply_forms(&out[k - 1], linear);
        out.push(next);
    }
    out
}

enum Eigenpair {
    Exact(ExactScalar, ExactScalar),
    Floating(Complex64, Complex64),
}

impl BundleSelfMap {
    pub fn new(g: QMatrix, degree: i64) -> Result<Self> {
        if g.rows() != 2 || g.cols() != 2 {
            return Err(Error::ShapeMismatch(format!(
                "g must be 2x2, got {}x{}",
                g.rows(),
                g.cols()
            )));
        }
        if degree < 0 {
            return Err(Error::NegativeBundleDegree(degree));
        }
        let degree = u32::try_from(degree)
            .map_err(|_| Error::InvalidParameter(format!("bundle degree {degree} too large")))?;
        if g.det().is_zero() {
            return Err(Error::Singular(format!("det g = 0 for g = {g}")));
        }
        Ok(BundleSelfMap { g, degree })
    }

    pub fn g(&self) -> &QMatrix {
        &self.g
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn parameters(&self) -> BTreeMap<String, String> {
        BTreeMap::from([
            ("g".to_string(), self.g.to_string()),
            ("d".to_string(), self.degree.to_string()),
        ])
    }

    /// Matrix of `P ↦ P ∘ g` on `H⁰(ℂP¹, O(d))` in the monomial basis
    /// `z₀^{d−k} z₁^k`; column `k` is the image of the `k`-th monomial.
    pub fn cohomology_action(&self) -> QMatrix {
        let d = self.degree as usize;
        let g = &self.g;
        let row0 = vec![g[(0, 0)].clone(), g[(0, 1)].clone()];
        let row1 = vec![g[(1, 0)].clone(), g[(1, 1)].clone()];
        let p0 = powers_of_linear(&row0, d);
        let p1 = powers_of_linear(&row1, d);
        let mut m = QMatrix::zeros(d + 1, d + 1);
        for k in 0..=d {
            let image = multiply_forms(&p0[d - k], &p1[k]);
            for (j, coeff) in image.into_iter().enumerate() {
                m[(j, k)] = coeff;
            }
        }
        m
    }

    /// `Σ_k (−1)^k tr` on `H^k(ℂP¹, O(d))`; only `k = 0` survives.
    pub fn lefschetz_global(&self) -> ExactScalar {
        self.cohomology_action().trace()
    }

    fn discriminant(&self) -> (ExactScalar, ExactScalar, ExactScalar) {
        let tr = self.g.trace();
        let det = self.g.det();
        let disc = &tr * &tr - &ExactScalar::from_int(4) * &det;
        (tr, det, disc)
    }

    fn eigenpair(&self, force_floating: bool) -> Result<Eigenpair> {
        let (tr, det, disc) = self.discriminant();
        if disc.is_zero() {
            let half = ExactScalar::ratio(1, 2);
            return Err(Error::DegenerateEigenvalues((&tr * &half).to_string()));
        }
        if !force_floating {
            if let Some(root) = disc.exact_sqrt() {
                let half = ExactScalar::ratio(1, 2);
                let mu = &(&tr - &root) * &half;
                let nu = &(&tr + &root) * &half;
                return Ok(Eigenpair::Exact(mu, nu));
            }
            warn!(
                "eigenvalues of g = {} are not in Q(i); falling back to floating point",
                self.g
            );
        }
        let t = tr.to_complex64();
        let dt = det.to_complex64();
        let root = disc.to_complex64().sqrt();
        // larger-magnitude root first, the other from the product
        let q = if (t.conj() * root).re >= 0.0 {
            (t + root) / 2.0
        } else {
            (t - root) / 2.0
        };
        Ok(Eigenpair::Floating(q, dt / q))
    }

    /// Eigendirection for `mu` as `(v₀, v₁)`.
    fn exact_direction(&self, mu: &ExactScalar) -> [ExactScalar; 2] {
        let g = &self.g;
        let first = [g[(0, 1)].clone(), mu - &g[(0, 0)]];
        if !first[0].is_zero() || !first[1].is_zero() {
            return first;
        }
        [mu - &g[(1, 1)], g[(1, 0)].clone()]
    }

    fn floating_direction(&self, mu: Complex64) -> [Complex64; 2] {
        let g = self.g.map(ExactScalar::to_complex64);
        if !self.g[(0, 1)].is_zero() {
            return [g[(0, 1)], mu - g[(0, 0)]];
        }
        // lower triangular: eigenvalues sit on the diagonal
        if (mu - g[(0, 0)]).norm() < (mu - g[(1, 1)]).norm() {
            [mu - g[(1, 1)], g[(1, 0)]]
        } else {
            [Complex64::zero(), Complex64::one()]
        }
    }

    fn points_from(&self, pair: Eigenpair) -> Vec<BundleFixedPoint> {
        let d = self.degree;
        match pair {
            Eigenpair::Exact(mu, nu) => [(mu.clone(), nu.clone()), (nu, mu)]
                .into_iter()
                .map(|(own, other)| {
                    let v = self.exact_direction(&own);
                    let location = if v[0].is_zero() {
                        [ExactScalar::zero(), ExactScalar::one()]
                    } else {
                        [ExactScalar::one(), &v[1] / &v[0]]
                    };
                    BundleFixedPoint {
                        differential: Value::Exact(&other / &own),
                        phi_weight: Value::Exact(own.pow(d)),
                        location: location.map(Value::Exact),
                        eigenvalue: Value::Exact(own),
                        other_eigenvalue: Value::Exact(other),
                    }
                })
                .collect(),
            Eigenpair::Floating(mu, nu) => [(mu, nu), (nu, mu)]
                .into_iter()
                .map(|(own, other)| {
                    let v = self.floating_direction(own);
                    let location = if v[0].norm() == 0.0 {
                        [Complex64::zero(), Complex64::one()]
                    } else {
                        [Complex64::one(), v[1] / v[0]]
                    };
                    BundleFixedPoint {
                        differential: Value::Approx(other / own),
                        phi_weight: Value::Approx(own.powu(d)),
                        location: location.map(Value::Approx),
                        eigenvalue: Value::Approx(own),
                        other_eigenvalue: Value::Approx(other),
                    }
                })
                .collect(),
        }
    }

    /// The two fixed points with their differential and lifting weight.
    /// Exact when the eigenvalues lie in `ℚ(i)`, floating otherwise.
    pub fn fixed_point_data(&self) -> Result<Vec<BundleFixedPoint>> {
        Ok(self.points_from(self.eigenpair(false)?))
    }

    /// Like [`fixed_point_data`](Self::fixed_point_data) but always floating.
    pub fn fixed_point_data_floating(&self) -> Result<Vec<BundleFixedPoint>> {
        Ok(self.points_from(self.eigenpair(true)?))
    }

    pub fn local_sum(&self) -> Result<Value> {
        Ok(sum_terms(&self.fixed_point_data()?))
    }

    pub fn local_sum_floating(&self) -> Result<Value> {
        Ok(sum_terms(&self.fixed_point_data_floating()?))
    }

    /// Trace on `H⁰` against `Σ φ_p / (1 − f'(p))`.
    pub fn verify_fixed_point_formula(&self) -> Result<VerificationReport> {
        let local = self.local_sum()?;
        Ok(self.report(local))
    }

    /// As [`verify_fixed_point_formula`](Self::verify_fixed_point_formula) with the local side
    /// forced through floating point.
    pub fn verify_fixed_point_formula_floating(&self) -> Result<VerificationReport> {
        let local = self.local_sum_floating()?;
        Ok(self.report(local))
    }

    fn report(&self, local: Value) -> VerificationReport {
        VerificationReport::new(
            Model::Cp1,
            Value::Exact(self.lefschetz_global()),
            local,
            2,
            self.parameters(),
        )
    }
}

fn sum_terms(points: &[BundleFixedPoint]) -> Value {
    points
        .iter()
        .map(BundleFixedPoint::local_term)
        .fold(Value::Exact(ExactScalar::zero()), |acc, t| acc.add(&t))
}

/// A correspondence on `ℂP¹` that is a union of graphs of Möbius maps, all
/// lifted to the same `O(d)`.
///
/// On a simply connected base every covering correspondence whose first
/// projection is a trivial covering splits into such graphs; only this
/// decomposable case has a canonical induced endomorphism, the sum of the
/// branch actions.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphUnionCorrespondence {
    branches: Vec<BundleSelfMap>,
}

impl GraphUnionCorrespondence {
    pub fn new(branches: Vec<BundleSelfMap>) -> Result<Self> {
        let Some(first) = branches.first() else {
            return Err(Error::InvalidParameter("a union needs at least one branch".into()));
        };
        let d = first.degree();
        if branches.iter().any(|b| b.degree() != d) {
            return Err(Error::InvalidParameter(
                "all branches must lift to the same O(d)".into(),
            ));
        }
        Ok(GraphUnionCorrespondence { branches })
    }

    pub fn branches(&self) -> &[BundleSelfMap] {
        &self.branches
    }

    pub fn degree(&self) -> u32 {
        self.branches[0].degree()
    }

    pub fn parameters(&self) -> BTreeMap<String, String> {
        let gs: Vec<String> = self.branches.iter().map(|b| b.g().to_string()).collect();
        BTreeMap::from([
            ("branches".to_string(), gs.join(" | ")),
            ("d".to_string(), self.degree().to_string()),
        ])
    }

    /// `Σᵢ` of the branch actions on `H⁰`.
    pub fn cohomology_action(&self) -> QMatrix {
        let d = self.degree() as usize;
        self.branches
            .iter()
            .fold(QMatrix::zeros(d + 1, d + 1), |acc, b| {
                acc.checked_add(&b.cohomology_action()).expect("same size")
            })
    }

    pub fn lefschetz_global(&self) -> ExactScalar {
        self.cohomology_action().trace()
    }

    pub fn local_sum(&self) -> Result<Value> {
        self.branches
            .iter()
            .try_fold(Value::Exact(ExactScalar::zero()), |acc, b| {
                Ok(acc.add(&b.local_sum()?))
            })
    }

    pub fn verify_union(&self) -> Result<VerificationReport> {
        let local = self.local_sum()?;
        Ok(VerificationReport::new(
            Model::Cp1,
            Value::Exact(self.lefschetz_global()),
            local,
            2 * self.branches.len() as u64,
            self.parameters(),
        ))
    }
}

/// Absolute gap between the eigenvalues of `g`, in floating point.
pub fn eigenvalue_gap(g: &QMatrix) -> f64 {
    let tr = g.trace();
    let disc = &tr * &tr - &ExactScalar::from_int(4) * &g.det();
    disc.to_complex64().sqrt().norm()
}

/// Whether `g` is upper or lower triangular.
pub fn is_triangular(g: &QMatrix) -> bool {
    g[(0, 1)].is_zero() || g[(1, 0)].is_zero()
}

/// `h_d(x, y) = Σ_{k=0}^{d} x^{d−k} y^k`.
pub fn complete_homogeneous(x: &ExactScalar, y: &ExactScalar, d: u32) -> ExactScalar {
    (0..=d).map(|k| &x.pow(d - k) * &y.pow(k)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_scalar_matrix;

    fn map(g: &str, d: i64) -> BundleSelfMap {
        BundleSelfMap::new(parse_scalar_matrix(g).unwrap(), d).unwrap()
    }

    fn s(x: &str) -> ExactScalar {
        x.parse().unwrap()
    }

    #[test]
    fn action_examples() {
        assert_eq!(map("1,0;0,1", 4).cohomology_action(), QMatrix::identity(5));
        let m = map("1,0;0,5", 1).cohomology_action();
        assert_eq!(m, parse_scalar_matrix("1,0;0,5").unwrap());
        // g·z = (z0 + z1, z1): z0² ↦ (z0+z1)², z0z1 ↦ (z0+z1)z1, z1² ↦ z1²
        let m = map("1,1;0,1", 2).cohomology_action();
        assert_eq!(m, parse_scalar_matrix("1,0,0;2,1,0;1,1,1").unwrap());
        assert_eq!(m.trace(), s("3"));
    }

    #[test]
    fn global_examples() {
        assert_eq!(map("1,0;0,2", 1).lefschetz_global(), s("3"));
        assert_eq!(map("1,0;0,2", 3).lefschetz_global(), s("15"));
        assert_eq!(map("1,0;0,1", 5).lefschetz_global(), s("6"));
    }

    #[test]
    fn fixed_point_examples() {
        let pts = map("1,0;0,2", 1).fixed_point_data().unwrap();
        assert_eq!(pts[0].eigenvalue, Value::Exact(s("1")));
        assert_eq!(pts[0].differential, Value::Exact(s("2")));
        assert_eq!(pts[0].phi_weight, Value::Exact(s("1")));
        assert_eq!(pts[1].eigenvalue, Value::Exact(s("2")));
        assert_eq!(pts[1].differential, Value::Exact(s("1/2")));
        assert_eq!(pts[1].phi_weight, Value::Exact(s("2")));
        assert_eq!(pts[0].location, [Value::Exact(s("1")), Value::Exact(s("0"))]);
        assert_eq!(pts[1].location, [Value::Exact(s("0")), Value::Exact(s("1"))]);

        assert!(matches!(
            BundleSelfMap::new(parse_scalar_matrix("3,0;0,3").unwrap(), 1)
                .unwrap()
                .fixed_point_data(),
            Err(Error::DegenerateEigenvalues(_))
        ));

        let pts = map("0,1;1,0", 0).fixed_point_data().unwrap();
        let mut eig: Vec<String> = pts.iter().map(|p| p.eigenvalue.to_string()).collect();
        eig.sort();
        assert_eq!(eig, vec!["-1", "1"]);
        for p in &pts {
            assert_eq!(p.phi_weight, Value::Exact(s("1")));
            assert_eq!(p.differential, Value::Exact(s("-1")));
        }
    }

    #[test]
    fn verify_examples() {
        let r = map("1,0;0,2", 1).verify_fixed_point_formula().unwrap();
        assert!(r.matches);
        assert_eq!(r.local, Value::Exact(s("3")));
        let r = map("2,1;0,3", 2).verify_fixed_point_formula().unwrap();
        assert!(r.matches);
        assert_eq!(r.global, Value::Exact(s("19")));
        for lambda in ["-1", "2", "3/2"] {
            for d in 0..6 {
                let m = map(&format!("1,0;0,{lambda}"), d);
                let expect = complete_homogeneous(&s("1"), &s(lambda), d as u32);
                let r = m.verify_fixed_point_formula().unwrap();
                assert!(r.matches);
                assert_eq!(r.global, Value::Exact(expect));
            }
        }
    }

    #[test]
    fn irrational_eigenvalues_fall_back_to_floating() {
        let m = map("1,1;1,0", 4); // golden ratio
        let r = m.verify_fixed_point_formula().unwrap();
        assert!(!r.local.is_exact());
        assert!(r.matches, "{r:?}");
        assert!(r.tolerance.is_some());
    }

    #[test]
    fn gaussian_eigenvalues_stay_exact() {
        // rotation by 90°: eigenvalues ±i
        let r = map("0,-1;1,0", 3).verify_fixed_point_formula().unwrap();
        assert!(r.local.is_exact());
        assert!(r.matches);
    }

    #[test]
    fn construction_errors() {
        let g = parse_scalar_matrix("1,0;0,2").unwrap();
        assert_eq!(BundleSelfMap::new(g.clone(), -1), Err(Error::NegativeBundleDegree(-1)));
        assert!(BundleSelfMap::new(parse_scalar_matrix("1,2;2,4").unwrap(), 1).is_err());
        assert!(BundleSelfMap::new(parse_scalar_matrix("1,2,3").unwrap(), 1).is_err());
        assert!(GraphUnionCorrespondence::new(vec![]).is_err());
        let mixed = vec![
            BundleSelfMap::new(g.clone(), 1).unwrap(),
            BundleSelfMap::new(g, 2).unwrap(),
        ];
        assert!(GraphUnionCorrespondence::new(mixed).is_err());
    }

    #[test]
    fn union_examples() {
        let two = GraphUnionCorrespondence::new(vec![map("1,0;0,2", 1), map("1,0;0,2", 1)]).unwrap();
        let r = two.verify_union().unwrap();
        assert!(r.matches);
        assert_eq!(r.global, Value::Exact(s("6")));

        let mixed = GraphUnionCorrespondence::new(vec![map("1,0;0,2", 1), map("1,0;0,3", 1)]).unwrap();
        let r = mixed.verify_union().unwrap();
        assert!(r.matches);
        assert_eq!(r.local, Value::Exact(s("7")));

        let single = GraphUnionCorrespondence::new(vec![map("2,1;0,3", 2)]).unwrap();
        let r = single.verify_union().unwrap();
        let direct = map("2,1;0,3", 2).verify_fixed_point_formula().unwrap();
        assert_eq!((r.global, r.local), (direct.global, direct.local));
    }
}
