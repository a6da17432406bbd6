//! Graded traces, exterior powers, Poincaré dual bases and the signed
//! Künneth expansion of the diagonal class.
//!
//! Conventions:
//! - Multi-indices are strictly increasing tuples, ordered lexicographically.
//! - A pairing matrix for degree `k` has rows indexed by the basis of
//!   `H^{n-k}` (the `ψᵢ`) and columns by the basis of `H^k` (the `φⱼ`), with
//!   `P[i][j] = ∫ ψᵢ ∧ φⱼ`. Duality means `∫ ψᵢ ∧ ψᵢ* = +1`.
//! - The sign `(-1)^{deg ψᵢ*}` of the diagonal class is stored on each term
//!   and never folded into the basis.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, QMatrix, Ring};
use crate::scalar::ExactScalar;

/// A linear endomorphism of a graded vector space, one square block per degree.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedMap {
    dims: Vec<usize>,
    blocks: Vec<QMatrix>,
}

impl GradedMap {
    pub fn new(blocks: Vec<QMatrix>) -> Result<Self> {
        if let Some(k) = blocks.iter().position(|b| !b.is_square()) {
            return Err(Error::ShapeMismatch(format!(
                "block {k} is {}x{}",
                blocks[k].rows(),
                blocks[k].cols()
            )));
        }
        let dims = blocks.iter().map(Matrix::rows).collect();
        Ok(GradedMap { dims, blocks })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn blocks(&self) -> &[QMatrix] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> &QMatrix {
        &self.blocks[k]
    }

    pub fn checked_add(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.dims != other.dims {
            return Err(Error::ShapeMismatch(format!(
                "graded dims {:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<_>>()?;
        GradedMap::new(blocks)
    }
}

/// `Σ_k (-1)^k tr(blocks[k])`.
pub fn alternating_trace(m: &GradedMap) -> ExactScalar {
    m.blocks
        .iter()
        .enumerate()
        .fold(ExactScalar::zero(), |acc, (k, b)| {
            if k % 2 == 0 {
                acc + b.trace()
            } else {
                acc - b.trace()
            }
        })
}

/// Strictly increasing `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Sign of `dx_I ∧ dx_J` relative to `dx_{I ∪ J}` (sorted); 0 if they overlap.
pub fn wedge_sign(left: &[usize], right: &[usize]) -> i8 {
    let mut inversions = 0usize;
    for &a in left {
        for &b in right {
            if a == b {
                return 0;
            }
            if a > b {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The compound matrix `Λ^k M`: entry `[I][J]` is the minor on rows `I`,
/// columns `J`, with multi-indices in lexicographic order.
pub fn exterior_power<T: Ring>(m: &Matrix<T>, k: usize) -> Result<Matrix<T>> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "exterior power of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if k > n {
        return Err(Error::ExteriorPowerOutOfRange { k, n });
    }
    let idx = subsets(n, k);
    let size = idx.len();
    let mut out = Matrix::zeros(size, size);
    for (a, rows) in idx.iter().enumerate() {
        for (b, cols) in idx.iter().enumerate() {
            out[(a, b)] = m.select(rows, cols).det();
        }
    }
    Ok(out)
}

/// Finite-dimensional shadow of a Poincaré duality pairing on a closed
/// oriented `n`-manifold.
#[derive(Clone, Debug, PartialEq)]
pub struct PairingData {
    n: usize,
    labels: Vec<Vec<String>>,
    pairings: Vec<QMatrix>,
}

impl PairingData {
    /// `labels[k]` names the basis of `H^k`; `pairings[k]` is the
    /// `dim H^{n-k} × dim H^k` matrix of `∫ ψᵢ ∧ φⱼ`.
    pub fn new(labels: Vec<Vec<String>>, pairings: Vec<QMatrix>) -> Result<Self> {
        if labels.is_empty() || labels.len() != pairings.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} label groups for {} pairing matrices",
                labels.len(),
                pairings.len()
            )));
        }
        let n = labels.len() - 1;
        for (k, p) in pairings.iter().enumerate() {
            if p.rows() != labels[n - k].len() || p.cols() != labels[k].len() {
                return Err(Error::ShapeMismatch(format!(
                    "pairing in degree {k} is {}x{}, expected {}x{}",
                    p.rows(),
                    p.cols(),
                    labels[n - k].len(),
                    labels[k].len()
                )));
            }
        }
        Ok(PairingData {
            n,
            labels,
            pairings,
        })
    }

    /// `H*(Tⁿ)` with basis `dx_I` and `∫ dx_I ∧ dx_J = ε(I, J)`.
    pub fn torus(n: usize) -> Self {
        let labels: Vec<Vec<String>> = (0..=n)
            .map(|k| subsets(n, k).iter().map(|s| form_label(s)).collect())
            .collect();
        let pairings = (0..=n)
            .map(|k| {
                let rows = subsets(n, n - k);
                let cols = subsets(n, k);
                let mut p = QMatrix::zeros(rows.len(), cols.len());
                for (i, ri) in rows.iter().enumerate() {
                    for (j, cj) in cols.iter().enumerate() {
                        p[(i, j)] = ExactScalar::from_int(wedge_sign(ri, cj).into());
                    }
                }
                p
            })
            .collect();
        PairingData {
            n,
            labels,
            pairings,
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn labels(&self, k: usize) -> &[String] {
        &self.labels[k]
    }

    pub fn pairing(&self, k: usize) -> &QMatrix {
        &self.pairings[k]
    }
}

/// `dx_{i₁}∧…` label, `1` for the empty multi-index.
pub fn form_label(idx: &[usize]) -> String {
    if idx.is_empty() {
        return "1".into();
    }
    idx.iter()
        .map(|i| format!("dx{}", i + 1))
        .collect::<Vec<_>>()
        .join("^")
}

/// Change of basis `D` with `Σⱼ P[i][j] D[j][l] = δᵢₗ`, i.e. `D = P⁻¹`.
/// Column `l` expresses `ψₗ*` in the `H^k` basis.
pub fn dual_basis(p: &PairingData, k: usize) -> Result<QMatrix> {
    if k > p.n {
        return Err(Error::InvalidParameter(format!(
            "degree {k} exceeds dimension {}",
            p.n
        )));
    }
    p.pairings[k]
        .inverse()
        .ok_or(Error::PoincareDualityFailure { degree: k })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalTerm {
    /// Degree of `ψᵢ*`; `ψᵢ` has the complementary degree.
    pub dual_degree: usize,
    /// Index of `ψᵢ` within the basis of `H^{n - dual_degree}`.
    pub index: usize,
    pub sign: i8,
}

/// `η_Δ = Σ (-1)^{deg ψᵢ*} π₁*ψᵢ ∧ π₂*ψᵢ*` as a signed term list, together
/// with the dual bases that give each `ψᵢ*`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalClass {
    terms: Vec<DiagonalTerm>,
    duals: Vec<QMatrix>,
}

impl DiagonalClass {
    pub fn terms(&self) -> &[DiagonalTerm] {
        &self.terms
    }

    /// Dual basis matrix for degree `k` (see [`dual_basis`]).
    pub fn dual(&self, k: usize) -> &QMatrix {
        &self.duals[k]
    }
}

pub fn diagonal_class(p: &PairingData) -> Result<DiagonalClass> {
    let duals = (0..=p.n)
        .map(|k| dual_basis(p, k))
        .collect::<Result<Vec<_>>>()?;
    let terms = (0..=p.n)
        .flat_map(|k| {
            let count = p.labels[p.n - k].len();
            (0..count).map(move |index| DiagonalTerm {
                dual_degree: k,
                index,
                sign: if k % 2 == 0 { 1 } else { -1 },
            })
        })
        .collect();
    Ok(DiagonalClass { terms, duals })
}

/// `det(I - M)` by elimination, for cross-checking exterior powers.
pub fn det_one_minus(m: &QMatrix) -> ExactScalar {
    QMatrix::identity(m.rows())
        .checked_sub(m)
        .expect("square matrix")
        .det()
}

/// `Σ_k (-1)^k tr Λ^k M`.
pub fn signed_exterior_trace_sum(m: &QMatrix) -> Result<ExactScalar> {
    let mut acc = ExactScalar::zero();
    let mut sign = ExactScalar::one();
    for k in 0..=m.rows() {
        acc = acc + &sign * &exterior_power(m, k)?.trace();
        sign = -sign;
    }
    Ok(acc)
}
