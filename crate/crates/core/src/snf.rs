//! Smith normal form over ℤ and enumeration of solutions to linear
//! congruences `M x ≡ c (mod ℤⁿ)`.
//!
//! With `U M V = D = diag(d₁ | d₂ | …)` and `U`, `V` unimodular, the
//! solutions are exactly `x = V D⁻¹ (U c + m)` for `0 ≤ mᵢ < dᵢ`, one per
//! residue class. The enumerator works over a common denominator
//! `Q = den(c) · dₙ` in `i128`, so iterating millions of points costs no
//! allocation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::ZMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct SmithForm {
    /// Left unimodular factor, `rows × rows`.
    pub u: ZMatrix,
    /// Invariant factors, nonnegative, each dividing the next.
    pub diagonal: Vec<BigInt>,
    /// Right unimodular factor, `cols × cols`.
    pub v: ZMatrix,
}

fn row_axpy(m: &mut ZMatrix, target: usize, source: usize, factor: &BigInt) {
    for j in 0..m.cols() {
        let delta = factor * &m[(source, j)];
        m[(target, j)] += delta;
    }
}

fn col_axpy(m: &mut ZMatrix, target: usize, source: usize, factor: &BigInt) {
    for i in 0..m.rows() {
        let delta = factor * &m[(i, source)];
        m[(i, target)] += delta;
    }
}

fn negate_row(m: &mut ZMatrix, r: usize) {
    for j in 0..m.cols() {
        let v = -&m[(r, j)];
        m[(r, j)] = v;
    }
}

/// Computes `U`, `D`, `V` with `U · a · V = diag(D)`.
pub fn smith_normal_form(a: &ZMatrix) -> SmithForm {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m = a.clone();
    let mut u = ZMatrix::identity(rows);
    let mut v = ZMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !m[(i, j)].is_zero())
            .min_by_key(|&(i, j)| m[(i, j)].abs());
        let Some((pi, pj)) = pivot else { break };
        m.swap_rows(t, pi);
        u.swap_rows(t, pi);
        m.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if m[(i, t)].is_zero() {
                    continue;
                }
                let q = -m[(i, t)].div_floor(&m[(t, t)]);
                row_axpy(&mut m, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !m[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if m[(t, j)].is_zero() {
                    continue;
                }
                let q = -m[(t, j)].div_floor(&m[(t, t)]);
                col_axpy(&mut m, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !m[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // a smaller remainder appeared in row/column t: move it to the pivot
                let candidates = (t..rows)
                    .map(|i| (i, t))
                    .chain((t + 1..cols).map(|j| (t, j)))
                    .filter(|&(i, j)| !m[(i, j)].is_zero());
                let (bi, bj) = candidates
                    .min_by_key(|&(i, j)| m[(i, j)].abs())
                    .expect("pivot is nonzero");
                m.swap_rows(t, bi);
                u.swap_rows(t, bi);
                m.swap_cols(t, bj);
                v.swap_cols(t, bj);
                continue;
            }
            // row and column cleared; enforce divisibility of the trailing block
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !m[(i, j)].is_multiple_of(&m[(t, t)]));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    row_axpy(&mut m, t, i, &one);
                    row_axpy(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if m[(t, t)].is_negative() {
            negate_row(&mut m, t);
            negate_row(&mut u, t);
        }
    }

    let diagonal = (0..rows.min(cols)).map(|i| m[(i, i)].clone()).collect();
    SmithForm { u, diagonal, v }
}

/// Solution set of `M x ≡ c (mod ℤⁿ)` for square nonsingular integer `M`.
#[derive(Clone, Debug)]
pub struct CongruenceSolutions {
    n: usize,
    modulus: i128,
    system: Vec<i128>,
    target: Vec<i128>,
    v: Vec<i128>,
    base: Vec<i128>,
    step: Vec<i128>,
    radices: Vec<u64>,
    count: u64,
}

fn to_i128(x: &BigInt, what: &str) -> Result<i128> {
    x.to_i128()
        .ok_or_else(|| Error::Overflow(format!("{what} = {x}")))
}

fn mod_floor(x: i128, m: i128) -> i128 {
    x.rem_euclid(m)
}

impl CongruenceSolutions {
    /// Fails with `Singular` if `det M = 0`.
    pub fn new(system: &ZMatrix, offset: &[BigRational]) -> Result<Self> {
        let n = system.rows();
        if !system.is_square() || offset.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "congruence system {}x{} with offset of length {}",
                system.rows(),
                system.cols(),
                offset.len()
            )));
        }
        let snf = smith_normal_form(system);
        if snf.diagonal.iter().any(Zero::is_zero) {
            return Err(Error::Singular("congruence system has zero determinant".into()));
        }
        let den = offset
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let top = snf.diagonal.last().cloned().unwrap_or_else(BigInt::one);
        let modulus_big = &den * &top;
        let modulus = to_i128(&modulus_big, "common denominator")?;
        if modulus > i64::MAX as i128 {
            return Err(Error::Overflow(format!("common denominator {modulus_big}")));
        }

        let scaled_offset: Vec<BigInt> = offset
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();

        let mut base = Vec::with_capacity(n);
        let mut step = Vec::with_capacity(n);
        let mut radices = Vec::with_capacity(n);
        for i in 0..n {
            let d = &snf.diagonal[i];
            // den · (U c)_i, reduced modulo den · d_i
            let uc: BigInt = (0..n).map(|j| &snf.u[(i, j)] * &scaled_offset[j]).sum();
            let reduced = uc.mod_floor(&(&den * d));
            let lift = &top / d;
            base.push(to_i128(&(&reduced * &lift), "offset numerator")?);
            step.push(to_i128(&(&den * &lift), "step")?);
            radices.push(
                d.to_u64()
                    .ok_or_else(|| Error::Overflow(format!("invariant factor {d}")))?,
            );
        }
        let count = radices
            .iter()
            .try_fold(1u64, |acc, &r| acc.checked_mul(r))
            .ok_or_else(|| Error::Overflow("solution count".into()))?;

        let v = snf
            .v
            .iter()
            .map(|x| to_i128(&x.mod_floor(&modulus_big), "V entry"))
            .collect::<Result<_>>()?;
        let system_small = system
            .iter()
            .map(|x| to_i128(&x.mod_floor(&modulus_big), "system entry"))
            .collect::<Result<_>>()?;
        let target = scaled_offset
            .iter()
            .map(|x| to_i128(&(x * &top).mod_floor(&modulus_big), "target"))
            .collect::<Result<_>>()?;

        Ok(CongruenceSolutions {
            n,
            modulus,
            system: system_small,
            target,
            v,
            base,
            step,
            radices,
            count,
        })
    }

    /// Number of solutions, `|det M|`.
    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Common denominator of every solution coordinate.
    pub fn modulus(&self) -> i128 {
        self.modulus
    }

    /// Checks `M (Q x) ≡ Q c (mod Q)` for a scaled point `Q x`.
    pub fn satisfies(&self, scaled: &[i128]) -> bool {
        (0..self.n).all(|r| {
            let lhs = (0..self.n).fold(0i128, |acc, s| {
                mod_floor(acc + self.system[r * self.n + s] * scaled[s], self.modulus)
            });
            lhs == self.target[r]
        })
    }

    /// Calls `f` with every solution scaled by [`modulus`](Self::modulus),
    /// coordinates in `[0, Q)`, in mixed-radix order of the residues.
    pub fn for_each_scaled(&self, mut f: impl FnMut(&[i128])) {
        let n = self.n;
        let q = self.modulus;
        let mut digits = vec![0u64; n];
        let mut w: Vec<i128> = self.base.clone();
        let mut point = vec![0i128; n];
        for _ in 0..self.count {
            for (r, slot) in point.iter_mut().enumerate() {
                *slot = (0..n).fold(0i128, |acc, s| {
                    mod_floor(acc + self.v[r * n + s] * w[s], q)
                });
            }
            f(&point);
            // odometer increment
            for i in 0..n {
                digits[i] += 1;
                if digits[i] < self.radices[i] {
                    w[i] = mod_floor(w[i] + self.step[i], q);
                    break;
                }
                digits[i] = 0;
                w[i] = self.base[i];
            }
        }
    }

    /// Every solution as a rational vector in `[0, 1)ⁿ`.
    pub fn points(&self) -> Vec<Vec<BigRational>> {
        let q = BigInt::from(self.modulus);
        let mut out = Vec::with_capacity(self.count as usize);
        self.for_each_scaled(|p| {
            out.push(
                p.iter()
                    .map(|&x| BigRational::new(BigInt::from(x), q.clone()))
                    .collect(),
            )
        });
        out
    }
}
