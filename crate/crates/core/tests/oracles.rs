//! Independent oracles: brute-force enumeration and expansion checks that
//! share no code path with the implementation they test.

use std::collections::BTreeSet;

use lefcorr_core::cp1::BundleSelfMap;
use lefcorr_core::ctorus::{ComplexTorusCorrespondence, GaussianInteger, LatticeSpec};
use lefcorr_core::text::{parse_int_matrix, parse_rational_vector, parse_scalar_matrix};
use lefcorr_core::torus::TorusCorrespondence;
use lefcorr_core::trace::{exterior_power, subsets};
use lefcorr_core::{ExactScalar, QMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Leibniz expansion over all permutations.
fn leibniz_det(m: &[Vec<i64>]) -> i64 {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }
    let n = m.len();
    perms(n)
        .into_iter()
        .map(|p| {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            sign * (0..n).map(|i| m[i][p[i]]).product::<i64>()
        })
        .sum()
}

#[test]
fn exterior_power_entries_are_brute_force_minors() {
    let rows: Vec<Vec<i64>> = vec![
        vec![1, -2, 3, 0],
        vec![4, 5, -6, 2],
        vec![-7, 8, 9, 1],
        vec![0, 3, -1, 5],
    ];
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    let m = QMatrix::from_i64_rows(&refs).unwrap();
    for k in 0..=4 {
        let lam = exterior_power(&m, k).unwrap();
        let idx = subsets(4, k);
        for (a, r) in idx.iter().enumerate() {
            for (b, c) in idx.iter().enumerate() {
                let minor: Vec<Vec<i64>> =
                    r.iter().map(|&i| c.iter().map(|&j| rows[i][j]).collect()).collect();
                assert_eq!(lam[(a, b)], ExactScalar::from_int(leibniz_det(&minor)));
            }
        }
    }
    assert_eq!(leibniz_det(&[vec![1, 2], vec![3, 4]]), -2);
}

/// Every `x ∈ (1/L)ℤⁿ / ℤⁿ` with `(A − B)x ≡ c`, found by scanning the grid.
fn brute_force_torus_fixed_points(a: &[Vec<i64>], b: &[Vec<i64>], c: &[BigRational]) -> BTreeSet<Vec<BigRational>> {
    let n = a.len();
    let diff: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| a[i][j] - b[i][j]).collect()).collect();
    let det = leibniz_det(&diff).abs();
    let den = c.iter().map(|x| x.denom().to_i64().unwrap()).fold(1, num_integer::lcm);
    let grid = det * den;
    let mut out = BTreeSet::new();
    let total = (grid as usize).pow(n as u32);
    for code in 0..total {
        let mut rest = code;
        let x: Vec<BigRational> = (0..n)
            .map(|_| {
                let v = rest % grid as usize;
                rest /= grid as usize;
                BigRational::new(BigInt::from(v), BigInt::from(grid))
            })
            .collect();
        let ok = (0..n).all(|i| {
            let lhs: BigRational = (0..n)
                .map(|j| BigRational::from_integer(diff[i][j].into()) * &x[j])
                .sum();
            (lhs - &c[i]).is_integer()
        });
        if ok {
            out.insert(x);
        }
    }
    out
}

#[test]
fn smith_enumeration_matches_grid_scan() {
    let cases: &[(&str, &str, &str)] = &[
        ("3", "1", "0"),
        ("5", "-2", "1/3"),
        ("2,1;0,3", "1,0;1,1", "1/2,0"),
        ("0,-1;1,0", "1,0;0,1", "0,0"),
        ("3,1;1,2", "-1,0;2,1", "1/4,2/3"),
        ("2,0,1;0,1,1;1,0,2", "0,1,0;1,0,0;0,0,1", "0,1/2,0"),
    ];
    for &(a, b, c) in cases {
        let corr = TorusCorrespondence::new(
            parse_int_matrix(a).unwrap(),
            parse_int_matrix(b).unwrap(),
            parse_rational_vector(c).unwrap(),
        )
        .unwrap();
        let to_rows = |m: &lefcorr_core::ZMatrix| -> Vec<Vec<i64>> {
            (0..m.rows())
                .map(|i| m.row(i).iter().map(|x| x.to_i64().unwrap()).collect())
                .collect()
        };
        let expected = brute_force_torus_fixed_points(&to_rows(corr.a()), &to_rows(corr.b()), corr.offset());
        let fixed = corr.fixed_points().unwrap();
        let found: BTreeSet<Vec<BigRational>> = fixed.points().into_iter().map(|p| p.location).collect();
        assert_eq!(found, expected, "A={a} B={b} c={c}");
        assert_eq!(fixed.len() as usize, expected.len());
    }
}

#[test]
fn gaussian_fixed_points_match_grid_scan() {
    let cases = [("2+1i", "1-1i", "1/2,1/3"), ("3", "1+1i", "0,0"), ("1", "3", "1/5,0")];
    for (a, b, c) in cases {
        let a: GaussianInteger = a.parse().unwrap();
        let b: GaussianInteger = b.parse().unwrap();
        let c = parse_rational_vector(c).unwrap();
        let corr = ComplexTorusCorrespondence::new(LatticeSpec::gaussian(), a.clone(), b.clone(), [c[0].clone(), c[1].clone()]);
        let diff = a.sub(&b).to_scalar();
        let target = corr.offset_value();
        // (a − b) z ≡ c has solutions with denominators dividing N(a − b)·den(c)
        let norm = a.sub(&b).norm().to_i64().unwrap();
        let den = c.iter().map(|x| x.denom().to_i64().unwrap()).fold(1, num_integer::lcm);
        let grid = norm * den;
        let mut expected = BTreeSet::new();
        for u in 0..grid {
            for v in 0..grid {
                let z = ExactScalar::gaussian(
                    BigRational::new(u.into(), grid.into()),
                    BigRational::new(v.into(), grid.into()),
                );
                let r = &(&diff * &z) - &target;
                if r.re().is_integer() && r.im().is_integer() {
                    expected.insert((z.re().clone(), z.im().clone()));
                }
            }
        }
        let found: BTreeSet<_> = corr
            .fixed_points()
            .unwrap()
            .points()
            .into_iter()
            .map(|p| (p.location.re().clone(), p.location.im().clone()))
            .collect();
        assert_eq!(found, expected);
        // weights summed by hand
        let one = ExactScalar::one();
        let w = &one / &(&one - &(&a.to_scalar() / &b.to_scalar()));
        let mut hand = ExactScalar::zero();
        for _ in 0..expected.len() {
            hand = hand + w.clone();
        }
        assert_eq!(corr.holomorphic_local_sum().unwrap(), hand);
    }
}

/// Evaluates `Σ_j m[j][k] z₀^{d−j} z₁^j` against `(g·z)₀^{d−k} (g·z)₁^k` at
/// enough sample points to pin down every binary form of degree `d`.
#[test]
fn cohomology_action_matches_pointwise_substitution() {
    for (g, d) in [("1,1;0,1", 2), ("2,-1;3,1/2", 4), ("1+1*i,2;-i,3", 3), ("0,1;1,0", 5)] {
        let map = BundleSelfMap::new(parse_scalar_matrix(g).unwrap(), d).unwrap();
        let m = map.cohomology_action();
        let gm = map.g();
        let d = d as u32;
        for t in 0..=(d + 2) {
            let z0 = ExactScalar::from_int(1);
            let z1 = ExactScalar::ratio(t as i64 - 1, 3);
            let w0 = &(&gm[(0, 0)] * &z0) + &(&gm[(0, 1)] * &z1);
            let w1 = &(&gm[(1, 0)] * &z0) + &(&gm[(1, 1)] * &z1);
            for k in 0..=d {
                let direct = &w0.pow(d - k) * &w1.pow(k);
                let via_matrix: ExactScalar = (0..=d)
                    .map(|j| &m[(j as usize, k as usize)] * &(&z0.pow(d - j) * &z1.pow(j)))
                    .sum();
                assert_eq!(direct, via_matrix, "g={g} d={d} k={k}");
            }
        }
    }
}

#[test]
fn circle_degree_maps_by_hand() {
    // x ↦ kx on S¹ (A = k, B = 1): L = 1 − k, and |1 − k| fixed points of index sign(1 − k)
    for k in -6i64..=6 {
        if k == 1 {
            continue;
        }
        let corr = TorusCorrespondence::new(
            parse_int_matrix(&k.to_string()).unwrap(),
            parse_int_matrix("1").unwrap(),
            vec![BigRational::zero()],
        )
        .unwrap();
        if k == 0 {
            assert!(corr.validate().is_err());
            continue;
        }
        let r = corr.verify_theorem().unwrap();
        assert!(r.matches);
        assert_eq!(r.global, ExactScalar::from_int(1 - k).into());
        assert_eq!(r.fixed_point_count, (1 - k).unsigned_abs());
        assert_eq!(corr.fixed_point_index().unwrap(), (1 - k).signum() as i8);
        assert!(BigInt::from(1 - k).abs() == BigInt::from(r.fixed_point_count));
    }
}
