//! Seeded sweeps over bounded parameter families.
//!
//! Each trial draws from its own stream ([`TrialRng`]) in this order:
//!
//! - torus: `n = 1 + below(dim_max)`; `A` then `B` row-major, entries
//!   uniform in `[−E, E]`; then for each coordinate of `c` a denominator
//!   `q = 1 + below(denominator_max)` and numerator `below(q)`.
//! - ctorus: `a`, then `b`, each an index into the Gaussian integers of norm
//!   `≤ norm_bound` sorted by `(re, im)`; then `c` as two coordinates, drawn
//!   like a torus offset.
//! - cp1: `d = below(d_max + 1)`, then the family's matrices. A triangular
//!   draw takes two diagonal entries (`q = 1 + below(denominator_max)`,
//!   numerator in `[−E, E]`), an off-diagonal integer in `[−E, E]` and a
//!   coin for upper/lower. A complex draw takes four entries, real part then
//!   imaginary part, each `p/q` with `q` as above and `p ∈ [−Eq, Eq]`. A
//!   union draws `1 + below(branches_max)` triangular branches.
//!
//! Draws that are not coverings, not transversal, or (complex family) have
//! eigenvalue gap below `min_gap` are skipped and counted. A report line is
//! written for every verified trial, carrying the running skip count.

use std::io::Write;
use std::ops::Range;

use anyhow::{Context, Result};
use lefcorr_core::cp1::{eigenvalue_gap, BundleSelfMap, GraphUnionCorrespondence};
use lefcorr_core::ctorus::{ComplexTorusCorrespondence, GaussianInteger, LatticeSpec};
use lefcorr_core::torus::TorusCorrespondence;
use lefcorr_core::{Error, ExactScalar, QMatrix, VerificationReport, ZMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Cp1Family, SweepConfig, SweepModel};
use crate::rng::TrialRng;

/// Trials verified per parallel batch; output order is by trial index.
const BATCH: u64 = 256;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub trials: u64,
    pub skipped: u64,
    pub matches: u64,
    pub mismatches: u64,
}

impl SweepSummary {
    pub fn merge(self, other: SweepSummary) -> SweepSummary {
        SweepSummary {
            trials: self.trials + other.trials,
            skipped: self.skipped + other.skipped,
            matches: self.matches + other.matches,
            mismatches: self.mismatches + other.mismatches,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Verified(VerificationReport),
    Skipped(String),
}

/// Degenerate draws are skipped; anything else is a real failure.
fn classify(result: lefcorr_core::Result<VerificationReport>) -> Result<Outcome> {
    match result {
        Ok(r) => Ok(Outcome::Verified(r)),
        Err(
            e @ (Error::NotACovering(_)
            | Error::NonTransversal(_)
            | Error::DegenerateEigenvalues(_)
            | Error::Singular(_)),
        ) => Ok(Outcome::Skipped(e.to_string())),
        Err(e) => Err(e.into()),
    }
}

fn draw_fraction(rng: &mut TrialRng, denominator_max: i64) -> BigRational {
    let q = 1 + rng.below(denominator_max as u64) as i64;
    let p = rng.below(q as u64) as i64;
    BigRational::new(p.into(), q.into())
}

fn draw_int_matrix(rng: &mut TrialRng, n: usize, bound: i64) -> ZMatrix {
    let data = (0..n * n).map(|_| BigInt::from(rng.range_i64(-bound, bound))).collect();
    ZMatrix::from_vec(n, n, data).expect("square")
}

pub fn draw_torus(cfg: &SweepConfig, rng: &mut TrialRng) -> TorusCorrespondence {
    let n = 1 + rng.below(cfg.dim_max as u64) as usize;
    let a = draw_int_matrix(rng, n, cfg.entry_bound);
    let b = draw_int_matrix(rng, n, cfg.entry_bound);
    let c = (0..n).map(|_| draw_fraction(rng, cfg.denominator_max)).collect();
    TorusCorrespondence::new(a, b, c).expect("shapes agree")
}

/// Gaussian integers of norm `≤ bound`, sorted by `(re, im)`, zero included.
pub fn gaussian_ball(bound: u64) -> Vec<GaussianInteger> {
    let r = (bound as f64).sqrt() as i64 + 1;
    let mut out = Vec::new();
    for re in -r..=r {
        for im in -r..=r {
            if (re * re + im * im) as u64 <= bound {
                out.push(GaussianInteger::new(re, im));
            }
        }
    }
    out
}

pub fn draw_ctorus(cfg: &SweepConfig, ball: &[GaussianInteger], rng: &mut TrialRng) -> ComplexTorusCorrespondence {
    let a = ball[rng.below(ball.len() as u64) as usize].clone();
    let b = ball[rng.below(ball.len() as u64) as usize].clone();
    let c = [draw_fraction(rng, cfg.denominator_max), draw_fraction(rng, cfg.denominator_max)];
    ComplexTorusCorrespondence::new(LatticeSpec::gaussian(), a, b, c)
}

fn draw_diagonal_entry(cfg: &SweepConfig, rng: &mut TrialRng) -> ExactScalar {
    let q = 1 + rng.below(cfg.denominator_max as u64) as i64;
    let p = rng.range_i64(-cfg.entry_bound, cfg.entry_bound);
    ExactScalar::ratio(p, q)
}

pub fn draw_triangular(cfg: &SweepConfig, rng: &mut TrialRng) -> QMatrix {
    let x = draw_diagonal_entry(cfg, rng);
    let y = draw_diagonal_entry(cfg, rng);
    let off = ExactScalar::from_int(rng.range_i64(-cfg.entry_bound, cfg.entry_bound));
    let zero = ExactScalar::from_int(0);
    let rows = if rng.coin() {
        vec![vec![x, off], vec![zero, y]]
    } else {
        vec![vec![x, zero], vec![off, y]]
    };
    QMatrix::from_rows(rows).expect("2x2")
}

pub fn draw_complex(cfg: &SweepConfig, rng: &mut TrialRng) -> QMatrix {
    let part = |rng: &mut TrialRng| {
        let q = 1 + rng.below(cfg.denominator_max as u64) as i64;
        let p = rng.range_i64(-cfg.entry_bound * q, cfg.entry_bound * q);
        BigRational::new(p.into(), q.into())
    };
    let data = (0..4)
        .map(|_| {
            let re = part(rng);
            let im = part(rng);
            ExactScalar::gaussian(re, im)
        })
        .collect();
    QMatrix::from_vec(2, 2, data).expect("2x2")
}

fn cp1_trial(cfg: &SweepConfig, rng: &mut TrialRng) -> Result<Outcome> {
    let d = rng.below(u64::from(cfg.d_max) + 1) as i64;
    match cfg.family {
        Cp1Family::Triangular => {
            let g = draw_triangular(cfg, rng);
            classify(BundleSelfMap::new(g, d).and_then(|m| m.verify_fixed_point_formula()))
        }
        Cp1Family::Complex => {
            let g = draw_complex(cfg, rng);
            let gap = eigenvalue_gap(&g);
            if gap.is_nan() || gap < cfg.min_gap {
                return Ok(Outcome::Skipped(format!("eigenvalue gap {gap:e} below {}", cfg.min_gap)));
            }
            let result = BundleSelfMap::new(g, d).and_then(|m| m.verify_fixed_point_formula_floating());
            Ok(match classify(result)? {
                Outcome::Verified(mut r) => {
                    r.parameters.insert("local_mode".into(), "floating".into());
                    Outcome::Verified(r)
                }
                skipped => skipped,
            })
        }
        Cp1Family::Union => {
            let k = 1 + rng.below(cfg.branches_max as u64) as usize;
            let gs: Vec<QMatrix> = (0..k).map(|_| draw_triangular(cfg, rng)).collect();
            let branches = gs
                .into_iter()
                .map(|g| BundleSelfMap::new(g, d))
                .collect::<lefcorr_core::Result<Vec<_>>>();
            classify(
                branches
                    .and_then(GraphUnionCorrespondence::new)
                    .and_then(|u| u.verify_union()),
            )
        }
    }
}

/// Runs trial `trial` of a sweep.
pub fn run_trial(cfg: &SweepConfig, ball: &[GaussianInteger], trial: u64) -> Result<Outcome> {
    let mut rng = TrialRng::new(cfg.seed, trial);
    match cfg.model {
        SweepModel::Torus => classify(draw_torus(cfg, &mut rng).verify_theorem()),
        SweepModel::Ctorus => classify(draw_ctorus(cfg, ball, &mut rng).verify_holomorphic()),
        SweepModel::Cp1 => cp1_trial(cfg, &mut rng),
    }
}

/// Runs `trials` outcomes through `f` in index order, computing them in
/// parallel batches, and writes one JSON line per verified trial.
fn drive<F>(seed: u64, trials: Range<u64>, sink: Option<&mut dyn Write>, f: F) -> Result<SweepSummary>
where
    F: Fn(u64) -> Result<Outcome> + Sync,
{
    let mut sink = sink;
    let mut summary = SweepSummary::default();
    let mut start = trials.start;
    while start < trials.end {
        let end = (start + BATCH).min(trials.end);
        let outcomes: Vec<Result<Outcome>> = (start..end).into_par_iter().map(&f).collect();
        for (trial, outcome) in (start..end).zip(outcomes) {
            summary.trials += 1;
            match outcome.with_context(|| format!("trial {trial} (seed {seed})"))? {
                Outcome::Skipped(reason) => {
                    log::debug!("trial {trial} skipped: {reason}");
                    summary.skipped += 1;
                }
                Outcome::Verified(report) => {
                    if report.matches {
                        summary.matches += 1;
                    } else {
                        summary.mismatches += 1;
                        log::warn!("trial {trial} mismatch: {:?}", report.parameters);
                    }
                    if let Some(out) = sink.as_deref_mut() {
                        let mut report = report.with_trial(seed, trial);
                        report.skipped_degenerate = Some(summary.skipped);
                        serde_json::to_writer(&mut *out, &report)?;
                        out.write_all(b"\n")?;
                    }
                }
            }
        }
        start = end;
    }
    if let Some(out) = sink {
        out.flush()?;
    }
    Ok(summary)
}

pub fn sweep(cfg: &SweepConfig, sink: Option<&mut dyn Write>) -> Result<SweepSummary> {
    cfg.validate()?;
    let ball = gaussian_ball(cfg.norm_bound);
    drive(cfg.seed, 0..cfg.trials, sink, |t| run_trial(cfg, &ball, t))
}

/// Every ordered pair of distinct nonzero Gaussian integers with norms
/// `≤ norm_bound`, each with `offsets_per_pair` random offsets. Trial
/// `pair · offsets_per_pair + j` draws its offset like a torus offset.
pub fn exhaustive_gaussian(
    cfg: &SweepConfig,
    offsets_per_pair: u64,
    sink: Option<&mut dyn Write>,
) -> Result<SweepSummary> {
    cfg.validate()?;
    let ball: Vec<GaussianInteger> = gaussian_ball(cfg.norm_bound)
        .into_iter()
        .filter(|m| !m.is_zero())
        .collect();
    let pairs: Vec<(GaussianInteger, GaussianInteger)> = ball
        .iter()
        .flat_map(|a| ball.iter().filter(move |b| *b != a).map(move |b| (a.clone(), b.clone())))
        .collect();
    let total = pairs.len() as u64 * offsets_per_pair;
    drive(cfg.seed, 0..total, sink, |t| {
        let (a, b) = &pairs[(t / offsets_per_pair) as usize];
        let mut rng = TrialRng::new(cfg.seed, t);
        let c = [draw_fraction(&mut rng, cfg.denominator_max), draw_fraction(&mut rng, cfg.denominator_max)];
        classify(ComplexTorusCorrespondence::new(LatticeSpec::gaussian(), a.clone(), b.clone(), c).verify_holomorphic())
    })
}

/// Every ordered pair of distinct nonzero integers in `[−bound, bound]` on a
/// generic lattice `ℤ + ℤτ`, numbered from `first_trial` so the indices can
/// follow a Gaussian run in the same stream. Each trial draws `τ` (real part `p/(2q)` with
/// `|p| ≤ q`, imaginary part `(1 + below(2q))/q`, `q = 1 + below(denominator_max)`)
/// and then an offset.
pub fn exhaustive_generic(
    cfg: &SweepConfig,
    bound: i64,
    offsets_per_pair: u64,
    first_trial: u64,
    sink: Option<&mut dyn Write>,
) -> Result<SweepSummary> {
    cfg.validate()?;
    let values: Vec<i64> = (-bound..=bound).filter(|&x| x != 0).collect();
    let pairs: Vec<(i64, i64)> = values
        .iter()
        .flat_map(|&a| values.iter().filter(move |&&b| b != a).map(move |&b| (a, b)))
        .collect();
    let total = pairs.len() as u64 * offsets_per_pair;
    drive(cfg.seed, first_trial..first_trial + total, sink, |t| {
        let (a, b) = pairs[((t - first_trial) / offsets_per_pair) as usize];
        let mut rng = TrialRng::new(cfg.seed, t);
        let q = 1 + rng.below(cfg.denominator_max as u64) as i64;
        let re = BigRational::new(rng.range_i64(-q, q).into(), (2 * q).into());
        let im = BigRational::new((1 + rng.below(2 * q as u64) as i64).into(), q.into());
        let lattice = LatticeSpec::generic(ExactScalar::gaussian(re, im))?;
        let c = [draw_fraction(&mut rng, cfg.denominator_max), draw_fraction(&mut rng, cfg.denominator_max)];
        classify(
            ComplexTorusCorrespondence::new(lattice, GaussianInteger::integer(a), GaussianInteger::integer(b), c)
                .verify_holomorphic(),
        )
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AuditSummary {
    pub trials: u64,
    /// Draws that are not coverings; the integral is undefined for them.
    pub skipped: u64,
    /// Coverings with `det(A − B) = 0`: skipped by the fixed-point theorem but
    /// still audited.
    pub non_transversal: u64,
    pub equalities: u64,
    pub mismatches: u64,
}

/// Compares the diagonal-class integral with the alternating trace on torus
/// draws, using the torus draw order.
pub fn integral_audit(cfg: &SweepConfig, sink: Option<&mut dyn Write>) -> Result<AuditSummary> {
    cfg.validate()?;
    let mut audit = AuditSummary::default();
    let mut sink = sink;
    let mut start = 0;
    while start < cfg.trials {
        let end = (start + BATCH).min(cfg.trials);
        let outcomes: Vec<(bool, Result<Outcome>)> = (start..end)
            .into_par_iter()
            .map(|t| {
                let corr = draw_torus(cfg, &mut TrialRng::new(cfg.seed, t));
                (corr.is_transversal(), classify(corr.integral_check()))
            })
            .collect();
        for (trial, (transversal, outcome)) in (start..end).zip(outcomes) {
            audit.trials += 1;
            match outcome.with_context(|| format!("audit trial {trial} (seed {})", cfg.seed))? {
                Outcome::Skipped(_) => audit.skipped += 1,
                Outcome::Verified(report) => {
                    if !transversal {
                        audit.non_transversal += 1;
                    }
                    if report.matches {
                        audit.equalities += 1;
                    } else {
                        audit.mismatches += 1;
                    }
                    if let Some(out) = sink.as_deref_mut() {
                        let mut report = report.with_trial(cfg.seed, trial);
                        report.skipped_degenerate = Some(audit.skipped);
                        serde_json::to_writer(&mut *out, &report)?;
                        out.write_all(b"\n")?;
                    }
                }
            }
        }
        start = end;
    }
    Ok(audit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_ball_counts() {
        assert_eq!(gaussian_ball(1).len(), 5);
        assert_eq!(gaussian_ball(2).len(), 9);
        assert_eq!(gaussian_ball(25).len(), 81);
    }

    #[test]
    fn draws_respect_bounds() {
        let cfg = SweepConfig::new(SweepModel::Torus, 1, 5);
        for t in 0..200 {
            let corr = draw_torus(&cfg, &mut TrialRng::new(5, t));
            assert!((1..=4).contains(&corr.dimension()));
            for x in corr.a().iter().chain(corr.b().iter()) {
                assert!(x <= &BigInt::from(9) && x >= &BigInt::from(-9));
            }
            for c in corr.offset() {
                assert!(c.denom() <= &BigInt::from(12));
            }
        }
    }

    #[test]
    fn small_sweeps_have_no_mismatches() {
        for model in [SweepModel::Torus, SweepModel::Ctorus, SweepModel::Cp1] {
            let mut cfg = SweepConfig::new(model, 50, 11);
            cfg.dim_max = 2;
            let s = sweep(&cfg, None).unwrap();
            assert_eq!(s.trials, 50);
            assert_eq!(s.mismatches, 0);
            assert_eq!(s.matches + s.skipped, 50);
        }
    }
}
