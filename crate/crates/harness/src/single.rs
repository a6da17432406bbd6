//! Single verifications from command-line style text arguments.

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use lefcorr_core::cp1::{BundleSelfMap, GraphUnionCorrespondence};
use lefcorr_core::ctorus::{ComplexTorusCorrespondence, GaussianInteger, LatticeSpec};
use lefcorr_core::text::{parse_int_matrix, parse_rational_vector, parse_scalar_matrix};
use lefcorr_core::torus::TorusCorrespondence;
use lefcorr_core::{ExactScalar, VerificationReport};
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LatticeMode {
    Gaussian,
    Generic,
}

pub fn torus(a: &str, b: &str, c: Option<&str>) -> Result<VerificationReport> {
    let a = parse_int_matrix(a).context("--A")?;
    let b = parse_int_matrix(b).context("--B")?;
    let c = match c {
        Some(s) => parse_rational_vector(s).context("--c")?,
        None => vec![BigRational::zero(); a.rows()],
    };
    let corr = TorusCorrespondence::new(a, b, c)?;
    Ok(corr.verify_theorem()?)
}

pub fn lattice(mode: LatticeMode, tau: Option<&str>) -> Result<LatticeSpec> {
    match (mode, tau) {
        (LatticeMode::Gaussian, None) => Ok(LatticeSpec::gaussian()),
        (LatticeMode::Gaussian, Some(_)) => bail!("--tau only applies to --mode generic"),
        (LatticeMode::Generic, None) => bail!("--mode generic needs --tau x+y*i with y > 0"),
        (LatticeMode::Generic, Some(t)) => {
            let tau: ExactScalar = t.parse().context("--tau")?;
            Ok(LatticeSpec::generic(tau)?)
        }
    }
}

/// `"x,y"` as lattice coordinates `x + yτ`, or a single complex number
/// `"u+v*i"` rewritten in those coordinates.
pub fn parse_offset(s: &str, lattice: &LatticeSpec) -> Result<[BigRational; 2]> {
    if s.contains(',') {
        let v = parse_rational_vector(s)?;
        if v.len() != 2 {
            bail!("offset needs two coordinates, got {}", v.len());
        }
        return Ok([v[0].clone(), v[1].clone()]);
    }
    let z: ExactScalar = s.parse()?;
    let tau = lattice.tau();
    let y = z.im() / tau.im();
    let x = z.re() - &y * tau.re();
    Ok([x, y])
}

pub fn ctorus(
    mode: LatticeMode,
    tau: Option<&str>,
    a: &str,
    b: &str,
    c: Option<&str>,
) -> Result<VerificationReport> {
    let lattice = lattice(mode, tau)?;
    let a: GaussianInteger = a.parse().context("--a")?;
    let b: GaussianInteger = b.parse().context("--b")?;
    let c = match c {
        Some(s) => parse_offset(s, &lattice).context("--c")?,
        None => [BigRational::zero(), BigRational::zero()],
    };
    let corr = ComplexTorusCorrespondence::new(lattice, a, b, c);
    Ok(corr.verify_holomorphic()?)
}

/// `g` alone runs the single-map check; any `--branch` makes a union of `g`
/// (if given) and the branches.
pub fn cp1(g: Option<&str>, d: i64, branches: &[String], floating: bool) -> Result<VerificationReport> {
    let maps = g
        .into_iter()
        .chain(branches.iter().map(String::as_str))
        .map(|s| {
            let m = parse_scalar_matrix(s).with_context(|| format!("matrix {s:?}"))?;
            Ok(BundleSelfMap::new(m, d)?)
        })
        .collect::<Result<Vec<_>>>()?;
    if maps.is_empty() {
        bail!("cp1 needs --g or at least one --branch");
    }
    if branches.is_empty() {
        let map = &maps[0];
        let mut report = if floating {
            map.verify_fixed_point_formula_floating()?
        } else {
            map.verify_fixed_point_formula()?
        };
        if floating {
            report.parameters.insert("local_mode".into(), "floating".into());
        }
        return Ok(report);
    }
    if floating {
        bail!("--floating applies to a single map, not to unions");
    }
    Ok(GraphUnionCorrespondence::new(maps)?.verify_union()?)
}
