//! Text forms used on the command line and in reports.
//!
//! Matrices are row-major, rows separated by `;` and entries by `,`:
//! `"2,0;0,2"`. Vectors are a single row: `"1/2,0"`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, QMatrix, ZMatrix};
use crate::scalar::{format_rational, parse_rational, ExactScalar};

fn parse_matrix_with<T>(s: &str, entry: impl Fn(&str) -> Result<T>) -> Result<Matrix<T>> {
    let rows = s
        .split(';')
        .map(|row| row.split(',').map(|e| entry(e.trim())).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let m = Matrix::from_rows(rows)?;
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::Parse(format!("empty matrix {s:?}")));
    }
    Ok(m)
}

pub fn parse_int_matrix(s: &str) -> Result<ZMatrix> {
    parse_matrix_with(s, |e| {
        BigInt::from_str(e).map_err(|_| Error::Parse(format!("not an integer: {e:?}")))
    })
}

pub fn parse_scalar_matrix(s: &str) -> Result<QMatrix> {
    parse_matrix_with(s, ExactScalar::from_str)
}

pub fn parse_rational_vector(s: &str) -> Result<Vec<BigRational>> {
    s.split(',').map(parse_rational).collect()
}

pub fn format_rational_vector(v: &[BigRational]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(",")
}
