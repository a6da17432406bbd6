//! Exact scalars over ℚ and ℚ(i).
//!
//! [`ExactScalar`] carries a field tag. Arithmetic promotes to the larger
//! field (`Rational` op `Gaussian` is `Gaussian`) and never demotes, so a
//! value computed on a holomorphic model keeps printing as `re+im*i` even
//! when its imaginary part cancels. Equality compares values, not tags.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Which field a scalar is declared to live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Field {
    Rational,
    Gaussian,
}

#[derive(Clone, Debug)]
pub struct ExactScalar {
    re: BigRational,
    im: BigRational,
    field: Field,
}

impl ExactScalar {
    pub fn rational(value: BigRational) -> Self {
        ExactScalar {
            re: value,
            im: BigRational::zero(),
            field: Field::Rational,
        }
    }

    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        ExactScalar {
            re,
            im,
            field: Field::Gaussian,
        }
    }

    pub fn from_int(value: i64) -> Self {
        Self::rational(BigRational::from_integer(value.into()))
    }

    /// `num/den` as a rational. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(num.into(), den.into()))
    }

    pub fn gaussian_int(re: i64, im: i64) -> Self {
        Self::gaussian(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        )
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::gaussian_int(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Same value, tagged as Gaussian.
    pub fn promote(mut self) -> Self {
        self.field = Field::Gaussian;
        self
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// True for a rational integer (zero imaginary part, denominator one).
    pub fn is_integer(&self) -> bool {
        self.im.is_zero() && self.re.is_integer()
    }

    pub fn conj(&self) -> Self {
        ExactScalar {
            re: self.re.clone(),
            im: -&self.im,
            field: self.field,
        }
    }

    /// Field norm `re² + im²`.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn checked_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(ExactScalar {
            re: &self.re / &n,
            im: -(&self.im / &n),
            field: self.field,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        other.checked_inv().map(|inv| self * &inv)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = ExactScalar::one_in(self.field);
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Sign of a real scalar; `None` if the imaginary part is nonzero.
    pub fn real_signum(&self) -> Option<i8> {
        if !self.im.is_zero() {
            return None;
        }
        Some(if self.re.is_zero() {
            0
        } else if self.re.is_positive() {
            1
        } else {
            -1
        })
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Square root inside ℚ(i), when one exists.
    ///
    /// Writes `sqrt(x + yi) = u + vi` with `u² = (x + |z|)/2`, which needs
    /// `|z|` rational and `(x + |z|)/2` a rational square.
    pub fn exact_sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let x = &self.re;
        let y = &self.im;
        let modulus = rational_sqrt(&self.norm())?;
        let two = BigRational::from_integer(2.into());
        let (u, v) = if y.is_zero() {
            if x.is_positive() {
                (rational_sqrt(x)?, BigRational::zero())
            } else {
                (BigRational::zero(), rational_sqrt(&-x)?)
            }
        } else {
            let u = rational_sqrt(&((x + &modulus) / &two))?;
            let v = y / (&two * &u);
            (u, v)
        };
        if v.is_zero() && self.field == Field::Rational {
            Some(ExactScalar::rational(u))
        } else {
            Some(ExactScalar::gaussian(u, v))
        }
    }

    fn one_in(field: Field) -> Self {
        ExactScalar {
            re: BigRational::one(),
            im: BigRational::zero(),
            field,
        }
    }
}

/// Nonnegative rational square root, if `q` is a perfect square in ℚ.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = integer_sqrt(q.numer())?;
    let d = integer_sqrt(q.denom())?;
    Some(BigRational::new(n, d))
}

fn integer_sqrt(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        self.re == other.re && self.im == other.im
    }
}

impl Eq for ExactScalar {}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        ExactScalar::from_int(v)
    }
}

impl From<BigInt> for ExactScalar {
    fn from(v: BigInt) -> Self {
        ExactScalar::rational(BigRational::from_integer(v))
    }
}

impl From<&BigInt> for ExactScalar {
    fn from(v: &BigInt) -> Self {
        ExactScalar::rational(BigRational::from_integer(v.clone()))
    }
}

impl From<BigRational> for ExactScalar {
    fn from(v: BigRational) -> Self {
        ExactScalar::rational(v)
    }
}

impl Zero for ExactScalar {
    fn zero() -> Self {
        ExactScalar::rational(BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for ExactScalar {
    fn one() -> Self {
        ExactScalar::one_in(Field::Rational)
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;

    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
            field: self.field.max(rhs.field),
        }
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;

    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
            field: self.field.max(rhs.field),
        }
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;

    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        let field = self.field.max(rhs.field);
        if self.im.is_zero() && rhs.im.is_zero() {
            return ExactScalar {
                re: &self.re * &rhs.re,
                im: BigRational::zero(),
                field,
            };
        }
        ExactScalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
            field,
        }
    }
}

impl<'a> Div<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;

    /// Panics on division by zero, like the integer types.
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;

    fn neg(self) -> ExactScalar {
        ExactScalar {
            re: -&self.re,
            im: -&self.im,
            field: self.field,
        }
    }
}

macro_rules! forward_owned_binop {
    ($($trait:ident :: $method:ident),*) => {$(
        impl $trait for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &'a ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned_binop!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for ExactScalar {
    type Output = ExactScalar;

    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        self.re += &rhs.re;
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
        self.field = self.field.max(rhs.field);
    }
}

impl Sum for ExactScalar {
    fn sum<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl<'a> Sum<&'a ExactScalar> for ExactScalar {
    fn sum<I: Iterator<Item = &'a ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

/// `p/q` with `q > 0` in lowest terms, `/1` omitted.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.field {
            Field::Rational => f.write_str(&format_rational(&self.re)),
            Field::Gaussian => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(
                    f,
                    "{}{}{}*i",
                    format_rational(&self.re),
                    sign,
                    format_rational(&self.im.abs())
                )
            }
        }
    }
}

/// Parses `p`, `p/q`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

fn parse_imaginary_coefficient(s: &str) -> Result<BigRational> {
    let body = s
        .strip_suffix("*i")
        .or_else(|| s.strip_suffix('i'))
        .ok_or_else(|| Error::Parse(format!("imaginary part must end in i: {s:?}")))?;
    match body {
        "" | "+" => Ok(BigRational::one()),
        "-" => Ok(-BigRational::one()),
        _ => parse_rational(body),
    }
}

impl FromStr for ExactScalar {
    type Err = Error;

    /// Accepts `p/q`, `x+y*i`, `x+yi`, `yi`, `-i`. A string containing `i`
    /// is tagged Gaussian even if its imaginary part is zero.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        if !compact.ends_with('i') {
            return parse_rational(&compact).map(ExactScalar::rational);
        }
        let split = compact
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(idx, _)| idx)
            .last();
        match split {
            Some(idx) => {
                let re = parse_rational(&compact[..idx])?;
                let im = parse_imaginary_coefficient(&compact[idx..])?;
                Ok(ExactScalar::gaussian(re, im))
            }
            None => Ok(ExactScalar::gaussian(
                BigRational::zero(),
                parse_imaginary_coefficient(&compact)?,
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> ExactScalar {
        text.parse().unwrap()
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(ExactScalar::ratio(4, -6).to_string(), "-2/3");
        assert_eq!(ExactScalar::from_int(-1).to_string(), "-1");
        assert_eq!(ExactScalar::i().to_string(), "0+1*i");
        let z = ExactScalar::gaussian(BigRational::new(3.into(), 2.into()), BigRational::new((-1).into(), 4.into()));
        assert_eq!(z.to_string(), "3/2-1/4*i");
    }

    #[test]
    fn parses_all_syntaxes() {
        assert_eq!(s("3/2-1/4*i"), s("3/2 - 1/4i"));
        assert_eq!(s("1+1i"), ExactScalar::gaussian_int(1, 1));
        assert_eq!(s("-i"), ExactScalar::gaussian_int(0, -1));
        assert_eq!(s("2i"), ExactScalar::gaussian_int(0, 2));
        assert_eq!(s("-3"), ExactScalar::from_int(-3));
        assert_eq!(s("1+0*i").field(), Field::Gaussian);
        assert!("1/0".parse::<ExactScalar>().is_err());
        assert!("abc".parse::<ExactScalar>().is_err());
        assert!("".parse::<ExactScalar>().is_err());
    }

    #[test]
    fn promotion_never_demotes() {
        let x = ExactScalar::i() * ExactScalar::i();
        assert_eq!(x, ExactScalar::from_int(-1));
        assert_eq!(x.field(), Field::Gaussian);
        let y = ExactScalar::from_int(2) + ExactScalar::from_int(3);
        assert_eq!(y.field(), Field::Rational);
    }

    #[test]
    fn gaussian_division() {
        // 1 / (1 - (1+i)) = 1 / (-i) = i
        let one = ExactScalar::one();
        let w = &one / &(&one - &s("1+1i"));
        assert_eq!(w, ExactScalar::i());
        assert!(one.checked_div(&ExactScalar::zero()).is_none());
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(s("9/4").exact_sqrt(), Some(ExactScalar::ratio(3, 2)));
        assert_eq!(s("-4").exact_sqrt(), Some(s("2i")));
        // (1+2i)^2 = -3+4i
        let r = s("-3+4i").exact_sqrt().unwrap();
        assert_eq!(&r * &r, s("-3+4i"));
        assert!(s("2").exact_sqrt().is_none());
        assert!(s("1+1i").exact_sqrt().is_none());
    }

    #[test]
    fn pow_matches_repeated_product() {
        let z = s("1/2+3*i");
        let mut acc = ExactScalar::one();
        for k in 0..7 {
            assert_eq!(z.pow(k), acc);
            acc = &acc * &z;
        }
    }
}
