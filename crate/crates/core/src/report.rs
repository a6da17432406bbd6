//! Two-sided verification results.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::scalar::ExactScalar;

/// Agreement threshold for floating-point local sums, relative to
/// `max(1, |global|)`.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    Torus,
    ComplexTorus,
    Cp1,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Torus => "torus",
            Model::ComplexTorus => "ctorus",
            Model::Cp1 => "cp1",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Model {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// A side of an identity: exact, or a floating complex approximation.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(ExactScalar),
    Approx(Complex64),
}

impl Value {
    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    pub fn to_complex64(&self) -> Complex64 {
        match self {
            Value::Exact(x) => x.to_complex64(),
            Value::Approx(z) => *z,
        }
    }

    pub fn add(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(a + b),
            _ => Value::Approx(self.to_complex64() + other.to_complex64()),
        }
    }

    /// Exact equality when both sides are exact, otherwise
    /// `|a - b| ≤ FLOAT_TOLERANCE · max(1, |a|)`.
    pub fn agrees_with(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => a == b,
            _ => {
                let a = self.to_complex64();
                let b = other.to_complex64();
                (a - b).norm() <= FLOAT_TOLERANCE * a.norm().max(1.0)
            }
        }
    }
}

impl From<ExactScalar> for Value {
    fn from(x: ExactScalar) -> Self {
        Value::Exact(x)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(x) => write!(f, "{x}"),
            Value::Approx(z) => {
                let sign = if z.im.is_sign_negative() { '-' } else { '+' };
                write!(f, "~{:e}{}{:e}*i", z.re, sign, z.im.abs())
            }
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Both sides of an identity plus enough parameters to re-run the case.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub model: Model,
    pub global: Value,
    pub local: Value,
    #[serde(rename = "match")]
    pub matches: bool,
    pub fixed_point_count: u64,
    pub parameters: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped_degenerate: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl VerificationReport {
    /// Builds a report, deciding `matches` with [`Value::agrees_with`].
    pub fn new(
        model: Model,
        global: Value,
        local: Value,
        fixed_point_count: u64,
        parameters: BTreeMap<String, String>,
    ) -> Self {
        let exact = global.is_exact() && local.is_exact();
        VerificationReport {
            model,
            matches: global.agrees_with(&local),
            global,
            local,
            fixed_point_count,
            parameters,
            skipped_degenerate: None,
            seed: None,
            trial: None,
            tolerance: (!exact).then_some(FLOAT_TOLERANCE),
        }
    }

    pub fn with_trial(mut self, seed: u64, trial: u64) -> Self {
        self.seed = Some(seed);
        self.trial = Some(trial);
        self
    }
}
