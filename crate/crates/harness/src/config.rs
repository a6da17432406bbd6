use std::path::PathBuf;

use clap::ValueEnum;
use lefcorr_core::Model;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepModel {
    Torus,
    Ctorus,
    Cp1,
}

impl SweepModel {
    pub fn model(self) -> Model {
        match self {
            SweepModel::Torus => Model::Torus,
            SweepModel::Ctorus => Model::ComplexTorus,
            SweepModel::Cp1 => Model::Cp1,
        }
    }
}

/// Which maps a `cp1` sweep draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Cp1Family {
    /// Triangular `g` with rational entries; exact on both sides.
    Triangular,
    /// Gaussian-rational `g`; local side always in floating point.
    Complex,
    /// Unions of triangular branches sharing one `d`.
    Union,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("dim_max must be between 1 and 4, got {0}")]
    Dimension(usize),
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("entry_bound {0} is too large for exact enumeration (max 1000)")]
    EntryBound(i64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub model: SweepModel,
    pub trials: u64,
    pub seed: u64,
    pub dim_max: usize,
    /// Integer entries and Gaussian parts are drawn from `[−entry_bound, entry_bound]`.
    pub entry_bound: i64,
    /// Largest denominator of offsets and rational entries.
    pub denominator_max: i64,
    /// Largest norm of a Gaussian multiplier.
    pub norm_bound: u64,
    pub d_max: u32,
    pub family: Cp1Family,
    pub branches_max: usize,
    /// Smallest eigenvalue gap accepted in the complex `cp1` family.
    pub min_gap: f64,
    pub output: Option<PathBuf>,
}

impl SweepConfig {
    pub fn new(model: SweepModel, trials: u64, seed: u64) -> Self {
        SweepConfig {
            model,
            trials,
            seed,
            dim_max: 4,
            entry_bound: 9,
            denominator_max: 12,
            norm_bound: 25,
            d_max: 12,
            family: Cp1Family::Triangular,
            branches_max: 5,
            min_gap: 0.1,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials == 0 {
            return Err(ConfigError::NoTrials);
        }
        if !(1..=4).contains(&self.dim_max) {
            return Err(ConfigError::Dimension(self.dim_max));
        }
        if self.entry_bound <= 0 {
            return Err(ConfigError::NonPositive("entry_bound"));
        }
        if self.entry_bound > 1000 {
            return Err(ConfigError::EntryBound(self.entry_bound));
        }
        if self.denominator_max <= 0 {
            return Err(ConfigError::NonPositive("denominator_max"));
        }
        if self.norm_bound == 0 {
            return Err(ConfigError::NonPositive("norm_bound"));
        }
        if self.branches_max == 0 {
            return Err(ConfigError::NonPositive("branches_max"));
        }
        if self.min_gap.is_nan() || self.min_gap <= 0.0 {
            return Err(ConfigError::NonPositive("min_gap"));
        }
        Ok(())
    }
}
