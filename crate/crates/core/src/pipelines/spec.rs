use std::fmt;
use std::str::FromStr;

use crate::data::next_pow2;
use crate::transforms::default_step_count;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `sign(G x)` with a dense Gaussian `G`.
    Unstructured,
    /// `sign(P D x)`.
    Short,
    /// `sign(P D2 H D1 x)`.
    ExtendedHadamard,
    /// `sign(P D2 M x)` with `M` a Kac random walk.
    ExtendedKac,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Projection {
    GaussianFull,
    Circulant,
    Toeplitz,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Unstructured,
        Family::Short,
        Family::ExtendedHadamard,
        Family::ExtendedKac,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Unstructured => "unstructured",
            Family::Short => "short",
            Family::ExtendedHadamard => "extended_hadamard",
            Family::ExtendedKac => "extended_kac",
        }
    }

    pub fn is_structured(self) -> bool {
        self != Family::Unstructured
    }
}

impl Projection {
    pub const STRUCTURED: [Projection; 2] = [Projection::Circulant, Projection::Toeplitz];

    pub fn as_str(self) -> &'static str {
        match self {
            Projection::GaussianFull => "gaussian_full",
            Projection::Circulant => "circulant",
            Projection::Toeplitz => "toeplitz",
        }
    }

    pub fn is_structured(self) -> bool {
        self != Projection::GaussianFull
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for Projection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown family `{s}`")))
    }
}

impl FromStr for Projection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [Projection::GaussianFull, Projection::Circulant, Projection::Toeplitz]
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown projection `{s}`")))
    }
}

/// Seed tags for the random components.
pub(crate) mod tags {
    pub const D: &str = "diag";
    pub const D1: &str = "diag1";
    pub const D2: &str = "diag2";
    pub const P: &str = "projection";
    pub const KAC: &str = "kac";
    pub const G: &str = "gaussian";
}

/// Everything needed to rebuild a pipeline bit for bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PipelineSpec {
    pub family: Family,
    pub projection: Projection,
    pub input_dim: usize,
    pub padded_dim: usize,
    pub output_dim: usize,
    pub master_seed: u64,
}

impl PipelineSpec {
    /// Spec with `padded_dim` set to the least power of two `>= input_dim`.
    pub fn new(
        family: Family,
        projection: Projection,
        input_dim: usize,
        output_dim: usize,
        master_seed: u64,
    ) -> Result<Self> {
        let spec = Self {
            family,
            projection,
            input_dim,
            padded_dim: next_pow2(input_dim),
            output_dim,
            master_seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match (self.family.is_structured(), self.projection.is_structured()) {
            (false, true) | (true, false) => {
                return Err(Error::Config(format!(
                    "family {} cannot use projection {}",
                    self.family, self.projection
                )))
            }
            _ => {}
        }
        if self.input_dim == 0 {
            return Err(Error::dim("input_dim must be positive"));
        }
        if self.padded_dim != next_pow2(self.input_dim) {
            return Err(Error::dim(format!(
                "padded_dim {} is not the least power of two >= input_dim {}",
                self.padded_dim, self.input_dim
            )));
        }
        if self.output_dim == 0 || self.output_dim > self.padded_dim {
            return Err(Error::dim(format!(
                "output_dim {} must lie in 1..={}",
                self.output_dim, self.padded_dim
            )));
        }
        if self.family == Family::ExtendedKac && self.padded_dim < 2 {
            return Err(Error::dim("Kac walk needs a working dimension >= 2"));
        }
        Ok(())
    }

    /// `input_dim / output_dim`.
    pub fn reduction_factor(&self) -> f64 {
        self.input_dim as f64 / self.output_dim as f64
    }

    /// Number of Givens steps the Kac family samples, `ceil(n ln n)` over the
    /// padded dimension.
    pub fn kac_steps(&self) -> Option<usize> {
        (self.family == Family::ExtendedKac).then(|| default_step_count(self.padded_dim))
    }

    pub fn with_seed(mut self, master_seed: u64) -> Self {
        self.master_seed = master_seed;
        self
    }
}
