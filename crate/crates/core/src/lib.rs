//! Binary hashing through sign-quantized random projections.
//!
//! Five projection families are provided: a dense Gaussian matrix, and
//! circulant or Toeplitz Gaussian matrices preceded by either a random sign
//! diagonal (`short`), a randomized Hadamard block (`extended_hadamard`) or a
//! Kac random walk rotation (`extended_kac`). Everything structured runs in
//! `O(n log n)` and is stored as a seed.
//!
//! The numeric kernels, pipelines and datasets are generic over a [`Real`]
//! scalar (`f32` or `f64`); the aliases below pin the common choices.

pub mod classifier;
pub mod cli;
pub mod data;
pub mod error;
mod kvdoc;
pub mod experiment;
pub mod pipelines;
pub mod rng;
pub mod scalar;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

pub use pipelines::{BitCode, Family, HashedDataset, Pipeline, PipelineSpec, Projection};
pub use transforms::{CirculantSpec, KacWalk, RademacherDiagonal, ToeplitzSpec};

/// Double-precision pipeline, the default everywhere in the CLI.
pub type Pipeline64 = Pipeline<f64>;
/// Single-precision pipeline.
pub type Pipeline32 = Pipeline<f32>;
pub type Dataset64 = data::DatasetMatrix<f64>;
pub type Dataset32 = data::DatasetMatrix<f32>;
pub type Circulant64 = CirculantSpec<f64>;
pub type Toeplitz64 = ToeplitzSpec<f64>;
