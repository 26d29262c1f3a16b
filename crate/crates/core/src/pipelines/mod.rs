//! Hashing pipelines built from [`crate::transforms`], their bit codes and
//! file formats.

mod bitcode;
mod document;
mod hashed;
mod pipeline;
mod spec;

pub use bitcode::{estimate_angle, hamming, BitCode};
pub use document::{deserialize_pipeline, serialize_pipeline, PipelineDocument, DOCUMENT_VERSION};
pub use hashed::{HashedDataset, KHSH_MAGIC, KHSH_VERSION};
pub use pipeline::{Pipeline, Preprocess, ProjectionMatrix};
pub use spec::{Family, PipelineSpec, Projection};

use crate::{Real, Result};

pub fn build_pipeline<T: Real>(spec: PipelineSpec) -> Result<Pipeline<T>> {
    Pipeline::build(spec)
}
