use super::spec::tags;
use super::{BitCode, Family, HashedDataset, PipelineSpec, Projection};
use crate::data::DatasetMatrix;
use crate::rng::derive_seed;
use crate::transforms::{
    fwht_in_place, CirculantSpec, GaussianMatrix, KacWalk, RademacherDiagonal, ToeplitzSpec,
};
use crate::{Error, Real, Result};

/// Isometric preprocessing applied to the padded input.
#[derive(Debug, Clone)]
pub enum Preprocess {
    /// Unstructured family: nothing.
    None,
    /// `D`.
    Diagonal(RademacherDiagonal),
    /// `D2 H D1`.
    Hadamard {
        d1: RademacherDiagonal,
        d2: RademacherDiagonal,
    },
    /// `D2 M`.
    Kac {
        walk: KacWalk,
        d2: RademacherDiagonal,
    },
}

/// The projection `P`; structured variants act on the full padded vector
/// and the first `k` coordinates are kept.
#[derive(Debug, Clone)]
pub enum ProjectionMatrix<T> {
    Gaussian(GaussianMatrix),
    Circulant(CirculantSpec<T>),
    Toeplitz(ToeplitzSpec<T>),
}

/// An immutable hashing pipeline `x -> sign(P . pre . pad(x))`.
#[derive(Debug, Clone)]
pub struct Pipeline<T = f64> {
    spec: PipelineSpec,
    pre: Preprocess,
    proj: ProjectionMatrix<T>,
    scale: T,
    seed_derived: bool,
}

// Rows processed per pass of the streamed Gaussian matrix.
const GAUSSIAN_BATCH: usize = 512;

impl<T: Real> Pipeline<T> {
    /// Derives every component from `spec.master_seed`.
    pub fn build(spec: PipelineSpec) -> Result<Self> {
        spec.validate()?;
        let n = spec.padded_dim;
        let seed = |tag| derive_seed(spec.master_seed, tag);
        let pre = match spec.family {
            Family::Unstructured => Preprocess::None,
            Family::Short => Preprocess::Diagonal(RademacherDiagonal::sample(n, seed(tags::D))),
            Family::ExtendedHadamard => Preprocess::Hadamard {
                d1: RademacherDiagonal::sample(n, seed(tags::D1)),
                d2: RademacherDiagonal::sample(n, seed(tags::D2)),
            },
            Family::ExtendedKac => Preprocess::Kac {
                walk: KacWalk::sample_default(n, seed(tags::KAC))?,
                d2: RademacherDiagonal::sample(n, seed(tags::D2)),
            },
        };
        let proj = match spec.projection {
            Projection::GaussianFull => {
                ProjectionMatrix::Gaussian(GaussianMatrix::new(seed(tags::G), spec.output_dim, n))
            }
            Projection::Circulant => {
                ProjectionMatrix::Circulant(CirculantSpec::gaussian(n, seed(tags::P))?)
            }
            Projection::Toeplitz => {
                ProjectionMatrix::Toeplitz(ToeplitzSpec::gaussian(n, seed(tags::P))?)
            }
        };
        let mut p = Self::assemble(spec, pre, proj)?;
        p.seed_derived = true;
        Ok(p)
    }

    /// Pipeline from explicit components, checked against `spec`. Such a
    /// pipeline cannot be written as a seed-only document.
    pub fn assemble(spec: PipelineSpec, pre: Preprocess, proj: ProjectionMatrix<T>) -> Result<Self> {
        spec.validate()?;
        let n = spec.padded_dim;
        let check = |what: &str, len: usize| {
            if len == n {
                Ok(())
            } else {
                Err(Error::mismatch(what, n, len))
            }
        };
        match (&pre, spec.family) {
            (Preprocess::None, Family::Unstructured) => {}
            (Preprocess::Diagonal(d), Family::Short) => check("diagonal", d.len())?,
            (Preprocess::Hadamard { d1, d2 }, Family::ExtendedHadamard) => {
                check("D1", d1.len())?;
                check("D2", d2.len())?;
            }
            (Preprocess::Kac { walk, d2 }, Family::ExtendedKac) => {
                check("Kac walk", walk.dimension())?;
                check("D2", d2.len())?;
            }
            _ => {
                return Err(Error::Config(format!(
                    "preprocessing does not match family {}",
                    spec.family
                )))
            }
        }
        match (&proj, spec.projection) {
            (ProjectionMatrix::Gaussian(g), Projection::GaussianFull) => {
                check("Gaussian columns", g.cols())?;
                if g.rows() != spec.output_dim {
                    return Err(Error::mismatch("Gaussian rows", spec.output_dim, g.rows()));
                }
            }
            (ProjectionMatrix::Circulant(c), Projection::Circulant) => check("circulant", c.dimension())?,
            (ProjectionMatrix::Toeplitz(t), Projection::Toeplitz) => check("Toeplitz", t.dimension())?,
            _ => {
                return Err(Error::Config(format!(
                    "projection matrix does not match projection {}",
                    spec.projection
                )))
            }
        }
        Ok(Self {
            spec,
            pre,
            proj,
            scale: T::one() / T::of(spec.output_dim as f64).sqrt(),
            seed_derived: false,
        })
    }

    pub fn spec(&self) -> &PipelineSpec {
        &self.spec
    }

    pub fn preprocess(&self) -> &Preprocess {
        &self.pre
    }

    pub fn projection_matrix(&self) -> &ProjectionMatrix<T> {
        &self.proj
    }

    pub fn is_seed_derived(&self) -> bool {
        self.seed_derived
    }

    pub fn kac_walk(&self) -> Option<&KacWalk> {
        match &self.pre {
            Preprocess::Kac { walk, .. } => Some(walk),
            _ => None,
        }
    }

    fn padded(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.spec.input_dim {
            return Err(Error::mismatch("input dimension", self.spec.input_dim, x.len()));
        }
        if let Some(pos) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("input coordinate {pos} is not finite")));
        }
        let mut v = Vec::with_capacity(self.spec.padded_dim);
        v.extend_from_slice(x);
        v.resize(self.spec.padded_dim, T::zero());
        Ok(v)
    }

    fn preprocess_in_place(&self, v: &mut [T]) {
        match &self.pre {
            Preprocess::None => {}
            Preprocess::Diagonal(d) => d.apply_in_place(v),
            Preprocess::Hadamard { d1, d2 } => {
                d1.apply_in_place(v);
                fwht_in_place(v);
                let s = T::one() / T::of(v.len() as f64).sqrt();
                v.iter_mut().for_each(|x| *x *= s);
                d2.apply_in_place(v);
            }
            Preprocess::Kac { walk, d2 } => {
                walk.apply_in_place(v);
                d2.apply_in_place(v);
            }
        }
    }

    fn structured(&self, v: &[T]) -> Vec<T> {
        let k = self.spec.output_dim;
        let mut y = match &self.proj {
            ProjectionMatrix::Circulant(c) => c.multiply(v),
            ProjectionMatrix::Toeplitz(t) => t.multiply(v),
            ProjectionMatrix::Gaussian(g) => g.multiply(v),
        }
        .expect("component dimensions checked at assembly");
        y.truncate(k);
        y.iter_mut().for_each(|x| *x *= self.scale);
        y
    }

    /// The linear map `(1/sqrt k) P . pre . pad(x)`, length `output_dim`.
    pub fn project(&self, x: &[T]) -> Result<Vec<T>> {
        let mut v = self.padded(x)?;
        self.preprocess_in_place(&mut v);
        Ok(self.structured(&v))
    }

    /// Bit `r` is set iff projected coordinate `r` is `>= 0`.
    pub fn hash(&self, x: &[T]) -> Result<BitCode> {
        Ok(BitCode::from_signs(&self.project(x)?))
    }

    /// Projects every row, in order.
    pub fn project_batch(&self, data: &DatasetMatrix<T>) -> Result<Vec<Vec<T>>> {
        if !data.is_empty() && data.dim() != self.spec.input_dim {
            return Err(Error::mismatch("dataset dimension", self.spec.input_dim, data.dim()));
        }
        match &self.proj {
            ProjectionMatrix::Gaussian(g) => {
                let mut out = Vec::with_capacity(data.len());
                let rows: Vec<&[T]> = data.rows().collect();
                for chunk in rows.chunks(GAUSSIAN_BATCH) {
                    let padded = chunk
                        .iter()
                        .map(|r| {
                            let mut v = self.padded(r)?;
                            self.preprocess_in_place(&mut v);
                            Ok(v)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let refs: Vec<&[T]> = padded.iter().map(Vec::as_slice).collect();
                    for mut y in g.multiply_many(&refs)? {
                        y.iter_mut().for_each(|x| *x *= self.scale);
                        out.push(y);
                    }
                }
                Ok(out)
            }
            _ => data.rows().map(|r| self.project(r)).collect(),
        }
    }

    /// Row-wise [`hash`](Self::hash) carrying labels through.
    pub fn hash_batch(&self, data: &DatasetMatrix<T>) -> Result<HashedDataset> {
        let codes = self
            .project_batch(data)?
            .iter()
            .map(|y| BitCode::from_signs(y))
            .collect();
        HashedDataset::new(self.spec.output_dim, codes, data.labels().map(<[u32]>::to_vec))
    }
}
