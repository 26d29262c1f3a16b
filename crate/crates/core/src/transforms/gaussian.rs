use super::check_len;
use crate::{rng, Real, Result};

/// Dense `rows x cols` standard-Gaussian matrix that is never stored.
///
/// Row `r` is regenerated on demand from its own stream, so any access
/// order yields the same entries and memory stays `O(cols)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaussianMatrix {
    seed: u64,
    rows: usize,
    cols: usize,
}

impl GaussianMatrix {
    pub fn new(seed: u64, rows: usize, cols: usize) -> Self {
        Self { seed, rows, cols }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn row(&self, r: usize) -> Vec<f64> {
        rng::gaussian_vec(rng::derive_indexed(self.seed, r as u64), self.cols)
    }

    pub fn multiply<T: Real>(&self, x: &[T]) -> Result<Vec<T>> {
        check_len(self.cols, x.len(), "Gaussian matrix columns")?;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .into_iter()
                    .zip(x)
                    .map(|(g, &v)| T::of(g) * v)
                    .sum()
            })
            .collect())
    }

    /// `G x` for many vectors at once, generating each row a single time.
    pub fn multiply_many<T: Real>(&self, xs: &[&[T]]) -> Result<Vec<Vec<T>>> {
        for x in xs {
            check_len(self.cols, x.len(), "Gaussian matrix columns")?;
        }
        let mut out = vec![Vec::with_capacity(self.rows); xs.len()];
        let mut row_t = vec![T::zero(); self.cols];
        for r in 0..self.rows {
            for (dst, g) in row_t.iter_mut().zip(self.row(r)) {
                *dst = T::of(g);
            }
            for (o, x) in out.iter_mut().zip(xs) {
                o.push(row_t.iter().zip(x.iter()).map(|(&g, &v)| g * v).sum());
            }
        }
        Ok(out)
    }
}

pub fn gaussian_matrix_multiply<T: Real>(
    seed: u64,
    rows: usize,
    cols: usize,
    x: &[T],
) -> Result<Vec<T>> {
    GaussianMatrix::new(seed, rows, cols).multiply(x)
}
