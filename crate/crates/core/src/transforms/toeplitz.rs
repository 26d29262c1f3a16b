use super::check_len;
use super::fft::{mul_spectrum, FftPlan};
use crate::{Error, Real, Result};

/// Toeplitz matrix with entry `(r, s) = t_{r-s}`. The diagonals are stored
/// as `t_{-(n-1)}, ..., t_0, ..., t_{n-1}`.
///
/// Products run through a zero-padded circulant embedding of size the next
/// power of two `>= 2n - 1`.
#[derive(Debug, Clone)]
pub struct ToeplitzSpec<T> {
    diagonals: Vec<T>,
    n: usize,
    plan: FftPlan<T>,
    spec_re: Vec<T>,
    spec_im: Vec<T>,
}

impl<T: Real> ToeplitzSpec<T> {
    pub fn new(diagonals: Vec<T>) -> Result<Self> {
        let len = diagonals.len();
        if len == 0 || len.is_multiple_of(2) {
            return Err(Error::dim(format!(
                "Toeplitz diagonals must have odd length 2n-1, got {len}"
            )));
        }
        if diagonals.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation("Toeplitz entries must be finite".into()));
        }
        let n = len.div_ceil(2);
        let size = len.next_power_of_two();
        let plan = FftPlan::new(size)?;
        let mut re = vec![T::zero(); size];
        for m in 0..n {
            re[m] = diagonals[n - 1 + m];
        }
        for m in 1..n {
            re[size - m] = diagonals[n - 1 - m];
        }
        let mut im = vec![T::zero(); size];
        plan.process(&mut re, &mut im, false);
        Ok(Self {
            diagonals,
            n,
            plan,
            spec_re: re,
            spec_im: im,
        })
    }

    /// `2n - 1` standard-Gaussian diagonals from `seed`.
    pub fn gaussian(n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::dim("Toeplitz matrix needs n > 0"));
        }
        Self::new(crate::rng::gaussian_vec(seed, 2 * n - 1).into_iter().map(T::of).collect())
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn diagonals(&self) -> &[T] {
        &self.diagonals
    }

    /// `t_d` for `-(n-1) <= d <= n-1`.
    pub fn diagonal(&self, d: isize) -> T {
        self.diagonals[(d + self.n as isize - 1) as usize]
    }

    pub fn embedding_size(&self) -> usize {
        self.plan.len()
    }

    pub fn multiply(&self, x: &[T]) -> Result<Vec<T>> {
        check_len(self.n, x.len(), "Toeplitz dimension")?;
        let size = self.plan.len();
        let mut re = vec![T::zero(); size];
        re[..self.n].copy_from_slice(x);
        let mut im = vec![T::zero(); size];
        self.plan.process(&mut re, &mut im, false);
        mul_spectrum(&mut re, &mut im, &self.spec_re, &self.spec_im);
        self.plan.process(&mut re, &mut im, true);
        re.truncate(self.n);
        Ok(re)
    }

    pub fn multiply_naive(&self, x: &[T]) -> Result<Vec<T>> {
        check_len(self.n, x.len(), "Toeplitz dimension")?;
        Ok((0..self.n)
            .map(|r| (0..self.n).map(|s| self.diagonal(r as isize - s as isize) * x[s]).sum())
            .collect())
    }
}

pub fn toeplitz_multiply<T: Real>(spec: &ToeplitzSpec<T>, x: &[T]) -> Result<Vec<T>> {
    spec.multiply(x)
}
