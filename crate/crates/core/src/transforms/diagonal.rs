use rand::RngCore;

use super::check_len;
use crate::{rng, Error, Real, Result};

/// Diagonal matrix with independent, equiprobable `±1` entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RademacherDiagonal {
    signs: Vec<i8>,
}

impl RademacherDiagonal {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if let Some(pos) = signs.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::Validation(format!(
                "diagonal entry {pos} is {}, expected -1 or +1",
                signs[pos]
            )));
        }
        Ok(Self { signs })
    }

    pub fn identity(n: usize) -> Self {
        Self { signs: vec![1; n] }
    }

    /// One bit per entry from the seeded stream, 64 entries per draw.
    pub fn sample(n: usize, seed: u64) -> Self {
        let mut r = rng::rng_from(seed);
        let mut signs = Vec::with_capacity(n);
        let mut word = 0u64;
        for i in 0..n {
            if i % 64 == 0 {
                word = r.next_u64();
            }
            signs.push(if (word >> (i % 64)) & 1 == 1 { 1 } else { -1 });
        }
        Self { signs }
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub(crate) fn apply_in_place<T: Real>(&self, x: &mut [T]) {
        for (v, &s) in x.iter_mut().zip(&self.signs) {
            if s < 0 {
                *v = -*v;
            }
        }
    }
}

pub fn apply_diagonal<T: Real>(d: &RademacherDiagonal, x: &[T]) -> Result<Vec<T>> {
    check_len(d.len(), x.len(), "diagonal dimension")?;
    let mut out = x.to_vec();
    d.apply_in_place(&mut out);
    Ok(out)
}
