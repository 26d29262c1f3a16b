use super::fft::{mul_spectrum, FftPlan};
use super::{check_len, ToeplitzSpec};
use crate::{Error, Real, Result};

/// Circulant matrix given by its first row `c`: row `r` is `c` cyclically
/// shifted right by `r`, so entry `(r, s)` is `c[(s - r) mod n]`.
#[derive(Debug, Clone)]
pub struct CirculantSpec<T> {
    first_row: Vec<T>,
    fast: Fast<T>,
}

#[derive(Debug, Clone)]
enum Fast<T> {
    // power-of-two n: spectrum of the convolution kernel a[m] = c[-m mod n]
    Spectrum { plan: FftPlan<T>, re: Vec<T>, im: Vec<T> },
    // any other n goes through the Toeplitz embedding
    Embedded(Box<ToeplitzSpec<T>>),
}

impl<T: Real> CirculantSpec<T> {
    pub fn new(first_row: Vec<T>) -> Result<Self> {
        let n = first_row.len();
        if n == 0 {
            return Err(Error::dim("circulant matrix needs n > 0"));
        }
        if first_row.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation("circulant entries must be finite".into()));
        }
        let fast = if n.is_power_of_two() {
            let plan = FftPlan::new(n)?;
            let mut re: Vec<T> = (0..n).map(|m| first_row[(n - m) % n]).collect();
            let mut im = vec![T::zero(); n];
            plan.process(&mut re, &mut im, false);
            Fast::Spectrum { plan, re, im }
        } else {
            // t_d = c[-d mod n], d = r - s, stored from d = -(n-1)
            let diagonals = (0..2 * n - 1)
                .map(|idx| {
                    let d = idx as isize - (n as isize - 1);
                    first_row[(-d).rem_euclid(n as isize) as usize]
                })
                .collect();
            Fast::Embedded(Box::new(ToeplitzSpec::new(diagonals)?))
        };
        Ok(Self { first_row, fast })
    }

    /// Standard-Gaussian first row from `seed`.
    pub fn gaussian(n: usize, seed: u64) -> Result<Self> {
        Self::new(crate::rng::gaussian_vec(seed, n).into_iter().map(T::of).collect())
    }

    pub fn dimension(&self) -> usize {
        self.first_row.len()
    }

    pub fn first_row(&self) -> &[T] {
        &self.first_row
    }

    pub fn multiply(&self, x: &[T]) -> Result<Vec<T>> {
        check_len(self.dimension(), x.len(), "circulant dimension")?;
        match &self.fast {
            Fast::Spectrum { plan, re, im } => {
                let mut xr = x.to_vec();
                let mut xi = vec![T::zero(); x.len()];
                plan.process(&mut xr, &mut xi, false);
                mul_spectrum(&mut xr, &mut xi, re, im);
                plan.process(&mut xr, &mut xi, true);
                Ok(xr)
            }
            Fast::Embedded(t) => t.multiply(x),
        }
    }

    /// Row-by-row `O(n^2)` product.
    pub fn multiply_naive(&self, x: &[T]) -> Result<Vec<T>> {
        let n = self.dimension();
        check_len(n, x.len(), "circulant dimension")?;
        Ok((0..n)
            .map(|r| (0..n).map(|s| self.first_row[(s + n - r) % n] * x[s]).sum())
            .collect())
    }
}

pub fn circulant_multiply<T: Real>(spec: &CirculantSpec<T>, x: &[T]) -> Result<Vec<T>> {
    spec.multiply(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_first_row_is_identity() {
        for n in [3, 4] {
            let mut c = vec![0.0f64; n];
            c[0] = 1.0;
            let spec = CirculantSpec::new(c).unwrap();
            let x: Vec<f64> = (0..n).map(|i| i as f64 - 1.5).collect();
            let y = spec.multiply(&x).unwrap();
            for (a, b) in x.iter().zip(&y) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn row_sums() {
        let spec = CirculantSpec::new(vec![1.0f64, 2.0, 3.0]).unwrap();
        let y = spec.multiply(&[1.0, 1.0, 1.0]).unwrap();
        for v in y {
            assert!((v - 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn second_row_follows_rotation_pattern() {
        // row 1 = (c_n, c_1, ..., c_{n-1})
        let spec = CirculantSpec::new(vec![1.0f64, 2.0, 3.0, 4.0]).unwrap();
        let y = spec.multiply_naive(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(y, vec![1.0, 4.0, 3.0, 2.0]);
        let y = spec.multiply(&[0.0, 1.0, 0.0, 0.0]).unwrap();
        let want = [2.0, 1.0, 4.0, 3.0];
        for (a, b) in y.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn fast_matches_naive_n256() {
        let spec = CirculantSpec::<f64>::gaussian(256, 3).unwrap();
        let x = crate::rng::gaussian_vec(4, 256);
        let fast = spec.multiply(&x).unwrap();
        let slow = spec.multiply_naive(&x).unwrap();
        let scale = slow.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).abs() <= 1e-8 * scale);
        }
    }

    #[test]
    fn dimension_errors() {
        let spec = CirculantSpec::new(vec![1.0, 2.0]).unwrap();
        assert!(spec.multiply(&[1.0]).is_err());
        assert!(CirculantSpec::<f64>::new(vec![]).is_err());
        assert!(CirculantSpec::new(vec![f64::NAN]).is_err());
    }
}
