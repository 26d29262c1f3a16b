use super::check_pow2;
use crate::{Real, Result};

/// Unnormalized in-place Walsh-Hadamard butterfly (Sylvester ordering).
///
/// `x.len()` must be a power of two; callers check.
pub fn fwht_in_place<T: Real>(x: &mut [T]) {
    let n = x.len();
    let mut h = 1;
    while h < n {
        for block in x.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*a, *b);
                *a = u + v;
                *b = u - v;
            }
        }
        h *= 2;
    }
}

/// `H x` with `H` the Hadamard matrix scaled by `1/sqrt(n)`, an orthogonal
/// involution.
pub fn fwht_normalized<T: Real>(x: &[T]) -> Result<Vec<T>> {
    check_pow2(x.len(), "fwht")?;
    let mut out = x.to_vec();
    fwht_in_place(&mut out);
    let scale = T::one() / T::of(x.len() as f64).sqrt();
    out.iter_mut().for_each(|v| *v *= scale);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::oracle;

    #[test]
    fn basis_vector_dim2() {
        let y = fwht_normalized(&[1.0, 0.0]).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert!((y[0] - s).abs() < 1e-15 && (y[1] - s).abs() < 1e-15);
    }

    #[test]
    fn constant_vector_concentrates() {
        let y = fwht_normalized(&[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(y, vec![2.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn matches_sylvester_oracle_n64() {
        let x = crate::rng::gaussian_vec(11, 64);
        let fast = fwht_normalized(&x).unwrap();
        let slow = oracle::dense_apply(&oracle::hadamard_matrix(64), &x);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_non_pow2() {
        assert!(fwht_normalized(&[1.0, 2.0, 3.0]).is_err());
        assert!(fwht_normalized::<f64>(&[]).is_err());
    }

    #[test]
    fn involution() {
        let x = crate::rng::gaussian_vec(5, 256);
        let back = fwht_normalized(&fwht_normalized(&x).unwrap()).unwrap();
        for (a, b) in x.iter().zip(&back) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}
