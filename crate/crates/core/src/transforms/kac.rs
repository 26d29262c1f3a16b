use std::f64::consts::{PI, TAU};

use rand::Rng as _;

use super::check_len;
use crate::{rng, Error, Real, Result};

/// One Givens block acting on coordinates `i` and `j`:
/// `(x_i, x_j) -> (sin t * x_i + cos t * x_j, -cos t * x_i + sin t * x_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GivensStep {
    pub i: usize,
    pub j: usize,
    pub theta: f64,
    sin: f64,
    cos: f64,
}

impl GivensStep {
    pub fn new(i: usize, j: usize, theta: f64) -> Self {
        let (sin, cos) = theta.sin_cos();
        Self { i, j, theta, sin, cos }
    }

    /// Transposed block, itself a step with angle `pi - theta`.
    pub fn inverse(&self) -> Self {
        let mut theta = PI - self.theta;
        if theta < 0.0 {
            theta += TAU;
        }
        Self {
            i: self.i,
            j: self.j,
            theta,
            sin: self.sin,
            cos: -self.cos,
        }
    }

    #[inline]
    fn apply<T: Real>(&self, x: &mut [T]) {
        let (s, c) = (T::of(self.sin), T::of(self.cos));
        let (a, b) = (x[self.i], x[self.j]);
        x[self.i] = s * a + c * b;
        x[self.j] = s * b - c * a;
    }
}

/// Product of Givens blocks `B_1 B_2 ... B_k`, applied to a vector in step
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct KacWalk {
    dimension: usize,
    steps: Vec<GivensStep>,
}

/// `ceil(n ln n)`, natural logarithm.
pub fn default_step_count(n: usize) -> usize {
    let n = n as f64;
    (n * n.ln()).ceil() as usize
}

impl KacWalk {
    pub fn new(dimension: usize, steps: Vec<GivensStep>) -> Result<Self> {
        for (k, s) in steps.iter().enumerate() {
            if s.i >= dimension || s.j >= dimension || s.i == s.j {
                return Err(Error::dim(format!(
                    "step {k} acts on ({}, {}) in dimension {dimension}",
                    s.i, s.j
                )));
            }
            if !(0.0..TAU).contains(&s.theta) {
                return Err(Error::Domain(format!("step {k} angle {} outside [0, 2pi)", s.theta)));
            }
        }
        Ok(Self { dimension, steps })
    }

    /// Walk with [`default_step_count`] steps.
    pub fn sample_default(n: usize, seed: u64) -> Result<Self> {
        sample_kac_walk(n, default_step_count(n), seed)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn steps(&self) -> &[GivensStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Walk realizing the transpose (and inverse) of this one.
    pub fn inverse(&self) -> Self {
        Self {
            dimension: self.dimension,
            steps: self.steps.iter().rev().map(GivensStep::inverse).collect(),
        }
    }

    pub(crate) fn apply_in_place<T: Real>(&self, x: &mut [T]) {
        for step in &self.steps {
            step.apply(x);
        }
    }
}

/// Samples `step_count` rotations: `i` and `j` uniform over distinct
/// coordinate pairs (redrawing `j` on a collision) and the angle uniform on
/// `[0, 2pi)`.
pub fn sample_kac_walk(n: usize, step_count: usize, seed: u64) -> Result<KacWalk> {
    if n < 2 {
        return Err(Error::dim(format!("Kac walk needs dimension >= 2, got {n}")));
    }
    let mut r = rng::rng_from(seed);
    let mut steps = Vec::with_capacity(step_count);
    for _ in 0..step_count {
        let i = r.random_range(0..n);
        let j = loop {
            let j = r.random_range(0..n);
            if j != i {
                break j;
            }
        };
        let theta = loop {
            let t = rng::uniform01(&mut r) * TAU;
            if t < TAU {
                break t;
            }
        };
        steps.push(GivensStep::new(i, j, theta));
    }
    Ok(KacWalk { dimension: n, steps })
}

pub fn apply_kac_walk<T: Real>(walk: &KacWalk, x: &[T]) -> Result<Vec<T>> {
    check_len(walk.dimension, x.len(), "Kac walk dimension")?;
    let mut out = x.to_vec();
    walk.apply_in_place(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;
    use crate::scalar::norm2;

    #[test]
    fn dim2_always_uses_the_only_pair() {
        let w = sample_kac_walk(2, 50, 123).unwrap();
        assert!(w.steps().iter().all(|s| (s.i, s.j) == (0, 1) || (s.i, s.j) == (1, 0)));
    }

    #[test]
    fn same_seed_same_walk() {
        assert_eq!(sample_kac_walk(64, 500, 42).unwrap(), sample_kac_walk(64, 500, 42).unwrap());
        assert_ne!(sample_kac_walk(64, 500, 42).unwrap(), sample_kac_walk(64, 500, 43).unwrap());
    }

    #[test]
    fn default_step_count_1024() {
        assert_eq!(default_step_count(1024), 7098);
        assert_eq!(KacWalk::sample_default(1024, 0).unwrap().len(), 7098);
    }

    #[test]
    fn rejects_dimension_one() {
        assert!(sample_kac_walk(1, 10, 0).is_err());
    }

    #[test]
    fn steps_satisfy_invariants() {
        let w = sample_kac_walk(17, 2000, 5).unwrap();
        for s in w.steps() {
            assert!(s.i < 17 && s.j < 17 && s.i != s.j);
            assert!((0.0..TAU).contains(&s.theta));
        }
    }

    #[test]
    fn empty_walk_is_identity() {
        let w = KacWalk::new(3, vec![]).unwrap();
        assert_eq!(apply_kac_walk(&w, &[1.0, -2.0, 3.5]).unwrap(), vec![1.0, -2.0, 3.5]);
    }

    #[test]
    fn quarter_turn_block_is_identity() {
        let w = KacWalk::new(2, vec![GivensStep::new(0, 1, FRAC_PI_2)]).unwrap();
        let y = apply_kac_walk(&w, &[3.0f64, -7.0]).unwrap();
        assert!((y[0] - 3.0).abs() < 1e-15 && (y[1] + 7.0).abs() < 1e-15);
    }

    #[test]
    fn zero_angle_swaps_with_sign() {
        let w = KacWalk::new(2, vec![GivensStep::new(0, 1, 0.0)]).unwrap();
        let (a, b) = (2.5, -1.25);
        let y = apply_kac_walk(&w, &[a, b]).unwrap();
        // explicit block [[sin 0, cos 0], [-cos 0, sin 0]] = [[0, 1], [-1, 0]]
        let block = [[0.0, 1.0], [-1.0, 0.0]];
        let expect = [block[0][0] * a + block[0][1] * b, block[1][0] * a + block[1][1] * b];
        assert_eq!(y, vec![b, -a]);
        assert_eq!(y, expect.to_vec());
    }

    #[test]
    fn preserves_norm_and_inverts() {
        let w = KacWalk::sample_default(300, 8).unwrap();
        let x = crate::rng::gaussian_vec(2, 300);
        let y = apply_kac_walk(&w, &x).unwrap();
        assert!((norm2(&y) / norm2(&x) - 1.0).abs() < 1e-12);
        let back = apply_kac_walk(&w.inverse(), &y).unwrap();
        for (a, b) in x.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn new_rejects_bad_steps() {
        assert!(KacWalk::new(3, vec![GivensStep::new(1, 1, 0.5)]).is_err());
        assert!(KacWalk::new(3, vec![GivensStep::new(0, 3, 0.5)]).is_err());
        assert!(KacWalk::new(3, vec![GivensStep::new(0, 1, 7.0)]).is_err());
        assert!(apply_kac_walk(&KacWalk::new(3, vec![]).unwrap(), &[1.0]).is_err());
    }
}
