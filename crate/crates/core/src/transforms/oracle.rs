//! Test support: explicit dense matrices for every fast kernel.
//!
//! These build the matrix entry by entry from its definition and multiply
//! in `O(n^2)`. They share no code with the fast paths.

use super::{CirculantSpec, KacWalk, RademacherDiagonal, ToeplitzSpec};

pub type Dense = Vec<Vec<f64>>;

pub fn identity(n: usize) -> Dense {
    (0..n).map(|r| (0..n).map(|s| if r == s { 1.0 } else { 0.0 }).collect()).collect()
}

/// Sylvester Hadamard matrix scaled by `1/sqrt(n)`.
pub fn hadamard_matrix(n: usize) -> Dense {
    assert!(n.is_power_of_two());
    let mut h: Dense = vec![vec![1.0]];
    while h.len() < n {
        let m = h.len();
        let mut next = vec![vec![0.0; 2 * m]; 2 * m];
        for r in 0..m {
            for s in 0..m {
                next[r][s] = h[r][s];
                next[r][s + m] = h[r][s];
                next[r + m][s] = h[r][s];
                next[r + m][s + m] = -h[r][s];
            }
        }
        h = next;
    }
    let scale = 1.0 / (n as f64).sqrt();
    h.iter().map(|row| row.iter().map(|v| v * scale).collect()).collect()
}

pub fn diagonal_matrix(d: &RademacherDiagonal) -> Dense {
    let n = d.len();
    (0..n)
        .map(|r| (0..n).map(|s| if r == s { d.signs()[r] as f64 } else { 0.0 }).collect())
        .collect()
}

pub fn circulant_matrix(c: &CirculantSpec<f64>) -> Dense {
    let c = c.first_row();
    let n = c.len();
    // row r is c rotated right by r
    (0..n)
        .map(|r| {
            let mut row = c.to_vec();
            row.rotate_right(r);
            row
        })
        .collect()
}

pub fn toeplitz_matrix(t: &ToeplitzSpec<f64>) -> Dense {
    let n = t.dimension();
    (0..n)
        .map(|r| (0..n).map(|s| t.diagonals()[n - 1 + r - s]).collect())
        .collect()
}

/// `B_1 B_2 ... B_k` assembled from explicit blocks. Applying the walk to a
/// vector runs `B_1` first, so the product that acts on column vectors is
/// `B_k ... B_1`.
pub fn kac_matrix(w: &KacWalk) -> Dense {
    let n = w.dimension();
    let mut m = identity(n);
    for step in w.steps() {
        let mut b = identity(n);
        let (s, c) = step.theta.sin_cos();
        b[step.i][step.i] = s;
        b[step.i][step.j] = c;
        b[step.j][step.i] = -c;
        b[step.j][step.j] = s;
        m = matmul(&b, &m);
    }
    m
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![0.0; m]; n];
    for r in 0..n {
        for t in 0..k {
            let v = a[r][t];
            for s in 0..m {
                out[r][s] += v * b[t][s];
            }
        }
    }
    out
}

pub fn dense_apply(m: &Dense, x: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

/// Direct `O(n^2)` DFT summation, `1/n` on the inverse.
pub fn dft(re: &[f64], im: &[f64], inverse: bool) -> (Vec<f64>, Vec<f64>) {
    let n = re.len();
    let sign = if inverse { 1.0 } else { -1.0 };
    let scale = if inverse { 1.0 / n as f64 } else { 1.0 };
    let mut out_re = vec![0.0; n];
    let mut out_im = vec![0.0; n];
    for k in 0..n {
        for t in 0..n {
            let a = sign * std::f64::consts::TAU * ((k * t) % n) as f64 / n as f64;
            let (s, c) = a.sin_cos();
            out_re[k] += re[t] * c - im[t] * s;
            out_im[k] += re[t] * s + im[t] * c;
        }
        out_re[k] *= scale;
        out_im[k] *= scale;
    }
    (out_re, out_im)
}
