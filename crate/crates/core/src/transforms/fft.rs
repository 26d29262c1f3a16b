use super::{check_len, check_pow2};
use crate::{Real, Result};

/// Split real/imaginary storage of a power-of-two complex signal.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexBuffer<T> {
    pub re: Vec<T>,
    pub im: Vec<T>,
}

impl<T: Real> ComplexBuffer<T> {
    pub fn new(re: Vec<T>, im: Vec<T>) -> Result<Self> {
        check_len(re.len(), im.len(), "imaginary part length")?;
        check_pow2(re.len(), "complex buffer")?;
        Ok(Self { re, im })
    }

    pub fn from_real(re: Vec<T>) -> Result<Self> {
        let im = vec![T::zero(); re.len()];
        Self::new(re, im)
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }
}

/// Precomputed twiddles and bit-reversal permutation for one radix-2 size.
#[derive(Debug, Clone)]
pub struct FftPlan<T> {
    n: usize,
    // exp(-2 pi i k / n) for k < n/2
    tw_re: Vec<T>,
    tw_im: Vec<T>,
    rev: Vec<usize>,
}

impl<T: Real> FftPlan<T> {
    pub fn new(n: usize) -> Result<Self> {
        check_pow2(n, "fft")?;
        let bits = n.trailing_zeros();
        let rev = (0..n)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) })
            .collect();
        let (tw_re, tw_im) = (0..n / 2)
            .map(|k| {
                let a = -std::f64::consts::TAU * k as f64 / n as f64;
                (T::of(a.cos()), T::of(a.sin()))
            })
            .unzip();
        Ok(Self { n, tw_re, tw_im, rev })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// In-place iterative Cooley-Tukey. The inverse carries the `1/n` factor.
    pub fn process(&self, re: &mut [T], im: &mut [T], inverse: bool) {
        let n = self.n;
        debug_assert!(re.len() == n && im.len() == n);
        for i in 0..n {
            let j = self.rev[i];
            if i < j {
                re.swap(i, j);
                im.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..half {
                    let wr = self.tw_re[k * stride];
                    let wi = if inverse { -self.tw_im[k * stride] } else { self.tw_im[k * stride] };
                    let (a, b) = (start + k, start + k + half);
                    let tr = re[b] * wr - im[b] * wi;
                    let ti = re[b] * wi + im[b] * wr;
                    re[b] = re[a] - tr;
                    im[b] = im[a] - ti;
                    re[a] += tr;
                    im[a] += ti;
                }
            }
            len *= 2;
        }
        if inverse {
            let scale = T::one() / T::of(n as f64);
            re.iter_mut().chain(im.iter_mut()).for_each(|v| *v *= scale);
        }
    }
}

/// Discrete Fourier transform of `buf`; `inverse` applies the conjugate
/// transform scaled by `1/n`.
pub fn fft<T: Real>(buf: &ComplexBuffer<T>, inverse: bool) -> Result<ComplexBuffer<T>> {
    check_len(buf.re.len(), buf.im.len(), "imaginary part length")?;
    let plan = FftPlan::new(buf.len())?;
    let mut out = buf.clone();
    plan.process(&mut out.re, &mut out.im, inverse);
    Ok(out)
}

/// Pointwise complex product `a *= b`.
pub(crate) fn mul_spectrum<T: Real>(re: &mut [T], im: &mut [T], br: &[T], bi: &[T]) {
    for k in 0..re.len() {
        let (ar, ai) = (re[k], im[k]);
        re[k] = ar * br[k] - ai * bi[k];
        im[k] = ar * bi[k] + ai * br[k];
    }
}
