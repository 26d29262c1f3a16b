use crate::{Error, Result};

/// Packed sign hash of `len` bits. Bit 0 is the most significant bit of the
/// first word; pad bits after `len` are always zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitCode {
    words: Vec<u64>,
    len: usize,
}

impl BitCode {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut code = Self::zeros(bits.len());
        for (r, &b) in bits.iter().enumerate() {
            if b {
                code.set(r);
            }
        }
        code
    }

    /// Bit `r` set iff `values[r] >= 0`.
    pub fn from_signs<T: num_traits::Float>(values: &[T]) -> Self {
        let mut code = Self::zeros(values.len());
        for (r, v) in values.iter().enumerate() {
            if *v >= T::zero() {
                code.set(r);
            }
        }
        code
    }

    #[inline]
    fn set(&mut self, r: usize) {
        self.words[r / 64] |= 1u64 << (63 - r % 64);
    }

    #[inline]
    pub fn bit(&self, r: usize) -> bool {
        assert!(r < self.len, "bit {r} out of range for length {}", self.len);
        (self.words[r / 64] >> (63 - r % 64)) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|r| self.bit(r))
    }

    pub fn complement(&self) -> Self {
        let mut out = Self {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        out.clear_padding();
        out
    }

    fn clear_padding(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= !0u64 << (64 - rem);
            }
        }
    }

    /// `ceil(len / 8)` bytes, most significant bit first.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out: Vec<u8> = self.words.iter().flat_map(|w| w.to_be_bytes()).collect();
        out.truncate(self.len.div_ceil(8));
        out
    }

    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<Self> {
        let need = len.div_ceil(8);
        if bytes.len() != need {
            return Err(Error::Length {
                what: "bit code",
                expected: need,
                actual: bytes.len(),
            });
        }
        let mut code = Self::zeros(len);
        for (w, chunk) in code.words.iter_mut().zip(bytes.chunks(8)) {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            *w = u64::from_be_bytes(buf);
        }
        let before = code.words.clone();
        code.clear_padding();
        if code.words != before {
            return Err(Error::Format("nonzero padding bits in bit code".into()));
        }
        Ok(code)
    }
}

/// Number of differing bits.
pub fn hamming(a: &BitCode, b: &BitCode) -> Result<usize> {
    if a.len != b.len {
        return Err(Error::mismatch("bit code length", a.len, b.len));
    }
    Ok(a.words
        .iter()
        .zip(&b.words)
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum())
}

/// `pi * hamming / k`, the sign-projection estimate of the angle between
/// the hashed vectors.
pub fn estimate_angle(a: &BitCode, b: &BitCode) -> Result<f64> {
    let d = hamming(a, b)?;
    if a.is_empty() {
        return Err(Error::dim("cannot estimate an angle from empty codes"));
    }
    Ok(std::f64::consts::PI * d as f64 / a.len() as f64)
}
