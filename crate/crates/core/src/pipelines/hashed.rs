use super::BitCode;
use crate::{Error, Result};

pub const KHSH_MAGIC: &[u8; 4] = b"KHSH";
pub const KHSH_VERSION: u8 = 1;

/// Codes of one length `k`, with optional labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashedDataset {
    k: usize,
    codes: Vec<BitCode>,
    labels: Option<Vec<u32>>,
}

impl HashedDataset {
    pub fn new(k: usize, codes: Vec<BitCode>, labels: Option<Vec<u32>>) -> Result<Self> {
        if let Some(c) = codes.iter().find(|c| c.len() != k) {
            return Err(Error::mismatch("code length", k, c.len()));
        }
        if let Some(l) = &labels {
            if l.len() != codes.len() {
                return Err(Error::mismatch("label count", codes.len(), l.len()));
            }
        }
        Ok(Self { k, codes, labels })
    }

    pub fn code_len(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[BitCode] {
        &self.codes
    }

    pub fn labels(&self) -> Option<&[u32]> {
        self.labels.as_deref()
    }

    /// `KHSH` batch: magic, version byte, `k` as little-endian u32, row
    /// count as little-endian u64, then `ceil(k/8)` MSB-first bytes per row.
    /// Labels are not stored.
    pub fn to_khsh(&self) -> Vec<u8> {
        let row_bytes = self.k.div_ceil(8);
        let mut out = Vec::with_capacity(17 + row_bytes * self.codes.len());
        out.extend_from_slice(KHSH_MAGIC);
        out.push(KHSH_VERSION);
        out.extend_from_slice(&(self.k as u32).to_le_bytes());
        out.extend_from_slice(&(self.codes.len() as u64).to_le_bytes());
        for c in &self.codes {
            out.extend_from_slice(&c.to_bytes());
        }
        out
    }

    pub fn from_khsh(bytes: &[u8]) -> Result<Self> {
        let header = bytes.get(..17).ok_or(Error::Length {
            what: "KHSH header",
            expected: 17,
            actual: bytes.len(),
        })?;
        if &header[..4] != KHSH_MAGIC {
            return Err(Error::Format(format!("bad KHSH magic {:02x?}", &header[..4])));
        }
        if header[4] != KHSH_VERSION {
            return Err(Error::Format(format!("unsupported KHSH version {}", header[4])));
        }
        let k = u32::from_le_bytes(header[5..9].try_into().expect("4 bytes")) as usize;
        let rows = u64::from_le_bytes(header[9..17].try_into().expect("8 bytes")) as usize;
        let row_bytes = k.div_ceil(8);
        let need = rows
            .checked_mul(row_bytes)
            .and_then(|v| v.checked_add(17))
            .ok_or_else(|| Error::Format("KHSH row count overflows".into()))?;
        if bytes.len() != need {
            return Err(Error::Length {
                what: "KHSH payload",
                expected: need,
                actual: bytes.len(),
            });
        }
        let codes = if row_bytes == 0 {
            vec![BitCode::zeros(0); rows]
        } else {
            bytes[17..]
                .chunks_exact(row_bytes)
                .map(|c| BitCode::from_bytes(c, k))
                .collect::<Result<_>>()?
        };
        Self::new(k, codes, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout() {
        let codes = vec![
            BitCode::from_bits(&[true, false, true, false, false, false, false, false, true]),
            BitCode::zeros(9),
        ];
        let h = HashedDataset::new(9, codes, None).unwrap();
        let b = h.to_khsh();
        assert_eq!(&b[..5], b"KHSH\x01");
        assert_eq!(&b[5..9], &[9, 0, 0, 0]);
        assert_eq!(&b[9..17], &[2, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(&b[17..], &[0b1010_0000, 0b1000_0000, 0, 0]);
        assert_eq!(HashedDataset::from_khsh(&b).unwrap(), h);
    }

    #[test]
    fn rejects_malformed() {
        let h = HashedDataset::new(3, vec![BitCode::zeros(3)], None).unwrap();
        let b = h.to_khsh();
        for cut in 0..b.len() {
            assert!(HashedDataset::from_khsh(&b[..cut]).is_err());
        }
        let mut bad = b.clone();
        bad[0] = b'X';
        assert!(HashedDataset::from_khsh(&bad).is_err());
        let mut bad = b;
        bad[4] = 2;
        assert!(HashedDataset::from_khsh(&bad).is_err());
    }

    #[test]
    fn consistency_checks() {
        assert!(HashedDataset::new(3, vec![BitCode::zeros(4)], None).is_err());
        assert!(HashedDataset::new(3, vec![BitCode::zeros(3)], Some(vec![])).is_err());
    }
}
