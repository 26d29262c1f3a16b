//! Datasets: MNIST IDX containers, delimited text, synthetic generators.

use std::io::Read;
use std::path::Path;

use crate::{rng, Error, Real, Result};

pub const IDX_IMAGES_MAGIC: u32 = 0x0000_0803;
pub const IDX_LABELS_MAGIC: u32 = 0x0000_0801;

/// Row-major real vectors of a single dimension with optional class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetMatrix<T = f64> {
    dim: usize,
    values: Vec<T>,
    labels: Option<Vec<u32>>,
}

impl<T: Real> DatasetMatrix<T> {
    pub fn from_flat(dim: usize, values: Vec<T>, labels: Option<Vec<u32>>) -> Result<Self> {
        if dim == 0 {
            if !values.is_empty() {
                return Err(Error::dim("zero-width rows cannot hold values"));
            }
        } else if !values.len().is_multiple_of(dim) {
            return Err(Error::dim(format!(
                "{} values do not split into rows of width {dim}",
                values.len()
            )));
        }
        let rows = values.len().checked_div(dim).unwrap_or(0);
        if let Some(l) = &labels {
            if l.len() != rows {
                return Err(Error::mismatch("label count", rows, l.len()));
            }
        }
        Ok(Self { dim, values, labels })
    }

    pub fn from_rows(rows: Vec<Vec<T>>, labels: Option<Vec<u32>>) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::dim(format!("row {i} has {} entries, expected {dim}", r.len())));
            }
        }
        Self::from_flat(dim, rows.into_iter().flatten().collect(), labels)
    }

    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            values: Vec::new(),
            labels: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[T]> + '_ {
        // dim 0 never holds rows
        self.values.chunks_exact(self.dim.max(1))
    }

    pub fn labels(&self) -> Option<&[u32]> {
        self.labels.as_deref()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn with_labels(mut self, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::mismatch("label count", self.len(), labels.len()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// First `n` rows (all rows if fewer).
    pub fn take(&self, n: usize) -> Self {
        let n = n.min(self.len());
        Self {
            dim: self.dim,
            values: self.values[..n * self.dim].to_vec(),
            labels: self.labels.as_ref().map(|l| l[..n].to_vec()),
        }
    }

    pub fn cast<U: Real>(&self) -> DatasetMatrix<U> {
        DatasetMatrix {
            dim: self.dim,
            values: self.values.iter().map(|v| U::of(v.as_f64())).collect(),
            labels: self.labels.clone(),
        }
    }
}

fn be_u32(bytes: &[u8], at: usize, what: &'static str) -> Result<u32> {
    let chunk = bytes.get(at..at + 4).ok_or(Error::Length {
        what,
        expected: at + 4,
        actual: bytes.len(),
    })?;
    Ok(u32::from_be_bytes(chunk.try_into().expect("4-byte slice")))
}

fn check_magic(found: u32, want: u32, kind: &str) -> Result<()> {
    if found != want {
        return Err(Error::Format(format!(
            "expected IDX {kind} magic {want:#010x}, found {found:#010x}"
        )));
    }
    Ok(())
}

/// Parses an IDX image file: big-endian magic `0x00000803`, image count,
/// rows, cols, then one unsigned byte per pixel. Pixels are scaled to
/// `[0, 1]` by `v / 255`. Bytes past the declared payload are ignored.
pub fn read_idx_images<T: Real>(bytes: &[u8]) -> Result<DatasetMatrix<T>> {
    check_magic(be_u32(bytes, 0, "IDX image header")?, IDX_IMAGES_MAGIC, "image")?;
    let count = be_u32(bytes, 4, "IDX image header")? as usize;
    let rows = be_u32(bytes, 8, "IDX image header")? as usize;
    let cols = be_u32(bytes, 12, "IDX image header")? as usize;
    let dim = rows * cols;
    let need = count
        .checked_mul(dim)
        .and_then(|p| p.checked_add(16))
        .ok_or_else(|| Error::Format("IDX image dimensions overflow".into()))?;
    if bytes.len() < need {
        return Err(Error::Length {
            what: "IDX image payload",
            expected: need,
            actual: bytes.len(),
        });
    }
    let values = bytes[16..need].iter().map(|&b| T::of(b as f64 / 255.0)).collect();
    DatasetMatrix::from_flat(dim, values, None)
}

/// Parses an IDX label file (magic `0x00000801`). With `digits` set, every
/// label must be in `0..=9`.
pub fn read_idx_labels(bytes: &[u8], digits: bool) -> Result<Vec<u32>> {
    check_magic(be_u32(bytes, 0, "IDX label header")?, IDX_LABELS_MAGIC, "label")?;
    let count = be_u32(bytes, 4, "IDX label header")? as usize;
    let need = 8 + count;
    if bytes.len() < need {
        return Err(Error::Length {
            what: "IDX label payload",
            expected: need,
            actual: bytes.len(),
        });
    }
    let labels: Vec<u32> = bytes[8..need].iter().map(|&b| b as u32).collect();
    if digits {
        if let Some(pos) = labels.iter().position(|&l| l > 9) {
            return Err(Error::Validation(format!("label {pos} is {}, not a digit", labels[pos])));
        }
    }
    Ok(labels)
}

/// IDX image bytes for `data`, quantizing each value with `round(v * 255)`
/// clamped to a byte.
pub fn write_idx_images<T: Real>(data: &DatasetMatrix<T>, rows: u32, cols: u32) -> Result<Vec<u8>> {
    if (rows * cols) as usize != data.dim() {
        return Err(Error::mismatch("IDX image size", data.dim(), (rows * cols) as usize));
    }
    let mut out = Vec::with_capacity(16 + data.values.len());
    for v in [IDX_IMAGES_MAGIC, data.len() as u32, rows, cols] {
        out.extend_from_slice(&v.to_be_bytes());
    }
    out.extend(data.values.iter().map(|v| (v.as_f64() * 255.0).round().clamp(0.0, 255.0) as u8));
    Ok(out)
}

pub fn write_idx_labels(labels: &[u32]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + labels.len());
    out.extend_from_slice(&IDX_LABELS_MAGIC.to_be_bytes());
    out.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    out.extend(labels.iter().map(|&l| l as u8));
    out
}

pub fn read_file(path: &Path) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut buf))
        .map_err(|e| Error::io(path, e))?;
    Ok(buf)
}

/// Images and labels from a pair of IDX files.
pub fn load_mnist<T: Real>(images: &Path, labels: &Path) -> Result<DatasetMatrix<T>> {
    let data = read_idx_images(&read_file(images)?)?;
    let labels = read_idx_labels(&read_file(labels)?, true)?;
    data.with_labels(labels)
}

/// Delimited numeric table; with `has_labels` the last column is an integer
/// class label. Line numbers in errors are 1-based.
pub fn read_delimited<T: Real, R: Read>(
    reader: R,
    delimiter: u8,
    has_labels: bool,
) -> Result<DatasetMatrix<T>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut dim = None;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::parse(format!("line {line}"), e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let width = rec.len() - usize::from(has_labels);
        if width == 0 {
            return Err(Error::parse(format!("line {line}"), "row has no feature columns"));
        }
        match dim {
            None => dim = Some(width),
            Some(d) if d != width => {
                return Err(Error::parse(
                    format!("line {line}"),
                    format!("row has {width} feature columns, expected {d}"),
                ))
            }
            _ => {}
        }
        for (col, cell) in rec.iter().enumerate() {
            let at = || format!("line {line}, column {}", col + 1);
            if has_labels && col == width {
                let l: u32 = cell
                    .parse()
                    .map_err(|_| Error::parse(at(), format!("label `{cell}` is not a class index")))?;
                labels.push(l);
            } else {
                let v: f64 = cell
                    .parse()
                    .map_err(|_| Error::parse(at(), format!("`{cell}` is not a number")))?;
                if !v.is_finite() {
                    return Err(Error::parse(at(), "non-finite value"));
                }
                values.push(T::of(v));
            }
        }
    }
    DatasetMatrix::from_flat(dim.unwrap_or(0), values, has_labels.then_some(labels))
}

/// Least power of two `>= n` (1 for `n == 0`).
pub fn next_pow2(n: usize) -> usize {
    n.max(1).next_power_of_two()
}

/// Zero-pads rows to the least power of two at or above the dimension.
pub fn pad_to_pow2<T: Real>(data: &DatasetMatrix<T>) -> Result<DatasetMatrix<T>> {
    if data.is_empty() {
        return Err(Error::dim("cannot pad an empty dataset"));
    }
    let target = next_pow2(data.dim());
    if target == data.dim() {
        return Ok(data.clone());
    }
    let mut values = Vec::with_capacity(target * data.len());
    for r in data.rows() {
        values.extend_from_slice(r);
        values.resize(values.len() + target - data.dim(), T::zero());
    }
    DatasetMatrix::from_flat(target, values, data.labels.clone())
}

/// Unit vectors `e_1` and `cos(theta) e_1 + sin(theta) e_2` in dimension `dim`.
pub fn synth_angle_pair<T: Real>(theta: f64, dim: usize) -> Result<(Vec<T>, Vec<T>)> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::Domain(format!("angle {theta} outside [0, pi]")));
    }
    if dim < 2 {
        return Err(Error::Domain(format!("angle pair needs dimension >= 2, got {dim}")));
    }
    let mut x = vec![T::zero(); dim];
    let mut y = vec![T::zero(); dim];
    x[0] = T::one();
    y[0] = T::of(theta.cos());
    y[1] = T::of(theta.sin());
    Ok((x, y))
}

/// `n` points with iid standard-normal coordinates.
pub fn gaussian_points<T: Real>(n: usize, dim: usize, seed: u64) -> Result<DatasetMatrix<T>> {
    let values = rng::gaussian_vec(seed, n * dim).into_iter().map(T::of).collect();
    DatasetMatrix::from_flat(dim, values, None)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn header(magic: u32, fields: &[u32]) -> Vec<u8> {
        let mut v = magic.to_be_bytes().to_vec();
        for f in fields {
            v.extend_from_slice(&f.to_be_bytes());
        }
        v
    }

    #[test]
    fn minimal_image_file() {
        let mut bytes = header(IDX_IMAGES_MAGIC, &[1, 1, 1]);
        bytes.push(0xFF);
        let d: DatasetMatrix = read_idx_images(&bytes).unwrap();
        assert_eq!((d.len(), d.dim()), (1, 1));
        assert_eq!(d.row(0), &[1.0]);
    }

    #[test]
    fn label_magic_rejected_by_image_reader() {
        let bytes = header(IDX_LABELS_MAGIC, &[1, 1, 1, 0]);
        let err = read_idx_images::<f64>(&bytes).unwrap_err();
        assert!(matches!(err, Error::Format(_)));
        assert!(err.to_string().contains("0x00000801"), "{err}");
    }

    #[test]
    fn truncated_image_payload() {
        let mut bytes = header(IDX_IMAGES_MAGIC, &[2, 2, 2]);
        bytes.extend_from_slice(&[1, 2, 3]);
        match read_idx_images::<f64>(&bytes).unwrap_err() {
            Error::Length { expected, actual, .. } => assert_eq!((expected, actual), (24, 19)),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn labels() {
        let mut bytes = header(IDX_LABELS_MAGIC, &[2]);
        bytes.extend_from_slice(&[0, 9]);
        assert_eq!(read_idx_labels(&bytes, true).unwrap(), vec![0, 9]);

        let mut short = header(IDX_LABELS_MAGIC, &[5]);
        short.extend_from_slice(&[1, 2, 3]);
        assert!(matches!(read_idx_labels(&short, false), Err(Error::Length { .. })));

        let mut big = header(IDX_LABELS_MAGIC, &[1]);
        big.push(12);
        assert!(read_idx_labels(&big, false).is_ok());
        assert!(matches!(read_idx_labels(&big, true), Err(Error::Validation(_))));
    }

    #[test]
    fn delimited_basic() {
        let d: DatasetMatrix = read_delimited("1,2,3\n4,5,6\n".as_bytes(), b',', false).unwrap();
        assert_eq!((d.len(), d.dim()), (2, 3));
        assert_eq!(d.row(1), &[4.0, 5.0, 6.0]);
        assert!(d.labels().is_none());
    }

    #[test]
    fn delimited_errors_name_the_line() {
        let err = read_delimited::<f64, _>("1,2,x\n".as_bytes(), b',', false).unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
        let err = read_delimited::<f64, _>("1,2\n3\n".as_bytes(), b',', false).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn delimited_with_labels_and_tabs() {
        let d: DatasetMatrix = read_delimited("0.5,0.5,7\n".as_bytes(), b',', true).unwrap();
        assert_eq!(d.row(0), &[0.5, 0.5]);
        assert_eq!(d.labels(), Some(&[7u32][..]));
        let d: DatasetMatrix = read_delimited("1\t2\n".as_bytes(), b'\t', false).unwrap();
        assert_eq!(d.dim(), 2);
    }

    #[test]
    fn padding() {
        let d = gaussian_points::<f64>(3, 784, 1).unwrap();
        assert_eq!(pad_to_pow2(&d).unwrap().dim(), 1024);
        let d = gaussian_points::<f64>(3, 512, 1).unwrap();
        assert_eq!(pad_to_pow2(&d).unwrap(), d);
        assert!(pad_to_pow2(&DatasetMatrix::<f64>::empty(3)).is_err());
    }

    #[test]
    fn padding_preserves_distances() {
        let d = gaussian_points::<f64>(6, 100, 2).unwrap();
        let p = pad_to_pow2(&d).unwrap();
        assert_eq!(p.dim(), 128);
        let dist = |m: &DatasetMatrix, a: usize, b: usize| -> f64 {
            m.row(a).iter().zip(m.row(b)).map(|(x, y)| (x - y) * (x - y)).sum()
        };
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(dist(&d, a, b), dist(&p, a, b));
            }
        }
    }

    #[test]
    fn angle_pairs() {
        let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
        let (x, y) = synth_angle_pair::<f64>(0.0, 4).unwrap();
        assert_eq!(x, y);
        let (x, y) = synth_angle_pair::<f64>(std::f64::consts::FRAC_PI_2, 4).unwrap();
        assert!(dot(&x, &y).abs() < 1e-15);
        let (x, y) = synth_angle_pair::<f64>(std::f64::consts::FRAC_PI_3, 3).unwrap();
        assert!((dot(&x, &y) - 0.5).abs() < 1e-15);
        assert!((dot(&y, &y) - 1.0).abs() < 1e-15);
        assert!(synth_angle_pair::<f64>(4.0, 4).is_err());
        assert!(synth_angle_pair::<f64>(1.0, 1).is_err());
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(DatasetMatrix::from_rows(vec![vec![1.0], vec![1.0, 2.0]], None).is_err());
        assert!(DatasetMatrix::from_rows(vec![vec![1.0]], Some(vec![1, 2])).is_err());
    }

    fn sample_images() -> DatasetMatrix {
        let values = (0..3 * 6).map(|i| ((i * 37) % 256) as f64 / 255.0).collect();
        DatasetMatrix::from_flat(6, values, None).unwrap()
    }

    #[test]
    fn idx_round_trip() {
        let d = sample_images();
        let bytes = write_idx_images(&d, 2, 3).unwrap();
        let back: DatasetMatrix = read_idx_images(&bytes).unwrap();
        assert_eq!(back, d);
        let labels = vec![3, 1, 4];
        assert_eq!(read_idx_labels(&write_idx_labels(&labels), true).unwrap(), labels);
    }

    proptest! {
        #[test]
        fn every_proper_prefix_is_rejected(cut in 0usize..(16 + 18)) {
            let bytes = write_idx_images(&sample_images(), 2, 3).unwrap();
            prop_assert!(read_idx_images::<f64>(&bytes[..cut]).is_err());
            let lbytes = write_idx_labels(&[1, 2, 3]);
            let lcut = cut.min(lbytes.len() - 1);
            prop_assert!(read_idx_labels(&lbytes[..lcut], true).is_err());
        }

        #[test]
        fn arbitrary_bytes_never_panic(bytes in proptest::collection::vec(any::<u8>(), 0..64)) {
            let _ = read_idx_images::<f64>(&bytes);
            let _ = read_idx_labels(&bytes, true);
        }
    }
}
