//! Multinomial logistic regression over hashed `±1` features.

use rand::seq::SliceRandom;

use crate::data::DatasetMatrix;
use crate::pipelines::HashedDataset;
use crate::{rng, Error, Result};

pub const KSMX_MAGIC: &[u8; 4] = b"KSMX";
pub const KSMX_VERSION: u8 = 1;

/// Dense features with a trailing constant-1 bias column.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    width: usize,
    values: Vec<f64>,
    labels: Option<Vec<u32>>,
}

impl FeatureMatrix {
    /// Appends the bias column to each row of `data`.
    pub fn from_dense(data: &DatasetMatrix<f64>) -> Self {
        let width = data.dim() + 1;
        let mut values = Vec::with_capacity(width * data.len());
        for r in data.rows() {
            values.extend_from_slice(r);
            values.push(1.0);
        }
        Self {
            width,
            values,
            labels: data.labels().map(<[u32]>::to_vec),
        }
    }

    /// Feature count excluding the bias.
    pub fn feature_count(&self) -> usize {
        self.width - 1
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.width
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.width..(i + 1) * self.width]
    }

    pub fn labels(&self) -> Option<&[u32]> {
        self.labels.as_deref()
    }
}

/// Bit 1 becomes `+1`, bit 0 becomes `-1`, in code order, then the bias.
pub fn unpack_features(h: &HashedDataset) -> Result<FeatureMatrix> {
    if h.is_empty() {
        return Err(Error::Domain("no codes to unpack".into()));
    }
    let width = h.code_len() + 1;
    let mut values = Vec::with_capacity(width * h.len());
    for c in h.codes() {
        values.extend(c.iter().map(|b| if b { 1.0 } else { -1.0 }));
        values.push(1.0);
    }
    Ok(FeatureMatrix {
        width,
        values,
        labels: h.labels().map(<[u32]>::to_vec),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 10,
            learning_rate: 0.05,
            batch_size: 128,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self, rows: usize) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be at least 1".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config(format!("learning rate {} must be positive", self.learning_rate)));
        }
        if self.batch_size == 0 || self.batch_size > rows {
            return Err(Error::Config(format!(
                "batch size {} must lie in 1..={rows}",
                self.batch_size
            )));
        }
        Ok(())
    }
}

/// Row-major `classes x (features + 1)` weights; the last column is the
/// bias.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftmaxModel {
    classes: usize,
    features: usize,
    weights: Vec<f64>,
}

impl SoftmaxModel {
    pub fn zeros(classes: usize, features: usize) -> Result<Self> {
        if classes < 2 {
            return Err(Error::Config(format!("need at least two classes, got {classes}")));
        }
        Ok(Self {
            classes,
            features,
            weights: vec![0.0; classes * (features + 1)],
        })
    }

    pub fn from_weights(classes: usize, features: usize, weights: Vec<f64>) -> Result<Self> {
        let mut m = Self::zeros(classes, features)?;
        if weights.len() != m.weights.len() {
            return Err(Error::mismatch("weight count", m.weights.len(), weights.len()));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::Validation("weights must be finite".into()));
        }
        m.weights = weights;
        Ok(m)
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn features(&self) -> usize {
        self.features
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    fn check_width(&self, x: &FeatureMatrix) -> Result<()> {
        if x.feature_count() != self.features {
            return Err(Error::mismatch("feature width", self.features, x.feature_count()));
        }
        Ok(())
    }

    /// Unnormalized class scores for one feature row (bias included).
    pub fn scores(&self, row: &[f64]) -> Vec<f64> {
        self.weights
            .chunks_exact(self.features + 1)
            .map(|w| w.iter().zip(row).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `classes x (features + 1)` little-endian layout after a `KSMX` header
    /// (magic, version byte, `m` and `k` as little-endian u32).
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(13 + 8 * self.weights.len());
        out.extend_from_slice(KSMX_MAGIC);
        out.push(KSMX_VERSION);
        out.extend_from_slice(&(self.classes as u32).to_le_bytes());
        out.extend_from_slice(&(self.features as u32).to_le_bytes());
        for w in &self.weights {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let header = bytes.get(..13).ok_or(Error::Length {
            what: "KSMX header",
            expected: 13,
            actual: bytes.len(),
        })?;
        if &header[..4] != KSMX_MAGIC {
            return Err(Error::Format(format!("bad KSMX magic {:02x?}", &header[..4])));
        }
        if header[4] != KSMX_VERSION {
            return Err(Error::Format(format!("unsupported KSMX version {}", header[4])));
        }
        let m = u32::from_le_bytes(header[5..9].try_into().expect("4 bytes")) as usize;
        let k = u32::from_le_bytes(header[9..13].try_into().expect("4 bytes")) as usize;
        let need = 13 + 8 * m * (k + 1);
        if bytes.len() != need {
            return Err(Error::Length {
                what: "KSMX weights",
                expected: need,
                actual: bytes.len(),
            });
        }
        let weights = bytes[13..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        Self::from_weights(m, k, weights)
    }
}

fn softmax_in_place(z: &mut [f64]) {
    let max = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in z.iter_mut() {
        *v = (*v - max).exp();
        sum += *v;
    }
    z.iter_mut().for_each(|v| *v /= sum);
}

fn labels_of<'a>(x: &'a FeatureMatrix, labels: Option<&'a [u32]>) -> Result<&'a [u32]> {
    let l = labels
        .or(x.labels())
        .ok_or_else(|| Error::Validation("training data has no labels".into()))?;
    if l.len() != x.len() {
        return Err(Error::mismatch("label count", x.len(), l.len()));
    }
    Ok(l)
}

/// Mean cross-entropy over the rows.
pub fn loss(model: &SoftmaxModel, x: &FeatureMatrix, labels: &[u32]) -> Result<f64> {
    model.check_width(x)?;
    let mut total = 0.0;
    for (i, &y) in labels.iter().enumerate() {
        let z = model.scores(x.row(i));
        let max = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + z.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
        total += lse - z[y as usize];
    }
    Ok(total / labels.len() as f64)
}

/// Gradient of the mean cross-entropy over `rows`, accumulated into `grad`
/// (same layout as the weights, overwritten).
fn gradient_into(model: &SoftmaxModel, x: &FeatureMatrix, labels: &[u32], rows: &[usize], grad: &mut [f64]) {
    let width = model.features + 1;
    grad.iter_mut().for_each(|g| *g = 0.0);
    let inv = 1.0 / rows.len() as f64;
    for &i in rows {
        let row = x.row(i);
        let mut p = model.scores(row);
        softmax_in_place(&mut p);
        p[labels[i] as usize] -= 1.0;
        for (c, residual) in p.iter().enumerate() {
            let r = residual * inv;
            for (g, v) in grad[c * width..(c + 1) * width].iter_mut().zip(row) {
                *g += r * v;
            }
        }
    }
}

/// Full-data gradient of [`loss`].
pub fn gradient(model: &SoftmaxModel, x: &FeatureMatrix, labels: &[u32]) -> Result<Vec<f64>> {
    model.check_width(x)?;
    let rows: Vec<usize> = (0..x.len()).collect();
    let mut g = vec![0.0; model.weights.len()];
    gradient_into(model, x, labels, &rows, &mut g);
    Ok(g)
}

/// Trains with `classes` inferred as `max(label) + 1` (at least 2).
pub fn train(x: &FeatureMatrix, labels: Option<&[u32]>, cfg: &TrainConfig) -> Result<SoftmaxModel> {
    let l = labels_of(x, labels)?;
    let classes = (l.iter().copied().max().unwrap_or(0) as usize + 1).max(2);
    train_with_classes(x, Some(l), classes, cfg)
}

/// Mini-batch gradient descent from zero weights. The seed only drives the
/// per-epoch shuffle.
pub fn train_with_classes(
    x: &FeatureMatrix,
    labels: Option<&[u32]>,
    classes: usize,
    cfg: &TrainConfig,
) -> Result<SoftmaxModel> {
    let l = labels_of(x, labels)?;
    cfg.validate(x.len())?;
    if let Some(pos) = l.iter().position(|&y| y as usize >= classes) {
        return Err(Error::Validation(format!(
            "label {} at row {pos} outside 0..{classes}",
            l[pos]
        )));
    }
    let mut model = SoftmaxModel::zeros(classes, x.feature_count())?;
    let mut order: Vec<usize> = (0..x.len()).collect();
    let mut r = rng::rng_from(rng::derive_seed(cfg.seed, "shuffle"));
    let mut grad = vec![0.0; model.weights.len()];
    for _ in 0..cfg.epochs {
        order.shuffle(&mut r);
        for batch in order.chunks(cfg.batch_size) {
            gradient_into(&model, x, l, batch, &mut grad);
            for (w, g) in model.weights.iter_mut().zip(&grad) {
                *w -= cfg.learning_rate * g;
            }
        }
    }
    Ok(model)
}

/// Top-1 class per row; ties go to the lowest class index.
pub fn predict(model: &SoftmaxModel, x: &FeatureMatrix) -> Result<Vec<u32>> {
    model.check_width(x)?;
    Ok((0..x.len())
        .map(|i| {
            let s = model.scores(x.row(i));
            let mut best = 0;
            for (c, &v) in s.iter().enumerate().skip(1) {
                if v > s[best] {
                    best = c;
                }
            }
            best as u32
        })
        .collect())
}

pub fn accuracy(predicted: &[u32], actual: &[u32]) -> Result<f64> {
    if predicted.len() != actual.len() {
        return Err(Error::mismatch("prediction count", actual.len(), predicted.len()));
    }
    if predicted.is_empty() {
        return Err(Error::Domain("accuracy of an empty set".into()));
    }
    let hits = predicted.iter().zip(actual).filter(|(a, b)| a == b).count();
    Ok(hits as f64 / predicted.len() as f64)
}
