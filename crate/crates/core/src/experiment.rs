//! Accuracy-versus-compression sweep on labelled image data.
//!
//! For every (family, projection, reduction, seed) cell a pipeline with
//! `k = floor(n / reduction)` hashes the train and test sets, a softmax head
//! is trained on the train codes and its test accuracy recorded. Two
//! reference rows exist per seed: softmax on raw pixels (`baseline`) and the
//! dense Gaussian hash (`unstructured`, at every reduction).

use std::collections::BTreeMap;

use crate::classifier::{accuracy, predict, train_with_classes, unpack_features, FeatureMatrix, TrainConfig};
use crate::data::DatasetMatrix;
use crate::kvdoc::KvDoc;
use crate::pipelines::{Family, Pipeline, PipelineSpec, Projection};
use crate::{Error, Result};

pub const DEFAULT_REDUCTIONS: [usize; 5] = [2, 4, 8, 16, 32];
pub const DEFAULT_SEEDS: [u64; 3] = [1, 2, 3];
pub const BASELINE: &str = "baseline";
pub const NO_PROJECTION: &str = "none";

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub reduction_factors: Vec<usize>,
    /// Structured families to sweep; the unstructured reference always runs.
    pub families: Vec<Family>,
    pub projections: Vec<Projection>,
    pub seeds: Vec<u64>,
    pub train: TrainConfig,
    /// Subtract the train-set pixel mean before hashing.
    pub center: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            reduction_factors: DEFAULT_REDUCTIONS.to_vec(),
            families: vec![Family::Short, Family::ExtendedHadamard, Family::ExtendedKac],
            projections: Projection::STRUCTURED.to_vec(),
            seeds: DEFAULT_SEEDS.to_vec(),
            train: TrainConfig::default(),
            center: true,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.reduction_factors.is_empty() || self.reduction_factors.contains(&0) {
            return Err(Error::Config("reduction factors must be >= 1".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        if self.projections.iter().any(|p| !p.is_structured()) {
            return Err(Error::Config("sweep projections must be circulant or toeplitz".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub family: String,
    pub projection: String,
    pub k: usize,
    pub reduction: usize,
    pub seed: u64,
    pub test_accuracy: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

fn family_rank(f: &str) -> usize {
    match f {
        BASELINE => 0,
        "unstructured" => 1,
        "short" => 2,
        "extended_hadamard" => 3,
        "extended_kac" => 4,
        _ => 5,
    }
}

impl ResultTable {
    fn sort(&mut self) {
        self.rows.sort_by(|a, b| {
            (family_rank(&a.family), &a.projection, a.reduction, a.seed)
                .cmp(&(family_rank(&b.family), &b.projection, b.reduction, b.seed))
        });
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("family,projection,k,reduction,seed,test_accuracy\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.family, r.projection, r.k, r.reduction, r.seed, r.test_accuracy
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::parse("result table", e.to_string()))?;
            let line = rec.position().map_or(0, |p| p.line());
            let field = |i: usize| rec.get(i).unwrap_or("");
            let num = |i: usize| -> Result<f64> {
                field(i)
                    .parse()
                    .map_err(|_| Error::parse(format!("line {line}"), format!("bad number `{}`", field(i))))
            };
            rows.push(ResultRow {
                family: field(0).to_string(),
                projection: field(1).to_string(),
                k: num(2)? as usize,
                reduction: num(3)? as usize,
                seed: num(4)? as u64,
                test_accuracy: num(5)?,
            });
        }
        Ok(Self { rows })
    }

    /// Mean test accuracy over seeds for one cell.
    pub fn mean_accuracy(&self, family: &str, projection: &str, reduction: usize) -> Option<f64> {
        let v: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.family == family && r.projection == projection && r.reduction == reduction)
            .map(|r| r.test_accuracy)
            .collect();
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    }

    /// Key-value summary of per-cell means.
    pub fn summary(&self) -> String {
        let mut cells: BTreeMap<(usize, String, String, usize), Vec<f64>> = BTreeMap::new();
        for r in &self.rows {
            cells
                .entry((family_rank(&r.family), r.family.clone(), r.projection.clone(), r.reduction))
                .or_default()
                .push(r.test_accuracy);
        }
        let mut d = KvDoc::new();
        d.push("report", "compression_sweep").push("rows", self.rows.len());
        for ((_, f, p, red), v) in cells {
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            d.push(&format!("{f}.{p}.r{red}.mean"), mean);
            d.push(&format!("{f}.{p}.r{red}.spread"), max - min);
        }
        d.render("kachash experiment")
    }
}

fn fit_and_score(
    train_x: &FeatureMatrix,
    test_x: &FeatureMatrix,
    train_y: &[u32],
    test_y: &[u32],
    classes: usize,
    cfg: &TrainConfig,
) -> Result<f64> {
    let model = train_with_classes(train_x, Some(train_y), classes, cfg)?;
    accuracy(&predict(&model, test_x)?, test_y)
}

fn hash_cell(
    spec: PipelineSpec,
    train: &DatasetMatrix<f64>,
    test: &DatasetMatrix<f64>,
) -> Result<(FeatureMatrix, FeatureMatrix)> {
    let p = Pipeline::<f64>::build(spec)?;
    Ok((unpack_features(&p.hash_batch(train)?)?, unpack_features(&p.hash_batch(test)?)?))
}

/// Runs the sweep. `progress` receives one line per finished cell.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    train: &DatasetMatrix<f64>,
    test: &DatasetMatrix<f64>,
    mut progress: impl FnMut(&ResultRow),
) -> Result<ResultTable> {
    cfg.validate()?;
    if train.dim() != test.dim() {
        return Err(Error::mismatch("test set dimension", train.dim(), test.dim()));
    }
    let labels = |d: &DatasetMatrix<f64>, what: &str| -> Result<Vec<u32>> {
        d.labels()
            .map(<[u32]>::to_vec)
            .ok_or_else(|| Error::Validation(format!("{what} set has no labels")))
    };
    let (train_y, test_y) = (labels(train, "train")?, labels(test, "test")?);
    let classes = (train_y.iter().chain(&test_y).copied().max().unwrap_or(0) as usize + 1).max(2);
    let (train, test) = if cfg.center {
        center_pair(train, test)
    } else {
        (train.clone(), test.clone())
    };
    let n = train.dim();

    let mut table = ResultTable::default();
    let mut record = |row: ResultRow, table: &mut ResultTable| {
        progress(&row);
        table.rows.push(row);
    };

    let raw_train = FeatureMatrix::from_dense(&train);
    let raw_test = FeatureMatrix::from_dense(&test);
    let mut cells = vec![(Family::Unstructured, Projection::GaussianFull)];
    for &f in cfg.families.iter().filter(|f| f.is_structured()) {
        for &p in &cfg.projections {
            cells.push((f, p));
        }
    }
    for &seed in &cfg.seeds {
        let tcfg = TrainConfig { seed, ..cfg.train };
        let acc = fit_and_score(&raw_train, &raw_test, &train_y, &test_y, classes, &tcfg)?;
        let row = ResultRow {
            family: BASELINE.into(),
            projection: NO_PROJECTION.into(),
            k: n,
            reduction: 1,
            seed,
            test_accuracy: acc,
        };
        record(row, &mut table);
        for &(family, projection) in &cells {
            for &red in &cfg.reduction_factors {
                let k = n / red;
                if k == 0 {
                    return Err(Error::Config(format!("reduction {red} leaves no bits for n = {n}")));
                }
                let spec = PipelineSpec::new(family, projection, n, k, seed)?;
                let (tx, sx) = hash_cell(spec, &train, &test)?;
                let acc = fit_and_score(&tx, &sx, &train_y, &test_y, classes, &tcfg)?;
                let row = ResultRow {
                    family: family.to_string(),
                    projection: projection.to_string(),
                    k,
                    reduction: red,
                    seed,
                    test_accuracy: acc,
                };
                record(row, &mut table);
            }
        }
    }
    table.sort();
    Ok(table)
}

/// Centers both sets with the train-set mean.
fn center_pair(train: &DatasetMatrix<f64>, test: &DatasetMatrix<f64>) -> (DatasetMatrix<f64>, DatasetMatrix<f64>) {
    let dim = train.dim();
    let mut mean = vec![0.0; dim];
    for r in train.rows() {
        for (m, v) in mean.iter_mut().zip(r) {
            *m += v;
        }
    }
    let count = train.len().max(1) as f64;
    mean.iter_mut().for_each(|m| *m /= count);
    let shift = |d: &DatasetMatrix<f64>| {
        let values = d.rows().flat_map(|r| r.iter().zip(&mean).map(|(v, m)| v - m)).collect();
        DatasetMatrix::from_flat(dim, values, d.labels().map(<[u32]>::to_vec)).expect("same shape")
    };
    (shift(train), shift(test))
}
