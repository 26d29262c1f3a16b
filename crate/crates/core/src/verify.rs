//! Distance- and angle-preservation harnesses.

use crate::data::{synth_angle_pair, DatasetMatrix};
use crate::kvdoc::KvDoc;
use crate::pipelines::{hamming, Family, Pipeline, PipelineSpec, Projection};
use crate::rng::derive_indexed;
use crate::{Error, Result};

/// Johnson-Lindenstrauss success probability lower bound for `n_points`
/// points projected to `k` dimensions at distortion `epsilon`:
/// `max(0, 1 - 2 N^2 exp(-(eps^2 - eps^3) k / 4))`.
pub fn jl_bound(n_points: usize, k: usize, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if n_points == 0 || k == 0 {
        return Err(Error::Domain("jl_bound needs N >= 1 and k >= 1".into()));
    }
    let n = n_points as f64;
    let e2 = epsilon * epsilon;
    let tail = 2.0 * n * n * (-(e2 - e2 * epsilon) * k as f64 / 4.0).exp();
    Ok((1.0 - tail).max(0.0))
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!("epsilon {epsilon} outside (0, 1)")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistortionReport {
    pub epsilon: f64,
    pub point_count: usize,
    pub output_dim: usize,
    /// `N (N - 1) / 2`, including skipped pairs.
    pub pair_count: usize,
    /// Pairs of identical points, excluded from every statistic.
    pub skipped_pairs: usize,
    pub violating_pairs: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub bound_probability: f64,
}

impl DistortionReport {
    /// Share of measured pairs outside `[1 - eps, 1 + eps]`.
    pub fn violating_fraction(&self) -> f64 {
        let measured = self.pair_count - self.skipped_pairs;
        if measured == 0 {
            0.0
        } else {
            self.violating_pairs as f64 / measured as f64
        }
    }

    pub fn to_document(&self) -> String {
        let mut d = KvDoc::new();
        d.push("report", "jl_distortion")
            .push("epsilon", self.epsilon)
            .push("point_count", self.point_count)
            .push("output_dim", self.output_dim)
            .push("pair_count", self.pair_count)
            .push("skipped_pairs", self.skipped_pairs)
            .push("violating_pairs", self.violating_pairs)
            .push("violating_fraction", self.violating_fraction())
            .push("min_ratio", self.min_ratio)
            .push("max_ratio", self.max_ratio)
            .push("mean_ratio", self.mean_ratio)
            .push("bound_probability", self.bound_probability);
        d.render("kachash verify jl")
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Ratio `||project(x) - project(y)|| / ||x - y||` over every pair of
/// points; `project` already carries the `1/sqrt(k)` factor.
pub fn measure_distortion(
    points: &DatasetMatrix<f64>,
    pipeline: &Pipeline<f64>,
    epsilon: f64,
) -> Result<DistortionReport> {
    check_epsilon(epsilon)?;
    if points.len() < 2 {
        return Err(Error::Domain("distortion needs at least two points".into()));
    }
    let projected = pipeline.project_batch(points)?;
    let n = points.len();
    let (mut skipped, mut violating, mut measured) = (0, 0, 0usize);
    let (mut min, mut max, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
    for a in 0..n {
        for b in a + 1..n {
            let orig = dist(points.row(a), points.row(b));
            if orig == 0.0 {
                skipped += 1;
                continue;
            }
            let ratio = dist(&projected[a], &projected[b]) / orig;
            measured += 1;
            min = min.min(ratio);
            max = max.max(ratio);
            sum += ratio;
            if ratio < 1.0 - epsilon || ratio > 1.0 + epsilon {
                violating += 1;
            }
        }
    }
    let k = pipeline.spec().output_dim;
    let (min, max, mean) = if measured == 0 {
        (f64::NAN, f64::NAN, f64::NAN)
    } else {
        (min, max, sum / measured as f64)
    };
    Ok(DistortionReport {
        epsilon,
        point_count: n,
        output_dim: k,
        pair_count: n * (n - 1) / 2,
        skipped_pairs: skipped,
        violating_pairs: violating,
        min_ratio: min,
        max_ratio: max,
        mean_ratio: mean,
        bound_probability: jl_bound(n, k, epsilon)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollisionConfig {
    pub family: Family,
    pub projection: Projection,
    /// Working dimension the angle pairs are embedded in.
    pub dim: usize,
    pub bits: usize,
    pub trials: usize,
    pub seed: u64,
}

impl CollisionConfig {
    pub fn new(family: Family, projection: Projection, bits: usize, trials: usize, seed: u64) -> Self {
        Self {
            family,
            projection,
            dim: bits.max(2).next_power_of_two(),
            bits,
            trials,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollisionCurve {
    pub angles: Vec<f64>,
    /// Mean Hamming fraction per angle; its expectation is `theta / pi`.
    pub empirical_fractions: Vec<f64>,
    pub trials: usize,
    pub bits: usize,
}

impl CollisionCurve {
    /// Mean angle estimate `pi * fraction`.
    pub fn mean_estimates(&self) -> Vec<f64> {
        self.empirical_fractions.iter().map(|f| std::f64::consts::PI * f).collect()
    }

    pub fn to_document(&self, cfg: &CollisionConfig) -> String {
        let mut d = KvDoc::new();
        d.push("report", "collision_curve")
            .push("family", cfg.family)
            .push("projection", cfg.projection)
            .push("dim", cfg.dim)
            .push("bits", self.bits)
            .push("trials", self.trials)
            .push("seed", cfg.seed)
            .push("angles", self.angles.len());
        d.render("kachash verify collision")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::from("theta,expected_fraction,empirical_fraction,mean_estimate\n");
        for (t, f) in self.angles.iter().zip(&self.empirical_fractions) {
            let expected = t / std::f64::consts::PI;
            out.push_str(&format!("{t},{expected},{f},{}\n", std::f64::consts::PI * f));
        }
        out
    }
}

/// Hashes planted angle pairs under `trials` independent pipelines per
/// angle. Trial `t` uses master seed `derive_indexed(seed, t)` for every
/// angle, so curves at different angles share pipelines.
pub fn collision_curve(angles: &[f64], cfg: &CollisionConfig) -> Result<CollisionCurve> {
    if cfg.trials == 0 {
        return Err(Error::Domain("collision curve needs at least one trial".into()));
    }
    // validate every angle before doing any work
    let pairs = angles
        .iter()
        .map(|&t| synth_angle_pair::<f64>(t, cfg.dim))
        .collect::<Result<Vec<_>>>()?;
    let mut diffs = vec![0usize; angles.len()];
    for t in 0..cfg.trials {
        let spec = PipelineSpec::new(
            cfg.family,
            cfg.projection,
            cfg.dim,
            cfg.bits,
            derive_indexed(cfg.seed, t as u64),
        )?;
        let p = Pipeline::<f64>::build(spec)?;
        for ((x, y), acc) in pairs.iter().zip(diffs.iter_mut()) {
            *acc += hamming(&p.hash(x)?, &p.hash(y)?)?;
        }
    }
    let total = (cfg.trials * cfg.bits) as f64;
    Ok(CollisionCurve {
        angles: angles.to_vec(),
        empirical_fractions: diffs.iter().map(|&d| d as f64 / total).collect(),
        trials: cfg.trials,
        bits: cfg.bits,
    })
}
