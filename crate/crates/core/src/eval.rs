//! Repeated k-fold cross-validation with wall-clock timing, and the synthetic
//! scaling study built on it.
//!
//! Train time for a fold is the wall time of [`train`] on that fold's
//! training graphs, PageRank and encoding included. Test time is the wall
//! time to encode and classify the held-out graphs; dividing it by the fold's
//! test size gives the per-graph inference time. Folds run one after another
//! so their timings do not overlap; encoding inside a fold may use all
//! threads of the current rayon pool.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::encoder::{Encoder, EncoderConfig};
use crate::error::{Error, Result};
use crate::generate::generate_er_dataset;
use crate::graph::{Dataset, Graph};
use crate::model::train;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvConfig {
    pub folds: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for CvConfig {
    fn default() -> Self {
        Self {
            folds: 10,
            repetitions: 3,
            seed: 0,
            stratified: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FoldRecord {
    pub repetition: usize,
    pub fold: usize,
    pub train_size: usize,
    pub test_size: usize,
    pub accuracy: f64,
    pub train_seconds: f64,
    pub test_seconds: f64,
    /// Dataset indices of the held-out graphs, ascending.
    #[serde(skip)]
    pub test_indices: Vec<usize>,
}

impl FoldRecord {
    pub fn inference_seconds_per_graph(&self) -> f64 {
        self.test_seconds / self.test_size as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CvReport {
    pub dataset: String,
    pub encoder: EncoderConfig,
    pub cv: CvConfig,
    pub mean_accuracy: f64,
    /// Population standard deviation over all folds of all repetitions.
    pub std_accuracy: f64,
    pub mean_train_time_per_fold: f64,
    pub mean_inference_time_per_graph: f64,
    pub records: Vec<FoldRecord>,
}

/// Mean and population standard deviation.
fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

impl CvReport {
    /// Builds a report whose summary fields are aggregated from `records`.
    pub fn from_records(dataset: String, encoder: EncoderConfig, cv: CvConfig, records: Vec<FoldRecord>) -> Self {
        let (mean_accuracy, std_accuracy) = mean_std(records.iter().map(|r| r.accuracy));
        let (mean_train_time_per_fold, _) = mean_std(records.iter().map(|r| r.train_seconds));
        let (mean_inference_time_per_graph, _) =
            mean_std(records.iter().map(FoldRecord::inference_seconds_per_graph));
        Self {
            dataset,
            encoder,
            cv,
            mean_accuracy,
            std_accuracy,
            mean_train_time_per_fold,
            mean_inference_time_per_graph,
            records,
        }
    }
}

impl CvConfig {
    pub fn validate(&self, dataset_len: usize) -> Result<()> {
        if self.folds < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 folds, got {}", self.folds)));
        }
        if self.repetitions == 0 {
            return Err(Error::InvalidArgument("need at least 1 repetition".into()));
        }
        if self.folds > dataset_len {
            return Err(Error::InvalidArgument(format!(
                "{} folds exceed the {dataset_len} graphs in the dataset",
                self.folds
            )));
        }
        Ok(())
    }
}

/// Splits `0..labels.len()` into `folds` disjoint parts after a shuffle
/// driven by `rng`.
///
/// Stratified: each class's members are dealt round-robin over the folds,
/// continuing where the previous class stopped, so per-class counts in any
/// two folds differ by at most one and so do fold sizes. Every class must
/// have at least `folds` members. Unstratified: the shuffled indices are
/// dealt round-robin. Each part is returned sorted ascending.
pub fn fold_partition(
    labels: &[usize],
    k: usize,
    folds: usize,
    stratified: bool,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<usize>>> {
    if folds < 2 || folds > labels.len() {
        return Err(Error::InvalidArgument(format!(
            "cannot split {} graphs into {folds} folds",
            labels.len()
        )));
    }
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.shuffle(rng);
    let mut parts = vec![Vec::new(); folds];
    if stratified {
        let mut by_class = vec![Vec::new(); k];
        for &i in &order {
            by_class[labels[i]].push(i);
        }
        for (class, members) in by_class.iter().enumerate() {
            if members.len() < folds {
                return Err(Error::StratificationInfeasible {
                    class,
                    members: members.len(),
                    folds,
                });
            }
        }
        for (cursor, &i) in by_class.iter().flatten().enumerate() {
            parts[cursor % folds].push(i);
        }
    } else {
        for (cursor, &i) in order.iter().enumerate() {
            parts[cursor % folds].push(i);
        }
    }
    for p in &mut parts {
        p.sort_unstable();
    }
    Ok(parts)
}

fn repetition_rng(seed: u64, repetition: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(repetition as u64);
    rng
}

/// Repeated (stratified) k-fold cross-validation of the full encode, train
/// and classify pipeline. Nothing is cached across folds: each fold's
/// timings include PageRank and encoding of every graph it touches.
pub fn cross_validate(ds: &Dataset, enc_cfg: &EncoderConfig, cv_cfg: &CvConfig) -> Result<CvReport> {
    cv_cfg.validate(ds.len())?;
    let encoder = Encoder::new(*enc_cfg)?;
    encoder.reserve(ds.max_vertices());

    let mut records = Vec::with_capacity(cv_cfg.folds * cv_cfg.repetitions);
    for repetition in 0..cv_cfg.repetitions {
        let mut rng = repetition_rng(cv_cfg.seed, repetition);
        let parts = fold_partition(ds.labels(), ds.class_count(), cv_cfg.folds, cv_cfg.stratified, &mut rng)?;
        for (fold, test) in parts.iter().enumerate() {
            let mut in_test = vec![false; ds.len()];
            for &i in test {
                in_test[i] = true;
            }
            let train_samples: Vec<(&Graph, usize)> = (0..ds.len())
                .filter(|&i| !in_test[i])
                .map(|i| (&ds.graphs()[i], ds.labels()[i]))
                .collect();
            let test_graphs: Vec<&Graph> = test.iter().map(|&i| &ds.graphs()[i]).collect();

            let start = Instant::now();
            let model = train(train_samples.iter().copied(), ds.class_count(), &encoder)?;
            let train_seconds = start.elapsed().as_secs_f64();

            let start = Instant::now();
            let predictions = model.predict_all(&test_graphs, &encoder)?;
            let test_seconds = start.elapsed().as_secs_f64();

            let correct = predictions
                .iter()
                .zip(test)
                .filter(|(p, &i)| p.label == ds.labels()[i])
                .count();
            records.push(FoldRecord {
                repetition,
                fold,
                train_size: train_samples.len(),
                test_size: test.len(),
                accuracy: correct as f64 / test.len() as f64,
                train_seconds,
                test_seconds,
                test_indices: test.clone(),
            });
        }
    }
    Ok(CvReport::from_records(ds.name().to_string(), *enc_cfg, *cv_cfg, records))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingPoint {
    pub n_vertices: usize,
    pub mean_edges: f64,
    #[serde(rename = "mean_train_seconds_per_fold")]
    pub mean_train_time_per_fold: f64,
    #[serde(rename = "mean_inference_seconds_per_graph")]
    pub mean_inference_time_per_graph: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingReport {
    pub edge_prob: f64,
    pub graphs: usize,
    pub classes: usize,
    pub encoder: EncoderConfig,
    pub cv: CvConfig,
    pub points: Vec<ScalingPoint>,
}

/// Parameters of the synthetic scaling study.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingConfig {
    pub vertex_grid: Vec<usize>,
    pub graphs: usize,
    pub classes: usize,
    pub edge_prob: f64,
    pub seed: u64,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self {
            vertex_grid: vec![100, 200, 400, 800, 980],
            graphs: 100,
            classes: 2,
            edge_prob: 0.05,
            seed: 0,
        }
    }
}

/// Cross-validates one Erdős–Rényi dataset per grid point and records how
/// training time grows with graph size.
pub fn scaling_benchmark(scale: &ScalingConfig, enc_cfg: &EncoderConfig, cv_cfg: &CvConfig) -> Result<ScalingReport> {
    if scale.vertex_grid.is_empty() {
        return Err(Error::InvalidArgument("vertex grid is empty".into()));
    }
    let mut points = Vec::with_capacity(scale.vertex_grid.len());
    for &n in &scale.vertex_grid {
        let ds = generate_er_dataset(n, scale.graphs, scale.classes, scale.edge_prob, scale.seed)?;
        let stats = ds.stats()?;
        let report = cross_validate(&ds, enc_cfg, cv_cfg)?;
        log::info!(
            "n={n}: mean edges {:.1}, train {:.4}s/fold",
            stats.mean_edges,
            report.mean_train_time_per_fold
        );
        points.push(ScalingPoint {
            n_vertices: n,
            mean_edges: stats.mean_edges,
            mean_train_time_per_fold: report.mean_train_time_per_fold,
            mean_inference_time_per_graph: report.mean_inference_time_per_graph,
        });
    }
    Ok(ScalingReport {
        edge_prob: scale.edge_prob,
        graphs: scale.graphs,
        classes: scale.classes,
        encoder: *enc_cfg,
        cv: *cv_cfg,
        points,
    })
}
