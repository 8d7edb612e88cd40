use std::fmt;
use std::io::Write;
use std::path::Path;

use faer::Mat;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::apprior::{build_prior, PriorConfig, PriorVector};
use crate::error::{Error, Result};
use crate::gpcore::{fit, one_hot, FitConfig, GpModel};
use crate::rnamap::{encode_onehot, letter_distance};

use super::dataset::{define_classes, generate_dataset, split, stratified_select, ClassCatalog, DatasetConfig, LabeledSample};
use super::derive_seed;
use super::metrics::{accuracy, balanced_accuracy, confusion_matrix, pearson_log, ConfusionMatrix};

/// Which constant mean the Gaussian process regresses around.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriorMode {
    Zero,
    ApPrior,
}

impl PriorMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PriorMode::Zero => "zero",
            PriorMode::ApPrior => "ap_prior",
        }
    }
}

impl fmt::Display for PriorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for PriorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(PriorMode::Zero),
            "ap_prior" => Ok(PriorMode::ApPrior),
            other => Err(Error::InvalidConfig(format!("unknown prior mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub per_class_sizes: Vec<usize>,
    pub repetitions: usize,
    pub prior_modes: Vec<PriorMode>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            per_class_sizes: vec![1, 2, 3, 5, 10, 20, 40, 80, 160, 320, 640, 1280, 2560, 5120],
            repetitions: 10,
            prior_modes: vec![PriorMode::Zero, PriorMode::ApPrior],
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.per_class_sizes.is_empty() || self.per_class_sizes[0] == 0 {
            return Err(Error::InvalidConfig("per_class_sizes must be non-empty and >= 1".into()));
        }
        if self.per_class_sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("per_class_sizes must be strictly ascending".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::InvalidConfig("repetitions must be >= 1".into()));
        }
        if self.prior_modes.is_empty() {
            return Err(Error::InvalidConfig("at least one prior mode is required".into()));
        }
        Ok(())
    }
}

/// Metrics of one (size, mode, repetition) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    /// Requested training samples per class.
    pub n_train: usize,
    /// Actual training-set size after per-class availability caps.
    pub n_train_total: usize,
    pub prior_mode: PriorMode,
    pub repetition: usize,
    pub seed: u64,
    pub accuracy: f64,
    pub balanced_accuracy: f64,
    pub confusion: ConfusionMatrix,
    /// Log-log correlation of the algorithmic-probability prior with the
    /// catalog frequencies; `None` when undefined.
    pub pearson_r: Option<f64>,
    pub length_scale: f64,
    pub noise: f64,
    /// Test predictions as catalog indices.
    pub predictions: Vec<usize>,
}

/// Everything a cell needs besides its training set.
pub struct CellContext<'a> {
    pub catalog: &'a ClassCatalog,
    pub prior: &'a PriorVector,
    pub test: &'a [LabeledSample],
    pub fit: FitConfig,
}

fn encode_rows(samples: &[LabeledSample]) -> Mat<f64> {
    let d = samples.first().map_or(0, |s| 4 * s.sequence.len());
    let mut x = Mat::zeros(samples.len(), d);
    for (i, s) in samples.iter().enumerate() {
        for (j, bit) in encode_onehot(&s.sequence).into_iter().enumerate() {
            x[(i, j)] = f64::from(bit);
        }
    }
    x
}

/// Starting length scale: mean pairwise letter distance over `C`.
///
/// With fewer than two distinct points the expected distance of random
/// sequences, `0.75 L`, stands in for the mean.
pub fn initial_length_scale(training: &[LabeledSample], classes: usize, length: usize) -> f64 {
    let n = training.len();
    let mut total = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            total += letter_distance(&training[i].sequence, &training[j].sequence);
        }
    }
    let pairs = n * n.saturating_sub(1) / 2;
    let mean = if pairs == 0 || total == 0 {
        0.75 * length as f64
    } else {
        total as f64 / pairs as f64
    };
    mean / classes as f64
}

/// Fits one model and scores it on the test set.
pub fn run_cell(
    training: &[LabeledSample],
    ctx: &CellContext<'_>,
    mode: PriorMode,
    n_train: usize,
    repetition: usize,
    seed: u64,
) -> Result<MetricsReport> {
    let classes = ctx.catalog.len();
    let length = ctx
        .test
        .first()
        .or(training.first())
        .map_or(0, |s| s.sequence.len());
    let mean = match mode {
        PriorMode::Zero => vec![0.0; classes],
        PriorMode::ApPrior => ctx.prior.p_hat.clone(),
    };
    let model = if training.is_empty() {
        GpModel::prior_only(mean, 4 * length)
    } else {
        let x = encode_rows(training);
        let labels: Vec<usize> = training.iter().map(|s| s.label).collect();
        let y = one_hot(&labels, classes)?;
        let l0 = initial_length_scale(training, classes, length);
        let cfg = FitConfig {
            seed,
            ..ctx.fit.clone()
        };
        fit(x.as_ref(), y.matrix().as_ref(), &mean, l0, &cfg)?
    };
    let predictions = ctx
        .test
        .iter()
        .map(|s| {
            let row: Vec<f64> = encode_onehot(&s.sequence).into_iter().map(f64::from).collect();
            model.predict_class(&row)
        })
        .collect::<Result<Vec<usize>>>()?;
    let truth: Vec<usize> = ctx.test.iter().map(|s| s.label).collect();
    let shapes = ctx.catalog.shapes();
    let truth_names: Vec<&str> = truth.iter().map(|&i| shapes[i].as_str()).collect();
    let pred_names: Vec<&str> = predictions.iter().map(|&i| shapes[i].as_str()).collect();
    Ok(MetricsReport {
        n_train,
        n_train_total: training.len(),
        prior_mode: mode,
        repetition,
        seed,
        accuracy: accuracy(&truth, &predictions),
        balanced_accuracy: balanced_accuracy(&truth, &predictions),
        confusion: confusion_matrix(&truth_names, &pred_names),
        pearson_r: pearson_log(&ctx.prior.p_hat, &ctx.catalog.probabilities()).ok(),
        length_scale: model.length_scale(),
        noise: model.noise(),
        predictions,
    })
}

/// Mean metrics over repetitions for one (size, mode).
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub n_train: usize,
    pub prior_mode: PriorMode,
    pub mean_accuracy: f64,
    pub mean_balanced_accuracy: f64,
    pub mean_train_total: f64,
    pub repetitions: usize,
}

/// Everything a sweep produced, ordered by (size, mode, repetition).
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub catalog: ClassCatalog,
    pub prior: PriorVector,
    pub pool_size: usize,
    pub test_size: usize,
    pub reports: Vec<MetricsReport>,
    pub summary: Vec<SummaryRow>,
}

pub const RESULT_HEADER: [&str; 7] = [
    "n_train",
    "prior_mode",
    "repetition",
    "accuracy",
    "balanced_accuracy",
    "pearson_r",
    "seed",
];

impl SweepResult {
    pub fn write_results<W: Write>(&self, out: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(RESULT_HEADER)?;
        for r in &self.reports {
            w.write_record([
                r.n_train.to_string(),
                r.prior_mode.to_string(),
                r.repetition.to_string(),
                r.accuracy.to_string(),
                r.balanced_accuracy.to_string(),
                r.pearson_r.map(|v| v.to_string()).unwrap_or_default(),
                r.seed.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_summary<W: Write>(&self, out: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "n_train",
            "prior_mode",
            "mean_accuracy",
            "mean_balanced_accuracy",
            "mean_train_total",
            "repetitions",
        ])?;
        for s in &self.summary {
            w.write_record([
                s.n_train.to_string(),
                s.prior_mode.to_string(),
                s.mean_accuracy.to_string(),
                s.mean_balanced_accuracy.to_string(),
                s.mean_train_total.to_string(),
                s.repetitions.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn summary_for(&self, n_train: usize, mode: PriorMode) -> Option<&SummaryRow> {
        self.summary
            .iter()
            .find(|s| s.n_train == n_train && s.prior_mode == mode)
    }

    /// Writes `results.csv`, `summary.csv`, `catalog.csv`, `prior.csv` and
    /// one labeled confusion matrix per cell under `confusion/`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        let confusion_dir = dir.join("confusion");
        std::fs::create_dir_all(&confusion_dir).map_err(|e| Error::io(&confusion_dir, e))?;
        let create = |path: &Path| std::fs::File::create(path).map_err(|e| Error::io(path, e));
        let results = dir.join("results.csv");
        self.write_results(create(&results)?).map_err(|e| Error::csv(&results, e))?;
        let summary = dir.join("summary.csv");
        self.write_summary(create(&summary)?).map_err(|e| Error::csv(&summary, e))?;
        self.catalog.save(&dir.join("catalog.csv"))?;
        self.prior.save(&dir.join("prior.csv"))?;
        for r in &self.reports {
            let path = confusion_dir.join(format!(
                "n{}_{}_r{}.csv",
                r.n_train, r.prior_mode, r.repetition
            ));
            r.confusion
                .write_csv(create(&path)?)
                .map_err(|e| Error::csv(&path, e))?;
        }
        Ok(())
    }
}

fn summarize(reports: &[MetricsReport]) -> Vec<SummaryRow> {
    let mut rows: Vec<SummaryRow> = Vec::new();
    for r in reports {
        match rows
            .iter_mut()
            .find(|s| s.n_train == r.n_train && s.prior_mode == r.prior_mode)
        {
            Some(row) => {
                row.mean_accuracy += r.accuracy;
                row.mean_balanced_accuracy += r.balanced_accuracy;
                row.mean_train_total += r.n_train_total as f64;
                row.repetitions += 1;
            }
            None => rows.push(SummaryRow {
                n_train: r.n_train,
                prior_mode: r.prior_mode,
                mean_accuracy: r.accuracy,
                mean_balanced_accuracy: r.balanced_accuracy,
                mean_train_total: r.n_train_total as f64,
                repetitions: 1,
            }),
        }
    }
    for row in &mut rows {
        let k = row.repetitions as f64;
        row.mean_accuracy /= k;
        row.mean_balanced_accuracy /= k;
        row.mean_train_total /= k;
    }
    rows
}

/// Prepared data shared by every cell of a sweep.
#[derive(Debug, Clone)]
pub struct SweepData {
    pub catalog: ClassCatalog,
    pub prior: PriorVector,
    pub pool: Vec<LabeledSample>,
    pub test: Vec<LabeledSample>,
}

/// Generates, classifies and splits the dataset and builds the prior.
pub fn prepare(dataset: &DatasetConfig, prior_cfg: &PriorConfig) -> Result<SweepData> {
    let records = generate_dataset(dataset)?;
    let samples: Vec<_> = records.into_iter().map(|r| (r.sequence, r.shape)).collect();
    let (catalog, labeled) = define_classes(&samples, dataset.min_class_support)?;
    let (pool, test) = split(&labeled, dataset.test_size, derive_seed(dataset.seed, &[u64::MAX]));
    let prior = build_prior(&catalog, prior_cfg)?;
    Ok(SweepData {
        catalog,
        prior,
        pool,
        test,
    })
}

/// Runs every (size, repetition, mode) cell on `workers` threads.
///
/// Each (size, repetition) pair gets its own sub-seed, shared by the prior
/// modes so they see the same training set. Output order is fixed by the
/// cell key, not completion time.
pub fn sweep(
    dataset: &DatasetConfig,
    sweep_cfg: &SweepConfig,
    prior_cfg: &PriorConfig,
    fit_cfg: &FitConfig,
    workers: usize,
) -> Result<SweepResult> {
    sweep_cfg.validate()?;
    let data = prepare(dataset, prior_cfg)?;
    sweep_prepared(data, dataset.seed, sweep_cfg, fit_cfg, workers)
}

pub fn sweep_prepared(
    data: SweepData,
    seed: u64,
    sweep_cfg: &SweepConfig,
    fit_cfg: &FitConfig,
    workers: usize,
) -> Result<SweepResult> {
    sweep_cfg.validate()?;
    let mut modes = sweep_cfg.prior_modes.clone();
    modes.sort();
    modes.dedup();
    let mut cells = Vec::new();
    for &size in &sweep_cfg.per_class_sizes {
        for &mode in &modes {
            for rep in 0..sweep_cfg.repetitions {
                cells.push((size, mode, rep));
            }
        }
    }
    let ctx = CellContext {
        catalog: &data.catalog,
        prior: &data.prior,
        test: &data.test,
        fit: fit_cfg.clone(),
    };
    let run = |&(size, mode, rep): &(usize, PriorMode, usize)| {
        let cell_seed = derive_seed(seed, &[size as u64, rep as u64]);
        let training = stratified_select(&data.pool, size, cell_seed);
        run_cell(&training, &ctx, mode, size, rep, cell_seed)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start worker pool: {e}")))?;
    let reports = pool.install(|| cells.par_iter().map(run).collect::<Result<Vec<_>>>())?;
    let summary = summarize(&reports);
    Ok(SweepResult {
        pool_size: data.pool.len(),
        test_size: data.test.len(),
        catalog: data.catalog,
        prior: data.prior,
        reports,
        summary,
    })
}
