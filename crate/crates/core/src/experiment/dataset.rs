use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rnamap::{
    abstract_shape, fold_surrogate, parse_dotbracket, AbstractShape, DatasetRecord, Nucleotide,
    NucleotideSequence, DEFAULT_MIN_LOOP,
};

use super::derive_seed;

/// Where `(sequence, shape)` pairs come from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Folder {
    #[default]
    Surrogate,
    /// A dataset file, e.g. produced by an external thermodynamic folder.
    Ingest(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetConfig {
    pub length: usize,
    pub n_samples: usize,
    pub test_size: usize,
    pub min_class_support: usize,
    pub seed: u64,
    pub min_loop: usize,
    pub folder: Folder,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        Self {
            length: 100,
            n_samples: 10_000,
            test_size: 1000,
            min_class_support: 10,
            seed: 0,
            min_loop: DEFAULT_MIN_LOOP,
            folder: Folder::Surrogate,
        }
    }
}

impl DatasetConfig {
    pub fn validate(&self) -> Result<()> {
        if self.length == 0 {
            return Err(Error::InvalidConfig("length must be >= 1".into()));
        }
        if self.min_class_support == 0 {
            return Err(Error::InvalidConfig("min_class_support must be >= 1".into()));
        }
        if self.folder == Folder::Surrogate && self.test_size >= self.n_samples {
            return Err(Error::InvalidConfig(format!(
                "test_size ({}) must be smaller than n_samples ({})",
                self.test_size, self.n_samples
            )));
        }
        Ok(())
    }
}

/// The classes of an experiment, ordered lexicographically by shape.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassCatalog {
    shapes: Vec<String>,
    counts: Vec<usize>,
    total: usize,
}

impl ClassCatalog {
    /// `total` is the sample count before filtering and is the denominator
    /// of every class probability.
    pub fn from_counts(counts: Vec<(String, usize)>, total: usize) -> Result<Self> {
        let sorted: BTreeMap<String, usize> = counts.into_iter().collect();
        if sorted.is_empty() {
            return Err(Error::NoClasses);
        }
        let kept: usize = sorted.values().sum();
        if kept > total {
            return Err(Error::InvalidConfig(format!(
                "class counts sum to {kept}, more than the {total} samples"
            )));
        }
        let (shapes, counts) = sorted.into_iter().unzip();
        Ok(Self {
            shapes,
            counts,
            total,
        })
    }

    pub fn shapes(&self) -> &[String] {
        &self.shapes
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    pub fn total(&self) -> usize {
        self.total
    }

    /// Samples that fell below the support threshold.
    pub fn filtered(&self) -> usize {
        self.total - self.counts.iter().sum::<usize>()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.total as f64)
            .collect()
    }

    pub fn index_of(&self, shape: &str) -> Option<usize> {
        self.shapes.binary_search_by(|s| s.as_str().cmp(shape)).ok()
    }

    /// Index of the most frequent class; lowest index on ties.
    pub fn most_frequent(&self) -> usize {
        let probs: Vec<f64> = self.counts.iter().map(|&c| c as f64).collect();
        crate::gpcore::argmax(&probs)
    }

    /// Writes `shape,count,p_true`.
    pub fn write_csv<W: Write>(&self, out: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["shape", "count", "p_true"])?;
        for (i, shape) in self.shapes.iter().enumerate() {
            w.write_record([
                shape.clone(),
                self.counts[i].to_string(),
                (self.counts[i] as f64 / self.total as f64).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(file).map_err(|e| Error::csv(path, e))
    }
}

/// A sample whose shape belongs to the catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledSample {
    pub sequence: NucleotideSequence,
    pub label: usize,
}

pub fn random_sequence<R: Rng>(rng: &mut R, length: usize) -> NucleotideSequence {
    let letters = (0..length)
        .map(|_| Nucleotide::ALL[rng.gen_range(0..4)])
        .collect();
    NucleotideSequence::new(letters).expect("length >= 1")
}

/// Draws (or ingests) the sequences and folds each to a shape.
pub fn generate_dataset(cfg: &DatasetConfig) -> Result<Vec<DatasetRecord>> {
    cfg.validate()?;
    match &cfg.folder {
        Folder::Ingest(path) => {
            let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
            crate::rnamap::read_dataset(file, path)
        }
        Folder::Surrogate => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let sequences: Vec<NucleotideSequence> = (0..cfg.n_samples)
                .map(|_| random_sequence(&mut rng, cfg.length))
                .collect();
            Ok(sequences
                .into_par_iter()
                .map(|sequence| {
                    let structure = fold_surrogate(&sequence, cfg.min_loop);
                    let forest = parse_dotbracket(structure.as_str()).expect("folder output is balanced");
                    DatasetRecord {
                        shape: abstract_shape(&forest),
                        structure: Some(structure),
                        sequence,
                    }
                })
                .collect())
        }
    }
}

/// Drops shapes seen fewer than `min_class_support` times and labels the
/// remaining samples by catalog index.
pub fn define_classes(
    samples: &[(NucleotideSequence, AbstractShape)],
    min_class_support: usize,
) -> Result<(ClassCatalog, Vec<LabeledSample>)> {
    if samples.is_empty() {
        return Err(Error::NoClasses);
    }
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for (_, shape) in samples {
        *counts.entry(shape.as_str()).or_default() += 1;
    }
    let kept: Vec<(String, usize)> = counts
        .into_iter()
        .filter(|&(_, c)| c >= min_class_support)
        .map(|(s, c)| (s.to_string(), c))
        .collect();
    let catalog = ClassCatalog::from_counts(kept, samples.len())?;
    let labeled = samples
        .iter()
        .filter_map(|(sequence, shape)| {
            catalog.index_of(shape.as_str()).map(|label| LabeledSample {
                sequence: sequence.clone(),
                label,
            })
        })
        .collect();
    Ok((catalog, labeled))
}

/// Seeded shuffle, then the first `test_size` samples become test
/// candidates. Candidates whose class never appears in the remaining pool
/// are dropped.
pub fn split(
    samples: &[LabeledSample],
    test_size: usize,
    seed: u64,
) -> (Vec<LabeledSample>, Vec<LabeledSample>) {
    let mut shuffled = samples.to_vec();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let cut = test_size.min(shuffled.len());
    let pool = shuffled.split_off(cut);
    let present: BTreeSet<usize> = pool.iter().map(|s| s.label).collect();
    let test = shuffled
        .into_iter()
        .filter(|s| present.contains(&s.label))
        .collect();
    (pool, test)
}

/// Up to `n_per_class` distinct pool entries per class, drawn uniformly.
pub fn stratified_select(pool: &[LabeledSample], n_per_class: usize, seed: u64) -> Vec<LabeledSample> {
    let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, s) in pool.iter().enumerate() {
        by_class.entry(s.label).or_default().push(i);
    }
    let mut selected = Vec::new();
    for (label, members) in by_class {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[label as u64]));
        let take = n_per_class.min(members.len());
        let mut picks: Vec<usize> = rand::seq::index::sample(&mut rng, members.len(), take)
            .into_iter()
            .map(|k| members[k])
            .collect();
        picks.sort_unstable();
        selected.extend(picks.into_iter().map(|i| pool[i].clone()));
    }
    selected
}
