//! Datasets, class catalogs, training-size sweeps and their metrics.

mod dataset;
mod metrics;
mod sweep;

pub use dataset::{
    define_classes, generate_dataset, random_sequence, split, stratified_select, ClassCatalog, DatasetConfig,
    Folder, LabeledSample,
};
pub use metrics::{accuracy, balanced_accuracy, confusion_matrix, pearson_log, ConfusionMatrix};
pub use sweep::{
    initial_length_scale, prepare, run_cell, sweep, sweep_prepared, CellContext, MetricsReport, PriorMode,
    SummaryRow, SweepConfig, SweepData, SweepResult, RESULT_HEADER,
};

/// Platform-independent seed mixing (SplitMix64 finalizer over each word).
pub fn derive_seed(seed: u64, words: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    words.iter().fold(mix(seed), |acc, &w| mix(acc ^ mix(w)))
}
