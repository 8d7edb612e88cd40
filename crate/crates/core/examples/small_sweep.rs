//! A reduced training-size sweep comparing the zero prior with the
//! algorithmic-probability prior; writes the usual tables to a directory.
//!
//! ```text
//! cargo run --release --example small_sweep -- runs/demo
//! ```

use std::path::PathBuf;

use simbias::apprior::PriorConfig;
use simbias::experiment::{sweep, DatasetConfig, SweepConfig};
use simbias::gpcore::FitConfig;

fn main() -> simbias::Result<()> {
    let out = std::env::args().nth(1).map_or_else(|| PathBuf::from("runs/small_sweep"), PathBuf::from);
    let dataset = DatasetConfig {
        length: 30,
        n_samples: 2000,
        test_size: 200,
        seed: 1,
        ..DatasetConfig::default()
    };
    let sweep_cfg = SweepConfig {
        per_class_sizes: vec![1, 2, 3, 5, 10, 20, 40],
        repetitions: 3,
        ..SweepConfig::default()
    };
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let result = sweep(&dataset, &sweep_cfg, &PriorConfig::default(), &FitConfig::default(), workers)?;

    println!("classes={} pool={} test={}", result.catalog.len(), result.pool_size, result.test_size);
    println!("{:>6} {:>10} {:>10} {:>10}", "size", "mode", "accuracy", "balanced");
    for s in &result.summary {
        println!(
            "{:>6} {:>10} {:>10.3} {:>10.3}",
            s.n_train, s.prior_mode, s.mean_accuracy, s.mean_balanced_accuracy
        );
    }
    std::fs::create_dir_all(&out).map_err(|e| simbias::Error::Io { path: out.clone(), source: e })?;
    result.save(&out)?;
    println!("tables written to {}", out.display());
    Ok(())
}
