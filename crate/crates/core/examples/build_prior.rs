//! Build the algorithmic-probability prior for a generated catalog and
//! compare it with the observed shape frequencies.
//!
//! ```text
//! cargo run --release --example build_prior -- 30 3000
//! ```

use simbias::apprior::{build_prior, PriorConfig};
use simbias::experiment::{define_classes, generate_dataset, pearson_log, DatasetConfig};

fn main() -> simbias::Result<()> {
    let mut args = std::env::args().skip(1);
    let length = args.next().map_or(30, |a| a.parse().expect("length"));
    let n_samples = args.next().map_or(3000, |a| a.parse().expect("sample count"));
    let cfg = DatasetConfig {
        length,
        n_samples,
        test_size: n_samples / 10,
        seed: 1,
        ..DatasetConfig::default()
    };
    let records = generate_dataset(&cfg)?;
    let samples: Vec<_> = records.into_iter().map(|r| (r.sequence, r.shape)).collect();
    let (catalog, _) = define_classes(&samples, cfg.min_class_support)?;
    let prior = build_prior(&catalog, &PriorConfig::default())?;
    let p_true = catalog.probabilities();

    println!("{:<16} {:>6} {:>8} {:>8} {:>10} {:>10}", "shape", "count", "K_raw", "K_scaled", "P", "P_hat");
    for i in 0..catalog.len() {
        println!(
            "{:<16} {:>6} {:>8.3} {:>8.3} {:>10.4} {:>10.4}",
            catalog.shapes()[i],
            catalog.counts()[i],
            prior.k_raw[i],
            prior.k_scaled[i],
            p_true[i],
            prior.p_hat[i]
        );
    }
    println!("classes={} filtered={} sum_p_hat={:.4}", catalog.len(), catalog.filtered(), prior.sum_total);
    match pearson_log(&prior.p_hat, &p_true) {
        Ok(r) => println!("pearson r(log10 P_hat, log10 P) = {r:.3}"),
        Err(e) => println!("correlation undefined: {e}"),
    }
    Ok(())
}
