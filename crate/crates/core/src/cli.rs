//! Commands behind the `simbias` binary.
//!
//! Each command takes the parsed [`Cli`] and writes human-readable progress
//! to the supplied writer; data goes to files under `--out`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::apprior::build_prior;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::experiment::{define_classes, generate_dataset, pearson_log, sweep, ClassCatalog, RESULT_HEADER};
use crate::rnamap::{
    abstract_shape, fold_surrogate, parse_dotbracket, read_dataset, write_dataset, NucleotideSequence,
};

#[derive(Debug, Parser)]
#[command(name = "simbias", version, about = "Algorithmic-probability priors for GP shape classification")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Default)]
pub struct GlobalArgs {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides `dataset.seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Overrides `out_dir`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Overrides `workers`.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Allow `sweep` to overwrite existing results.
    #[arg(long, global = true)]
    pub force: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate and fold random sequences into `<out>/dataset.csv`.
    Generate,
    /// Fold sequences and print structure and shape.
    Fold {
        /// A sequence, or a file with one sequence per line.
        input: String,
    },
    /// Build the class catalog and prior from a dataset file.
    Prior {
        dataset: PathBuf,
    },
    /// Run the training-size sweep.
    Sweep,
    /// Turn a sweep directory into plot-ready TSV files.
    Report {
        /// `results.csv` of a sweep (its directory also works).
        results: PathBuf,
    },
}

impl GlobalArgs {
    /// Loads the config file (or defaults) and applies flag overrides.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.dataset.seed = seed;
        }
        if let Some(out) = &self.out {
            cfg.out_dir = out.clone();
        }
        if let Some(workers) = self.workers {
            cfg.workers = workers;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn create_file(path: &Path) -> Result<std::fs::File> {
    std::fs::File::create(path).map_err(|e| Error::io(path, e))
}

fn open_file(path: &Path) -> Result<std::fs::File> {
    std::fs::File::open(path).map_err(|e| Error::io(path, e))
}

pub fn run<W: Write>(cli: &Cli, out: &mut W) -> Result<()> {
    match &cli.command {
        Command::Generate => cmd_generate(&cli.global.resolve()?, out).map(|_| ()),
        Command::Fold { input } => cmd_fold(input, &cli.global.resolve()?, out),
        Command::Prior { dataset } => cmd_prior(dataset, &cli.global.resolve()?, out).map(|_| ()),
        Command::Sweep => cmd_sweep(&cli.global.resolve()?, cli.global.force, out),
        Command::Report { results } => {
            let target = cli.global.out.clone();
            cmd_report(results, target.as_deref(), out).map(|_| ())
        }
    }
}

fn console(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

/// Writes `<out_dir>/dataset.csv` and returns its path.
pub fn cmd_generate<W: Write>(cfg: &RunConfig, out: &mut W) -> Result<PathBuf> {
    let records = generate_dataset(&cfg.dataset)?;
    create_dir(&cfg.out_dir)?;
    let path = cfg.out_dir.join("dataset.csv");
    write_dataset(&records, create_file(&path)?).map_err(|e| Error::csv(&path, e))?;
    let samples: Vec<_> = records
        .iter()
        .map(|r| (r.sequence.clone(), r.shape.clone()))
        .collect();
    let classes = define_classes(&samples, cfg.dataset.min_class_support).map_or(0, |(c, _)| c.len());
    let length = records.first().map_or(0, |r| r.sequence.len());
    writeln!(
        out,
        "N={} L={} classes={} (min support {}) -> {}",
        records.len(),
        length,
        classes,
        cfg.dataset.min_class_support,
        path.display()
    )
    .map_err(console)?;
    Ok(path)
}

fn read_sequences(input: &str) -> Result<Vec<NucleotideSequence>> {
    let path = Path::new(input);
    if !path.is_file() {
        return Ok(vec![input.trim().parse()?]);
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut sequences = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let field = line.split(',').next().unwrap_or("").trim();
        if field.is_empty() || (i == 0 && field == "sequence") {
            continue;
        }
        sequences.push(field.parse().map_err(|e: Error| Error::MalformedRow {
            path: path.to_path_buf(),
            line: i as u64 + 1,
            message: e.to_string(),
        })?);
    }
    Ok(sequences)
}

/// Prints `sequence<TAB>structure<TAB>shape` per input sequence.
pub fn cmd_fold<W: Write>(input: &str, cfg: &RunConfig, out: &mut W) -> Result<()> {
    for seq in read_sequences(input)? {
        let structure = fold_surrogate(&seq, cfg.dataset.min_loop);
        let shape = abstract_shape(&parse_dotbracket(structure.as_str())?);
        writeln!(out, "{seq}\t{structure}\t{shape}").map_err(console)?;
    }
    Ok(())
}

/// Writes `catalog.csv` and `prior.csv`; returns the catalog.
pub fn cmd_prior<W: Write>(dataset: &Path, cfg: &RunConfig, out: &mut W) -> Result<ClassCatalog> {
    let records = read_dataset(open_file(dataset)?, dataset)?;
    let samples: Vec<_> = records.into_iter().map(|r| (r.sequence, r.shape)).collect();
    let (catalog, _) = define_classes(&samples, cfg.dataset.min_class_support)?;
    let prior = build_prior(&catalog, &cfg.prior)?;
    create_dir(&cfg.out_dir)?;
    catalog.save(&cfg.out_dir.join("catalog.csv"))?;
    prior.save(&cfg.out_dir.join("prior.csv"))?;
    writeln!(out, "classes={} filtered={}", catalog.len(), catalog.filtered()).map_err(console)?;
    writeln!(out, "sum_p_hat={}", prior.sum_total).map_err(console)?;
    match pearson_log(&prior.p_hat, &catalog.probabilities()) {
        Ok(r) => writeln!(out, "pearson_log={r}"),
        Err(e) => writeln!(out, "pearson_log=undefined ({e})"),
    }
    .map_err(console)?;
    Ok(catalog)
}

/// Runs the sweep and writes results, summary, catalog, prior, confusion
/// matrices and the effective config under `out_dir`.
pub fn cmd_sweep<W: Write>(cfg: &RunConfig, force: bool, out: &mut W) -> Result<()> {
    let results_path = cfg.out_dir.join("results.csv");
    if results_path.exists() && !force {
        return Err(Error::OutputExists(cfg.out_dir.clone()));
    }
    let workers = cfg.effective_workers();
    let result = sweep(&cfg.dataset, &cfg.sweep, &cfg.prior, &cfg.gp.fit_config(), workers)?;
    create_dir(&cfg.out_dir)?;
    result.save(&cfg.out_dir)?;
    let cfg_path = cfg.out_dir.join("config.toml");
    std::fs::write(&cfg_path, cfg.to_toml()).map_err(|e| Error::io(&cfg_path, e))?;
    writeln!(
        out,
        "classes={} pool={} test={} sum_p_hat={}",
        result.catalog.len(),
        result.pool_size,
        result.test_size,
        result.prior.sum_total
    )
    .map_err(console)?;
    writeln!(out, "n_train\tprior_mode\tmean_accuracy\tmean_balanced_accuracy\tmean_train_total").map_err(console)?;
    for s in &result.summary {
        writeln!(
            out,
            "{}\t{}\t{:.4}\t{:.4}\t{:.1}",
            s.n_train, s.prior_mode, s.mean_accuracy, s.mean_balanced_accuracy, s.mean_train_total
        )
        .map_err(console)?;
    }
    Ok(())
}

struct SeriesStats {
    accuracy: Vec<f64>,
    balanced: Vec<f64>,
}

fn mean_and_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Emits `accuracy_vs_size.tsv` and, when the sweep directory also holds
/// `catalog.csv` and `prior.csv`, `correlation.tsv`. Returns the files
/// written.
pub fn cmd_report<W: Write>(results: &Path, target: Option<&Path>, out: &mut W) -> Result<Vec<PathBuf>> {
    let results_file = if results.is_dir() {
        results.join("results.csv")
    } else {
        results.to_path_buf()
    };
    let dir = results_file.parent().map(Path::to_path_buf).unwrap_or_default();
    let target = target.map(Path::to_path_buf).unwrap_or_else(|| dir.clone());
    create_dir(&target)?;

    let mut reader = csv::Reader::from_reader(open_file(&results_file)?);
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::csv(&results_file, e))?
        .iter()
        .map(str::to_string)
        .collect();
    if header != RESULT_HEADER {
        return Err(Error::MalformedRow {
            path: results_file.clone(),
            line: 1,
            message: format!("expected header {}", RESULT_HEADER.join(",")),
        });
    }
    let mut series: BTreeMap<(usize, String), SeriesStats> = BTreeMap::new();
    for row in reader.records() {
        let row = row.map_err(|e| Error::csv(&results_file, e))?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = |message: String| Error::MalformedRow {
            path: results_file.clone(),
            line,
            message,
        };
        let n: usize = row[0].parse().map_err(|_| bad(format!("bad n_train {:?}", &row[0])))?;
        let acc: f64 = row[3].parse().map_err(|_| bad(format!("bad accuracy {:?}", &row[3])))?;
        let bal: f64 = row[4].parse().map_err(|_| bad(format!("bad balanced_accuracy {:?}", &row[4])))?;
        let entry = series.entry((n, row[1].to_string())).or_insert(SeriesStats {
            accuracy: Vec::new(),
            balanced: Vec::new(),
        });
        entry.accuracy.push(acc);
        entry.balanced.push(bal);
    }

    let mut written = Vec::new();
    let acc_path = target.join("accuracy_vs_size.tsv");
    let mut f = create_file(&acc_path)?;
    let io = |e| Error::io(&acc_path, e);
    writeln!(f, "n_train\tprior_mode\tmean_accuracy\tsd_accuracy\tmean_balanced_accuracy\tsd_balanced_accuracy\trepetitions").map_err(io)?;
    for ((n, mode), s) in &series {
        let (ma, sa) = mean_and_sd(&s.accuracy);
        let (mb, sb) = mean_and_sd(&s.balanced);
        writeln!(f, "{n}\t{mode}\t{ma}\t{sa}\t{mb}\t{sb}\t{}", s.accuracy.len()).map_err(io)?;
    }
    written.push(acc_path.clone());

    let catalog_path = dir.join("catalog.csv");
    let prior_path = dir.join("prior.csv");
    if catalog_path.is_file() && prior_path.is_file() {
        let p_true = read_column(&catalog_path, "p_true")?;
        let p_hat = read_column(&prior_path, "p_hat")?;
        let corr_path = target.join("correlation.tsv");
        let mut f = create_file(&corr_path)?;
        let io = |e| Error::io(&corr_path, e);
        writeln!(f, "shape\tlog10_p_true\tlog10_p_hat").map_err(io)?;
        for (shape, pt) in &p_true {
            if let Some(ph) = p_hat.get(shape) {
                writeln!(f, "{shape}\t{}\t{}", pt.log10(), ph.log10()).map_err(io)?;
            }
        }
        written.push(corr_path);
    }
    for path in &written {
        writeln!(out, "wrote {}", path.display()).map_err(console)?;
    }
    Ok(written)
}

/// `shape -> value` for one numeric column of a shape-keyed CSV.
fn read_column(path: &Path, column: &str) -> Result<BTreeMap<String, f64>> {
    let mut reader = csv::Reader::from_reader(open_file(path)?);
    let header = reader.headers().map_err(|e| Error::csv(path, e))?.clone();
    let idx = header.iter().position(|h| h == column).ok_or_else(|| Error::MalformedRow {
        path: path.to_path_buf(),
        line: 1,
        message: format!("missing column {column}"),
    })?;
    let mut map = BTreeMap::new();
    for row in reader.records() {
        let row = row.map_err(|e| Error::csv(path, e))?;
        let value = row[idx].parse().map_err(|_| Error::MalformedRow {
            path: path.to_path_buf(),
            line: row.position().map_or(0, |p| p.line()),
            message: format!("bad {column} {:?}", &row[idx]),
        })?;
        map.insert(row[0].to_string(), value);
    }
    Ok(map)
}
