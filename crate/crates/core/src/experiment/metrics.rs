use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use crate::error::{Error, Result};

/// Fraction of positions where prediction equals truth.
pub fn accuracy<T: PartialEq>(y_true: &[T], y_pred: &[T]) -> f64 {
    assert_eq!(y_true.len(), y_pred.len(), "label vectors must align");
    if y_true.is_empty() {
        return 0.0;
    }
    let hits = y_true.iter().zip(y_pred).filter(|(t, p)| t == p).count();
    hits as f64 / y_true.len() as f64
}

/// Mean per-class recall over the classes that occur in `y_true`.
pub fn balanced_accuracy<T: Ord>(y_true: &[T], y_pred: &[T]) -> f64 {
    assert_eq!(y_true.len(), y_pred.len(), "label vectors must align");
    let mut per_class: BTreeMap<&T, (usize, usize)> = BTreeMap::new();
    for (t, p) in y_true.iter().zip(y_pred) {
        let entry = per_class.entry(t).or_default();
        entry.1 += 1;
        if t == p {
            entry.0 += 1;
        }
    }
    if per_class.is_empty() {
        return 0.0;
    }
    let total: f64 = per_class
        .values()
        .map(|&(hit, n)| hit as f64 / n as f64)
        .sum();
    total / per_class.len() as f64
}

/// Counts indexed by (true label, predicted label) over the sorted union
/// of labels seen on either side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub labels: Vec<String>,
    pub counts: Vec<Vec<usize>>,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> usize {
        (0..self.labels.len()).map(|i| self.counts[i][i]).sum()
    }

    /// Column sums, i.e. how often each label was predicted.
    pub fn predicted_totals(&self) -> Vec<usize> {
        (0..self.labels.len())
            .map(|j| self.counts.iter().map(|row| row[j]).sum())
            .collect()
    }

    /// Labeled CSV: the first header cell is `true\pred`.
    pub fn write_csv<W: Write>(&self, out: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["true\\pred".to_string()];
        header.extend(self.labels.iter().cloned());
        w.write_record(&header)?;
        for (label, row) in self.labels.iter().zip(&self.counts) {
            let mut record = vec![label.clone()];
            record.extend(row.iter().map(|c| c.to_string()));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn confusion_matrix<T: AsRef<str>>(y_true: &[T], y_pred: &[T]) -> ConfusionMatrix {
    assert_eq!(y_true.len(), y_pred.len(), "label vectors must align");
    let labels: Vec<String> = y_true
        .iter()
        .chain(y_pred)
        .map(|s| s.as_ref().to_string())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index = |s: &str| labels.binary_search_by(|l| l.as_str().cmp(s)).expect("label in union");
    let mut counts = vec![vec![0; labels.len()]; labels.len()];
    for (t, p) in y_true.iter().zip(y_pred) {
        counts[index(t.as_ref())][index(p.as_ref())] += 1;
    }
    ConfusionMatrix { labels, counts }
}

/// Pearson correlation of `log10 predicted` against `log10 truth`.
pub fn pearson_log(predicted: &[f64], truth: &[f64]) -> Result<f64> {
    if predicted.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: predicted.len(),
            right: truth.len(),
        });
    }
    if predicted.len() < 3 {
        return Err(Error::CorrelationUndefined(format!(
            "need at least 3 classes, got {}",
            predicted.len()
        )));
    }
    if predicted.iter().chain(truth).any(|&v| !(v > 0.0)) {
        return Err(Error::CorrelationUndefined("log of a non-positive value".into()));
    }
    let xs: Vec<f64> = predicted.iter().map(|v| v.log10()).collect();
    let ys: Vec<f64> = truth.iter().map(|v| v.log10()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(Error::CorrelationUndefined("zero variance".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}
