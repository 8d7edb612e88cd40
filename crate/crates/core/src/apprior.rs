//! Algorithmic-probability class priors.
//!
//! Each class shape is turned into a binary string, its LZ complexity is
//! rescaled onto `[0, m_log2]` bits across the catalog, and the predicted
//! probability is `2^(-a*K - b)`. The raw predictions are optionally
//! smoothed by a sliding geometric mean over the probability-sorted
//! classes and finally scaled by `alpha`. The result is deliberately not
//! normalized.

use std::cmp::Ordering;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::ClassCatalog;
use crate::lzcomplexity::{clz, shape_to_binary};
use crate::rnamap::OPEN_CHAIN;

/// Target range of the rescaled complexity, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScaleBits {
    /// Longest binary shape string in the catalog.
    Auto(AutoKeyword),
    Bits(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoKeyword {
    Auto,
}

impl Default for ScaleBits {
    fn default() -> Self {
        ScaleBits::Auto(AutoKeyword::Auto)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PriorConfig {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub m_log2: ScaleBits,
    pub smoothing: bool,
}

impl Default for PriorConfig {
    fn default() -> Self {
        Self {
            a: 1.0,
            b: 0.0,
            alpha: 1.0,
            m_log2: ScaleBits::default(),
            smoothing: true,
        }
    }
}

impl PriorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(Error::InvalidConfig(format!("a must be > 0, got {}", self.a)));
        }
        if !self.b.is_finite() {
            return Err(Error::InvalidConfig("b must be finite".into()));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha must lie in (0, 1], got {}",
                self.alpha
            )));
        }
        if let ScaleBits::Bits(m) = self.m_log2 {
            if !(m > 0.0 && m.is_finite()) {
                return Err(Error::InvalidConfig(format!("m_log2 must be > 0, got {m}")));
            }
        }
        Ok(())
    }
}

/// Per-class complexity rescaled onto `[0, m_log2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledComplexity(pub Vec<f64>);

/// Predicted per-class probabilities aligned with the catalog order.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorVector {
    pub shapes: Vec<String>,
    pub k_raw: Vec<f64>,
    pub k_scaled: Vec<f64>,
    pub p_hat: Vec<f64>,
    pub sum_total: f64,
}

impl PriorVector {
    pub fn len(&self) -> usize {
        self.p_hat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_hat.is_empty()
    }

    /// Index of the largest entry; ties go to the lowest index.
    pub fn argmax(&self) -> usize {
        crate::gpcore::argmax(&self.p_hat)
    }

    /// Writes `shape,k_raw,k_scaled,p_hat`.
    pub fn write_csv<W: Write>(&self, out: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["shape", "k_raw", "k_scaled", "p_hat"])?;
        for i in 0..self.len() {
            w.write_record([
                self.shapes[i].clone(),
                self.k_raw[i].to_string(),
                self.k_scaled[i].to_string(),
                self.p_hat[i].to_string(),
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

pub fn scale_complexities(raw: &[f64], m_log2: f64) -> ScaledComplexity {
    let lo = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo {
        return ScaledComplexity(vec![0.0; raw.len()]);
    }
    let span = hi - lo;
    ScaledComplexity(raw.iter().map(|&r| m_log2 * ((r - lo) / span)).collect())
}

/// `2^(-a*K - b)` per class.
pub fn raw_prior(k: &ScaledComplexity, cfg: &PriorConfig) -> Vec<f64> {
    k.0.iter().map(|&k| (-cfg.a * k - cfg.b).exp2()).collect()
}

/// Geometric mean of a window, clamped into the window's range so constant
/// windows reproduce their value exactly.
fn geometric_mean(window: &[f64]) -> f64 {
    let lo = window.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = window.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let product: f64 = window.iter().product();
    let g = if product >= f64::MIN_POSITIVE && product.is_finite() {
        match window.len() {
            1 => product,
            2 => product.sqrt(),
            3 => product.cbrt(),
            k => product.powf(1.0 / k as f64),
        }
    } else {
        let mean_log = window.iter().map(|p| p.ln()).sum::<f64>() / window.len() as f64;
        mean_log.exp()
    };
    g.clamp(lo, hi)
}

/// Sliding geometric mean over classes sorted by ascending probability.
///
/// `keys` break probability ties; output is in the input order.
pub fn smooth(probs: &[f64], keys: &[&str]) -> Vec<f64> {
    assert_eq!(probs.len(), keys.len(), "one key per class");
    let c = probs.len();
    if c <= 1 {
        return probs.to_vec();
    }
    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by(|&x, &y| {
        probs[x]
            .partial_cmp(&probs[y])
            .unwrap_or(Ordering::Equal)
            .then_with(|| keys[x].cmp(keys[y]))
    });
    let sorted: Vec<f64> = order.iter().map(|&i| probs[i]).collect();
    let mut out = vec![0.0; c];
    for (rank, &class) in order.iter().enumerate() {
        let lo = rank.saturating_sub(1);
        let hi = (rank + 1).min(c - 1);
        out[class] = geometric_mean(&sorted[lo..=hi]);
    }
    out
}

/// Raw complexity of one class shape and the length of its binary form.
///
/// The open chain has no brackets; it is treated as the trivial
/// one-symbol string, so its complexity is `log2(1) = 0`.
pub fn shape_complexity(shape: &str) -> Result<(f64, usize)> {
    if shape == OPEN_CHAIN {
        return Ok((0.0, 1));
    }
    let bits = shape_to_binary(shape)?;
    Ok((clz(&bits).raw_clz, bits.len()))
}

pub fn build_prior(catalog: &ClassCatalog, cfg: &PriorConfig) -> Result<PriorVector> {
    cfg.validate()?;
    let shapes: Vec<String> = catalog.shapes().to_vec();
    if shapes.is_empty() {
        return Err(Error::NoClasses);
    }
    let mut k_raw = Vec::with_capacity(shapes.len());
    let mut longest = 0;
    for shape in &shapes {
        let (raw, len) = shape_complexity(shape)?;
        k_raw.push(raw);
        longest = longest.max(len);
    }
    let m_log2 = match cfg.m_log2 {
        ScaleBits::Auto(_) => longest as f64,
        ScaleBits::Bits(m) => m,
    };
    let k_scaled = scale_complexities(&k_raw, m_log2);
    let mut p = raw_prior(&k_scaled, cfg);
    if cfg.smoothing {
        let keys: Vec<&str> = shapes.iter().map(String::as_str).collect();
        p = smooth(&p, &keys);
    }
    let p_hat: Vec<f64> = p.into_iter().map(|v| cfg.alpha * v).collect();
    let sum_total = p_hat.iter().sum();
    Ok(PriorVector {
        shapes,
        k_raw,
        k_scaled: k_scaled.0,
        p_hat,
        sum_total,
    })
}
