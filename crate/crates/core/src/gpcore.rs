//! Multi-output Gaussian-process regression on one-hot class targets.
//!
//! All `C` output columns share one RBF kernel (unit signal variance), one
//! noise level and one Cholesky factorization. The prior mean is a constant
//! vector per class; predictions are `m + K(x, X) (K(X, X) + λI)^-1 (Y - m)`
//! and the predicted class is the arg-max score.
//!
//! Hyperparameters `(ℓ, λ)` are fitted by maximizing the log marginal
//! likelihood with a bounded Nelder–Mead search in log space,
//! started from the caller's `ℓ₀` and from seeded random restarts.

use faer::linalg::solvers::{DenseSolveCore, Llt, Solve};
use faer::{Mat, MatRef, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

const LN_2PI: f64 = 1.837_877_066_409_345_3;

/// Diagonal jitter ladder tried when a factorization fails.
const JITTER_START: f64 = 1e-10;
const JITTER_MAX: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConfig {
    pub length_scale: f64,
}

impl KernelConfig {
    pub fn new(length_scale: f64) -> Result<Self> {
        if !(length_scale > 0.0 && length_scale.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "length scale must be > 0, got {length_scale}"
            )));
        }
        Ok(Self { length_scale })
    }

    /// Always 1.
    pub fn signal_variance(&self) -> f64 {
        1.0
    }
}

/// `exp(-|x - x'|² / (2ℓ²))`.
pub fn rbf(x: &[f64], y: &[f64], length_scale: f64) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    Ok(rbf_from_sqdist(squared_distance(x, y), length_scale))
}

fn rbf_from_sqdist(d2: f64, length_scale: f64) -> f64 {
    (-d2 / (2.0 * length_scale * length_scale)).exp()
}

fn squared_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// One-hot target matrix, one row per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct OneHotTargets(pub Mat<f64>);

impl OneHotTargets {
    pub fn matrix(&self) -> &Mat<f64> {
        &self.0
    }
}

pub fn one_hot(labels: &[usize], classes: usize) -> Result<OneHotTargets> {
    let mut y = Mat::zeros(labels.len(), classes);
    for (row, &label) in labels.iter().enumerate() {
        if label >= classes {
            return Err(Error::LabelOutOfRange { label, classes });
        }
        y[(row, label)] = 1.0;
    }
    Ok(OneHotTargets(y))
}

/// Index of the largest score; the lowest index wins ties.
pub fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

fn rows_of(x: MatRef<'_, f64>) -> Vec<Vec<f64>> {
    (0..x.nrows())
        .map(|i| (0..x.ncols()).map(|j| x[(i, j)]).collect())
        .collect()
}

/// Pairwise squared distances between the rows of `x`.
fn pairwise_sqdist(x: MatRef<'_, f64>) -> Mat<f64> {
    let rows = rows_of(x);
    let n = rows.len();
    let mut d = Mat::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = squared_distance(&rows[i], &rows[j]);
            d[(i, j)] = v;
            d[(j, i)] = v;
        }
    }
    d
}

fn kernel_from_sqdist(d2: &Mat<f64>, length_scale: f64) -> Mat<f64> {
    Mat::from_fn(d2.nrows(), d2.ncols(), |i, j| {
        rbf_from_sqdist(d2[(i, j)], length_scale)
    })
}

/// `K(X, X)` for the rows of `x`.
pub fn kernel_matrix(x: MatRef<'_, f64>, length_scale: f64) -> Mat<f64> {
    kernel_from_sqdist(&pairwise_sqdist(x), length_scale)
}

/// Cholesky of `k + λI`, escalating diagonal jitter on failure.
fn factorize(k: &Mat<f64>, noise: f64) -> Result<Llt<f64>> {
    let n = k.nrows();
    let mut a = k.clone();
    for i in 0..n {
        a[(i, i)] += noise;
    }
    if let Ok(chol) = Llt::new(a.as_ref(), Side::Lower) {
        return Ok(chol);
    }
    let mut jitter = JITTER_START;
    loop {
        let mut b = a.clone();
        for i in 0..n {
            b[(i, i)] += jitter;
        }
        if let Ok(chol) = Llt::new(b.as_ref(), Side::Lower) {
            return Ok(chol);
        }
        if jitter >= JITTER_MAX {
            return Err(Error::NotPositiveDefinite { jitter });
        }
        jitter *= 10.0;
    }
}

fn centered(y: MatRef<'_, f64>, mean: &[f64]) -> Result<Mat<f64>> {
    if y.ncols() != mean.len() {
        return Err(Error::DimensionMismatch {
            expected: y.ncols(),
            got: mean.len(),
        });
    }
    Ok(Mat::from_fn(y.nrows(), y.ncols(), |i, c| y[(i, c)] - mean[c]))
}

fn log_det(chol: &Llt<f64>) -> f64 {
    let l = chol.L();
    2.0 * (0..l.nrows()).map(|i| l[(i, i)].ln()).sum::<f64>()
}

fn frobenius_dot(a: &Mat<f64>, b: &Mat<f64>) -> f64 {
    let mut total = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            total += a[(i, j)] * b[(i, j)];
        }
    }
    total
}

fn check_rows(x: MatRef<'_, f64>, y: MatRef<'_, f64>) -> Result<()> {
    if x.nrows() != y.nrows() {
        return Err(Error::DimensionMismatch {
            expected: x.nrows(),
            got: y.nrows(),
        });
    }
    Ok(())
}

/// Log marginal likelihood of the centered targets under `N(0, K + λI)`,
/// summed over independent output columns.
pub fn log_marginal_likelihood(
    x: MatRef<'_, f64>,
    y: MatRef<'_, f64>,
    mean: &[f64],
    length_scale: f64,
    noise: f64,
) -> Result<f64> {
    check_rows(x, y)?;
    LikelihoodSurface::new(x, y, mean)?.value(length_scale, noise)
}

/// Precomputed pieces of the likelihood that do not depend on `(ℓ, λ)`.
struct LikelihoodSurface {
    sqdist: Mat<f64>,
    yc: Mat<f64>,
}

impl LikelihoodSurface {
    fn new(x: MatRef<'_, f64>, y: MatRef<'_, f64>, mean: &[f64]) -> Result<Self> {
        Ok(Self {
            sqdist: pairwise_sqdist(x),
            yc: centered(y, mean)?,
        })
    }

    fn value(&self, length_scale: f64, noise: f64) -> Result<f64> {
        let k = kernel_from_sqdist(&self.sqdist, length_scale);
        let chol = factorize(&k, noise)?;
        Ok(self.value_from(&chol, &chol.solve(&self.yc)))
    }

    fn value_from(&self, chol: &Llt<f64>, alpha: &Mat<f64>) -> f64 {
        let n = self.yc.nrows() as f64;
        let c = self.yc.ncols() as f64;
        let fit = frobenius_dot(&self.yc, alpha);
        -0.5 * fit - 0.5 * c * log_det(chol) - 0.5 * n * c * LN_2PI
    }

    /// Derivatives with respect to `ln ℓ` and `ln λ`.
    fn gradient(&self, length_scale: f64, noise: f64) -> Result<[f64; 2]> {
        let c = self.yc.ncols() as f64;
        let k = kernel_from_sqdist(&self.sqdist, length_scale);
        let chol = factorize(&k, noise)?;
        let alpha = chol.solve(&self.yc);
        // W = α αᵀ - C (K + λI)^-1; dL/dθ = ½ tr(W dK/dθ)
        let w = &alpha * alpha.transpose() - chol.inverse() * faer::Scale(c);
        let inv_l2 = 1.0 / (length_scale * length_scale);
        let n = k.nrows();
        let mut g_len = 0.0;
        let mut trace = 0.0;
        for j in 0..n {
            trace += w[(j, j)];
            for i in 0..n {
                g_len += w[(i, j)] * k[(i, j)] * self.sqdist[(i, j)];
            }
        }
        Ok([0.5 * g_len * inv_l2, 0.5 * noise * trace])
    }
}

/// Analytic gradient of [`log_marginal_likelihood`] with respect to
/// `(ln ℓ, ln λ)`.
pub fn log_marginal_likelihood_gradient(
    x: MatRef<'_, f64>,
    y: MatRef<'_, f64>,
    mean: &[f64],
    length_scale: f64,
    noise: f64,
) -> Result<[f64; 2]> {
    check_rows(x, y)?;
    LikelihoodSurface::new(x, y, mean)?.gradient(length_scale, noise)
}

/// Search settings for [`fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    /// Lower and upper bound on ℓ as multiples of the starting ℓ₀.
    pub length_scale_factors: (f64, f64),
    pub noise_bounds: (f64, f64),
    pub initial_noise: f64,
    pub restarts: usize,
    pub seed: u64,
    /// Likelihood evaluations allowed per start.
    pub max_evaluations: usize,
    /// Points per axis of a log-spaced scan over the bounds whose best
    /// point seeds one more start; below 2 disables the scan.
    pub grid_points: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            length_scale_factors: (1e-2, 1e3),
            noise_bounds: (1e-10, 10.0),
            initial_noise: 1e-6,
            restarts: 2,
            seed: 0,
            max_evaluations: 120,
            grid_points: 8,
        }
    }
}

type Point = [f64; 2];

struct Bounds {
    lo: Point,
    hi: Point,
}

impl Bounds {
    fn project(&self, p: Point) -> Point {
        [
            p[0].clamp(self.lo[0], self.hi[0]),
            p[1].clamp(self.lo[1], self.hi[1]),
        ]
    }
}

fn combine(a: Point, b: Point, t: f64) -> Point {
    // a + t (b - a)
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

/// Bounded Nelder–Mead maximization over `(ln ℓ, ln λ)`.
///
/// Proposed vertices are clamped into the box; points whose factorization
/// fails score `-inf`. The start vertex is part of the initial simplex, so
/// the result is never worse than the start.
fn nelder_mead(
    surface: &LikelihoodSurface,
    bounds: &Bounds,
    start: Point,
    max_evaluations: usize,
) -> (Point, f64) {
    let eval = |p: Point| {
        surface
            .value(p[0].exp(), p[1].exp())
            .unwrap_or(f64::NEG_INFINITY)
    };
    let start = bounds.project(start);
    let mut simplex: Vec<(Point, f64)> = Vec::with_capacity(3);
    simplex.push((start, eval(start)));
    for axis in 0..2 {
        let mut p = start;
        p[axis] += 1.0;
        if p[axis] > bounds.hi[axis] {
            p[axis] = start[axis] - 1.0;
        }
        let p = bounds.project(p);
        simplex.push((p, eval(p)));
    }
    let mut evaluations = 3;
    while evaluations < max_evaluations {
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        let (best, worst) = (simplex[0], simplex[2]);
        let spread = best.1 - worst.1;
        let size = (0..2)
            .map(|d| (simplex[1].0[d] - best.0[d]).abs().max((worst.0[d] - best.0[d]).abs()))
            .fold(0.0, f64::max);
        if (spread.is_finite() && spread <= 1e-10 * (1.0 + best.1.abs())) || size < 1e-8 {
            break;
        }
        let centroid = combine(simplex[0].0, simplex[1].0, 0.5);
        let reflected = bounds.project(combine(centroid, worst.0, -1.0));
        let fr = eval(reflected);
        evaluations += 1;
        if fr > best.1 {
            let expanded = bounds.project(combine(centroid, worst.0, -2.0));
            let fe = eval(expanded);
            evaluations += 1;
            simplex[2] = if fe > fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr > simplex[1].1 {
            simplex[2] = (reflected, fr);
            continue;
        }
        let (towards, f_towards) = if fr > worst.1 { (reflected, fr) } else { (worst.0, worst.1) };
        let contracted = bounds.project(combine(centroid, towards, 0.5));
        let fc = eval(contracted);
        evaluations += 1;
        if fc > f_towards {
            simplex[2] = (contracted, fc);
            continue;
        }
        for vertex in simplex.iter_mut().skip(1) {
            let p = bounds.project(combine(best.0, vertex.0, 0.5));
            *vertex = (p, eval(p));
            evaluations += 1;
        }
    }
    simplex
        .into_iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("three vertices")
}

/// Best point of a `points × points` log-spaced grid over the bounds.
fn grid_best(surface: &LikelihoodSurface, bounds: &Bounds, points: usize) -> Option<Point> {
    if points < 2 {
        return None;
    }
    let step = |axis: usize, k: usize| {
        bounds.lo[axis] + (bounds.hi[axis] - bounds.lo[axis]) * k as f64 / (points - 1) as f64
    };
    let mut best: Option<(Point, f64)> = None;
    for a in 0..points {
        for b in 0..points {
            let p = [step(0, a), step(1, b)];
            if let Ok(v) = surface.value(p[0].exp(), p[1].exp()) {
                if best.map_or(true, |(_, bv)| v > bv) {
                    best = Some((p, v));
                }
            }
        }
    }
    best.map(|(p, _)| p)
}

/// A conditioned Gaussian process ready for prediction.
#[derive(Debug, Clone)]
pub struct GpModel {
    x_train: Vec<Vec<f64>>,
    mean: Vec<f64>,
    length_scale: f64,
    noise: f64,
    /// `(K + λI)^-1 (Y - m)`, `n × C`.
    weights: Mat<f64>,
    chol: Option<Llt<f64>>,
    log_likelihood: Option<f64>,
    dim: usize,
}

/// Fitted hyperparameters and training summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSummary {
    pub length_scale: f64,
    pub noise: f64,
    pub n: usize,
    pub classes: usize,
    pub prior_mean: Vec<f64>,
    pub log_marginal_likelihood: Option<f64>,
}

impl ModelSummary {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("summary is always representable")
    }
}

impl GpModel {
    /// A model with no training data: every prediction is the prior mean.
    pub fn prior_only(mean: Vec<f64>, dim: usize) -> Self {
        let classes = mean.len();
        Self {
            x_train: Vec::new(),
            mean,
            length_scale: 1.0,
            noise: 0.0,
            weights: Mat::zeros(0, classes),
            chol: None,
            log_likelihood: None,
            dim,
        }
    }

    /// Conditions on data at fixed hyperparameters.
    pub fn condition(
        x: MatRef<'_, f64>,
        y: MatRef<'_, f64>,
        mean: &[f64],
        length_scale: f64,
        noise: f64,
    ) -> Result<Self> {
        KernelConfig::new(length_scale)?;
        check_rows(x, y)?;
        if x.nrows() == 0 {
            if y.ncols() != mean.len() {
                return Err(Error::DimensionMismatch {
                    expected: y.ncols(),
                    got: mean.len(),
                });
            }
            return Ok(Self::prior_only(mean.to_vec(), x.ncols()));
        }
        let surface = LikelihoodSurface::new(x, y, mean)?;
        let k = kernel_from_sqdist(&surface.sqdist, length_scale);
        let chol = factorize(&k, noise)?;
        let weights = chol.solve(&surface.yc);
        let ll = surface.value_from(&chol, &weights);
        Ok(Self {
            x_train: rows_of(x),
            mean: mean.to_vec(),
            length_scale,
            noise,
            weights,
            chol: Some(chol),
            log_likelihood: Some(ll),
            dim: x.ncols(),
        })
    }

    pub fn length_scale(&self) -> f64 {
        self.length_scale
    }

    pub fn noise(&self) -> f64 {
        self.noise
    }

    pub fn n_train(&self) -> usize {
        self.x_train.len()
    }

    pub fn classes(&self) -> usize {
        self.mean.len()
    }

    pub fn prior_mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn log_likelihood(&self) -> Option<f64> {
        self.log_likelihood
    }

    pub fn weights(&self) -> MatRef<'_, f64> {
        self.weights.as_ref()
    }

    /// Lower Cholesky factor of `K + λI` (plus any jitter that was needed).
    pub fn cholesky_factor(&self) -> Option<MatRef<'_, f64>> {
        self.chol.as_ref().map(|c| c.L())
    }

    pub fn summary(&self) -> ModelSummary {
        ModelSummary {
            length_scale: self.length_scale,
            noise: self.noise,
            n: self.n_train(),
            classes: self.classes(),
            prior_mean: self.mean.clone(),
            log_marginal_likelihood: self.log_likelihood,
        }
    }

    pub fn predict_scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let mut scores = self.mean.clone();
        for (i, row) in self.x_train.iter().enumerate() {
            let k = rbf_from_sqdist(squared_distance(row, x), self.length_scale);
            if k == 0.0 {
                continue;
            }
            for (c, s) in scores.iter_mut().enumerate() {
                *s += k * self.weights[(i, c)];
            }
        }
        Ok(scores)
    }

    pub fn predict_class(&self, x: &[f64]) -> Result<usize> {
        Ok(argmax(&self.predict_scores(x)?))
    }
}

/// Maximum-likelihood fit of `(ℓ, λ)` followed by conditioning.
///
/// The first start is `(ℓ₀, initial_noise)`; `restarts` more are drawn
/// uniformly in the log box from `cfg.seed`, and one more is the best
/// point of a coarse grid scan. The best end point wins, so
/// the returned likelihood is never below the likelihood at the first
/// start.
pub fn fit(
    x: MatRef<'_, f64>,
    y: MatRef<'_, f64>,
    mean: &[f64],
    initial_length_scale: f64,
    cfg: &FitConfig,
) -> Result<GpModel> {
    KernelConfig::new(initial_length_scale)?;
    check_rows(x, y)?;
    if x.nrows() == 0 {
        return GpModel::condition(x, y, mean, initial_length_scale, cfg.initial_noise);
    }
    let surface = LikelihoodSurface::new(x, y, mean)?;
    let bounds = Bounds {
        lo: [
            (initial_length_scale * cfg.length_scale_factors.0).ln(),
            cfg.noise_bounds.0.ln(),
        ],
        hi: [
            (initial_length_scale * cfg.length_scale_factors.1).ln(),
            cfg.noise_bounds.1.ln(),
        ],
    };
    let first = bounds.project([initial_length_scale.ln(), cfg.initial_noise.ln()]);
    // the starting point must be usable; later failures only rule out points
    surface.value(first[0].exp(), first[1].exp())?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut starts = vec![first];
    for _ in 0..cfg.restarts {
        starts.push([
            rng.gen_range(bounds.lo[0]..=bounds.hi[0]),
            rng.gen_range(bounds.lo[1]..=bounds.hi[1]),
        ]);
    }
    if let Some(p) = grid_best(&surface, &bounds, cfg.grid_points) {
        starts.push(p);
    }
    let mut best: Option<(Point, f64)> = None;
    for start in starts {
        let (point, value) = nelder_mead(&surface, &bounds, start, cfg.max_evaluations);
        if best.map_or(true, |(_, v)| value > v) {
            best = Some((point, value));
        }
    }
    let (point, _) = best.expect("at least one start");
    GpModel::condition(x, y, mean, point[0].exp(), point[1].exp())
}
