//! Algorithmic-probability priors for Gaussian-process classification.
//!
//! The crate estimates the complexity of each class's output pattern with
//! a Lempel–Ziv measure, turns it into a predicted class probability via
//! the simplicity-bias relation `P(x) ≈ 2^(-K(x))`, and uses the resulting
//! vector as the constant prior mean of a multi-output Gaussian process
//! trained on one-hot class targets. The worked domain is RNA: random
//! sequences are folded by a maximum-base-pairing folder and coarse-grained
//! to level-5 abstract shapes, which act as the classes.
//!
//! Modules, bottom-up:
//!
//! - [`lzcomplexity`]: LZ76 phrase counts and the symmetrized `C_LZ` measure.
//! - [`apprior`]: complexity rescaling, `2^(-aK-b)`, smoothing, prior vectors.
//! - [`rnamap`]: sequences, one-hot encoding, folding, dot-bracket and shapes.
//! - [`gpcore`]: RBF Gaussian-process regression and likelihood fitting.
//! - [`experiment`]: datasets, catalogs, training-size sweeps and metrics.
//! - [`cli`]: the commands behind the `simbias` binary.

pub mod apprior;
pub mod cli;
pub mod config;
pub mod error;
pub mod experiment;
pub mod gpcore;
pub mod lzcomplexity;
pub mod rnamap;

pub use error::{Error, Result};
