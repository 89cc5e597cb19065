//! Random Fourier feature kernel classifiers.
//!
//! The crate is organised around the pipeline used to train a kernel
//! classifier with explicit random features:
//!
//! - [`kernels`]: exact shift-invariant kernels (Gaussian, Laplacian and the
//!   subset-averaged Sparse Gaussian), seeded sampling of feature maps and
//!   their application to data.
//! - [`model`]: softmax regression over the features, optionally with a
//!   low-rank `Θ = UV` output bottleneck.
//! - [`training`]: minibatch SGD, the CE/ENT/ERR/ERLL metric suite,
//!   plateau-driven learning-rate halving and best-snapshot early stopping.
//! - [`featsel`]: iterative random feature selection by row norms of `Θ`.
//! - [`data`]: datasets, synthetic generators, splitting and the binary
//!   container used for datasets, feature maps and models.
//! - [`verify`]: Monte Carlo and brute-force checks of the kernel
//!   approximation, shared by the `verify` command and the test suites.
//! - [`cli`]: the `rffkit` command-line experiment runner.

pub mod cli;
pub mod data;
pub mod error;
pub mod featsel;
pub mod kernels;
pub mod model;
mod rng;
pub mod training;
pub mod verify;

pub use error::{Error, Result};
