//! Shift-invariant kernels and their random Fourier feature maps.
//!
//! A feature map holds `D` projection rows `ω_i` and phases `b_i`; a point
//! `x` maps to `z_i(x) = √(2/D)·cos(ω_iᵀx + b_i)`, so that `z(x)ᵀz(y)` is an
//! unbiased estimate of `k(x, y)` when `ω` is drawn from the kernel's
//! spectral density and `b` uniformly from `[0, 2π)`.
//!
//! | kernel          | `k(x, y)`                                   | `ω` entries               |
//! |-----------------|---------------------------------------------|---------------------------|
//! | Gaussian        | `exp(-‖x-y‖²/2σ²)`                          | `Normal(0, 1/σ²)`         |
//! | Laplacian       | `exp(-λ‖x-y‖₁)`                             | `Cauchy(0, λ)`            |
//! | Sparse Gaussian | mean over `|F| = k` of `exp(-‖x_F-y_F‖²/2σ²)` | `k` random coordinates `Normal(0, 1/σ²)`, rest zero |

use std::f64::consts::{PI, TAU};
use std::fmt;

use itertools::Itertools;
use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Zip};
use rand::Rng;
use rand_distr::{Open01, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::{stream, Purpose};

/// Largest number of subsets the exact Sparse Gaussian kernel will enumerate.
pub const ENUMERATION_CAP: u128 = 1_000_000;

/// Largest `N` accepted by [`gram_matrix`].
pub const GRAM_LIMIT: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    Gaussian { sigma: f64 },
    Laplacian { lambda: f64 },
    SparseGaussian { sigma: f64, k: usize },
}

impl KernelSpec {
    pub fn gaussian(sigma: f64) -> Result<Self> {
        let spec = KernelSpec::Gaussian { sigma };
        spec.validate()?;
        Ok(spec)
    }

    pub fn laplacian(lambda: f64) -> Result<Self> {
        let spec = KernelSpec::Laplacian { lambda };
        spec.validate()?;
        Ok(spec)
    }

    pub fn sparse_gaussian(sigma: f64, k: usize) -> Result<Self> {
        let spec = KernelSpec::SparseGaussian { sigma, k };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the hyperparameters that do not depend on the input dimension.
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
            }
        };
        match *self {
            KernelSpec::Gaussian { sigma } => positive("sigma", sigma),
            KernelSpec::Laplacian { lambda } => positive("lambda", lambda),
            KernelSpec::SparseGaussian { sigma, k } => {
                positive("sigma", sigma)?;
                if k == 0 {
                    return Err(Error::InvalidParameter("sparsity k must be at least 1".into()));
                }
                Ok(())
            }
        }
    }

    /// Validates the spec against a concrete input dimension.
    pub fn validate_for(&self, d: usize) -> Result<()> {
        self.validate()?;
        if d == 0 {
            return Err(Error::InvalidParameter("input dimension must be at least 1".into()));
        }
        if let KernelSpec::SparseGaussian { k, .. } = *self {
            if k > d {
                return Err(Error::InvalidParameter(format!("sparsity k = {k} exceeds input dimension {d}")));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::Gaussian { .. } => "gaussian",
            KernelSpec::Laplacian { .. } => "laplacian",
            KernelSpec::SparseGaussian { .. } => "sparse-gaussian",
        }
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            KernelSpec::Gaussian { sigma } => write!(f, "gaussian(sigma={sigma})"),
            KernelSpec::Laplacian { lambda } => write!(f, "laplacian(lambda={lambda})"),
            KernelSpec::SparseGaussian { sigma, k } => {
                write!(f, "sparse-gaussian(sigma={sigma}, k={k})")
            }
        }
    }
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    if x.is_empty() {
        return Err(Error::InvalidParameter("vectors must have at least one entry".into()));
    }
    Ok(())
}

/// `n choose k`, saturating just above `cap`.
fn binomial_capped(n: usize, k: usize, cap: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > cap {
            return acc;
        }
    }
    acc
}

/// Exact kernel value. The Sparse Gaussian kernel is computed by explicit
/// enumeration of all `binom(d, k)` coordinate subsets and refuses to run past
/// [`ENUMERATION_CAP`].
pub fn eval_exact(spec: &KernelSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    spec.validate_for(x.len())?;
    let value = match *spec {
        KernelSpec::Gaussian { sigma } => {
            let sq: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
            (-sq / (2.0 * sigma * sigma)).exp()
        }
        KernelSpec::Laplacian { lambda } => {
            let l1: f64 = x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum();
            (-lambda * l1).exp()
        }
        KernelSpec::SparseGaussian { sigma, k } => {
            let subsets = binomial_capped(x.len(), k, ENUMERATION_CAP);
            if subsets > ENUMERATION_CAP {
                return Err(Error::EnumerationCap { subsets, cap: ENUMERATION_CAP });
            }
            let sq: Vec<f64> = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).collect();
            let denom = 2.0 * sigma * sigma;
            let total: f64 = (0..x.len())
                .combinations(k)
                .map(|subset| (-subset.iter().map(|&j| sq[j]).sum::<f64>() / denom).exp())
                .sum();
            total / subsets as f64
        }
    };
    Ok(value)
}

/// Uniform `k`-subset of `0..d` by Floyd's algorithm, returned sorted.
pub(crate) fn floyd_subset<R: Rng + ?Sized>(d: usize, k: usize, rng: &mut R) -> Vec<usize> {
    let mut chosen = Vec::with_capacity(k);
    for j in (d - k)..d {
        let t = rng.gen_range(0..=j);
        chosen.push(if chosen.contains(&t) { j } else { t });
    }
    chosen.sort_unstable();
    chosen
}

fn cauchy<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    scale * (PI * (u - 0.5)).tan()
}

/// Projection rows `ω_1..ω_D`.
#[derive(Debug, Clone, PartialEq)]
pub enum Projection {
    /// `D × d` dense matrix.
    Dense(Array2<f64>),
    /// Exactly `k` entries per row, row-major, indices sorted within a row.
    Sparse { k: usize, indices: Vec<usize>, values: Vec<f64> },
}

impl Projection {
    fn dot(&self, row: usize, x: &ArrayView1<f64>) -> f64 {
        match self {
            Projection::Dense(omega) => {
                let w = omega.row(row);
                let mut acc = 0.0;
                for j in 0..w.len() {
                    acc += w[j] * x[j];
                }
                acc
            }
            Projection::Sparse { k, indices, values } => {
                let span = row * k..(row + 1) * k;
                let mut acc = 0.0;
                for (&j, &w) in indices[span.clone()].iter().zip(&values[span]) {
                    acc += w * x[j];
                }
                acc
            }
        }
    }
}

/// Sampled random Fourier feature map.
///
/// Every slot `i` is drawn from its own RNG streams keyed by
/// `(seed, generation[i], i)`, so the map is a pure function of
/// `(spec, d, D, seed, generations)`. Plain sampling uses generation 0 for all
/// slots; feature selection bumps the generation of the slots it redraws.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap {
    spec: KernelSpec,
    input_dim: usize,
    seed: u64,
    projection: Projection,
    phases: Array1<f64>,
    generations: Vec<u32>,
}

impl FeatureMap {
    /// Draws `num_features` slots for inputs of dimension `input_dim`.
    pub fn sample(spec: &KernelSpec, input_dim: usize, num_features: usize, seed: u64) -> Result<Self> {
        spec.validate_for(input_dim)?;
        if num_features == 0 {
            return Err(Error::InvalidParameter("feature count must be at least 1".into()));
        }
        let projection = match *spec {
            KernelSpec::SparseGaussian { k, .. } => {
                Projection::Sparse { k, indices: vec![0; num_features * k], values: vec![0.0; num_features * k] }
            }
            _ => Projection::Dense(Array2::zeros((num_features, input_dim))),
        };
        let mut map = FeatureMap {
            spec: *spec,
            input_dim,
            seed,
            projection,
            phases: Array1::zeros(num_features),
            generations: vec![0; num_features],
        };
        for slot in 0..num_features {
            map.redraw(slot, 0);
        }
        Ok(map)
    }

    /// Reassembles a map from stored parts, checking every invariant.
    pub fn from_parts(
        spec: KernelSpec,
        input_dim: usize,
        seed: u64,
        projection: Projection,
        phases: Array1<f64>,
        generations: Vec<u32>,
    ) -> Result<Self> {
        spec.validate_for(input_dim)?;
        let n = phases.len();
        if n == 0 {
            return Err(Error::InvalidParameter("feature count must be at least 1".into()));
        }
        if generations.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: generations.len() });
        }
        if let Some(bad) = phases.iter().find(|b| !(0.0..TAU).contains(*b)) {
            return Err(Error::InvalidParameter(format!("phase {bad} outside [0, 2π)")));
        }
        match (&spec, &projection) {
            (KernelSpec::SparseGaussian { k, .. }, Projection::Sparse { k: pk, indices, values }) => {
                if k != pk || indices.len() != n * k || values.len() != n * k {
                    return Err(Error::InvalidParameter("sparse projection shape mismatch".into()));
                }
                for row in indices.chunks(*k) {
                    if row.windows(2).any(|w| w[0] >= w[1]) || row.iter().any(|&j| j >= input_dim) {
                        return Err(Error::InvalidParameter(
                            "sparse projection row indices must be distinct, sorted and in range".into(),
                        ));
                    }
                }
            }
            (KernelSpec::SparseGaussian { .. }, Projection::Dense(_)) => {
                return Err(Error::InvalidParameter("sparse kernel needs a sparse projection".into()));
            }
            (_, Projection::Dense(omega)) => {
                if omega.dim() != (n, input_dim) {
                    return Err(Error::InvalidParameter(format!(
                        "projection is {:?}, expected ({n}, {input_dim})",
                        omega.dim()
                    )));
                }
            }
            (_, Projection::Sparse { .. }) => {
                return Err(Error::InvalidParameter("dense kernel needs a dense projection".into()));
            }
        }
        Ok(FeatureMap { spec, input_dim, seed, projection, phases, generations })
    }

    /// Redraws `(ω_slot, b_slot)` from the streams of `generation`.
    pub(crate) fn redraw(&mut self, slot: usize, generation: u32) {
        let g = u64::from(generation);
        let s = slot as u64;
        let mut proj_rng = stream(self.seed, Purpose::Projection, g, s);
        match (&self.spec, &mut self.projection) {
            (KernelSpec::Gaussian { sigma }, Projection::Dense(omega)) => {
                for w in omega.row_mut(slot) {
                    *w = proj_rng.sample::<f64, _>(StandardNormal) / sigma;
                }
            }
            (KernelSpec::Laplacian { lambda }, Projection::Dense(omega)) => {
                for w in omega.row_mut(slot) {
                    *w = cauchy(*lambda, &mut proj_rng);
                }
            }
            (KernelSpec::SparseGaussian { sigma, .. }, Projection::Sparse { k, indices, values }) => {
                let mut subset_rng = stream(self.seed, Purpose::Subset, g, s);
                let subset = floyd_subset(self.input_dim, *k, &mut subset_rng);
                let span = slot * *k..(slot + 1) * *k;
                indices[span.clone()].copy_from_slice(&subset);
                for w in &mut values[span] {
                    *w = proj_rng.sample::<f64, _>(StandardNormal) / sigma;
                }
            }
            _ => unreachable!("projection layout always matches the kernel"),
        }
        let mut phase_rng = stream(self.seed, Purpose::Phase, g, s);
        self.phases[slot] = phase_rng.gen_range(0.0..TAU);
        self.generations[slot] = generation;
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn num_features(&self) -> usize {
        self.phases.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn projection(&self) -> &Projection {
        &self.projection
    }

    pub fn phases(&self) -> &Array1<f64> {
        &self.phases
    }

    pub fn generations(&self) -> &[u32] {
        &self.generations
    }

    /// Input coordinates with a nonzero weight in row `slot`.
    pub fn support(&self, slot: usize) -> Vec<usize> {
        match &self.projection {
            Projection::Dense(omega) => {
                omega.row(slot).iter().enumerate().filter(|(_, w)| **w != 0.0).map(|(j, _)| j).collect()
            }
            Projection::Sparse { k, indices, .. } => indices[slot * k..(slot + 1) * k].to_vec(),
        }
    }

    /// Dense copy of row `slot` of `ω`.
    pub fn omega_row(&self, slot: usize) -> Array1<f64> {
        match &self.projection {
            Projection::Dense(omega) => omega.row(slot).to_owned(),
            Projection::Sparse { k, indices, values } => {
                let mut row = Array1::zeros(self.input_dim);
                for t in slot * k..(slot + 1) * k {
                    row[indices[t]] = values[t];
                }
                row
            }
        }
    }

    /// `ω_slotᵀx + b_slot`.
    pub fn pre_activation(&self, slot: usize, x: &ArrayView1<f64>) -> f64 {
        self.projection.dot(slot, x) + self.phases[slot]
    }

    /// Maps the rows of `x` (`N × d`) to `N × D` features. Rows are processed in
    /// parallel; each entry is computed by the same serial expression, so the
    /// output does not depend on the thread count.
    pub fn apply(&self, x: ArrayView2<f64>) -> Result<Array2<f64>> {
        if x.ncols() != self.input_dim {
            return Err(Error::DimensionMismatch { expected: self.input_dim, found: x.ncols() });
        }
        let dd = self.num_features();
        let scale = (2.0 / dd as f64).sqrt();
        let mut z = Array2::zeros((x.nrows(), dd));
        Zip::from(z.rows_mut()).and(x.rows()).par_for_each(|mut zr, xr| {
            for i in 0..dd {
                zr[i] = scale * self.pre_activation(i, &xr).cos();
            }
        });
        Ok(z)
    }

    /// `z(x)ᵀz(y)`.
    pub fn approx_kernel(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        check_pair(x, y)?;
        let mut pair = Array2::zeros((2, x.len()));
        pair.row_mut(0).assign(&ArrayView1::from(x));
        pair.row_mut(1).assign(&ArrayView1::from(y));
        let z = self.apply(pair.view())?;
        Ok(z.row(0).dot(&z.row(1)))
    }
}

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
}

impl McEstimate {
    fn from_samples(values: impl ExactSizeIterator<Item = f64> + Clone) -> Self {
        let n = values.len() as f64;
        let mean = values.clone().sum::<f64>() / n;
        let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        McEstimate { estimate: mean, stderr: (var / n).sqrt() }
    }

    /// `|estimate - target| <= sigmas * stderr`.
    pub fn within(&self, target: f64, sigmas: f64) -> bool {
        (self.estimate - target).abs() <= sigmas * self.stderr
    }
}

/// Monte Carlo estimate of `E[2cos(ωᵀx+b)cos(ωᵀy+b)]` over fresh `(ω, b)`
/// draws, which equals `k(x, y)` for a properly scaled kernel.
pub fn mc_identity_check(spec: &KernelSpec, x: &[f64], y: &[f64], num_samples: usize, seed: u64) -> Result<McEstimate> {
    check_pair(x, y)?;
    if num_samples < 100 {
        return Err(Error::InvalidParameter(format!("at least 100 samples required, got {num_samples}")));
    }
    let draws = FeatureMap::sample(spec, x.len(), num_samples, seed)?;
    let (xv, yv) = (ArrayView1::from(x), ArrayView1::from(y));
    let values: Vec<f64> = (0..num_samples)
        .map(|i| 2.0 * draws.pre_activation(i, &xv).cos() * draws.pre_activation(i, &yv).cos())
        .collect();
    Ok(McEstimate::from_samples(values.iter().copied()))
}

/// Monte Carlo average of `exp(-‖x_F-y_F‖²/2σ²)` over uniformly sampled
/// `k`-subsets `F`; the sampling counterpart of the enumerated Sparse
/// Gaussian kernel.
pub fn sparse_subset_average(
    sigma: f64,
    k: usize,
    x: &[f64],
    y: &[f64],
    num_samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    check_pair(x, y)?;
    KernelSpec::sparse_gaussian(sigma, k)?.validate_for(x.len())?;
    if num_samples < 2 {
        return Err(Error::InvalidParameter("at least 2 samples required".into()));
    }
    let mut rng = stream(seed, Purpose::Probe, k as u64, x.len() as u64);
    let denom = 2.0 * sigma * sigma;
    let values: Vec<f64> = (0..num_samples)
        .map(|_| {
            let subset = floyd_subset(x.len(), k, &mut rng);
            let sq: f64 = subset.iter().map(|&j| (x[j] - y[j]) * (x[j] - y[j])).sum();
            (-sq / denom).exp()
        })
        .collect();
    Ok(McEstimate::from_samples(values.iter().copied()))
}

/// Source of kernel values for [`gram_matrix`].
#[derive(Debug, Clone, Copy)]
pub enum GramSource<'a> {
    Exact(&'a KernelSpec),
    Approx(&'a FeatureMap),
}

/// `N × N` kernel matrix of the rows of `x`. Exact mode evaluates the kernel
/// pairwise; approximate mode returns `ZZᵀ`. Both are exactly symmetric.
pub fn gram_matrix(source: GramSource<'_>, x: ArrayView2<f64>) -> Result<Array2<f64>> {
    let n = x.nrows();
    if n > GRAM_LIMIT {
        return Err(Error::SizeGuard { what: "gram matrix", size: n, limit: GRAM_LIMIT });
    }
    let mut gram = match source {
        GramSource::Exact(spec) => {
            spec.validate_for(x.ncols())?;
            let rows: Vec<Vec<f64>> = x.rows().into_iter().map(|r| r.to_vec()).collect();
            let mut gram = Array2::zeros((n, n));
            for i in 0..n {
                for j in i..n {
                    gram[[i, j]] = eval_exact(spec, &rows[i], &rows[j])?;
                }
            }
            gram
        }
        GramSource::Approx(map) => {
            let z = map.apply(x)?;
            z.dot(&z.t())
        }
    };
    for i in 0..n {
        for j in 0..i {
            gram[[i, j]] = gram[[j, i]];
        }
    }
    Ok(gram)
}
