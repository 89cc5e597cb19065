//! Numerical checks of the kernel approximation.
//!
//! Three independent checks, each with its own tolerance:
//!
//! 1. the expectation identity `E[2cos(ωᵀx+b)cos(ωᵀy+b)] = k(x, y)`, by Monte
//!    Carlo over fresh `(ω, b)` draws, within a multiple of the standard error;
//! 2. the approximation error `|z(x)ᵀz(y) − k(x, y)|` as `D` grows;
//! 3. the Sparse Gaussian kernel by subset enumeration against a sampled
//!    subset average and against its random-feature estimate.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::kernels::{eval_exact, mc_identity_check, sparse_subset_average, FeatureMap, KernelSpec, McEstimate};
use crate::rng::{stream, Purpose};

/// Uniform point in the unit ball of `R^d`.
pub fn unit_ball_point<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 0.0 {
            let radius = rng.gen::<f64>().powf(1.0 / d as f64);
            return v.into_iter().map(|a| a * radius / norm).collect();
        }
    }
}

/// `count` pairs of unit-ball points drawn from `seed`.
pub fn unit_ball_pairs(d: usize, count: usize, seed: u64) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = stream(seed, Purpose::Probe, d as u64, count as u64);
    (0..count).map(|_| (unit_ball_point(d, &mut rng), unit_ball_point(d, &mut rng))).collect()
}

fn cube_pairs(d: usize, count: usize, seed: u64) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = stream(seed, Purpose::Probe, u64::MAX - d as u64, count as u64);
    let point = |rng: &mut crate::rng::StreamRng| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
    (0..count).map(|_| (point(&mut rng), point(&mut rng))).collect()
}

/// Median (mean of the middle pair for even counts) and nearest-rank 90th
/// percentile.
pub fn median_and_p90(values: &[f64]) -> (f64, f64) {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let median = if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) };
    let rank = ((0.9 * n as f64).ceil() as usize).clamp(1, n);
    (median, v[rank - 1])
}

#[derive(Debug, Clone)]
pub struct IdentityCell {
    pub spec: KernelSpec,
    pub pair: usize,
    pub exact: f64,
    pub mc: McEstimate,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct IdentityConfig {
    pub specs: Vec<KernelSpec>,
    pub pairs_per_spec: usize,
    pub dim: usize,
    pub samples: usize,
    pub sigmas: f64,
}

impl Default for IdentityConfig {
    /// Gaussian `σ ∈ {0.5, 1, 2}` and Laplacian `λ ∈ {0.5, 1, 2}`, two pairs each
    /// in `d = 5`, `10⁵` samples, 4 standard errors.
    fn default() -> Self {
        let mut specs: Vec<KernelSpec> = [0.5, 1.0, 2.0].iter().map(|&sigma| KernelSpec::Gaussian { sigma }).collect();
        specs.extend([0.5, 1.0, 2.0].iter().map(|&lambda| KernelSpec::Laplacian { lambda }));
        IdentityConfig { specs, pairs_per_spec: 2, dim: 5, samples: 100_000, sigmas: 4.0 }
    }
}

pub fn identity_grid(config: &IdentityConfig, seed: u64) -> Result<Vec<IdentityCell>> {
    let pairs = unit_ball_pairs(config.dim, config.pairs_per_spec, seed);
    let mut cells = Vec::new();
    for (s, spec) in config.specs.iter().enumerate() {
        for (p, (x, y)) in pairs.iter().enumerate() {
            let exact = eval_exact(spec, x, y)?;
            let cell_seed = seed ^ ((s as u64) << 32 | p as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let mc = mc_identity_check(spec, x, y, config.samples, cell_seed)?;
            cells.push(IdentityCell { spec: *spec, pair: p, exact, mc, pass: mc.within(exact, config.sigmas) });
        }
    }
    Ok(cells)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub features: usize,
    pub median: f64,
    pub p90: f64,
}

/// Absolute approximation error over `pairs` unit-ball pairs, one feature map
/// per entry of `feature_counts`.
pub fn approximation_sweep(
    spec: &KernelSpec,
    dim: usize,
    pairs: usize,
    feature_counts: &[usize],
    seed: u64,
) -> Result<Vec<SweepRow>> {
    let points = unit_ball_pairs(dim, pairs, seed);
    let exact: Vec<f64> = points.iter().map(|(x, y)| eval_exact(spec, x, y)).collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(feature_counts.len());
    for &features in feature_counts {
        let map = FeatureMap::sample(spec, dim, features, seed.wrapping_add(features as u64))?;
        let errors: Vec<f64> = points
            .iter()
            .zip(&exact)
            .map(|((x, y), &k)| map.approx_kernel(x, y).map(|a| (a - k).abs()))
            .collect::<Result<_>>()?;
        let (median, p90) = median_and_p90(&errors);
        rows.push(SweepRow { features, median, p90 });
    }
    Ok(rows)
}

#[derive(Debug, Clone)]
pub struct SparseConfig {
    pub sigma: f64,
    pub dims: Vec<usize>,
    pub ks: Vec<usize>,
    pub pairs: usize,
    pub subset_samples: usize,
    pub sigmas: f64,
    pub rff_features: usize,
    pub rff_tolerance: f64,
}

impl Default for SparseConfig {
    fn default() -> Self {
        SparseConfig {
            sigma: 1.0,
            dims: vec![4, 6, 8],
            ks: vec![1, 2],
            pairs: 20,
            subset_samples: 100_000,
            sigmas: 4.0,
            rff_features: 100_000,
            rff_tolerance: 0.02,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SparseCheck {
    pub dim: usize,
    pub k: usize,
    pub pair: usize,
    pub exact: f64,
    pub subset_mc: McEstimate,
    pub rff: f64,
    pub mc_pass: bool,
    pub rff_pass: bool,
}

pub fn sparse_equivalence(config: &SparseConfig, seed: u64) -> Result<Vec<SparseCheck>> {
    let mut out = Vec::new();
    for &dim in &config.dims {
        let pairs = cube_pairs(dim, config.pairs, seed);
        for &k in config.ks.iter().filter(|&&k| k <= dim) {
            let spec = KernelSpec::sparse_gaussian(config.sigma, k)?;
            let map = FeatureMap::sample(&spec, dim, config.rff_features, seed.wrapping_add((dim * 16 + k) as u64))?;
            for (p, (x, y)) in pairs.iter().enumerate() {
                let exact = eval_exact(&spec, x, y)?;
                let subset_mc = sparse_subset_average(config.sigma, k, x, y, config.subset_samples, seed ^ p as u64)?;
                let rff = map.approx_kernel(x, y)?;
                out.push(SparseCheck {
                    dim,
                    k,
                    pair: p,
                    exact,
                    subset_mc,
                    rff,
                    mc_pass: subset_mc.within(exact, config.sigmas),
                    rff_pass: (rff - exact).abs() <= config.rff_tolerance,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub identity: Vec<IdentityCell>,
    pub sweep: Vec<SweepRow>,
    pub sweep_pass: bool,
    pub sparse: Vec<SparseCheck>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.identity.iter().all(|c| c.pass) && self.sweep_pass && self.sparse.iter().all(|c| c.mc_pass && c.rff_pass)
    }
}

/// Median error at the given feature counts strictly decreases and the 90th
/// percentile at the last one is below `p90_bound`.
pub fn sweep_converges(rows: &[SweepRow], checkpoints: &[usize], p90_bound: f64) -> bool {
    let picked: Vec<&SweepRow> = checkpoints.iter().filter_map(|d| rows.iter().find(|r| r.features == *d)).collect();
    picked.len() == checkpoints.len()
        && picked.windows(2).all(|w| w[1].median < w[0].median)
        && picked.last().is_some_and(|r| r.p90 < p90_bound)
}

/// Feature counts of the error sweep, `2^6 ..= 2^13`.
pub fn sweep_feature_counts() -> Vec<usize> {
    (6..=13).map(|e| 1usize << e).collect()
}

/// Runs all three checks with their default settings.
pub fn run_all(seed: u64) -> Result<VerifyReport> {
    let identity = identity_grid(&IdentityConfig::default(), seed)?;
    let gaussian = KernelSpec::gaussian(1.0)?;
    let sweep = approximation_sweep(&gaussian, 10, 200, &sweep_feature_counts(), seed)?;
    let sweep_pass = sweep_converges(&sweep, &[256, 1024, 4096], 0.05);
    let sparse = sparse_equivalence(&SparseConfig::default(), seed)?;
    Ok(VerifyReport { identity, sweep, sweep_pass, sparse })
}
