//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use ndarray::{Array2, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rffkit::model::{LogisticModel, Parameters};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_matrix(rows: usize, cols: usize, scale: f64, rng: &mut impl Rng) -> Array2<f64> {
    Array2::from_shape_simple_fn((rows, cols), || rng.gen_range(-scale..scale))
}

pub fn random_labels(n: usize, classes: usize, rng: &mut impl Rng) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..classes)).collect()
}

/// Triple-loop product.
pub fn naive_matmul(a: ArrayView2<f64>, b: ArrayView2<f64>) -> Array2<f64> {
    assert_eq!(a.ncols(), b.nrows());
    let mut c = Array2::zeros((a.nrows(), b.ncols()));
    for i in 0..a.nrows() {
        for j in 0..b.ncols() {
            let mut acc = 0.0;
            for k in 0..a.ncols() {
                acc += a[[i, k]] * b[[k, j]];
            }
            c[[i, j]] = acc;
        }
    }
    c
}

/// Mean cross-entropy computed one example at a time from the augmented
/// features and an explicit `Θ`.
pub fn scalar_cross_entropy(theta: ArrayView2<f64>, z: ArrayView2<f64>, labels: &[usize]) -> f64 {
    let (n, d) = z.dim();
    let classes = theta.ncols();
    let mut total = 0.0;
    for i in 0..n {
        let scores: Vec<f64> =
            (0..classes).map(|c| (0..d).map(|j| z[[i, j]] * theta[[j, c]]).sum::<f64>() + theta[[d, c]]).collect();
        let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let log_norm = max + scores.iter().map(|s| (s - max).exp()).sum::<f64>().ln();
        total += log_norm - scores[labels[i]];
    }
    total / n as f64
}

fn rebuild(params: &Parameters) -> LogisticModel {
    match params {
        Parameters::Full { theta } => LogisticModel::full(theta.clone()).unwrap(),
        Parameters::Bottleneck { u, v } => LogisticModel::bottleneck(u.clone(), v.clone()).unwrap(),
    }
}

/// Largest relative gap between the analytic gradient and a central finite
/// difference with step `h`. The relative gap of each entry is
/// `|g - fd| / max(|g|, |fd|, floor)`.
pub fn max_gradient_gap(model: &LogisticModel, z: ArrayView2<f64>, labels: &[usize], h: f64, floor: f64) -> f64 {
    let (_, grad) = model.loss_and_grad(z, labels).unwrap();
    let base = model.params().clone();
    let mut worst: f64 = 0.0;
    for (a, g) in grad.arrays().iter().enumerate() {
        for (idx, &analytic) in g.indexed_iter() {
            let mut plus = base.clone();
            plus.arrays_mut()[a][idx] += h;
            let mut minus = base.clone();
            minus.arrays_mut()[a][idx] -= h;
            let fp = rebuild(&plus).loss_and_grad(z, labels).unwrap().0;
            let fm = rebuild(&minus).loss_and_grad(z, labels).unwrap().0;
            let fd = (fp - fm) / (2.0 * h);
            let gap = (analytic - fd).abs() / analytic.abs().max(fd.abs()).max(floor);
            worst = worst.max(gap);
        }
    }
    worst
}
