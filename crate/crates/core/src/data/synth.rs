use ndarray::{Array2, ArrayView2};
use rand::Rng;
use rand_distr::StandardNormal;

use super::Dataset;
use crate::error::{Error, Result};
use crate::kernels::floyd_subset;
use crate::rng::{stream, Purpose};

/// `classes` spherical unit-variance Gaussian clusters whose means have norm
/// `separation`. Mean directions are orthonormal while `classes <= d`, random
/// unit vectors beyond that. Labels are drawn uniformly.
pub fn synth_gaussian_mixture(d: usize, classes: usize, n: usize, separation: f64, seed: u64) -> Result<Dataset> {
    if d == 0 || classes == 0 || n == 0 {
        return Err(Error::InvalidParameter("dimension, classes and samples must be positive".into()));
    }
    if !(separation.is_finite() && separation >= 0.0) {
        return Err(Error::InvalidParameter(format!("separation must be non-negative, got {separation}")));
    }
    let mut rng = stream(seed, Purpose::Synth, 1, 0);
    let mut means = Array2::<f64>::zeros((classes, d));
    for c in 0..classes {
        loop {
            let mut v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            if c < d {
                for prev in 0..c {
                    let dot: f64 = v.iter().zip(means.row(prev)).map(|(a, b)| a * b).sum();
                    for (vj, mj) in v.iter_mut().zip(means.row(prev)) {
                        *vj -= dot * mj;
                    }
                }
            }
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm > 1e-8 {
                means.row_mut(c).iter_mut().zip(&v).for_each(|(m, a)| *m = a / norm);
                break;
            }
        }
    }

    let mut labels = Vec::with_capacity(n);
    let mut x = Array2::zeros((n, d));
    for i in 0..n {
        let c = rng.gen_range(0..classes);
        labels.push(c);
        for j in 0..d {
            x[[i, j]] = separation * means[[c, j]] + rng.sample::<f64, _>(StandardNormal);
        }
    }
    Dataset::new("mixture", x, labels, classes)
}

/// Labels from a nonlinear function of a few secret coordinates.
///
/// Inputs are i.i.d. standard normal. The score of a row is `x_a` for a single
/// secret coordinate and the sum of pairwise products `x_a·x_b` over the secret
/// set otherwise; scores are cut at their empirical quantiles into `classes`
/// near-equal bins. The secret coordinates are recorded on the dataset.
pub fn synth_sparse_interactions(d: usize, relevant_k: usize, classes: usize, n: usize, seed: u64) -> Result<Dataset> {
    if relevant_k == 0 || relevant_k > d {
        return Err(Error::InvalidParameter(format!("relevant_k must lie in 1..={d}, got {relevant_k}")));
    }
    if classes < 2 || n < classes {
        return Err(Error::InvalidParameter("need at least 2 classes and one sample per class".into()));
    }
    let mut rng = stream(seed, Purpose::Synth, 2, 0);
    let secret = floyd_subset(d, relevant_k, &mut rng);
    let x = Array2::from_shape_simple_fn((n, d), || rng.sample(StandardNormal));
    let labels = interaction_labels(x.view(), &secret, classes);
    Ok(Dataset::new("interactions", x, labels, classes)?.with_relevant(secret))
}

fn interaction_score(row: &[f64], secret: &[usize]) -> f64 {
    if secret.len() == 1 {
        return row[secret[0]];
    }
    let mut s = 0.0;
    for (a, &i) in secret.iter().enumerate() {
        for &j in &secret[a + 1..] {
            s += row[i] * row[j];
        }
    }
    s
}

/// The labelling rule of [`synth_sparse_interactions`] applied to `x`.
pub fn interaction_labels(x: ArrayView2<f64>, secret: &[usize], classes: usize) -> Vec<usize> {
    let scores: Vec<f64> = x.rows().into_iter().map(|r| interaction_score(&r.to_vec(), secret)).collect();
    let mut sorted = scores.clone();
    sorted.sort_by(f64::total_cmp);
    let n = scores.len();
    let cuts: Vec<f64> = (1..classes).map(|c| sorted[n * c / classes]).collect();
    scores.iter().map(|s| cuts.iter().filter(|&&cut| *s >= cut).count()).collect()
}
