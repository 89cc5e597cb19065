//! Softmax regression over random features.
//!
//! Features are augmented with a trailing constant 1, so the parameter
//! matrix `Θ` has `D + 1` rows and the last row is the bias. With a linear
//! bottleneck `Θ = UV` the bias row belongs to `U` and is rank-constrained
//! like every other row.

use ndarray::{s, Array1, Array2, ArrayView2, Axis, Zip};
use rand::Rng;

use crate::error::{Error, Result};

/// Model parameters, also used for gradients of the same shape.
#[derive(Debug, Clone, PartialEq)]
pub enum Parameters {
    /// `Θ`, `(D+1) × C`.
    Full { theta: Array2<f64> },
    /// `U`, `(D+1) × r` and `V`, `r × C`.
    Bottleneck { u: Array2<f64>, v: Array2<f64> },
}

impl Parameters {
    pub fn arrays(&self) -> Vec<&Array2<f64>> {
        match self {
            Parameters::Full { theta } => vec![theta],
            Parameters::Bottleneck { u, v } => vec![u, v],
        }
    }

    pub fn arrays_mut(&mut self) -> Vec<&mut Array2<f64>> {
        match self {
            Parameters::Full { theta } => vec![theta],
            Parameters::Bottleneck { u, v } => vec![u, v],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.arrays().iter().all(|a| a.iter().all(|v| v.is_finite()))
    }

    /// Euclidean norm over all entries.
    pub fn norm(&self) -> f64 {
        self.arrays().iter().flat_map(|a| a.iter()).map(|v| v * v).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelShape {
    Full,
    Bottleneck { rank: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    params: Parameters,
    features: usize,
    classes: usize,
}

impl LogisticModel {
    pub fn full(theta: Array2<f64>) -> Result<Self> {
        let (rows, classes) = theta.dim();
        if rows < 2 || classes == 0 {
            return Err(Error::InvalidParameter(format!(
                "theta must be at least 2 x 1 (features plus bias row), got {rows} x {classes}"
            )));
        }
        let params = Parameters::Full { theta };
        if !params.is_finite() {
            return Err(Error::NonFinite("model parameter"));
        }
        Ok(LogisticModel { params, features: rows - 1, classes })
    }

    pub fn bottleneck(u: Array2<f64>, v: Array2<f64>) -> Result<Self> {
        let (rows, rank) = u.dim();
        let (v_rank, classes) = v.dim();
        if v_rank != rank {
            return Err(Error::DimensionMismatch { expected: rank, found: v_rank });
        }
        if rows < 2 {
            return Err(Error::InvalidParameter("U needs a feature row and a bias row".into()));
        }
        validate_rank(rank, rows - 1, classes)?;
        let params = Parameters::Bottleneck { u, v };
        if !params.is_finite() {
            return Err(Error::NonFinite("model parameter"));
        }
        Ok(LogisticModel { params, features: rows - 1, classes })
    }

    /// Full model with `Θ = 0`.
    pub fn zeros(features: usize, classes: usize) -> Result<Self> {
        LogisticModel::full(Array2::zeros((features + 1, classes)))
    }

    /// Fresh model: `Θ = 0` for the full form, and `U`, `V` i.i.d.
    /// `Uniform(-a, a)` with `a = √(6 / (fan_in + fan_out))` for the factors
    /// (a zero start would have zero gradient).
    pub fn init<R: Rng + ?Sized>(shape: ModelShape, features: usize, classes: usize, rng: &mut R) -> Result<Self> {
        match shape {
            ModelShape::Full => LogisticModel::zeros(features, classes),
            ModelShape::Bottleneck { rank } => {
                validate_rank(rank, features, classes)?;
                let u = uniform_fan(features + 1, rank, rng);
                let v = uniform_fan(rank, classes, rng);
                LogisticModel::bottleneck(u, v)
            }
        }
    }

    pub fn params(&self) -> &Parameters {
        &self.params
    }

    pub fn num_features(&self) -> usize {
        self.features
    }

    pub fn num_classes(&self) -> usize {
        self.classes
    }

    pub fn shape(&self) -> ModelShape {
        match &self.params {
            Parameters::Full { .. } => ModelShape::Full,
            Parameters::Bottleneck { v, .. } => ModelShape::Bottleneck { rank: v.nrows() },
        }
    }

    fn check_features(&self, z: &ArrayView2<f64>) -> Result<()> {
        if z.ncols() != self.features {
            return Err(Error::DimensionMismatch { expected: self.features, found: z.ncols() });
        }
        Ok(())
    }

    /// `[Z | 1]·U` for the bottleneck form.
    fn hidden(z: &ArrayView2<f64>, u: &Array2<f64>) -> Array2<f64> {
        let d = z.ncols();
        let mut h = z.dot(&u.slice(s![..d, ..]));
        h += &u.row(d);
        h
    }

    /// Unnormalised scores `[Z | 1]·Θ`, `N × C`.
    pub fn logits(&self, z: ArrayView2<f64>) -> Result<Array2<f64>> {
        self.check_features(&z)?;
        let d = self.features;
        let logits = match &self.params {
            Parameters::Full { theta } => {
                let mut l = z.dot(&theta.slice(s![..d, ..]));
                l += &theta.row(d);
                l
            }
            Parameters::Bottleneck { u, v } => Self::hidden(&z, u).dot(v),
        };
        if logits.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("logit"));
        }
        Ok(logits)
    }

    /// Row-wise log-softmax of the logits.
    pub fn log_proba(&self, z: ArrayView2<f64>) -> Result<Array2<f64>> {
        let mut l = self.logits(z)?;
        log_softmax_rows(&mut l);
        Ok(l)
    }

    /// Class probabilities, `N × C`; each row sums to one.
    pub fn predict_proba(&self, z: ArrayView2<f64>) -> Result<Array2<f64>> {
        let mut p = self.logits(z)?;
        for mut row in p.rows_mut() {
            let max = row.fold(f64::NEG_INFINITY, |m, &v| m.max(v));
            row.mapv_inplace(|v| (v - max).exp());
            let total = row.sum();
            row /= total;
        }
        Ok(p)
    }

    /// Mean cross-entropy in nats and its gradient with respect to the
    /// parameters. Labels are 0-based.
    pub fn loss_and_grad(&self, z: ArrayView2<f64>, labels: &[usize]) -> Result<(f64, Parameters)> {
        self.check_features(&z)?;
        check_labels(labels, z.nrows(), self.classes)?;
        let n = z.nrows();
        if n == 0 {
            return Err(Error::EmptyDataset);
        }
        let mut logp = self.log_proba(z)?;
        let ce = -labels.iter().enumerate().map(|(i, &c)| logp[[i, c]]).sum::<f64>() / n as f64;

        // residual (P - Y) / N
        logp.mapv_inplace(f64::exp);
        let mut resid = logp;
        for (i, &c) in labels.iter().enumerate() {
            resid[[i, c]] -= 1.0;
        }
        resid /= n as f64;

        let d = self.features;
        let grad = match &self.params {
            Parameters::Full { .. } => Parameters::Full { theta: augmented_t_dot(&z, &resid) },
            Parameters::Bottleneck { u, v } => {
                let back = resid.dot(&v.t());
                let gu = augmented_t_dot(&z, &back);
                let gv = Self::hidden(&z, u).t().dot(&resid);
                debug_assert_eq!(gu.nrows(), d + 1);
                Parameters::Bottleneck { u: gu, v: gv }
            }
        };
        Ok((ce, grad))
    }

    /// `Θ` for the full form, `UV` for the bottleneck.
    pub fn effective_theta(&self) -> Array2<f64> {
        match &self.params {
            Parameters::Full { theta } => theta.clone(),
            Parameters::Bottleneck { u, v } => u.dot(v),
        }
    }

    /// Trainable parameter count including the bias row.
    pub fn param_count(&self) -> usize {
        match self.shape() {
            ModelShape::Full => (self.features + 1) * self.classes,
            ModelShape::Bottleneck { rank } => factorized_param_count(self.features + 1, rank, self.classes),
        }
    }

    /// `p ← p − lr·(g + weight_decay·p)`. A zero learning rate leaves the
    /// parameters untouched bit for bit.
    pub(crate) fn apply_update(&mut self, lr: f64, grad: &Parameters, weight_decay: f64) {
        if lr == 0.0 {
            return;
        }
        for (p, g) in self.params.arrays_mut().into_iter().zip(grad.arrays()) {
            if weight_decay == 0.0 {
                p.scaled_add(-lr, g);
            } else {
                Zip::from(p).and(g).for_each(|p, &g| *p -= lr * (g + weight_decay * *p));
            }
        }
    }
}

/// `r × C + rows × r`, the parameter count of a rank-`r` factorization of a
/// `rows × C` matrix.
pub fn factorized_param_count(rows: usize, rank: usize, classes: usize) -> usize {
    rows * rank + rank * classes
}

/// ℓ2 norms of the feature rows of `Θ`. The trailing bias row is excluded, so
/// the result has `rows - 1` entries.
pub fn feature_row_norms(theta: ArrayView2<f64>) -> Array1<f64> {
    let d = theta.nrows().saturating_sub(1);
    theta.slice(s![..d, ..]).map_axis(Axis(1), |row| row.iter().map(|v| v * v).sum::<f64>().sqrt())
}

pub(crate) fn validate_rank(rank: usize, features: usize, classes: usize) -> Result<()> {
    let bound = (features + 1).min(classes);
    if rank == 0 || rank >= bound {
        return Err(Error::InvalidParameter(format!(
            "bottleneck rank must satisfy 1 <= r < min(D+1, C) = {bound}, got {rank}"
        )));
    }
    Ok(())
}

pub(crate) fn check_labels(labels: &[usize], rows: usize, classes: usize) -> Result<()> {
    if labels.len() != rows {
        return Err(Error::DimensionMismatch { expected: rows, found: labels.len() });
    }
    if let Some(&bad) = labels.iter().find(|&&c| c >= classes) {
        return Err(Error::LabelOutOfRange { label: bad as i64 + 1, classes });
    }
    Ok(())
}

fn uniform_fan<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Array2<f64> {
    let a = (6.0 / (rows + cols) as f64).sqrt();
    Array2::from_shape_simple_fn((rows, cols), || rng.gen_range(-a..a))
}

/// `[Z | 1]ᵀ·G`.
fn augmented_t_dot(z: &ArrayView2<f64>, g: &Array2<f64>) -> Array2<f64> {
    let d = z.ncols();
    let mut out = Array2::zeros((d + 1, g.ncols()));
    out.slice_mut(s![..d, ..]).assign(&z.t().dot(g));
    out.row_mut(d).assign(&g.sum_axis(Axis(0)));
    out
}

pub(crate) fn log_softmax_rows(l: &mut Array2<f64>) {
    for mut row in l.rows_mut() {
        let max = row.fold(f64::NEG_INFINITY, |m, &v| m.max(v));
        let lse = max + row.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
        row.mapv_inplace(|v| v - lse);
    }
}
