//! Iterative random feature selection.
//!
//! Starting from an empty retained set `S`, each of `T` rounds redraws every
//! slot outside `S`. In all rounds but the last, a freshly initialised model
//! is trained with a single SGD pass over `R` random training examples and
//! `S` becomes the `s_t` slots whose rows of `Θ` (or `UV`) have the largest
//! ℓ2 norms. The last round only redraws, so the returned map keeps the
//! `s_{T-1}` survivors and fills the remaining slots with fresh draws.

use ndarray::{ArrayView2, Axis};
use rand::seq::index;

use crate::error::{Error, Result};
use crate::kernels::{FeatureMap, KernelSpec};
use crate::model::{check_labels, feature_row_norms, LogisticModel, ModelShape};
use crate::rng::{stream, Purpose};
use crate::training::{sgd_epoch, Sgd};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionSchedule {
    /// Target feature count `D`.
    pub features: usize,
    /// Round count `T`.
    pub iterations: usize,
    /// Training examples per round `R`.
    pub subset_size: usize,
    /// Retained counts `s_1 < … < s_{T-1}`.
    pub thresholds: Vec<usize>,
}

impl SelectionSchedule {
    pub fn new(features: usize, iterations: usize, subset_size: usize, thresholds: Vec<usize>) -> Result<Self> {
        let schedule = SelectionSchedule { features, iterations, subset_size, thresholds };
        schedule.validate()?;
        Ok(schedule)
    }

    /// Schedule with `s_t = ⌊D·t/T⌋`; a single round has no thresholds.
    pub fn with_default_thresholds(features: usize, iterations: usize, subset_size: usize) -> Result<Self> {
        let thresholds = if iterations == 1 { Vec::new() } else { default_schedule(features, iterations)? };
        SelectionSchedule::new(features, iterations, subset_size, thresholds)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSchedule(msg));
        if self.features == 0 {
            return bad("feature count must be at least 1".into());
        }
        if self.iterations == 0 {
            return bad("iteration count must be at least 1".into());
        }
        if self.subset_size == 0 {
            return bad("subset size must be at least 1".into());
        }
        if self.thresholds.len() + 1 != self.iterations {
            return bad(format!(
                "{} rounds need {} thresholds, got {}",
                self.iterations,
                self.iterations - 1,
                self.thresholds.len()
            ));
        }
        let mut prev = 0;
        for &s in &self.thresholds {
            if s <= prev || s >= self.features {
                return bad(format!(
                    "thresholds must satisfy 0 < s_1 < ... < s_(T-1) < D = {}, got {:?}",
                    self.features, self.thresholds
                ));
            }
            prev = s;
        }
        Ok(())
    }

    /// Distinct `(ω, b)` pairs drawn over a run: `D·T − Σ s_t`.
    pub fn exposed_features(&self) -> usize {
        self.features * self.iterations - self.thresholds.iter().sum::<usize>()
    }

    /// Examples visited by the selection SGD passes, one pass of `R` per
    /// scoring round: `(T−1)·R`.
    pub fn training_examples(&self) -> usize {
        (self.iterations - 1) * self.subset_size
    }

    /// Selection cost in full epochs over `n` training examples.
    pub fn epoch_equivalents(&self, n: usize) -> f64 {
        self.training_examples() as f64 / n as f64
    }
}

/// `s_t = ⌊D·t/T⌋` for `t = 1..T-1`.
pub fn default_schedule(features: usize, iterations: usize) -> Result<Vec<usize>> {
    if iterations < 2 {
        return Err(Error::InvalidSchedule(format!("need at least 2 rounds, got {iterations}")));
    }
    if features < iterations {
        return Err(Error::InvalidSchedule(format!("feature count {features} is below the round count {iterations}")));
    }
    Ok((1..iterations).map(|t| features * t / iterations).collect())
}

/// Indices (ascending) of the `s` feature rows of `theta` with the largest ℓ2
/// norms. The bias row never competes; equal norms prefer the lower index.
pub fn top_rows(theta: ArrayView2<f64>, s: usize) -> Result<Vec<usize>> {
    let norms = feature_row_norms(theta);
    if s == 0 || s > norms.len() {
        return Err(Error::InvalidParameter(format!("cannot keep {s} of {} feature rows", norms.len())));
    }
    let mut order: Vec<usize> = (0..norms.len()).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]).then(a.cmp(&b)));
    order.truncate(s);
    order.sort_unstable();
    Ok(order)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionConfig {
    pub schedule: SelectionSchedule,
    /// Model form trained in each round; bottleneck rounds score rows of `UV`.
    pub shape: ModelShape,
    pub sgd: Sgd,
    pub seed: u64,
}

/// Diagnostics for one selection round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationReport {
    pub iteration: usize,
    pub retained: usize,
    pub min_norm: f64,
    pub median_norm: f64,
    pub max_norm: f64,
}

#[derive(Debug, Clone)]
pub struct Selection {
    pub map: FeatureMap,
    /// Slots kept by the last scoring round (empty when `T = 1`).
    pub retained: Vec<usize>,
    pub reports: Vec<IterationReport>,
    /// Number of `(ω, b)` draws made over the run.
    pub generated: usize,
}

/// Runs the selection rounds on raw inputs `x` (`N × d`) with 0-based labels.
pub fn select_features(
    spec: &KernelSpec,
    x: ArrayView2<f64>,
    labels: &[usize],
    classes: usize,
    config: &SelectionConfig,
) -> Result<Selection> {
    let schedule = &config.schedule;
    schedule.validate()?;
    check_labels(labels, x.nrows(), classes)?;
    let n = x.nrows();
    if schedule.subset_size > n {
        return Err(Error::InvalidSchedule(format!(
            "subset size {} exceeds the {n} available examples",
            schedule.subset_size
        )));
    }
    let d_features = schedule.features;
    let seed = config.seed;

    let mut map = FeatureMap::sample(spec, x.ncols(), d_features, seed)?;
    let mut generated = d_features;
    let mut in_set = vec![false; d_features];
    let mut retained = Vec::new();
    let mut reports = Vec::with_capacity(schedule.thresholds.len());

    for t in 1..=schedule.iterations {
        if t > 1 {
            for slot in (0..d_features).filter(|&i| !in_set[i]) {
                map.redraw(slot, (t - 1) as u32);
                generated += 1;
            }
        }
        if t == schedule.iterations {
            break;
        }
        let keep = schedule.thresholds[t - 1];
        let tt = t as u64;

        let rows = index::sample(&mut stream(seed, Purpose::SelectionRows, tt, 0), n, schedule.subset_size).into_vec();
        let z = map.apply(x.select(Axis(0), &rows).view())?;
        let sub_labels: Vec<usize> = rows.iter().map(|&i| labels[i]).collect();

        let model =
            LogisticModel::init(config.shape, d_features, classes, &mut stream(seed, Purpose::SelectionInit, tt, 0))?;
        let model =
            sgd_epoch(model, z.view(), &sub_labels, &config.sgd, &mut stream(seed, Purpose::SelectionShuffle, tt, 0))?;
        let theta = model.effective_theta();
        retained = top_rows(theta.view(), keep)?;
        in_set.iter_mut().for_each(|b| *b = false);
        for &i in &retained {
            in_set[i] = true;
        }

        let norms = feature_row_norms(theta.view());
        let mut kept: Vec<f64> = retained.iter().map(|&i| norms[i]).collect();
        kept.sort_by(f64::total_cmp);
        let mid = kept.len() / 2;
        let median_norm = if kept.len() % 2 == 1 { kept[mid] } else { 0.5 * (kept[mid - 1] + kept[mid]) };
        reports.push(IterationReport {
            iteration: t,
            retained: retained.len(),
            min_norm: kept[0],
            median_norm,
            max_norm: kept[kept.len() - 1],
        });
    }

    Ok(Selection { map, retained, reports, generated })
}

/// Mean over `slots` of the fraction of each slot's support that falls in
/// `coords`. For a `k`-sparse map drawn blindly over `d` inputs this is
/// `|coords| / d` in expectation.
pub fn support_hit_rate(map: &FeatureMap, slots: &[usize], coords: &[usize]) -> f64 {
    if slots.is_empty() {
        return 0.0;
    }
    let total: f64 = slots
        .iter()
        .map(|&slot| {
            let support = map.support(slot);
            support.iter().filter(|c| coords.contains(c)).count() as f64 / support.len().max(1) as f64
        })
        .sum();
    total / slots.len() as f64
}
