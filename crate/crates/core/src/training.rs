//! Minibatch SGD with metric-driven learning-rate decay and best-snapshot
//! early stopping.
//!
//! Every epoch is scored on held-out data with four metrics:
//!
//! - `CE`: mean negative log-likelihood of the true label.
//! - `ENT`: mean entropy of the predicted distribution.
//! - `ERR`: argmax error rate, ties going to the lowest class index.
//! - `ERLL`: entropy-regularized log loss, `CE + ENT`.
//!
//! The training variants are the cross product of two switches: a linear
//! bottleneck (`B`) and ERLL-monitored learning-rate decay (`R`).

use std::fmt;
use std::str::FromStr;

use ndarray::{ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{check_labels, log_softmax_rows, LogisticModel};
use crate::rng::{stream, Purpose};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsRecord {
    pub ce: f64,
    pub ent: f64,
    pub err: f64,
    pub erll: f64,
}

impl MetricsRecord {
    pub fn get(&self, monitor: Monitor) -> f64 {
        match monitor {
            Monitor::Ce => self.ce,
            Monitor::Erll => self.erll,
            Monitor::Err => self.err,
        }
    }

    /// Same record with the log-loss metrics expressed in `unit`.
    pub fn in_units(&self, unit: LossUnit) -> MetricsRecord {
        match unit {
            LossUnit::Nats => *self,
            LossUnit::Bits => {
                let ce = self.ce / std::f64::consts::LN_2;
                let ent = self.ent / std::f64::consts::LN_2;
                MetricsRecord { ce, ent, err: self.err, erll: ce + ent }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LossUnit {
    #[default]
    Nats,
    Bits,
}

impl FromStr for LossUnit {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "nats" => Ok(LossUnit::Nats),
            "bits" => Ok(LossUnit::Bits),
            _ => Err(format!("unknown unit {s:?} (expected nats or bits)")),
        }
    }
}

impl fmt::Display for LossUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LossUnit::Nats => "nats",
            LossUnit::Bits => "bits",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monitor {
    Ce,
    Erll,
    Err,
}

impl FromStr for Monitor {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ce" => Ok(Monitor::Ce),
            "erll" => Ok(Monitor::Erll),
            "err" => Ok(Monitor::Err),
            _ => Err(format!("unknown metric {s:?} (expected ce, erll or err)")),
        }
    }
}

impl fmt::Display for Monitor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Monitor::Ce => "ce",
            Monitor::Erll => "erll",
            Monitor::Err => "err",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayPolicy {
    Constant,
    /// Halve the learning rate once the monitored held-out metric has gone
    /// `patience` consecutive epochs without a strict improvement.
    HalveOnPlateau {
        monitor: Monitor,
        patience: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    pub decay: DecayPolicy,
    pub early_stop_monitor: Monitor,
    pub heldout_fraction: f64,
    pub weight_decay: f64,
    /// Stop once this many epochs pass without a new best snapshot.
    pub stop_patience: Option<usize>,
    /// Also score the training set after every epoch.
    pub train_metrics: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.5,
            epochs: 10,
            batch_size: 64,
            seed: 0,
            decay: DecayPolicy::Constant,
            early_stop_monitor: Monitor::Ce,
            heldout_fraction: 0.1,
            weight_decay: 0.0,
            stop_patience: None,
            train_metrics: false,
        }
    }
}

impl TrainConfig {
    /// Every violated constraint, in field order.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.learning_rate.is_finite() && self.learning_rate >= 0.0) {
            out.push(format!("learning rate must be finite and non-negative, got {}", self.learning_rate));
        }
        if self.epochs == 0 {
            out.push("epochs must be at least 1".into());
        }
        if self.batch_size == 0 {
            out.push("batch size must be at least 1".into());
        }
        if let DecayPolicy::HalveOnPlateau { patience: 0, .. } = self.decay {
            out.push("decay patience must be at least 1".into());
        }
        if !(self.heldout_fraction > 0.0 && self.heldout_fraction < 1.0) {
            out.push(format!("heldout fraction must lie in (0, 1), got {}", self.heldout_fraction));
        }
        if !(self.weight_decay.is_finite() && self.weight_decay >= 0.0) {
            out.push(format!("weight decay must be finite and non-negative, got {}", self.weight_decay));
        }
        if self.stop_patience == Some(0) {
            out.push("stop patience must be at least 1".into());
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(v.join("; ")))
        }
    }
}

/// Scores `model` on `(z, labels)`; labels are 0-based.
pub fn compute_metrics(model: &LogisticModel, z: ArrayView2<f64>, labels: &[usize]) -> Result<MetricsRecord> {
    if z.nrows() == 0 {
        return Err(Error::EmptyDataset);
    }
    check_labels(labels, z.nrows(), model.num_classes())?;
    let mut logp = model.logits(z)?;
    let mut wrong = 0usize;
    for (row, &label) in logp.rows().into_iter().zip(labels) {
        let mut best = 0;
        for c in 1..row.len() {
            if row[c] > row[best] {
                best = c;
            }
        }
        if best != label {
            wrong += 1;
        }
    }
    log_softmax_rows(&mut logp);
    let n = z.nrows() as f64;
    let ce = -labels.iter().enumerate().map(|(i, &c)| logp[[i, c]]).sum::<f64>() / n;
    let ent = -logp.axis_iter(Axis(0)).map(|row| row.iter().map(|&lp| lp.exp() * lp).sum::<f64>()).sum::<f64>() / n;
    // Rounding can leave a fully confident row at -0.0 or a hair below zero.
    let ent = ent.max(0.0);
    Ok(MetricsRecord { ce, ent, err: wrong as f64 / n, erll: ce + ent })
}

/// Step size, minibatch size and optional L2 weight decay for one SGD pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sgd {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub weight_decay: f64,
}

impl Sgd {
    pub fn new(learning_rate: f64, batch_size: usize) -> Self {
        Sgd { learning_rate, batch_size, weight_decay: 0.0 }
    }
}

/// One shuffled pass over the data in minibatches. The visiting order is
/// drawn from `rng`; a non-finite batch loss aborts with the batch index.
pub fn sgd_epoch<R: Rng + ?Sized>(
    mut model: LogisticModel,
    z: ArrayView2<f64>,
    labels: &[usize],
    sgd: &Sgd,
    rng: &mut R,
) -> Result<LogisticModel> {
    if !(sgd.learning_rate.is_finite() && sgd.learning_rate >= 0.0) {
        return Err(Error::InvalidParameter(format!("learning rate {}", sgd.learning_rate)));
    }
    if sgd.batch_size == 0 {
        return Err(Error::InvalidParameter("batch size must be at least 1".into()));
    }
    check_labels(labels, z.nrows(), model.num_classes())?;
    let mut order: Vec<usize> = (0..z.nrows()).collect();
    order.shuffle(rng);
    let mut batch_labels = Vec::with_capacity(sgd.batch_size);
    for (batch, idx) in order.chunks(sgd.batch_size).enumerate() {
        let zb = z.select(Axis(0), idx);
        batch_labels.clear();
        batch_labels.extend(idx.iter().map(|&i| labels[i]));
        let (loss, grad) = match model.loss_and_grad(zb.view(), &batch_labels) {
            Ok(v) => v,
            Err(Error::NonFinite(_)) => return Err(Error::Divergence { batch }),
            Err(e) => return Err(e),
        };
        if !loss.is_finite() || !grad.is_finite() {
            return Err(Error::Divergence { batch });
        }
        model.apply_update(sgd.learning_rate, &grad, sgd.weight_decay);
        if !model.params().is_finite() {
            return Err(Error::Divergence { batch });
        }
    }
    Ok(model)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochRecord {
    /// 1-based.
    pub epoch: usize,
    /// Learning rate used during this epoch.
    pub lr: f64,
    pub heldout: MetricsRecord,
    pub train: Option<MetricsRecord>,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    /// Snapshot with the lowest held-out `early_stop_monitor` value.
    pub model: LogisticModel,
    pub best_epoch: usize,
    pub history: Vec<EpochRecord>,
    /// Held-out metrics of the model passed in, before any update.
    pub initial: MetricsRecord,
}

impl TrainOutcome {
    pub fn best(&self) -> &EpochRecord {
        &self.history[self.best_epoch - 1]
    }
}

/// Trains for up to `config.epochs` epochs and returns the best snapshot.
///
/// The plateau tracker for learning-rate decay starts from the initial
/// model's held-out score, so a run that never improves halves its rate after
/// the first `patience` epochs. Best-snapshot selection only considers
/// post-epoch models; ties keep the earliest epoch.
pub fn train(
    model: LogisticModel,
    train_z: ArrayView2<f64>,
    train_labels: &[usize],
    heldout_z: ArrayView2<f64>,
    heldout_labels: &[usize],
    config: &TrainConfig,
) -> Result<TrainOutcome> {
    config.validate()?;
    if heldout_z.nrows() == 0 || train_z.nrows() == 0 {
        return Err(Error::EmptyDataset);
    }
    let mut rng = stream(config.seed, Purpose::Shuffle, 0, 0);
    let initial = compute_metrics(&model, heldout_z, heldout_labels)?;

    let mut lr = config.learning_rate;
    let mut plateau_best = match config.decay {
        DecayPolicy::HalveOnPlateau { monitor, .. } => initial.get(monitor),
        DecayPolicy::Constant => f64::INFINITY,
    };
    let mut stall = 0usize;

    let mut history = Vec::with_capacity(config.epochs);
    let mut best: Option<(usize, f64, LogisticModel)> = None;
    let mut current = model;

    for epoch in 1..=config.epochs {
        let sgd = Sgd { learning_rate: lr, batch_size: config.batch_size, weight_decay: config.weight_decay };
        current = sgd_epoch(current, train_z, train_labels, &sgd, &mut rng)?;
        let heldout = compute_metrics(&current, heldout_z, heldout_labels)?;
        let train = if config.train_metrics { Some(compute_metrics(&current, train_z, train_labels)?) } else { None };
        history.push(EpochRecord { epoch, lr, heldout, train });

        let score = heldout.get(config.early_stop_monitor);
        if best.as_ref().is_none_or(|(_, s, _)| score < *s) {
            best = Some((epoch, score, current.clone()));
        }

        if let DecayPolicy::HalveOnPlateau { monitor, patience } = config.decay {
            let v = heldout.get(monitor);
            if v < plateau_best {
                plateau_best = v;
                stall = 0;
            } else {
                stall += 1;
                if stall >= patience {
                    lr *= 0.5;
                    stall = 0;
                }
            }
        }

        if let (Some(p), Some((best_epoch, _, _))) = (config.stop_patience, &best) {
            if epoch - best_epoch >= p {
                break;
            }
        }
    }

    let (best_epoch, _, model) = best.expect("at least one epoch runs");
    Ok(TrainOutcome { model, best_epoch, history, initial })
}
