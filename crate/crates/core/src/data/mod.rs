//! Datasets: validation, CSV I/O, train/held-out splitting, synthetic
//! generators and the binary container.
//!
//! Labels are 0-based in memory and 1-based in every file format.

mod container;
mod synth;

use std::path::Path;

use ndarray::{Array2, Axis};
use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng::{stream, Purpose};

pub use container::{
    decode_dataset, decode_feature_map, decode_model, encode_dataset, encode_feature_map, encode_model, load_binary,
    load_feature_map, load_model, save_binary, save_feature_map, save_model, ContainerKind, MAGIC, VERSION,
};
pub use synth::{interaction_labels, synth_gaussian_mixture, synth_sparse_interactions};

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: Array2<f64>,
    labels: Vec<usize>,
    classes: usize,
    name: String,
    relevant: Option<Vec<usize>>,
}

impl Dataset {
    /// Builds a dataset from `N × d` inputs and 0-based labels.
    pub fn new(name: impl Into<String>, x: Array2<f64>, labels: Vec<usize>, classes: usize) -> Result<Self> {
        if x.nrows() == 0 {
            return Err(Error::EmptyDataset);
        }
        if x.ncols() == 0 {
            return Err(Error::InvalidParameter("dataset needs at least one input column".into()));
        }
        if classes == 0 {
            return Err(Error::InvalidParameter("class count must be at least 1".into()));
        }
        crate::model::check_labels(&labels, x.nrows(), classes)?;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("input value"));
        }
        Ok(Dataset { x, labels, classes, name: name.into(), relevant: None })
    }

    /// Records the input coordinates the labels were generated from.
    pub fn with_relevant(mut self, coords: Vec<usize>) -> Self {
        self.relevant = Some(coords);
        self
    }

    pub fn x(&self) -> &Array2<f64> {
        &self.x
    }

    /// 0-based labels.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn relevant(&self) -> Option<&[usize]> {
        self.relevant.as_deref()
    }

    pub fn len(&self) -> usize {
        self.x.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.x.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.x.ncols()
    }

    /// Rows `rows` in the given order, keeping class count and metadata.
    pub fn subset(&self, rows: &[usize], name: impl Into<String>) -> Result<Dataset> {
        let x = self.x.select(Axis(0), rows);
        let labels = rows.iter().map(|&i| self.labels[i]).collect();
        let mut ds = Dataset::new(name, x, labels, self.classes)?;
        ds.relevant = self.relevant.clone();
        Ok(ds)
    }
}

/// Reads `label,f1,...,fd` CSV. With `classes = None` the class count is the
/// largest label seen.
pub fn load_csv(path: impl AsRef<Path>, classes: Option<usize>) -> Result<Dataset> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_path(path)?;
    let header = reader.headers()?.clone();
    let width = header.len();
    let header_ok = width >= 2
        && header.get(0).map(str::trim) == Some("label")
        && header.iter().skip(1).enumerate().all(|(j, h)| h.trim() == format!("f{}", j + 1));
    if !header_ok {
        return Err(Error::MalformedRow {
            path: path.to_owned(),
            line: 1,
            message: "header must be label,f1,...,fd".into(),
        });
    }
    let d = width - 1;

    let mut values = Vec::new();
    let mut raw_labels = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let malformed = |message: String| Error::MalformedRow { path: path.to_owned(), line, message };
        if record.len() != width {
            return Err(malformed(format!("expected {width} fields, found {}", record.len())));
        }
        let label: i64 =
            record[0].trim().parse().map_err(|_| malformed(format!("label {:?} is not an integer", &record[0])))?;
        let out_of_range = label < 1 || classes.is_some_and(|c| label as u64 > c as u64);
        if out_of_range {
            return Err(Error::LabelOnLine { path: path.to_owned(), line, label, classes: classes.unwrap_or(0) });
        }
        for field in record.iter().skip(1) {
            let v: f64 = field.trim().parse().map_err(|_| malformed(format!("value {field:?} is not a number")))?;
            if !v.is_finite() {
                return Err(malformed(format!("non-finite value {field:?}")));
            }
            values.push(v);
        }
        raw_labels.push(label as usize);
    }
    let n = raw_labels.len();
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    let classes = classes.unwrap_or_else(|| raw_labels.iter().copied().max().unwrap_or(1));
    let x = Array2::from_shape_vec((n, d), values).expect("row lengths checked");
    let labels = raw_labels.into_iter().map(|l| l - 1).collect();
    let name = path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    Dataset::new(name, x, labels, classes)
}

/// Writes `label,f1,...,fd` CSV with 1-based labels. Values use the shortest
/// representation that parses back to the same `f64`.
pub fn save_csv(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    let mut header = vec!["label".to_string()];
    header.extend((1..=dataset.dim()).map(|j| format!("f{j}")));
    writer.write_record(&header)?;
    let mut row = Vec::with_capacity(dataset.dim() + 1);
    for (xr, &label) in dataset.x.rows().into_iter().zip(&dataset.labels) {
        row.clear();
        row.push((label + 1).to_string());
        row.extend(xr.iter().map(|v| v.to_string()));
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Shuffled, disjoint and exhaustive split. Held-out quotas are allocated per
/// class so that every class with at least two examples appears on both
/// sides; the held-out size is `round(N · fraction)` whenever that is
/// compatible with those per-class bounds.
pub fn split(dataset: &Dataset, heldout_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    let n = dataset.len();
    if !(heldout_fraction > 0.0 && heldout_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!("heldout fraction must lie in (0, 1), got {heldout_fraction}")));
    }
    if n < 2 {
        return Err(Error::InvalidParameter("splitting needs at least 2 examples".into()));
    }
    let mut rng = stream(seed, Purpose::Split, 0, 0);
    let target = ((n as f64 * heldout_fraction).round() as usize).clamp(1, n - 1);

    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); dataset.classes];
    for (i, &c) in dataset.labels.iter().enumerate() {
        by_class[c].push(i);
    }
    for members in &mut by_class {
        members.shuffle(&mut rng);
    }

    let bounds: Vec<(usize, usize)> =
        by_class.iter().map(|m| if m.len() >= 2 { (1, m.len() - 1) } else { (0, m.len()) }).collect();
    let ideal: Vec<f64> = by_class.iter().map(|m| m.len() as f64 * target as f64 / n as f64).collect();
    let mut quota: Vec<usize> =
        ideal.iter().zip(&bounds).map(|(&v, &(lo, hi))| (v.floor() as usize).clamp(lo, hi)).collect();
    let mut order: Vec<usize> = (0..quota.len()).collect();
    order.sort_by(|&a, &b| (ideal[b] - ideal[b].floor()).total_cmp(&(ideal[a] - ideal[a].floor())).then(a.cmp(&b)));

    let mut total: usize = quota.iter().sum();
    while total < target {
        let Some(&c) = order.iter().find(|&&c| quota[c] < bounds[c].1) else { break };
        quota[c] += 1;
        total += 1;
    }
    while total > target {
        let Some(&c) = order.iter().rev().find(|&&c| quota[c] > bounds[c].0) else { break };
        quota[c] -= 1;
        total -= 1;
    }

    let mut heldout = Vec::with_capacity(total);
    let mut train = Vec::with_capacity(n - total);
    for (members, &q) in by_class.iter().zip(&quota) {
        heldout.extend_from_slice(&members[..q]);
        train.extend_from_slice(&members[q..]);
    }
    heldout.shuffle(&mut rng);
    train.shuffle(&mut rng);
    let name = dataset.name();
    Ok((dataset.subset(&train, format!("{name}-train"))?, dataset.subset(&heldout, format!("{name}-heldout"))?))
}
