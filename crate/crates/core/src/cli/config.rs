//! Flat `key=value` experiment configuration.
//!
//! A run is described by a string map assembled from an optional config file
//! and command-line flags (flags win). The map is parsed once into an
//! [`ExperimentConfig`]; every problem found is reported together.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::kernels::KernelSpec;
use crate::model::ModelShape;
use crate::training::{DecayPolicy, LossUnit, Monitor, TrainConfig};

/// Keys accepted in config files, with their flag spelling.
pub const KEYS: &[&str] = &[
    "train",
    "heldout",
    "classes",
    "kernel",
    "sigma",
    "lambda",
    "sparsity",
    "features",
    "rank",
    "select-iters",
    "select-subset",
    "lr",
    "epochs",
    "batch-size",
    "decay",
    "patience",
    "monitor",
    "stop-patience",
    "heldout-fraction",
    "weight-decay",
    "train-metrics",
    "units",
    "seed",
    "out",
];

pub type ConfigMap = BTreeMap<String, String>;

/// Parses `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_config_text(text: &str) -> Result<ConfigMap, Vec<String>> {
    let mut map = ConfigMap::new();
    let mut errors = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.split_once('=') {
            Some((k, v)) => {
                let key = k.trim();
                if KEYS.contains(&key) {
                    map.insert(key.to_string(), v.trim().to_string());
                } else {
                    errors.push(format!("line {}: unknown key {key:?}", n + 1));
                }
            }
            None => errors.push(format!("line {}: expected key=value", n + 1)),
        }
    }
    if errors.is_empty() {
        Ok(map)
    } else {
        Err(errors)
    }
}

/// Canonical `key=value` rendering, sorted by key.
pub fn render_config(map: &ConfigMap) -> String {
    map.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionSettings {
    pub iterations: usize,
    /// `R`; when absent, the feature count capped at the training size.
    pub subset: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub train_path: PathBuf,
    pub heldout_path: Option<PathBuf>,
    pub classes: Option<usize>,
    pub kernel: KernelSpec,
    pub features: usize,
    pub rank: Option<usize>,
    pub selection: Option<SelectionSettings>,
    pub train: TrainConfig,
    pub units: LossUnit,
    pub out: PathBuf,
    pub seed: u64,
}

struct Reader<'a> {
    map: &'a ConfigMap,
    errors: Vec<String>,
}

impl Reader<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    fn parse<T: std::str::FromStr>(&mut self, key: &str, default: T) -> T
    where
        T::Err: std::fmt::Display,
    {
        self.optional(key).unwrap_or(default)
    }

    fn optional<T: std::str::FromStr>(&mut self, key: &str) -> Option<T>
    where
        T::Err: std::fmt::Display,
    {
        let raw = self.raw(key)?;
        match raw.parse() {
            Ok(v) => Some(v),
            Err(e) => {
                self.errors.push(format!("{key}: cannot parse {raw:?}: {e}"));
                None
            }
        }
    }

    fn require<T: std::str::FromStr>(&mut self, key: &str) -> Option<T>
    where
        T::Err: std::fmt::Display,
    {
        if self.raw(key).is_none() {
            self.errors.push(format!("{key}: required"));
            return None;
        }
        self.optional(key)
    }
}

impl ExperimentConfig {
    pub fn from_map(map: &ConfigMap) -> Result<Self, Vec<String>> {
        let mut r = Reader { map, errors: Vec::new() };
        for key in map.keys() {
            if !KEYS.contains(&key.as_str()) {
                r.errors.push(format!("unknown key {key:?}"));
            }
        }

        let train_path: Option<PathBuf> = r.require("train");
        let out: Option<PathBuf> = r.require("out");
        let heldout_path = r.optional("heldout");
        let classes = r.optional("classes");
        let seed = r.parse("seed", 0u64);

        let kernel_name = r.raw("kernel").unwrap_or("gaussian").to_string();
        let sigma = r.parse("sigma", 1.0f64);
        let lambda = r.parse("lambda", 1.0f64);
        let sparsity = r.parse("sparsity", 2usize);
        let kernel = match kernel_name.as_str() {
            "gaussian" => Some(KernelSpec::Gaussian { sigma }),
            "laplacian" => Some(KernelSpec::Laplacian { lambda }),
            "sparse-gaussian" => Some(KernelSpec::SparseGaussian { sigma, k: sparsity }),
            other => {
                r.errors.push(format!(
                    "kernel: unknown kernel {other:?} (expected gaussian, laplacian or sparse-gaussian)"
                ));
                None
            }
        };
        if let Some(Err(e)) = kernel.map(|k| k.validate()) {
            r.errors.push(format!("kernel: {e}"));
        }

        let features = r.parse("features", 1024usize);
        if features == 0 {
            r.errors.push("features: must be at least 1".into());
        }
        let rank: Option<usize> = r.optional("rank");
        if rank == Some(0) {
            r.errors.push("rank: must be at least 1".into());
        }

        let iterations: Option<usize> = r.optional("select-iters");
        let subset: Option<usize> = r.optional("select-subset");
        let selection = match iterations {
            Some(0) => {
                r.errors.push("select-iters: must be at least 1".into());
                None
            }
            Some(t) => {
                if t >= 2 && features < t {
                    r.errors.push(format!("select-iters: {t} rounds need at least {t} features"));
                }
                if subset == Some(0) {
                    r.errors.push("select-subset: must be at least 1".into());
                }
                Some(SelectionSettings { iterations: t, subset })
            }
            None => None,
        };

        let patience = r.parse("patience", 1usize);
        let decay = match r.raw("decay").unwrap_or("constant") {
            "constant" => DecayPolicy::Constant,
            "ce" => DecayPolicy::HalveOnPlateau { monitor: Monitor::Ce, patience },
            "erll" => DecayPolicy::HalveOnPlateau { monitor: Monitor::Erll, patience },
            other => {
                r.errors.push(format!("decay: unknown policy {other:?} (expected constant, ce or erll)"));
                DecayPolicy::Constant
            }
        };
        let defaults = TrainConfig::default();
        let train = TrainConfig {
            learning_rate: r.parse("lr", defaults.learning_rate),
            epochs: r.parse("epochs", defaults.epochs),
            batch_size: r.parse("batch-size", defaults.batch_size),
            seed,
            decay,
            early_stop_monitor: r.parse("monitor", defaults.early_stop_monitor),
            heldout_fraction: r.parse("heldout-fraction", defaults.heldout_fraction),
            weight_decay: r.parse("weight-decay", defaults.weight_decay),
            stop_patience: r.optional("stop-patience"),
            train_metrics: r.parse("train-metrics", false),
        };
        r.errors.extend(train.violations());
        let units = r.parse("units", LossUnit::Nats);

        match (train_path, out, kernel, r.errors.is_empty()) {
            (Some(train_path), Some(out), Some(kernel), true) => Ok(ExperimentConfig {
                train_path,
                heldout_path,
                classes,
                kernel,
                features,
                rank,
                selection,
                train,
                units,
                out,
                seed,
            }),
            _ => Err(r.errors),
        }
    }

    /// Fully resolved settings, defaults included. Parsing the result with
    /// [`ExperimentConfig::from_map`] gives back an equal config.
    pub fn to_map(&self) -> ConfigMap {
        let mut m = ConfigMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("train", self.train_path.display().to_string());
        if let Some(p) = &self.heldout_path {
            put("heldout", p.display().to_string());
        }
        if let Some(c) = self.classes {
            put("classes", c.to_string());
        }
        put("kernel", self.kernel.name().to_string());
        match self.kernel {
            KernelSpec::Gaussian { sigma } => put("sigma", sigma.to_string()),
            KernelSpec::Laplacian { lambda } => put("lambda", lambda.to_string()),
            KernelSpec::SparseGaussian { sigma, k } => {
                put("sigma", sigma.to_string());
                put("sparsity", k.to_string());
            }
        }
        put("features", self.features.to_string());
        if let Some(r) = self.rank {
            put("rank", r.to_string());
        }
        if let Some(s) = &self.selection {
            put("select-iters", s.iterations.to_string());
            if let Some(r) = s.subset {
                put("select-subset", r.to_string());
            }
        }
        let t = &self.train;
        put("lr", t.learning_rate.to_string());
        put("epochs", t.epochs.to_string());
        put("batch-size", t.batch_size.to_string());
        match t.decay {
            DecayPolicy::Constant => put("decay", "constant".into()),
            DecayPolicy::HalveOnPlateau { monitor, patience } => {
                put("decay", monitor.to_string());
                put("patience", patience.to_string());
            }
        }
        put("monitor", t.early_stop_monitor.to_string());
        if let Some(p) = t.stop_patience {
            put("stop-patience", p.to_string());
        }
        put("heldout-fraction", t.heldout_fraction.to_string());
        put("weight-decay", t.weight_decay.to_string());
        put("train-metrics", t.train_metrics.to_string());
        put("units", self.units.to_string());
        put("seed", self.seed.to_string());
        put("out", self.out.display().to_string());
        m
    }

    pub fn shape(&self) -> ModelShape {
        match self.rank {
            Some(rank) => ModelShape::Bottleneck { rank },
            None => ModelShape::Full,
        }
    }

    /// Whether selection actually runs scoring rounds.
    pub fn uses_selection(&self) -> bool {
        self.selection.as_ref().is_some_and(|s| s.iterations >= 2)
    }

    /// Training-variant label: `NT`, `B`, `R` or `BR`, with `+FS` when
    /// feature selection is on. `R` means learning-rate decay driven by ERLL.
    pub fn variant(&self) -> String {
        let b = self.rank.is_some();
        let r = matches!(self.train.decay, DecayPolicy::HalveOnPlateau { monitor: Monitor::Erll, .. });
        let mut label = match (b, r) {
            (false, false) => "NT",
            (true, false) => "B",
            (false, true) => "R",
            (true, true) => "BR",
        }
        .to_string();
        if self.uses_selection() {
            label.push_str("+FS");
        }
        label
    }
}

/// Reads a config file if given and overlays the flag values on it.
/// Entries of a config file's `text` (read from `path`) with `overrides` on top.
pub fn merged_map(
    config: Option<(&Path, &str)>,
    overrides: &[(&'static str, String)],
) -> Result<ConfigMap, Vec<String>> {
    let mut map = match config {
        Some((path, text)) => parse_config_text(text)
            .map_err(|errs| errs.into_iter().map(|e| format!("{}: {e}", path.display())).collect::<Vec<_>>())?,
        None => ConfigMap::new(),
    };
    for (k, v) in overrides {
        map.insert((*k).to_string(), v.clone());
    }
    Ok(map)
}
