use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::config::{render_config, ExperimentConfig};
use super::{CmdResult, EvaluateArgs, Failure, SweepArgs, SynthArgs, SynthKind, VerifyArgs};
use crate::data::{self, Dataset};
use crate::featsel::{select_features, support_hit_rate, Selection, SelectionConfig, SelectionSchedule};
use crate::kernels::{FeatureMap, KernelSpec};
use crate::model::LogisticModel;
use crate::rng::{stream, Purpose};
use crate::training::{compute_metrics, train as fit, LossUnit, MetricsRecord, Sgd, TrainOutcome};
use crate::verify;

pub const CONFIG_FILE: &str = "config.txt";
pub const HISTORY_FILE: &str = "history.csv";
pub const MODEL_FILE: &str = "model.rffk";
pub const METRICS_FILE: &str = "metrics.csv";
pub const SELECTION_FILE: &str = "selection.csv";
pub const FEATURES_FILE: &str = "features.rffk";

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

/// Io failures gain the path; errors that already name a file pass through.
fn with_path(path: &Path, e: crate::Error) -> Failure {
    match e {
        crate::Error::Io(_)
        | crate::Error::Csv(_)
        | crate::Error::Format(_)
        | crate::Error::MagicMismatch { .. }
        | crate::Error::UnsupportedVersion(_)
        | crate::Error::Truncated { .. }
        | crate::Error::Checksum { .. } => Failure::Io(format!("{}: {e}", path.display())),
        other => other.into(),
    }
}

fn load_dataset(path: &Path, classes: Option<usize>) -> Result<Dataset, Failure> {
    if is_csv(path) {
        return data::load_csv(path, classes).map_err(|e| with_path(path, e));
    }
    let ds = data::load_binary(path).map_err(|e| with_path(path, e))?;
    if let Some(c) = classes.filter(|&c| c != ds.classes()) {
        return Err(Failure::Validation(vec![format!(
            "{}: file has {} classes, configuration asks for {c}",
            path.display(),
            ds.classes()
        )]));
    }
    Ok(ds)
}

fn save_dataset(ds: &Dataset, path: &Path) -> CmdResult {
    create_parent(path)?;
    if is_csv(path) {
        data::save_csv(ds, path)?;
    } else {
        data::save_binary(ds, path)?;
    }
    Ok(())
}

fn create_parent(path: &Path) -> CmdResult {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => {
            fs::create_dir_all(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))
        }
        _ => Ok(()),
    }
}

fn write_text(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

pub(crate) fn metrics_header() -> &'static str {
    "ce,ent,err,erll"
}

fn metrics_fields(m: &MetricsRecord) -> String {
    format!("{},{},{},{}", m.ce, m.ent, m.err, m.erll)
}

pub(crate) fn synth(args: &SynthArgs) -> CmdResult {
    let ds = match args.kind {
        SynthKind::Mixture => {
            data::synth_gaussian_mixture(args.dim, args.classes, args.samples, args.separation, args.seed)?
        }
        SynthKind::Interactions => {
            data::synth_sparse_interactions(args.dim, args.relevant, args.classes, args.samples, args.seed)?
        }
    };
    save_dataset(&ds, &args.out)?;
    println!("wrote {} rows x {} columns, {} classes to {}", ds.len(), ds.dim(), ds.classes(), args.out.display());
    Ok(())
}

/// Training and held-out sets, either from two files or by splitting one.
fn load_splits(cfg: &ExperimentConfig) -> Result<(Dataset, Dataset), Failure> {
    let full = load_dataset(&cfg.train_path, cfg.classes)?;
    match &cfg.heldout_path {
        Some(path) => {
            let held = load_dataset(path, Some(full.classes()))?;
            if held.dim() != full.dim() {
                return Err(crate::Error::DimensionMismatch { expected: full.dim(), found: held.dim() }.into());
            }
            Ok((full, held))
        }
        None => Ok(data::split(&full, cfg.train.heldout_fraction, cfg.seed)?),
    }
}

fn build_map(cfg: &ExperimentConfig, train: &Dataset) -> Result<(FeatureMap, Option<Selection>), Failure> {
    match &cfg.selection {
        Some(sel) if cfg.uses_selection() => {
            let subset = sel.subset.unwrap_or(cfg.features.min(train.len()));
            let schedule = SelectionSchedule::with_default_thresholds(cfg.features, sel.iterations, subset)?;
            let config = SelectionConfig {
                schedule,
                shape: cfg.shape(),
                sgd: Sgd {
                    learning_rate: cfg.train.learning_rate,
                    batch_size: cfg.train.batch_size,
                    weight_decay: cfg.train.weight_decay,
                },
                seed: cfg.seed,
            };
            let selection = select_features(&cfg.kernel, train.x().view(), train.labels(), train.classes(), &config)?;
            Ok((selection.map.clone(), Some(selection)))
        }
        _ => Ok((FeatureMap::sample(&cfg.kernel, train.dim(), cfg.features, cfg.seed)?, None)),
    }
}

fn selection_csv(selection: &Selection) -> String {
    let mut s = String::from("iteration,retained,min_norm,median_norm,max_norm\n");
    for r in &selection.reports {
        let _ = writeln!(s, "{},{},{},{},{}", r.iteration, r.retained, r.min_norm, r.median_norm, r.max_norm);
    }
    s
}

fn history_csv(outcome: &TrainOutcome, units: LossUnit, with_train: bool) -> String {
    let mut s = String::from("epoch,lr,ce,ent,err,erll");
    if with_train {
        s.push_str(",train_ce,train_ent,train_err,train_erll");
    }
    s.push('\n');
    for rec in &outcome.history {
        let _ = write!(s, "{},{},{}", rec.epoch, rec.lr, metrics_fields(&rec.heldout.in_units(units)));
        if let (true, Some(t)) = (with_train, rec.train) {
            let _ = write!(s, ",{}", metrics_fields(&t.in_units(units)));
        }
        s.push('\n');
    }
    s
}

fn prepare_out(cfg: &ExperimentConfig) -> CmdResult {
    fs::create_dir_all(&cfg.out).map_err(|e| Failure::Io(format!("{}: {e}", cfg.out.display())))?;
    write_text(&cfg.out.join(CONFIG_FILE), &render_config(&cfg.to_map()))
}

fn report_selection(selection: &Selection, train: &Dataset) {
    println!("features generated: {}", selection.generated);
    if let Some(secret) = train.relevant() {
        println!("secret-coordinate hit rate: {}", support_hit_rate(&selection.map, &selection.retained, secret));
    }
}

pub(crate) fn train(cfg: &ExperimentConfig) -> CmdResult {
    let (train_set, held_set) = load_splits(cfg)?;
    prepare_out(cfg)?;
    let (map, selection) = build_map(cfg, &train_set)?;
    let train_z = map.apply(train_set.x().view())?;
    let held_z = map.apply(held_set.x().view())?;
    let classes = train_set.classes();
    let model = LogisticModel::init(cfg.shape(), cfg.features, classes, &mut stream(cfg.seed, Purpose::Init, 0, 0))?;
    let outcome = fit(model, train_z.view(), train_set.labels(), held_z.view(), held_set.labels(), &cfg.train)?;

    let variant = cfg.variant();
    let best = outcome.best().heldout.in_units(cfg.units);
    write_text(&cfg.out.join(HISTORY_FILE), &history_csv(&outcome, cfg.units, cfg.train.train_metrics))?;
    data::save_model(&outcome.model, &map, cfg.out.join(MODEL_FILE))?;
    write_text(
        &cfg.out.join(METRICS_FILE),
        &format!(
            "variant,best_epoch,units,{}\n{variant},{},{},{}\n",
            metrics_header(),
            outcome.best_epoch,
            cfg.units,
            metrics_fields(&best)
        ),
    )?;
    if let Some(sel) = &selection {
        write_text(&cfg.out.join(SELECTION_FILE), &selection_csv(sel))?;
        report_selection(sel, &train_set);
    }

    println!("variant: {variant}");
    println!("best epoch: {} of {}", outcome.best_epoch, outcome.history.len());
    println!("{}", metrics_header());
    println!("{}", metrics_fields(&best));
    Ok(())
}

pub(crate) fn select(cfg: &ExperimentConfig) -> CmdResult {
    if !cfg.uses_selection() {
        return Err(Failure::Validation(vec!["select-iters: selection needs at least 2 rounds".into()]));
    }
    let (train_set, _) = load_splits(cfg)?;
    prepare_out(cfg)?;
    let (map, selection) = build_map(cfg, &train_set)?;
    data::save_feature_map(&map, cfg.out.join(FEATURES_FILE))?;
    if let Some(sel) = &selection {
        write_text(&cfg.out.join(SELECTION_FILE), &selection_csv(sel))?;
        report_selection(sel, &train_set);
    }
    Ok(())
}

pub(crate) fn evaluate(args: &EvaluateArgs) -> CmdResult {
    let units: LossUnit = args.units.parse().map_err(|e: String| Failure::Validation(vec![format!("units: {e}")]))?;
    let (model, map) = data::load_model(&args.model).map_err(|e| with_path(&args.model, e))?;
    let ds = load_dataset(&args.data, Some(args.classes.unwrap_or(model.num_classes())))?;
    if ds.classes() != model.num_classes() {
        return Err(Failure::Validation(vec![format!(
            "model has {} classes, dataset has {}",
            model.num_classes(),
            ds.classes()
        )]));
    }
    let z = map.apply(ds.x().view())?;
    let m = compute_metrics(&model, z.view(), ds.labels())?.in_units(units);
    println!("{}", metrics_header());
    println!("{}", metrics_fields(&m));
    Ok(())
}

pub(crate) fn verify(args: &VerifyArgs) -> CmdResult {
    let report = verify::run_all(args.seed)?;

    let mut identity = String::from("kernel,parameter,pair,exact,estimate,stderr,pass\n");
    for c in &report.identity {
        let param = match c.spec {
            KernelSpec::Gaussian { sigma } => sigma,
            KernelSpec::Laplacian { lambda } => lambda,
            KernelSpec::SparseGaussian { sigma, .. } => sigma,
        };
        let _ = writeln!(
            identity,
            "{},{param},{},{},{},{},{}",
            c.spec.name(),
            c.pair,
            c.exact,
            c.mc.estimate,
            c.mc.stderr,
            c.pass
        );
    }
    let mut sweep = String::from("features,median,p90\n");
    for r in &report.sweep {
        let _ = writeln!(sweep, "{},{},{}", r.features, r.median, r.p90);
    }
    let mut sparse = String::from("dim,k,pair,exact,subset_estimate,subset_stderr,rff,mc_pass,rff_pass\n");
    for c in &report.sparse {
        let _ = writeln!(
            sparse,
            "{},{},{},{},{},{},{},{},{}",
            c.dim, c.k, c.pair, c.exact, c.subset_mc.estimate, c.subset_mc.stderr, c.rff, c.mc_pass, c.rff_pass
        );
    }
    if let Some(out) = &args.out {
        fs::create_dir_all(out).map_err(|e| Failure::Io(format!("{}: {e}", out.display())))?;
        write_text(&out.join("identity.csv"), &identity)?;
        write_text(&out.join("sweep.csv"), &sweep)?;
        write_text(&out.join("sparse.csv"), &sparse)?;
    }

    let identity_ok = report.identity.iter().filter(|c| c.pass).count();
    let sparse_ok = report.sparse.iter().filter(|c| c.mc_pass && c.rff_pass).count();
    println!("identity: {identity_ok}/{} cells within tolerance", report.identity.len());
    print!("{sweep}");
    println!("sweep: {}", if report.sweep_pass { "converging" } else { "NOT converging" });
    println!("sparse: {sparse_ok}/{} checks within tolerance", report.sparse.len());
    if report.passed() {
        println!("all checks passed");
        Ok(())
    } else {
        Err(Failure::Verification("one or more checks outside tolerance".into()))
    }
}

pub(crate) fn sweep(args: &SweepArgs) -> CmdResult {
    let spec = match args.kernel.as_str() {
        "gaussian" => KernelSpec::gaussian(args.sigma),
        "laplacian" => KernelSpec::laplacian(args.lambda),
        "sparse-gaussian" => KernelSpec::sparse_gaussian(args.sigma, args.sparsity),
        other => return Err(Failure::Validation(vec![format!("kernel: unknown kernel {other:?}")])),
    }?;
    if args.min_exp > args.max_exp || args.max_exp > 24 {
        return Err(Failure::Validation(vec![format!(
            "feature exponents must satisfy min-exp <= max-exp <= 24, got {}..{}",
            args.min_exp, args.max_exp
        )]));
    }
    if args.pairs == 0 {
        return Err(Failure::Validation(vec!["pairs: must be at least 1".into()]));
    }
    let counts: Vec<usize> = (args.min_exp..=args.max_exp).map(|e| 1usize << e).collect();
    let rows = verify::approximation_sweep(&spec, args.dim, args.pairs, &counts, args.seed)?;
    let mut csv = String::from("features,median,p90\n");
    for r in &rows {
        let _ = writeln!(csv, "{},{},{}", r.features, r.median, r.p90);
    }
    match &args.out {
        Some(path) => {
            create_parent(path)?;
            write_text(path, &csv)
        }
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}
