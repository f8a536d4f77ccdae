//! Command implementations. Each returns after writing its output; rows
//! finished before an interrupt are still written.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};

use ffr_core::ensembles::{is_sidon, surface_measure, PointSet};
use ffr_core::restriction::{
    extension_norm_lower_bound, predicted_regime, threshold_report, threshold_report_at,
};
use ffr_core::salem::{fit_profiles, profile_set};
use ffr_core::spectral::{fourier_forward, fourier_inverse};
use ffr_core::stats::linear_fit;
use ffr_core::{
    ClosedFormPrediction, Exact, ExactScalar, Exponent, GridFunction, Regime, SetDescriptor,
    SpectralProfile, Threshold, ThresholdReport,
};
use rayon::prelude::*;
use serde_json::Value;

use crate::config::{exact_exp, ExponentsInput, RunConfig, Source, Task};
use crate::formats::{
    self, num, Envelope, ExponentDoc, FitRow, ProfileRow, SetHeader, SweepRow, SweepSummary,
    FIT_COLUMNS, PROFILE_COLUMNS, SWEEP_COLUMNS,
};
use crate::{verify, CliError};

pub fn execute(cfg: &RunConfig, interrupt: &AtomicBool) -> Result<(), CliError> {
    match &cfg.task {
        Task::BuildSet { descriptor, p } => build_set(cfg, descriptor, *p),
        Task::Transform { source, inverse } => transform(cfg, source, *inverse),
        Task::SalemProfile { descriptor } => salem_profile(cfg, descriptor, interrupt),
        Task::SalemFit { descriptor } => salem_fit(cfg, descriptor, interrupt),
        Task::Exponents(input) => exponents(cfg, input),
        Task::ExtNorm { source } => ext_norm(cfg, source, interrupt),
        Task::Sweep { descriptor } => sweep(cfg, descriptor, interrupt),
        Task::Verify { suites, inject_fault } => verify::run_suites(suites, *inject_fault, cfg.seed, interrupt),
    }
}

fn envelope(cfg: &RunConfig) -> Envelope {
    Envelope::new(cfg.command, cfg.echo.clone(), cfg.timestamp)
}

/// Writes `content` to `--out` and prints `summary`, or prints `content` to
/// stdout and `summary` to stderr.
fn emit(cfg: &RunConfig, content: &str, summary: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, content).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            print!("{summary}");
        }
        None => {
            print!("{content}");
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn read_input(path: &std::path::Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn is_set_file(text: &str) -> bool {
    text.starts_with('{')
}

fn load_set(cfg: &RunConfig, source: &Source) -> Result<(Option<SetDescriptor>, PointSet), CliError> {
    match source {
        Source::Family { descriptor, p } => Ok((Some(descriptor.clone()), descriptor.build_with_cap(*p, cfg.cap)?)),
        Source::File(path) => {
            let text = read_input(path)?;
            if !is_set_file(&text) {
                return Err(CliError::Parse(format!("{} is not a set file", path.display())));
            }
            let (header, set) = formats::read_set_file(&text, cfg.cap)?;
            Ok((Some(header.descriptor), set))
        }
    }
}

fn interrupted(flag: &AtomicBool) -> bool {
    flag.load(Ordering::SeqCst)
}

// ---------------------------------------------------------------------------

fn build_set(cfg: &RunConfig, descriptor: &SetDescriptor, p: u64) -> Result<(), CliError> {
    let set = descriptor.build_with_cap(p, cfg.cap)?;
    let header = SetHeader {
        p: set.space().p(),
        d: set.space().dimension(),
        descriptor: descriptor.clone(),
        cardinality: set.cardinality(),
        envelope: envelope(cfg),
    };
    let mut summary = format!(
        "family: {descriptor}\np: {p}\nd: {}\ncardinality: {}\nalpha: {}\n",
        header.d,
        header.cardinality,
        num(set.alpha())
    );
    if matches!(
        descriptor,
        SetDescriptor::SidonParabola | SetDescriptor::SidonGreedy { .. } | SetDescriptor::EmbeddedSidon
    ) {
        summary.push_str(&format!("is_sidon: {}\n", is_sidon(&set)?));
    }
    if descriptor.is_heuristic() {
        summary.push_str("heuristic: true\n");
    }
    emit(cfg, &formats::write_set_file(&header, &set), &summary)
}

fn transform(cfg: &RunConfig, source: &Source, inverse: bool) -> Result<(), CliError> {
    let (f, origin): (GridFunction<f64>, Value) = match source {
        Source::File(path) => {
            let text = read_input(path)?;
            if is_set_file(&text) {
                let (header, set) = formats::read_set_file(&text, cfg.cap)?;
                let origin = serde_json::json!({ "kind": "surface-measure", "set": header.descriptor });
                (surface_measure::<f64>(&set)?.to_grid_function(), origin)
            } else {
                let (env, f) = formats::read_function_csv(&text, cfg.cap)?;
                (f, serde_json::json!({ "kind": "function", "from": env.command }))
            }
        }
        Source::Family { descriptor, p } => {
            let set = descriptor.build_with_cap(*p, cfg.cap)?;
            let origin = serde_json::json!({ "kind": "surface-measure", "set": descriptor });
            (surface_measure::<f64>(&set)?.to_grid_function(), origin)
        }
    };
    let g = if inverse { fourier_inverse(&f) } else { fourier_forward(&f) };
    let env = envelope(cfg).with_meta("source", origin);
    let summary = format!(
        "p: {}\nd: {}\nvalues: {}\nsup: {}\n",
        g.space().p(),
        g.space().dimension(),
        g.values().len(),
        num(g.norm_sup())
    );
    emit(cfg, &formats::write_function_csv(env, &g)?, &summary)
}

// ---------------------------------------------------------------------------
// Salem profiles and fits

/// Profiles in field-size order; stops early when interrupted.
fn collect_profiles(
    cfg: &RunConfig,
    descriptor: &SetDescriptor,
    interrupt: &AtomicBool,
) -> Result<(Vec<SpectralProfile<f64>>, bool), CliError> {
    let mut out = Vec::new();
    for &p in &cfg.field_sizes {
        if interrupted(interrupt) {
            return Ok((out, true));
        }
        out.push(profile_set(descriptor, p, &cfg.p_grid, cfg.cap)?);
    }
    Ok((out, interrupted(interrupt)))
}

fn profile_rows(descriptor: &SetDescriptor, prof: &SpectralProfile<f64>) -> Vec<ProfileRow> {
    prof.entries
        .iter()
        .map(|e| ProfileRow {
            family: descriptor.family_name().into(),
            params: descriptor.params_string(),
            p: prof.field_size,
            d: prof.dimension,
            p_exp: e.p_exp.as_f64(),
            norm: e.norm,
            log_set_size: (prof.set_size as f64).ln(),
            log_norm: e.norm.ln(),
        })
        .collect()
}

fn salem_profile(cfg: &RunConfig, descriptor: &SetDescriptor, interrupt: &AtomicBool) -> Result<(), CliError> {
    let (profiles, stopped) = collect_profiles(cfg, descriptor, interrupt)?;
    let rows: Vec<ProfileRow> = profiles.iter().flat_map(|p| profile_rows(descriptor, p)).collect();
    let text = formats::write_rows(envelope(cfg), &rows, &PROFILE_COLUMNS, &[], cfg.format)?;
    emit(cfg, &text, &format!("rows: {}\n", rows.len()))?;
    if stopped {
        return Err(CliError::Interrupted);
    }
    Ok(())
}

fn salem_fit(cfg: &RunConfig, descriptor: &SetDescriptor, interrupt: &AtomicBool) -> Result<(), CliError> {
    let (profiles, stopped) = collect_profiles(cfg, descriptor, interrupt)?;
    if stopped {
        return Err(CliError::Interrupted);
    }
    let mut rows = Vec::new();
    let mut summary = String::new();
    for p_exp in &cfg.p_grid {
        let fit = fit_profiles(&profiles, p_exp)?;
        summary.push_str(&format!(
            "p_exp={}: s = {:.4} ± {:.4}{}\n",
            p_exp,
            fit.fitted_s,
            fit.stderr,
            fit.predicted_s.map(|s| format!(" (predicted {s:.4})")).unwrap_or_default()
        ));
        rows.push(FitRow {
            family: descriptor.family_name().into(),
            params: descriptor.params_string(),
            p_exp: p_exp.as_f64(),
            fitted_s: fit.fitted_s,
            stderr: fit.stderr,
            n_points: fit.field_sizes.len(),
            predicted_s: fit.predicted_s,
        });
    }
    let text = formats::write_rows(envelope(cfg), &rows, &FIT_COLUMNS, &[], cfg.format)?;
    emit(cfg, &text, &summary)
}

// ---------------------------------------------------------------------------
// Thresholds

fn rat(x: &Exact) -> Value {
    Value::String(x.to_exact_string())
}

fn threshold(t: &Threshold<Exact>) -> Value {
    match t {
        Threshold::Admissible(q) => rat(q),
        Threshold::Inadmissible => Value::String("inadmissible".into()),
    }
}

fn report_map(r: &ThresholdReport<Exact>) -> BTreeMap<String, Value> {
    let mut m = BTreeMap::new();
    m.insert("d".into(), Value::from(r.d));
    m.insert("alpha".into(), rat(&r.alpha));
    m.insert("p_opt".into(), Value::String(exact_exp(&r.optimal_p)));
    m.insert("s".into(), rat(&r.s));
    m.insert("s_inf".into(), rat(&r.s_inf));
    m.insert("q_main".into(), threshold(&r.q_main));
    m.insert("q_mocktao".into(), r.q_mocktao.as_ref().map_or(Value::Null, rat));
    m.insert("q_corollary".into(), threshold(&r.q_corollary));
    m.insert("improvement".into(), Value::Bool(r.improvement));
    m.insert("lambda".into(), rat(&r.lambda));
    m.insert("q_of_lambda".into(), rat(&r.q_of_lambda));
    m.insert("q_failure".into(), rat(&r.q_failure));
    m
}

fn exponents(cfg: &RunConfig, input: &ExponentsInput) -> Result<(), CliError> {
    let (report, family) = match input {
        ExponentsInput::Family { prediction, p_exp } => {
            let report = match p_exp {
                None => threshold_report::<Exact>(prediction)?,
                Some(p) => {
                    let s = prediction.s_at::<Exact>(p)?;
                    let s_inf = prediction.s_at::<Exact>(&Exponent::Infinity)?;
                    threshold_report_at(prediction.dimension(), &prediction.alpha::<Exact>(), p, &s, &s_inf)?
                }
            };
            (report, Some(*prediction))
        }
        ExponentsInput::Manual { d, alpha, p_exp, s, s_inf } => {
            (threshold_report_at(*d, alpha, p_exp, s, s_inf)?, None)
        }
    };
    let mut map = report_map(&report);
    if let Some(pred) = family {
        map.insert(
            "family".into(),
            serde_json::to_value(pred).map_err(|e| CliError::Io(e.to_string()))?,
        );
    }
    let summary = format!(
        "q_main: {}\nq_mocktao: {}\np_opt: {}\nimprovement: {}\n",
        value_text(&map["q_main"]),
        value_text(&map["q_mocktao"]),
        value_text(&map["p_opt"]),
        report.improvement
    );
    let doc = ExponentDoc {
        envelope: envelope(cfg),
        report: map,
    };
    emit(cfg, &formats::write_exponents(&doc)?, &summary)
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

// ---------------------------------------------------------------------------
// Extension norms

fn regime_for(descriptor: Option<&SetDescriptor>, q: f64) -> Regime {
    descriptor
        .and_then(ClosedFormPrediction::for_descriptor)
        .map(|pred| predicted_regime(&pred, q))
        .unwrap_or(Regime::Untested)
}

fn ext_row(
    cfg: &RunConfig,
    descriptor: Option<&SetDescriptor>,
    set: &PointSet,
    q: f64,
) -> Result<SweepRow, CliError> {
    let mu = surface_measure::<f64>(set)?;
    let est = extension_norm_lower_bound(&mu, q, &cfg.extension)?;
    Ok(SweepRow {
        family: descriptor.map_or("file", |d| d.family_name()).into(),
        params: descriptor.map(|d| d.params_string()).unwrap_or_default(),
        p: set.space().p(),
        d: set.space().dimension(),
        q,
        lower_bound: est.lower_bound,
        witness_tag: est.witness_tag.to_string(),
        converged: est.converged,
        iters: est.iterations,
        regime: regime_for(descriptor, q).to_string(),
    })
}

fn ext_norm(cfg: &RunConfig, source: &Source, interrupt: &AtomicBool) -> Result<(), CliError> {
    let (descriptor, set) = load_set(cfg, source)?;
    let mut rows = Vec::new();
    for &q in &cfg.q_grid {
        if interrupted(interrupt) {
            break;
        }
        rows.push(ext_row(cfg, descriptor.as_ref(), &set, q)?);
    }
    let summary: String = rows
        .iter()
        .map(|r| format!("q={}: lower bound {:.6} ({})\n", r.q, r.lower_bound, r.witness_tag))
        .collect();
    let text = formats::write_rows(envelope(cfg), &rows, &SWEEP_COLUMNS, &[], cfg.format)?;
    emit(cfg, &text, &summary)?;
    if interrupted(interrupt) {
        return Err(CliError::Interrupted);
    }
    Ok(())
}

fn sweep(cfg: &RunConfig, descriptor: &SetDescriptor, interrupt: &AtomicBool) -> Result<(), CliError> {
    // every (q, p) pair is an independent task; results are sorted by (q, p)
    let sets: Vec<PointSet> = cfg
        .field_sizes
        .par_iter()
        .map(|&p| descriptor.build_with_cap(p, cfg.cap))
        .collect::<Result<_, _>>()?;
    let tasks: Vec<(usize, usize)> = (0..cfg.q_grid.len())
        .flat_map(|qi| (0..sets.len()).map(move |si| (qi, si)))
        .collect();
    let results: Vec<Option<SweepRow>> = tasks
        .par_iter()
        .map(|&(qi, si)| {
            if interrupted(interrupt) {
                return Ok(None);
            }
            ext_row(cfg, Some(descriptor), &sets[si], cfg.q_grid[qi]).map(Some)
        })
        .collect::<Result<_, CliError>>()?;
    let rows: Vec<SweepRow> = results.into_iter().flatten().collect();

    let mut summaries = Vec::new();
    let mut text_summary = String::new();
    for &q in &cfg.q_grid {
        let of_q: Vec<&SweepRow> = rows.iter().filter(|r| r.q == q).collect();
        let xs: Vec<f64> = of_q.iter().map(|r| (r.p as f64).ln()).collect();
        let ys: Vec<f64> = of_q.iter().map(|r| r.lower_bound.ln()).collect();
        let (slope, stderr) = match linear_fit(&xs, &ys) {
            Ok(fit) => (fit.slope, fit.slope_stderr),
            Err(_) => (f64::NAN, f64::NAN),
        };
        let regime = regime_for(Some(descriptor), q);
        text_summary.push_str(&format!("q={q}: slope {slope:.4} ± {stderr:.4}, predicted {regime}\n"));
        summaries.push(SweepSummary {
            q: num(q),
            slope: num(slope),
            stderr: num(stderr),
            regime: regime.to_string(),
            n_points: of_q.len(),
        });
    }
    let text = formats::write_rows(envelope(cfg), &rows, &SWEEP_COLUMNS, &summaries, cfg.format)?;
    emit(cfg, &text, &text_summary)?;
    if interrupted(interrupt) {
        return Err(CliError::Interrupted);
    }
    Ok(())
}
