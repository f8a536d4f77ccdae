//! Config files and the validated [`RunConfig`].

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{ArgAction, CommandFactory};
use ffr_core::field::{PrimeField, DEFAULT_MAX_POINTS};
use ffr_core::salem::{DEFAULT_FIELD_SIZES, MIN_FIELD_SIZES};
use ffr_core::{
    parse_rational, ClosedFormPrediction, Error, Exact, ExtensionConfig, Exponent, SetDescriptor,
};

use crate::args::{Cli, Command, CommonArgs, ExtArgs, FamilyArgs, GridArgs};
use crate::formats::{num, Format};
use crate::CliError;

pub const DEFAULT_P_GRID: &str = "2,4,8,inf";

/// Appends `--key value` for every `key=value` line of the `--config` file
/// whose key is not already on the command line.
pub fn merge_config_file(argv: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(path) = flag_value(&argv, "config") else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Config(vec![format!("cannot read config file {path}: {e}")]))?;
    // without a known subcommand clap reports the problem itself
    let Some(sub_name) = argv.iter().skip(1).find(|a| !a.starts_with('-')).cloned() else {
        return Ok(argv);
    };
    let cmd = Cli::command();
    let Some(sub) = cmd.find_subcommand(&sub_name) else {
        return Ok(argv);
    };

    let mut out = argv.clone();
    let mut errors = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            errors.push(format!("{path}:{}: expected key=value, got `{line}`", n + 1));
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key) && key != "config");
        let Some(arg) = arg else {
            errors.push(format!("{path}:{}: `{key}` is not an option of {sub_name}", n + 1));
            continue;
        };
        if flag_value(&argv, key).is_some() || argv.iter().any(|a| a == &format!("--{key}")) {
            continue;
        }
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match value {
                "true" | "yes" | "1" => out.push(format!("--{key}")),
                "false" | "no" | "0" => {}
                other => errors.push(format!("{path}:{}: `{key}` expects true or false, got `{other}`", n + 1)),
            }
        } else {
            out.push(format!("--{key}"));
            out.push(value.to_string());
        }
    }
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(CliError::Config(errors))
    }
}

fn flag_value(argv: &[String], key: &str) -> Option<String> {
    let long = format!("--{key}");
    let prefixed = format!("--{key}=");
    argv.iter().enumerate().find_map(|(i, a)| {
        if a == &long {
            argv.get(i + 1).cloned()
        } else {
            a.strip_prefix(&prefixed).map(str::to_string)
        }
    })
}

/// Family argument: a constructible set or a prediction-only Sidon family.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyChoice {
    Set(SetDescriptor),
    Sidon { d: usize },
}

impl FamilyChoice {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyChoice::Set(desc) => desc.family_name(),
            FamilyChoice::Sidon { .. } => "sidon",
        }
    }

    pub fn params(&self) -> String {
        match self {
            FamilyChoice::Set(desc) => desc.params_string(),
            FamilyChoice::Sidon { d } => format!("d={d}"),
        }
    }

    pub fn prediction(&self) -> Option<ClosedFormPrediction> {
        match self {
            FamilyChoice::Set(desc) => ClosedFormPrediction::for_descriptor(desc),
            FamilyChoice::Sidon { d } => Some(ClosedFormPrediction::Sidon { d: *d }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExponentsInput {
    Family {
        prediction: ClosedFormPrediction,
        p_exp: Option<Exponent<Exact>>,
    },
    Manual {
        d: usize,
        alpha: Exact,
        p_exp: Exponent<Exact>,
        s: Exact,
        s_inf: Exact,
    },
}

/// Where a command's input comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Family { descriptor: SetDescriptor, p: u64 },
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    BuildSet { descriptor: SetDescriptor, p: u64 },
    Transform { source: Source, inverse: bool },
    SalemProfile { descriptor: SetDescriptor },
    SalemFit { descriptor: SetDescriptor },
    Exponents(ExponentsInput),
    ExtNorm { source: Source },
    Sweep { descriptor: SetDescriptor },
    Verify { suites: Vec<String>, inject_fault: bool },
}

/// Fully parsed and validated run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: &'static str,
    pub task: Task,
    pub field_sizes: Vec<u64>,
    pub p_grid: Vec<Exponent<f64>>,
    pub q_grid: Vec<f64>,
    pub seed: u64,
    pub extension: ExtensionConfig,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub cap: usize,
    pub threads: Option<usize>,
    pub timestamp: bool,
    /// Canonical values of everything that affects the output.
    pub echo: BTreeMap<String, String>,
}

pub const SUITES: [&str; 9] = [
    "field", "fourier", "dft", "hamming", "salem", "universal", "thresholds", "sidon", "extension",
];

/// Collects parse errors instead of stopping at the first.
#[derive(Default)]
struct Checker {
    errors: Vec<String>,
}

impl Checker {
    fn fail(&mut self, msg: impl Into<String>) {
        self.errors.push(msg.into());
    }

    fn parse<T: FromStr>(&mut self, flag: &str, raw: Option<&String>) -> Option<T> {
        let raw = raw?;
        match raw.trim().parse::<T>() {
            Ok(v) => Some(v),
            Err(_) => {
                self.fail(format!("--{flag}: cannot parse `{raw}`"));
                None
            }
        }
    }

    fn require<T>(&mut self, flag: &str, family: &str, v: Option<T>, given: bool) -> Option<T> {
        if v.is_none() && !given {
            self.fail(format!("--{flag} is required for family {family}"));
        }
        v
    }

    fn list<T>(&mut self, flag: &str, raw: &str, mut f: impl FnMut(&str) -> Result<T, String>) -> Vec<T> {
        let mut out = Vec::new();
        for item in raw.split(',').map(str::trim) {
            if item.is_empty() {
                self.fail(format!("--{flag}: empty entry in `{raw}`"));
                continue;
            }
            match f(item) {
                Ok(v) => out.push(v),
                Err(e) => self.fail(format!("--{flag}: {e}")),
            }
        }
        out
    }

    fn prime(&mut self, flag: &str, p: u64) -> bool {
        match PrimeField::new(p) {
            Ok(_) => true,
            Err(e) => {
                self.fail(format!("--{flag}: {e}"));
                false
            }
        }
    }
}

const FAMILY_KEYS: [&str; 9] = ["p", "d", "k", "m", "n", "r", "j", "target", "density"];

fn family_raw(f: &FamilyArgs, key: &str) -> Option<String> {
    match key {
        "p" => f.p.clone(),
        "d" => f.d.clone(),
        "k" => f.k.clone(),
        "m" => f.m.clone(),
        "n" => f.n.clone(),
        "r" => f.r.clone(),
        "j" => f.j.clone(),
        "target" => f.target.clone(),
        "density" => f.density.clone(),
        _ => None,
    }
}

/// Parses `--family` and its parameters. `allowed_extra` lists keys the
/// command uses itself (such as `p`).
fn parse_family(ck: &mut Checker, f: &FamilyArgs, seed: u64, allowed_extra: &[&str], allow_sidon: bool) -> Option<FamilyChoice> {
    let Some(name) = f.family.as_deref() else {
        ck.fail("--family is required");
        return None;
    };
    let used: &[&str] = match name {
        "sphere" => &["k", "r"],
        "sphere-product" => &["k", "m"],
        "zero-sphere-product" | "sidon-parabola" | "embedded-sidon" => &[],
        "hamming" => &["d", "j"],
        "sidon-greedy" => &["d", "target"],
        "cutoff-cylinder" => &["n", "m", "k"],
        "full-space" | "origin" => &["d"],
        "random" => &["d", "density"],
        "sidon" if allow_sidon => &["d"],
        other => {
            ck.fail(format!("--family: unknown family `{other}`"));
            return None;
        }
    };
    for key in FAMILY_KEYS {
        if family_raw(f, key).is_some() && !used.contains(&key) && !allowed_extra.contains(&key) {
            ck.fail(format!("--{key} is not a parameter of family {name}"));
        }
    }
    let get = |ck: &mut Checker, key: &str| -> Option<usize> { ck.parse(key, family_raw(f, key).as_ref()) };
    let req = |ck: &mut Checker, key: &str| -> Option<usize> {
        let raw = family_raw(f, key);
        let v = ck.parse(key, raw.as_ref());
        ck.require(key, name, v, raw.is_some())
    };
    let choice = match name {
        "sphere" => {
            let k = req(ck, "k");
            let r = get(ck, "r").unwrap_or(1) as u32;
            FamilyChoice::Set(SetDescriptor::Sphere { k: k?, r })
        }
        "sphere-product" => {
            let (k, m) = (req(ck, "k"), req(ck, "m"));
            FamilyChoice::Set(SetDescriptor::SphereProduct { k: k?, m: m? })
        }
        "zero-sphere-product" => FamilyChoice::Set(SetDescriptor::ZeroSphereProduct),
        "sidon-parabola" => FamilyChoice::Set(SetDescriptor::SidonParabola),
        "embedded-sidon" => FamilyChoice::Set(SetDescriptor::EmbeddedSidon),
        "hamming" => {
            let d = req(ck, "d");
            let j = get(ck, "j").unwrap_or(1) as u32;
            FamilyChoice::Set(SetDescriptor::Hamming { d: d?, j })
        }
        "sidon-greedy" => {
            let (d, target) = (req(ck, "d"), req(ck, "target"));
            FamilyChoice::Set(SetDescriptor::SidonGreedy { d: d?, target: target?, seed })
        }
        "cutoff-cylinder" => {
            let (n, m, k) = (req(ck, "n"), req(ck, "m"), req(ck, "k"));
            FamilyChoice::Set(SetDescriptor::CutoffCylinder { n: n?, m: m?, k: k? })
        }
        "full-space" => FamilyChoice::Set(SetDescriptor::FullSpace { d: req(ck, "d")? }),
        "origin" => FamilyChoice::Set(SetDescriptor::Origin { d: req(ck, "d")? }),
        "random" => {
            let d = req(ck, "d");
            let raw = f.density.clone();
            let density: Option<f64> = ck.parse("density", raw.as_ref());
            let density = ck.require("density", name, density, raw.is_some())?;
            if !(density > 0.0 && density <= 1.0) {
                ck.fail(format!("--density must lie in (0, 1], got {density}"));
            }
            FamilyChoice::Set(SetDescriptor::Random { d: d?, density, seed })
        }
        "sidon" => FamilyChoice::Sidon { d: get(ck, "d").unwrap_or(2) },
        _ => unreachable!("names checked above"),
    };
    if let FamilyChoice::Set(desc) = &choice {
        if desc.dimension() == 0 {
            ck.fail(format!("family {name} needs a positive dimension"));
        }
    }
    Some(choice)
}

fn set_family(ck: &mut Checker, f: &FamilyArgs, seed: u64, extra: &[&str]) -> Option<SetDescriptor> {
    match parse_family(ck, f, seed, extra, false)? {
        FamilyChoice::Set(desc) => Some(desc),
        FamilyChoice::Sidon { .. } => None,
    }
}

fn single_p(ck: &mut Checker, f: &FamilyArgs) -> Option<u64> {
    let raw = f.p.clone();
    let Some(p) = ck.parse::<u64>("p", raw.as_ref()) else {
        if raw.is_none() {
            ck.fail("--p is required");
        }
        return None;
    };
    ck.prime("p", p).then_some(p)
}

fn parse_q(item: &str) -> Result<f64, String> {
    let q: Exponent<f64> = item.parse().map_err(|e: Error| e.to_string())?;
    match q {
        Exponent::Finite(q) if q >= 2.0 => Ok(q),
        Exponent::Finite(q) => Err(format!("q must be at least 2, got {q}")),
        Exponent::Infinity => Err("q must be finite".into()),
    }
}

fn sorted_exponents(mut v: Vec<Exponent<f64>>) -> Vec<Exponent<f64>> {
    v.sort_by(|a, b| a.as_f64().total_cmp(&b.as_f64()));
    v.dedup();
    v
}

fn exp_string(e: &Exponent<f64>) -> String {
    match e {
        Exponent::Infinity => "inf".into(),
        Exponent::Finite(x) => num(*x),
    }
}

fn join<T>(v: &[T], f: impl Fn(&T) -> String) -> String {
    v.iter().map(f).collect::<Vec<_>>().join(",")
}

fn no_flag(ck: &mut Checker, cmd: &str, flag: &str, given: bool) {
    if given {
        ck.fail(format!("--{flag} is not used by {cmd}"));
    }
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let mut ck = Checker::default();
        let (name, common): (&'static str, &CommonArgs) = match &cli.command {
            Command::BuildSet { common, .. } => ("build-set", common),
            Command::Transform { common, .. } => ("transform", common),
            Command::SalemProfile { common, .. } => ("salem-profile", common),
            Command::SalemFit { common, .. } => ("salem-fit", common),
            Command::Exponents { common, .. } => ("exponents", common),
            Command::ExtNorm { common, .. } => ("ext-norm", common),
            Command::Sweep { common, .. } => ("sweep", common),
            Command::Verify { common, .. } => ("verify", common),
        };

        let seed = ck.parse::<u64>("seed", common.seed.as_ref()).unwrap_or(0);
        let cap = ck
            .parse::<usize>("cap", common.cap.as_ref())
            .unwrap_or(DEFAULT_MAX_POINTS);
        if cap == 0 {
            ck.fail("--cap must be positive");
        }
        let env_threads = std::env::var("FFR_THREADS").ok();
        let threads = match (&common.threads, env_threads) {
            (Some(t), _) => ck.parse::<usize>("threads", Some(t)),
            (None, Some(t)) => match t.trim().parse::<usize>() {
                Ok(v) => Some(v),
                Err(_) => {
                    ck.fail(format!("FFR_THREADS: cannot parse `{t}`"));
                    None
                }
            },
            (None, None) => None,
        };
        if threads == Some(0) {
            ck.fail("thread count must be positive");
        }
        let format = match common.format.as_deref() {
            None | Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            Some(other) => {
                ck.fail(format!("--format must be csv or json, got `{other}`"));
                Format::Csv
            }
        };

        let mut grids_seen: Option<&GridArgs> = None;
        let mut ext_seen: Option<&ExtArgs> = None;
        let mut q_single: Option<&String> = None;

        let task = match &cli.command {
            Command::BuildSet { family, .. } => {
                no_flag(&mut ck, name, "format", common.format.is_some());
                let desc = set_family(&mut ck, family, seed, &["p"]);
                let p = single_p(&mut ck, family);
                desc.zip(p).map(|(descriptor, p)| Task::BuildSet { descriptor, p })
            }
            Command::Transform { family, input, direction, .. } => {
                if format == Format::Json {
                    ck.fail("transform writes CSV only");
                }
                let inverse = match direction.as_deref() {
                    None | Some("forward") => false,
                    Some("inverse") => true,
                    Some(other) => {
                        ck.fail(format!("--direction must be forward or inverse, got `{other}`"));
                        false
                    }
                };
                source(&mut ck, family, input, seed).map(|source| Task::Transform { source, inverse })
            }
            Command::SalemProfile { family, grids, .. } => {
                grids_seen = Some(grids);
                set_family(&mut ck, family, seed, &[]).map(|descriptor| Task::SalemProfile { descriptor })
            }
            Command::SalemFit { family, grids, .. } => {
                grids_seen = Some(grids);
                set_family(&mut ck, family, seed, &[]).map(|descriptor| Task::SalemFit { descriptor })
            }
            Command::Exponents { family, alpha, p_exp, s, s_inf, .. } => {
                if format == Format::Csv && common.format.is_some() {
                    ck.fail("exponents writes JSON only");
                }
                exponents_input(&mut ck, family, alpha, p_exp, s, s_inf, seed).map(Task::Exponents)
            }
            Command::ExtNorm { family, input, q, ext, .. } => {
                ext_seen = Some(ext);
                q_single = q.as_ref();
                if q.is_none() {
                    ck.fail("--q is required");
                }
                source(&mut ck, family, input, seed).map(|source| Task::ExtNorm { source })
            }
            Command::Sweep { family, grids, q, ext, .. } => {
                grids_seen = Some(grids);
                ext_seen = Some(ext);
                q_single = q.as_ref();
                if q.is_none() && grids.q_grid.is_none() {
                    ck.fail("--q or --q-grid is required");
                }
                set_family(&mut ck, family, seed, &[]).map(|descriptor| Task::Sweep { descriptor })
            }
            Command::Verify { suite, inject_fault, .. } => {
                let suites = match suite {
                    None => SUITES.iter().map(|s| s.to_string()).collect(),
                    Some(raw) => ck.list("suite", raw, |s| {
                        if SUITES.contains(&s) {
                            Ok(s.to_string())
                        } else {
                            Err(format!("unknown suite `{s}`; known: {}", SUITES.join(", ")))
                        }
                    }),
                };
                Some(Task::Verify { suites, inject_fault: *inject_fault })
            }
        };

        let mut field_sizes = DEFAULT_FIELD_SIZES.to_vec();
        let mut p_grid = Vec::new();
        let mut q_grid = Vec::new();
        if let Some(g) = grids_seen {
            if let Some(raw) = &g.field_sizes {
                field_sizes = ck.list("field-sizes", raw, |s| {
                    let p: u64 = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
                    PrimeField::new(p).map_err(|e| e.to_string())?;
                    Ok(p)
                });
            }
            field_sizes.sort_unstable();
            field_sizes.dedup();
            let needs_fit = matches!(name, "salem-fit" | "sweep");
            if needs_fit && field_sizes.len() < MIN_FIELD_SIZES {
                ck.fail(
                    Error::TooFewFieldSizes {
                        required: MIN_FIELD_SIZES,
                        got: field_sizes.len(),
                    }
                    .to_string(),
                );
            }
            if name == "sweep" {
                no_flag(&mut ck, name, "p-grid", g.p_grid.is_some());
            } else {
                let raw = g.p_grid.as_deref().unwrap_or(DEFAULT_P_GRID);
                p_grid = sorted_exponents(ck.list("p-grid", raw, |s| {
                    let e: Exponent<f64> = s.parse().map_err(|e: Error| e.to_string())?;
                    e.require_at_least(1.0).map_err(|e| e.to_string())?;
                    Ok(e)
                }));
                no_flag(&mut ck, name, "q-grid", g.q_grid.is_some());
            }
            if let Some(raw) = &g.q_grid {
                if name == "sweep" {
                    q_grid = ck.list("q-grid", raw, parse_q);
                }
            }
        }
        if let Some(raw) = q_single {
            q_grid.extend(ck.list("q", raw, parse_q));
        }
        q_grid.sort_by(f64::total_cmp);
        q_grid.dedup();

        let mut extension = ExtensionConfig::default();
        if let Some(e) = ext_seen {
            if let Some(raw) = &e.seeds {
                extension.seeds = ck.list("seeds", raw, |s| s.parse::<u64>().map_err(|_| format!("`{s}` is not a seed")));
            }
            if let Some(v) = ck.parse::<usize>("max-iter", e.max_iter.as_ref()) {
                extension.max_iter = v;
            }
            if let Some(v) = ck.parse::<f64>("tol", e.tol.as_ref()) {
                extension.tol = v;
            }
            if let Err(e) = extension.validate() {
                ck.fail(e.to_string());
            }
        }

        let task = match task {
            Some(t) if ck.errors.is_empty() => t,
            _ => {
                if ck.errors.is_empty() {
                    ck.fail("incomplete configuration");
                }
                return Err(CliError::Config(ck.errors));
            }
        };

        let mut cfg = RunConfig {
            command: name,
            task,
            field_sizes,
            p_grid,
            q_grid,
            seed,
            extension,
            out: common.out.as_ref().map(PathBuf::from),
            format,
            cap,
            threads,
            timestamp: common.timestamp,
            echo: BTreeMap::new(),
        };
        cfg.echo = cfg.build_echo(ext_seen.is_some(), grids_seen.is_some());
        Ok(cfg)
    }

    fn build_echo(&self, ext: bool, grids: bool) -> BTreeMap<String, String> {
        let mut e = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            e.insert(k.to_string(), v);
        };
        put("seed", self.seed.to_string());
        put("cap", self.cap.to_string());
        let family = |put: &mut dyn FnMut(&str, String), d: &SetDescriptor| {
            put("family", d.family_name().to_string());
            put("params", d.params_string());
        };
        match &self.task {
            Task::BuildSet { descriptor, p } => {
                family(&mut put, descriptor);
                put("p", p.to_string());
            }
            Task::Transform { source, .. } | Task::ExtNorm { source } => {
                match source {
                    Source::Family { descriptor, p } => {
                        family(&mut put, descriptor);
                        put("p", p.to_string());
                    }
                    Source::File(path) => put("input", path.display().to_string()),
                }
                if let Task::Transform { inverse, .. } = self.task {
                    put("direction", if inverse { "inverse" } else { "forward" }.into());
                }
            }
            Task::SalemProfile { descriptor } | Task::SalemFit { descriptor } | Task::Sweep { descriptor } => {
                family(&mut put, descriptor);
            }
            Task::Exponents(input) => match input {
                ExponentsInput::Family { prediction, p_exp } => {
                    put("family", prediction.family_name().to_string());
                    put("prediction", serde_json::to_string(prediction).unwrap_or_default());
                    if let Some(p) = p_exp {
                        put("p-exp", exact_exp(p));
                    }
                }
                ExponentsInput::Manual { d, alpha, p_exp, s, s_inf } => {
                    put("d", d.to_string());
                    put("alpha", ffr_core::ExactScalar::to_exact_string(alpha));
                    put("p-exp", exact_exp(p_exp));
                    put("s", ffr_core::ExactScalar::to_exact_string(s));
                    put("s-inf", ffr_core::ExactScalar::to_exact_string(s_inf));
                }
            },
            Task::Verify { suites, inject_fault } => {
                put("suite", suites.join(","));
                put("inject-fault", inject_fault.to_string());
            }
        }
        if grids {
            put("field-sizes", join(&self.field_sizes, |p| p.to_string()));
            if !self.p_grid.is_empty() {
                put("p-grid", join(&self.p_grid, exp_string));
            }
        }
        if !self.q_grid.is_empty() {
            put("q-grid", join(&self.q_grid, |q| num(*q)));
        }
        if ext {
            put("seeds", join(&self.extension.seeds, |s| s.to_string()));
            put("max-iter", self.extension.max_iter.to_string());
            put("tol", num(self.extension.tol));
        }
        e
    }
}

pub fn exact_exp(e: &Exponent<Exact>) -> String {
    match e {
        Exponent::Infinity => "inf".into(),
        Exponent::Finite(x) => ffr_core::ExactScalar::to_exact_string(x),
    }
}

fn source(ck: &mut Checker, family: &FamilyArgs, input: &Option<String>, seed: u64) -> Option<Source> {
    match input {
        Some(path) => {
            if family.family.is_some() || FAMILY_KEYS.iter().any(|k| family_raw(family, k).is_some()) {
                ck.fail("--input cannot be combined with family options");
            }
            Some(Source::File(PathBuf::from(path)))
        }
        None => {
            let desc = set_family(ck, family, seed, &["p"]);
            let p = single_p(ck, family);
            Some(Source::Family { descriptor: desc?, p: p? })
        }
    }
}

fn rational(ck: &mut Checker, flag: &str, raw: &Option<String>) -> Option<Exact> {
    let raw = raw.as_ref()?;
    match parse_rational(raw) {
        Ok(v) => Some(v),
        Err(e) => {
            ck.fail(format!("--{flag}: {e}"));
            None
        }
    }
}

fn exact_exponent(ck: &mut Checker, raw: &Option<String>) -> Option<Exponent<Exact>> {
    let raw = raw.as_ref()?;
    match raw.parse::<Exponent<Exact>>() {
        Ok(e) => {
            if let Exponent::Finite(v) = &e {
                if *v < <Exact as ffr_core::ExactScalar>::from_int(1) {
                    ck.fail(format!("--p-exp must be at least 1, got {raw}"));
                }
            }
            Some(e)
        }
        Err(e) => {
            ck.fail(format!("--p-exp: {e}"));
            None
        }
    }
}

fn exponents_input(
    ck: &mut Checker,
    family: &FamilyArgs,
    alpha: &Option<String>,
    p_exp: &Option<String>,
    s: &Option<String>,
    s_inf: &Option<String>,
    seed: u64,
) -> Option<ExponentsInput> {
    let p = exact_exponent(ck, p_exp);
    if family.family.is_some() {
        for (flag, v) in [("alpha", alpha), ("s", s), ("s-inf", s_inf)] {
            if v.is_some() {
                ck.fail(format!("--{flag} only applies without --family"));
            }
        }
        if family.p.is_some() {
            ck.fail("--p is not used by exponents; use --p-exp for the averaging exponent");
        }
        let choice = parse_family(ck, family, seed, &[], true)?;
        let Some(prediction) = choice.prediction() else {
            ck.fail(format!("family {} has no closed-form Salem exponent", choice.name()));
            return None;
        };
        if let Err(e) = prediction.validate() {
            ck.fail(format!("family {}: {e}", choice.name()));
            return None;
        }
        return Some(ExponentsInput::Family { prediction, p_exp: p });
    }
    for key in FAMILY_KEYS.iter().filter(|k| **k != "d") {
        if family_raw(family, key).is_some() {
            ck.fail(format!("--{key} needs --family"));
        }
    }
    let d: Option<usize> = ck.parse("d", family.d.as_ref());
    let alpha = rational(ck, "alpha", alpha);
    let s = rational(ck, "s", s);
    let s_inf = rational(ck, "s-inf", s_inf);
    let mut missing = Vec::new();
    for (flag, present) in [
        ("d", family.d.is_some()),
        ("alpha", alpha.is_some()),
        ("p-exp", p_exp.is_some()),
        ("s", s.is_some()),
        ("s-inf", s_inf.is_some()),
    ] {
        if !present {
            missing.push(format!("--{flag}"));
        }
    }
    if !missing.is_empty() {
        ck.fail(format!("either --family or all of --d --alpha --p-exp --s --s-inf; missing {}", missing.join(" ")));
    }
    let zero = <Exact as ffr_core::ExactScalar>::from_int(0);
    let one = <Exact as ffr_core::ExactScalar>::from_int(1);
    if let (Some(d), Some(a)) = (d, &alpha) {
        if d == 0 || *a <= zero || *a > <Exact as ffr_core::ExactScalar>::from_int(d as i64) {
            ck.fail(format!("--alpha must lie in (0, d], got {a} with d = {d}"));
        }
    }
    for (flag, v) in [("s", &s), ("s-inf", &s_inf)] {
        if let Some(v) = v {
            if *v < zero || *v > one {
                ck.fail(format!("--{flag} must lie in [0, 1], got {v}"));
            }
        }
    }
    Some(ExponentsInput::Manual {
        d: d?,
        alpha: alpha?,
        p_exp: p?,
        s: s?,
        s_inf: s_inf?,
    })
}
