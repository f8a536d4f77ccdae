//! On-disk formats: set files, function/profile/fit/sweep CSV, JSON reports.
//!
//! CSV outputs start with one `# {json}` envelope line; sweep CSV also ends
//! with a `# {json}` summary line. Every writer has a matching reader.

use std::collections::BTreeMap;

use ffr_core::ensembles::{PointSet, SetDescriptor};
use ffr_core::field::{PrimeField, VectorSpace};
use ffr_core::{Complex, GridFunction};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::{Map, Value};

use crate::CliError;

pub const TOOL: &str = "ffr";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// 17 significant digits; `inf`, `-inf` and `nan` spelled out.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn sci<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&num(*x))
}

fn sci_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&num(*v)),
        None => s.serialize_str(""),
    }
}

fn parse_err(what: &str, detail: impl std::fmt::Display) -> CliError {
    CliError::Parse(format!("{what}: {detail}"))
}

/// Provenance attached to every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub config: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub meta: Map<String, Value>,
}

impl Envelope {
    pub fn new(command: &str, config: BTreeMap<String, String>, timestamp: bool) -> Self {
        let timestamp = timestamp.then(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
        Self {
            tool: TOOL.into(),
            version: VERSION.into(),
            command: command.into(),
            timestamp,
            config,
            meta: Map::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: Value) -> Self {
        self.meta.insert(key.into(), value);
        self
    }

    fn comment_line(&self) -> String {
        format!("# {}\n", serde_json::to_string(self).expect("envelope serializes"))
    }
}

fn split_comment_header(text: &str) -> Result<(Envelope, &str), CliError> {
    let (first, rest) = text.split_once('\n').unwrap_or((text, ""));
    let json = first
        .strip_prefix("# ")
        .ok_or_else(|| parse_err("csv", "missing `# {…}` envelope line"))?;
    let env = serde_json::from_str(json).map_err(|e| parse_err("envelope", e))?;
    Ok((env, rest))
}

fn write_csv<R: Serialize>(rows: &[R], header: &[&str]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

fn read_csv<R: for<'de> Deserialize<'de>>(body: &str, header: &[&str], what: &str) -> Result<Vec<R>, CliError> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(body.as_bytes());
    let got = r.headers().map_err(|e| parse_err(what, e))?.clone();
    if got.iter().collect::<Vec<_>>() != header {
        return Err(parse_err(what, format!("unexpected columns {:?}", got)));
    }
    r.deserialize()
        .collect::<Result<Vec<R>, _>>()
        .map_err(|e| parse_err(what, e))
}

// ---------------------------------------------------------------------------
// Set files

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetHeader {
    pub p: u32,
    pub d: usize,
    #[serde(flatten)]
    pub descriptor: SetDescriptor,
    pub cardinality: usize,
    #[serde(flatten)]
    pub envelope: Envelope,
}

/// JSON header line, then sorted flat indices one per line.
pub fn write_set_file(header: &SetHeader, set: &PointSet) -> String {
    let mut out = serde_json::to_string(header).expect("header serializes");
    out.push('\n');
    for i in set.indices() {
        out.push_str(&i.to_string());
        out.push('\n');
    }
    out
}

pub fn read_set_file(text: &str, cap: usize) -> Result<(SetHeader, PointSet), CliError> {
    let mut lines = text.lines();
    let header: SetHeader = serde_json::from_str(lines.next().unwrap_or(""))
        .map_err(|e| parse_err("set file header", e))?;
    let field = PrimeField::new(header.p as u64).map_err(CliError::Compute)?;
    let space = VectorSpace::with_cap(field, header.d, cap).map_err(CliError::Compute)?;
    let mut indices = Vec::new();
    let mut prev = None;
    for (n, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let i: usize = line
            .trim()
            .parse()
            .map_err(|_| parse_err("set file", format!("line {}: `{line}` is not an index", n + 2)))?;
        if prev.is_some_and(|p| i <= p) {
            return Err(parse_err("set file", format!("line {}: indices must increase", n + 2)));
        }
        prev = Some(i);
        indices.push(i);
    }
    if indices.len() != header.cardinality {
        return Err(parse_err(
            "set file",
            format!("header says {} points, found {}", header.cardinality, indices.len()),
        ));
    }
    let set = PointSet::from_indices(space, indices).map_err(CliError::Compute)?;
    Ok((header, set))
}

// ---------------------------------------------------------------------------
// Functions

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueRow {
    pub index: usize,
    #[serde(serialize_with = "sci")]
    pub re: f64,
    #[serde(serialize_with = "sci")]
    pub im: f64,
}

const FUNCTION_COLUMNS: [&str; 3] = ["index", "re", "im"];

/// Envelope meta carries `p` and `d`.
pub fn write_function_csv(env: Envelope, f: &GridFunction<f64>) -> Result<String, CliError> {
    let env = env
        .with_meta("p", Value::from(f.space().p()))
        .with_meta("d", Value::from(f.space().dimension()));
    let rows: Vec<ValueRow> = f
        .values()
        .iter()
        .enumerate()
        .map(|(index, z)| ValueRow { index, re: z.re, im: z.im })
        .collect();
    Ok(env.comment_line() + &write_csv(&rows, &FUNCTION_COLUMNS)?)
}

pub fn read_function_csv(text: &str, cap: usize) -> Result<(Envelope, GridFunction<f64>), CliError> {
    let (env, body) = split_comment_header(text)?;
    let meta_int = |k: &str| {
        env.meta
            .get(k)
            .and_then(Value::as_u64)
            .ok_or_else(|| parse_err("function csv", format!("envelope lacks `{k}`")))
    };
    let (p, d) = (meta_int("p")?, meta_int("d")? as usize);
    let field = PrimeField::new(p).map_err(CliError::Compute)?;
    let space = VectorSpace::with_cap(field, d, cap).map_err(CliError::Compute)?;
    let rows: Vec<ValueRow> = read_csv(body, &FUNCTION_COLUMNS, "function csv")?;
    let mut values = vec![Complex::new(0.0, 0.0); space.size()];
    let mut seen = vec![false; space.size()];
    for r in rows {
        if r.index >= space.size() || seen[r.index] {
            return Err(parse_err("function csv", format!("bad or repeated index {}", r.index)));
        }
        seen[r.index] = true;
        values[r.index] = Complex::new(r.re, r.im);
    }
    if seen.iter().any(|s| !s) {
        return Err(parse_err("function csv", "missing indices"));
    }
    let f = GridFunction::new(space, values).map_err(CliError::Compute)?;
    Ok((env, f))
}

// ---------------------------------------------------------------------------
// Profiles and fits

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub family: String,
    pub params: String,
    pub p: u32,
    pub d: usize,
    #[serde(serialize_with = "sci")]
    pub p_exp: f64,
    #[serde(serialize_with = "sci")]
    pub norm: f64,
    #[serde(serialize_with = "sci")]
    pub log_set_size: f64,
    #[serde(serialize_with = "sci")]
    pub log_norm: f64,
}

pub const PROFILE_COLUMNS: [&str; 8] = ["family", "params", "p", "d", "p_exp", "norm", "log_set_size", "log_norm"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub family: String,
    pub params: String,
    #[serde(serialize_with = "sci")]
    pub p_exp: f64,
    #[serde(serialize_with = "sci")]
    pub fitted_s: f64,
    #[serde(serialize_with = "sci")]
    pub stderr: f64,
    pub n_points: usize,
    #[serde(serialize_with = "sci_opt")]
    pub predicted_s: Option<f64>,
}

pub const FIT_COLUMNS: [&str; 7] = ["family", "params", "p_exp", "fitted_s", "stderr", "n_points", "predicted_s"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub family: String,
    pub params: String,
    pub p: u32,
    pub d: usize,
    #[serde(serialize_with = "sci")]
    pub q: f64,
    #[serde(serialize_with = "sci")]
    pub lower_bound: f64,
    pub witness_tag: String,
    pub converged: bool,
    pub iters: usize,
    pub regime: String,
}

pub const SWEEP_COLUMNS: [&str; 10] = [
    "family", "params", "p", "d", "q", "lower_bound", "witness_tag", "converged", "iters", "regime",
];

/// Growth fit for one `q`, written as the trailing summary line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub q: String,
    pub slope: String,
    pub stderr: String,
    pub regime: String,
    pub n_points: usize,
}

/// Rows as CSV or as one JSON document.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub fn write_rows<R: Serialize>(
    env: Envelope,
    rows: &[R],
    columns: &[&str],
    summary: &[SweepSummary],
    format: Format,
) -> Result<String, CliError> {
    match format {
        Format::Csv => {
            let mut out = env.comment_line() + &write_csv(rows, columns)?;
            if !summary.is_empty() {
                let s = serde_json::json!({ "summary": summary });
                out.push_str(&format!("# {s}\n"));
            }
            Ok(out)
        }
        Format::Json => {
            let doc = serde_json::json!({
                "envelope": env,
                "rows": serde_json::to_value(rows).map_err(|e| CliError::Io(e.to_string()))?,
                "summary": summary,
            });
            let mut s = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}

/// Parses CSV or JSON written by [`write_rows`].
pub fn read_rows<R: for<'de> Deserialize<'de>>(
    text: &str,
    columns: &[&str],
    what: &str,
) -> Result<(Envelope, Vec<R>, Vec<SweepSummary>), CliError> {
    if text.starts_with('{') {
        // numbers are strings in both encodings; reuse the CSV parsing rules
        let raw: Value = serde_json::from_str(text).map_err(|e| parse_err(what, e))?;
        let envelope: Envelope = serde_json::from_value(raw["envelope"].clone()).map_err(|e| parse_err(what, e))?;
        let summary: Vec<SweepSummary> =
            serde_json::from_value(raw.get("summary").cloned().unwrap_or(Value::Array(vec![])))
                .map_err(|e| parse_err(what, e))?;
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        w.write_record(columns).map_err(|e| parse_err(what, e))?;
        for row in raw["rows"].as_array().ok_or_else(|| parse_err(what, "rows must be an array"))? {
            let obj = row.as_object().ok_or_else(|| parse_err(what, "rows must be objects"))?;
            let rec: Vec<String> = columns
                .iter()
                .map(|c| match obj.get(*c) {
                    Some(Value::String(s)) => s.clone(),
                    Some(v) => v.to_string(),
                    None => String::new(),
                })
                .collect();
            w.write_record(&rec).map_err(|e| parse_err(what, e))?;
        }
        let bytes = w.into_inner().map_err(|e| parse_err(what, e))?;
        let body = String::from_utf8(bytes).map_err(|e| parse_err(what, e))?;
        let rows = read_csv(&body, columns, what)?;
        return Ok((envelope, rows, summary));
    }
    let (env, body) = split_comment_header(text)?;
    let rows = read_csv(body, columns, what)?;
    let summary = body
        .lines()
        .filter_map(|l| l.strip_prefix("# "))
        .filter_map(|l| serde_json::from_str::<Value>(l).ok())
        .filter_map(|v| v.get("summary").cloned())
        .map(serde_json::from_value::<Vec<SweepSummary>>)
        .next()
        .transpose()
        .map_err(|e| parse_err(what, e))?
        .unwrap_or_default();
    Ok((env, rows, summary))
}

// ---------------------------------------------------------------------------
// Threshold reports

/// JSON document of the exponent calculator; rationals as `num/den`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentDoc {
    pub envelope: Envelope,
    pub report: BTreeMap<String, Value>,
}

pub fn write_exponents(doc: &ExponentDoc) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(doc).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn read_exponents(text: &str) -> Result<ExponentDoc, CliError> {
    serde_json::from_str(text).map_err(|e| parse_err("exponents report", e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env() -> Envelope {
        let mut c = BTreeMap::new();
        c.insert("family".into(), "hamming".into());
        Envelope::new("test", c, false)
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 1e300, f64::MIN_POSITIVE, 0.0] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!("inf".parse::<f64>().unwrap(), f64::INFINITY);
        assert_eq!(num(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn fit_rows_round_trip_both_formats() {
        let rows = vec![
            FitRow {
                family: "hamming".into(),
                params: "d=4;j=1".into(),
                p_exp: f64::INFINITY,
                fitted_s: 1.0 / 3.0,
                stderr: 1e-17,
                n_points: 5,
                predicted_s: Some(1.0 / 3.0),
            },
            FitRow {
                family: "random".into(),
                params: "d=2".into(),
                p_exp: 2.0,
                fitted_s: 0.25,
                stderr: 0.0,
                n_points: 4,
                predicted_s: None,
            },
        ];
        for format in [Format::Csv, Format::Json] {
            let text = write_rows(env(), &rows, &FIT_COLUMNS, &[], format).unwrap();
            let (e, back, _) = read_rows::<FitRow>(&text, &FIT_COLUMNS, "fit").unwrap();
            assert_eq!(e, env());
            assert_eq!(back, rows);
        }
    }

    #[test]
    fn sweep_summary_survives() {
        let rows = vec![SweepRow {
            family: "hamming".into(),
            params: "d=2;j=1".into(),
            p: 5,
            d: 2,
            q: 6.0,
            lower_bound: 1.25,
            witness_tag: "dirac:3".into(),
            converged: true,
            iters: 4,
            regime: "bounded".into(),
        }];
        let summary = vec![SweepSummary {
            q: num(6.0),
            slope: num(-0.01),
            stderr: num(0.001),
            regime: "bounded".into(),
            n_points: 4,
        }];
        for format in [Format::Csv, Format::Json] {
            let text = write_rows(env(), &rows, &SWEEP_COLUMNS, &summary, format).unwrap();
            let (_, back, s) = read_rows::<SweepRow>(&text, &SWEEP_COLUMNS, "sweep").unwrap();
            assert_eq!(back, rows);
            assert_eq!(s, summary);
        }
    }

    #[test]
    fn rejects_wrong_columns() {
        let text = "# {\"tool\":\"ffr\",\"version\":\"0\",\"command\":\"x\",\"config\":{}}\na,b\n1,2\n";
        assert!(read_rows::<FitRow>(text, &FIT_COLUMNS, "fit").is_err());
        assert!(read_rows::<FitRow>("a,b\n", &FIT_COLUMNS, "fit").is_err());
    }
}
