//! Machine-readable and tabular report output.
//!
//! CSV and JSON share one flat row schema, in this column order:
//! `theorem_id, a, b, x, n, p, q, measured, bound, slack_ratio,
//! hypothesis_ok, holds`. Reals carry 17 significant digits; parameters that
//! do not apply to a row are empty (CSV) or `null` (JSON); non-finite values
//! are written as `inf`, `-inf` or `nan` (strings in JSON).
//!
//! Identity checks map onto the same schema: `measured` is the residual,
//! `bound` the acceptance threshold `tol * scale`, and `holds` the verdict.

use std::fmt::Write as _;

use serde_json::{Map, Number, Value};

use crate::bounds::{dominates, slack_ratio, BoundReport, DEFAULT_HOLDS_TOL};
use crate::error::{Error, Result};
use crate::identity::IdentityReport;
use crate::search::TightnessResult;

pub const COLUMNS: [&str; 12] = [
    "theorem_id",
    "a",
    "b",
    "x",
    "n",
    "p",
    "q",
    "measured",
    "bound",
    "slack_ratio",
    "hypothesis_ok",
    "holds",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Table,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "table" => Ok(Format::Table),
            other => Err(Error::InvalidInput(format!("unknown format `{other}`"))),
        }
    }
}

/// Anything that can be reported.
#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Identity(IdentityReport),
    Bound(BoundReport),
    Tightness(TightnessResult),
}

impl From<IdentityReport> for Report {
    fn from(r: IdentityReport) -> Self {
        Report::Identity(r)
    }
}

impl From<BoundReport> for Report {
    fn from(r: BoundReport) -> Self {
        Report::Bound(r)
    }
}

impl From<TightnessResult> for Report {
    fn from(r: TightnessResult) -> Self {
        Report::Tightness(r)
    }
}

impl Report {
    /// Identity rows must pass; bound rows must hold whenever their
    /// hypothesis does.
    pub fn passes(&self) -> bool {
        let row = self.row();
        !row.hypothesis_ok || row.holds
    }

    pub fn row(&self) -> Row {
        match self {
            Report::Identity(r) => {
                let threshold = r.tol * r.scale;
                Row {
                    theorem_id: r.kind.label().to_string(),
                    a: r.a,
                    b: r.b,
                    x: r.x,
                    n: r.n,
                    p: None,
                    q: None,
                    measured: r.residual,
                    bound: threshold,
                    slack_ratio: slack_ratio(threshold, r.residual),
                    hypothesis_ok: true,
                    holds: r.pass,
                }
            }
            Report::Bound(r) => Row {
                theorem_id: r.theorem_id.to_string(),
                a: r.a,
                b: r.b,
                x: r.x,
                n: r.n,
                p: r.p,
                q: r.q,
                measured: r.measured_error,
                bound: r.bound,
                slack_ratio: r.slack_ratio,
                hypothesis_ok: r.hypothesis_ok,
                holds: r.holds,
            },
            Report::Tightness(r) => Row {
                theorem_id: r.theorem_id.to_string(),
                a: r.a,
                b: r.b,
                x: r.x,
                n: r.n,
                p: r.p,
                q: r.q,
                measured: r.measured_error,
                bound: r.best_bound,
                slack_ratio: r.slack_ratio,
                hypothesis_ok: r.hypothesis_ok,
                holds: dominates(r.best_bound, r.measured_error, DEFAULT_HOLDS_TOL),
            },
        }
    }
}

/// One flat output row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub theorem_id: String,
    pub a: f64,
    pub b: f64,
    pub x: Option<f64>,
    pub n: usize,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub measured: f64,
    pub bound: f64,
    pub slack_ratio: f64,
    pub hypothesis_ok: bool,
    pub holds: bool,
}

/// 17 significant digits, or `inf`/`-inf`/`nan`.
pub fn fmt_real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_real).unwrap_or_default()
}

impl Row {
    fn fields(&self) -> [String; 12] {
        [
            self.theorem_id.clone(),
            fmt_real(self.a),
            fmt_real(self.b),
            fmt_opt(self.x),
            self.n.to_string(),
            fmt_opt(self.p),
            fmt_opt(self.q),
            fmt_real(self.measured),
            fmt_real(self.bound),
            fmt_real(self.slack_ratio),
            self.hypothesis_ok.to_string(),
            self.holds.to_string(),
        ]
    }

    fn to_json(&self) -> Value {
        let real = |v: f64| -> Value {
            if v.is_finite() {
                Value::Number(fmt_real(v).parse::<Number>().expect("finite real"))
            } else {
                Value::String(fmt_real(v))
            }
        };
        let opt = |v: Option<f64>| v.map(real).unwrap_or(Value::Null);
        let mut m = Map::new();
        m.insert("theorem_id".into(), Value::String(self.theorem_id.clone()));
        m.insert("a".into(), real(self.a));
        m.insert("b".into(), real(self.b));
        m.insert("x".into(), opt(self.x));
        m.insert("n".into(), Value::from(self.n));
        m.insert("p".into(), opt(self.p));
        m.insert("q".into(), opt(self.q));
        m.insert("measured".into(), real(self.measured));
        m.insert("bound".into(), real(self.bound));
        m.insert("slack_ratio".into(), real(self.slack_ratio));
        m.insert("hypothesis_ok".into(), Value::Bool(self.hypothesis_ok));
        m.insert("holds".into(), Value::Bool(self.holds));
        Value::Object(m)
    }
}

pub fn emit_report(reports: &[Report], format: Format) -> Result<String> {
    let rows: Vec<Row> = reports.iter().map(Report::row).collect();
    match format {
        Format::Csv => emit_csv(&rows),
        Format::Json => {
            let arr = Value::Array(rows.iter().map(Row::to_json).collect());
            let mut s = serde_json::to_string_pretty(&arr).map_err(|e| Error::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Table => Ok(emit_table(reports)),
    }
}

fn emit_csv(rows: &[Row]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(COLUMNS).map_err(io)?;
    for row in rows {
        w.write_record(row.fields()).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn short(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.6e}")
    } else {
        fmt_real(v)
    }
}

fn short_opt(v: Option<f64>) -> String {
    v.map(short).unwrap_or_else(|| "-".into())
}

fn render_table(header: &[&str], rows: &[Vec<String>], out: &mut String) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>, out: &mut String| {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(header.to_vec(), out);
    for r in rows {
        line(r.iter().map(String::as_str).collect(), out);
    }
}

/// Human-readable form: consecutive reports of one kind share a table.
fn emit_table(reports: &[Report]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < reports.len() {
        let kind = std::mem::discriminant(&reports[i]);
        let mut j = i;
        while j < reports.len() && std::mem::discriminant(&reports[j]) == kind {
            j += 1;
        }
        if !out.is_empty() {
            out.push('\n');
        }
        let group = &reports[i..j];
        match &group[0] {
            Report::Identity(_) => {
                let rows: Vec<Vec<String>> = group
                    .iter()
                    .filter_map(|r| match r {
                        Report::Identity(r) => Some(vec![
                            r.kind.label().to_string(),
                            short(r.a),
                            short(r.b),
                            short_opt(r.x),
                            r.n.to_string(),
                            format!("{:.15e}", r.lhs),
                            format!("{:.15e}", r.rhs),
                            short(r.residual),
                            short(r.scale),
                            r.pass.to_string(),
                        ]),
                        _ => None,
                    })
                    .collect();
                render_table(
                    &[
                        "identity", "a", "b", "x", "n", "lhs", "rhs", "residual", "scale", "pass",
                    ],
                    &rows,
                    &mut out,
                );
            }
            _ => {
                let rows: Vec<Vec<String>> = group
                    .iter()
                    .map(|r| {
                        let row = r.row();
                        vec![
                            row.theorem_id,
                            short(row.a),
                            short(row.b),
                            short_opt(row.x),
                            row.n.to_string(),
                            short_opt(row.p),
                            short_opt(row.q),
                            short(row.measured),
                            short(row.bound),
                            short(row.slack_ratio),
                            row.hypothesis_ok.to_string(),
                            row.holds.to_string(),
                        ]
                    })
                    .collect();
                render_table(&COLUMNS, &rows, &mut out);
            }
        }
        i = j;
    }
    out
}

fn parse_real(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::InvalidInput(format!("bad real `{s}`")))
}

fn parse_opt(s: &str) -> Result<Option<f64>> {
    if s.is_empty() {
        Ok(None)
    } else {
        parse_real(s).map(Some)
    }
}

fn parse_bool(s: &str) -> Result<bool> {
    s.parse::<bool>()
        .map_err(|_| Error::InvalidInput(format!("bad boolean `{s}`")))
}

/// Read rows back from [`emit_report`]'s CSV output.
pub fn parse_csv(text: &str) -> Result<Vec<Row>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let bad = |e: csv::Error| Error::InvalidInput(e.to_string());
    let header = r.headers().map_err(bad)?.clone();
    if header.iter().ne(COLUMNS) {
        return Err(Error::InvalidInput(format!("unexpected CSV header {header:?}")));
    }
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(bad)?;
        out.push(Row {
            theorem_id: rec[0].to_string(),
            a: parse_real(&rec[1])?,
            b: parse_real(&rec[2])?,
            x: parse_opt(&rec[3])?,
            n: rec[4]
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad order `{}`", &rec[4])))?,
            p: parse_opt(&rec[5])?,
            q: parse_opt(&rec[6])?,
            measured: parse_real(&rec[7])?,
            bound: parse_real(&rec[8])?,
            slack_ratio: parse_real(&rec[9])?,
            hypothesis_ok: parse_bool(&rec[10])?,
            holds: parse_bool(&rec[11])?,
        });
    }
    Ok(out)
}

/// Read rows back from [`emit_report`]'s JSON output.
pub fn parse_json(text: &str) -> Result<Vec<Row>> {
    let bad = |msg: String| Error::InvalidInput(msg);
    let value: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let items = value.as_array().ok_or_else(|| bad("expected a JSON array".into()))?;
    let real = |v: &Value| -> Result<f64> {
        match v {
            Value::Number(n) => n.as_f64().ok_or_else(|| bad(format!("bad number {n}"))),
            Value::String(s) => parse_real(s),
            other => Err(bad(format!("expected a real, found {other}"))),
        }
    };
    let opt = |v: &Value| -> Result<Option<f64>> {
        if v.is_null() {
            Ok(None)
        } else {
            real(v).map(Some)
        }
    };
    let flag = |v: &Value| v.as_bool().ok_or_else(|| bad(format!("expected a boolean, found {v}")));
    items
        .iter()
        .map(|item| {
            let field = |k: &str| item.get(k).ok_or_else(|| bad(format!("missing key `{k}`")));
            Ok(Row {
                theorem_id: field("theorem_id")?
                    .as_str()
                    .ok_or_else(|| bad("theorem_id must be a string".into()))?
                    .to_string(),
                a: real(field("a")?)?,
                b: real(field("b")?)?,
                x: opt(field("x")?)?,
                n: field("n")?
                    .as_u64()
                    .ok_or_else(|| bad("n must be a non-negative integer".into()))? as usize,
                p: opt(field("p")?)?,
                q: opt(field("q")?)?,
                measured: real(field("measured")?)?,
                bound: real(field("bound")?)?,
                slack_ratio: real(field("slack_ratio")?)?,
                hypothesis_ok: flag(field("hypothesis_ok")?)?,
                holds: flag(field("holds")?)?,
            })
        })
        .collect()
}
