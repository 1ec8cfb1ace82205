use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Map, Value};

use super::counting::JointCountReport;
use super::scaling::ScalingReport;
use crate::error::{param, Error, Result};
use crate::intervals::{verify_partition, RkFamily};
use crate::spectra::{mu_decay_check, Angle, DecayVerdict, MuSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => param(format!("unknown format `{s}` (expected csv or json)")),
        }
    }
}

/// Outcome of a partition verification for one `(m, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub m: u32,
    pub k: usize,
    pub ok: bool,
    pub witness: Option<String>,
}

pub fn partition_report(m: u32, k: usize) -> Result<PartitionReport> {
    let family = RkFamily::build(k, m)?;
    let outcome = verify_partition(&family);
    Ok(PartitionReport {
        m,
        k,
        ok: outcome.is_ok(),
        witness: outcome.err().map(|v| v.describe()),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MuDecayReport {
    pub sequence: MuSequence,
    pub verdict: DecayVerdict,
}

pub fn mu_decay_report(sequence: MuSequence) -> Result<MuDecayReport> {
    let verdict = mu_decay_check(&sequence)?;
    Ok(MuDecayReport { sequence, verdict })
}

/// One named numerical check with the quantity compared and its bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub ok: bool,
    pub value: f64,
    pub bound: f64,
}

/// A single joint exponential sum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpSumReport {
    pub n: u64,
    pub q: u32,
    pub m: u32,
    pub theta: Angle,
    pub gamma: Angle,
    pub value: Complex64,
}

#[derive(Clone, Debug)]
pub enum Report {
    ExpSum(ExpSumReport),
    JointCount(JointCountReport),
    Scaling(ScalingReport),
    Partition(Vec<PartitionReport>),
    MuDecay(MuDecayReport),
    Checks(Vec<CheckLine>),
}

impl Report {
    /// Whether every mathematical check carried by the report passed.
    pub fn passed(&self) -> bool {
        match self {
            Report::JointCount(_) | Report::ExpSum(_) => true,
            Report::Scaling(r) => r.verdict,
            Report::Partition(rs) => rs.iter().all(|r| r.ok),
            Report::MuDecay(r) => r.verdict.ok(),
            Report::Checks(cs) => cs.iter().all(|c| c.ok),
        }
    }
}

/// Rounds to 12 significant digits; non-finite values become `null`.
fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}")
        .parse::<f64>()
        .expect("formatted float parses")
        + 0.0;
    json!(rounded)
}

fn cell(x: f64) -> String {
    if !x.is_finite() {
        return String::new();
    }
    let rounded: f64 = format!("{x:.11e}")
        .parse::<f64>()
        .expect("formatted float parses")
        + 0.0;
    if rounded == 0.0 || (1e-4..1e15).contains(&rounded.abs()) {
        rounded.to_string()
    } else {
        format!("{rounded:e}")
    }
}

fn wide(x: u128) -> Value {
    match u64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

fn partition_json(r: &PartitionReport) -> Value {
    json!({ "m": r.m, "k": r.k, "ok": r.ok, "witness": r.witness })
}

pub fn to_json(report: &Report) -> Value {
    match report {
        Report::ExpSum(r) => json!({
            "n": r.n,
            "q": r.q,
            "m": r.m,
            "theta": r.theta.to_string(),
            "gamma": r.gamma.to_string(),
            "re": num(r.value.re),
            "im": num(r.value.im),
            "abs": num(r.value.norm()),
        }),
        Report::JointCount(r) => json!({
            "q": r.q,
            "m": r.m,
            "m1": r.m1,
            "m2": r.m2,
            "n": r.n,
            "counts": r.counts,
            "expected_num": r.expected_num,
            "expected_den": r.expected_den,
            "max_deviation_num": wide(r.max_deviation_num),
            "max_deviation": num(r.max_deviation()),
            "gcd_q_ok": r.gcd_q_ok,
            "gcd_m_ok": r.gcd_m_ok,
        }),
        Report::Scaling(r) => json!({
            "target": r.target.to_string(),
            "grid": r.grid,
            "values": r.values.iter().map(|&v| num(v)).collect::<Vec<_>>(),
            "slope": num(r.slope),
            "intercept": num(r.intercept),
            "stderr": num(r.stderr),
            "residuals": r.residuals.iter().map(|&v| num(v)).collect::<Vec<_>>(),
            "verdict": r.verdict,
        }),
        Report::Partition(rs) if rs.len() == 1 => partition_json(&rs[0]),
        Report::Partition(rs) => Value::Array(rs.iter().map(partition_json).collect()),
        Report::MuDecay(r) => {
            let s = &r.sequence;
            let rows: Vec<Value> = (0..s.mu.len())
                .map(|k| {
                    json!({
                        "k": k,
                        "q": s.q[k],
                        "mu_re": num(s.mu[k].re),
                        "mu_im": num(s.mu[k].im),
                        "m_tilde": num(s.m_tilde[k]),
                        "psi_k": num(s.psi_k[k]),
                    })
                })
                .collect();
            let mut obj = Map::new();
            obj.insert("m".into(), json!(s.m));
            obj.insert("gamma".into(), json!(s.gamma.to_string()));
            obj.insert("beta".into(), json!(s.beta.to_string()));
            obj.insert("psi".into(), num(s.psi));
            obj.insert("monotone".into(), json!(r.verdict.monotone));
            obj.insert("chain_bound".into(), json!(r.verdict.chain_bound));
            obj.insert("worst_chain_ratio".into(), num(r.verdict.worst_chain_ratio));
            obj.insert("failures".into(), json!(r.verdict.failures));
            obj.insert("rows".into(), Value::Array(rows));
            Value::Object(obj)
        }
        Report::Checks(cs) => Value::Array(
            cs.iter()
                .map(|c| json!({ "name": c.name, "ok": c.ok, "value": num(c.value), "bound": num(c.bound) }))
                .collect(),
        ),
    }
}

pub fn to_csv(report: &Report) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let out = (|| -> csv::Result<()> {
        match report {
            Report::ExpSum(r) => {
                w.write_record(["n", "q", "m", "theta", "gamma", "re", "im", "abs"])?;
                w.write_record([
                    r.n.to_string(),
                    r.q.to_string(),
                    r.m.to_string(),
                    r.theta.to_string(),
                    r.gamma.to_string(),
                    cell(r.value.re),
                    cell(r.value.im),
                    cell(r.value.norm()),
                ])?;
            }
            Report::JointCount(r) => {
                w.write_record([
                    "a1",
                    "a2",
                    "count",
                    "expected_num",
                    "expected_den",
                    "deviation",
                ])?;
                for (a1, row) in r.counts.iter().enumerate() {
                    for (a2, c) in row.iter().enumerate() {
                        w.write_record([
                            a1.to_string(),
                            a2.to_string(),
                            c.to_string(),
                            r.expected_num.to_string(),
                            r.expected_den.to_string(),
                            cell(r.deviation(a1, a2)),
                        ])?;
                    }
                }
            }
            Report::Scaling(r) => {
                w.write_record(["n", "value", "residual"])?;
                for ((n, v), e) in r.grid.iter().zip(&r.values).zip(&r.residuals) {
                    w.write_record([n.to_string(), cell(*v), cell(*e)])?;
                }
            }
            Report::Partition(rs) => {
                w.write_record(["m", "k", "ok", "witness"])?;
                for r in rs {
                    w.write_record([
                        r.m.to_string(),
                        r.k.to_string(),
                        r.ok.to_string(),
                        r.witness.clone().unwrap_or_default(),
                    ])?;
                }
            }
            Report::MuDecay(r) => {
                let s = &r.sequence;
                w.write_record(["k", "q", "mu_re", "mu_im", "m_tilde", "psi_k"])?;
                for k in 0..s.mu.len() {
                    w.write_record([
                        k.to_string(),
                        s.q[k].to_string(),
                        cell(s.mu[k].re),
                        cell(s.mu[k].im),
                        cell(s.m_tilde[k]),
                        cell(s.psi_k[k]),
                    ])?;
                }
            }
            Report::Checks(cs) => {
                w.write_record(["name", "ok", "value", "bound"])?;
                for c in cs {
                    w.write_record([
                        c.name.clone(),
                        c.ok.to_string(),
                        cell(c.value),
                        cell(c.bound),
                    ])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    })();
    out.map_err(|e| Error::Resource(format!("csv encoding failed: {e}")))?;
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Resource(format!("csv encoding failed: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Renders the report; JSON keys are sorted and floats carry 12 significant digits.
pub fn render(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Csv => to_csv(report),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&to_json(report))
                .map_err(|e| Error::Resource(format!("json encoding failed: {e}")))?;
            s.push('\n');
            Ok(s)
        }
    }
}

pub fn emit_report(report: &Report, format: Format, path: &Path) -> Result<()> {
    let text = render(report, format)?;
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
