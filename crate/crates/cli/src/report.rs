//! Serializable reports and their table/CSV renderings.

use std::fmt::Write as _;

use anyhow::Result;
use ctpower_core::analysis::{AnalysisReport, NcfRecord, SweepRow};
use ctpower_core::{InputMode, Method, SchemeId};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub variant: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub a2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub b2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub c2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d2: Option<f64>,
}

impl Params {
    pub fn of(id: &SchemeId) -> Self {
        let mut p = Params {
            n: id.teleported_qubits(),
            ..Default::default()
        };
        match *id {
            SchemeId::Ghz | SchemeId::TwoGhz => {}
            SchemeId::NGhz { m, .. } | SchemeId::Man { m, .. } => p.m = Some(m),
            SchemeId::Yang { m, variant, .. } => {
                p.m = Some(m);
                p.variant = Some(variant.index());
            }
            SchemeId::PartialNGhz { covered, .. } => p.m = Some(covered),
            SchemeId::Pe4(params) => {
                let [a, b, c, d] = params.squared();
                (p.a2, p.b2, p.c2, p.d2) = (Some(a), Some(b), Some(c), Some(d));
            }
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitEntry {
    pub qubit: usize,
    pub ncf_mean: f64,
    pub ncf_stderr: f64,
    pub cp: f64,
    pub sufficient: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControllerEntry {
    pub index: usize,
    pub qubits: Vec<usize>,
    pub cf: f64,
    pub ncf_mean: f64,
    pub ncf_stderr: f64,
    pub cp: f64,
    pub sufficient: bool,
    /// Which method `ncf_mean` comes from.
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ncf_analytic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ncf_mc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ncf_mc_stderr: Option<f64>,
    pub meets_qubit_bound: bool,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub per_qubit: Vec<QubitEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriteriaEntry {
    pub uncontrolled_qubits: Vec<usize>,
    pub all_qubits_controlled: bool,
    pub equal_power: Option<bool>,
    pub power_sufficient: Vec<bool>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scheme: String,
    pub params: Params,
    pub method: String,
    pub mode: String,
    pub classical_limit: f64,
    pub min_control_power: f64,
    pub qubit_bound: usize,
    pub controllers: Vec<ControllerEntry>,
    pub criteria: CriteriaEntry,
    pub seed: u64,
    pub samples: usize,
}

pub fn method_name(m: Method) -> &'static str {
    match m {
        Method::Analytic => "analytic",
        Method::MonteCarlo => "mc",
        Method::Both => "both",
    }
}

pub fn mode_name(m: InputMode) -> &'static str {
    match m {
        InputMode::Arbitrary => "arbitrary",
        InputMode::Product => "product",
    }
}

fn source(f: &NcfRecord) -> &'static str {
    if f.ncf_analytic.is_some() {
        "analytic"
    } else {
        "mc"
    }
}

impl From<&AnalysisReport> for Report {
    fn from(r: &AnalysisReport) -> Self {
        let controllers = r
            .controllers
            .iter()
            .map(|c| ControllerEntry {
                index: c.index,
                qubits: c.qubits.clone(),
                cf: c.conditioned_fidelity,
                ncf_mean: c.figures.ncf,
                ncf_stderr: c.figures.stderr(),
                cp: c.figures.control_power,
                sufficient: c.sufficient,
                source: source(&c.figures).into(),
                ncf_analytic: c.figures.ncf_analytic,
                ncf_mc: c.figures.ncf_mc.map(|e| e.mean),
                ncf_mc_stderr: c.figures.ncf_mc.map(|e| e.stderr),
                meets_qubit_bound: c.meets_qubit_bound,
                per_qubit: c
                    .per_qubit
                    .iter()
                    .map(|q| QubitEntry {
                        qubit: q.qubit,
                        ncf_mean: q.figures.ncf,
                        ncf_stderr: q.figures.stderr(),
                        cp: q.figures.control_power,
                        sufficient: q.sufficient,
                    })
                    .collect(),
            })
            .collect();
        Report {
            scheme: r.scheme.name().into(),
            params: Params::of(&r.scheme),
            method: method_name(r.method).into(),
            mode: mode_name(r.mode).into(),
            classical_limit: r.classical_limit,
            min_control_power: r.min_control_power,
            qubit_bound: r.qubit_bound,
            controllers,
            criteria: CriteriaEntry {
                uncontrolled_qubits: r.criteria.uncontrolled_qubits.clone(),
                all_qubits_controlled: r.criteria.all_qubits_controlled,
                equal_power: r.criteria.equal_power,
                power_sufficient: r.criteria.power_sufficient.clone(),
                passed: r.criteria.passed,
            },
            seed: r.seed,
            samples: r.samples,
        }
    }
}

/// `x` with 12 significant digits in positional notation.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.00000000000".into();
    }
    // Round through scientific notation first so the exponent accounts for
    // carries like 9.99…95 → 10.0.
    let sci = format!("{x:.11e}");
    let exp: i32 = sci[sci.find('e').map_or(sci.len(), |i| i + 1)..]
        .parse()
        .unwrap_or(0);
    let decimals = (11 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn qubit_list(qs: &[usize]) -> String {
    let items: Vec<String> = qs.iter().map(usize::to_string).collect();
    format!("[{}]", items.join(","))
}

fn scheme_label(r: &Report) -> String {
    let p = &r.params;
    let mut parts = vec![format!("n={}", p.n)];
    if let Some(m) = p.m {
        parts.push(format!("m={m}"));
    }
    if let Some(v) = p.variant {
        parts.push(format!("variant={v}"));
    }
    if let (Some(a), Some(b), Some(c), Some(d)) = (p.a2, p.b2, p.c2, p.d2) {
        parts.push(format!("a2={a:.4} b2={b:.4} c2={c:.4} d2={d:.4}"));
    }
    format!("{} ({})", r.scheme, parts.join(", "))
}

pub fn render_table(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scheme             {}", scheme_label(r));
    let _ = writeln!(out, "method             {} ({} inputs)", r.method, r.mode);
    let _ = writeln!(out, "classical limit    {:.6}", r.classical_limit);
    let _ = writeln!(out, "min control power  {:.6}", r.min_control_power);
    let _ = writeln!(out, "samples            {} (seed {})", r.samples, r.seed);
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:<6} {:<16} {:>9} {:>9} {:>9} {:>9}  {:<8} sufficient",
        "ctrl", "qubits", "cf", "ncf", "stderr", "cp", "source"
    );
    for c in &r.controllers {
        let _ = writeln!(
            out,
            "{:<6} {:<16} {:>9.6} {:>9.6} {:>9.6} {:>9.6}  {:<8} {}",
            c.index,
            qubit_list(&c.qubits),
            c.cf,
            c.ncf_mean,
            c.ncf_stderr,
            c.cp,
            c.source,
            yes_no(c.sufficient)
        );
        if let (Some(a), Some(m), Some(e)) = (c.ncf_analytic, c.ncf_mc, c.ncf_mc_stderr) {
            let _ = writeln!(out, "       analytic {a:.6}, monte carlo {m:.6} ± {e:.6}");
        }
        for q in &c.per_qubit {
            let _ = writeln!(
                out,
                "       bob qubit {}: ncf {:.6} ± {:.6}, cp {:.6}, sufficient {}",
                q.qubit,
                q.ncf_mean,
                q.ncf_stderr,
                q.cp,
                yes_no(q.sufficient)
            );
        }
    }
    let _ = writeln!(out);
    let uncontrolled = if r.criteria.uncontrolled_qubits.is_empty() {
        "none".to_string()
    } else {
        qubit_list(&r.criteria.uncontrolled_qubits)
    };
    let _ = writeln!(out, "uncontrolled bob qubits  {uncontrolled}");
    let equal = match r.criteria.equal_power {
        Some(b) => yes_no(b),
        None => "n/a",
    };
    let _ = writeln!(out, "equal power              {equal}");
    let _ = writeln!(
        out,
        "verdict                  {}",
        if r.criteria.passed { "PASS" } else { "FAIL" }
    );
    out
}

pub fn render_json(r: &Report) -> Result<String> {
    let mut s = serde_json::to_string_pretty(r)?;
    s.push('\n');
    Ok(s)
}

pub fn render_csv(r: &Report) -> Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(["index", "qubits", "cf", "ncf_mean", "ncf_stderr", "cp", "sufficient"])?;
    for c in &r.controllers {
        let qubits: Vec<String> = c.qubits.iter().map(usize::to_string).collect();
        w.write_record([
            c.index.to_string(),
            qubits.join(";"),
            sig12(c.cf),
            sig12(c.ncf_mean),
            sig12(c.ncf_stderr),
            sig12(c.cp),
            c.sufficient.to_string(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub const SWEEP_HEADER: [&str; 9] = [
    "a2",
    "b2",
    "c2",
    "d2",
    "cf",
    "ncf_analytic",
    "ncf_mc",
    "ncf_stderr",
    "pass",
];

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(SWEEP_HEADER)?;
    for row in rows {
        let mut rec: Vec<String> = row.squared.iter().map(|&x| sig12(x)).collect();
        rec.extend([
            sig12(row.cf),
            sig12(row.ncf_analytic),
            sig12(row.ncf_mc.mean),
            sig12(row.ncf_mc.stderr),
            row.pass.to_string(),
        ]);
        w.write_record(&rec)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub a2: f64,
    pub b2: f64,
    pub c2: f64,
    pub d2: f64,
    pub cf: f64,
    pub ncf_analytic: f64,
    pub ncf_mc: f64,
    pub ncf_stderr: f64,
    pub pass: bool,
}

pub fn sweep_json(rows: &[SweepRow]) -> Result<String> {
    let entries: Vec<SweepEntry> = rows
        .iter()
        .map(|r| SweepEntry {
            a2: r.squared[0],
            b2: r.squared[1],
            c2: r.squared[2],
            d2: r.squared[3],
            cf: r.cf,
            ncf_analytic: r.ncf_analytic,
            ncf_mc: r.ncf_mc.mean,
            ncf_stderr: r.ncf_mc.stderr,
            pass: r.pass,
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&entries)?;
    s.push('\n');
    Ok(s)
}
