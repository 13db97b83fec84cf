//! Machine-readable and human-readable reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use canon_symmetry_core::symcore::ZeroVerdict;
use canon_symmetry_core::Poly;
use serde::Serialize;
use serde_json::Value;

use crate::problem::Problem;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Inputs,
    pub results: Vec<Entry>,
    pub config: Config,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedExpression {
    pub name: String,
    pub expression: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Inputs {
    pub problem: String,
    pub n: usize,
    /// Normalized and rendered.
    pub hamiltonian: String,
    pub candidates: Vec<NamedExpression>,
    pub fields: Vec<FieldJson>,
}

impl Inputs {
    pub fn of(problem: &Problem) -> Inputs {
        Inputs {
            problem: problem.name.clone(),
            n: problem.space().dim(),
            hamiltonian: problem.system.hamiltonian().to_string(),
            candidates: problem
                .candidates
                .iter()
                .map(|(name, w)| NamedExpression { name: name.clone(), expression: w.w.to_string() })
                .collect(),
            fields: problem
                .fields
                .iter()
                .map(|(name, f)| FieldJson::new(Some(name), f.xi(), f.pi()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub xi: Vec<String>,
    pub pi: Vec<String>,
}

impl FieldJson {
    pub fn new(name: Option<&str>, xi: &[Poly], pi: &[Poly]) -> FieldJson {
        FieldJson {
            name: name.map(str::to_owned),
            xi: xi.iter().map(Poly::to_string).collect(),
            pi: pi.iter().map(Poly::to_string).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StatsJson {
    pub method: String,
    pub steps: usize,
    pub h: f64,
    pub initial: f64,
    pub max_abs_deviation: f64,
    pub final_deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub name: String,
    pub verdict: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<StatsJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
}

impl Entry {
    pub fn new(name: &str, verdict: impl Into<String>, passed: bool) -> Entry {
        Entry {
            name: name.into(),
            verdict: verdict.into(),
            passed,
            residual: None,
            field: None,
            stats: None,
            error: None,
            details: BTreeMap::new(),
        }
    }

    pub fn failure(name: &str, verdict: impl Into<String>, error: impl ToString) -> Entry {
        Entry { error: Some(error.to_string()), ..Entry::new(name, verdict, false) }
    }

    pub fn detail(mut self, key: &str, value: impl Into<Value>) -> Entry {
        self.details.insert(key.into(), value.into());
        self
    }
}

/// Verdict details worth reporting beyond the label.
pub fn verdict_details(v: &ZeroVerdict) -> Value {
    match v {
        ZeroVerdict::ProvedZero => Value::Null,
        ZeroVerdict::NumericallyZero { probes, tolerance } => serde_json::json!({
            "probes": probes,
            "tolerance": tolerance,
        }),
        ZeroVerdict::Nonzero { witness, value, scale } => {
            let point: serde_json::Map<String, Value> =
                witness.iter().map(|(v, x)| (v.to_string(), Value::from(*x))).collect();
            serde_json::json!({ "witness": point, "value": value, "scale": scale })
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroTestJson {
    pub probes: usize,
    pub tolerance: f64,
    pub max_denominator: u32,
    pub range: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct Config {
    pub version: String,
    pub seed: u64,
    pub zero_test: ZeroTestJson,
    pub drift_tolerance: f64,
    pub commute_tolerance: f64,
    pub midpoint_tolerance: f64,
    pub midpoint_max_iterations: usize,
}

/// Human-readable rendering of a report.
pub fn text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} [{}]  H = {}", report.command, report.inputs.problem, report.inputs.hamiltonian);
    for r in &report.results {
        let mark = if r.passed { "ok  " } else { "FAIL" };
        let _ = writeln!(out, "  {mark} {}: {}", r.name, r.verdict);
        if let Some(residual) = &r.residual {
            let _ = writeln!(out, "       residual: {residual}");
        }
        if let Some(f) = &r.field {
            let _ = writeln!(out, "       xi = ({}), pi = ({})", f.xi.join(", "), f.pi.join(", "));
        }
        if let Some(s) = &r.stats {
            let _ = writeln!(
                out,
                "       {} steps of {} (h = {}): W0 = {}, max |dW| = {:e}, final dW = {:e}",
                s.steps, s.method, s.h, s.initial, s.max_abs_deviation, s.final_deviation
            );
        }
        if let Some(e) = &r.error {
            let _ = writeln!(out, "       error: {e}");
        }
        for (k, v) in &r.details {
            match v {
                Value::Null => {}
                Value::String(s) => {
                    let _ = writeln!(out, "       {k}: {s}");
                }
                other => {
                    let _ = writeln!(out, "       {k}: {other}");
                }
            }
        }
    }
    let passed = report.results.iter().filter(|r| r.passed).count();
    let _ = writeln!(out, "  {passed}/{} passed", report.results.len());
    out
}
