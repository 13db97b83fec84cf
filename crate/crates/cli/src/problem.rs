//! Problem files: JSON with expressions as strings.

use std::path::Path;

use canon_symmetry_core::canonical::{HamiltonianSystem, IntegralCandidate, PhaseSpace};
use canon_symmetry_core::fields::ContactField;
use canon_symmetry_core::numverify::Method;
use canon_symmetry_core::Poly;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{origin}: invalid problem file: {source}")]
    Json { origin: String, source: serde_json::Error },
    #[error("{origin}: {message}")]
    Invalid { origin: String, message: String },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateSpec {
    pub name: String,
    pub expression: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub name: String,
    pub xi: Vec<String>,
    pub pi: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnsatzSpec {
    pub degree: u32,
    #[serde(default)]
    pub include_t: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSpec {
    pub initial: Vec<f64>,
    pub t0: f64,
    pub t1: f64,
    pub h: f64,
    /// `verlet` or `implicit_midpoint`; chosen from `H` when absent.
    #[serde(default)]
    pub method: Option<String>,
    /// Symmetry-flow parameter for `commute`.
    #[serde(default)]
    pub flow_parameter: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub n: usize,
    pub hamiltonian: String,
    #[serde(default)]
    pub candidates: Vec<CandidateSpec>,
    #[serde(default)]
    pub fields: Vec<FieldSpec>,
    #[serde(default)]
    pub ansatz: Option<AnsatzSpec>,
    #[serde(default)]
    pub simulate: Option<SimulateSpec>,
    #[serde(default)]
    pub base_point: Option<Vec<f64>>,
    #[serde(default)]
    pub seed: Option<u64>,
}

pub const DEFAULT_FLOW_PARAMETER: f64 = 0.1;

#[derive(Clone, Debug)]
pub struct Simulation {
    pub initial: Vec<f64>,
    pub t0: f64,
    pub t1: f64,
    pub h: f64,
    pub method: Method,
    pub flow_parameter: f64,
}

/// A problem file with every expression parsed and every length checked.
#[derive(Clone, Debug)]
pub struct Problem {
    pub name: String,
    pub system: HamiltonianSystem,
    pub candidates: Vec<(String, IntegralCandidate)>,
    pub fields: Vec<(String, ContactField)>,
    pub ansatz: Option<AnsatzSpec>,
    pub simulate: Option<Simulation>,
    pub base_point: Option<Vec<f64>>,
    pub seed: Option<u64>,
}

impl Problem {
    pub fn space(&self) -> PhaseSpace {
        self.system.space()
    }

    pub fn load(path: &Path) -> Result<Problem, InputError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| InputError::Io { path: path.display().to_string(), source })?;
        let name = path.file_stem().map_or_else(|| "problem".into(), |s| s.to_string_lossy().into_owned());
        Problem::from_json(&name, &text)
    }

    pub fn from_json(name: &str, text: &str) -> Result<Problem, InputError> {
        let file: ProblemFile =
            serde_json::from_str(text).map_err(|source| InputError::Json { origin: name.into(), source })?;
        Problem::from_file(name, file)
    }

    pub fn from_file(name: &str, file: ProblemFile) -> Result<Problem, InputError> {
        let invalid = |message: String| InputError::Invalid { origin: name.into(), message };
        let space = PhaseSpace::new(file.n).map_err(|e| invalid(e.to_string()))?;
        let parse = |what: &str, text: &str| -> Result<Poly, InputError> {
            space.parse(text).map_err(|e| invalid(format!("{what}: {e} in {text:?}")))
        };
        let system = HamiltonianSystem::new(space, parse("hamiltonian", &file.hamiltonian)?)
            .map_err(|e| invalid(format!("hamiltonian: {e}")))?;
        let candidates = file
            .candidates
            .iter()
            .map(|c| {
                let w = parse(&format!("candidate {}", c.name), &c.expression)?;
                let w = IntegralCandidate::new(w).map_err(|e| invalid(format!("candidate {}: {e}", c.name)))?;
                Ok((c.name.clone(), w))
            })
            .collect::<Result<Vec<_>, InputError>>()?;
        let fields = file
            .fields
            .iter()
            .map(|f| {
                let parts = |v: &[String], label: &str| {
                    v.iter()
                        .enumerate()
                        .map(|(i, t)| parse(&format!("field {} {label}[{}]", f.name, i + 1), t))
                        .collect::<Result<Vec<_>, _>>()
                };
                let field = ContactField::new(space, parts(&f.xi, "xi")?, parts(&f.pi, "pi")?)
                    .map_err(|e| invalid(format!("field {}: {e}", f.name)))?;
                Ok((f.name.clone(), field))
            })
            .collect::<Result<Vec<_>, InputError>>()?;
        if let Some(b) = &file.base_point {
            if b.len() != 2 * file.n {
                return Err(invalid(format!("base_point has {} entries, expected {}", b.len(), 2 * file.n)));
            }
        }
        let simulate = file
            .simulate
            .map(|s| {
                if s.initial.len() != 2 * file.n {
                    return Err(invalid(format!(
                        "simulate.initial has {} entries, expected {}",
                        s.initial.len(),
                        2 * file.n
                    )));
                }
                let method = match &s.method {
                    Some(m) => m.parse().map_err(|e| invalid(format!("simulate.method: {e}")))?,
                    None => Method::preferred_for(&system),
                };
                Ok(Simulation {
                    initial: s.initial,
                    t0: s.t0,
                    t1: s.t1,
                    h: s.h,
                    method,
                    flow_parameter: s.flow_parameter.unwrap_or(DEFAULT_FLOW_PARAMETER),
                })
            })
            .transpose()?;
        Ok(Problem {
            name: name.into(),
            system,
            candidates,
            fields,
            ansatz: file.ansatz,
            simulate,
            base_point: file.base_point,
            seed: file.seed,
        })
    }
}
