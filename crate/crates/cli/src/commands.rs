//! One function per subcommand; each turns a problem into a report.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use canon_symmetry_core::canonical::{first_integral_test, IntegralCandidate};
use canon_symmetry_core::correspondence::{
    field_from_integral, integral_from_field, levy_cerruti_split, normalize_addend, CorrespondenceError,
    ReconstructionPath,
};
use canon_symmetry_core::discovery::{discover_integrals, enumerate_basis};
use canon_symmetry_core::fields::invariance_check;
use canon_symmetry_core::numverify::{
    drift_report, flow_commutation_check, integrate_hamilton, write_drift_csv, MIDPOINT_MAX_ITERATIONS,
    MIDPOINT_TOLERANCE,
};
use canon_symmetry_core::symcore::{ZeroTestConfig, ZeroVerdict};
use clap::ValueEnum;
use serde_json::{json, Value};

use crate::problem::{InputError, Problem, Simulation};
use crate::report::{verdict_details, Config, Entry, FieldJson, Inputs, Report, StatsJson, ZeroTestJson};

pub const DRIFT_TOLERANCE: f64 = 1e-6;
pub const COMMUTE_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// First-integral test for each candidate.
    Verify,
    /// Symmetry field generated by each candidate.
    Correspond,
    /// Characteristic function of each field.
    Reconstruct,
    /// Invariance of Hamilton's equations under each field.
    Invariance,
    /// Split of the integral condition for H = T - U and W linear in p.
    LevyCerruti,
    /// Integrals within the polynomial ansatz.
    Discover,
    /// Drift of each candidate along a numerical trajectory.
    Simulate,
    /// Commutation of each candidate's flow with the Hamiltonian flow.
    Commute,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Correspond => "correspond",
            Command::Reconstruct => "reconstruct",
            Command::Invariance => "invariance",
            Command::LevyCerruti => "levy-cerruti",
            Command::Discover => "discover",
            Command::Simulate => "simulate",
            Command::Commute => "commute",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub csv_dir: Option<PathBuf>,
}

struct Ctx<'a> {
    problem: &'a Problem,
    cfg: ZeroTestConfig,
    csv_dir: Option<&'a PathBuf>,
}

pub fn run(command: Command, problem: &Problem, opts: &Options) -> Result<Report, InputError> {
    let mut cfg = ZeroTestConfig::with_seed(opts.seed.or(problem.seed).unwrap_or(0));
    if let Some(tol) = opts.tolerance {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(InputError::Invalid { origin: "--tol".into(), message: format!("invalid tolerance {tol}") });
        }
        cfg.tolerance = tol;
    }
    let ctx = Ctx { problem, cfg, csv_dir: opts.csv_dir.as_ref() };
    let results = match command {
        Command::Verify => verify(&ctx),
        Command::Correspond => correspond(&ctx),
        Command::Reconstruct => reconstruct(&ctx),
        Command::Invariance => invariance(&ctx),
        Command::LevyCerruti => levy_cerruti(&ctx),
        Command::Discover => discover(&ctx)?,
        Command::Simulate => simulate(&ctx)?,
        Command::Commute => commute(&ctx)?,
    };
    Ok(Report {
        command: command.name().into(),
        inputs: Inputs::of(problem),
        results,
        config: Config {
            version: env!("CARGO_PKG_VERSION").into(),
            seed: ctx.cfg.seed,
            zero_test: ZeroTestJson {
                probes: ctx.cfg.probes,
                tolerance: ctx.cfg.tolerance,
                max_denominator: ctx.cfg.max_denominator,
                range: ctx.cfg.range,
            },
            drift_tolerance: DRIFT_TOLERANCE,
            commute_tolerance: COMMUTE_TOLERANCE,
            midpoint_tolerance: MIDPOINT_TOLERANCE,
            midpoint_max_iterations: MIDPOINT_MAX_ITERATIONS,
        },
    })
}

/// Whether `command` can run on `problem` (used to filter the gallery).
pub fn applicable(command: Command, problem: &Problem) -> bool {
    match command {
        Command::Discover => problem.ansatz.is_some(),
        Command::Simulate | Command::Commute => problem.simulate.is_some() && !problem.candidates.is_empty(),
        Command::Reconstruct | Command::Invariance => !problem.fields.is_empty(),
        _ => !problem.candidates.is_empty(),
    }
}

fn missing(ctx: &Ctx, what: &str) -> InputError {
    InputError::Invalid { origin: ctx.problem.name.clone(), message: format!("problem has no `{what}` section") }
}

fn with_verdict(mut e: Entry, v: &ZeroVerdict) -> Entry {
    let d = verdict_details(v);
    if !d.is_null() {
        e.details.insert("verdict_details".into(), d);
    }
    e
}

fn verify(ctx: &Ctx) -> Vec<Entry> {
    let sys = &ctx.problem.system;
    ctx.problem
        .candidates
        .iter()
        .map(|(name, w)| {
            let report = match first_integral_test(w, sys, &ctx.cfg) {
                Ok(r) => r,
                Err(e) => return Entry::failure(name, "Error", e),
            };
            let mut entry = Entry::new(name, report.verdict.label(), report.passed());
            entry.residual = Some(report.residual.to_string());
            entry = with_verdict(entry, &report.verdict);
            if !report.passed() {
                // W may be an integral up to an additive function of t
                if let Ok(corrected) = normalize_addend(w, sys) {
                    if let Ok(check) = first_integral_test(&corrected, sys, &ctx.cfg) {
                        entry.passed = check.passed();
                        entry = entry
                            .detail("corrected", corrected.w.to_string())
                            .detail("corrected_verdict", check.verdict.label());
                    }
                }
            }
            entry
        })
        .collect()
}

fn correspond(ctx: &Ctx) -> Vec<Entry> {
    let sys = &ctx.problem.system;
    ctx.problem
        .candidates
        .iter()
        .map(|(name, w)| {
            let field = field_from_integral(w, &sys.space());
            let mut entry = match invariance_check(&field, sys, &ctx.cfg) {
                Ok(r) => {
                    let verdict = if r.passed() { "Invariant" } else { "NotInvariant" };
                    let mut e = Entry::new(name, verdict, r.passed());
                    e.residual = r.failures().next().map(|f| format!("{}: {}", f.equation, f.residual));
                    e
                }
                Err(e) => Entry::failure(name, "Error", e),
            };
            entry.field = Some(FieldJson::new(None, field.xi(), field.pi()));
            entry
        })
        .collect()
}

fn correspondence_verdict(e: &CorrespondenceError) -> &'static str {
    match e {
        CorrespondenceError::NotContactField { .. } => "NotContactField",
        CorrespondenceError::BasePointSingular => "BasePointSingular",
        CorrespondenceError::NonIntegrableAlongPath => "NonIntegrableAlongPath",
        CorrespondenceError::BasePointDimension { .. } => "BasePointDimension",
        CorrespondenceError::NotInvariant { .. } => "NotInvariant",
        CorrespondenceError::NoClosedFormAntiderivative { .. } => "NoClosedFormAntiderivative",
        CorrespondenceError::HNotKineticMinusPotential => "HNotKineticMinusPotential",
        CorrespondenceError::WNotLinearHomogeneous(_) => "WNotLinearHomogeneous",
        CorrespondenceError::Canonical(_) | CorrespondenceError::Sym(_) => "Error",
    }
}

fn reconstruct(ctx: &Ctx) -> Vec<Entry> {
    let sys = &ctx.problem.system;
    let base = ctx.problem.base_point.as_deref();
    ctx.problem
        .fields
        .iter()
        .map(|(name, field)| match integral_from_field(field, sys, base, &ctx.cfg) {
            Ok(r) => {
                let verdict = if r.candidate.normalized { "Integral" } else { "NotInvariant" };
                let mut e = Entry::new(name, verdict, r.candidate.normalized);
                if !r.residual.is_zero() {
                    e.residual = Some(r.residual.to_string());
                }
                let path = match r.path {
                    ReconstructionPath::Homogeneous => "homogeneous",
                    ReconstructionPath::LineIntegral => "line_integral",
                };
                e.detail("W", r.candidate.w.to_string()).detail("path", path)
            }
            Err(err) => {
                let mut e = Entry::failure(name, correspondence_verdict(&err), &err);
                if let CorrespondenceError::NotContactField { condition, i, j, .. } = &err {
                    e = e.detail("condition", condition.to_string()).detail("indices", json!([i + 1, j + 1]));
                }
                e
            }
        })
        .collect()
}

fn invariance(ctx: &Ctx) -> Vec<Entry> {
    let sys = &ctx.problem.system;
    ctx.problem
        .fields
        .iter()
        .map(|(name, field)| match invariance_check(field, sys, &ctx.cfg) {
            Ok(r) => {
                let verdict = if !r.passed() {
                    "Nonzero"
                } else if r.equations.iter().all(|e| e.verdict.is_proved()) {
                    "ProvedZero"
                } else {
                    "NumericallyZero"
                };
                let mut e = Entry::new(name, verdict, r.passed());
                e.residual = r.failures().next().map(|f| format!("{}: {}", f.equation, f.residual));
                let equations: Vec<Value> = r
                    .equations
                    .iter()
                    .map(|c| {
                        json!({
                            "equation": c.equation.to_string(),
                            "residual": c.residual.to_string(),
                            "verdict": c.verdict.label(),
                        })
                    })
                    .collect();
                e.detail("equations", equations)
            }
            Err(err) => Entry::failure(name, "Error", err),
        })
        .collect()
}

fn levy_cerruti(ctx: &Ctx) -> Vec<Entry> {
    let sys = &ctx.problem.system;
    ctx.problem
        .candidates
        .iter()
        .map(|(name, w)| match levy_cerruti_split(w, sys, &ctx.cfg) {
            Ok(r) => {
                let label = |v: &Option<ZeroVerdict>| v.as_ref().map_or("n/a", ZeroVerdict::label);
                let verdict = if r.admits() { "Admits" } else { "DoesNotAdmit" };
                let mut e = Entry::new(name, verdict, r.admits());
                if let Some(xi) = &r.point_field {
                    e.field = Some(FieldJson {
                        name: None,
                        xi: xi.iter().map(ToString::to_string).collect(),
                        pi: field_from_integral(w, &sys.space()).pi().iter().map(ToString::to_string).collect(),
                    });
                }
                let residuals: serde_json::Map<String, Value> =
                    r.degree_residuals.iter().map(|(d, p)| (d.to_string(), Value::from(p.to_string()))).collect();
                e.detail("kinetic", r.kinetic.to_string())
                    .detail("potential", r.potential.to_string())
                    .detail("kinetic_admits", label(&r.t_admits))
                    .detail("potential_admits", label(&r.u_admits))
                    .detail("degree_residuals", residuals)
            }
            Err(err) => Entry::failure(name, correspondence_verdict(&err), &err),
        })
        .collect()
}

fn discover(ctx: &Ctx) -> Result<Vec<Entry>, InputError> {
    let ansatz = ctx.problem.ansatz.as_ref().ok_or_else(|| missing(ctx, "ansatz"))?;
    let name = format!("degree {}{}", ansatz.degree, if ansatz.include_t { " with t" } else { "" });
    let space = ctx.problem.space();
    let basis = match enumerate_basis(space, ansatz.degree, ansatz.include_t)
        .map_err(|e| e.to_string())
        .and_then(|a| discover_integrals(&ctx.problem.system, &a).map_err(|e| e.to_string()))
    {
        Ok(b) => b,
        Err(e) => return Ok(vec![Entry::failure(&name, "Error", e)]),
    };
    let generators: Vec<String> = basis.generators.iter().map(|g| g.w.to_string()).collect();
    let in_span: serde_json::Map<String, Value> = ctx
        .problem
        .candidates
        .iter()
        .map(|(n, w)| (n.clone(), Value::from(basis.spans(&w.w))))
        .collect();
    let mut e = Entry::new(&name, format!("dimension {}", basis.dimension), true)
        .detail("ansatz_size", basis.ansatz().len())
        .detail("dimension", basis.dimension)
        .detail("generators", generators);
    if !in_span.is_empty() {
        e = e.detail("candidates_in_span", in_span);
    }
    Ok(vec![e])
}

fn simulation<'a>(ctx: &'a Ctx) -> Result<&'a Simulation, InputError> {
    ctx.problem.simulate.as_ref().ok_or_else(|| missing(ctx, "simulate"))
}

fn csv_name(problem: &str, candidate: &str) -> String {
    let clean = |s: &str| -> String {
        s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
    };
    format!("{}-{}.csv", clean(problem), clean(candidate))
}

fn simulate(ctx: &Ctx) -> Result<Vec<Entry>, InputError> {
    let sim = simulation(ctx)?;
    let sys = &ctx.problem.system;
    let traj = match integrate_hamilton(sys, &sim.initial, sim.t0, sim.t1, sim.h, sim.method) {
        Ok(t) => t,
        Err(e) => {
            return Ok(ctx.problem.candidates.iter().map(|(n, _)| Entry::failure(n, "IntegrationError", &e)).collect())
        }
    };
    if let Some(dir) = ctx.csv_dir {
        std::fs::create_dir_all(dir)
            .map_err(|source| InputError::Io { path: dir.display().to_string(), source })?;
    }
    let mut out = Vec::new();
    for (name, w) in &ctx.problem.candidates {
        let stats = match drift_report(w, &traj, ctx.csv_dir.is_some()) {
            Ok(s) => s,
            Err(e) => {
                out.push(Entry::failure(name, "EvaluationError", e));
                continue;
            }
        };
        if let (Some(dir), Some(series)) = (ctx.csv_dir, &stats.series) {
            let path = dir.join(csv_name(&ctx.problem.name, name));
            let io = |source| InputError::Io { path: path.display().to_string(), source };
            let file = File::create(&path).map_err(io)?;
            write_drift_csv(series, BufWriter::new(file)).map_err(io)?;
        }
        let passed = stats.max_abs_deviation < DRIFT_TOLERANCE;
        let mut e = Entry::new(name, if passed { "Conserved" } else { "Drifts" }, passed);
        e.stats = Some(StatsJson {
            method: traj.method.to_string(),
            steps: traj.times.len() - 1,
            h: traj.step,
            initial: stats.initial,
            max_abs_deviation: stats.max_abs_deviation,
            final_deviation: stats.final_deviation,
        });
        out.push(e);
    }
    Ok(out)
}

fn commute(ctx: &Ctx) -> Result<Vec<Entry>, InputError> {
    let sim = simulation(ctx)?;
    let sys = &ctx.problem.system;
    Ok(ctx
        .problem
        .candidates
        .iter()
        .map(|(name, w): &(String, IntegralCandidate)| {
            match flow_commutation_check(
                w,
                sys,
                &sim.initial,
                sim.flow_parameter,
                sim.t0,
                sim.t1,
                sim.h,
                sim.method,
                COMMUTE_TOLERANCE,
            ) {
                Ok(r) => Entry::new(name, if r.passed() { "Commutes" } else { "DoesNotCommute" }, r.passed())
                    .detail("error", r.error)
                    .detail("flow_parameter", sim.flow_parameter)
                    .detail("method", sim.method.to_string()),
                Err(e) => Entry::failure(name, "IntegrationError", e),
            }
        })
        .collect())
}
