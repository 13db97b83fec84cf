//! Numerical cross-checks: symplectic integration of Hamilton's equations,
//! conservation of a candidate along trajectories, and commutation of the
//! symmetry flow with the Hamiltonian flow.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::canonical::{HamiltonianSystem, IntegralCandidate, PhaseSpace};
use crate::symcore::{split_by_p_degree, CompiledPoly, PhasePoint, Poly, SymError, Var};

/// Fixed-point tolerance of the implicit midpoint solve.
pub const MIDPOINT_TOLERANCE: f64 = 1e-12;
pub const MIDPOINT_MAX_ITERATIONS: usize = 50;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum NumError {
    #[error("Hamiltonian is not separable as sum of c_i*p_i^2 plus a potential; use implicit_midpoint")]
    NotSeparable,
    #[error("implicit midpoint iteration did not converge at t = {t}")]
    NewtonDivergence { t: f64 },
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("state has {got} entries, expected {expected}")]
    StateDimension { expected: usize, got: usize },
    #[error("invalid step or interval: {0}")]
    InvalidInterval(String),
}

impl From<SymError> for NumError {
    fn from(e: SymError) -> Self {
        NumError::DomainError(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Verlet,
    ImplicitMidpoint,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Verlet => "verlet",
            Method::ImplicitMidpoint => "implicit_midpoint",
        }
    }

    /// Verlet when `H` is separable, implicit midpoint otherwise.
    pub fn preferred_for(sys: &HamiltonianSystem) -> Method {
        if separable_masses(sys).is_some() {
            Method::Verlet
        } else {
            Method::ImplicitMidpoint
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "verlet" => Ok(Method::Verlet),
            "implicit_midpoint" => Ok(Method::ImplicitMidpoint),
            other => Err(format!("unknown method '{other}' (expected verlet or implicit_midpoint)")),
        }
    }
}

/// For `H = Σ cᵢ pᵢ² + V(t, x)` with rational `cᵢ > 0`, returns `2cᵢ`
/// (the inverse masses).
pub fn separable_masses(sys: &HamiltonianSystem) -> Option<Vec<f64>> {
    let parts = split_by_p_degree(sys.hamiltonian()).ok()?;
    if parts.keys().any(|d| *d != 0 && *d != 2) {
        return None;
    }
    let kinetic = parts.get(&2)?;
    let n = sys.space().dim();
    let mut inverse_masses = vec![0.0; n];
    for (m, c) in kinetic.terms() {
        let [(crate::symcore::Atom::Var(Var::P(i)), 2)] = m.factors() else {
            return None;
        };
        if !c.is_positive() {
            return None;
        }
        inverse_masses[*i] = 2.0 * c.to_f64()?;
    }
    inverse_masses.iter().all(|m| *m > 0.0).then_some(inverse_masses)
}

/// Right-hand side `(∂H/∂p, −∂H/∂x)` of a Hamiltonian vector field.
struct VectorField {
    components: Vec<CompiledPoly>,
}

impl VectorField {
    fn hamiltonian(h: &Poly, space: PhaseSpace) -> VectorField {
        let components = space
            .momenta()
            .map(|p| CompiledPoly::new(&h.diff(p)))
            .chain(space.coords().map(|x| CompiledPoly::new(&-h.diff(x))))
            .collect();
        VectorField { components }
    }

    fn eval(&self, t: f64, z: &[f64], out: &mut [f64]) -> Result<(), NumError> {
        let point = PhasePoint::from_state(t, z);
        for (o, c) in out.iter_mut().zip(&self.components) {
            *o = c.eval(&point)?;
            if !o.is_finite() {
                return Err(NumError::DomainError(format!("non-finite vector field at t = {t}")));
            }
        }
        Ok(())
    }

    /// One implicit midpoint step `z' = z + h f(t_eval, (z + z')/2)`,
    /// solved by fixed-point iteration.
    fn midpoint_step(&self, t_eval: f64, z: &mut [f64], h: f64) -> Result<(), NumError> {
        let dim = z.len();
        let mut f = vec![0.0; dim];
        self.eval(t_eval, z, &mut f)?;
        let mut next: Vec<f64> = z.iter().zip(&f).map(|(a, b)| a + h * b).collect();
        let mut mid = vec![0.0; dim];
        for _ in 0..MIDPOINT_MAX_ITERATIONS {
            for k in 0..dim {
                mid[k] = 0.5 * (z[k] + next[k]);
            }
            self.eval(t_eval, &mid, &mut f)?;
            let mut change: f64 = 0.0;
            let mut size: f64 = 1.0;
            for k in 0..dim {
                let updated = z[k] + h * f[k];
                change = change.max((updated - next[k]).abs());
                size = size.max(updated.abs());
                next[k] = updated;
            }
            if change <= MIDPOINT_TOLERANCE * size {
                z.copy_from_slice(&next);
                return Ok(());
            }
        }
        Err(NumError::NewtonDivergence { t: t_eval })
    }
}

/// Single-step propagator for one system and method; steps may be negative.
pub struct Stepper {
    method: Method,
    n: usize,
    field: VectorField,
    inverse_masses: Vec<f64>,
    // ∂V/∂xᵢ for the verlet kicks
    force: Vec<CompiledPoly>,
}

impl Stepper {
    pub fn new(sys: &HamiltonianSystem, method: Method) -> Result<Stepper, NumError> {
        let space = sys.space();
        let h = sys.hamiltonian();
        let (inverse_masses, force) = match method {
            Method::Verlet => {
                let masses = separable_masses(sys).ok_or(NumError::NotSeparable)?;
                let potential = split_by_p_degree(h)?.remove(&0).unwrap_or_default();
                (masses, space.coords().map(|x| CompiledPoly::new(&potential.diff(x))).collect())
            }
            Method::ImplicitMidpoint => (Vec::new(), Vec::new()),
        };
        Ok(Stepper { method, n: space.dim(), field: VectorField::hamiltonian(h, space), inverse_masses, force })
    }

    pub fn method(&self) -> Method {
        self.method
    }

    fn kick(&self, t: f64, z: &mut [f64], h: f64) -> Result<(), NumError> {
        let point_state = z.to_vec();
        let point = PhasePoint::from_state(t, &point_state);
        for i in 0..self.n {
            let g = self.force[i].eval(&point)?;
            if !g.is_finite() {
                return Err(NumError::DomainError(format!("non-finite force at t = {t}")));
            }
            z[self.n + i] -= h * g;
        }
        Ok(())
    }

    /// Advances `z = (x, p)` from `t` to `t + h`.
    pub fn step(&self, t: f64, z: &mut [f64], h: f64) -> Result<(), NumError> {
        match self.method {
            Method::Verlet => {
                self.kick(t, z, 0.5 * h)?;
                for i in 0..self.n {
                    z[i] += h * self.inverse_masses[i] * z[self.n + i];
                }
                self.kick(t + h, z, 0.5 * h)
            }
            Method::ImplicitMidpoint => self.field.midpoint_step(t + 0.5 * h, z, h),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub method: Method,
    pub step: f64,
}

impl Trajectory {
    pub fn last(&self) -> (f64, &[f64]) {
        (*self.times.last().expect("non-empty"), self.states.last().expect("non-empty"))
    }
}

/// Number of uniform steps covering `span` with steps no longer than `h`.
fn step_count(span: f64, h: f64) -> usize {
    // tolerate representation error in span/h, e.g. 10/1e-3
    ((span / h) * (1.0 - 1e-12)).ceil().max(1.0) as usize
}

fn check_state(space: PhaseSpace, q0: &[f64]) -> Result<(), NumError> {
    if q0.len() != 2 * space.dim() {
        return Err(NumError::StateDimension { expected: 2 * space.dim(), got: q0.len() });
    }
    if q0.iter().any(|v| !v.is_finite()) {
        return Err(NumError::DomainError("initial state is not finite".into()));
    }
    Ok(())
}

/// Integrates Hamilton's equations from `t0` to `t1`. The step actually used
/// is `(t1 − t0)/N` with `N = ⌈(t1 − t0)/h⌉`, so the last sample is `t1`.
pub fn integrate_hamilton(
    sys: &HamiltonianSystem,
    q0: &[f64],
    t0: f64,
    t1: f64,
    h: f64,
    method: Method,
) -> Result<Trajectory, NumError> {
    check_state(sys.space(), q0)?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(NumError::InvalidInterval(format!("step {h} must be positive")));
    }
    if !(t1 > t0 && (t1 - t0).is_finite()) {
        return Err(NumError::InvalidInterval(format!("need t0 < t1, got {t0} and {t1}")));
    }
    let stepper = Stepper::new(sys, method)?;
    let steps = step_count(t1 - t0, h);
    let dt = (t1 - t0) / steps as f64;
    let energy = CompiledPoly::new(sys.hamiltonian());
    let check = |t: f64, z: &[f64]| -> Result<(), NumError> {
        match energy.eval(&PhasePoint::from_state(t, z))? {
            e if e.is_finite() => Ok(()),
            _ => Err(NumError::DomainError(format!("H is not finite at t = {t}"))),
        }
    };
    check(t0, q0)?;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut z = q0.to_vec();
    times.push(t0);
    states.push(z.clone());
    for k in 0..steps {
        let t = t0 + k as f64 * dt;
        stepper.step(t, &mut z, dt)?;
        let t_next = if k + 1 == steps { t1 } else { t0 + (k + 1) as f64 * dt };
        check(t_next, &z)?;
        times.push(t_next);
        states.push(z.clone());
    }
    Ok(Trajectory { times, states, method, step: dt })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriftSample {
    pub t: f64,
    pub value: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DriftStats {
    pub initial: f64,
    pub max_abs_deviation: f64,
    pub final_deviation: f64,
    pub series: Option<Vec<DriftSample>>,
}

/// Evaluates `W(t, x, p)` along `traj`; the per-sample series is kept only
/// when `keep_series` is set.
pub fn drift_report(w: &IntegralCandidate, traj: &Trajectory, keep_series: bool) -> Result<DriftStats, NumError> {
    let compiled = CompiledPoly::new(&w.w);
    let mut series = keep_series.then(|| Vec::with_capacity(traj.times.len()));
    let mut initial = None;
    let mut max_abs_deviation: f64 = 0.0;
    let mut final_deviation = 0.0;
    for (t, z) in traj.times.iter().zip(&traj.states) {
        let value = compiled.eval(&PhasePoint::from_state(*t, z))?;
        if !value.is_finite() {
            return Err(NumError::DomainError(format!("W is not finite at t = {t}")));
        }
        let w0 = *initial.get_or_insert(value);
        let deviation = value - w0;
        max_abs_deviation = max_abs_deviation.max(deviation.abs());
        final_deviation = deviation;
        if let Some(s) = series.as_mut() {
            s.push(DriftSample { t: *t, value, deviation });
        }
    }
    Ok(DriftStats { initial: initial.unwrap_or(0.0), max_abs_deviation, final_deviation, series })
}

/// Writes `t,W,deviation` rows with 17 significant digits.
pub fn write_drift_csv(samples: &[DriftSample], mut out: impl Write) -> io::Result<()> {
    writeln!(out, "t,W,deviation")?;
    for s in samples {
        writeln!(out, "{:.16e},{:.16e},{:.16e}", s.t, s.value, s.deviation)?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommutationReport {
    /// Symmetry flow first, then the Hamiltonian flow.
    pub symmetry_then_flow: Vec<f64>,
    /// Hamiltonian flow first, then the symmetry flow at the final time.
    pub flow_then_symmetry: Vec<f64>,
    pub error: f64,
    pub tolerance: f64,
}

impl CommutationReport {
    pub fn passed(&self) -> bool {
        self.error < self.tolerance
    }
}

/// Flow of the field generated by `W` for parameter `s`, with time frozen at
/// `t`, by implicit midpoint steps no longer than `h`.
pub fn symmetry_flow(w: &IntegralCandidate, space: PhaseSpace, t: f64, q: &[f64], s: f64, h: f64) -> Result<Vec<f64>, NumError> {
    check_state(space, q)?;
    let mut z = q.to_vec();
    if s.is_zero() {
        return Ok(z);
    }
    let field = VectorField::hamiltonian(&w.w, space);
    let steps = step_count(s.abs(), h);
    let ds = s / steps as f64;
    for _ in 0..steps {
        field.midpoint_step(t, &mut z, ds)?;
    }
    Ok(z)
}

/// Compares `Φ_H(t0→t1) ∘ Ψ_s` with `Ψ_s ∘ Φ_H(t0→t1)`, where `Ψ_s` is the
/// symmetry flow (evaluated at `t0` and `t1` respectively) and `Φ_H` the
/// Hamiltonian flow.
#[allow(clippy::too_many_arguments)]
pub fn flow_commutation_check(
    w: &IntegralCandidate,
    sys: &HamiltonianSystem,
    q0: &[f64],
    s: f64,
    t0: f64,
    t1: f64,
    h: f64,
    method: Method,
    tolerance: f64,
) -> Result<CommutationReport, NumError> {
    let space = sys.space();
    let moved = symmetry_flow(w, space, t0, q0, s, h)?;
    let a = integrate_hamilton(sys, &moved, t0, t1, h, method)?.last().1.to_vec();
    let evolved = integrate_hamilton(sys, q0, t0, t1, h, method)?.last().1.to_vec();
    let b = symmetry_flow(w, space, t1, &evolved, s, h)?;
    let error = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    Ok(CommutationReport { symmetry_then_flow: a, flow_then_symmetry: b, error, tolerance })
}
