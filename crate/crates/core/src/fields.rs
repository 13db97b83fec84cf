//! Vertical vector fields `v = Σ ξᵢ ∂/∂xᵢ + πᵢ ∂/∂pᵢ` on `(t, x, p)`-space,
//! their first prolongation and the invariance check of Hamilton's equations.

use std::fmt;

use thiserror::Error;

use crate::canonical::{ensure_jet_free, on_shell_reduce, total_derivative, CanonicalError, HamiltonianSystem, PhaseSpace};
use crate::symcore::{is_zero, Poly, Var, ZeroTestConfig, ZeroVerdict};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum FieldError {
    #[error("field has {xi} ξ and {pi} π components, expected {n} each")]
    ComponentCount { n: usize, xi: usize, pi: usize },
    #[error(transparent)]
    Canonical(#[from] CanonicalError),
}

/// Increments `(ξ, π)` of an infinitesimal transformation with `t` held fixed.
///
/// The characteristic function is optional: fields that do not come from a
/// single `W` are representable so the reconstruction direction can reject
/// them.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactField {
    space: PhaseSpace,
    xi: Vec<Poly>,
    pi: Vec<Poly>,
    generator: Option<Poly>,
}

impl ContactField {
    pub fn new(space: PhaseSpace, xi: Vec<Poly>, pi: Vec<Poly>) -> Result<Self, FieldError> {
        let n = space.dim();
        if xi.len() != n || pi.len() != n {
            return Err(FieldError::ComponentCount { n, xi: xi.len(), pi: pi.len() });
        }
        for c in xi.iter().chain(&pi) {
            ensure_jet_free(c)?;
            space.check_declared(c)?;
        }
        Ok(ContactField { space, xi, pi, generator: None })
    }

    pub fn parse(space: PhaseSpace, xi: &[&str], pi: &[&str]) -> Result<Self, FieldError> {
        let parse_all = |texts: &[&str]| texts.iter().map(|t| space.parse(t)).collect::<Result<Vec<_>, _>>();
        ContactField::new(space, parse_all(xi)?, parse_all(pi)?)
    }

    pub(crate) fn with_generator(mut self, w: Poly) -> Self {
        self.generator = Some(w);
        self
    }

    pub fn space(&self) -> PhaseSpace {
        self.space
    }

    pub fn xi(&self) -> &[Poly] {
        &self.xi
    }

    pub fn pi(&self) -> &[Poly] {
        &self.pi
    }

    pub fn generator(&self) -> Option<&Poly> {
        self.generator.as_ref()
    }

    /// `v(e) = Σ ξᵢ ∂e/∂xᵢ + πᵢ ∂e/∂pᵢ`.
    pub fn apply(&self, e: &Poly) -> Result<Poly, CanonicalError> {
        ensure_jet_free(e)?;
        Ok(self.apply_unchecked(e))
    }

    pub(crate) fn apply_unchecked(&self, e: &Poly) -> Poly {
        (0..self.space.dim())
            .map(|i| &(&self.xi[i] * &e.diff(Var::X(i))) + &(&self.pi[i] * &e.diff(Var::P(i))))
            .sum()
    }

    pub fn prolong(&self) -> ProlongedField {
        let td = |c: &Poly| total_derivative(c, &self.space).expect("field components are jet-free");
        ProlongedField {
            dxi_dt: self.xi.iter().map(td).collect(),
            dpi_dt: self.pi.iter().map(td).collect(),
            base: self.clone(),
        }
    }
}

impl fmt::Display for ContactField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Poly]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "ξ = ({}), π = ({})", join(&self.xi), join(&self.pi))
    }
}

pub fn apply_field(field: &ContactField, e: &Poly) -> Result<Poly, CanonicalError> {
    field.apply(e)
}

/// First prolongation: the field extended to `ẋᵢ`, `ṗᵢ` with coefficients
/// `dξᵢ/dt`, `dπᵢ/dt` (total derivatives).
#[derive(Clone, Debug, PartialEq)]
pub struct ProlongedField {
    pub base: ContactField,
    pub dxi_dt: Vec<Poly>,
    pub dpi_dt: Vec<Poly>,
}

impl ProlongedField {
    /// `pr⁽¹⁾v(e)` for `e` over `(t, x, p, ẋ, ṗ)`.
    pub fn apply(&self, e: &Poly) -> Poly {
        let mut out = Poly::zero();
        for i in 0..self.base.space.dim() {
            out = &out + &(&self.base.xi[i] * &e.diff(Var::X(i)));
            out = &out + &(&self.base.pi[i] * &e.diff(Var::P(i)));
            out = &out + &(&self.dxi_dt[i] * &e.diff(Var::XDot(i)));
            out = &out + &(&self.dpi_dt[i] * &e.diff(Var::PDot(i)));
        }
        out
    }
}

pub fn prolong(field: &ContactField) -> ProlongedField {
    field.prolong()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equation {
    /// `ẋᵢ − ∂H/∂pᵢ`
    Position(usize),
    /// `ṗᵢ + ∂H/∂xᵢ`
    Momentum(usize),
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Equation::Position(i) => write!(f, "E1[{}]", i + 1),
            Equation::Momentum(i) => write!(f, "E2[{}]", i + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquationCheck {
    pub equation: Equation,
    pub residual: Poly,
    pub verdict: ZeroVerdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport {
    pub equations: Vec<EquationCheck>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.equations.iter().all(|e| e.verdict.is_zero())
    }

    pub fn failures(&self) -> impl Iterator<Item = &EquationCheck> {
        self.equations.iter().filter(|e| !e.verdict.is_zero())
    }
}

/// Applies the prolonged field to each of the `2n` equations and reduces the
/// result on solutions of the system. Entries are ordered `E1[1..n]` then
/// `E2[1..n]`.
pub fn invariance_check(
    field: &ContactField,
    sys: &HamiltonianSystem,
    cfg: &ZeroTestConfig,
) -> Result<InvarianceReport, CanonicalError> {
    let prolonged = field.prolong();
    let n = sys.space().dim();
    let equations = (0..n)
        .map(|i| (Equation::Position(i), sys.position_residual(i)))
        .chain((0..n).map(|i| (Equation::Momentum(i), sys.momentum_residual(i))))
        .map(|(equation, e)| {
            let residual = on_shell_reduce(&prolonged.apply(&e), sys)?;
            let verdict = is_zero(&residual, cfg)?;
            Ok(EquationCheck { equation, residual, verdict })
        })
        .collect::<Result<Vec<_>, CanonicalError>>()?;
    Ok(InvarianceReport { equations })
}
