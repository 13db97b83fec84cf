//! Phase space, the canonical Poisson bracket, total time derivatives and the
//! first-integral test.
//!
//! Bracket convention: `{F, G} = Σ ∂F/∂xᵢ ∂G/∂pᵢ − ∂F/∂pᵢ ∂G/∂xᵢ`, and `W` is a
//! first integral of `H` iff `∂W/∂t + {W, H} = 0`. The classical notation
//! `(H, W)` for the same quantity corresponds to `{W, H}` here.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::exparse::{parse, ParseError};
use crate::symcore::{is_zero, Poly, SymError, Var, ZeroTestConfig, ZeroVerdict};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum CanonicalError {
    #[error("phase space needs at least one degree of freedom")]
    EmptyPhaseSpace,
    #[error("expression contains jet variable {0}")]
    JetVariablePresent(Var),
    #[error("variable {0} is not declared in a phase space of dimension {1}")]
    UndeclaredVariable(Var, usize),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// `n` coordinates `x1..xn`, momenta `p1..pn`, time `t`, and the jet
/// coordinates `xdot1..xdotn`, `pdot1..pdotn`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PhaseSpace {
    n: usize,
}

impl PhaseSpace {
    pub fn new(n: usize) -> Result<PhaseSpace, CanonicalError> {
        if n == 0 {
            return Err(CanonicalError::EmptyPhaseSpace);
        }
        Ok(PhaseSpace { n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> impl Iterator<Item = Var> {
        (0..self.n).map(Var::X)
    }

    pub fn momenta(&self) -> impl Iterator<Item = Var> {
        (0..self.n).map(Var::P)
    }

    /// Every declared variable, `4n + 1` in total.
    pub fn variables(&self) -> Vec<Var> {
        let n = self.n;
        (0..n)
            .map(Var::X)
            .chain((0..n).map(Var::P))
            .chain(std::iter::once(Var::T))
            .chain((0..n).map(Var::XDot))
            .chain((0..n).map(Var::PDot))
            .collect()
    }

    pub fn declares(&self, v: Var) -> bool {
        match v {
            Var::T => true,
            Var::X(i) | Var::P(i) | Var::XDot(i) | Var::PDot(i) => i < self.n,
            Var::Path => false,
        }
    }

    pub fn resolve(&self, name: &str) -> Option<Var> {
        Var::from_name(name).filter(|v| self.declares(*v))
    }

    /// Parses and normalizes.
    pub fn parse(&self, text: &str) -> Result<Poly, CanonicalError> {
        Ok(parse(text, self)?.to_poly()?)
    }

    pub(crate) fn check_declared(&self, e: &Poly) -> Result<(), CanonicalError> {
        match e.vars().into_iter().find(|v| !self.declares(*v)) {
            Some(v) => Err(CanonicalError::UndeclaredVariable(v, self.n)),
            None => Ok(()),
        }
    }
}

pub(crate) fn ensure_jet_free(e: &Poly) -> Result<(), CanonicalError> {
    match e.vars().into_iter().find(|v| v.is_jet()) {
        Some(v) => Err(CanonicalError::JetVariablePresent(v)),
        None => Ok(()),
    }
}

/// Hamilton's equations `ẋᵢ = ∂H/∂pᵢ`, `ṗᵢ = −∂H/∂xᵢ` for a given `H(t, x, p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSystem {
    space: PhaseSpace,
    hamiltonian: Poly,
}

impl HamiltonianSystem {
    pub fn new(space: PhaseSpace, hamiltonian: Poly) -> Result<Self, CanonicalError> {
        space.check_declared(&hamiltonian)?;
        ensure_jet_free(&hamiltonian)?;
        Ok(HamiltonianSystem { space, hamiltonian })
    }

    pub fn parse(space: PhaseSpace, text: &str) -> Result<Self, CanonicalError> {
        HamiltonianSystem::new(space, space.parse(text)?)
    }

    pub fn space(&self) -> PhaseSpace {
        self.space
    }

    pub fn hamiltonian(&self) -> &Poly {
        &self.hamiltonian
    }

    pub fn is_autonomous(&self) -> bool {
        !self.hamiltonian.contains_var(Var::T)
    }

    /// `E⁽¹⁾ᵢ = ẋᵢ − ∂H/∂pᵢ`.
    pub fn position_residual(&self, i: usize) -> Poly {
        &Poly::var(Var::XDot(i)) - &self.hamiltonian.diff(Var::P(i))
    }

    /// `E⁽²⁾ᵢ = ṗᵢ + ∂H/∂xᵢ`.
    pub fn momentum_residual(&self, i: usize) -> Poly {
        &Poly::var(Var::PDot(i)) + &self.hamiltonian.diff(Var::X(i))
    }

    /// Substitution `ẋᵢ → ∂H/∂pᵢ`, `ṗᵢ → −∂H/∂xᵢ`.
    pub fn on_shell_bindings(&self) -> BTreeMap<Var, Poly> {
        let h = &self.hamiltonian;
        (0..self.space.dim())
            .flat_map(|i| [(Var::XDot(i), h.diff(Var::P(i))), (Var::PDot(i), -h.diff(Var::X(i)))])
            .collect()
    }
}

/// A candidate characteristic function `W(t, x, p)`.
///
/// `normalized` is set once the first-integral residual has been made exactly
/// zero by fixing the free additive function of `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralCandidate {
    pub w: Poly,
    pub normalized: bool,
}

impl IntegralCandidate {
    pub fn new(w: Poly) -> Result<Self, CanonicalError> {
        ensure_jet_free(&w)?;
        Ok(IntegralCandidate { w, normalized: false })
    }
}

pub fn poisson_bracket(f: &Poly, g: &Poly, space: &PhaseSpace) -> Result<Poly, CanonicalError> {
    ensure_jet_free(f)?;
    ensure_jet_free(g)?;
    Ok(bracket(f, g, space))
}

pub(crate) fn bracket(f: &Poly, g: &Poly, space: &PhaseSpace) -> Poly {
    (0..space.dim())
        .map(|i| {
            let (x, p) = (Var::X(i), Var::P(i));
            &(&f.diff(x) * &g.diff(p)) - &(&f.diff(p) * &g.diff(x))
        })
        .sum()
}

/// `d/dt = ∂/∂t + Σ ẋᵢ ∂/∂xᵢ + Σ ṗᵢ ∂/∂pᵢ` on jet-free expressions.
pub fn total_derivative(e: &Poly, space: &PhaseSpace) -> Result<Poly, CanonicalError> {
    ensure_jet_free(e)?;
    let mut out = e.diff(Var::T);
    for i in 0..space.dim() {
        out = &out + &(&Poly::var(Var::XDot(i)) * &e.diff(Var::X(i)));
        out = &out + &(&Poly::var(Var::PDot(i)) * &e.diff(Var::P(i)));
    }
    Ok(out)
}

/// Restricts to solutions of the system by eliminating the jet variables.
pub fn on_shell_reduce(e: &Poly, sys: &HamiltonianSystem) -> Result<Poly, CanonicalError> {
    Ok(e.substitute(&sys.on_shell_bindings())?)
}

/// `∂W/∂t + {W, H}`.
pub fn first_integral_residual(w: &Poly, sys: &HamiltonianSystem) -> Poly {
    &w.diff(Var::T) + &bracket(w, sys.hamiltonian(), &sys.space())
}

#[derive(Clone, Debug, PartialEq)]
pub struct FirstIntegralReport {
    pub residual: Poly,
    pub verdict: ZeroVerdict,
}

impl FirstIntegralReport {
    pub fn passed(&self) -> bool {
        self.verdict.is_zero()
    }
}

pub fn first_integral_test(
    w: &IntegralCandidate,
    sys: &HamiltonianSystem,
    cfg: &ZeroTestConfig,
) -> Result<FirstIntegralReport, CanonicalError> {
    let residual = first_integral_residual(&w.w, sys);
    let verdict = is_zero(&residual, cfg)?;
    Ok(FirstIntegralReport { residual, verdict })
}
