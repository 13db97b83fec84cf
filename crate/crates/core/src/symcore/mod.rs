//! Symbolic core: expression trees, the canonical normal form, exact
//! differentiation and substitution, numeric evaluation and zero testing.
//!
//! Trees ([`Expr`]) are what users write; [`Poly`] is the normalized image
//! every algebraic operation works on. The free functions here accept trees
//! and return normalized trees.

mod eval;
mod expr;
mod poly;
mod var;
mod zero;

use std::collections::BTreeMap;

use thiserror::Error;

pub use eval::{CompiledPoly, Env, PhasePoint};
pub use expr::{Expr, ExprKind};
pub(crate) use expr::is_decimal as expr_is_decimal;
pub use poly::{denominator_lcm, Atom, Monomial, Poly, MAX_EXPONENT};
pub use var::{Func, Var};
pub use zero::{is_zero, ZeroTestConfig, ZeroVerdict};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SymError {
    #[error("division by a constant zero")]
    DivisionByZeroConstant,
    #[error("expression is not polynomial in the momenta")]
    NotPolynomialInMomenta,
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("variable {0} is not bound")]
    UnboundVariable(Var),
    #[error("could not find enough regular probe points after {attempts} draws")]
    ProbeDomainExhausted { attempts: usize },
    #[error("exponent {0} exceeds the supported range")]
    ExponentOverflow(i64),
}

pub fn normalize(e: &Expr) -> Result<Expr, SymError> {
    e.normalize()
}

pub fn differentiate(e: &Expr, v: Var) -> Result<Expr, SymError> {
    Ok(e.to_poly()?.diff(v).to_expr())
}

pub fn substitute(e: &Expr, bindings: &BTreeMap<Var, Expr>) -> Result<Expr, SymError> {
    let bindings = bindings
        .iter()
        .map(|(v, b)| Ok((*v, b.to_poly()?)))
        .collect::<Result<BTreeMap<_, _>, SymError>>()?;
    Ok(e.to_poly()?.substitute(&bindings)?.to_expr())
}

/// Components of `e` homogeneous in the momenta, keyed by degree.
pub fn split_by_p_degree(e: &Poly) -> Result<BTreeMap<u32, Poly>, SymError> {
    e.split_by_degree(Var::is_momentum)
}

pub fn eval_numeric(e: &Expr, point: &BTreeMap<Var, f64>) -> Result<f64, SymError> {
    e.eval(point)
}
