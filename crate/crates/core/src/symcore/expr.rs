use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::eval::Env;
use super::{Func, Poly, SymError, Var};

/// Immutable expression tree as written by a user.
///
/// Trees are cheap to clone (shared children). Structural equality is exact
/// tree equality; use [`Expr::normalize`] for algebraic equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Expr(Arc<ExprKind>);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExprKind {
    Const(BigRational),
    Var(Var),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Neg(Expr),
    Pow(Expr, i64),
    Func(Func, Expr),
}

impl Expr {
    pub fn new(kind: ExprKind) -> Expr {
        Expr(Arc::new(kind))
    }

    pub fn kind(&self) -> &ExprKind {
        &self.0
    }

    pub fn constant(value: BigRational) -> Expr {
        Expr::new(ExprKind::Const(value))
    }

    pub fn integer(value: i64) -> Expr {
        Expr::constant(BigRational::from_integer(value.into()))
    }

    pub fn var(v: Var) -> Expr {
        Expr::new(ExprKind::Var(v))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::new(ExprKind::Add(a, b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::new(ExprKind::Sub(a, b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::new(ExprKind::Mul(a, b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::new(ExprKind::Div(a, b))
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::new(ExprKind::Neg(a))
    }

    pub fn pow(a: Expr, k: i64) -> Expr {
        Expr::new(ExprKind::Pow(a, k))
    }

    pub fn func(f: Func, a: Expr) -> Expr {
        Expr::new(ExprKind::Func(f, a))
    }

    /// Canonical expanded form, rebuilt as a tree.
    pub fn normalize(&self) -> Result<Expr, SymError> {
        Ok(Poly::from_expr(self)?.to_expr())
    }

    pub fn to_poly(&self) -> Result<Poly, SymError> {
        Poly::from_expr(self)
    }

    /// Evaluates the tree as written, without normalizing first.
    pub fn eval(&self, env: &impl Env) -> Result<f64, SymError> {
        let value = match self.kind() {
            ExprKind::Const(c) => c.to_f64().unwrap_or(f64::NAN),
            ExprKind::Var(v) => env.value(*v).ok_or(SymError::UnboundVariable(*v))?,
            ExprKind::Add(a, b) => a.eval(env)? + b.eval(env)?,
            ExprKind::Sub(a, b) => a.eval(env)? - b.eval(env)?,
            ExprKind::Mul(a, b) => a.eval(env)? * b.eval(env)?,
            ExprKind::Div(a, b) => {
                let den = b.eval(env)?;
                if den == 0.0 {
                    return Err(SymError::DomainError("division by zero".into()));
                }
                a.eval(env)? / den
            }
            ExprKind::Neg(a) => -a.eval(env)?,
            ExprKind::Pow(a, k) => {
                let base = a.eval(env)?;
                if base == 0.0 && *k < 0 {
                    return Err(SymError::DomainError("division by zero".into()));
                }
                base.powi(clamp_exponent(*k))
            }
            ExprKind::Func(f, a) => super::eval::apply_func(*f, a.eval(env)?)?,
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(SymError::DomainError("non-finite value".into()))
        }
    }
}

fn clamp_exponent(k: i64) -> i32 {
    k.clamp(i32::MIN as i64, i32::MAX as i64) as i32
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self.kind(), f)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::exparse::render(self))
    }
}

/// True when `c` is a non-negative integer or has a terminating decimal expansion.
pub(crate) fn is_decimal(c: &BigRational) -> bool {
    let mut den = c.denom().clone();
    for p in [2u32, 5u32] {
        let p = num_bigint::BigInt::from(p);
        while (&den % &p).is_zero() {
            den /= &p;
        }
    }
    den.is_one() && !c.is_negative()
}
