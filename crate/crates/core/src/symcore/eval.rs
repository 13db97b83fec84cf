use std::collections::{BTreeMap, HashMap};

use num_traits::ToPrimitive;

use super::poly::{Atom, Poly};
use super::{Func, SymError, Var};

/// Source of numeric values for variables.
pub trait Env {
    fn value(&self, v: Var) -> Option<f64>;
}

impl Env for BTreeMap<Var, f64> {
    fn value(&self, v: Var) -> Option<f64> {
        self.get(&v).copied()
    }
}

impl Env for HashMap<Var, f64> {
    fn value(&self, v: Var) -> Option<f64> {
        self.get(&v).copied()
    }
}

impl<F: Fn(Var) -> Option<f64>> Env for F {
    fn value(&self, v: Var) -> Option<f64> {
        self(v)
    }
}

/// A phase-space point `(t, x, p)` viewed as an environment.
#[derive(Clone, Copy, Debug)]
pub struct PhasePoint<'a> {
    pub t: f64,
    pub x: &'a [f64],
    pub p: &'a [f64],
}

impl PhasePoint<'_> {
    /// Interprets `state` as `(x1..xn, p1..pn)`.
    pub fn from_state(t: f64, state: &[f64]) -> PhasePoint<'_> {
        let n = state.len() / 2;
        PhasePoint { t, x: &state[..n], p: &state[n..] }
    }
}

impl Env for PhasePoint<'_> {
    fn value(&self, v: Var) -> Option<f64> {
        match v {
            Var::T => Some(self.t),
            Var::X(i) => self.x.get(i).copied(),
            Var::P(i) => self.p.get(i).copied(),
            _ => None,
        }
    }
}

pub(crate) fn apply_func(f: Func, a: f64) -> Result<f64, SymError> {
    Ok(match f {
        Func::Sin => a.sin(),
        Func::Cos => a.cos(),
        Func::Exp => a.exp(),
        Func::Log if a <= 0.0 => return Err(SymError::DomainError(format!("log({a})"))),
        Func::Log => a.ln(),
        Func::Sqrt if a < 0.0 => return Err(SymError::DomainError(format!("sqrt({a})"))),
        Func::Sqrt => a.sqrt(),
    })
}

#[derive(Clone, Debug)]
enum CAtom {
    Var(Var),
    Func(Func, CompiledPoly),
    Inv(CompiledPoly),
}

/// Floating-point evaluator for a [`Poly`]; coefficients converted once.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(f64, Vec<(CAtom, i32)>)>,
}

impl CompiledPoly {
    pub fn new(p: &Poly) -> CompiledPoly {
        let terms = p
            .terms()
            .map(|(m, c)| {
                let factors = m
                    .factors()
                    .iter()
                    .map(|(a, e)| {
                        let ca = match a {
                            Atom::Var(v) => CAtom::Var(*v),
                            Atom::Func(f, arg) => CAtom::Func(*f, CompiledPoly::new(arg)),
                            Atom::Inv(q) => CAtom::Inv(CompiledPoly::new(q)),
                        };
                        (ca, *e)
                    })
                    .collect();
                (c.to_f64().unwrap_or(f64::NAN), factors)
            })
            .collect();
        CompiledPoly { terms }
    }

    pub fn eval(&self, env: &impl Env) -> Result<f64, SymError> {
        Ok(self.eval_with_scale(env)?.0)
    }

    /// Returns the value together with the sum of absolute term values,
    /// the natural scale for a relative zero test.
    pub fn eval_with_scale(&self, env: &impl Env) -> Result<(f64, f64), SymError> {
        let mut sum = 0.0;
        let mut scale = 0.0;
        for (c, factors) in &self.terms {
            let mut v = *c;
            for (a, e) in factors {
                let base = match a {
                    CAtom::Var(var) => env.value(*var).ok_or(SymError::UnboundVariable(*var))?,
                    CAtom::Func(f, arg) => apply_func(*f, arg.eval(env)?)?,
                    CAtom::Inv(q) => {
                        let d = q.eval(env)?;
                        if d == 0.0 {
                            return Err(SymError::DomainError("division by zero".into()));
                        }
                        1.0 / d
                    }
                };
                if base == 0.0 && *e < 0 {
                    return Err(SymError::DomainError("division by zero".into()));
                }
                v *= base.powi(*e);
            }
            sum += v;
            scale += v.abs();
        }
        if !sum.is_finite() {
            return Err(SymError::DomainError("non-finite value".into()));
        }
        Ok((sum, scale))
    }
}
