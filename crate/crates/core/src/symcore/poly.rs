//! Canonical normal form.
//!
//! A [`Poly`] is a finite sum of rational multiples of monomials. A monomial
//! is a product of integer powers of atoms, where an atom is a variable or an
//! opaque kernel: `f(P)` for an elementary function `f`, or `1/P` for a
//! polynomial `P` with more than one term. Kernel arguments are themselves in
//! normal form, so two expressions that expand to the same polynomial over the
//! same kernels compare equal.
//!
//! Kernel invariants kept by every constructor:
//! - `Inv(P)` appears only with positive exponent and `P` has at least two
//!   terms and its last term (in monomial order) has coefficient 1;
//! - `sqrt(P)` appears only with exponent 1 (even powers are folded into `P`);
//! - kernels never wrap a constant argument that folds (`sin(0)`, `sqrt(4)`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::eval::{CompiledPoly, Env};
use super::expr::{Expr, ExprKind};
use super::{Func, SymError, Var};

/// Largest exponent magnitude accepted when expanding powers.
pub const MAX_EXPONENT: i64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Var(Var),
    Func(Func, Arc<Poly>),
    Inv(Arc<Poly>),
}

impl Atom {
    pub fn contains_var(&self, v: Var) -> bool {
        match self {
            Atom::Var(w) => *w == v,
            Atom::Func(_, p) | Atom::Inv(p) => p.contains_var(v),
        }
    }

    pub fn is_kernel(&self) -> bool {
        !matches!(self, Atom::Var(_))
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Atom::Var(v) => {
                out.insert(*v);
            }
            Atom::Func(_, p) | Atom::Inv(p) => p.collect_vars(out),
        }
    }

    fn diff(&self, v: Var) -> Poly {
        match self {
            Atom::Var(w) if *w == v => Poly::one(),
            Atom::Var(_) => Poly::zero(),
            Atom::Func(f, arg) => {
                let inner = arg.diff(v);
                if inner.is_zero() {
                    return inner;
                }
                let outer = match f {
                    Func::Sin => Poly::atom(Atom::Func(Func::Cos, arg.clone()), 1),
                    Func::Cos => -Poly::atom(Atom::Func(Func::Sin, arg.clone()), 1),
                    Func::Exp => Poly::atom(self.clone(), 1),
                    Func::Log => arg.recip_nonzero(),
                    Func::Sqrt => canon_term(half(), vec![(self.clone(), -1)]),
                };
                &outer * &inner
            }
            Atom::Inv(q) => {
                let dq = q.diff(v);
                if dq.is_zero() {
                    return dq;
                }
                &canon_term(-BigRational::one(), vec![(self.clone(), 2)]) * &dq
            }
        }
    }
}

/// Product of atom powers, sorted by atom, no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Atom, i32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn factors(&self) -> &[(Atom, i32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Exponent of a plain variable factor (0 when absent).
    pub fn exponent_of(&self, v: Var) -> i32 {
        self.0
            .iter()
            .find(|(a, _)| *a == Atom::Var(v))
            .map_or(0, |(_, e)| *e)
    }

    fn merge(&self, other: &Monomial) -> Vec<(Atom, i32)> {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        out
    }
}

fn needs_fixup(factors: &[(Atom, i32)]) -> bool {
    factors.iter().any(|(a, e)| match a {
        Atom::Inv(_) => *e < 0,
        Atom::Func(Func::Sqrt, _) => *e != 1,
        _ => false,
    })
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

/// Builds `coeff * Π atom^e`, restoring the kernel invariants.
fn canon_term(coeff: BigRational, mut factors: Vec<(Atom, i32)>) -> Poly {
    if coeff.is_zero() {
        return Poly::zero();
    }
    factors.retain(|(_, e)| *e != 0);
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    // merge duplicates that a caller may have produced
    let mut merged: Vec<(Atom, i32)> = Vec::with_capacity(factors.len());
    for (a, e) in factors {
        match merged.last_mut() {
            Some((last, le)) if *last == a => *le += e,
            _ => merged.push((a, e)),
        }
    }
    merged.retain(|(_, e)| *e != 0);
    if !needs_fixup(&merged) {
        let mut p = Poly::zero();
        p.terms.insert(Monomial(merged), coeff);
        return p;
    }
    let mut kept = Vec::with_capacity(merged.len());
    let mut extra = Poly::constant(coeff);
    for (a, e) in merged {
        match &a {
            Atom::Inv(q) if e < 0 => extra = &extra * &q.pow_nonneg(e.unsigned_abs()),
            Atom::Func(Func::Sqrt, arg) if e != 1 => {
                let (q, r) = (e.div_euclid(2), e.rem_euclid(2));
                let folded = if q >= 0 {
                    arg.pow_nonneg(q as u32)
                } else {
                    arg.recip_nonzero().pow_nonneg(q.unsigned_abs())
                };
                extra = &extra * &folded;
                if r == 1 {
                    kept.push((a, 1));
                }
            }
            _ => kept.push((a, e)),
        }
    }
    let mut base = Poly::zero();
    base.terms.insert(Monomial(kept), BigRational::one());
    &base * &extra
}

/// Expanded sum of rational multiples of monomials; see the module docs.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Poly {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn integer(k: i64) -> Poly {
        Poly::constant(BigRational::from_integer(k.into()))
    }

    pub fn rational(num: i64, den: i64) -> Poly {
        Poly::constant(BigRational::new(num.into(), den.into()))
    }

    pub fn var(v: Var) -> Poly {
        Poly::atom(Atom::Var(v), 1)
    }

    pub fn atom(a: Atom, e: i32) -> Poly {
        canon_term(BigRational::one(), vec![(a, e)])
    }

    /// Single term `coeff * m`; `m` must already be canonical.
    pub fn term(m: Monomial, coeff: BigRational) -> Poly {
        let mut p = Poly::zero();
        p.add_term(m, coeff);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    fn pow_nonneg(&self, mut k: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn pow(&self, k: i64) -> Result<Poly, SymError> {
        if k.abs() > MAX_EXPONENT {
            return Err(SymError::ExponentOverflow(k));
        }
        if k >= 0 {
            Ok(self.pow_nonneg(k as u32))
        } else {
            Ok(self.recip()?.pow_nonneg(k.unsigned_abs() as u32))
        }
    }

    pub fn recip(&self) -> Result<Poly, SymError> {
        if self.is_zero() {
            return Err(SymError::DivisionByZeroConstant);
        }
        Ok(self.recip_nonzero())
    }

    fn recip_nonzero(&self) -> Poly {
        assert!(!self.is_zero(), "reciprocal of zero");
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            let inverted = m.0.iter().map(|(a, e)| (a.clone(), -e)).collect();
            return canon_term(c.recip(), inverted);
        }
        let lead = self.terms.values().next_back().unwrap().clone();
        let monic = self.scale(&lead.recip());
        canon_term(lead.recip(), vec![(Atom::Inv(Arc::new(monic)), 1)])
    }

    /// `f(arg)`, folding the constant cases that have exact values.
    pub fn apply(f: Func, arg: Poly) -> Result<Poly, SymError> {
        if let Some(c) = arg.as_constant() {
            match f {
                Func::Sin if c.is_zero() => return Ok(Poly::zero()),
                Func::Cos | Func::Exp if c.is_zero() => return Ok(Poly::one()),
                Func::Log if c.is_one() => return Ok(Poly::zero()),
                Func::Log if !c.is_positive() => {
                    return Err(SymError::DomainError(format!("log of non-positive constant {c}")))
                }
                Func::Sqrt if c.is_negative() => {
                    return Err(SymError::DomainError(format!("sqrt of negative constant {c}")))
                }
                Func::Sqrt => {
                    if let Some(root) = exact_sqrt(&c) {
                        return Ok(Poly::constant(root));
                    }
                }
                _ => {}
            }
        }
        Ok(Poly::atom(Atom::Func(f, Arc::new(arg)), 1))
    }

    /// Exact partial derivative.
    pub fn diff(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (idx, (a, e)) in m.0.iter().enumerate() {
                if !a.contains_var(v) {
                    continue;
                }
                let da = a.diff(v);
                if da.is_zero() {
                    continue;
                }
                let mut rest = m.0.clone();
                rest[idx].1 -= 1;
                let coeff = c * BigRational::from_integer(BigInt::from(*e));
                out = &out + &(&canon_term(coeff, rest) * &da);
            }
        }
        out
    }

    /// Simultaneous substitution of variables by normal forms.
    pub fn substitute(&self, bindings: &BTreeMap<Var, Poly>) -> Result<Poly, SymError> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let touches = |a: &Atom| bindings.keys().any(|v| a.contains_var(*v));
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if !m.0.iter().any(|(a, _)| touches(a)) {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            let mut term = Poly::constant(c.clone());
            for (a, e) in &m.0 {
                let factor = if touches(a) {
                    let replaced = match a {
                        Atom::Var(w) => bindings.get(w).cloned().unwrap_or_else(|| Poly::var(*w)),
                        Atom::Func(f, arg) => Poly::apply(*f, arg.substitute(bindings)?)?,
                        Atom::Inv(q) => q.substitute(bindings)?.recip()?,
                    };
                    replaced.pow(*e as i64)?
                } else {
                    Poly::atom(a.clone(), *e)
                };
                term = &term * &factor;
            }
            out = &out + &term;
        }
        Ok(out)
    }

    pub fn substitute_var(&self, v: Var, value: &Poly) -> Result<Poly, SymError> {
        self.substitute(&BTreeMap::from([(v, value.clone())]))
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.0.iter().any(|(a, _)| a.contains_var(v)))
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        for m in self.terms.keys() {
            for (a, _) in &m.0 {
                a.collect_vars(out);
            }
        }
    }

    pub fn has_kernels(&self) -> bool {
        self.terms.keys().any(|m| m.0.iter().any(|(a, _)| a.is_kernel()))
    }

    /// No kernels and no negative exponents.
    pub fn is_polynomial(&self) -> bool {
        self.terms
            .keys()
            .all(|m| m.0.iter().all(|(a, e)| !a.is_kernel() && *e > 0))
    }

    /// Splits into components homogeneous in the variables selected by
    /// `graded`, keyed by degree.
    pub fn split_by_degree(&self, graded: impl Fn(Var) -> bool) -> Result<BTreeMap<u32, Poly>, SymError> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut degree = 0u32;
            for (a, e) in &m.0 {
                match a {
                    Atom::Var(v) if graded(*v) => {
                        if *e < 0 {
                            return Err(SymError::NotPolynomialInMomenta);
                        }
                        degree += *e as u32;
                    }
                    Atom::Var(_) => {}
                    _ => {
                        let mut vs = BTreeSet::new();
                        a.collect_vars(&mut vs);
                        if vs.into_iter().any(&graded) {
                            return Err(SymError::NotPolynomialInMomenta);
                        }
                    }
                }
            }
            out.entry(degree).or_default().add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn eval(&self, env: &impl Env) -> Result<f64, SymError> {
        CompiledPoly::new(self).eval(env)
    }

    pub fn from_expr(e: &Expr) -> Result<Poly, SymError> {
        Ok(match e.kind() {
            ExprKind::Const(c) => Poly::constant(c.clone()),
            ExprKind::Var(v) => Poly::var(*v),
            ExprKind::Add(a, b) => &Poly::from_expr(a)? + &Poly::from_expr(b)?,
            ExprKind::Sub(a, b) => &Poly::from_expr(a)? - &Poly::from_expr(b)?,
            ExprKind::Mul(a, b) => &Poly::from_expr(a)? * &Poly::from_expr(b)?,
            ExprKind::Div(a, b) => &Poly::from_expr(a)? * &recip_expr(b)?,
            ExprKind::Neg(a) => -Poly::from_expr(a)?,
            ExprKind::Pow(a, k) => Poly::from_expr(a)?.pow(*k)?,
            ExprKind::Func(f, a) => Poly::apply(*f, Poly::from_expr(a)?)?,
        })
    }

    /// Canonical tree for this normal form. Only non-negative integer
    /// constants appear as leaves, so the rendered text parses back to the
    /// identical tree.
    pub fn to_expr(&self) -> Expr {
        let mut acc: Option<Expr> = None;
        for (m, c) in &self.terms {
            let negative = c.is_negative();
            acc = Some(match acc {
                None => term_expr(c.abs(), m, negative),
                Some(prev) => {
                    let t = term_expr(c.abs(), m, false);
                    if negative {
                        Expr::sub(prev, t)
                    } else {
                        Expr::add(prev, t)
                    }
                }
            });
        }
        acc.unwrap_or_else(|| Expr::integer(0))
    }
}

fn recip_expr(e: &Expr) -> Result<Poly, SymError> {
    match e.kind() {
        ExprKind::Mul(a, b) => Ok(&recip_expr(a)? * &recip_expr(b)?),
        ExprKind::Div(a, b) => Ok(&recip_expr(a)? * &Poly::from_expr(b)?),
        ExprKind::Neg(a) => Ok(-recip_expr(a)?),
        ExprKind::Pow(a, k) => Poly::from_expr(a)?.pow(-k),
        _ => Poly::from_expr(e)?.recip(),
    }
}

fn exact_sqrt(c: &BigRational) -> Option<BigRational> {
    let (n, d) = (c.numer(), c.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| BigRational::new(rn, rd))
}

fn big_const(k: &BigInt) -> Expr {
    Expr::constant(BigRational::from_integer(k.clone()))
}

fn product(factors: Vec<Expr>) -> Option<Expr> {
    factors.into_iter().reduce(Expr::mul)
}

fn power(base: Expr, e: i32) -> Expr {
    if e == 1 {
        base
    } else {
        Expr::pow(base, e as i64)
    }
}

/// `|c| * m` as a tree; `negate_lead` puts the sign on the first numerator
/// factor so that e.g. `-2*x1` renders and re-parses as `Mul(Neg(2), x1)`.
fn term_expr(c: BigRational, m: &Monomial, negate_lead: bool) -> Expr {
    let mut num = Vec::new();
    let mut den = Vec::new();
    for (a, e) in &m.0 {
        match a {
            Atom::Var(v) => {
                if *e > 0 {
                    num.push(power(Expr::var(*v), *e));
                } else {
                    den.push(power(Expr::var(*v), -e));
                }
            }
            Atom::Func(f, arg) => {
                let base = Expr::func(*f, arg.to_expr());
                if *e > 0 {
                    num.push(power(base, *e));
                } else {
                    den.push(power(base, -e));
                }
            }
            Atom::Inv(q) => den.push(power(q.to_expr(), *e)),
        }
    }
    if !c.numer().is_one() || num.is_empty() {
        num.insert(0, big_const(c.numer()));
    }
    if !c.denom().is_one() {
        den.insert(0, big_const(c.denom()));
    }
    if negate_lead {
        num[0] = Expr::neg(num[0].clone());
    }
    let numerator = product(num).expect("numerator has at least one factor");
    match product(den) {
        Some(d) => Expr::div(numerator, d),
        None => numerator,
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let (mut big, small) = if self.len() >= rhs.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let factors = ma.merge(mb);
                let c = ca * cb;
                if needs_fixup(&factors) {
                    out = &out + &canon_term(c, factors);
                } else {
                    out.add_term(Monomial(factors), c);
                }
            }
        }
        out
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -self.clone()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::zero(), |acc, p| &acc + &p)
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Poly {
        Poly::var(v)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_expr(), f)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// Least common multiple of all coefficient denominators.
pub fn denominator_lcm(p: &Poly) -> BigInt {
    p.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()))
}
