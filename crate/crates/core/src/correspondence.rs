//! The correspondence between first integrals and symmetry fields.
//!
//! A characteristic function `W` generates the field `ξᵢ = ∂W/∂pᵢ`,
//! `πᵢ = −∂W/∂xᵢ`, whose action on any `e` is `v(e) = {e, W}`. The field
//! leaves Hamilton's equations invariant iff `∂W/∂t + {W, H}` depends on `t`
//! alone, and after subtracting an antiderivative of that function of `t`,
//! `W` is a first integral. Conversely a field whose increments pass the
//! closedness conditions is generated by some `W`, recovered here either as
//! `Σ pᵢ ξᵢ` (homogeneous contact fields) or by integrating
//! `−πᵢ dxᵢ + ξᵢ dpᵢ` along a ray from a base point.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::canonical::{first_integral_residual, CanonicalError, HamiltonianSystem, IntegralCandidate, PhaseSpace};
use crate::fields::ContactField;
use crate::symcore::{is_zero, split_by_p_degree, Atom, Func, Poly, SymError, Var, ZeroTestConfig, ZeroVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContactCondition {
    /// `∂ξᵢ/∂pⱼ = ∂ξⱼ/∂pᵢ`
    XiMomentumSymmetry,
    /// `∂πᵢ/∂xⱼ = ∂πⱼ/∂xᵢ`
    PiCoordinateSymmetry,
    /// `∂ξᵢ/∂xⱼ = −∂πⱼ/∂pᵢ`
    Mixed,
}

impl fmt::Display for ContactCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContactCondition::XiMomentumSymmetry => "dxi_i/dp_j = dxi_j/dp_i",
            ContactCondition::PiCoordinateSymmetry => "dpi_i/dx_j = dpi_j/dx_i",
            ContactCondition::Mixed => "dxi_i/dx_j = -dpi_j/dp_i",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum CorrespondenceError {
    #[error("not a contact field: {condition} fails for i={}, j={} (difference {difference})", .i + 1, .j + 1)]
    NotContactField { condition: ContactCondition, i: usize, j: usize, difference: Poly },
    #[error("field is singular at the base point")]
    BasePointSingular,
    #[error("integrand is not polynomial along the integration path")]
    NonIntegrableAlongPath,
    #[error("base point has {got} entries, expected {expected}")]
    BasePointDimension { expected: usize, got: usize },
    #[error("residual {residual} depends on x or p; the field is not a symmetry")]
    NotInvariant { residual: Poly },
    #[error("no closed-form antiderivative in t for {residual}")]
    NoClosedFormAntiderivative { residual: Poly },
    #[error("H is not of the form T(x, p) - U(x) with T quadratic in p")]
    HNotKineticMinusPotential,
    #[error("W is not linear and homogeneous in p")]
    WNotLinearHomogeneous(Box<LevyCerrutiReport>),
    #[error(transparent)]
    Canonical(#[from] CanonicalError),
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// `ξᵢ = ∂W/∂pᵢ`, `πᵢ = −∂W/∂xᵢ`; the result carries `W` as its generator.
pub fn field_from_integral(w: &IntegralCandidate, space: &PhaseSpace) -> ContactField {
    let xi = space.momenta().map(|p| w.w.diff(p)).collect();
    let pi = space.coords().map(|x| -w.w.diff(x)).collect();
    ContactField::new(*space, xi, pi)
        .expect("derivatives of a jet-free W form a valid field")
        .with_generator(w.w.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReconstructionPath {
    /// `W = Σ pᵢ ξᵢ`
    Homogeneous,
    /// Ray integral from the base point.
    LineIntegral,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub candidate: IntegralCandidate,
    pub path: ReconstructionPath,
    /// `∂W/∂t + {W, H}` for the returned candidate; zero when normalized.
    pub residual: Poly,
}

fn exact_point(values: &[f64]) -> Result<Vec<BigRational>, CorrespondenceError> {
    values
        .iter()
        .map(|v| BigRational::from_float(*v).ok_or(CorrespondenceError::BasePointSingular))
        .collect()
}

/// Checks the three closedness conditions for every index pair.
pub fn check_contact(field: &ContactField, cfg: &ZeroTestConfig) -> Result<(), CorrespondenceError> {
    let n = field.space().dim();
    let (xi, pi) = (field.xi(), field.pi());
    for i in 0..n {
        for j in 0..n {
            let mut pairs = vec![(
                ContactCondition::Mixed,
                &xi[i].diff(Var::X(j)) + &pi[j].diff(Var::P(i)),
            )];
            if i < j {
                pairs.push((ContactCondition::XiMomentumSymmetry, &xi[i].diff(Var::P(j)) - &xi[j].diff(Var::P(i))));
                pairs.push((ContactCondition::PiCoordinateSymmetry, &pi[i].diff(Var::X(j)) - &pi[j].diff(Var::X(i))));
            }
            for (condition, difference) in pairs {
                if !is_zero(&difference, cfg)?.is_zero() {
                    return Err(CorrespondenceError::NotContactField { condition, i, j, difference });
                }
            }
        }
    }
    Ok(())
}

fn is_homogeneous_contact(field: &ContactField, cfg: &ZeroTestConfig) -> Result<bool, CorrespondenceError> {
    let n = field.space().dim();
    for j in 0..n {
        let mut lifted = field.pi()[j].clone();
        let mut vertical = Poly::zero();
        for i in 0..n {
            let p = Poly::var(Var::P(i));
            lifted = &lifted + &(&p * &field.xi()[i].diff(Var::X(j)));
            vertical = &vertical + &(&p * &field.xi()[i].diff(Var::P(j)));
        }
        if !is_zero(&lifted, cfg)?.is_zero() || !is_zero(&vertical, cfg)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `∫₀¹ Σ [−πᵢ(b + s(z−b))(xᵢ − bxᵢ) + ξᵢ(b + s(z−b))(pᵢ − bpᵢ)] ds`.
fn ray_potential(field: &ContactField, base: &[BigRational]) -> Result<Poly, CorrespondenceError> {
    let n = field.space().dim();
    let s = Poly::var(Var::Path);
    let mut at_base = BTreeMap::new();
    let mut along_ray = BTreeMap::new();
    let mut offsets = Vec::with_capacity(2 * n);
    for (k, v) in field.space().coords().chain(field.space().momenta()).enumerate() {
        let b = Poly::constant(base[k].clone());
        let offset = &Poly::var(v) - &b;
        at_base.insert(v, b.clone());
        along_ray.insert(v, &b + &(&s * &offset));
        offsets.push(offset);
    }
    for c in field.xi().iter().chain(field.pi()) {
        c.substitute(&at_base).map_err(|_| CorrespondenceError::BasePointSingular)?;
    }
    let mut integrand = Poly::zero();
    for i in 0..n {
        let xi = field.xi()[i].substitute(&along_ray).map_err(|_| CorrespondenceError::NonIntegrableAlongPath)?;
        let pi = field.pi()[i].substitute(&along_ray).map_err(|_| CorrespondenceError::NonIntegrableAlongPath)?;
        integrand = &integrand - &(&pi * &offsets[i]);
        integrand = &integrand + &(&xi * &offsets[n + i]);
    }
    let mut out = Poly::zero();
    for (m, c) in integrand.terms() {
        let mut k = 0;
        for (a, e) in m.factors() {
            match a {
                Atom::Var(Var::Path) if *e > 0 => k = *e,
                Atom::Var(Var::Path) => return Err(CorrespondenceError::NonIntegrableAlongPath),
                Atom::Var(_) => {}
                kernel if kernel.contains_var(Var::Path) => return Err(CorrespondenceError::NonIntegrableAlongPath),
                _ => {}
            }
        }
        let term = Poly::term(m.clone(), c / BigRational::from_integer(BigInt::from(k + 1)));
        out = &out + &term.substitute_var(Var::Path, &Poly::one())?;
    }
    Ok(out)
}

/// Recovers a characteristic function for `field` and normalizes its
/// additive function of `t` against `sys` when the field is a symmetry.
///
/// If the field passes the closedness gate but is not a symmetry of `sys`,
/// the candidate is returned with `normalized == false` and a non-zero
/// residual.
pub fn integral_from_field(
    field: &ContactField,
    sys: &HamiltonianSystem,
    base_point: Option<&[f64]>,
    cfg: &ZeroTestConfig,
) -> Result<Reconstruction, CorrespondenceError> {
    let n = field.space().dim();
    check_contact(field, cfg)?;
    let (w, path) = if is_homogeneous_contact(field, cfg)? {
        let w = (0..n).map(|i| &Poly::var(Var::P(i)) * &field.xi()[i]).sum();
        (w, ReconstructionPath::Homogeneous)
    } else {
        let base = match base_point {
            Some(b) if b.len() != 2 * n => {
                return Err(CorrespondenceError::BasePointDimension { expected: 2 * n, got: b.len() })
            }
            Some(b) => exact_point(b)?,
            None => vec![BigRational::zero(); 2 * n],
        };
        (ray_potential(field, &base)?, ReconstructionPath::LineIntegral)
    };
    let raw = IntegralCandidate::new(w)?;
    match normalize_addend(&raw, sys) {
        Ok(candidate) => Ok(Reconstruction { candidate, path, residual: Poly::zero() }),
        Err(CorrespondenceError::NotInvariant { residual })
        | Err(CorrespondenceError::NoClosedFormAntiderivative { residual }) => {
            Ok(Reconstruction { candidate: raw, path, residual })
        }
        Err(other) => Err(other),
    }
}

/// Removes the additive function of `t` so that `∂W/∂t + {W, H}` vanishes.
pub fn normalize_addend(
    w: &IntegralCandidate,
    sys: &HamiltonianSystem,
) -> Result<IntegralCandidate, CorrespondenceError> {
    let residual = first_integral_residual(&w.w, sys);
    if residual.is_zero() {
        return Ok(IntegralCandidate { w: w.w.clone(), normalized: true });
    }
    let space = sys.space();
    if space.coords().chain(space.momenta()).any(|v| !residual.diff(v).is_zero()) {
        return Err(CorrespondenceError::NotInvariant { residual });
    }
    let g = antiderivative_in_t(&residual).ok_or_else(|| CorrespondenceError::NoClosedFormAntiderivative {
        residual: residual.clone(),
    })?;
    let corrected = &w.w - &g;
    debug_assert!(first_integral_residual(&corrected, sys).is_zero());
    Ok(IntegralCandidate { w: corrected, normalized: true })
}

/// Antiderivative in `t` of sums of `c · t^k · f(a t + b)` with
/// `f ∈ {sin, cos, exp}` (or no kernel), other factors free of `t`.
pub fn antiderivative_in_t(r: &Poly) -> Option<Poly> {
    let mut out = Poly::zero();
    for (m, c) in r.terms() {
        let mut k = 0u32;
        let mut kernel: Option<(Func, Poly)> = None;
        let mut rest = Vec::new();
        for (a, e) in m.factors() {
            match a {
                Atom::Var(Var::T) if *e > 0 => k = *e as u32,
                Atom::Var(Var::T) => return None,
                Atom::Func(f @ (Func::Sin | Func::Cos | Func::Exp), arg)
                    if *e == 1 && kernel.is_none() && arg.contains_var(Var::T) =>
                {
                    kernel = Some((*f, (**arg).clone()))
                }
                other if other.contains_var(Var::T) => return None,
                other => rest.push(Poly::atom(other.clone(), *e)),
            }
        }
        let coeff: Poly = rest.into_iter().fold(Poly::constant(c.clone()), |acc, f| &acc * &f);
        let integral = match kernel {
            None => {
                let t = Poly::var(Var::T).pow(k as i64 + 1).ok()?;
                t.scale(&BigRational::new(1.into(), (k + 1).into()))
            }
            Some((f, arg)) => {
                let slope = arg.diff(Var::T).as_constant().filter(|a| !a.is_zero())?;
                kernel_power_integral(k, f, &arg, &slope)
            }
        };
        out = &out + &(&coeff * &integral);
    }
    Some(out)
}

/// `∫ t^k f(arg) dt` by repeated integration by parts; `arg` linear in `t`
/// with slope `a`.
fn kernel_power_integral(k: u32, f: Func, arg: &Poly, a: &BigRational) -> Poly {
    let inv_a = a.recip();
    let (g, sign) = match f {
        Func::Sin => (Func::Cos, -BigRational::one()),
        Func::Cos => (Func::Sin, BigRational::one()),
        _ => (Func::Exp, BigRational::one()),
    };
    // antiderivative of f(arg) is sign/a * g(arg)
    let factor = &sign * &inv_a;
    let first = Poly::apply(g, arg.clone()).expect("non-constant argument").scale(&factor);
    if k == 0 {
        return first;
    }
    let tk = Poly::var(Var::T).pow(k as i64).expect("small exponent");
    let rest = kernel_power_integral(k - 1, g, arg, a).scale(&(&factor * BigRational::from_integer(k.into())));
    &(&tk * &first) - &rest
}

/// Outcome of splitting the first-integral condition by degree in `p` for
/// `H = T − U` and a linear-homogeneous `W`.
#[derive(Clone, Debug, PartialEq)]
pub struct LevyCerrutiReport {
    pub is_linear_homogeneous: bool,
    /// Point transformation `ξᵢ(t, x)` when `W` is linear and homogeneous in `p`.
    pub point_field: Option<Vec<Poly>>,
    pub kinetic: Poly,
    pub potential: Poly,
    /// Verdict on `v(T) = {T, W}` (the Killing condition for the metric of `T`).
    pub t_admits: Option<ZeroVerdict>,
    /// Verdict on `v(U) = Σ ξᵢ ∂U/∂xᵢ`.
    pub u_admits: Option<ZeroVerdict>,
    /// Degree components of `v(H) − ∂W/∂t`, the negated first-integral
    /// residual: degree 2 is `v(T)`, degree 1 is `−∂W/∂t`, degree 0 is `−v(U)`.
    pub degree_residuals: BTreeMap<u32, Poly>,
}

impl LevyCerrutiReport {
    /// Both parts of `H` admit the point transformation and `W` has no
    /// explicit time dependence left over.
    pub fn admits(&self) -> bool {
        let ok = |v: &Option<ZeroVerdict>| v.as_ref().is_some_and(ZeroVerdict::is_zero);
        ok(&self.t_admits) && ok(&self.u_admits) && self.degree_residuals.get(&1).is_none_or(Poly::is_zero)
    }
}

pub fn levy_cerruti_split(
    w: &IntegralCandidate,
    sys: &HamiltonianSystem,
    cfg: &ZeroTestConfig,
) -> Result<LevyCerrutiReport, CorrespondenceError> {
    let h_parts = split_by_p_degree(sys.hamiltonian()).map_err(|_| CorrespondenceError::HNotKineticMinusPotential)?;
    if !h_parts.contains_key(&2) || h_parts.keys().any(|d| *d != 0 && *d != 2) {
        return Err(CorrespondenceError::HNotKineticMinusPotential);
    }
    let kinetic = h_parts[&2].clone();
    let potential = -h_parts.get(&0).cloned().unwrap_or_default();
    let mut report = LevyCerrutiReport {
        is_linear_homogeneous: false,
        point_field: None,
        kinetic,
        potential,
        t_admits: None,
        u_admits: None,
        degree_residuals: BTreeMap::new(),
    };
    let space = sys.space();
    let linear = split_by_p_degree(&w.w).is_ok_and(|parts| parts.keys().all(|d| *d == 1));
    let xi: Vec<Poly> = space.momenta().map(|p| w.w.diff(p)).collect();
    if !linear || w.w.is_zero() || xi.iter().any(|c| space.momenta().any(|p| c.contains_var(p))) {
        return Err(CorrespondenceError::WNotLinearHomogeneous(Box::new(report)));
    }
    let field = field_from_integral(w, &space);
    let v_kinetic = field.apply_unchecked(&report.kinetic);
    let v_potential = field.apply_unchecked(&report.potential);
    report.is_linear_homogeneous = true;
    report.t_admits = Some(is_zero(&v_kinetic, cfg)?);
    report.u_admits = Some(is_zero(&v_potential, cfg)?);
    let negated_residual = -first_integral_residual(&w.w, sys);
    report.degree_residuals = split_by_p_degree(&negated_residual)?
        .into_iter()
        .filter(|(_, p)| !p.is_zero())
        .collect();
    report.point_field = Some(xi);
    Ok(report)
}
