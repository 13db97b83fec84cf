//! First integrals inside a finite polynomial ansatz.
//!
//! For `W = Σ cₐ mₐ` the map `c ↦ ∂W/∂t + {W, H}` is linear, so with a
//! polynomial `H` every image is a polynomial and the integrals in the ansatz
//! are exactly the rational nullspace of the coefficient matrix.

pub mod linalg;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::canonical::{
    first_integral_residual, first_integral_test, CanonicalError, HamiltonianSystem, IntegralCandidate, PhaseSpace,
};
use crate::symcore::{Monomial, Poly, Var, ZeroTestConfig};

/// Default cap on the number of ansatz monomials.
pub const DEFAULT_BASIS_CAP: usize = 5000;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum DiscoveryError {
    #[error("H must be a polynomial in t, x and p")]
    HNotPolynomial,
    #[error("ansatz would have {size} monomials, more than the cap of {cap}")]
    DegreeTooLarge { size: u128, cap: usize },
    #[error(transparent)]
    Canonical(#[from] CanonicalError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzSpace {
    space: PhaseSpace,
    degree: u32,
    include_t: bool,
    basis: Vec<Poly>,
}

impl AnsatzSpace {
    pub fn space(&self) -> PhaseSpace {
        self.space
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn include_t(&self) -> bool {
        self.include_t
    }

    /// Monomials in enumeration order, each a single-term [`Poly`].
    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Coordinates of `w` in the basis, or `None` if `w` uses a monomial
    /// outside the ansatz.
    pub fn coordinates(&self, w: &Poly) -> Option<Vec<BigRational>> {
        let index: BTreeMap<&Monomial, usize> =
            self.basis.iter().enumerate().map(|(i, m)| (monomial_of(m), i)).collect();
        let mut out = vec![BigRational::zero(); self.basis.len()];
        for (m, c) in w.terms() {
            out[*index.get(m)?] = c.clone();
        }
        Some(out)
    }
}

fn monomial_of(p: &Poly) -> &Monomial {
    p.terms().next().expect("basis entries are single monomials").0
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Number of monomials [`enumerate_basis`] produces.
pub fn basis_size(n: usize, degree: u32, include_t: bool) -> u128 {
    let d = u128::from(degree);
    let phase = binomial(2 * n as u128 + d, d);
    if include_t {
        phase.saturating_mul(d + 1)
    } else {
        phase
    }
}

/// Exponent vectors over `vars` variables with total degree at most `d`.
fn exponents(vars: usize, d: u32) -> Vec<Vec<u32>> {
    if vars == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in exponents(vars - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All monomials of degree at most `degree` in `(x, p)`, times `t^j` with
/// `j ≤ degree` when `include_t`; graded by total degree, then
/// lexicographic in `x1..xn, p1..pn, t` with higher powers first.
pub fn enumerate_basis(space: PhaseSpace, degree: u32, include_t: bool) -> Result<AnsatzSpace, DiscoveryError> {
    enumerate_basis_capped(space, degree, include_t, DEFAULT_BASIS_CAP)
}

pub fn enumerate_basis_capped(
    space: PhaseSpace,
    degree: u32,
    include_t: bool,
    cap: usize,
) -> Result<AnsatzSpace, DiscoveryError> {
    let size = basis_size(space.dim(), degree, include_t);
    if size > cap as u128 {
        return Err(DiscoveryError::DegreeTooLarge { size, cap });
    }
    let vars: Vec<Var> = space.coords().chain(space.momenta()).collect();
    let t_max = if include_t { degree } else { 0 };
    let mut keys: Vec<Vec<u32>> = exponents(vars.len(), degree)
        .into_iter()
        .flat_map(|e| {
            (0..=t_max).map(move |j| {
                let mut k = e.clone();
                k.push(j);
                k
            })
        })
        .collect();
    keys.sort_by(|a, b| {
        let (da, db) = (a.iter().sum::<u32>(), b.iter().sum::<u32>());
        da.cmp(&db).then_with(|| b.cmp(a))
    });
    let basis = keys
        .iter()
        .map(|k| {
            vars.iter()
                .chain(std::iter::once(&Var::T))
                .zip(k)
                .fold(Poly::one(), |acc, (v, e)| &acc * &Poly::var(*v).pow(i64::from(*e)).expect("small exponent"))
        })
        .collect();
    Ok(AnsatzSpace { space, degree, include_t, basis })
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegralBasis {
    pub generators: Vec<IntegralCandidate>,
    pub dimension: usize,
    /// Generator coefficients over the ansatz, integer-scaled.
    coordinates: Vec<Vec<BigRational>>,
    ansatz: AnsatzSpace,
}

impl IntegralBasis {
    pub fn ansatz(&self) -> &AnsatzSpace {
        &self.ansatz
    }

    /// Whether `w` lies in the rational span of the generators.
    pub fn spans(&self, w: &Poly) -> bool {
        let Some(target) = self.ansatz.coordinates(w) else {
            return false;
        };
        let ncols = self.ansatz.len();
        let mut rows = self.coordinates.clone();
        let before = linalg::rank(rows.clone(), ncols);
        rows.push(target);
        linalg::rank(rows, ncols) == before
    }
}

/// Nullspace of `c ↦ ∂W/∂t + {W, H}` over the ansatz, one generator per free
/// column of the reduced matrix.
pub fn discover_integrals(sys: &HamiltonianSystem, ansatz: &AnsatzSpace) -> Result<IntegralBasis, DiscoveryError> {
    if !sys.hamiltonian().is_polynomial() {
        return Err(DiscoveryError::HNotPolynomial);
    }
    let images: Vec<Poly> = ansatz.basis.iter().map(|m| first_integral_residual(m, sys)).collect();
    let mut rows_of: BTreeMap<Monomial, Vec<BigRational>> = BTreeMap::new();
    let ncols = images.len();
    for (col, image) in images.iter().enumerate() {
        for (m, c) in image.terms() {
            rows_of.entry(m.clone()).or_insert_with(|| vec![BigRational::zero(); ncols])[col] = c.clone();
        }
    }
    let nullspace = linalg::nullspace(rows_of.into_values().collect(), ncols);
    let mut generators = Vec::with_capacity(nullspace.len());
    let mut coordinates = Vec::with_capacity(nullspace.len());
    for v in &nullspace {
        let ints: Vec<BigRational> = linalg::integer_scaled(v).into_iter().map(BigRational::from_integer).collect();
        let w: Poly = ints
            .iter()
            .zip(&ansatz.basis)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, m)| m.scale(c))
            .sum();
        let candidate = IntegralCandidate { w, normalized: true };
        // exact arithmetic makes this a consistency check, not a filter
        assert!(
            first_integral_test(&candidate, sys, &ZeroTestConfig::default()).is_ok_and(|r| r.verdict.is_proved()),
            "nullspace vector {} is not an integral",
            candidate.w
        );
        generators.push(candidate);
        coordinates.push(ints);
    }
    Ok(IntegralBasis { dimension: generators.len(), generators, coordinates, ansatz: ansatz.clone() })
}
