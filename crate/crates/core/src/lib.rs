//! Symbolic and numerical tools for the correspondence between first
//! integrals of canonical (Hamiltonian) systems and the infinitesimal
//! transformations that leave Hamilton's equations invariant.
//!
//! Expressions live in a [`PhaseSpace`] with coordinates `x1..xn`, momenta
//! `p1..pn` and time `t`. Everything algebraic is done on the exact normal
//! form [`Poly`]; floats only appear in probing and integration.

pub mod canonical;
pub mod correspondence;
pub mod discovery;
pub mod exparse;
pub mod fields;
pub mod numverify;
pub mod symcore;

pub use canonical::{
    first_integral_residual, first_integral_test, poisson_bracket, total_derivative, CanonicalError,
    FirstIntegralReport, HamiltonianSystem, IntegralCandidate, PhaseSpace,
};
pub use correspondence::{
    field_from_integral, integral_from_field, levy_cerruti_split, normalize_addend, CorrespondenceError,
    LevyCerrutiReport, Reconstruction,
};
pub use exparse::{parse, render, ParseError};
pub use fields::{apply_field, invariance_check, prolong, ContactField, FieldError, InvarianceReport};
pub use symcore::{Expr, Poly, SymError, Var, ZeroTestConfig, ZeroVerdict};
pub use discovery::{discover_integrals, enumerate_basis, AnsatzSpace, DiscoveryError, IntegralBasis};
pub use numverify::{
    drift_report, flow_commutation_check, integrate_hamilton, CommutationReport, DriftStats, Method, NumError, Trajectory,
};
