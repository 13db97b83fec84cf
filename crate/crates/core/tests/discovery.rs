mod common;

use canon_symmetry_core::canonical::{first_integral_test, HamiltonianSystem, IntegralCandidate};
use canon_symmetry_core::discovery::{discover_integrals, enumerate_basis};
use canon_symmetry_core::symcore::{Poly, Var, ZeroTestConfig};
use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn generators_are_sound_and_deterministic(h in poly(vars(1, true), 3, 4), with_t in any::<bool>()) {
        let s = space(1);
        let sys = HamiltonianSystem::new(s, h.clone()).unwrap();
        let ansatz = enumerate_basis(s, 2, with_t).unwrap();
        let basis = discover_integrals(&sys, &ansatz).unwrap();
        prop_assert!(basis.dimension >= 1);
        prop_assert!(basis.spans(&Poly::one()));
        for g in &basis.generators {
            let r = first_integral_test(g, &sys, &ZeroTestConfig::default()).unwrap();
            prop_assert!(r.verdict.is_proved(), "{} is not an integral of {}", g.w, h);
        }
        prop_assert_eq!(&discover_integrals(&sys, &ansatz).unwrap(), &basis);
        // completeness for the energy whenever it lies in the ansatz
        if !h.contains_var(Var::T) && h.is_polynomial() {
            let in_ansatz = ansatz.coordinates(&h).is_some();
            prop_assert_eq!(basis.spans(&h), in_ansatz);
        }
    }

    #[test]
    fn products_of_known_integrals_are_found(a in -3i64..=3, b in -3i64..=3) {
        // H = p1^2/2 + p2^2/2 has integrals p1, p2 and x1*p2 - x2*p1
        let s = space(2);
        let sys = HamiltonianSystem::parse(s, "(p1^2 + p2^2)/2").unwrap();
        let basis = discover_integrals(&sys, &enumerate_basis(s, 2, false).unwrap()).unwrap();
        let w = s.parse(&format!("{a}*p1*p2 + {b}*(x1*p2 - x2*p1) + p2^2")).unwrap();
        prop_assert!(basis.spans(&w));
        let not = s.parse(&format!("{a}*p1*p2 + x1*p1 + {b}")).unwrap();
        prop_assert!(!basis.spans(&not));
    }
}

#[test]
fn boost_needs_time_in_the_ansatz() {
    let s = space(1);
    let sys = HamiltonianSystem::parse(s, "p1^2/2").unwrap();
    let boost = IntegralCandidate::new(s.parse("x1 - t*p1").unwrap()).unwrap();
    let without = discover_integrals(&sys, &enumerate_basis(s, 1, false).unwrap()).unwrap();
    assert_eq!(without.dimension, 2);
    assert!(!without.spans(&boost.w));
    let with = discover_integrals(&sys, &enumerate_basis(s, 1, true).unwrap()).unwrap();
    assert_eq!(with.dimension, 3);
    assert!(with.spans(&boost.w));
}
