#![allow(dead_code)]

use canon_symmetry_core::canonical::PhaseSpace;
use canon_symmetry_core::symcore::{Expr, Func, Poly, Var};
use proptest::prelude::*;

pub fn space(n: usize) -> PhaseSpace {
    PhaseSpace::new(n).unwrap()
}

/// Variables of a phase space of dimension `n`, optionally with `t`.
pub fn vars(n: usize, with_t: bool) -> Vec<Var> {
    let mut v: Vec<Var> = (0..n).map(Var::X).chain((0..n).map(Var::P)).collect();
    if with_t {
        v.push(Var::T);
    }
    v
}

pub fn monomial(vars: &[Var], exps: &[u32]) -> Poly {
    vars.iter()
        .zip(exps)
        .fold(Poly::one(), |acc, (v, e)| &acc * &Poly::var(*v).pow(i64::from(*e)).unwrap())
}

/// Sparse polynomial over `vars` with total degree at most `degree` and
/// small integer coefficients.
pub fn poly(vars: Vec<Var>, degree: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    let k = vars.len();
    prop::collection::vec((-5i64..=5, prop::collection::vec(0u32..=degree, k)), 1..=max_terms).prop_map(
        move |terms| {
            terms
                .into_iter()
                .map(|(c, mut exps)| {
                    // trim to the degree bound
                    while exps.iter().sum::<u32>() > degree {
                        let i = exps.iter().position(|e| *e > 0).unwrap();
                        exps[i] -= 1;
                    }
                    &Poly::integer(c) * &monomial(&vars, &exps)
                })
                .sum()
        },
    )
}

/// Random expression trees over `vars`, including functions and division by
/// non-vanishing constants.
pub fn expr(vars: Vec<Var>) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0i64..=9).prop_map(Expr::integer),
        (1i64..=9, 1i64..=8).prop_map(|(a, b)| Expr::div(Expr::integer(a), Expr::integer(b))),
        prop::sample::select(vars).prop_map(Expr::var),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            inner.clone().prop_map(Expr::neg),
            (inner.clone(), 0i64..=3).prop_map(|(a, k)| Expr::pow(a, k)),
            (inner.clone(), prop::sample::select(vec![Func::Sin, Func::Cos, Func::Exp]))
                .prop_map(|(a, f)| Expr::func(f, a)),
            (inner, 1i64..=5).prop_map(|(a, k)| Expr::div(a, Expr::integer(k))),
        ]
    })
}

/// Fully parenthesized text, independent of the library renderer.
pub fn naive_text(e: &Expr) -> String {
    use canon_symmetry_core::symcore::ExprKind::*;
    match e.kind() {
        Const(c) if c.is_integer() => format!("{}", c.numer()),
        Const(c) => format!("({}/{})", c.numer(), c.denom()),
        Var(v) => v.to_string(),
        Add(a, b) => format!("({} + {})", naive_text(a), naive_text(b)),
        Sub(a, b) => format!("({} - {})", naive_text(a), naive_text(b)),
        Mul(a, b) => format!("({} * {})", naive_text(a), naive_text(b)),
        Div(a, b) => format!("({} / {})", naive_text(a), naive_text(b)),
        Neg(a) => format!("(-{})", naive_text(a)),
        Pow(a, k) => format!("({}^{})", naive_text(a), k),
        Func(f, a) => format!("{}({})", f.name(), naive_text(a)),
    }
}
