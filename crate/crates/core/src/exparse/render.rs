use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;

use crate::symcore::{Expr, ExprKind};

// binding strength, loosest first
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const POWER: u8 = 4;
const ATOM: u8 = 5;

fn strength(e: &Expr) -> u8 {
    match e.kind() {
        ExprKind::Add(..) | ExprKind::Sub(..) => SUM,
        ExprKind::Mul(..) | ExprKind::Div(..) => PRODUCT,
        ExprKind::Neg(_) => UNARY,
        ExprKind::Pow(..) => POWER,
        ExprKind::Const(c) if c.is_negative() => UNARY,
        ExprKind::Const(c) if !crate::symcore::expr_is_decimal(c) => PRODUCT,
        ExprKind::Const(_) | ExprKind::Var(_) | ExprKind::Func(..) => ATOM,
    }
}

fn decimal(c: &BigRational) -> String {
    let (int, frac) = c.numer().div_rem(c.denom());
    if frac == 0.into() {
        return int.to_string();
    }
    // terminating: scale the fraction by powers of ten until it is integral
    let mut digits = String::new();
    let mut rest = frac;
    let den = c.denom().clone();
    while rest != 0.into() {
        rest *= 10;
        let (d, r) = rest.div_rem(&den);
        digits.push_str(&d.to_string());
        rest = r;
    }
    format!("{int}.{digits}")
}

fn constant(c: &BigRational) -> String {
    if c.is_negative() {
        format!("-{}", constant(&-c))
    } else if crate::symcore::expr_is_decimal(c) {
        decimal(c)
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn write(e: &Expr, min: u8, out: &mut String) {
    let wrap = strength(e) < min;
    if wrap {
        out.push('(');
    }
    match e.kind() {
        ExprKind::Const(c) => out.push_str(&constant(c)),
        ExprKind::Var(v) => out.push_str(&v.to_string()),
        ExprKind::Add(a, b) => {
            write(a, SUM, out);
            out.push_str(" + ");
            write(b, PRODUCT, out);
        }
        ExprKind::Sub(a, b) => {
            write(a, SUM, out);
            out.push_str(" - ");
            write(b, PRODUCT, out);
        }
        ExprKind::Mul(a, b) => {
            write(a, PRODUCT, out);
            out.push('*');
            write(b, UNARY, out);
        }
        ExprKind::Div(a, b) => {
            write(a, PRODUCT, out);
            out.push('/');
            write(b, UNARY, out);
        }
        ExprKind::Neg(a) => {
            out.push('-');
            write(a, UNARY, out);
        }
        ExprKind::Pow(a, k) => {
            write(a, ATOM, out);
            out.push('^');
            out.push_str(&k.to_string());
        }
        ExprKind::Func(f, a) => {
            out.push_str(f.name());
            out.push('(');
            write(a, SUM, out);
            out.push(')');
        }
    }
    if wrap {
        out.push(')');
    }
}

/// Renders `e` with the fewest parentheses that re-parse to the same tree.
pub fn render(e: &Expr) -> String {
    let mut out = String::new();
    write(e, SUM, &mut out);
    out
}
