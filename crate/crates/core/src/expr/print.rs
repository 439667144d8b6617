//! Printer emitting the same grammar the parser accepts; `parse(print(e)) == e`.

use std::fmt::{self, Write};

use super::Expr;
use crate::weil_algebra::PrimitiveFn;

const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const POWER: u8 = 4;
const ATOM: u8 = 5;

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => SUM,
        Expr::Mul(..) | Expr::Div(..) => PRODUCT,
        Expr::Neg(_) => UNARY,
        Expr::ConstR(v) if v.is_sign_negative() => UNARY,
        Expr::Pow(..) => POWER,
        _ => ATOM,
    }
}

fn write_real(out: &mut String, v: f64) {
    // `{:?}` is the shortest representation that reads back to the same bits
    let _ = write!(out, "{v:?}");
}

fn write_child(out: &mut String, e: &Expr, min_level: u8) {
    if level(e) < min_level {
        out.push('(');
        write_expr(out, e);
        out.push(')');
    } else {
        write_expr(out, e);
    }
}

fn write_expr(out: &mut String, e: &Expr) {
    match e {
        Expr::Var(i) => {
            let _ = write!(out, "x{}", i + 1);
        }
        Expr::ConstR(v) => write_real(out, *v),
        Expr::ConstA(a) => {
            out.push('{');
            for (k, c) in a.coeffs().iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                write_real(out, *c);
            }
            out.push('}');
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            write_child(out, a, SUM);
            out.push_str(if matches!(e, Expr::Add(..)) { " + " } else { " - " });
            write_child(out, b, PRODUCT);
        }
        Expr::Mul(a, b) | Expr::Div(a, b) => {
            write_child(out, a, PRODUCT);
            out.push_str(if matches!(e, Expr::Mul(..)) { "*" } else { "/" });
            write_child(out, b, UNARY);
        }
        Expr::Neg(a) => {
            out.push('-');
            if matches!(**a, Expr::ConstR(_)) {
                // `-3.0` would read back as a negative literal
                out.push('(');
                write_expr(out, a);
                out.push(')');
            } else {
                write_child(out, a, UNARY);
            }
        }
        Expr::Pow(a, k) => {
            write_child(out, a, ATOM);
            let _ = write!(out, "^{k}");
        }
        Expr::Apply(PrimitiveFn::Pow(p), a) => {
            out.push_str("pow(");
            write_expr(out, a);
            out.push_str(", ");
            write_real(out, *p);
            out.push(')');
        }
        Expr::Apply(f, a) => {
            out.push_str(f.name());
            out.push('(');
            write_expr(out, a);
            out.push(')');
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_expr(&mut s, self);
        f.write_str(&s)
    }
}
