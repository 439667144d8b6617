//! Smooth-function expressions over chart coordinates `x1..xn`.
//!
//! An [`Expr`] without `ConstA` nodes is an element of `C∞(M)`; with them it is
//! one of the represented functions `M^A → A` (A-linear combinations and
//! compositions of prolonged functions). Variable indices are 0-based in the
//! API and printed 1-based (`Var(0)` is `x1`).

mod diff;
mod eval;
mod parse;
mod print;

use std::ops;

use crate::error::{Error, Result};
use crate::weil_algebra::{Algebra, PrimitiveFn, WeilElement};

pub use parse::{parse, parse_with_algebra};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Var(usize),
    ConstR(f64),
    ConstA(WeilElement),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i32),
    Apply(PrimitiveFn, Box<Expr>),
}

/// A function `M^A → A` in the represented class. Real expressions are included:
/// they stand for their own prolongation.
pub type AFunction = Expr;

fn as_real(e: &Expr) -> Option<f64> {
    match e {
        Expr::ConstR(v) => Some(*v),
        _ => None,
    }
}

impl Expr {
    pub fn var(i: usize) -> Self {
        Expr::Var(i)
    }

    pub fn real(v: f64) -> Self {
        Expr::ConstR(v)
    }

    pub fn zero() -> Self {
        Expr::ConstR(0.0)
    }

    pub fn one() -> Self {
        Expr::ConstR(1.0)
    }

    pub fn constant(a: WeilElement) -> Self {
        Expr::ConstA(a)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::ConstR(v) if *v == 0.0)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::ConstR(v) if *v == 1.0)
    }

    // Folding constructors: constant folding and 0/1 identities only.

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (as_real(&a), as_real(&b)) {
            (Some(x), Some(y)) => Expr::ConstR(x + y),
            (Some(x), _) if x == 0.0 => b,
            (_, Some(y)) if y == 0.0 => a,
            _ => Expr::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (as_real(&a), as_real(&b)) {
            (Some(x), Some(y)) => Expr::ConstR(x - y),
            (_, Some(y)) if y == 0.0 => a,
            (Some(x), _) if x == 0.0 => Expr::neg(b),
            _ => Expr::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (as_real(&a), as_real(&b)) {
            (Some(x), Some(y)) => Expr::ConstR(x * y),
            (Some(x), _) if x == 0.0 => Expr::zero(),
            (_, Some(y)) if y == 0.0 => Expr::zero(),
            (Some(x), _) if x == 1.0 => b,
            (_, Some(y)) if y == 1.0 => a,
            _ => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        match (as_real(&a), as_real(&b)) {
            (Some(x), Some(y)) if y != 0.0 => Expr::ConstR(x / y),
            (_, Some(y)) if y == 1.0 => a,
            _ => Expr::Div(Box::new(a), Box::new(b)),
        }
    }

    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::ConstR(v) => Expr::ConstR(-v),
            Expr::Neg(inner) => *inner,
            other => Expr::Neg(Box::new(other)),
        }
    }

    pub fn pow(a: Expr, k: i32) -> Expr {
        match (k, as_real(&a)) {
            (0, _) => Expr::one(),
            (1, _) => a,
            (_, Some(v)) if k > 0 => Expr::ConstR(v.powi(k)),
            _ => Expr::Pow(Box::new(a), k),
        }
    }

    pub fn apply(f: PrimitiveFn, a: Expr) -> Expr {
        Expr::Apply(f, Box::new(a))
    }

    pub fn sum<I: IntoIterator<Item = Expr>>(terms: I) -> Expr {
        terms.into_iter().fold(Expr::zero(), Expr::add)
    }

    fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Var(_) | Expr::ConstR(_) | Expr::ConstA(_) => vec![],
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => vec![a, b],
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Apply(_, a) => vec![a],
        }
    }

    /// True when the expression has no `ConstA` node, i.e. lies in `C∞(M)`.
    pub fn is_real(&self) -> bool {
        match self {
            Expr::ConstA(_) => false,
            other => other.children().into_iter().all(Expr::is_real),
        }
    }

    /// The algebra referenced by the `ConstA` nodes, `None` for real expressions;
    /// `AlgebraMismatch` when two nodes disagree.
    pub fn algebra(&self) -> Result<Option<Algebra>> {
        fn walk(e: &Expr, found: &mut Option<Algebra>) -> Result<()> {
            if let Expr::ConstA(a) = e {
                match found {
                    Some(f) if !f.same_as(a.algebra()) => return Err(Error::AlgebraMismatch),
                    Some(_) => {}
                    None => *found = Some(a.algebra().clone()),
                }
            }
            for c in e.children() {
                walk(c, found)?;
            }
            Ok(())
        }
        let mut found = None;
        walk(self, &mut found)?;
        Ok(found)
    }

    /// One more than the largest variable index used, 0 for constants.
    pub fn arity(&self) -> usize {
        match self {
            Expr::Var(i) => i + 1,
            other => other.children().into_iter().map(Expr::arity).max().unwrap_or(0),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Expr::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().into_iter().map(Expr::depth).max().unwrap_or(0)
    }

    /// Replaces `Var(j)` by `replacements[j]`, forming the composition `self ∘ h`.
    pub fn substitute(&self, replacements: &[Expr]) -> Result<Expr> {
        Ok(match self {
            Expr::Var(j) => replacements
                .get(*j)
                .cloned()
                .ok_or(Error::DimensionMismatch {
                    expected: j + 1,
                    actual: replacements.len(),
                })?,
            Expr::ConstR(_) | Expr::ConstA(_) => self.clone(),
            Expr::Add(a, b) => Expr::Add(Box::new(a.substitute(replacements)?), Box::new(b.substitute(replacements)?)),
            Expr::Sub(a, b) => Expr::Sub(Box::new(a.substitute(replacements)?), Box::new(b.substitute(replacements)?)),
            Expr::Mul(a, b) => Expr::Mul(Box::new(a.substitute(replacements)?), Box::new(b.substitute(replacements)?)),
            Expr::Div(a, b) => Expr::Div(Box::new(a.substitute(replacements)?), Box::new(b.substitute(replacements)?)),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(replacements)?)),
            Expr::Pow(a, k) => Expr::Pow(Box::new(a.substitute(replacements)?), *k),
            Expr::Apply(f, a) => Expr::Apply(*f, Box::new(a.substitute(replacements)?)),
        })
    }

    /// Checks that every variable index is below the chart dimension `n`.
    pub fn check_arity(&self, n: usize) -> Result<()> {
        let needed = self.arity();
        if needed > n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: needed,
            });
        }
        Ok(())
    }
}

impl From<f64> for Expr {
    fn from(v: f64) -> Self {
        Expr::ConstR(v)
    }
}

impl From<WeilElement> for Expr {
    fn from(a: WeilElement) -> Self {
        Expr::ConstA(a)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $ctor:path) => {
        impl ops::$trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $ctor(self, rhs)
            }
        }
        impl ops::$trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                $ctor(self.clone(), rhs.clone())
            }
        }
        impl ops::$trait<f64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                $ctor(self, Expr::ConstR(rhs))
            }
        }
    };
}

binop!(Add, add, Expr::add);
binop!(Sub, sub, Expr::sub);
binop!(Mul, mul, Expr::mul);
binop!(Div, div, Expr::div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folding() {
        let x = Expr::var(0);
        assert_eq!(Expr::add(Expr::zero(), x.clone()), x);
        assert_eq!(Expr::mul(Expr::one(), x.clone()), x);
        assert_eq!(Expr::mul(x.clone(), Expr::zero()), Expr::zero());
        assert_eq!(Expr::mul(Expr::real(2.0), Expr::real(3.0)), Expr::real(6.0));
        assert_eq!(Expr::pow(x.clone(), 1), x);
        assert_eq!(Expr::pow(x.clone(), 0), Expr::one());
        assert_eq!(Expr::sub(Expr::zero(), x.clone()), Expr::Neg(Box::new(x)));
    }

    #[test]
    fn substitution_composes() {
        // g = x1 + 1, h = (x1^2)
        let g = Expr::Add(Box::new(Expr::var(0)), Box::new(Expr::one()));
        let h = Expr::Pow(Box::new(Expr::var(0)), 2);
        let composed = g.substitute(&[h.clone()]).unwrap();
        assert_eq!(composed, Expr::Add(Box::new(h), Box::new(Expr::one())));
        assert!(Expr::var(1).substitute(&[Expr::one()]).is_err());
    }

    #[test]
    fn arity_and_reality() {
        let e = Expr::var(2) * Expr::var(0);
        assert_eq!(e.arity(), 3);
        assert!(e.is_real());
        assert!(e.check_arity(2).is_err());
    }
}
