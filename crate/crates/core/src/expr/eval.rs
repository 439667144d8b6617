use super::Expr;
use crate::error::{Error, Result};
use crate::prolongation::APoint;
use crate::weil_algebra::{pow_by_squaring, taylor_lift, PrimitiveFn, WeilElement};

fn var_range(i: usize, n: usize) -> Error {
    Error::DimensionMismatch {
        expected: n,
        actual: i + 1,
    }
}

impl Expr {
    /// `f^A(ξ)`: evaluation at an A-point by ring operations and Taylor lifts.
    pub fn eval_weil(&self, point: &APoint) -> Result<WeilElement> {
        let alg = point.algebra();
        Ok(match self {
            Expr::Var(i) => point.coords().get(*i).cloned().ok_or_else(|| var_range(*i, point.dim()))?,
            Expr::ConstR(v) => WeilElement::constant(alg, *v),
            Expr::ConstA(a) => {
                if !a.algebra().same_as(alg) {
                    return Err(Error::AlgebraMismatch);
                }
                a.clone()
            }
            Expr::Add(a, b) => a.eval_weil(point)?.try_add(&b.eval_weil(point)?)?,
            Expr::Sub(a, b) => a.eval_weil(point)?.try_sub(&b.eval_weil(point)?)?,
            Expr::Mul(a, b) => a.eval_weil(point)?.try_mul(&b.eval_weil(point)?)?,
            Expr::Div(a, b) => {
                let num = a.eval_weil(point)?;
                let inv = taylor_lift(PrimitiveFn::Recip, &b.eval_weil(point)?)?;
                num.try_mul(&inv)?
            }
            Expr::Neg(a) => a.eval_weil(point)?.neg(),
            Expr::Pow(a, k) => {
                let mut base = a.eval_weil(point)?;
                if *k < 0 {
                    base = taylor_lift(PrimitiveFn::Recip, &base)?;
                }
                pow_by_squaring(&base, k.unsigned_abs(), WeilElement::one(alg), |x, y| {
                    x.try_mul(y).expect("same algebra")
                })
            }
            Expr::Apply(f, a) => taylor_lift(*f, &a.eval_weil(point)?)?,
        })
    }

    /// Real evaluation; coincides with [`Expr::eval_weil`] over the trivial algebra `R`.
    pub fn eval_real(&self, p: &[f64]) -> Result<f64> {
        Ok(match self {
            Expr::Var(i) => *p.get(*i).ok_or_else(|| var_range(*i, p.len()))?,
            Expr::ConstR(v) => *v,
            Expr::ConstA(a) => {
                if a.algebra().dim() != 1 {
                    return Err(Error::AlgebraMismatch);
                }
                a.augmentation()
            }
            Expr::Add(a, b) => a.eval_real(p)? + b.eval_real(p)?,
            Expr::Sub(a, b) => a.eval_real(p)? - b.eval_real(p)?,
            Expr::Mul(a, b) => a.eval_real(p)? * b.eval_real(p)?,
            Expr::Div(a, b) => {
                let num = a.eval_real(p)?;
                num * PrimitiveFn::Recip.eval(b.eval_real(p)?)?
            }
            Expr::Neg(a) => -a.eval_real(p)?,
            Expr::Pow(a, k) => {
                let mut base = a.eval_real(p)?;
                if *k < 0 {
                    base = PrimitiveFn::Recip.eval(base)?;
                }
                pow_by_squaring(&base, k.unsigned_abs(), 1.0, |x, y| x * y)
            }
            Expr::Apply(f, a) => f.eval(a.eval_real(p)?)?,
        })
    }
}
