use super::Expr;
use crate::weil_algebra::PrimitiveFn;

impl Expr {
    /// Symbolic partial derivative `∂/∂x_{i+1}`. Constants of both kinds are
    /// annihilated, so the result is A-linear in the `ConstA` nodes.
    pub fn diff(&self, i: usize) -> Expr {
        match self {
            Expr::Var(j) => Expr::real(if *j == i { 1.0 } else { 0.0 }),
            Expr::ConstR(_) | Expr::ConstA(_) => Expr::zero(),
            Expr::Add(a, b) => Expr::add(a.diff(i), b.diff(i)),
            Expr::Sub(a, b) => Expr::sub(a.diff(i), b.diff(i)),
            Expr::Mul(a, b) => Expr::add(
                Expr::mul(a.diff(i), (**b).clone()),
                Expr::mul((**a).clone(), b.diff(i)),
            ),
            Expr::Div(a, b) => {
                let num = Expr::sub(
                    Expr::mul(a.diff(i), (**b).clone()),
                    Expr::mul((**a).clone(), b.diff(i)),
                );
                Expr::div(num, Expr::pow((**b).clone(), 2))
            }
            Expr::Neg(a) => Expr::neg(a.diff(i)),
            Expr::Pow(a, k) => {
                if *k == 0 {
                    return Expr::zero();
                }
                let outer = Expr::mul(Expr::real(*k as f64), Expr::pow((**a).clone(), k - 1));
                Expr::mul(a.diff(i), outer)
            }
            Expr::Apply(f, a) => {
                let inner = a.diff(i);
                if inner.is_zero() {
                    return Expr::zero();
                }
                let u = (**a).clone();
                let outer = match f {
                    PrimitiveFn::Exp => Expr::apply(PrimitiveFn::Exp, u),
                    PrimitiveFn::Log => Expr::div(Expr::one(), u),
                    PrimitiveFn::Sin => Expr::apply(PrimitiveFn::Cos, u),
                    PrimitiveFn::Cos => Expr::neg(Expr::apply(PrimitiveFn::Sin, u)),
                    PrimitiveFn::Tan => {
                        Expr::add(Expr::one(), Expr::pow(Expr::apply(PrimitiveFn::Tan, u), 2))
                    }
                    PrimitiveFn::Sqrt => Expr::div(
                        Expr::real(0.5),
                        Expr::apply(PrimitiveFn::Sqrt, u),
                    ),
                    PrimitiveFn::Pow(p) => Expr::mul(
                        Expr::real(*p),
                        Expr::apply(PrimitiveFn::Pow(p - 1.0), u),
                    ),
                    PrimitiveFn::Recip => {
                        Expr::neg(Expr::pow(Expr::apply(PrimitiveFn::Recip, u), 2))
                    }
                };
                Expr::mul(inner, outer)
            }
        }
    }

    /// All first partials `(∂_1 e, …, ∂_n e)`.
    pub fn gradient(&self, n: usize) -> Vec<Expr> {
        (0..n).map(|i| self.diff(i)).collect()
    }
}
