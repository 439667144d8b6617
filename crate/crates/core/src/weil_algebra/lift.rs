//! Lifting elementary functions to Weil algebras by nilpotent Taylor expansion.
//!
//! For `a = r + n` with `r` real and `n` in the maximal ideal,
//! `g(a) = Σ_{j≤h} g^{(j)}(r)/j! · n^j`, which is exact because `n^{h+1} = 0`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::WeilElement;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PrimitiveFn {
    Exp,
    Log,
    Sin,
    Cos,
    Tan,
    Sqrt,
    /// `u ↦ u^p` for a real exponent `p`.
    Pow(f64),
    Recip,
}

impl PrimitiveFn {
    /// Name used by the expression grammar.
    pub fn name(&self) -> &'static str {
        match self {
            PrimitiveFn::Exp => "exp",
            PrimitiveFn::Log => "log",
            PrimitiveFn::Sin => "sin",
            PrimitiveFn::Cos => "cos",
            PrimitiveFn::Tan => "tan",
            PrimitiveFn::Sqrt => "sqrt",
            PrimitiveFn::Pow(_) => "pow",
            PrimitiveFn::Recip => "recip",
        }
    }

    /// Unary primitives by grammar name (`pow` takes an extra argument and is excluded).
    pub fn unary_from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => PrimitiveFn::Exp,
            "log" => PrimitiveFn::Log,
            "sin" => PrimitiveFn::Sin,
            "cos" => PrimitiveFn::Cos,
            "tan" => PrimitiveFn::Tan,
            "sqrt" => PrimitiveFn::Sqrt,
            "recip" => PrimitiveFn::Recip,
            _ => return None,
        })
    }

    /// Real evaluation with domain checks matching [`taylor_coefficients`] at order 0.
    pub fn eval(&self, r: f64) -> Result<f64> {
        Ok(taylor_coefficients(*self, r, 0)?[0])
    }
}

impl fmt::Display for PrimitiveFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn domain(prim: PrimitiveFn, r: f64, why: &str) -> Error {
    Error::DomainError(format!("{prim} at {r}: {why}"))
}

fn factorial(j: usize) -> f64 {
    (1..=j).map(|k| k as f64).product()
}

/// Normalized Taylor coefficients `g^{(j)}(r)/j!` for `j = 0..=order`, from closed forms.
pub fn taylor_coefficients(prim: PrimitiveFn, r: f64, order: usize) -> Result<Vec<f64>> {
    let n = order + 1;
    let coeffs = match prim {
        PrimitiveFn::Exp => {
            let e = r.exp();
            (0..n).map(|j| e / factorial(j)).collect()
        }
        PrimitiveFn::Log => {
            if r <= 0.0 || r.is_nan() {
                return Err(domain(prim, r, "requires a positive argument"));
            }
            let mut c = vec![r.ln()];
            for j in 1..n {
                let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
                c.push(sign / (j as f64 * r.powi(j as i32)));
            }
            c
        }
        PrimitiveFn::Sin | PrimitiveFn::Cos => {
            let (s, co) = r.sin_cos();
            let cycle = if prim == PrimitiveFn::Sin {
                [s, co, -s, -co]
            } else {
                [co, -s, -co, s]
            };
            (0..n).map(|j| cycle[j % 4] / factorial(j)).collect()
        }
        PrimitiveFn::Tan => {
            let sin = taylor_coefficients(PrimitiveFn::Sin, r, order)?;
            let cos = taylor_coefficients(PrimitiveFn::Cos, r, order)?;
            if cos[0] == 0.0 {
                return Err(domain(prim, r, "cosine vanishes"));
            }
            let mut c = vec![r.tan()];
            for k in 1..n {
                let mut acc = sin[k];
                for j in 1..=k {
                    acc -= cos[j] * c[k - j];
                }
                c.push(acc / cos[0]);
            }
            c
        }
        PrimitiveFn::Sqrt => {
            if r < 0.0 || r.is_nan() {
                return Err(domain(prim, r, "requires a non-negative argument"));
            }
            if r == 0.0 && order > 0 {
                return Err(domain(prim, r, "derivatives are unbounded at 0"));
            }
            let mut c = power_series(0.5, r, order);
            c[0] = r.sqrt();
            c
        }
        PrimitiveFn::Pow(p) => {
            let integral = p.fract() == 0.0;
            if integral {
                if r == 0.0 && p < 0.0 {
                    return Err(domain(prim, r, "negative power of zero"));
                }
            } else {
                if r < 0.0 || r.is_nan() {
                    return Err(domain(prim, r, "non-integer power of a negative number"));
                }
                if r == 0.0 && p < order as f64 {
                    return Err(domain(prim, r, "derivatives are unbounded at 0"));
                }
            }
            power_series(p, r, order)
        }
        PrimitiveFn::Recip => {
            if r == 0.0 {
                return Err(domain(prim, r, "division by zero"));
            }
            let inv = 1.0 / r;
            let mut c = Vec::with_capacity(n);
            let mut term = inv;
            for _ in 0..n {
                c.push(term);
                term *= -inv;
            }
            c
        }
    };
    Ok(coeffs)
}

/// `binom(p, j) · r^(p − j)`; terms with a vanishing binomial factor are exactly zero.
fn power_series(p: f64, r: f64, order: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(order + 1);
    let mut binom = 1.0;
    for j in 0..=order {
        if j > 0 {
            binom *= (p - (j as f64 - 1.0)) / j as f64;
        }
        if binom == 0.0 {
            c.push(0.0);
        } else {
            c.push(binom * r.powf(p - j as f64));
        }
    }
    c
}

/// `g(a)` for `a` in a Weil algebra of height `h`.
pub fn taylor_lift(prim: PrimitiveFn, a: &WeilElement) -> Result<WeilElement> {
    let alg = a.algebra();
    let h = alg.height() as usize;
    let r = a.augmentation();
    let coeffs = taylor_coefficients(prim, r, h)?;
    if h == 0 {
        return Ok(WeilElement::constant(alg, coeffs[0]));
    }
    let n = a.nilpotent_part();
    // Horner in the nilpotent part
    let mut acc = WeilElement::constant(alg, coeffs[h]);
    for j in (0..h).rev() {
        acc = acc.mul_unchecked(&n);
        let mut c = acc.into_coeffs();
        c[0] += coeffs[j];
        acc = WeilElement::new(alg, c)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weil_algebra::{AlgebraPresentation, WeilAlgebra};

    #[test]
    fn exp_over_dual() {
        let d = WeilAlgebra::build(AlgebraPresentation::dual()).unwrap();
        let at0 = taylor_lift(PrimitiveFn::Exp, &WeilElement::new(&d, vec![0.0, 1.0]).unwrap()).unwrap();
        assert_eq!(at0.coeffs(), &[1.0, 1.0]);
        let at1 = taylor_lift(PrimitiveFn::Exp, &WeilElement::new(&d, vec![1.0, 1.0]).unwrap()).unwrap();
        let e = std::f64::consts::E;
        assert!((at1.coeffs()[0] - e).abs() < 1e-9);
        assert!((at1.coeffs()[1] - e).abs() < 1e-9);
    }

    #[test]
    fn domain_errors() {
        let d = WeilAlgebra::build(AlgebraPresentation::dual()).unwrap();
        let eps = WeilElement::new(&d, vec![0.0, 1.0]).unwrap();
        assert!(matches!(taylor_lift(PrimitiveFn::Log, &eps), Err(Error::DomainError(_))));
        assert!(matches!(taylor_lift(PrimitiveFn::Recip, &eps), Err(Error::DomainError(_))));
        assert!(matches!(taylor_lift(PrimitiveFn::Sqrt, &eps), Err(Error::DomainError(_))));
        assert!(matches!(
            taylor_lift(PrimitiveFn::Pow(0.5), &WeilElement::new(&d, vec![-1.0, 1.0]).unwrap()),
            Err(Error::DomainError(_))
        ));
        assert!(matches!(
            taylor_coefficients(PrimitiveFn::Pow(-1.0), 0.0, 0),
            Err(Error::DomainError(_))
        ));
        assert_eq!(taylor_coefficients(PrimitiveFn::Sqrt, 0.0, 0).unwrap(), vec![0.0]);
    }

    #[test]
    fn polynomial_power_matches_ring_ops() {
        let j3 = WeilAlgebra::build(AlgebraPresentation::jets(3)).unwrap();
        let a = WeilElement::new(&j3, vec![-1.5, 2.0, 0.5, -1.0]).unwrap();
        let lifted = taylor_lift(PrimitiveFn::Pow(3.0), &a).unwrap();
        let direct = a.powi_nonneg(3);
        assert!(lifted.approx_eq(&direct, 1e-12), "{lifted} vs {direct}");
    }

    #[test]
    fn recip_inverts() {
        let a = WeilAlgebra::build(AlgebraPresentation::multi_jets(vec!["x", "y"], 2)).unwrap();
        let e = WeilElement::new(&a, vec![0.7, 0.3, -0.2, 0.1, 0.4, -0.3]).unwrap();
        let inv = taylor_lift(PrimitiveFn::Recip, &e).unwrap();
        assert!(e.try_mul(&inv).unwrap().approx_eq(&WeilElement::one(&a), 1e-14));
    }

    #[test]
    fn tan_is_sin_over_cos() {
        let j4 = WeilAlgebra::build(AlgebraPresentation::jets(4)).unwrap();
        let e = WeilElement::new(&j4, vec![0.4, 1.0, 0.0, 0.0, 0.0]).unwrap();
        let t = taylor_lift(PrimitiveFn::Tan, &e).unwrap();
        let c = taylor_lift(PrimitiveFn::Cos, &e).unwrap();
        let s = taylor_lift(PrimitiveFn::Sin, &e).unwrap();
        assert!(t.try_mul(&c).unwrap().approx_eq(&s, 1e-14));
    }

    #[test]
    fn sqrt_squares_back() {
        let j3 = WeilAlgebra::build(AlgebraPresentation::jets(3)).unwrap();
        let e = WeilElement::new(&j3, vec![2.0, 0.5, -0.3, 0.2]).unwrap();
        let s = taylor_lift(PrimitiveFn::Sqrt, &e).unwrap();
        assert!(s.try_mul(&s).unwrap().approx_eq(&e, 1e-14));
    }

    #[test]
    fn real_part_is_primitive_value() {
        let j2 = WeilAlgebra::build(AlgebraPresentation::jets(2)).unwrap();
        for prim in [PrimitiveFn::Exp, PrimitiveFn::Sin, PrimitiveFn::Log, PrimitiveFn::Pow(1.7)] {
            let e = WeilElement::new(&j2, vec![0.9, 0.3, 0.1]).unwrap();
            assert_eq!(taylor_lift(prim, &e).unwrap().augmentation(), prim.eval(0.9).unwrap());
        }
    }
}
