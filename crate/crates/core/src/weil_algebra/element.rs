use std::fmt;

use super::Algebra;
use crate::error::{Error, Result};

/// An element of a Weil algebra, stored as coefficients over the standard-monomial basis.
#[derive(Debug, Clone)]
pub struct WeilElement {
    algebra: Algebra,
    coeffs: Vec<f64>,
}

impl PartialEq for WeilElement {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.same_as(&other.algebra) && self.coeffs == other.coeffs
    }
}

impl WeilElement {
    pub fn new(algebra: &Algebra, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                actual: coeffs.len(),
            });
        }
        Ok(Self {
            algebra: algebra.clone(),
            coeffs,
        })
    }

    pub fn zero(algebra: &Algebra) -> Self {
        Self {
            algebra: algebra.clone(),
            coeffs: vec![0.0; algebra.dim()],
        }
    }

    pub fn constant(algebra: &Algebra, value: f64) -> Self {
        let mut e = Self::zero(algebra);
        e.coeffs[0] = value;
        e
    }

    pub fn one(algebra: &Algebra) -> Self {
        Self::constant(algebra, 1.0)
    }

    /// The basis element with index `index`.
    pub fn basis(algebra: &Algebra, index: usize) -> Self {
        let mut e = Self::zero(algebra);
        e.coeffs[index] = 1.0;
        e
    }

    /// The class of generator `name`, or `None` if unknown or killed by the ideal.
    pub fn generator(algebra: &Algebra, name: &str) -> Option<Self> {
        algebra.generator_index(name).map(|i| Self::basis(algebra, i))
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// The real part: coefficient of the unit monomial.
    pub fn augmentation(&self) -> f64 {
        self.coeffs[0]
    }

    /// `self - augmentation(self)`, an element of the maximal ideal.
    pub fn nilpotent_part(&self) -> Self {
        let mut n = self.clone();
        n.coeffs[0] = 0.0;
        n
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.algebra.same_as(&other.algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        Self {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// Products are accumulated over unordered basis pairs, so `a*b` and `b*a`
    /// agree bit for bit.
    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let alg = &self.algebra;
        let (a, b) = (&self.coeffs, &other.coeffs);
        let dim = alg.dim();
        let mut out = vec![0.0; dim];
        for i in 0..dim {
            for j in i..dim {
                if let Some(k) = alg.mul_basis(i, j) {
                    out[k] += if i == j { a[i] * b[i] } else { a[i] * b[j] + a[j] * b[i] };
                }
            }
        }
        Self {
            algebra: alg.clone(),
            coeffs: out,
        }
    }

    pub fn scale(&self, lambda: f64) -> Self {
        Self {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.iter().map(|c| lambda * c).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Integer power by repeated squaring; `powi_nonneg(0)` is the unit.
    pub fn powi_nonneg(&self, exponent: u32) -> Self {
        pow_by_squaring(self, exponent, Self::one(&self.algebra), |x, y| x.mul_unchecked(y))
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// `‖self − other‖∞`; algebras must agree.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// Coefficient-wise comparison with absolute tolerance.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.distance(other).is_ok_and(|d| d <= tol)
    }

    /// Rendering with every coefficient printed to 17 significant digits.
    pub fn to_machine_string(&self) -> String {
        self.render(|c| format!("{c:.16e}"), true)
    }

    fn render(&self, fmt_coeff: impl Fn(f64) -> String, keep_unit_coeff: bool) -> String {
        let mut out = String::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let negative = c < 0.0;
            let mag = fmt_coeff(c.abs());
            let name = self.algebra.monomial_name(i);
            let term = if i == 0 {
                mag
            } else if !keep_unit_coeff && c.abs() == 1.0 {
                name
            } else {
                format!("{mag}*{name}")
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Exponentiation by squaring; shared by the real and Weil evaluators so that
/// both perform the same sequence of products.
pub(crate) fn pow_by_squaring<T: Clone>(base: &T, exponent: u32, one: T, mul: impl Fn(&T, &T) -> T) -> T {
    let mut result: Option<T> = None;
    let mut base = base.clone();
    let mut e = exponent;
    while e > 0 {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => mul(&r, &base),
            });
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    result.unwrap_or(one)
}

impl fmt::Display for WeilElement {
    /// Canonical rendering such as `3 + 6*eps` or `1 - x^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(|c| format!("{c}"), false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weil_algebra::{AlgebraPresentation, WeilAlgebra};

    fn dual() -> Algebra {
        WeilAlgebra::build(AlgebraPresentation::dual()).unwrap()
    }

    #[test]
    fn dual_square() {
        let d = dual();
        let a = WeilElement::new(&d, vec![3.0, 1.0]).unwrap();
        let sq = a.try_mul(&a).unwrap();
        assert_eq!(sq.coeffs(), &[9.0, 6.0]);
        assert_eq!(sq.to_string(), "9 + 6*eps");
        assert_eq!(sq.augmentation(), 3.0 * 3.0);
    }

    #[test]
    fn truncated_product() {
        let j2 = WeilAlgebra::build(AlgebraPresentation::jets(2)).unwrap();
        let a = WeilElement::new(&j2, vec![1.0, 1.0, 0.0]).unwrap();
        let b = WeilElement::new(&j2, vec![1.0, 1.0, 1.0]).unwrap();
        assert_eq!(a.try_mul(&b).unwrap().coeffs(), &[1.0, 2.0, 2.0]);
    }

    #[test]
    fn mismatch() {
        let j2 = WeilAlgebra::build(AlgebraPresentation::jets(2)).unwrap();
        let a = WeilElement::one(&dual());
        let b = WeilElement::one(&j2);
        assert_eq!(a.try_mul(&b).unwrap_err(), Error::AlgebraMismatch);
        assert_eq!(a.try_add(&b).unwrap_err(), Error::AlgebraMismatch);
    }

    #[test]
    fn separately_built_algebras_are_compatible() {
        let a = WeilElement::one(&dual());
        let b = WeilElement::one(&dual());
        assert!(a.try_mul(&b).is_ok());
    }

    #[test]
    fn augmentation_values() {
        let d = dual();
        assert_eq!(WeilElement::new(&d, vec![3.0, 6.0]).unwrap().augmentation(), 3.0);
        assert_eq!(WeilElement::basis(&d, 1).augmentation(), 0.0);
        assert_eq!(WeilElement::one(&d).augmentation(), 1.0);
    }

    #[test]
    fn wrong_length() {
        assert_eq!(
            WeilElement::new(&dual(), vec![1.0]).unwrap_err(),
            Error::DimensionMismatch { expected: 2, actual: 1 }
        );
    }

    #[test]
    fn rendering() {
        let a = WeilAlgebra::build(AlgebraPresentation::new(
            vec!["x", "y"],
            vec![vec![3, 0], vec![1, 1], vec![0, 2]],
        ))
        .unwrap();
        let e = WeilElement::new(&a, vec![0.0, 1.0, -2.5, 0.0]).unwrap();
        assert_eq!(e.to_string(), "x - 2.5*y");
        assert_eq!(WeilElement::zero(&a).to_string(), "0");
        let m = WeilElement::new(&dual(), vec![-1.0, 0.1]).unwrap();
        assert_eq!(
            m.to_machine_string(),
            "-1.0000000000000000e0 + 1.0000000000000001e-1*eps"
        );
    }

    #[test]
    fn product_is_bitwise_commutative() {
        let a = WeilAlgebra::build(AlgebraPresentation::multi_jets(vec!["x", "y"], 2)).unwrap();
        let u = WeilElement::new(&a, vec![0.1, -0.37, 0.91, 1.0 / 3.0, 0.77, -0.123]).unwrap();
        let v = WeilElement::new(&a, vec![-0.6, 0.29, 0.013, 2.0 / 7.0, -0.5, 0.3]).unwrap();
        assert_eq!(u.try_mul(&v).unwrap().coeffs(), v.try_mul(&u).unwrap().coeffs());
    }

    #[test]
    fn powers() {
        let d = dual();
        let a = WeilElement::new(&d, vec![2.0, 1.0]).unwrap();
        assert_eq!(a.powi_nonneg(0).coeffs(), &[1.0, 0.0]);
        assert_eq!(a.powi_nonneg(3).coeffs(), &[8.0, 12.0]);
    }
}
