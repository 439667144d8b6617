//! Kähler forms on `M^A` in coordinate normal form `Σ φ_I dx_{i_1}∧…∧dx_{i_p}`.
//!
//! Index tuples are strictly increasing and 0-based; `dx_{i+1}` is printed for
//! index `i`. Absent tuples are zero coefficients. Forms of degree above the
//! chart dimension carry no terms.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{AFunction, Expr};
use crate::prolongation::{APoint, AVectorField};
use crate::weil_algebra::{Algebra, WeilElement};

pub type Multi = Vec<usize>;

#[derive(Debug, Clone, PartialEq)]
pub struct CoordForm {
    degree: usize,
    n: usize,
    terms: BTreeMap<Multi, AFunction>,
}

/// Sorts `indices` in place; returns the permutation sign, or `None` on a repeat.
fn sort_with_sign(indices: &mut [usize]) -> Option<f64> {
    let mut sign = 1.0;
    for i in 1..indices.len() {
        let mut j = i;
        while j > 0 && indices[j - 1] > indices[j] {
            indices.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if indices.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

fn signed(sign: f64, e: Expr) -> Expr {
    if sign < 0.0 {
        Expr::neg(e)
    } else {
        e
    }
}

impl CoordForm {
    pub fn zero(n: usize, degree: usize) -> Self {
        Self {
            degree,
            n,
            terms: BTreeMap::new(),
        }
    }

    /// A degree-0 form.
    pub fn function(n: usize, phi: AFunction) -> Self {
        let mut f = Self::zero(n, 0);
        f.insert(Vec::new(), phi);
        f
    }

    /// `dx_{i+1}`.
    pub fn dx(n: usize, i: usize) -> Self {
        let mut f = Self::zero(n, 1);
        f.insert(vec![i], Expr::one());
        f
    }

    /// Builds a form from `(tuple, coefficient)` pairs; unsorted tuples are
    /// normalized with the permutation sign and repeated tuples are summed.
    pub fn from_terms(n: usize, degree: usize, terms: Vec<(Multi, AFunction)>) -> Result<Self> {
        let mut f = Self::zero(n, degree);
        for (mut idx, coeff) in terms {
            if idx.len() != degree {
                return Err(Error::DegreeError(format!(
                    "tuple {idx:?} in a form of degree {degree}"
                )));
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: bad + 1,
                });
            }
            coeff.check_arity(n)?;
            if let Some(sign) = sort_with_sign(&mut idx) {
                f.accumulate(idx, signed(sign, coeff));
            }
        }
        f.algebra()?;
        Ok(f)
    }

    /// `Σ X_i dx_i` from a component list.
    pub fn one_form(components: Vec<AFunction>) -> Result<Self> {
        let n = components.len();
        Self::from_terms(n, 1, components.into_iter().enumerate().map(|(i, c)| (vec![i], c)).collect())
    }

    fn insert(&mut self, idx: Multi, coeff: Expr) {
        if !coeff.is_zero() && idx.len() <= self.n {
            self.terms.insert(idx, coeff);
        }
    }

    fn accumulate(&mut self, idx: Multi, coeff: Expr) {
        let sum = match self.terms.remove(&idx) {
            Some(old) => Expr::add(old, coeff),
            None => coeff,
        };
        self.insert(idx, sum);
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Multi, AFunction> {
        &self.terms
    }

    /// Coefficient of the strictly increasing tuple `idx`.
    pub fn coefficient(&self, idx: &[usize]) -> Expr {
        self.terms.get(idx).cloned().unwrap_or_else(Expr::zero)
    }

    /// The degree-0 coefficient.
    pub fn scalar(&self) -> Result<AFunction> {
        if self.degree != 0 {
            return Err(Error::DegreeError(format!("expected degree 0, got {}", self.degree)));
        }
        Ok(self.coefficient(&[]))
    }

    /// The algebra shared by all coefficient constants, if any.
    pub fn algebra(&self) -> Result<Option<Algebra>> {
        let mut found: Option<Algebra> = None;
        for c in self.terms.values() {
            if let Some(a) = c.algebra()? {
                match &found {
                    Some(f) if !f.same_as(&a) => return Err(Error::AlgebraMismatch),
                    Some(_) => {}
                    None => found = Some(a),
                }
            }
        }
        Ok(found)
    }

    /// True when no coefficient carries an A-constant, i.e. a base form.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(Expr::is_real)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        match (self.algebra()?, other.algebra()?) {
            (Some(a), Some(b)) if !a.same_as(&b) => Err(Error::AlgebraMismatch),
            _ => Ok(()),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeError(format!(
                "cannot add forms of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.accumulate(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| Expr::neg(c.clone()))
    }

    /// `φ·ω`.
    pub fn scale(&self, phi: &AFunction) -> Result<Self> {
        phi.check_arity(self.n)?;
        let out = self.map(|c| Expr::mul(phi.clone(), c.clone()));
        out.algebra()?;
        Ok(out)
    }

    fn map(&self, f: impl Fn(&Expr) -> Expr) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        for (idx, c) in &self.terms {
            out.insert(idx.clone(), f(c));
        }
        out
    }

    /// Coefficients evaluated at `ξ`; zero coefficients are omitted.
    pub fn eval_at(&self, xi: &APoint) -> Result<BTreeMap<Multi, WeilElement>> {
        self.terms
            .iter()
            .map(|(idx, c)| Ok((idx.clone(), c.eval_weil(xi)?)))
            .collect()
    }
}

/// `δ^A(φ) = Σ ∂_i φ dx_i`.
pub fn delta(n: usize, phi: &AFunction) -> Result<CoordForm> {
    phi.check_arity(n)?;
    dform(&CoordForm::function(n, phi.clone()))
}

/// `ω ∧ η`, normalized by sorting indices with sign.
pub fn wedge(omega: &CoordForm, eta: &CoordForm) -> Result<CoordForm> {
    omega.check_compatible(eta)?;
    let mut out = CoordForm::zero(omega.n, omega.degree + eta.degree);
    for (i, a) in &omega.terms {
        for (j, b) in &eta.terms {
            let mut idx: Multi = i.iter().chain(j).copied().collect();
            if let Some(sign) = sort_with_sign(&mut idx) {
                out.accumulate(idx, signed(sign, Expr::mul(a.clone(), b.clone())));
            }
        }
    }
    Ok(out)
}

/// Exterior derivative: `d(φ dx_I) = Σ_j ∂_j φ dx_j ∧ dx_I`.
pub fn dform(omega: &CoordForm) -> Result<CoordForm> {
    let mut out = CoordForm::zero(omega.n, omega.degree + 1);
    for (idx, phi) in &omega.terms {
        for j in 0..omega.n {
            if idx.contains(&j) {
                continue;
            }
            let d = phi.diff(j);
            if d.is_zero() {
                continue;
            }
            let before = idx.iter().filter(|&&i| i < j).count();
            let mut new_idx = idx.clone();
            new_idx.insert(before, j);
            let sign = if before % 2 == 0 { 1.0 } else { -1.0 };
            out.accumulate(new_idx, signed(sign, d));
        }
    }
    Ok(out)
}

/// `i_D ω`: `i_D(dx_{i_1}∧…∧dx_{i_p}) = Σ_k (−1)^{k−1} D_{i_k} dx_{I∖i_k}`.
pub fn interior(d: &AVectorField, omega: &CoordForm) -> Result<CoordForm> {
    if omega.degree == 0 {
        return Err(Error::DegreeError("interior product of a degree-0 form".into()));
    }
    if d.dim() != omega.n {
        return Err(Error::DimensionMismatch {
            expected: omega.n,
            actual: d.dim(),
        });
    }
    let mut out = CoordForm::zero(omega.n, omega.degree - 1);
    for (idx, phi) in &omega.terms {
        for (k, &i) in idx.iter().enumerate() {
            let comp = &d.components()[i];
            if comp.is_zero() {
                continue;
            }
            let mut rest = idx.clone();
            rest.remove(k);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            out.accumulate(rest, signed(sign, Expr::mul(comp.clone(), phi.clone())));
        }
    }
    out.algebra()?;
    Ok(out)
}

/// `D̃(X)` for a 1-form `X`: the contraction `Σ D_i X_i`.
pub fn contract(d: &AVectorField, x: &CoordForm) -> Result<AFunction> {
    if x.degree != 1 {
        return Err(Error::DegreeError(format!("expected a 1-form, got degree {}", x.degree)));
    }
    interior(d, x)?.scalar()
}

/// Cartan's formula `𝔏_D = i_D ∘ d + d ∘ i_D`; on functions only the first term.
pub fn lie_derivative(d: &AVectorField, omega: &CoordForm) -> Result<CoordForm> {
    let first = interior(d, &dform(omega)?)?;
    if omega.degree == 0 {
        return Ok(first);
    }
    first.add(&dform(&interior(d, omega)?)?)
}

impl fmt::Display for CoordForm {
    /// Terms such as `(2.0*x1) dx1^dx2`, joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (idx, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if idx.is_empty() {
                write!(f, "{c}")?;
                continue;
            }
            let wedge: Vec<String> = idx.iter().map(|i| format!("dx{}", i + 1)).collect();
            if c.is_one() {
                f.write_str(&wedge.join("^"))?;
            } else {
                write!(f, "({c}) {}", wedge.join("^"))?;
            }
        }
        Ok(())
    }
}
