//! A-points of `R^n`, prolonged maps `h^A`, vector fields `θ` and their
//! prolongations `θ^A = Σ θ_i^A ∂_i`.
//!
//! A prolonged field is stored by its components; `∂_i` annihilates
//! A-constants, so the resulting operator is A-linear on the represented
//! function class.

use crate::error::{Error, Result};
use crate::expr::{AFunction, Expr};
use crate::weil_algebra::{Algebra, AlgebraMorphism, WeilElement};

/// `ξ ∈ (R^n)^A`, recorded by its coordinates `(ξ(x_1), …, ξ(x_n))`.
#[derive(Debug, Clone, PartialEq)]
pub struct APoint {
    algebra: Algebra,
    coords: Vec<WeilElement>,
}

impl APoint {
    pub fn new(algebra: &Algebra, coords: Vec<WeilElement>) -> Result<Self> {
        if coords.iter().any(|c| !c.algebra().same_as(algebra)) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Self {
            algebra: algebra.clone(),
            coords,
        })
    }

    /// One coefficient vector per coordinate, in the algebra's basis order.
    pub fn from_coeffs(algebra: &Algebra, coeffs: Vec<Vec<f64>>) -> Result<Self> {
        let coords = coeffs
            .into_iter()
            .map(|c| WeilElement::new(algebra, c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(algebra, coords)
    }

    /// The point of `(R^n)^R` over the given trivial algebra.
    pub fn real(reals: &Algebra, p: &[f64]) -> Result<Self> {
        Self::from_coeffs(reals, p.iter().map(|&v| vec![v]).collect())
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn coords(&self) -> &[WeilElement] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// `π_M(ξ)`: the base point, taken componentwise by augmentation.
    pub fn base_point(&self) -> Vec<f64> {
        self.coords.iter().map(WeilElement::augmentation).collect()
    }
}

fn check_components(components: &[Expr], n: usize) -> Result<()> {
    if components.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: components.len(),
        });
    }
    components.iter().try_for_each(|c| c.check_arity(n))
}

/// `θ = Σ θ_i ∂_i` on `R^n` with ConstA-free components.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    components: Vec<Expr>,
}

impl VectorField {
    pub fn new(components: Vec<Expr>) -> Result<Self> {
        let n = components.len();
        check_components(&components, n)?;
        if components.iter().any(|c| !c.is_real()) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Self { components })
    }

    /// The coordinate field `∂_{i+1}` on `R^n`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        Self {
            components: (0..n).map(|j| Expr::real(if i == j { 1.0 } else { 0.0 })).collect(),
        }
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// `θ(f) = Σ θ_i ∂_i f`.
    pub fn apply(&self, f: &Expr) -> Result<Expr> {
        f.check_arity(self.dim())?;
        Ok(Expr::sum(
            self.components
                .iter()
                .enumerate()
                .map(|(i, c)| Expr::mul(c.clone(), f.diff(i))),
        ))
    }

    /// `f·θ`.
    pub fn scale(&self, f: &Expr) -> Result<Self> {
        Self::new(self.components.iter().map(|c| Expr::mul(f.clone(), c.clone())).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        Ok(Self {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| Expr::add(a.clone(), b.clone()))
                .collect(),
        })
    }
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, actual: b });
    }
    Ok(())
}

/// An A-linear derivation `D = Σ D_i ∂_i` of the represented class in `C∞(M^A, A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AVectorField {
    components: Vec<AFunction>,
}

impl AVectorField {
    pub fn new(components: Vec<AFunction>) -> Result<Self> {
        let n = components.len();
        check_components(&components, n)?;
        common_algebra(&components)?;
        Ok(Self { components })
    }

    pub fn components(&self) -> &[AFunction] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// The algebra of the ConstA nodes, if any.
    pub fn algebra(&self) -> Result<Option<Algebra>> {
        common_algebra(&self.components)
    }

    /// `D(φ) = Σ D_i ∂_i φ`.
    pub fn apply(&self, phi: &AFunction) -> Result<AFunction> {
        phi.check_arity(self.dim())?;
        let out = Expr::sum(
            self.components
                .iter()
                .enumerate()
                .map(|(i, c)| Expr::mul(c.clone(), phi.diff(i))),
        );
        out.algebra()?;
        Ok(out)
    }

    /// `φ·D`.
    pub fn scale(&self, phi: &AFunction) -> Result<Self> {
        Self::new(self.components.iter().map(|c| Expr::mul(phi.clone(), c.clone())).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        Self::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| Expr::add(a.clone(), b.clone()))
                .collect(),
        )
    }

    /// The commutator `[D_1, D_2]` with components `D_1(D_2,i) − D_2(D_1,i)`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        let comps = (0..self.dim())
            .map(|i| Ok(Expr::sub(self.apply(&other.components[i])?, other.apply(&self.components[i])?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(comps)
    }

    /// Components evaluated at `ξ`.
    pub fn eval_at(&self, xi: &APoint) -> Result<Vec<WeilElement>> {
        self.components.iter().map(|c| c.eval_weil(xi)).collect()
    }
}

fn common_algebra(exprs: &[Expr]) -> Result<Option<Algebra>> {
    let mut found: Option<Algebra> = None;
    for e in exprs {
        if let Some(a) = e.algebra()? {
            match &found {
                Some(f) if !f.same_as(&a) => return Err(Error::AlgebraMismatch),
                Some(_) => {}
                None => found = Some(a),
            }
        }
    }
    Ok(found)
}

/// `θ(f)`.
pub fn apply_field(theta: &VectorField, f: &Expr) -> Result<Expr> {
    theta.apply(f)
}

/// `θ^A`: the same component expressions, read as A-valued functions.
pub fn prolong_field(theta: &VectorField) -> AVectorField {
    AVectorField {
        components: theta.components.clone(),
    }
}

/// `[θ_1, θ_2]` with components `θ_1(θ_2,i) − θ_2(θ_1,i)`.
pub fn lie_bracket(theta1: &VectorField, theta2: &VectorField) -> Result<VectorField> {
    same_dim(theta1.dim(), theta2.dim())?;
    let comps = (0..theta1.dim())
        .map(|i| {
            Ok(Expr::sub(
                theta1.apply(&theta2.components[i])?,
                theta2.apply(&theta1.components[i])?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(comps)
}

/// `φ_M(ξ) = φ ∘ ξ` for an algebra morphism `φ: A → B`.
pub fn pushforward_point(mu: &AlgebraMorphism, xi: &APoint) -> Result<APoint> {
    if !mu.source().same_as(xi.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let coords = xi.coords.iter().map(|c| mu.apply(c)).collect::<Result<Vec<_>>>()?;
    APoint::new(mu.target(), coords)
}

/// `h^A(ξ)` for `h = (h_1, …, h_m)`.
pub fn prolong_map(h: &[Expr], xi: &APoint) -> Result<APoint> {
    if h.iter().any(|c| !c.is_real()) {
        return Err(Error::AlgebraMismatch);
    }
    let coords = h.iter().map(|c| c.eval_weil(xi)).collect::<Result<Vec<_>>>()?;
    APoint::new(xi.algebra(), coords)
}
