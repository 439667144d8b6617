use super::{Algebra, WeilElement};
use crate::error::{Error, Result};

const MORPHISM_TOL: f64 = 1e-12;

/// A validated homomorphism of Weil algebras `A → B`, stored as a `dim B × dim A` matrix
/// whose column `j` is the image of basis element `j` of `A`.
#[derive(Debug, Clone)]
pub struct AlgebraMorphism {
    source: Algebra,
    target: Algebra,
    matrix: Vec<Vec<f64>>,
}

fn apply_matrix(matrix: &[Vec<f64>], target: &Algebra, coeffs: &[f64]) -> WeilElement {
    let out = matrix
        .iter()
        .map(|row| row.iter().zip(coeffs).map(|(m, c)| m * c).sum())
        .collect();
    WeilElement::new(target, out).expect("matrix rows match target dimension")
}

fn check_shape(matrix: &[Vec<f64>], rows: usize, cols: usize) -> Result<()> {
    if matrix.len() != rows {
        return Err(Error::DimensionMismatch {
            expected: rows,
            actual: matrix.len(),
        });
    }
    for row in matrix {
        if row.len() != cols {
            return Err(Error::DimensionMismatch {
                expected: cols,
                actual: row.len(),
            });
        }
    }
    Ok(())
}

impl AlgebraMorphism {
    /// Checks unit, augmentation compatibility and multiplicativity on all basis pairs.
    pub fn validate(source: &Algebra, target: &Algebra, matrix: Vec<Vec<f64>>) -> Result<Self> {
        check_shape(&matrix, target.dim(), source.dim())?;
        let image = |j: usize| -> WeilElement {
            apply_matrix(&matrix, target, WeilElement::basis(source, j).coeffs())
        };

        let unit = image(0);
        if !unit.approx_eq(&WeilElement::one(target), MORPHISM_TOL) {
            return Err(Error::NotMorphism(format!("unit maps to {unit}")));
        }
        for j in 0..source.dim() {
            let expected = if j == 0 { 1.0 } else { 0.0 };
            let aug = image(j).augmentation();
            if (aug - expected).abs() > MORPHISM_TOL {
                return Err(Error::NotMorphism(format!(
                    "augmentation of the image of {} is {aug}, expected {expected}",
                    source.monomial_name(j)
                )));
            }
        }
        for i in 0..source.dim() {
            for j in i..source.dim() {
                let lhs = match source.mul_basis(i, j) {
                    Some(k) => image(k),
                    None => WeilElement::zero(target),
                };
                let rhs = image(i).mul_unchecked(&image(j));
                let d = lhs.distance(&rhs)?;
                if d > MORPHISM_TOL {
                    return Err(Error::NotMorphism(format!(
                        "pair ({}, {}): image of product {lhs} differs from product of images {rhs}",
                        source.monomial_name(i),
                        source.monomial_name(j)
                    )));
                }
            }
        }
        Ok(Self {
            source: source.clone(),
            target: target.clone(),
            matrix,
        })
    }

    /// The augmentation `A → R` as a morphism into the trivial algebra.
    pub fn augmentation(source: &Algebra, reals: &Algebra) -> Result<Self> {
        let mut row = vec![0.0; source.dim()];
        row[0] = 1.0;
        Self::validate(source, reals, vec![row])
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn apply(&self, a: &WeilElement) -> Result<WeilElement> {
        if !a.algebra().same_as(&self.source) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(apply_matrix(&self.matrix, &self.target, a.coeffs()))
    }
}

/// An R-linear endomorphism of `A`, not necessarily multiplicative.
#[derive(Debug, Clone)]
pub struct LinearEndomorphism {
    algebra: Algebra,
    matrix: Vec<Vec<f64>>,
}

impl LinearEndomorphism {
    pub fn new(algebra: &Algebra, matrix: Vec<Vec<f64>>) -> Result<Self> {
        check_shape(&matrix, algebra.dim(), algebra.dim())?;
        Ok(Self {
            algebra: algebra.clone(),
            matrix,
        })
    }

    pub fn apply(&self, a: &WeilElement) -> Result<WeilElement> {
        if !a.algebra().same_as(&self.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(apply_matrix(&self.matrix, &self.algebra, a.coeffs()))
    }
}
