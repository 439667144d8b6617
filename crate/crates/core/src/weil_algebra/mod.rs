//! Weil algebras presented as quotients `R[x_1..x_k] / I` by a monomial ideal `I`.
//!
//! The standard monomials (those not divisible by any ideal generator) form the
//! basis, ordered graded-lexicographically with the generators in declared
//! order. Because the ideal is monomial, the product of two basis monomials is
//! either another basis monomial or zero, so the multiplication table stores a
//! single optional index per pair.

mod element;
mod lift;
mod morphism;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) use element::pow_by_squaring;
pub use element::WeilElement;
pub use lift::{taylor_coefficients, taylor_lift, PrimitiveFn};
pub use morphism::{AlgebraMorphism, LinearEndomorphism};

/// Shared handle to an immutable algebra.
pub type Algebra = Arc<WeilAlgebra>;

/// A monomial: one exponent per generator.
pub type Monomial = Vec<u32>;

/// Generators and monomial relations defining `R[x_1..x_k] / I`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraPresentation {
    pub generators: Vec<String>,
    pub ideal_generators: Vec<Monomial>,
}

impl AlgebraPresentation {
    pub fn new<S: Into<String>>(generators: Vec<S>, ideal_generators: Vec<Monomial>) -> Self {
        Self {
            generators: generators.into_iter().map(Into::into).collect(),
            ideal_generators,
        }
    }

    /// Dual numbers `R[eps]/(eps^2)`.
    pub fn dual() -> Self {
        Self::new(vec!["eps"], vec![vec![2]])
    }

    /// Truncated polynomials `R[x]/(x^{order+1})`, the algebra of `order`-jets in one variable.
    pub fn jets(order: u32) -> Self {
        Self::new(vec!["x"], vec![vec![order + 1]])
    }

    /// The trivial algebra `R` (height 0).
    pub fn reals() -> Self {
        Self::new(Vec::<String>::new(), Vec::new())
    }

    /// `R[x_1..x_k]` modulo all monomials of total degree `order + 1`.
    pub fn multi_jets<S: Into<String>>(generators: Vec<S>, order: u32) -> Self {
        let generators: Vec<String> = generators.into_iter().map(Into::into).collect();
        let k = generators.len();
        let ideal = monomials_of_degree(k, order + 1);
        Self {
            generators,
            ideal_generators: ideal,
        }
    }

    fn validate(&self) -> Result<()> {
        let k = self.generators.len();
        for (index, m) in self.ideal_generators.iter().enumerate() {
            if m.len() != k {
                return Err(Error::BadPresentation(format!(
                    "ideal generator #{index} has {} exponents, expected {k}",
                    m.len()
                )));
            }
            if m.iter().all(|&e| e == 0) {
                return Err(Error::EmptyRelation { index });
            }
        }
        for (i, name) in self.generators.iter().enumerate() {
            if self.generators[..i].contains(name) {
                return Err(Error::BadPresentation(format!("duplicate generator `{name}`")));
            }
        }
        for i in 0..k {
            if self.pure_power_bound(i).is_none() {
                return Err(Error::NotFiniteDimensional {
                    generator: self.generators[i].clone(),
                });
            }
        }
        Ok(())
    }

    /// Smallest `p` with `x_i^p` in the ideal.
    fn pure_power_bound(&self, i: usize) -> Option<u32> {
        self.ideal_generators
            .iter()
            .filter(|m| m.iter().enumerate().all(|(j, &e)| j == i || e == 0))
            .map(|m| m[i])
            .min()
    }

    fn kills(&self, m: &[u32]) -> bool {
        self.ideal_generators
            .iter()
            .any(|g| g.iter().zip(m).all(|(ge, me)| ge <= me))
    }
}

fn monomials_of_degree(k: usize, degree: u32) -> Vec<Monomial> {
    fn rec(k: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == k {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(k, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        rec(k, degree, &mut Vec::new(), &mut out);
    }
    out
}

fn total_degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

/// Graded lexicographic order: lower total degree first, then the monomial with
/// the larger exponent on the earliest differing generator.
fn grlex_cmp(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    total_degree(a)
        .cmp(&total_degree(b))
        .then_with(|| b.cmp(a))
}

#[derive(Debug)]
pub struct WeilAlgebra {
    presentation: AlgebraPresentation,
    basis: Vec<Monomial>,
    mult_table: Vec<Option<usize>>,
    height: u32,
}

impl PartialEq for WeilAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.presentation == other.presentation
    }
}

impl WeilAlgebra {
    /// Enumerates the standard monomials and builds the multiplication table.
    pub fn build(presentation: AlgebraPresentation) -> Result<Algebra> {
        presentation.validate()?;
        let k = presentation.generators.len();
        let bounds: Vec<u32> = (0..k)
            .map(|i| presentation.pure_power_bound(i).expect("validated"))
            .collect();

        let mut basis = Vec::new();
        let mut current = vec![0u32; k];
        loop {
            if !presentation.kills(&current) {
                basis.push(current.clone());
            }
            // odometer over the box 0..bounds[i]
            let mut i = 0;
            loop {
                if i == k {
                    break;
                }
                current[i] += 1;
                if current[i] < bounds[i] {
                    break;
                }
                current[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        basis.sort_by(|a, b| grlex_cmp(a, b));

        let index: HashMap<&Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let dim = basis.len();
        let mut mult_table = vec![None; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let product: Monomial = basis[i].iter().zip(&basis[j]).map(|(a, b)| a + b).collect();
                mult_table[i * dim + j] = index.get(&product).copied();
            }
        }
        let height = basis.iter().map(|m| total_degree(m)).max().unwrap_or(0);

        Ok(Arc::new(Self {
            presentation,
            basis,
            mult_table,
            height,
        }))
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.presentation
    }

    pub fn generators(&self) -> &[String] {
        &self.presentation.generators
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Indices of the basis monomials spanning the maximal ideal.
    pub fn maximal_ideal_basis(&self) -> std::ops::Range<usize> {
        1..self.dim()
    }

    /// Product of basis elements `i` and `j`, or `None` when it lies in the ideal.
    #[inline]
    pub fn mul_basis(&self, i: usize, j: usize) -> Option<usize> {
        self.mult_table[i * self.dim() + j]
    }

    /// Basis index of the given monomial, if it is standard.
    pub fn index_of(&self, monomial: &[u32]) -> Option<usize> {
        self.basis.iter().position(|m| m.as_slice() == monomial)
    }

    /// Basis index of generator `name` (as a degree-one monomial).
    pub fn generator_index(&self, name: &str) -> Option<usize> {
        let g = self.presentation.generators.iter().position(|n| n == name)?;
        let mut m = vec![0; self.presentation.generators.len()];
        m[g] = 1;
        self.index_of(&m)
    }

    /// Human-readable name of a basis monomial, `1` for the unit.
    pub fn monomial_name(&self, index: usize) -> String {
        let m = &self.basis[index];
        let parts: Vec<String> = m
            .iter()
            .zip(&self.presentation.generators)
            .filter(|(e, _)| **e > 0)
            .map(|(e, name)| {
                if *e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    pub fn same_as(self: &Algebra, other: &Algebra) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

impl fmt::Display for WeilAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.dim()).map(|i| self.monomial_name(i)).collect();
        write!(
            f,
            "dim={} height={} basis=[{}]",
            self.dim(),
            self.height,
            names.join(", ")
        )
    }
}
