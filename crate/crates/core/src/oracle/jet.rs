//! Reference constructions computed without the Weil evaluator or the
//! Cartan-formula code paths.
//!
//! [`jet_prolong`] evaluates `f^A(ξ)` as the multivariate Taylor polynomial
//! `Σ_{|α|≤h} ∂^α f(a) / α! · n^α` with `a = π_M(ξ)` and `n = ξ − a`, using only
//! real evaluation of symbolic partials. The base-form formulas use the full
//! antisymmetric coefficient tensor.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::forms::{CoordForm, Multi};
use crate::prolongation::{APoint, VectorField};
use crate::weil_algebra::WeilElement;

/// `f^A(ξ)` by nilpotent Taylor expansion around the base point.
pub fn jet_prolong(f: &Expr, xi: &APoint) -> Result<WeilElement> {
    if !f.is_real() {
        return Err(Error::AlgebraMismatch);
    }
    let alg = xi.algebra();
    let base = xi.base_point();
    let nil: Vec<WeilElement> = xi.coords().iter().map(WeilElement::nilpotent_part).collect();
    let h = alg.height() as usize;
    let n = xi.dim();

    let mut total = WeilElement::zero(alg);
    let mut alpha = vec![0u32; n];
    // Multi-indices are enumerated in non-decreasing variable order so each
    // α is visited once; `d` is ∂^α f.
    fn rec(
        d: &Expr,
        start: usize,
        order: usize,
        alpha: &mut Vec<u32>,
        ctx: &(usize, usize, &[f64], &[WeilElement]),
        total: &mut WeilElement,
    ) -> Result<()> {
        let (h, n, base, nil) = *ctx;
        let value = d.eval_real(base)?;
        let mut fact = 1.0;
        let mut mono = WeilElement::one(total.algebra());
        for (i, &a) in alpha.iter().enumerate() {
            for k in 1..=a {
                fact *= k as f64;
            }
            mono = mono.try_mul(&nil[i].powi_nonneg(a))?;
        }
        *total = total.try_add(&mono.scale(value / fact))?;
        if order == h {
            return Ok(());
        }
        for i in start..n {
            let di = d.diff(i);
            if di.is_zero() {
                continue;
            }
            alpha[i] += 1;
            rec(&di, i, order + 1, alpha, ctx, total)?;
            alpha[i] -= 1;
        }
        Ok(())
    }
    rec(f, 0, 0, &mut alpha, &(h, n, &base, &nil), &mut total)?;
    Ok(total)
}

/// Coefficient of the (possibly unsorted) tuple `idx` in the alternating
/// tensor of `form`: sign of the sorting permutation times the stored value.
pub fn tensor_entry(form: &CoordForm, idx: &[usize]) -> Expr {
    let mut sorted = idx.to_vec();
    let mut sign = 1.0;
    for i in 0..sorted.len() {
        for j in 0..sorted.len() - 1 - i {
            if sorted[j] > sorted[j + 1] {
                sorted.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Expr::zero();
    }
    let c = form.coefficient(&sorted);
    if sign < 0.0 {
        Expr::neg(c)
    } else {
        c
    }
}

fn increasing(n: usize, p: usize) -> Vec<Multi> {
    super::gen::tuples(n, p)
}

fn build(n: usize, p: usize, terms: BTreeMap<Multi, Expr>) -> Result<CoordForm> {
    CoordForm::from_terms(n, p, terms.into_iter().collect())
}

/// `(i_θ η)_J = Σ_i θ_i η_{iJ}` on the alternating tensor.
pub fn classical_interior(theta: &VectorField, eta: &CoordForm) -> Result<CoordForm> {
    let (n, p) = (eta.dim(), eta.degree());
    if p == 0 {
        return Err(Error::DegreeError("interior product of a degree-0 form".into()));
    }
    let mut terms = BTreeMap::new();
    for j in increasing(n, p - 1) {
        let c = Expr::sum((0..n).map(|i| {
            let mut idx = vec![i];
            idx.extend(&j);
            Expr::mul(theta.components()[i].clone(), tensor_entry(eta, &idx))
        }));
        terms.insert(j, c);
    }
    build(n, p - 1, terms)
}

/// Coordinate Lie derivative
/// `(𝔏_θ η)_I = Σ_i θ_i ∂_i η_I + Σ_s Σ_i η_{I[s→i]} ∂_{I_s} θ_i`.
pub fn classical_lie(theta: &VectorField, eta: &CoordForm) -> Result<CoordForm> {
    let (n, p) = (eta.dim(), eta.degree());
    let th = theta.components();
    let mut terms = BTreeMap::new();
    for idx in increasing(n, p) {
        let mut parts: Vec<Expr> = (0..n)
            .map(|i| Expr::mul(th[i].clone(), eta.coefficient(&idx).diff(i)))
            .collect();
        for s in 0..p {
            for i in 0..n {
                let mut replaced = idx.clone();
                replaced[s] = i;
                parts.push(Expr::mul(tensor_entry(eta, &replaced), th[i].diff(idx[s])));
            }
        }
        terms.insert(idx, Expr::sum(parts));
    }
    build(n, p, terms)
}

/// `δf_1 ∧ … ∧ δf_p` through determinants of the Jacobian minors.
pub fn classical_wedge_of_differentials(n: usize, fs: &[Expr]) -> Result<CoordForm> {
    let p = fs.len();
    let grads: Vec<Vec<Expr>> = fs.iter().map(|f| f.gradient(n)).collect();
    let mut terms = BTreeMap::new();
    for idx in increasing(n, p) {
        let minor: Vec<Vec<Expr>> = grads
            .iter()
            .map(|g| idx.iter().map(|&i| g[i].clone()).collect())
            .collect();
        terms.insert(idx, determinant(&minor));
    }
    build(n, p, terms)
}

/// Leibniz expansion of a small determinant.
fn determinant(m: &[Vec<Expr>]) -> Expr {
    let p = m.len();
    if p == 0 {
        return Expr::one();
    }
    let mut perm: Vec<usize> = (0..p).collect();
    let mut terms = Vec::new();
    permutations(&mut perm, 0, 1.0, &mut |sigma, sign| {
        let prod = (0..p).fold(Expr::real(sign), |acc, r| Expr::mul(acc, m[r][sigma[r]].clone()));
        terms.push(prod);
    });
    Expr::sum(terms)
}

fn permutations(v: &mut Vec<usize>, k: usize, sign: f64, f: &mut impl FnMut(&[usize], f64)) {
    if k == v.len() {
        f(v, sign);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, if i == k { sign } else { -sign }, f);
        v.swap(k, i);
    }
}

/// `[η]^A(ξ)` coefficientwise via [`jet_prolong`].
pub fn jet_prolong_form(eta: &CoordForm, xi: &APoint) -> Result<BTreeMap<Multi, WeilElement>> {
    eta.terms()
        .iter()
        .map(|(idx, c)| Ok((idx.clone(), jet_prolong(c, xi)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::forms::{delta, interior, lie_derivative, wedge};
    use crate::prolongation::prolong_field;
    use crate::weil_algebra::{AlgebraPresentation, WeilAlgebra};

    fn p(s: &str, n: usize) -> Expr {
        parse(s, n).unwrap()
    }

    #[test]
    fn jet_agrees_with_known_expansions() {
        let a = WeilAlgebra::build(AlgebraPresentation::jets(2)).unwrap();
        let xi = APoint::from_coeffs(&a, vec![vec![0.7, 1.0, 0.0]]).unwrap();
        let v = jet_prolong(&p("sin(x1)", 1), &xi).unwrap();
        let expect = [0.7f64.sin(), 0.7f64.cos(), -0.7f64.sin() / 2.0];
        for (x, y) in v.coeffs().iter().zip(expect) {
            assert!((x - y).abs() < 1e-15);
        }
        let m = WeilAlgebra::build(AlgebraPresentation::multi_jets(vec!["x", "y"], 2)).unwrap();
        let xi = APoint::from_coeffs(&m, vec![vec![0.3, 1.0, 0.5, 0.0, 0.1, 0.0], vec![-0.4, 0.2, 0.0, 1.0, 0.0, 0.3]]).unwrap();
        let f = p("exp(x1)*x2^2 + log(1 + x1^2)", 2);
        let j = jet_prolong(&f, &xi).unwrap();
        let w = f.eval_weil(&xi).unwrap();
        assert!(j.approx_eq(&w, 1e-13), "{j} vs {w}");
    }

    #[test]
    fn classical_formulas_agree_on_samples() {
        let n = 3;
        let theta = VectorField::new(vec![p("x2", n), p("x1*x3", n), p("1 + x2^2", n)]).unwrap();
        let eta = wedge(&delta(n, &p("x1*x2", n)).unwrap(), &delta(n, &p("sin(x3)", n)).unwrap()).unwrap();
        let pt = [0.3, -0.8, 0.45];
        let cmp = |a: &CoordForm, b: &CoordForm| {
            for idx in increasing(n, a.degree()) {
                let x = a.coefficient(&idx).eval_real(&pt).unwrap();
                let y = b.coefficient(&idx).eval_real(&pt).unwrap();
                assert!((x - y).abs() < 1e-13, "{idx:?}: {x} vs {y}");
            }
        };
        let d = prolong_field(&theta);
        cmp(&classical_interior(&theta, &eta).unwrap(), &interior(&d, &eta).unwrap());
        cmp(&classical_lie(&theta, &eta).unwrap(), &lie_derivative(&d, &eta).unwrap());
        let fs = [p("x1*x2", n), p("sin(x3)", n)];
        cmp(&classical_wedge_of_differentials(n, &fs).unwrap(), &eta);
    }
}
