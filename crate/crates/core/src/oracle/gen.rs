//! Random inputs for the check suites. Every generated expression is
//! well-defined at every real point: `log`, `sqrt`, `recip`, real powers and
//! divisors only see arguments of the form `c + u²` with `c ∈ [0.5, 1.5]`, and
//! `tan` only sees `0.5·x_i`.

use super::rng::Sampler;
use crate::error::Result;
use crate::expr::{AFunction, Expr};
use crate::forms::CoordForm;
use crate::prolongation::{APoint, AVectorField, VectorField};
use crate::weil_algebra::{Algebra, AlgebraPresentation, LinearEndomorphism, PrimitiveFn, WeilAlgebra, WeilElement};

/// The sampled algebra family, all of height ≤ 3.
pub fn algebra_family() -> Vec<AlgebraPresentation> {
    vec![
        AlgebraPresentation::dual(),
        AlgebraPresentation::jets(2),
        AlgebraPresentation::jets(3),
        AlgebraPresentation::multi_jets(vec!["x", "y"], 1),
        AlgebraPresentation::new(vec!["x", "y"], vec![vec![2, 0], vec![0, 2]]),
        AlgebraPresentation::multi_jets(vec!["x", "y"], 2),
        AlgebraPresentation::new(vec!["x", "y"], vec![vec![3, 0], vec![1, 1], vec![0, 2]]),
    ]
}

pub fn random_algebra(s: &mut Sampler) -> Algebra {
    let family = algebra_family();
    WeilAlgebra::build(s.pick(&family).clone()).expect("family algebras are valid")
}

/// A point with augmentations in `[−1, 1]` and nilpotent coefficients in `[−0.5, 0.5]`.
pub fn random_point(s: &mut Sampler, alg: &Algebra, n: usize) -> APoint {
    let coords = (0..n)
        .map(|_| {
            let mut c = vec![s.uniform(-1.0, 1.0)];
            c.extend((1..alg.dim()).map(|_| s.uniform(-0.5, 0.5)));
            c
        })
        .collect();
    APoint::from_coeffs(alg, coords).expect("shape")
}

/// A point whose coefficients are dyadic rationals, so polynomial pipelines are exact.
pub fn dyadic_point(s: &mut Sampler, alg: &Algebra, n: usize) -> APoint {
    let coords = (0..n)
        .map(|_| (0..alg.dim()).map(|i| s.dyadic(if i == 0 { 2 } else { 3 })).collect())
        .collect();
    APoint::from_coeffs(alg, coords).expect("shape")
}

pub fn random_element(s: &mut Sampler, alg: &Algebra) -> WeilElement {
    WeilElement::new(alg, (0..alg.dim()).map(|_| s.uniform(-1.0, 1.0)).collect()).expect("shape")
}

pub fn random_endomorphism(s: &mut Sampler, alg: &Algebra) -> LinearEndomorphism {
    let d = alg.dim();
    let m = (0..d).map(|_| (0..d).map(|_| s.uniform(-1.0, 1.0)).collect()).collect();
    LinearEndomorphism::new(alg, m).expect("square")
}

fn leaf(s: &mut Sampler, n: usize) -> Expr {
    if s.chance(0.7) {
        Expr::var(s.below(n))
    } else {
        Expr::real(s.uniform(-1.0, 1.0))
    }
}

fn b(e: Expr) -> Box<Expr> {
    Box::new(e)
}

/// `c + u²` with `c ∈ [0.5, 1.5]`.
fn positive(s: &mut Sampler, u: Expr) -> Expr {
    Expr::Add(b(Expr::real(s.uniform(0.5, 1.5))), b(Expr::Pow(b(u), 2)))
}

/// A ConstA-free expression with `depth() ≤ max_depth`.
pub fn random_expr(s: &mut Sampler, n: usize, max_depth: usize) -> Expr {
    if max_depth <= 1 || s.chance(0.2) {
        return leaf(s, n);
    }
    let d = max_depth - 1;
    // guarded cases need three levels above their argument
    let guarded = max_depth >= 4;
    let choice = s.below(if guarded { 13 } else { 9 });
    match choice {
        0 | 1 => Expr::Add(b(random_expr(s, n, d)), b(random_expr(s, n, d))),
        2 => Expr::Sub(b(random_expr(s, n, d)), b(random_expr(s, n, d))),
        3 | 4 => Expr::Mul(b(random_expr(s, n, d)), b(random_expr(s, n, d))),
        5 => Expr::Neg(b(random_expr(s, n, d))),
        6 => Expr::Pow(b(random_expr(s, n, d)), 2 + s.below(2) as i32),
        7 => {
            let f = *s.pick(&[PrimitiveFn::Exp, PrimitiveFn::Sin, PrimitiveFn::Cos]);
            Expr::Apply(f, b(random_expr(s, n, d)))
        }
        8 if max_depth >= 3 => {
            let x = Expr::var(s.below(n));
            Expr::Apply(PrimitiveFn::Tan, b(Expr::Mul(b(Expr::real(0.5)), b(x))))
        }
        8 => Expr::Apply(PrimitiveFn::Sin, b(random_expr(s, n, d))),
        9..=11 => {
            let f = *s.pick(&[
                PrimitiveFn::Log,
                PrimitiveFn::Sqrt,
                PrimitiveFn::Recip,
                PrimitiveFn::Pow(1.5),
                PrimitiveFn::Pow(-0.5),
            ]);
            let u = random_expr(s, n, max_depth - 3);
            Expr::Apply(f, b(positive(s, u)))
        }
        _ => {
            let num = random_expr(s, n, d);
            let inner = random_expr(s, n, max_depth - 3);
            let den = positive(s, inner);
            Expr::Div(b(num), b(den))
        }
    }
}

/// A polynomial with `terms` monomials of total degree ≤ `degree` and dyadic
/// coefficients `k/4`, `1 ≤ |k| ≤ 4`.
pub fn random_polynomial(s: &mut Sampler, n: usize, degree: u32, terms: usize) -> Expr {
    Expr::sum((0..terms).map(|_| {
        let mut k = s.int(-4, 3);
        if k >= 0 {
            k += 1;
        }
        let mut m = Expr::real(k as f64 / 4.0);
        let deg = s.below(degree as usize + 1);
        for _ in 0..deg {
            m = Expr::mul(m, Expr::var(s.below(n)));
        }
        m
    }))
}

/// `a_0 + Σ a_k · f_k` with random A-constants `a_k` and base functions `f_k`:
/// an element of the represented class in `C∞(M^A, A)`.
pub fn random_afunction(s: &mut Sampler, alg: &Algebra, n: usize, max_depth: usize) -> AFunction {
    let mut out = Expr::constant(random_element(s, alg));
    for _ in 0..2 {
        let f = random_expr(s, n, max_depth);
        out = Expr::add(out, Expr::mul(Expr::constant(random_element(s, alg)), f));
    }
    out
}

pub fn random_field(s: &mut Sampler, n: usize, max_depth: usize) -> VectorField {
    VectorField::new((0..n).map(|_| random_expr(s, n, max_depth)).collect()).expect("shape")
}

pub fn random_afield(s: &mut Sampler, alg: &Algebra, n: usize, max_depth: usize) -> AVectorField {
    AVectorField::new((0..n).map(|_| random_afunction(s, alg, n, max_depth)).collect()).expect("shape")
}

fn increasing_tuples(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, &mut Vec::new(), &mut out);
    out
}

/// All strictly increasing `p`-tuples over `0..n`.
pub fn tuples(n: usize, p: usize) -> Vec<Vec<usize>> {
    increasing_tuples(n, p)
}

/// A base form of degree `p` with a coefficient on every tuple.
pub fn random_form(s: &mut Sampler, n: usize, p: usize, max_depth: usize) -> Result<CoordForm> {
    let terms = tuples(n, p).into_iter().map(|t| (t, random_expr(s, n, max_depth))).collect();
    CoordForm::from_terms(n, p, terms)
}

/// A form of degree `p` with coefficients in the represented A-class.
pub fn random_aform(s: &mut Sampler, alg: &Algebra, n: usize, p: usize, max_depth: usize) -> Result<CoordForm> {
    let terms = tuples(n, p)
        .into_iter()
        .map(|t| (t, random_afunction(s, alg, n, max_depth)))
        .collect();
    CoordForm::from_terms(n, p, terms)
}

/// A base form with dyadic polynomial coefficients.
pub fn polynomial_form(s: &mut Sampler, n: usize, p: usize) -> Result<CoordForm> {
    let terms = tuples(n, p)
        .into_iter()
        .map(|t| (t, random_polynomial(s, n, 3, 3)))
        .collect();
    CoordForm::from_terms(n, p, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expressions_respect_depth_and_domains() {
        let mut s = Sampler::new(11);
        for _ in 0..300 {
            let n = 1 + s.below(3);
            let e = random_expr(&mut s, n, 4);
            assert!(e.depth() <= 4, "{e}");
            assert!(e.arity() <= n);
            let p: Vec<f64> = (0..n).map(|_| s.uniform(-1.0, 1.0)).collect();
            assert!(e.eval_real(&p).is_ok(), "{e}");
        }
    }

    #[test]
    fn family_heights() {
        for pres in algebra_family() {
            assert!(WeilAlgebra::build(pres).unwrap().height() <= 3);
        }
    }

    #[test]
    fn tuple_counts() {
        assert_eq!(tuples(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(tuples(2, 0), vec![Vec::<usize>::new()]);
        assert!(tuples(1, 2).is_empty());
    }
}
