use proptest::prelude::*;

use weilc::forms::{dform, interior, wedge};
use weilc::oracle::gen::{
    algebra_family, random_afield, random_algebra, random_aform, random_element, random_expr, random_point,
    random_polynomial,
};
use weilc::oracle::{taylor_coeffs, Sampler};
use weilc::weil_algebra::taylor_lift;
use weilc::*;

fn b(e: Expr) -> Box<Expr> {
    Box::new(e)
}

fn real_literal() -> impl Strategy<Value = f64> {
    prop_oneof![
        -100.0..100.0f64,
        any::<f64>().prop_filter("finite", |v| v.is_finite()),
        Just(0.0),
        Just(-0.0),
    ]
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![(0usize..3).prop_map(Expr::Var), real_literal().prop_map(Expr::ConstR)];
    leaf.prop_recursive(5, 48, 2, |inner| {
        let prim = prop_oneof![
            Just(PrimitiveFn::Exp),
            Just(PrimitiveFn::Log),
            Just(PrimitiveFn::Sin),
            Just(PrimitiveFn::Cos),
            Just(PrimitiveFn::Tan),
            Just(PrimitiveFn::Sqrt),
            Just(PrimitiveFn::Recip),
            (-3.0..3.0f64).prop_map(PrimitiveFn::Pow),
        ];
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Expr::Add(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Expr::Sub(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Expr::Mul(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Expr::Div(b(x), b(y))),
            inner.clone().prop_map(|x| Expr::Neg(b(x))),
            (inner.clone(), -4i32..6).prop_map(|(x, k)| Expr::Pow(b(x), k)),
            (prim, inner).prop_map(|(f, x)| Expr::Apply(f, b(x))),
        ]
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_parse_round_trip(e in arb_expr()) {
        let text = e.to_string();
        let back = parse(&text, 3).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(back, e);
    }

    #[test]
    fn multiplication_laws(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let alg = random_algebra(&mut s);
        let (x, y, z) = (random_element(&mut s, &alg), random_element(&mut s, &alg), random_element(&mut s, &alg));
        prop_assert_eq!(x.try_mul(&y).unwrap(), y.try_mul(&x).unwrap());
        let one = WeilElement::one(&alg);
        prop_assert_eq!(x.try_mul(&one).unwrap(), x.clone());
        let l = x.try_mul(&y).unwrap().try_mul(&z).unwrap();
        let r = x.try_mul(&y.try_mul(&z).unwrap()).unwrap();
        prop_assert!(l.approx_eq(&r, 1e-14), "{} vs {}", l, r);
        let l = x.try_mul(&y.try_add(&z).unwrap()).unwrap();
        let r = x.try_mul(&y).unwrap().try_add(&x.try_mul(&z).unwrap()).unwrap();
        prop_assert!(l.approx_eq(&r, 1e-14));
        // the maximal ideal is nilpotent of order height + 1
        let n = x.nilpotent_part().powi_nonneg(alg.height() + 1);
        prop_assert!(n.norm_inf() == 0.0);
    }

    #[test]
    fn prolongation_covers_the_base_value(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let alg = random_algebra(&mut s);
        let n = 1 + s.below(3);
        let f = random_expr(&mut s, n, 4);
        let xi = random_point(&mut s, &alg, n);
        let lifted = f.eval_weil(&xi).unwrap().augmentation();
        let base = f.eval_real(&xi.base_point()).unwrap();
        prop_assert!(rel(lifted, base) < 1e-13, "{}: {} vs {}", f, lifted, base);
    }

    #[test]
    fn symbolic_partials_match_dual_numbers_and_differences(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let n = 1 + s.below(3);
        let f = random_expr(&mut s, n, 4);
        let p: Vec<f64> = (0..n).map(|_| s.uniform(-0.8, 0.8)).collect();
        let i = s.below(n);
        let symbolic = f.diff(i).eval_real(&p).unwrap();
        let dual = WeilAlgebra::build(AlgebraPresentation::dual()).unwrap();
        let coords = (0..n).map(|k| vec![p[k], if k == i { 1.0 } else { 0.0 }]).collect();
        let forward = f.eval_weil(&APoint::from_coeffs(&dual, coords).unwrap()).unwrap().coeffs()[1];
        prop_assert!(rel(symbolic, forward) < 1e-12, "{}: {} vs {}", f, symbolic, forward);
        let g = |t: f64| {
            let mut q = p.clone();
            q[i] = t;
            f.eval_real(&q)
        };
        let fd = taylor_coeffs(&g, p[i], 1).unwrap()[1];
        prop_assert!(rel(symbolic, fd) < 1e-6, "{}: {} vs {}", f, symbolic, fd);
    }

    #[test]
    fn exp_inverts_log(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let alg = random_algebra(&mut s);
        let mut a = random_element(&mut s, &alg).into_coeffs();
        a[0] = s.uniform(0.5, 2.0);
        let a = WeilElement::new(&alg, a).unwrap();
        let back = taylor_lift(PrimitiveFn::Exp, &taylor_lift(PrimitiveFn::Log, &a).unwrap()).unwrap();
        prop_assert!(back.approx_eq(&a, 1e-12), "{} vs {}", back, a);
    }

    #[test]
    fn exterior_identities(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let alg = random_algebra(&mut s);
        let n = 2 + s.below(2);
        let xi = random_point(&mut s, &alg, n);
        let p = s.below(2);
        let q = 1 + s.below(2);
        let om = random_aform(&mut s, &alg, n, p, 2).unwrap();
        let eta = random_aform(&mut s, &alg, n, q, 2).unwrap();
        let d = random_afield(&mut s, &alg, n, 2);
        let lhs = wedge(&om, &eta).unwrap().eval_at(&xi).unwrap();
        let swapped = wedge(&eta, &om).unwrap();
        let rhs = if (p * q) % 2 == 1 { swapped.neg() } else { swapped }.eval_at(&xi).unwrap();
        prop_assert!(weilc::oracle::suites::form_residual(&lhs, &rhs, &alg).unwrap() < 1e-13);
        let ii = interior(&d, &interior(&d, &eta.add(&eta).unwrap()).unwrap());
        if q >= 2 {
            let v = ii.unwrap().eval_at(&xi).unwrap();
            prop_assert!(v.values().all(|c| c.norm_inf() < 1e-13));
        } else {
            prop_assert!(ii.is_err());
        }
        let dd = dform(&dform(&om).unwrap()).unwrap().eval_at(&xi).unwrap();
        prop_assert!(dd.values().all(|c| c.norm_inf() < 1e-12));
    }

    #[test]
    fn dyadic_polynomials_prolong_exactly(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let alg = random_algebra(&mut s);
        let n = 1 + s.below(3);
        let f = random_polynomial(&mut s, n, 3, 4);
        let g = random_polynomial(&mut s, n, 3, 4);
        let xi = weilc::oracle::gen::dyadic_point(&mut s, &alg, n);
        let lhs = Expr::mul(f.clone(), g.clone()).eval_weil(&xi).unwrap();
        let rhs = f.eval_weil(&xi).unwrap().try_mul(&g.eval_weil(&xi).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn family_contains_the_named_algebras() {
    let dims: Vec<usize> = algebra_family()
        .into_iter()
        .map(|p| WeilAlgebra::build(p).unwrap().dim())
        .collect();
    assert_eq!(dims, vec![2, 3, 4, 3, 4, 6, 4]);
}

#[test]
fn suites_are_deterministic() {
    for id in weilc::oracle::SUITES {
        let a = run_suite(id, 9, 4, 1e-9).unwrap();
        let b = run_suite(id, 9, 4, 1e-9).unwrap();
        assert_eq!(a.to_json(), b.to_json(), "{id}");
        let c = run_suite(id, 10, 4, 1e-9).unwrap();
        assert_ne!(a.to_json(), c.to_json(), "{id}: seed is ignored");
    }
}
