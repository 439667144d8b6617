//! The registered check suites. Each trial draws its inputs from one seeded
//! [`Sampler`]; residuals are `‖a − b‖∞ / (1 + max(‖a‖∞, ‖b‖∞))` unless an
//! identity is documented as exact, in which case the absolute value is kept.

use std::collections::BTreeMap;

use super::gen::*;
use super::jet::{
    classical_interior, classical_lie, classical_wedge_of_differentials, jet_prolong, jet_prolong_form,
};
use super::rng::Sampler;
use super::SuiteOptions;
use crate::error::Result;
use crate::expr::{AFunction, Expr};
use crate::forms::{contract, delta, dform, interior, lie_derivative, wedge, CoordForm, Multi};
use crate::poisson::{omega_from_bracket, CheckReport, PoissonStructure};
use crate::prolongation::{lie_bracket, prolong_field, APoint, AVectorField};
use crate::weil_algebra::{Algebra, AlgebraPresentation, WeilAlgebra, WeilElement};

type Coeffs = BTreeMap<Multi, WeilElement>;

pub fn residual(a: &WeilElement, b: &WeilElement) -> Result<f64> {
    Ok(a.distance(b)? / (1.0 + a.norm_inf().max(b.norm_inf())))
}

fn scalar_residual(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

/// Largest coefficient residual between two evaluated forms.
pub fn form_residual(a: &Coeffs, b: &Coeffs, alg: &Algebra) -> Result<f64> {
    let zero = WeilElement::zero(alg);
    let mut worst: f64 = 0.0;
    for k in a.keys().chain(b.keys()) {
        let r = residual(a.get(k).unwrap_or(&zero), b.get(k).unwrap_or(&zero))?;
        worst = worst.max(r);
    }
    Ok(worst)
}

fn forms_residual(a: &CoordForm, b: &CoordForm, xi: &APoint) -> Result<f64> {
    form_residual(&a.eval_at(xi)?, &b.eval_at(xi)?, xi.algebra())
}

fn ev(e: &Expr, xi: &APoint) -> Result<WeilElement> {
    e.eval_weil(xi)
}

fn describe_point(xi: &APoint) -> String {
    let coords: Vec<String> = xi.coords().iter().map(|c| format!("({})", c.to_machine_string())).collect();
    format!("[{}]", coords.join(", "))
}

fn describe_field(f: &[Expr]) -> String {
    let c: Vec<String> = f.iter().map(ToString::to_string).collect();
    format!("({})", c.join(", "))
}

fn algebra_label(alg: &Algebra) -> String {
    alg.to_string()
}

fn record(report: &mut CheckReport, id: &str, trial: usize, r: Result<f64>, inputs: impl FnOnce() -> String) {
    match r {
        Ok(v) => report.record(id, trial, v, inputs),
        Err(e) => {
            let ctx = inputs();
            report.record(id, trial, f64::INFINITY, || format!("error: {e}; {ctx}"))
        }
    }
}

/// `f^A` is a homomorphism: `+`, `·` and scalar multiples commute with evaluation.
pub fn hom_laws(opts: &SuiteOptions) -> CheckReport {
    let mut report = CheckReport::new("hom_laws", opts.seed, opts.trials, opts.tol);
    let mut s = Sampler::new(opts.seed);
    for t in 0..opts.trials {
        let alg = opts.algebra.clone().unwrap_or_else(|| random_algebra(&mut s));
        let n = 1 + s.below(3);
        let f = random_expr(&mut s, n, 4);
        let g = random_expr(&mut s, n, 4);
        let lambda = s.uniform(-2.0, 2.0);
        let xi = random_point(&mut s, &alg, n);
        let inputs = || format!("A={} f={f} g={g} lambda={lambda:?} xi={}", algebra_label(&alg), describe_point(&xi));
        let (bf, bg) = (Box::new(f.clone()), Box::new(g.clone()));
        let laws: [(&str, Expr, Box<dyn Fn(&WeilElement, &WeilElement) -> Result<WeilElement>>); 4] = [
            ("add", Expr::Add(bf.clone(), bg.clone()), Box::new(|a, b| a.try_add(b))),
            ("sub", Expr::Sub(bf.clone(), bg.clone()), Box::new(|a, b| a.try_sub(b))),
            ("mul", Expr::Mul(bf.clone(), bg.clone()), Box::new(|a, b| a.try_mul(b))),
            ("scale", Expr::Mul(Box::new(Expr::real(lambda)), bf.clone()), Box::new(|a, _| Ok(a.scale(lambda)))),
        ];
        for (id, combined, op) in laws {
            let r = (|| {
                let (ef, eg) = (ev(&f, &xi)?, ev(&g, &xi)?);
                residual(&ev(&combined, &xi)?, &op(&ef, &eg)?)
            })();
            record(&mut report, id, t, r, inputs);
        }
        let r = (|| residual(&ev(&f, &xi)?, &jet_prolong(&f, &xi)?))();
        record(&mut report, "jet_expansion", t, r, inputs);
    }
    report
}

/// `A ⊗ R[dt]/(dt²)` with the index maps of the `dt^0` and `dt^1` parts.
fn tangent_extension(alg: &Algebra) -> Result<(Algebra, Vec<usize>, Vec<usize>)> {
    let pres = alg.presentation();
    let mut gens = pres.generators.clone();
    gens.push("dt".to_string());
    let mut ideal: Vec<Vec<u32>> = pres
        .ideal_generators
        .iter()
        .map(|m| {
            let mut m = m.clone();
            m.push(0);
            m
        })
        .collect();
    let mut dt2 = vec![0; gens.len()];
    dt2[gens.len() - 1] = 2;
    ideal.push(dt2);
    let ext = WeilAlgebra::build(AlgebraPresentation::new(gens, ideal))?;
    let lift = |e: u32| -> Vec<usize> {
        alg.basis()
            .iter()
            .map(|m| {
                let mut m = m.clone();
                m.push(e);
                ext.index_of(&m).expect("product basis")
            })
            .collect()
    };
    let (i0, i1) = (lift(0), lift(1));
    Ok((ext, i0, i1))
}

/// `θ^A(μ ∘ f^A)(ξ)`: the derivative of `μ(f^A)` along the tangent vector
/// `θ^A(ξ)`, computed by evaluating `f` at `ξ + dt·θ^A(ξ)` over `A[dt]/(dt²)`.
fn directional_endomorphism(
    f: &Expr,
    field: &AVectorField,
    mu: &crate::weil_algebra::LinearEndomorphism,
    xi: &APoint,
) -> Result<WeilElement> {
    let alg = xi.algebra();
    let (ext, i0, i1) = tangent_extension(alg)?;
    let v = field.eval_at(xi)?;
    let coords = xi
        .coords()
        .iter()
        .zip(&v)
        .map(|(c, vi)| {
            let mut out = vec![0.0; ext.dim()];
            for (k, (&a, &b)) in c.coeffs().iter().zip(vi.coeffs()).enumerate() {
                out[i0[k]] = a;
                out[i1[k]] = b;
            }
            WeilElement::new(&ext, out)
        })
        .collect::<Result<Vec<_>>>()?;
    let val = f.eval_weil(&APoint::new(&ext, coords)?)?;
    let tangent = WeilElement::new(alg, i1.iter().map(|&k| val.coeffs()[k]).collect())?;
    mu.apply(&tangent)
}

/// Prolonged fields: derivation law, `θ^A(f^A) = [θ(f)]^A`, additivity,
/// the module law and the endomorphism law.
pub fn field_prolong(opts: &SuiteOptions) -> CheckReport {
    let mut report = CheckReport::new("field_prolong", opts.seed, opts.trials, opts.tol);
    let mut s = Sampler::new(opts.seed);
    for t in 0..opts.trials {
        let alg = opts.algebra.clone().unwrap_or_else(|| random_algebra(&mut s));
        let n = 1 + s.below(3);
        let theta = random_field(&mut s, n, 2);
        let theta2 = random_field(&mut s, n, 2);
        let general = random_afield(&mut s, &alg, n, 2);
        let f = random_expr(&mut s, n, 3);
        let g = random_expr(&mut s, n, 3);
        let h = random_expr(&mut s, n, 2);
        let mu = random_endomorphism(&mut s, &alg);
        let xi = random_point(&mut s, &alg, n);
        let inputs = || {
            format!(
                "A={} theta={} theta2={} f={f} g={g} h={h} xi={}",
                algebra_label(&alg),
                describe_field(theta.components()),
                describe_field(theta2.components()),
                describe_point(&xi)
            )
        };
        let d = prolong_field(&theta);

        for (id, x) in [("derivation_law", &d), ("derivation_law_general", &general)] {
            let r = (|| {
                let lhs = ev(&x.apply(&Expr::mul(f.clone(), g.clone()))?, &xi)?;
                let rhs = ev(&x.apply(&f)?, &xi)?
                    .try_mul(&ev(&g, &xi)?)?
                    .try_add(&ev(&f, &xi)?.try_mul(&ev(&x.apply(&g)?, &xi)?)?)?;
                residual(&lhs, &rhs)
            })();
            record(&mut report, id, t, r, inputs);
        }

        let r = (|| residual(&ev(&d.apply(&f)?, &xi)?, &jet_prolong(&theta.apply(&f)?, &xi)?))();
        record(&mut report, "prolongation", t, r, inputs);

        let r = (|| {
            let lhs = ev(&prolong_field(&theta.add(&theta2)?).apply(&f)?, &xi)?;
            let rhs = ev(&d.apply(&f)?, &xi)?.try_add(&ev(&prolong_field(&theta2).apply(&f)?, &xi)?)?;
            residual(&lhs, &rhs)
        })();
        record(&mut report, "sum_law", t, r, inputs);

        let r = (|| {
            let lhs = ev(&prolong_field(&theta.scale(&h)?).apply(&f)?, &xi)?;
            let rhs = ev(&h, &xi)?.try_mul(&ev(&d.apply(&f)?, &xi)?)?;
            residual(&lhs, &rhs)
        })();
        record(&mut report, "module_law", t, r, inputs);

        let r = (|| {
            let lhs = directional_endomorphism(&f, &d, &mu, &xi)?;
            let rhs = mu.apply(&jet_prolong(&theta.apply(&f)?, &xi)?)?;
            residual(&lhs, &rhs)
        })();
        record(&mut report, "endomorphism_law", t, r, inputs);
    }
    report
}

/// `[θ_1, θ_2]^A = [θ_1^A, θ_2^A]` applied to random `f^A`, and antisymmetry.
pub fn bracket_prolong(opts: &SuiteOptions) -> CheckReport {
    let mut report = CheckReport::new("bracket_prolong", opts.seed, opts.trials, opts.tol);
    let mut s = Sampler::new(opts.seed);
    for t in 0..opts.trials {
        let alg = opts.algebra.clone().unwrap_or_else(|| random_algebra(&mut s));
        let n = 1 + s.below(3);
        let t1 = random_field(&mut s, n, 2);
        let t2 = random_field(&mut s, n, 2);
        let f = random_expr(&mut s, n, 3);
        let xi = random_point(&mut s, &alg, n);
        let inputs = || {
            format!(
                "A={} theta1={} theta2={} f={f} xi={}",
                algebra_label(&alg),
                describe_field(t1.components()),
                describe_field(t2.components()),
                describe_point(&xi)
            )
        };
        let (a1, a2) = (prolong_field(&t1), prolong_field(&t2));
        let r = (|| {
            let lhs = ev(&prolong_field(&lie_bracket(&t1, &t2)?).apply(&f)?, &xi)?;
            let rhs = ev(&a1.apply(&a2.apply(&f)?)?, &xi)?.try_sub(&ev(&a2.apply(&a1.apply(&f)?)?, &xi)?)?;
            residual(&lhs, &rhs)
        })();
        record(&mut report, "bracket_prolongation", t, r, inputs);

        let r = (|| {
            let lhs = jet_prolong(&lie_bracket(&t1, &t2)?.apply(&f)?, &xi)?;
            let rhs = ev(&a1.commutator(&a2)?.apply(&f)?, &xi)?;
            residual(&lhs, &rhs)
        })();
        record(&mut report, "commutator", t, r, inputs);

        let r = (|| {
            let (b12, b21) = (lie_bracket(&t1, &t2)?, lie_bracket(&t2, &t1)?);
            let mut worst: f64 = 0.0;
            for (x, y) in b12.components().iter().zip(b21.components()) {
                worst = worst.max(residual(&ev(x, &xi)?, &ev(y, &xi)?.neg())?);
            }
            Ok(worst)
        })();
        record(&mut report, "antisymmetry", t, r, inputs);
    }
    report
}

/// Interior products, Lie derivatives and `d` on prolonged and general forms.
pub fn cartan(opts: &SuiteOptions) -> CheckReport {
    let mut report = CheckReport::new("cartan", opts.seed, opts.trials, opts.tol);
    let mut s = Sampler::new(opts.seed);
    for t in 0..opts.trials {
        let alg = opts.algebra.clone().unwrap_or_else(|| random_algebra(&mut s));
        let n = 1 + s.below(3);
        let xi = random_point(&mut s, &alg, n);
        let p = 1 + s.below(n.min(2));
        let theta = random_field(&mut s, n, 2);
        let eta = random_form(&mut s, n, p, 2);
        let x = random_form(&mut s, n, 1, 2);
        let f = random_expr(&mut s, n, 2);
        let fs: Vec<Expr> = (0..p).map(|_| random_expr(&mut s, n, 3)).collect();
        let d = random_afield(&mut s, &alg, n, 2);
        let big_x = random_aform(&mut s, &alg, n, 1, 2);
        let q = s.below(n.min(2) + 1);
        let omega = random_aform(&mut s, &alg, n, q, 2);
        let p2 = s.below(2);
        let eta2 = random_aform(&mut s, &alg, n, p2, 2);
        let phi = random_afunction(&mut s, &alg, n, 2);
        let pd = s.below(n.min(2));
        let poly = polynomial_form(&mut s, n, pd);
        let dyadic = dyadic_point(&mut s, &alg, n);
        let inputs = |what: &str| {
            format!(
                "A={} n={n} xi={} {what}",
                algebra_label(&alg),
                describe_point(&xi)
            )
        };
        let th = prolong_field(&theta);
        let theta_s = describe_field(theta.components());

        let jet_cmp = |lhs: &CoordForm, base: Result<CoordForm>| -> Result<f64> {
            form_residual(&lhs.eval_at(&xi)?, &jet_prolong_form(&base?, &xi)?, &alg)
        };

        let r = (|| {
            let eta = eta.as_ref().map_err(Clone::clone)?;
            jet_cmp(&interior(&th, eta)?, classical_interior(&theta, eta))
        })();
        record(&mut report, "interior_prolongation", t, r, || {
            inputs(&format!("theta={theta_s} eta={}", show(&eta)))
        });

        let r = (|| {
            let eta = eta.as_ref().map_err(Clone::clone)?;
            jet_cmp(&lie_derivative(&th, eta)?, classical_lie(&theta, eta))
        })();
        record(&mut report, "lie_prolongation", t, r, || {
            inputs(&format!("theta={theta_s} eta={}", show(&eta)))
        });

        let r = (|| {
            let x = x.as_ref().map_err(Clone::clone)?;
            let lhs = lie_derivative(&th.scale(&f)?, x)?;
            jet_cmp(&lhs, classical_lie(&theta.scale(&f)?, x))
        })();
        record(&mut report, "lie_scaled_field", t, r, || {
            inputs(&format!("theta={theta_s} f={f} x={}", show(&x)))
        });

        let r = (|| {
            let x = x.as_ref().map_err(Clone::clone)?;
            let lhs = lie_derivative(&th, &x.scale(&f)?)?;
            jet_cmp(&lhs, classical_lie(&theta, &x.scale(&f)?))
        })();
        record(&mut report, "lie_scaled_form", t, r, || {
            inputs(&format!("theta={theta_s} f={f} x={}", show(&x)))
        });

        let r = (|| {
            let lhs = lie_derivative(&th, &delta(n, &f)?)?;
            jet_cmp(&lhs, classical_lie(&theta, &classical_wedge_of_differentials(n, std::slice::from_ref(&f))?))
        })();
        record(&mut report, "lie_differential", t, r, || inputs(&format!("theta={theta_s} f={f}")));

        let r = (|| {
            let mut lhs = CoordForm::function(n, Expr::one());
            for fi in &fs {
                lhs = wedge(&lhs, &delta(n, fi)?)?;
            }
            jet_cmp(&lhs, classical_wedge_of_differentials(n, &fs))
        })();
        record(&mut report, "wedge_of_differentials", t, r, || {
            inputs(&format!("f={}", describe_field(&fs)))
        });

        let dd = describe_field(d.components());
        let r = (|| {
            let x = big_x.as_ref().map_err(Clone::clone)?;
            let lhs = lie_derivative(&d.scale(&phi)?, x)?;
            let rhs = lie_derivative(&d, x)?
                .scale(&phi)?
                .add(&delta(n, &phi)?.scale(&contract(&d, x)?)?)?;
            forms_residual(&lhs, &rhs, &xi)
        })();
        record(&mut report, "lie_function_times_field", t, r, || {
            inputs(&format!("D={dd} phi={phi} X={}", show(&big_x)))
        });

        let r = (|| {
            let x = big_x.as_ref().map_err(Clone::clone)?;
            let lhs = lie_derivative(&d, &x.scale(&phi)?)?;
            let rhs = x.scale(&d.apply(&phi)?)?.add(&lie_derivative(&d, x)?.scale(&phi)?)?;
            forms_residual(&lhs, &rhs, &xi)
        })();
        record(&mut report, "lie_function_times_form", t, r, || {
            inputs(&format!("D={dd} phi={phi} X={}", show(&big_x)))
        });

        let r = (|| {
            let lhs = lie_derivative(&d, &delta(n, &phi)?)?;
            let rhs = delta(n, &d.apply(&phi)?)?;
            forms_residual(&lhs, &rhs, &xi)
        })();
        record(&mut report, "lie_commutes_delta", t, r, || inputs(&format!("D={dd} phi={phi}")));

        let r = (|| {
            let om = omega.as_ref().map_err(Clone::clone)?;
            forms_residual(&lie_derivative(&d, &dform(om)?)?, &dform(&lie_derivative(&d, om)?)?, &xi)
        })();
        record(&mut report, "lie_commutes_d", t, r, || {
            inputs(&format!("D={dd} omega={}", show(&omega)))
        });

        let r = (|| {
            let om = omega.as_ref().map_err(Clone::clone)?;
            let e2 = eta2.as_ref().map_err(Clone::clone)?;
            if om.degree() + e2.degree() == 0 {
                return Ok(0.0);
            }
            let lhs = interior(&d, &wedge(om, e2)?)?;
            let left = if om.degree() > 0 {
                wedge(&interior(&d, om)?, e2)?
            } else {
                CoordForm::zero(n, om.degree() + e2.degree() - 1)
            };
            let right = if e2.degree() > 0 {
                let w = wedge(om, &interior(&d, e2)?)?;
                if om.degree() % 2 == 1 {
                    w.neg()
                } else {
                    w
                }
            } else {
                CoordForm::zero(n, om.degree() + e2.degree() - 1)
            };
            forms_residual(&lhs, &left.add(&right)?, &xi)
        })();
        record(&mut report, "interior_antiderivation", t, r, || {
            inputs(&format!("D={dd} omega={} eta={}", show(&omega), show(&eta2)))
        });

        // Exact: integer-dyadic polynomial coefficients at a dyadic point.
        let r = (|| {
            let poly = poly.as_ref().map_err(Clone::clone)?;
            let dd = dform(&dform(poly)?)?.eval_at(&dyadic)?;
            Ok(dd.values().fold(0.0, |m: f64, v| m.max(v.norm_inf())))
        })();
        record(&mut report, "d_squared", t, r, || {
            format!("A={} form={} xi={}", algebra_label(&alg), show(&poly), describe_point(&dyadic))
        });
    }
    report
}

fn show(f: &Result<CoordForm>) -> String {
    match f {
        Ok(f) => f.to_string(),
        Err(e) => format!("<{e}>"),
    }
}

/// Randomized Jacobi verification of a base bivector.
pub fn jacobi(pi: &PoissonStructure, trials: usize, tol: f64, seed: u64) -> CheckReport {
    let mut report = CheckReport::new("jacobi", seed, trials, tol);
    let mut s = Sampler::new(seed);
    let n = pi.dim();
    let coord_triples: Vec<[usize; 3]> = if n >= 3 {
        tuples(n, 3).into_iter().map(|t| [t[0], t[1], t[2]]).collect()
    } else {
        Vec::new()
    };
    for t in 0..trials {
        for id in ["coordinate_triples", "cubic_triples"] {
            let (f, g, h) = if id == "coordinate_triples" {
                let [i, j, k] = if coord_triples.is_empty() {
                    [s.below(n), s.below(n), s.below(n)]
                } else {
                    coord_triples[t % coord_triples.len()]
                };
                (Expr::var(i), Expr::var(j), Expr::var(k))
            } else {
                (
                    random_polynomial(&mut s, n, 3, 3),
                    random_polynomial(&mut s, n, 3, 3),
                    random_polynomial(&mut s, n, 3, 3),
                )
            };
            let p: Vec<f64> = (0..n).map(|_| s.uniform(-1.0, 1.0)).collect();
            let r = (|| Ok(pi.jacobiator(&f, &g, &h)?.eval_real(&p)?.abs()))();
            record(&mut report, id, t, r, || format!("f={f} g={g} h={h} point={p:?}"));
        }
    }
    report
}

/// The A-Poisson suite for one bivector and one algebra, with trust forced.
pub fn a_poisson(pi: &PoissonStructure, alg: &Algebra, trials: usize, tol: f64, seed: u64) -> CheckReport {
    let mut report = CheckReport::new("a_poisson", seed, trials, tol);
    let mut s = Sampler::new(seed);
    let mut pi = pi.clone();
    pi.force_trust();
    for t in 0..trials {
        poisson_trial(&mut report, &pi, alg, &mut s, t);
    }
    report
}

/// Lie and biderivation structure of the prolonged bracket over the canonical plane
/// and `so(3)*`, cycling through dual numbers, `R[x]/(x³)` and
/// `R[x,y]/(x², xy, y²)` unless a structure or algebra is fixed.
pub fn poisson_full(opts: &SuiteOptions) -> CheckReport {
    let mut report = CheckReport::new("poisson_full", opts.seed, opts.trials, opts.tol);
    let mut s = Sampler::new(opts.seed);
    let structures = match &opts.poisson {
        Some(p) => vec![p.clone()],
        None => vec![PoissonStructure::canonical(1), PoissonStructure::so3()],
    };
    let algebras = match &opts.algebra {
        Some(a) => vec![a.clone()],
        None => [
            AlgebraPresentation::dual(),
            AlgebraPresentation::jets(2),
            AlgebraPresentation::multi_jets(vec!["x", "y"], 1),
        ]
        .into_iter()
        .map(|p| WeilAlgebra::build(p).expect("valid"))
        .collect(),
    };
    let mut combos = Vec::new();
    for pi in &structures {
        for a in &algebras {
            let mut pi = pi.clone();
            pi.force_trust();
            combos.push((pi, a.clone()));
        }
    }
    for t in 0..opts.trials {
        let (pi, alg) = &combos[t % combos.len()];
        poisson_trial(&mut report, pi, alg, &mut s, t);
    }
    report
}

fn prolonged_polynomial(s: &mut Sampler, alg: &Algebra, n: usize) -> AFunction {
    let f = random_polynomial(s, n, 3, 3);
    let g = random_polynomial(s, n, 2, 2);
    Expr::add(Expr::mul(Expr::constant(random_element(s, alg)), f), g)
}

fn describe_pi(pi: &PoissonStructure) -> String {
    let e: Vec<String> = pi
        .upper()
        .iter()
        .map(|((i, j), e)| format!("pi{}{}={e}", i + 1, j + 1))
        .collect();
    e.join(" ")
}

fn poisson_trial(report: &mut CheckReport, pi: &PoissonStructure, alg: &Algebra, s: &mut Sampler, t: usize) {
    let n = pi.dim();
    let xi = random_point(s, alg, n);
    let phi = random_afunction(s, alg, n, 2);
    let psi = random_afunction(s, alg, n, 2);
    let chi = random_afunction(s, alg, n, 2);
    let (c1, c2) = (random_element(s, alg), random_element(s, alg));
    let polys: Vec<AFunction> = (0..3).map(|_| prolonged_polynomial(s, alg, n)).collect();
    let f = random_expr(s, n, 3);
    let g = random_expr(s, n, 3);
    let base_x = random_form(s, n, 1, 2);
    let base_y = random_form(s, n, 1, 2);
    let big_x = random_aform(s, alg, n, 1, 2);
    let big_y = random_aform(s, alg, n, 1, 2);
    let cubics: Vec<Expr> = (0..3).map(|_| random_polynomial(s, n, 3, 3)).collect();
    let base_pt: Vec<f64> = (0..n).map(|_| s.uniform(-1.0, 1.0)).collect();

    let ctx = || format!("A={} {} xi={}", algebra_label(alg), describe_pi(pi), describe_point(&xi));
    let pb = |a: &Expr, b: &Expr| pi.prolong_bracket(a, b);

    let r = (|| residual(&ev(&pb(&phi, &psi)?, &xi)?, &ev(&pb(&psi, &phi)?, &xi)?.neg()))();
    record(report, "antisymmetry", t, r, || format!("{} phi={phi} psi={psi}", ctx()));

    let r = (|| {
        let comb = Expr::add(
            Expr::mul(Expr::constant(c1.clone()), phi.clone()),
            Expr::mul(Expr::constant(c2.clone()), chi.clone()),
        );
        let lhs = ev(&pb(&comb, &psi)?, &xi)?;
        let rhs = c1
            .try_mul(&ev(&pb(&phi, &psi)?, &xi)?)?
            .try_add(&c2.try_mul(&ev(&pb(&chi, &psi)?, &xi)?)?)?;
        residual(&lhs, &rhs)
    })();
    record(report, "bilinearity", t, r, || format!("{} phi={phi} chi={chi} psi={psi} a={c1} b={c2}", ctx()));

    let r = (|| {
        let lhs = ev(&pb(&phi, &Expr::mul(psi.clone(), chi.clone()))?, &xi)?;
        let rhs = ev(&pb(&phi, &psi)?, &xi)?
            .try_mul(&ev(&chi, &xi)?)?
            .try_add(&ev(&psi, &xi)?.try_mul(&ev(&pb(&phi, &chi)?, &xi)?)?)?;
        residual(&lhs, &rhs)
    })();
    record(report, "leibniz", t, r, || format!("{} phi={phi} psi={psi} chi={chi}", ctx()));

    let r = (|| {
        let (a, b, c) = (&polys[0], &polys[1], &polys[2]);
        let terms = [
            ev(&pb(a, &pb(b, c)?)?, &xi)?,
            ev(&pb(b, &pb(c, a)?)?, &xi)?,
            ev(&pb(c, &pb(a, b)?)?, &xi)?,
        ];
        let scale = terms.iter().fold(0.0, |m: f64, e| m.max(e.norm_inf()));
        let sum = terms[0].try_add(&terms[1])?.try_add(&terms[2])?;
        Ok(sum.norm_inf() / (1.0 + scale))
    })();
    record(report, "jacobi", t, r, || format!("{} triple={}", ctx(), describe_field(&polys)));

    let r = (|| Ok(pi.jacobiator(&cubics[0], &cubics[1], &cubics[2])?.eval_real(&base_pt)?.abs()))();
    record(report, "base_jacobi", t, r, || {
        format!("{} triple={} point={base_pt:?}", describe_pi(pi), describe_field(&cubics))
    });

    let r = (|| residual(&ev(&pb(&f, &g)?, &xi)?, &jet_prolong(&pi.bracket(&f, &g)?, &xi)?))();
    record(report, "bracket_prolongation", t, r, || format!("{} f={f} g={g}", ctx()));

    let r = (|| {
        let lhs = ev(&pb(&f, &g)?, &xi)?.augmentation();
        Ok(scalar_residual(lhs, pi.bracket(&f, &g)?.eval_real(&xi.base_point())?))
    })();
    record(report, "augmentation", t, r, || format!("{} f={f} g={g}", ctx()));

    let r = (|| {
        let lhs = ev(&pi.ad_prolong(&f)?.apply(&psi)?, &xi)?;
        let rhs = ev(&prolong_field(&pi.hamiltonian_field(&f)?).apply(&psi)?, &xi)?;
        residual(&lhs, &rhs)
    })();
    record(report, "ad_prolongation", t, r, || format!("{} f={f} psi={psi}", ctx()));

    let r = (|| {
        let (x, y) = (base_x.as_ref().map_err(Clone::clone)?, base_y.as_ref().map_err(Clone::clone)?);
        let lhs = ev(&pi.omega_prolonged(x, y)?, &xi)?;
        let base = omega_from_bracket(n, |a, b| pi.bracket(a, b), x, y)?;
        residual(&lhs, &jet_prolong(&base, &xi)?)
    })();
    record(report, "omega_prolongation", t, r, || {
        format!("{} x={} y={}", ctx(), show(&base_x), show(&base_y))
    });

    let r = (|| {
        let x = big_x.as_ref().map_err(Clone::clone)?;
        Ok(ev(&pi.omega_prolonged(x, x)?, &xi)?.norm_inf())
    })();
    record(report, "omega_skew", t, r, || format!("{} X={}", ctx(), show(&big_x)));

    let r = (|| {
        let (x, y) = (big_x.as_ref().map_err(Clone::clone)?, big_y.as_ref().map_err(Clone::clone)?);
        let lhs = ev(&omega_from_bracket(n, pb, x, y)?, &xi)?;
        residual(&lhs, &ev(&pi.omega_prolonged(x, y)?, &xi)?)
    })();
    record(report, "omega_from_bracket", t, r, || {
        format!("{} X={} Y={}", ctx(), show(&big_x), show(&big_y))
    });

    let r = (|| {
        let x = base_x.as_ref().map_err(Clone::clone)?;
        let lhs = ev(&pi.ad_tilde(x)?.apply(&f)?, &xi)?;
        let base = Expr::sum((0..n).map(|i| {
            Ok::<_, crate::error::Error>(Expr::mul(x.coefficient(&[i]), pi.bracket(&Expr::var(i), &f)?))
        }).collect::<Result<Vec<_>>>()?);
        residual(&lhs, &jet_prolong(&base, &xi)?)
    })();
    record(report, "ad_tilde_prolongation", t, r, || format!("{} x={} f={f}", ctx(), show(&base_x)));

    let r = (|| {
        let x = big_x.as_ref().map_err(Clone::clone)?;
        let lhs = ev(&pi.ad_tilde(x)?.apply(&phi)?, &xi)?;
        let rhs = ev(&pi.omega_prolonged(x, &delta(n, &phi)?)?, &xi)?.neg();
        residual(&lhs, &rhs)
    })();
    record(report, "ad_tilde_omega", t, r, || format!("{} X={} phi={phi}", ctx(), show(&big_x)));

    let r = (|| {
        let (x, y) = (big_x.as_ref().map_err(Clone::clone)?, big_y.as_ref().map_err(Clone::clone)?);
        let lhs = ev(&contract(&pi.ad_tilde(x)?, y)?, &xi)?;
        let rhs = ev(&pi.omega_prolonged(x, y)?, &xi)?.neg();
        residual(&lhs, &rhs)
    })();
    record(report, "double_tilde_omega", t, r, || {
        format!("{} X={} Y={}", ctx(), show(&big_x), show(&big_y))
    });

    let r = (|| {
        let lhs = lie_derivative(&pi.ad_tilde(&delta(n, &phi)?)?, &delta(n, &psi)?)?;
        let rhs = delta(n, &pb(&phi, &psi)?)?;
        forms_residual(&lhs, &rhs, &xi)
    })();
    record(report, "lie_hamiltonian_differential", t, r, || format!("{} phi={phi} psi={psi}", ctx()));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tangent_extension_shape() {
        let a = WeilAlgebra::build(AlgebraPresentation::jets(2)).unwrap();
        let (ext, i0, i1) = tangent_extension(&a).unwrap();
        assert_eq!(ext.dim(), 6);
        assert_eq!(i0[0], 0);
        assert!(i0.iter().chain(&i1).all(|&k| k < 6));
    }

    #[test]
    fn suites_pass_on_small_budgets() {
        for id in super::super::SUITES {
            let r = super::super::run_suite(id, 5, 6, 1e-9).unwrap();
            assert!(r.pass, "{id}: {}", r.to_json());
        }
    }

    #[test]
    fn broken_structure_fails_the_a_poisson_suite() {
        let pi = PoissonStructure::new(
            3,
            vec![
                (0, 1, crate::expr::parse("x3 + 0.1*x1^2", 3).unwrap()),
                (1, 2, Expr::var(0)),
                (2, 0, Expr::var(1)),
            ],
        )
        .unwrap();
        let a = WeilAlgebra::build(AlgebraPresentation::dual()).unwrap();
        let r = pi.verify_a_poisson(&a, 8, 1e-9, 3);
        assert!(!r.pass);
        assert!(r.identity("jacobi") > 1e-3);
        assert!(r.identity("base_jacobi") > 1e-3);
    }
}
