//! Poisson bivectors on `R^n`, the base bracket and Hamiltonian fields, and
//! the prolonged objects `ad^A`, `ω^A` and `{·,·}_{M^A}`.
//!
//! Sign convention: `{f, g} = −ω(δf, δg)`, so `ω(dx_i, dx_j) = −π_ij`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{AFunction, Expr};
use crate::forms::CoordForm;
use crate::prolongation::{AVectorField, VectorField};
use crate::weil_algebra::Algebra;

/// A bivector `π` stored by its upper triangle; `π_ji = −π_ij`, `π_ii = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonStructure {
    n: usize,
    upper: BTreeMap<(usize, usize), Expr>,
    trusted: bool,
}

impl PoissonStructure {
    /// Entries `(i, j, π_ij)` with `i ≠ j`; a lower entry is stored negated.
    pub fn new(n: usize, entries: Vec<(usize, usize, Expr)>) -> Result<Self> {
        let mut upper = BTreeMap::new();
        for (i, j, e) in entries {
            if i >= n || j >= n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: i.max(j) + 1,
                });
            }
            if i == j {
                return Err(Error::BadPresentation(format!("diagonal bivector entry ({}, {})", i + 1, j + 1)));
            }
            if !e.is_real() {
                return Err(Error::AlgebraMismatch);
            }
            e.check_arity(n)?;
            let (key, value) = if i < j { ((i, j), e) } else { ((j, i), Expr::neg(e)) };
            if upper.insert(key, value).is_some() {
                return Err(Error::BadPresentation(format!(
                    "bivector entry ({}, {}) given twice",
                    key.0 + 1,
                    key.1 + 1
                )));
            }
        }
        Ok(Self {
            n,
            upper,
            trusted: false,
        })
    }

    /// The canonical structure on `R^{2m}` with coordinates `(q_1..q_m, p_1..p_m)`.
    pub fn canonical(m: usize) -> Self {
        let entries = (0..m).map(|i| (i, m + i, Expr::one())).collect();
        Self::new(2 * m, entries).expect("well-formed")
    }

    /// The Lie–Poisson structure on `so(3)*`: `π_12 = x3, π_23 = x1, π_31 = x2`.
    pub fn so3() -> Self {
        Self::new(
            3,
            vec![(0, 1, Expr::var(2)), (1, 2, Expr::var(0)), (2, 0, Expr::var(1))],
        )
        .expect("well-formed")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `π_ij` for any ordered pair.
    pub fn entry(&self, i: usize, j: usize) -> Expr {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => Expr::zero(),
            Less => self.upper.get(&(i, j)).cloned().unwrap_or_else(Expr::zero),
            Greater => self.upper.get(&(j, i)).map(|e| Expr::neg(e.clone())).unwrap_or_else(Expr::zero),
        }
    }

    /// Stored upper-triangle entries.
    pub fn upper(&self) -> &BTreeMap<(usize, usize), Expr> {
        &self.upper
    }

    pub fn is_trusted(&self) -> bool {
        self.trusted
    }

    /// Runs [`jacobi_check`](Self::jacobi_check) and marks the structure
    /// trusted exactly when it passes.
    pub fn establish_trust(&mut self, trials: usize, tol: f64, seed: u64) -> CheckReport {
        let report = self.jacobi_check(trials, tol, seed);
        self.trusted = report.pass && !report.vacuous;
        report
    }

    /// Marks the structure trusted without verification.
    pub fn force_trust(&mut self) {
        self.trusted = true;
    }

    fn require_trust(&self) -> Result<()> {
        if self.trusted {
            Ok(())
        } else {
            Err(Error::Untrusted)
        }
    }

    fn check_arity(&self, e: &Expr) -> Result<()> {
        e.check_arity(self.n)
    }

    /// `Σ_{i<j} π_ij (∂_i f ∂_j g − ∂_j f ∂_i g)` for base functions.
    pub fn bracket(&self, f: &Expr, g: &Expr) -> Result<Expr> {
        self.check_arity(f)?;
        self.check_arity(g)?;
        Ok(self.bracket_formula(f, g))
    }

    fn bracket_formula(&self, f: &Expr, g: &Expr) -> Expr {
        let (df, dg) = (f.gradient(self.n), g.gradient(self.n));
        Expr::sum(self.upper.iter().map(|(&(i, j), p)| {
            let inner = Expr::sub(
                Expr::mul(df[i].clone(), dg[j].clone()),
                Expr::mul(df[j].clone(), dg[i].clone()),
            );
            Expr::mul(p.clone(), inner)
        }))
    }

    /// `{f,{g,h}} + {g,{h,f}} + {h,{f,g}}`.
    pub fn jacobiator(&self, f: &Expr, g: &Expr, h: &Expr) -> Result<Expr> {
        let a = self.bracket(f, &self.bracket(g, h)?)?;
        let b = self.bracket(g, &self.bracket(h, f)?)?;
        let c = self.bracket(h, &self.bracket(f, g)?)?;
        Ok(Expr::sum([a, b, c]))
    }

    /// Randomized Jacobi verification on coordinate triples and random cubics
    /// at points of `[−1, 1]^n`; the residual is the absolute Jacobiator.
    pub fn jacobi_check(&self, trials: usize, tol: f64, seed: u64) -> CheckReport {
        crate::oracle::suites::jacobi(self, trials, tol, seed)
    }

    /// `ad(f)` with components `X_i = {f, x_i} = Σ_k π_ki ∂_k f`.
    pub fn hamiltonian_field(&self, f: &Expr) -> Result<VectorField> {
        let comps = (0..self.n)
            .map(|i| self.bracket(f, &Expr::var(i)))
            .collect::<Result<Vec<_>>>()?;
        VectorField::new(comps)
    }

    /// `ad^A(φ)` with components `Σ_j π_ji^A D_j φ`.
    pub fn ad_prolong(&self, phi: &AFunction) -> Result<AVectorField> {
        self.require_trust()?;
        self.check_arity(phi)?;
        let grad = phi.gradient(self.n);
        let comps = (0..self.n)
            .map(|i| Expr::sum((0..self.n).map(|j| Expr::mul(self.entry(j, i), grad[j].clone()))))
            .collect();
        AVectorField::new(comps)
    }

    /// `ad~^A(X) = Σ_i X_i · [ad(x_i)]^A` for a 1-form `X = Σ X_i dx_i`,
    /// assembled from the Hamiltonian fields of the coordinates.
    pub fn ad_tilde(&self, x: &CoordForm) -> Result<AVectorField> {
        self.require_trust()?;
        self.check_one_form(x)?;
        let mut comps = vec![Expr::zero(); self.n];
        for i in 0..self.n {
            let xi = x.coefficient(&[i]);
            if xi.is_zero() {
                continue;
            }
            let ham = self.hamiltonian_field(&Expr::var(i))?;
            for (k, c) in ham.components().iter().enumerate() {
                comps[k] = Expr::add(comps[k].clone(), Expr::mul(xi.clone(), c.clone()));
            }
        }
        AVectorField::new(comps)
    }

    fn check_one_form(&self, x: &CoordForm) -> Result<()> {
        if x.degree() != 1 {
            return Err(Error::DegreeError(format!("expected a 1-form, got degree {}", x.degree())));
        }
        if x.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: x.dim(),
            });
        }
        Ok(())
    }

    /// `{φ, ψ}_{M^A} = Σ_{i<j} π_ij^A (D_i φ D_j ψ − D_j φ D_i ψ)`.
    pub fn prolong_bracket(&self, phi: &AFunction, psi: &AFunction) -> Result<AFunction> {
        self.require_trust()?;
        self.check_arity(phi)?;
        self.check_arity(psi)?;
        shared_algebra(phi, psi)?;
        Ok(self.bracket_formula(phi, psi))
    }

    /// `ω^A(X, Y) = −Σ_{i,j} X_i Y_j π_ij^A`, summed over `i < j` as
    /// `−π_ij (X_i Y_j − X_j Y_i)` so that `ω^A(X, X)` vanishes exactly.
    pub fn omega_prolonged(&self, x: &CoordForm, y: &CoordForm) -> Result<AFunction> {
        self.require_trust()?;
        self.check_one_form(x)?;
        self.check_one_form(y)?;
        if let (Some(a), Some(b)) = (x.algebra()?, y.algebra()?) {
            if !a.same_as(&b) {
                return Err(Error::AlgebraMismatch);
            }
        }
        Ok(Expr::neg(Expr::sum(self.upper.iter().map(|(&(i, j), p)| {
            let inner = Expr::sub(
                Expr::mul(x.coefficient(&[i]), y.coefficient(&[j])),
                Expr::mul(x.coefficient(&[j]), y.coefficient(&[i])),
            );
            Expr::mul(p.clone(), inner)
        }))))
    }

    /// The randomized A-Poisson suite over `algebra`, run with trust forced.
    pub fn verify_a_poisson(&self, algebra: &Algebra, trials: usize, tol: f64, seed: u64) -> CheckReport {
        crate::oracle::suites::a_poisson(self, algebra, trials, tol, seed)
    }
}

/// Recovers a 2-form from an arbitrary bracket on coordinate differentials,
/// `ω(dx_i, dx_j) := −{x_i, x_j}`, extended bilinearly to `X`, `Y`.
pub fn omega_from_bracket(
    n: usize,
    bracket: impl Fn(&Expr, &Expr) -> Result<Expr>,
    x: &CoordForm,
    y: &CoordForm,
) -> Result<AFunction> {
    let mut terms = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (xi, yj) = (x.coefficient(&[i]), y.coefficient(&[j]));
            if xi.is_zero() || yj.is_zero() {
                continue;
            }
            let b = bracket(&Expr::var(i), &Expr::var(j))?;
            terms.push(Expr::mul(Expr::mul(xi, yj), b));
        }
    }
    Ok(Expr::neg(Expr::sum(terms)))
}

fn shared_algebra(a: &Expr, b: &Expr) -> Result<Option<Algebra>> {
    match (a.algebra()?, b.algebra()?) {
        (Some(x), Some(y)) if !x.same_as(&y) => Err(Error::AlgebraMismatch),
        (x, y) => Ok(x.or(y)),
    }
}

/// One failing trial of a check suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub identity: String,
    pub trial: usize,
    pub inputs: String,
    pub residual: f64,
}

/// Outcome of a randomized check suite. `pass` holds exactly when
/// `max_residual ≤ tol`; `identities` records the per-identity maximum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub tol: f64,
    pub max_residual: f64,
    pub pass: bool,
    pub vacuous: bool,
    pub identities: BTreeMap<String, f64>,
    pub witnesses: Vec<Witness>,
}

/// Witnesses kept per report.
pub const MAX_WITNESSES: usize = 24;

impl CheckReport {
    pub fn new(suite: &str, seed: u64, trials: usize, tol: f64) -> Self {
        Self {
            suite: suite.to_string(),
            seed,
            trials,
            tol,
            max_residual: 0.0,
            pass: true,
            vacuous: trials == 0,
            identities: BTreeMap::new(),
            witnesses: Vec::new(),
        }
    }

    /// Records one residual; NaN counts as an infinite residual.
    pub fn record(&mut self, identity: &str, trial: usize, residual: f64, inputs: impl FnOnce() -> String) {
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        let slot = self.identities.entry(identity.to_string()).or_insert(0.0);
        *slot = slot.max(residual);
        self.max_residual = self.max_residual.max(residual);
        if residual > self.tol {
            self.pass = false;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(Witness {
                    identity: identity.to_string(),
                    trial,
                    inputs: inputs(),
                    residual,
                });
            }
        }
    }

    /// Records the outcome of a fallible trial; an error is an infinite residual.
    pub fn record_result(&mut self, identity: &str, trial: usize, outcome: Result<(f64, String)>) {
        match outcome {
            Ok((r, inputs)) => self.record(identity, trial, r, || inputs),
            Err(e) => self.record(identity, trial, f64::INFINITY, || format!("error: {e}")),
        }
    }

    /// Associative merge: max of residuals, concatenation of witnesses.
    pub fn merge(&mut self, other: &CheckReport) {
        for (k, v) in &other.identities {
            let slot = self.identities.entry(k.clone()).or_insert(0.0);
            *slot = slot.max(*v);
        }
        self.max_residual = self.max_residual.max(other.max_residual);
        self.pass &= other.pass;
        let room = MAX_WITNESSES.saturating_sub(self.witnesses.len());
        self.witnesses.extend(other.witnesses.iter().take(room).cloned());
    }

    /// Maximum residual of one identity, 0 when it was never recorded.
    pub fn identity(&self, name: &str) -> f64 {
        self.identities.get(name).copied().unwrap_or(0.0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, parse_with_algebra};
    use crate::forms::delta;
    use crate::prolongation::{prolong_field, APoint};
    use crate::weil_algebra::{AlgebraPresentation, WeilAlgebra, WeilElement};

    fn p(s: &str, n: usize) -> Expr {
        parse(s, n).unwrap()
    }

    fn dual() -> Algebra {
        WeilAlgebra::build(AlgebraPresentation::dual()).unwrap()
    }

    fn trusted(mut pi: PoissonStructure) -> PoissonStructure {
        pi.force_trust();
        pi
    }

    pub(crate) fn broken_so3() -> PoissonStructure {
        PoissonStructure::new(
            3,
            vec![(0, 1, p("x3 + 0.1*x1^2", 3)), (1, 2, Expr::var(0)), (2, 0, Expr::var(1))],
        )
        .unwrap()
    }

    #[test]
    fn canonical_bracket() {
        let pi = PoissonStructure::canonical(1);
        let (q, pp) = (Expr::var(0), Expr::var(1));
        assert_eq!(pi.bracket(&q, &pp).unwrap().eval_real(&[0.3, 0.4]).unwrap(), 1.0);
        assert_eq!(pi.bracket(&pp, &q).unwrap().eval_real(&[0.3, 0.4]).unwrap(), -1.0);
        let lhs = pi.bracket(&q, &p("x2*x2", 2)).unwrap().eval_real(&[1.0, 3.0]).unwrap();
        let b = pi.bracket(&q, &pp).unwrap().eval_real(&[1.0, 3.0]).unwrap();
        assert_eq!(lhs, 6.0);
        assert_eq!(lhs, b * 3.0 + 3.0 * b);
    }

    #[test]
    fn lower_entries_are_negated() {
        let pi = PoissonStructure::so3();
        assert_eq!(pi.entry(0, 2), Expr::neg(Expr::var(1)));
        assert_eq!(pi.entry(2, 0), Expr::var(1));
        assert_eq!(pi.entry(1, 1), Expr::zero());
        assert!(PoissonStructure::new(2, vec![(0, 0, Expr::one())]).is_err());
        assert!(PoissonStructure::new(2, vec![(0, 1, Expr::one()), (1, 0, Expr::one())]).is_err());
    }

    #[test]
    fn jacobi_checks() {
        let r = PoissonStructure::canonical(1).jacobi_check(20, 1e-9, 1);
        assert!(r.pass);
        assert!(r.max_residual < 1e-12);
        assert!(PoissonStructure::so3().jacobi_check(20, 1e-9, 2).pass);
        let bad = broken_so3().jacobi_check(20, 1e-9, 3);
        assert!(!bad.pass);
        assert!(bad.max_residual > 1e-3);
        assert!(!bad.witnesses.is_empty());
    }

    #[test]
    fn trust_gate() {
        let mut pi = broken_so3();
        assert_eq!(pi.prolong_bracket(&Expr::var(0), &Expr::var(1)).unwrap_err(), Error::Untrusted);
        assert!(!pi.establish_trust(10, 1e-9, 0).pass);
        assert!(!pi.is_trusted());
        let mut good = PoissonStructure::so3();
        assert!(good.establish_trust(10, 1e-9, 0).pass);
        assert!(good.is_trusted());
    }

    #[test]
    fn hamiltonian_fields() {
        let pi = PoissonStructure::canonical(1);
        let x = pi.hamiltonian_field(&Expr::var(0)).unwrap();
        let at = |f: &VectorField, pt: [f64; 2]| -> Vec<f64> {
            f.components().iter().map(|c| c.eval_real(&pt).unwrap()).collect()
        };
        assert_eq!(at(&x, [0.2, 0.7]), vec![0.0, 1.0]);
        let h = pi.hamiltonian_field(&p("x2^2/2", 2)).unwrap();
        assert_eq!(at(&h, [0.2, 0.7]), vec![-0.7, 0.0]);
        let fg = pi.hamiltonian_field(&p("x1*x2", 2)).unwrap();
        let rhs = pi
            .hamiltonian_field(&Expr::var(1))
            .unwrap()
            .scale(&Expr::var(0))
            .unwrap()
            .add(&pi.hamiltonian_field(&Expr::var(0)).unwrap().scale(&Expr::var(1)).unwrap())
            .unwrap();
        for pt in [[0.2, 0.7], [-1.5, 2.0]] {
            assert_eq!(at(&fg, pt), at(&rhs, pt));
        }
    }

    #[test]
    fn ad_prolong_matches_hamiltonian_field() {
        let a = dual();
        let pi = trusted(PoissonStructure::canonical(1));
        let xi = APoint::from_coeffs(&a, vec![vec![1.0, 1.0], vec![2.0, 1.0]]).unwrap();
        let q = Expr::var(0);
        let v = pi.ad_prolong(&q).unwrap().apply(&Expr::var(1)).unwrap().eval_weil(&xi).unwrap();
        assert_eq!(v, WeilElement::one(&a));
        let f = p("x2^2/2", 2);
        let x1 = Expr::var(0);
        let one = pi.ad_prolong(&f).unwrap().apply(&x1).unwrap().eval_weil(&xi).unwrap();
        let two = prolong_field(&pi.hamiltonian_field(&f).unwrap())
            .apply(&x1)
            .unwrap()
            .eval_weil(&xi)
            .unwrap();
        assert!(one.approx_eq(&two, 1e-15));
        assert_eq!(one.coeffs(), &[-2.0, -1.0]);
    }

    #[test]
    fn ad_prolong_is_a_derivation() {
        let a = dual();
        let pi = trusted(PoissonStructure::so3());
        let xi = APoint::from_coeffs(&a, vec![vec![0.4, 0.2], vec![-0.3, 1.0], vec![0.8, -0.1]]).unwrap();
        let phi = parse_with_algebra("eps*x1*x2 + sin(x3)", 3, &a).unwrap();
        let (s1, s2) = (p("x1^2 + x3", 3), parse_with_algebra("(1 + eps)*x2", 3, &a).unwrap());
        let d = pi.ad_prolong(&phi).unwrap();
        let lhs = d.apply(&Expr::mul(s1.clone(), s2.clone())).unwrap().eval_weil(&xi).unwrap();
        let ev = |e: &Expr| e.eval_weil(&xi).unwrap();
        let rhs = ev(&d.apply(&s1).unwrap())
            .try_mul(&ev(&s2))
            .unwrap()
            .try_add(&ev(&s1).try_mul(&ev(&d.apply(&s2).unwrap())).unwrap())
            .unwrap();
        assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn prolonged_bracket_examples() {
        let a = dual();
        let pi = trusted(PoissonStructure::canonical(1));
        let xi = APoint::from_coeffs(&a, vec![vec![0.5, 1.0], vec![-0.5, 0.25]]).unwrap();
        let b = pi.prolong_bracket(&Expr::var(0), &Expr::var(1)).unwrap().eval_weil(&xi).unwrap();
        assert_eq!(b, WeilElement::one(&a));
        let eq = parse_with_algebra("eps*x1", 2, &a).unwrap();
        let b = pi.prolong_bracket(&eq, &Expr::var(1)).unwrap().eval_weil(&xi).unwrap();
        assert_eq!(b, WeilElement::basis(&a, 1));

        let so3 = trusted(PoissonStructure::so3());
        let xi3 = APoint::from_coeffs(&a, vec![vec![0.1, 0.3], vec![0.7, -1.0], vec![2.0, 1.0]]).unwrap();
        let b = so3.prolong_bracket(&Expr::var(0), &Expr::var(1)).unwrap().eval_weil(&xi3).unwrap();
        assert_eq!(b.coeffs(), &[2.0, 1.0]);
    }

    #[test]
    fn prolonged_bracket_mismatch() {
        let pi = trusted(PoissonStructure::canonical(1));
        let j = WeilAlgebra::build(AlgebraPresentation::jets(2)).unwrap();
        let phi = parse_with_algebra("eps*x1", 2, &dual()).unwrap();
        let psi = parse_with_algebra("x*x2", 2, &j).unwrap();
        assert_eq!(pi.prolong_bracket(&phi, &psi).unwrap_err(), Error::AlgebraMismatch);
    }

    #[test]
    fn omega_examples() {
        let a = dual();
        let pi = trusted(PoissonStructure::canonical(1));
        let xi = APoint::from_coeffs(&a, vec![vec![1.0, 1.0], vec![3.0, 1.0]]).unwrap();
        let (dq, dp) = (CoordForm::dx(2, 0), CoordForm::dx(2, 1));
        let w = pi.omega_prolonged(&dq, &dp).unwrap().eval_weil(&xi).unwrap();
        assert_eq!(w, WeilElement::constant(&a, -1.0));

        let x = CoordForm::one_form(vec![Expr::var(1), parse_with_algebra("eps", 2, &a).unwrap()]).unwrap();
        let w = pi.omega_prolonged(&x, &x).unwrap().eval_weil(&xi).unwrap();
        assert_eq!(w, WeilElement::zero(&a));

        // base route: ω(x, y) = −Σ x_i y_j {x_i, x_j}
        let x = delta(2, &Expr::var(0)).unwrap().scale(&Expr::var(1)).unwrap();
        let y = delta(2, &Expr::var(1)).unwrap();
        let base = omega_from_bracket(2, |f, g| pi.bracket(f, g), &x, &y).unwrap();
        let lhs = pi.omega_prolonged(&x, &y).unwrap().eval_weil(&xi).unwrap();
        assert_eq!(lhs.coeffs(), &[-3.0, -1.0]);
        assert_eq!(lhs, base.eval_weil(&xi).unwrap());
    }

    #[test]
    fn omega_reconstructed_from_prolonged_bracket() {
        let a = dual();
        let pi = trusted(PoissonStructure::so3());
        let xi = APoint::from_coeffs(&a, vec![vec![0.1, 0.3], vec![0.7, -1.0], vec![2.0, 1.0]]).unwrap();
        let x = CoordForm::one_form(vec![p("x2", 3), parse_with_algebra("eps + x1", 3, &a).unwrap(), p("1", 3)]).unwrap();
        let y = CoordForm::one_form(vec![p("x3^2", 3), p("0", 3), parse_with_algebra("eps*x2", 3, &a).unwrap()]).unwrap();
        let direct = pi.omega_prolonged(&x, &y).unwrap().eval_weil(&xi).unwrap();
        let rebuilt = omega_from_bracket(3, |f, g| pi.prolong_bracket(f, g), &x, &y)
            .unwrap()
            .eval_weil(&xi)
            .unwrap();
        assert!(direct.approx_eq(&rebuilt, 1e-14));
    }

    #[test]
    fn report_bookkeeping() {
        let mut r = CheckReport::new("t", 1, 3, 1e-9);
        r.record("a", 0, 1e-12, String::new);
        assert!(r.pass);
        r.record("b", 1, f64::NAN, || "x".into());
        assert!(!r.pass);
        assert_eq!(r.max_residual, f64::INFINITY);
        assert_eq!(r.witnesses.len(), 1);
        let mut s = CheckReport::new("t", 1, 3, 1e-9);
        s.merge(&r);
        assert!(!s.pass);
        assert_eq!(s.identity("a"), 1e-12);
    }
}
