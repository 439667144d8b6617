//! Independent numeric oracles: finite-difference Taylor coefficients, a
//! jet-expansion evaluator, classical coordinate formulas for base forms, and
//! the seeded property harness behind [`run_suite`].

pub mod gen;
pub mod jet;
pub mod rng;
pub mod suites;

use crate::error::{Error, Result};
use crate::poisson::{CheckReport, PoissonStructure};
use crate::weil_algebra::Algebra;

pub use jet::jet_prolong;
pub use rng::Sampler;

/// Registered suite identifiers.
pub const SUITES: [&str; 5] = ["hom_laws", "field_prolong", "bracket_prolong", "cartan", "poisson_full"];

/// Finite-difference settings for [`taylor_coeffs`].
///
/// The stencil is `r + k·step·max(1, |r|)` for `k = −half_width..=half_width`;
/// the derivative of order `j` is then accurate to order `2·half_width − j`
/// (rounded down to even), with rounding error of order `ε / step^j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorOracleConfig {
    pub order: usize,
    pub step: f64,
    pub half_width: usize,
}

/// Largest supported order; beyond it rounding noise dominates.
pub const MAX_ORACLE_ORDER: usize = 6;

impl TaylorOracleConfig {
    /// Defaults tuned so that every coefficient up to order 4 of exp, sin and
    /// log on their sampled ranges carries a relative error below 1e−8.
    pub fn new(order: usize) -> Self {
        Self {
            order,
            step: 0.02,
            half_width: order + 3,
        }
    }
}

/// Fornberg's weights: `w[m][k]` is the weight of `xs[k]` in the `m`-th
/// derivative at `z`.
fn fornberg_weights(z: f64, xs: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let np = xs.len();
    let mut c = vec![vec![0.0; np]; max_order + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    for i in 1..np {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] *= c4 / c3;
        }
        c1 = c2;
    }
    c
}

/// `[f(r), f'(r), f''(r)/2!, …, f^{(h)}(r)/h!]` by central differences.
pub fn taylor_coeffs(f: &dyn Fn(f64) -> Result<f64>, r: f64, h: usize) -> Result<Vec<f64>> {
    taylor_coeffs_with(f, r, &TaylorOracleConfig::new(h))
}

pub fn taylor_coeffs_with(f: &dyn Fn(f64) -> Result<f64>, r: f64, cfg: &TaylorOracleConfig) -> Result<Vec<f64>> {
    if cfg.order > MAX_ORACLE_ORDER {
        return Err(Error::DomainError(format!(
            "oracle order {} exceeds {MAX_ORACLE_ORDER}",
            cfg.order
        )));
    }
    let m = cfg.half_width.max(cfg.order / 2 + 1);
    let step = cfg.step * r.abs().max(1.0);
    let offsets: Vec<f64> = (-(m as i64)..=m as i64).map(|k| k as f64).collect();
    let values = offsets.iter().map(|k| f(r + k * step)).collect::<Result<Vec<_>>>()?;
    let w = fornberg_weights(0.0, &offsets, cfg.order);
    let mut fact = 1.0;
    Ok((0..=cfg.order)
        .map(|j| {
            if j > 0 {
                fact *= j as f64;
            }
            if j == 0 {
                return values[m];
            }
            let d: f64 = w[j].iter().zip(&values).map(|(a, b)| a * b).sum();
            d / step.powi(j as i32) / fact
        })
        .collect())
}

/// Overrides for [`run_suite_with`]; `None` leaves the suite's own sampling.
#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub seed: u64,
    pub trials: usize,
    pub tol: f64,
    pub poisson: Option<PoissonStructure>,
    pub algebra: Option<Algebra>,
}

impl SuiteOptions {
    pub fn new(seed: u64, trials: usize, tol: f64) -> Self {
        Self {
            seed,
            trials,
            tol,
            poisson: None,
            algebra: None,
        }
    }
}

pub fn run_suite(suite_id: &str, seed: u64, trials: usize, tol: f64) -> Result<CheckReport> {
    run_suite_with(suite_id, &SuiteOptions::new(seed, trials, tol))
}

pub fn run_suite_with(suite_id: &str, opts: &SuiteOptions) -> Result<CheckReport> {
    let report = match suite_id {
        "hom_laws" => suites::hom_laws(opts),
        "field_prolong" => suites::field_prolong(opts),
        "bracket_prolong" => suites::bracket_prolong(opts),
        "cartan" => suites::cartan(opts),
        "poisson_full" => suites::poisson_full(opts),
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weil_algebra::PrimitiveFn;

    #[test]
    fn exp_at_zero() {
        let c = taylor_coeffs(&|x| Ok(x.exp()), 0.0, 2).unwrap();
        for (a, b) in c.iter().zip([1.0, 1.0, 0.5]) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn cubic_at_one() {
        let c = taylor_coeffs(&|x| Ok(x * x * x), 1.0, 3).unwrap();
        for (a, b) in c.iter().zip([1.0, 3.0, 3.0, 1.0]) {
            assert!((a - b).abs() < 1e-6, "{c:?}");
        }
    }

    #[test]
    fn log_at_zero_is_a_domain_error() {
        let r = taylor_coeffs(&|x| PrimitiveFn::Log.eval(x), 0.0, 2);
        assert!(matches!(r, Err(Error::DomainError(_))));
    }

    #[test]
    fn polynomials_are_reproduced() {
        let coeffs = [0.5, -1.25, 2.0, 0.75, -0.5, 0.25];
        for h in 0..=5 {
            let f = |x: f64| Ok(coeffs[..=h].iter().rev().fold(0.0, |acc, c| acc * x + c));
            let c = taylor_coeffs(&f, 0.0, h).unwrap();
            for (a, b) in c.iter().zip(&coeffs[..=h]) {
                assert!((a - b).abs() < 1e-8, "h={h}: {c:?}");
            }
        }
    }

    #[test]
    fn order_limit() {
        assert!(taylor_coeffs(&|x| Ok(x), 0.0, 7).is_err());
    }

    #[test]
    fn unknown_suite() {
        assert_eq!(run_suite("nosuch", 0, 1, 1e-9).unwrap_err(), Error::UnknownSuite("nosuch".into()));
    }

    #[test]
    fn zero_trials_is_vacuous() {
        let r = run_suite("hom_laws", 0, 0, 1e-9).unwrap();
        assert!(r.pass && r.vacuous);
        assert_eq!(r.max_residual, 0.0);
    }
}
