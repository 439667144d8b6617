//! The `weilc` command line. [`run`] is the whole program minus process I/O:
//! it returns the exit code and the text destined for stdout (codes 0 and 4)
//! or stderr (everything else).
//!
//! Exit codes: 0 pass, 1 config error, 2 resolution or usage error,
//! 3 domain error, 4 check failure.

pub mod config;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;

pub use config::{ProjectConfig, SuiteSettings};

use crate::error::Error;
use crate::expr::{parse, Expr};
use crate::oracle::{run_suite_with, SuiteOptions};
use crate::poisson::{CheckReport, PoissonStructure};
use crate::prolongation::{prolong_field, APoint};
use crate::weil_algebra::{Algebra, WeilElement};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_CHECK: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "weilc", version, about = "Weil-bundle prolongations of functions, fields and Poisson structures")]
pub struct Cli {
    /// Project config (TOML); falls back to $WEILC_CONFIG.
    #[arg(long, global = true, env = "WEILC_CONFIG")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Also write a machine-readable result to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print dimension, basis, height and multiplication table of an algebra.
    AlgebraShow { name: String },
    /// Evaluate `f^A` at a point given as per-coordinate coefficient vectors.
    Eval {
        /// Expression name or inline expression.
        expr: String,
        algebra: String,
        /// JSON list of coefficient vectors, e.g. `[[3, 1]]`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// The base bracket `{f, g}`, and its prolongation at a point when given.
    Bracket {
        pi: String,
        f: String,
        g: String,
        #[arg(long, requires = "point")]
        algebra: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "algebra")]
        point: Option<String>,
        /// Skip the Jacobi trust check.
        #[arg(long)]
        force: bool,
    },
    /// Components of `θ^A` at a point, or `θ^A(f^A)` with `--apply`.
    Prolong {
        field: String,
        algebra: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        apply: Option<String>,
    },
    /// Run a registered check suite.
    Check {
        suite: String,
        /// Bivector for `poisson_full`.
        #[arg(long)]
        pi: Option<String>,
        /// Fix the algebra instead of sampling it.
        #[arg(long)]
        algebra: Option<String>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

type Outcome = std::result::Result<(i32, String), Failure>;

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DomainError(_) => EXIT_DOMAIN,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Runs one invocation. `args[0]` is the program name.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            return (code, e.to_string());
        }
    };
    match execute(&cli) {
        Ok(out) => out,
        Err(f) => (f.code, format!("error: {}\n", f.message)),
    }
}

fn load_config(cli: &Cli) -> std::result::Result<ProjectConfig, Failure> {
    let Some(path) = &cli.config else {
        return Ok(ProjectConfig::default());
    };
    let fail = |m: String| Failure {
        code: EXIT_CONFIG,
        message: format!("config {}: {m}", path.display()),
    };
    let text = std::fs::read_to_string(path).map_err(|e| fail(e.to_string()))?;
    ProjectConfig::from_toml(&text).map_err(|e| fail(e.to_string()))
}

fn settings(cli: &Cli, cfg: &ProjectConfig) -> SuiteSettings {
    SuiteSettings {
        seed: cli.seed.unwrap_or(cfg.suite.seed),
        trials: cli.trials.unwrap_or(cfg.suite.trials),
        tol: cli.tol.unwrap_or(cfg.suite.tol),
    }
}

fn write_json(cli: &Cli, text: &str) -> std::result::Result<(), Failure> {
    if let Some(path) = &cli.json {
        std::fs::write(path, text).map_err(|e| Failure {
            code: EXIT_CONFIG,
            message: format!("cannot write {}: {e}", path.display()),
        })?;
    }
    Ok(())
}

fn algebra(cfg: &ProjectConfig, name: &str) -> std::result::Result<Algebra, Failure> {
    cfg.algebra(name).ok_or_else(|| usage(format!("unknown algebra `{name}`")))
}

/// A named expression when one exists, otherwise `text` parsed over `R^n`.
fn expression(cfg: &ProjectConfig, text: &str, n: usize) -> std::result::Result<Expr, Failure> {
    if let Some(e) = cfg.expressions.get(text) {
        e.check_arity(n)?;
        return Ok(e.clone());
    }
    parse(text, n).map_err(|e| usage(format!("`{text}` is neither a defined expression nor parseable: {e}")))
}

fn point(alg: &Algebra, text: &str, n: usize) -> std::result::Result<APoint, Failure> {
    let coeffs: Vec<Vec<f64>> =
        serde_json::from_str(text).map_err(|e| usage(format!("point must be a list of coefficient vectors: {e}")))?;
    if coeffs.len() != n {
        return Err(usage(format!("point has {} coordinates, chart has {n}", coeffs.len())));
    }
    if let Some(c) = coeffs.iter().find(|c| c.len() != alg.dim()) {
        return Err(usage(format!(
            "coefficient vector of length {} for an algebra of dimension {}",
            c.len(),
            alg.dim()
        )));
    }
    Ok(APoint::from_coeffs(alg, coeffs)?)
}

fn execute(cli: &Cli) -> Outcome {
    let cfg = load_config(cli)?;
    match &cli.command {
        Command::AlgebraShow { name } => algebra_show(cli, &cfg, name),
        Command::Eval { expr, algebra: a, point: p } => {
            let alg = algebra(&cfg, a)?;
            let e = expression(&cfg, expr, cfg.n)?;
            let xi = point(&alg, p, cfg.n)?;
            let v = e.eval_weil(&xi)?;
            write_json(cli, &json!({ "algebra": a, "coeffs": v.coeffs() }).to_string())?;
            Ok((EXIT_PASS, format!("{v}\n")))
        }
        Command::Bracket {
            pi,
            f,
            g,
            algebra: a,
            point: p,
            force,
        } => bracket(cli, &cfg, pi, f, g, a.as_deref().zip(p.as_deref()), *force),
        Command::Prolong {
            field,
            algebra: a,
            point: p,
            apply,
        } => {
            let theta = cfg
                .fields
                .get(field)
                .ok_or_else(|| usage(format!("unknown field `{field}`")))?;
            let alg = algebra(&cfg, a)?;
            let xi = point(&alg, p, cfg.n)?;
            let lifted = prolong_field(theta);
            let (text, value) = match apply {
                Some(f) => {
                    let f = expression(&cfg, f, cfg.n)?;
                    let v = lifted.apply(&f)?.eval_weil(&xi)?;
                    (format!("{v}\n"), json!({ "value": v.coeffs() }))
                }
                None => {
                    let comps = lifted.eval_at(&xi)?;
                    let mut text = String::new();
                    for (i, c) in comps.iter().enumerate() {
                        let _ = writeln!(text, "d/dx{}: {c}", i + 1);
                    }
                    let coeffs: Vec<&[f64]> = comps.iter().map(WeilElement::coeffs).collect();
                    (text, json!({ "components": coeffs }))
                }
            };
            write_json(cli, &value.to_string())?;
            Ok((EXIT_PASS, text))
        }
        Command::Check { suite, pi, algebra: a } => check(cli, &cfg, suite, pi.as_deref(), a.as_deref()),
    }
}

fn algebra_show(cli: &Cli, cfg: &ProjectConfig, name: &str) -> Outcome {
    let alg = algebra(cfg, name)?;
    let mut out = format!("{alg}\n");
    let mut table = Vec::new();
    for i in 1..alg.dim() {
        for j in i..alg.dim() {
            let p = WeilElement::basis(&alg, i).try_mul(&WeilElement::basis(&alg, j))?;
            let _ = writeln!(out, "  {} * {} = {p}", alg.monomial_name(i), alg.monomial_name(j));
            table.push(json!([i, j, p.coeffs()]));
        }
    }
    let basis: Vec<String> = (0..alg.dim()).map(|i| alg.monomial_name(i)).collect();
    let doc = json!({ "name": name, "dim": alg.dim(), "height": alg.height(), "basis": basis, "table": table });
    write_json(cli, &doc.to_string())?;
    Ok((EXIT_PASS, out))
}

fn trusted(cli: &Cli, cfg: &ProjectConfig, name: &str, force: bool) -> std::result::Result<PoissonStructure, (i32, String)> {
    let mut pi = cfg
        .bivector(name)
        .ok_or_else(|| (EXIT_USAGE, format!("error: unknown bivector `{name}`\n")))?;
    if force {
        pi.force_trust();
        return Ok(pi);
    }
    let s = settings(cli, cfg);
    let report = pi.establish_trust(s.trials, s.tol, s.seed);
    if pi.is_trusted() {
        Ok(pi)
    } else {
        Err((EXIT_CHECK, format!("bivector `{name}` is not trusted\n{}", render_report(&report))))
    }
}

fn bracket(
    cli: &Cli,
    cfg: &ProjectConfig,
    pi_name: &str,
    f: &str,
    g: &str,
    at: Option<(&str, &str)>,
    force: bool,
) -> Outcome {
    let pi = match trusted(cli, cfg, pi_name, force) {
        Ok(pi) => pi,
        Err(out) => return Ok(out),
    };
    let n = pi.dim();
    let (f, g) = (expression(cfg, f, n)?, expression(cfg, g, n)?);
    let base = pi.bracket(&f, &g)?;
    let mut out = format!("{{f, g}} = {base}\n");
    let mut doc = json!({ "bracket": base.to_string() });
    if let Some((a, p)) = at {
        let alg = algebra(cfg, a)?;
        let xi = point(&alg, p, n)?;
        let v = pi.prolong_bracket(&f, &g)?.eval_weil(&xi)?;
        let _ = writeln!(out, "{{f^A, g^A}}(xi) = {v}");
        doc["value"] = json!(v.coeffs());
    }
    write_json(cli, &doc.to_string())?;
    Ok((EXIT_PASS, out))
}

fn check(cli: &Cli, cfg: &ProjectConfig, suite: &str, pi: Option<&str>, alg: Option<&str>) -> Outcome {
    let s = settings(cli, cfg);
    let mut opts = SuiteOptions::new(s.seed, s.trials, s.tol);
    if let Some(name) = alg {
        opts.algebra = Some(algebra(cfg, name)?);
    }
    if let Some(name) = pi {
        if suite != "poisson_full" {
            return Err(usage("--pi only applies to poisson_full"));
        }
        opts.poisson = Some(cfg.bivector(name).ok_or_else(|| usage(format!("unknown bivector `{name}`")))?);
    }
    let report = run_suite_with(suite, &opts)?;
    write_json(cli, &report.to_json())?;
    let code = if report.pass { EXIT_PASS } else { EXIT_CHECK };
    Ok((code, render_report(&report)))
}

/// Human-readable report: one line per identity, then the witnesses.
pub fn render_report(r: &CheckReport) -> String {
    let mut out = format!("suite={} seed={} trials={} tol={:e}\n", r.suite, r.seed, r.trials, r.tol);
    if r.vacuous {
        out.push_str("warning: zero trials; the pass is vacuous\n");
    }
    let width = r.identities.keys().map(String::len).max().unwrap_or(0);
    for (id, v) in &r.identities {
        let mark = if *v <= r.tol { "ok" } else { "FAIL" };
        let _ = writeln!(out, "  {id:<width$}  {v:.3e}  {mark}");
    }
    let _ = writeln!(
        out,
        "{} max_residual={:.3e}",
        if r.pass { "PASS" } else { "FAIL" },
        r.max_residual
    );
    for w in &r.witnesses {
        let _ = writeln!(out, "witness {} trial={} residual={:.3e}: {}", w.identity, w.trial, w.residual, w.inputs);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> (i32, String) {
        let mut full = vec!["weilc"];
        full.extend(args);
        run(full)
    }

    #[test]
    fn algebra_show_builtins() {
        let (c, out) = go(&["algebra-show", "dual"]);
        assert_eq!(c, 0);
        assert!(out.starts_with("dim=2 height=1 basis=[1, eps]"), "{out}");
        let (c, out) = go(&["algebra-show", "jets3"]);
        assert_eq!(c, 0);
        assert!(out.starts_with("dim=4 height=3"), "{out}");
        assert_eq!(go(&["algebra-show", "nosuch"]).0, 2);
    }

    #[test]
    fn eval_inline() {
        let (c, out) = go(&["eval", "x1^2", "dual", "--point", "[[3,1]]"]);
        assert_eq!((c, out.as_str()), (0, "9 + 6*eps\n"));
        assert_eq!(go(&["eval", "x1^2", "dual", "--point", "[[3,1,0]]"]).0, 2);
        assert_eq!(go(&["eval", "log(x1)", "dual", "--point", "[[0,1]]"]).0, 3);
    }

    #[test]
    fn bracket_and_check() {
        let (c, out) = go(&["bracket", "canonical2", "x1", "x2", "--algebra", "dual", "--point", "[[1,1],[2,0]]"]);
        assert_eq!(c, 0, "{out}");
        assert!(out.contains("{f^A, g^A}(xi) = 1\n"), "{out}");
        assert_eq!(go(&["bracket", "broken3", "x1", "x2"]).0, 4);
        assert_eq!(go(&["--trials", "3", "check", "hom_laws"]).0, 0);
        assert_eq!(go(&["check", "nosuch"]).0, 2);
        assert_eq!(go(&["--trials", "3", "check", "cartan", "--pi", "so3"]).0, 2);
    }
}
