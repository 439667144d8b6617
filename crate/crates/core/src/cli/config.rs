//! Project configuration: a TOML file with named algebras, expressions,
//! vector fields and bivectors. Everything is parsed and validated at load.
//!
//! ```toml
//! n = 2                      # chart dimension for expressions and fields
//!
//! [suite]
//! seed = 42
//! trials = 100
//! tol = 1e-9
//!
//! [algebras.sq]              # R[x,y]/(x^2, xy, y^2)
//! generators = ["x", "y"]
//! relations = [[2, 0], [1, 1], [0, 2]]
//!
//! [expressions]
//! f = "x1^2 * sin(x2)"
//!
//! [fields]
//! rot = ["-x2", "x1"]
//!
//! [bivectors.so3]            # upper-triangle entries, 1-based (i, j, pi_ij)
//! n = 3
//! entries = [[1, 2, "x3"], [2, 3, "x1"], [3, 1, "x2"]]
//! ```
//!
//! Built-in names are available without a config and may be shadowed by it:
//! algebras `reals`, `dual`, `jetsK` (`R[x]/(x^{K+1})`); bivectors
//! `canonicalN` (N even), `so3` and `broken3` (so(3)* with `π_12 = x3 + 0.1·x1²`,
//! which violates Jacobi).

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::poisson::PoissonStructure;
use crate::prolongation::VectorField;
use crate::weil_algebra::{Algebra, AlgebraPresentation, WeilAlgebra};

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSettings {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_seed() -> u64 {
    42
}
fn default_trials() -> usize {
    100
}
fn default_tol() -> f64 {
    1e-9
}
fn default_n() -> usize {
    1
}

impl Default for SuiteSettings {
    fn default() -> Self {
        Self {
            seed: default_seed(),
            trials: default_trials(),
            tol: default_tol(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    generators: Vec<String>,
    relations: Vec<Vec<u32>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBivector {
    n: Option<usize>,
    entries: Vec<(usize, usize, String)>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default = "default_n")]
    n: usize,
    #[serde(default)]
    suite: SuiteSettings,
    #[serde(default)]
    algebras: BTreeMap<String, RawAlgebra>,
    #[serde(default)]
    expressions: BTreeMap<String, String>,
    #[serde(default)]
    fields: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    bivectors: BTreeMap<String, RawBivector>,
}

/// A validated project configuration.
#[derive(Debug, Clone)]
pub struct ProjectConfig {
    pub n: usize,
    pub suite: SuiteSettings,
    pub algebras: BTreeMap<String, Algebra>,
    pub expressions: BTreeMap<String, Expr>,
    pub fields: BTreeMap<String, VectorField>,
    pub bivectors: BTreeMap<String, PoissonStructure>,
}

impl Default for ProjectConfig {
    fn default() -> Self {
        Self {
            n: default_n(),
            suite: SuiteSettings::default(),
            algebras: BTreeMap::new(),
            expressions: BTreeMap::new(),
            fields: BTreeMap::new(),
            bivectors: BTreeMap::new(),
        }
    }
}

fn context(kind: &str, name: &str, e: Error) -> Error {
    Error::BadPresentation(format!("{kind} `{name}`: {e}"))
}

impl ProjectConfig {
    /// Parses and validates; every failure is reported as `BadPresentation`.
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::BadPresentation(e.message().to_string()))?;
        if raw.n == 0 {
            return Err(Error::BadPresentation("chart dimension n must be positive".into()));
        }
        let mut seen = BTreeSet::new();
        let names = raw
            .algebras
            .keys()
            .chain(raw.expressions.keys())
            .chain(raw.fields.keys())
            .chain(raw.bivectors.keys());
        for name in names {
            if !seen.insert(name) {
                return Err(Error::BadPresentation(format!("name `{name}` is defined twice")));
            }
        }

        let mut algebras = BTreeMap::new();
        for (name, a) in raw.algebras {
            let alg = WeilAlgebra::build(AlgebraPresentation::new(a.generators, a.relations))
                .map_err(|e| context("algebra", &name, e))?;
            algebras.insert(name, alg);
        }
        let mut expressions = BTreeMap::new();
        for (name, text) in raw.expressions {
            let e = parse(&text, raw.n).map_err(|e| context("expression", &name, e))?;
            expressions.insert(name, e);
        }
        let mut fields = BTreeMap::new();
        for (name, comps) in raw.fields {
            let comps = comps
                .iter()
                .map(|c| parse(c, raw.n))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| context("field", &name, e))?;
            if comps.len() != raw.n {
                return Err(context(
                    "field",
                    &name,
                    Error::DimensionMismatch {
                        expected: raw.n,
                        actual: comps.len(),
                    },
                ));
            }
            fields.insert(name, VectorField::new(comps)?);
        }
        let mut bivectors = BTreeMap::new();
        for (name, b) in raw.bivectors {
            let n = b.n.unwrap_or(raw.n);
            let entries = b
                .entries
                .iter()
                .map(|(i, j, text)| {
                    if *i == 0 || *j == 0 || *i > n || *j > n {
                        return Err(Error::BadPresentation(format!("entry ({i}, {j}) outside 1..={n}")));
                    }
                    Ok((i - 1, j - 1, parse(text, n)?))
                })
                .collect::<Result<Vec<_>>>()
                .map_err(|e| context("bivector", &name, e))?;
            let pi = PoissonStructure::new(n, entries).map_err(|e| context("bivector", &name, e))?;
            bivectors.insert(name, pi);
        }
        Ok(Self {
            n: raw.n,
            suite: raw.suite,
            algebras,
            expressions,
            fields,
            bivectors,
        })
    }

    pub fn algebra(&self, name: &str) -> Option<Algebra> {
        if let Some(a) = self.algebras.get(name) {
            return Some(a.clone());
        }
        let pres = match name {
            "reals" => AlgebraPresentation::reals(),
            "dual" => AlgebraPresentation::dual(),
            _ => {
                let k: u32 = name.strip_prefix("jets")?.parse().ok()?;
                if k == 0 || k > 12 {
                    return None;
                }
                AlgebraPresentation::jets(k)
            }
        };
        WeilAlgebra::build(pres).ok()
    }

    pub fn bivector(&self, name: &str) -> Option<PoissonStructure> {
        if let Some(p) = self.bivectors.get(name) {
            return Some(p.clone());
        }
        match name {
            "so3" => Some(PoissonStructure::so3()),
            "broken3" => PoissonStructure::new(
                3,
                vec![
                    (0, 1, parse("x3 + 0.1*x1^2", 3).expect("literal")),
                    (1, 2, Expr::var(0)),
                    (2, 0, Expr::var(1)),
                ],
            )
            .ok(),
            _ => {
                let n: usize = name.strip_prefix("canonical")?.parse().ok()?;
                (n > 0 && n.is_multiple_of(2)).then(|| PoissonStructure::canonical(n / 2))
            }
        }
    }
}
