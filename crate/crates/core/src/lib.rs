//! Weil algebras and the prolongation of smooth functions, vector fields,
//! Kähler forms and Poisson structures from `R^n` to the Weil bundle `(R^n)^A`.

pub mod cli;
pub mod error;
pub mod expr;
pub mod forms;
pub mod oracle;
pub mod poisson;
pub mod prolongation;
pub mod weil_algebra;

pub use error::{Error, Result};
pub use expr::{parse, parse_with_algebra, AFunction, Expr};
pub use prolongation::{APoint, AVectorField, VectorField};
pub use weil_algebra::{
    Algebra, AlgebraMorphism, AlgebraPresentation, LinearEndomorphism, PrimitiveFn, WeilAlgebra,
    WeilElement,
};
pub use oracle::{run_suite, run_suite_with, SuiteOptions};
pub use poisson::{CheckReport, PoissonStructure};
