//! Typed term and formula syntax shared by every other layer.

mod ast;
mod display;
mod eval;
mod types;

pub use ast::{is_meta, Formula, Sort, Term};
pub use eval::{eval_arith, eval_term};
pub use types::{typecheck, TypeContext, TypeError, TypedFormula};
