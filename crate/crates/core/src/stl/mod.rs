//! STL formulas, predicates and the mission DSL.
//!
//! Formulas are generic over their leaf type. The parser and the mission
//! builders produce [`Formula<Atom>`], whose predicates refer to agents and
//! regions by name; [`Formula::resolve`] binds those names against a list of
//! agents and a region table and yields [`Formula<Predicate>`], which is what
//! the robustness monitors evaluate.

mod formula;
mod geometry;
mod interval;
mod parser;
mod predicate;

pub use formula::Formula;
pub use geometry::{Aabb, Vec3};
pub use interval::Interval;
pub use parser::{parse_formula, ParseError, ParseErrorKind};
pub use predicate::{eval_predicate, Atom, Axis, Predicate};

/// Name under which the workspace box is referenced from formulas.
pub const WORKSPACE_REGION: &str = "ws";
