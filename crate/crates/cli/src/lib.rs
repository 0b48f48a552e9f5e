//! Model files, queries and reports for the `ipalg` command line tool.
//!
//! A model is a JSON document declaring variables, named labeled pieces and a
//! list of queries. Every number is an exact rational: a JSON integer or a
//! `"p/q"` string. Gambles map cell labels such as `"a|0"` (values joined in
//! declared variable order) to rationals.

mod model;
mod query;
mod run;

pub use model::{
    AssessmentSpec, Diagnostic, Exact, GambleSpec, Model, ModelDocument, ModelError, PieceKindSpec,
    PieceSpec,
};
pub use query::Query;
pub use run::{summary, CliError, QueryReport, Report, WorkStats};

/// The example model shipped with the tool.
pub const EXAMPLE_MODEL: &str = include_str!("../models/example.json");
