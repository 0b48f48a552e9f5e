//! Model documents: declared variables, named labeled pieces and a query list.

use std::fmt;

use indexmap::IndexMap;
use ipalg_core::{
    Cell, ConePiece, Content, EventSet, Gamble, LabeledPiece, LowerPrevision, Scope, Space,
};
use ipalg_lp::rational::{self, Rational};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::query::Query;

/// An exact rational literal: a JSON integer or a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exact(pub Rational);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational::format(&self.0))
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Exact, D::Error> {
        struct ExactVisitor;

        impl Visitor<'_> for ExactVisitor {
            type Value = Exact;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Exact, E> {
                Ok(Exact(rational::int(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Exact, E> {
                self.visit_str(&v.to_string())
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Exact, E> {
                Err(E::custom(format!("exact rational required, found {v}")))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Exact, E> {
                rational::parse(v)
                    .map(Exact)
                    .ok_or_else(|| E::custom(format!("exact rational required, found \"{v}\"")))
            }
        }

        d.deserialize_any(ExactVisitor)
    }
}

/// A gamble keyed by cell labels such as `"a|0"`.
pub type GambleSpec = IndexMap<String, Exact>;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceKindSpec {
    #[default]
    Cone,
    Prevision,
    Event,
}

impl PieceKindSpec {
    pub fn name(self) -> &'static str {
        match self {
            PieceKindSpec::Cone => "cone",
            PieceKindSpec::Prevision => "prevision",
            PieceKindSpec::Event => "event",
        }
    }
}

/// A lower bound `P(gamble) ≥ bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssessmentSpec {
    pub gamble: GambleSpec,
    pub bound: Exact,
}

/// One named piece. Without a label it lives on every declared variable; without
/// generators, assessments or cells it is vacuous.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    #[serde(default)]
    pub kind: PieceKindSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<GambleSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assessments: Vec<AssessmentSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cells: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub variables: IndexMap<String, Vec<String>>,
    #[serde(default)]
    pub pieces: IndexMap<String, PieceSpec>,
    #[serde(default)]
    pub queries: Vec<Query>,
}

impl ModelDocument {
    /// Reads the JSON text; structural problems carry a line and column.
    pub fn from_json(text: &str) -> Result<ModelDocument, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::Syntax {
            line: e.line(),
            column: e.column(),
            message: strip_position(&e.to_string()),
        })
    }

    /// Pretty-printed canonical text, ending with a newline.
    pub fn to_canonical_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("documents always serialize");
        text.push('\n');
        text
    }
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

/// A semantic problem located by its path in the document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(path: impl Into<String>, message: impl fmt::Display) -> Diagnostic {
        Diagnostic {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}", join_lines(.0))]
    Semantic(Vec<Diagnostic>),
    #[error(transparent)]
    Core(ipalg_core::Error),
}

fn join_lines(diagnostics: &[Diagnostic]) -> String {
    diagnostics
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}

/// A validated document with its pieces built.
#[derive(Debug, Clone)]
pub struct Model {
    document: ModelDocument,
    space: Space,
    pieces: IndexMap<String, LabeledPiece>,
}

impl Model {
    pub fn parse(text: &str) -> Result<Model, ModelError> {
        Model::new(ModelDocument::from_json(text)?)
    }

    /// Checks every declaration, piece and query, reporting all problems at once.
    pub fn new(document: ModelDocument) -> Result<Model, ModelError> {
        let space = Space::new(
            document
                .variables
                .iter()
                .map(|(n, d)| (n.clone(), d.clone())),
        )
        .map_err(|e| semantic_or_guard(e, "variables"))?;
        let mut problems = Vec::new();
        let mut pieces = IndexMap::new();
        for (name, spec) in &document.pieces {
            match build_piece(&space, spec, &format!("pieces.{name}")) {
                Ok(piece) => {
                    pieces.insert(name.clone(), piece);
                }
                Err(Failure::Guard(e)) => return Err(ModelError::Core(e)),
                Err(Failure::Problems(p)) => problems.extend(p),
            }
        }
        let model = Model {
            document,
            space,
            pieces,
        };
        if problems.is_empty() {
            for (i, query) in model.document.queries.iter().enumerate() {
                if let Err(e) = model.resolve(query) {
                    match e {
                        ModelError::Semantic(p) => {
                            problems.extend(p.into_iter().map(|d| Diagnostic {
                                path: format!("queries[{i}].{}", d.path),
                                message: d.message,
                            }))
                        }
                        other => return Err(other),
                    }
                }
            }
        }
        if problems.is_empty() {
            Ok(model)
        } else {
            Err(ModelError::Semantic(problems))
        }
    }

    pub fn document(&self) -> &ModelDocument {
        &self.document
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn pieces(&self) -> &IndexMap<String, LabeledPiece> {
        &self.pieces
    }

    pub fn piece(&self, name: &str, path: &str) -> Result<&LabeledPiece, ModelError> {
        self.pieces
            .get(name)
            .ok_or_else(|| single(path, format!("unknown piece `{name}`")))
    }

    pub fn scope(&self, names: &[String], path: &str) -> Result<Scope, ModelError> {
        scope_of(&self.space, names).map_err(|m| single(path, m))
    }

    /// A gamble on the label of `piece`.
    pub fn gamble(
        &self,
        piece: &LabeledPiece,
        spec: &GambleSpec,
        path: &str,
    ) -> Result<Gamble, ModelError> {
        let sub = self
            .space
            .subspace(piece.label())
            .map_err(|e| semantic_or_guard(e, path))?;
        gamble_on(&sub, spec).map_err(|m| single(path, m))
    }
}

pub(crate) fn single(path: &str, message: impl fmt::Display) -> ModelError {
    ModelError::Semantic(vec![Diagnostic::new(path, message)])
}

pub(crate) fn semantic_or_guard(e: ipalg_core::Error, path: &str) -> ModelError {
    if e.is_guard() {
        ModelError::Core(e)
    } else {
        single(path, e)
    }
}

enum Failure {
    Guard(ipalg_core::Error),
    Problems(Vec<Diagnostic>),
}

fn scope_of(space: &Space, names: &[String]) -> Result<Scope, String> {
    let mut indices = Vec::with_capacity(names.len());
    for name in names {
        let i = space
            .variable_index(name)
            .map_err(|_| format!("undeclared variable `{name}`"))?;
        if indices.contains(&i) {
            return Err(format!("variable `{name}` listed twice"));
        }
        indices.push(i);
    }
    Ok(Scope::from_indices(indices))
}

/// Values of a gamble on every cell of `sub`, which must be covered exactly once.
fn gamble_on(sub: &Space, spec: &GambleSpec) -> Result<Gamble, String> {
    let scope = sub.full_scope();
    let n = sub.cell_count(scope).map_err(|e| e.to_string())?;
    let mut values: Vec<Option<Rational>> = vec![None; n];
    for (label, value) in spec {
        let cell = sub
            .parse_cell(scope, label)
            .map_err(|e| format!("bad cell `{label}`: {e}"))?;
        let index = sub.cell_index(scope, &cell).map_err(|e| e.to_string())?;
        if values[index].replace(value.0.clone()).is_some() {
            return Err(format!("cell `{label}` given twice"));
        }
    }
    let cells = sub.enumerate_cells(scope).map_err(|e| e.to_string())?;
    let missing: Vec<String> = cells
        .iter()
        .zip(&values)
        .filter(|(_, v)| v.is_none())
        .map(|(c, _)| sub.cell_label(scope, c))
        .collect();
    if !missing.is_empty() {
        return Err(format!("missing cells: {}", missing.join(", ")));
    }
    Gamble::on(sub, values.into_iter().map(Option::unwrap).collect()).map_err(|e| e.to_string())
}

fn build_piece(space: &Space, spec: &PieceSpec, path: &str) -> Result<LabeledPiece, Failure> {
    let problem = |suffix: &str, message: String| {
        Failure::Problems(vec![Diagnostic::new(format!("{path}{suffix}"), message)])
    };
    let guard_or = |e: ipalg_core::Error, suffix: &str| {
        if e.is_guard() {
            Failure::Guard(e)
        } else {
            problem(suffix, e.to_string())
        }
    };
    let label = match &spec.label {
        Some(names) => scope_of(space, names).map_err(|m| problem(".label", m))?,
        None => space.full_scope(),
    };
    let sub = space.subspace(label).map_err(|e| guard_or(e, ".label"))?;

    let mut problems = Vec::new();
    let mut gambles = Vec::new();
    for (i, g) in spec.generators.iter().enumerate() {
        match gamble_on(&sub, g) {
            Ok(g) => gambles.push(g),
            Err(m) => problems.push(Diagnostic::new(format!("{path}.generators[{i}]"), m)),
        }
    }
    let mut bounds = Vec::new();
    for (i, a) in spec.assessments.iter().enumerate() {
        match gamble_on(&sub, &a.gamble) {
            Ok(g) => bounds.push((g, a.bound.0.clone())),
            Err(m) => problems.push(Diagnostic::new(
                format!("{path}.assessments[{i}].gamble"),
                m,
            )),
        }
    }
    let misplaced = |field: &str| {
        Diagnostic::new(
            format!("{path}.{field}"),
            format!("not allowed on {} pieces", spec.kind.name()),
        )
    };
    match spec.kind {
        PieceKindSpec::Cone => {
            if !spec.assessments.is_empty() {
                problems.push(misplaced("assessments"));
            }
            if spec.cells.is_some() {
                problems.push(misplaced("cells"));
            }
        }
        PieceKindSpec::Prevision => {
            if spec.cells.is_some() {
                problems.push(misplaced("cells"));
            }
        }
        PieceKindSpec::Event => {
            if !spec.generators.is_empty() {
                problems.push(misplaced("generators"));
            }
            if !spec.assessments.is_empty() {
                problems.push(misplaced("assessments"));
            }
        }
    }
    if !problems.is_empty() {
        return Err(Failure::Problems(problems));
    }

    let content: Content = match spec.kind {
        PieceKindSpec::Cone => ConePiece::from_assessments(&sub, &gambles)
            .map_err(|e| guard_or(e, ".generators"))?
            .into(),
        PieceKindSpec::Prevision => {
            bounds.extend(
                gambles
                    .into_iter()
                    .map(|g| (g, Rational::from_integer(0.into()))),
            );
            LowerPrevision::natural_extension_from_bounds(&sub, &bounds)
                .map_err(|e| guard_or(e, ".assessments"))?
                .into()
        }
        PieceKindSpec::Event => {
            let scope = sub.full_scope();
            let event = match &spec.cells {
                None => EventSet::full(&sub),
                Some(labels) => {
                    let mut cells: Vec<Cell> = Vec::with_capacity(labels.len());
                    for (i, l) in labels.iter().enumerate() {
                        let cell = sub.parse_cell(scope, l).map_err(|e| {
                            problem(&format!(".cells[{i}]"), format!("bad cell `{l}`: {e}"))
                        })?;
                        cells.push(cell);
                    }
                    EventSet::from_cells(&sub, &cells)
                }
            }
            .map_err(|e| guard_or(e, ".cells"))?;
            event.embed().into()
        }
    };
    LabeledPiece::new(space, label, content).map_err(|e| guard_or(e, ""))
}
