//! Queries, as written in documents or assembled from command-line arguments.

use ipalg_core::{ContentKind, Gamble, LabeledPiece, Scope};
use serde::{Deserialize, Serialize};

use crate::model::{single, GambleSpec, Model, ModelError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Query {
    CheckCoherence {
        piece: String,
    },
    Prevision {
        piece: String,
        gamble: GambleSpec,
    },
    Upper {
        piece: String,
        gamble: GambleSpec,
    },
    Contains {
        piece: String,
        gamble: GambleSpec,
    },
    Combine {
        pieces: Vec<String>,
    },
    Marginalize {
        piece: String,
        scope: Vec<String>,
    },
    CredalVertices {
        piece: String,
    },
    Compatible {
        pieces: Vec<String>,
    },
    SolveMarginal {
        pieces: Vec<String>,
    },
    Rip {
        scopes: Vec<Vec<String>>,
    },
    /// The lower prevision of a cone piece, optionally evaluated at a gamble.
    Sigma {
        piece: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gamble: Option<GambleSpec>,
    },
}

impl Query {
    pub fn command(&self) -> &'static str {
        match self {
            Query::CheckCoherence { .. } => "check-coherence",
            Query::Prevision { .. } => "prevision",
            Query::Upper { .. } => "upper",
            Query::Contains { .. } => "contains",
            Query::Combine { .. } => "combine",
            Query::Marginalize { .. } => "marginalize",
            Query::CredalVertices { .. } => "credal-vertices",
            Query::Compatible { .. } => "compatible",
            Query::SolveMarginal { .. } => "solve-marginal",
            Query::Rip { .. } => "rip",
            Query::Sigma { .. } => "sigma",
        }
    }
}

/// A query with its names looked up.
pub(crate) enum Resolved<'m> {
    CheckCoherence(&'m LabeledPiece),
    Prevision(&'m LabeledPiece, Gamble),
    Upper(&'m LabeledPiece, Gamble),
    Contains(&'m LabeledPiece, Gamble),
    Combine(Vec<&'m LabeledPiece>),
    Marginalize(&'m LabeledPiece, Scope),
    CredalVertices(&'m LabeledPiece),
    Compatible(Vec<(&'m str, &'m LabeledPiece)>),
    SolveMarginal(Vec<(&'m str, &'m LabeledPiece)>),
    Rip(Vec<Scope>),
    Sigma(&'m LabeledPiece, Option<Gamble>),
}

impl Model {
    pub(crate) fn resolve(&self, query: &Query) -> Result<Resolved<'_>, ModelError> {
        let of_kind = |name: &str, kind: ContentKind| -> Result<&LabeledPiece, ModelError> {
            let piece = self.piece(name, "piece")?;
            if piece.kind() != kind {
                let hint = if kind == ContentKind::Prevision {
                    "; apply `sigma` first"
                } else {
                    ""
                };
                return Err(single(
                    "piece",
                    format!(
                        "`{name}` is a {} piece, expected {}{hint}",
                        piece.kind().name(),
                        kind.name()
                    ),
                ));
            }
            Ok(piece)
        };
        Ok(match query {
            Query::CheckCoherence { piece } => {
                Resolved::CheckCoherence(self.piece(piece, "piece")?)
            }
            Query::Prevision { piece, gamble } => {
                let p = of_kind(piece, ContentKind::Prevision)?;
                Resolved::Prevision(p, self.gamble(p, gamble, "gamble")?)
            }
            Query::Upper { piece, gamble } => {
                let p = of_kind(piece, ContentKind::Prevision)?;
                Resolved::Upper(p, self.gamble(p, gamble, "gamble")?)
            }
            Query::Contains { piece, gamble } => {
                let p = self.piece(piece, "piece")?;
                Resolved::Contains(p, self.gamble(p, gamble, "gamble")?)
            }
            Query::Combine { pieces } => {
                Resolved::Combine(self.named(pieces)?.into_iter().map(|(_, p)| p).collect())
            }
            Query::Marginalize { piece, scope } => {
                let p = self.piece(piece, "piece")?;
                let s = self.scope(scope, "scope")?;
                if !s.is_subset(p.label()) {
                    return Err(single(
                        "scope",
                        format!(
                            "{} is not part of the label of `{piece}`",
                            self.space().describe(s)
                        ),
                    ));
                }
                Resolved::Marginalize(p, s)
            }
            Query::CredalVertices { piece } => {
                Resolved::CredalVertices(of_kind(piece, ContentKind::Prevision)?)
            }
            Query::Compatible { pieces } => Resolved::Compatible(self.named(pieces)?),
            Query::SolveMarginal { pieces } => Resolved::SolveMarginal(self.named(pieces)?),
            Query::Rip { scopes } => {
                let mut out = Vec::with_capacity(scopes.len());
                for (i, names) in scopes.iter().enumerate() {
                    out.push(self.scope(names, &format!("scopes[{i}]"))?);
                }
                Resolved::Rip(out)
            }
            Query::Sigma { piece, gamble } => {
                let p = of_kind(piece, ContentKind::Cone)?;
                let g = match gamble {
                    Some(g) => Some(self.gamble(p, g, "gamble")?),
                    None => None,
                };
                Resolved::Sigma(p, g)
            }
        })
    }

    /// Pieces looked up by name, all of one kind.
    fn named(&self, names: &[String]) -> Result<Vec<(&str, &LabeledPiece)>, ModelError> {
        if names.is_empty() {
            return Err(single("pieces", "at least one piece is required"));
        }
        let mut out: Vec<(&str, &LabeledPiece)> = Vec::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            let path = format!("pieces[{i}]");
            let (key, piece) = self
                .pieces()
                .get_key_value(name)
                .ok_or_else(|| single(&path, format!("unknown piece `{name}`")))?;
            if out.first().is_some_and(|(_, p)| p.kind() != piece.kind()) {
                return Err(single(
                    &path,
                    "pieces of different kinds; apply `sigma` first",
                ));
            }
            out.push((key.as_str(), piece));
        }
        Ok(out)
    }
}
