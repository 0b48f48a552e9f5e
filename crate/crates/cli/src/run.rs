//! Query execution and deterministic reports.

use ipalg_core::{
    check_compatibility, rip_theorem_check, satisfies_rip, Content, KnowledgeBase, LabeledPiece,
    LowerPrevision, Precondition, Space, Verdict,
};
use ipalg_lp::rational::{self, Rational};
use ipalg_lp::{reset_stats, stats};
use serde::Serialize;
use serde_json::{json, Map, Value as Json};
use thiserror::Error;

use crate::model::{Model, ModelError};
use crate::query::{Query, Resolved};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Core(#[from] ipalg_core::Error),
}

impl CliError {
    /// 2 for unreadable or invalid input, 3 for a desk-scale guard, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 2,
            CliError::Model(ModelError::Syntax { .. } | ModelError::Semantic(_)) => 2,
            CliError::Model(ModelError::Core(e)) | CliError::Core(e) => {
                if e.is_guard() {
                    3
                } else {
                    1
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WorkStats {
    pub lp_solves: u64,
    pub lp_pivots: u64,
    pub rays_enumerated: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueryReport {
    pub kind: &'static str,
    pub inputs: Json,
    pub result: Json,
    pub stats: WorkStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub queries: Vec<QueryReport>,
}

impl Report {
    /// Pretty-printed JSON ending with a newline.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports always serialize");
        text.push('\n');
        text
    }
}

impl Model {
    pub fn run(&self, query: &Query) -> Result<QueryReport, CliError> {
        let resolved = self.resolve(query)?;
        reset_stats();
        let result = execute(resolved)?;
        let s = stats();
        let mut inputs = serde_json::to_value(query).expect("queries always serialize");
        if let Json::Object(map) = &mut inputs {
            map.shift_remove("command");
        }
        Ok(QueryReport {
            kind: query.command(),
            inputs,
            result,
            stats: WorkStats {
                lp_solves: s.lp_solves,
                lp_pivots: s.lp_pivots,
                rays_enumerated: s.rays_enumerated,
            },
        })
    }

    /// Runs the queries listed in the document, in order.
    pub fn run_all(&self) -> Result<Report, CliError> {
        let queries = self
            .document()
            .queries
            .iter()
            .map(|q| self.run(q))
            .collect::<Result<_, _>>()?;
        Ok(Report { queries })
    }
}

fn execute(query: Resolved<'_>) -> Result<Json, ipalg_core::Error> {
    Ok(match query {
        Resolved::CheckCoherence(p) => {
            let verdict = match p.content() {
                Content::Cone(c) if c.is_contradiction() => "incoherent (0 in natural extension)",
                Content::Prevision(q) if q.is_null() => "incoherent (sure loss)",
                _ => "coherent",
            };
            json!(verdict)
        }
        Resolved::Prevision(p, f) => json!(prevision(p).lower(&f)?.to_string()),
        Resolved::Upper(p, f) => match prevision(p).upper(&f)? {
            Some(v) => json!(rational::format(&v)),
            None => json!("-inf"),
        },
        Resolved::Contains(p, f) => match p.content() {
            Content::Cone(c) => json!(c.contains(&f)?),
            Content::Prevision(q) => json!({
                "strict": q.tau_strict_contains(&f)?,
                "almost": q.tau_bar_contains(&f)?,
            }),
        },
        Resolved::Combine(pieces) => {
            let mut total = pieces[0].clone();
            for p in &pieces[1..] {
                total = total.combine(p)?;
            }
            summary(&total)?
        }
        Resolved::Marginalize(p, s) => summary(&p.project(s)?)?,
        Resolved::CredalVertices(p) => {
            let sub = p.space().subspace(p.label())?;
            let vertices = prevision(p).credal_vertices()?.vertices;
            Json::Array(
                vertices
                    .iter()
                    .map(|v| cell_map(&sub, v))
                    .collect::<Result<_, _>>()?,
            )
        }
        Resolved::Compatible(named) => {
            let kb = knowledge_base(&named)?;
            verdict(&named, &check_compatibility(&kb)?)?
        }
        Resolved::SolveMarginal(named) => solve_marginal(&named)?,
        Resolved::Rip(scopes) => match satisfies_rip(&scopes) {
            Ok(cert) => json!({"verdict": "RIP: yes", "parents": cert.parents()}),
            Err(i) => json!({"verdict": "RIP: no", "violation": i}),
        },
        Resolved::Sigma(p, f) => {
            let cone = p.content().as_cone().expect("resolved as a cone piece");
            let sigma = LowerPrevision::sigma(cone)?;
            let labeled = LabeledPiece::new(p.space(), p.label(), sigma.clone().into())?;
            let mut out = summary(&labeled)?;
            if let (Some(f), Json::Object(map)) = (f, &mut out) {
                map.insert("lower".into(), json!(sigma.lower(&f)?.to_string()));
            }
            out
        }
    })
}

fn prevision(p: &LabeledPiece) -> &LowerPrevision {
    p.content()
        .as_prevision()
        .expect("resolved as a prevision piece")
}

fn knowledge_base(named: &[(&str, &LabeledPiece)]) -> Result<KnowledgeBase, ipalg_core::Error> {
    KnowledgeBase::new(named.iter().map(|(_, p)| (*p).clone()).collect())
}

fn verdict(named: &[(&str, &LabeledPiece)], v: &Verdict) -> Result<Json, ipalg_core::Error> {
    Ok(match v {
        Verdict::Compatible(total) => json!({"verdict": "compatible", "solution": summary(total)?}),
        Verdict::Inconsistent => json!({"verdict": "inconsistent"}),
        Verdict::Incompatible(failing) => json!({
            "verdict": "incompatible",
            "failing": failing.iter().map(|&i| named[i].0).collect::<Vec<_>>(),
        }),
    })
}

/// Local computation along a join tree when the labels allow one, the full
/// combination otherwise.
fn solve_marginal(named: &[(&str, &LabeledPiece)]) -> Result<Json, ipalg_core::Error> {
    let kb = knowledge_base(named)?;
    let cert = match satisfies_rip(&kb.scopes()) {
        Ok(cert) => cert,
        Err(_) => {
            let mut out = verdict(named, &check_compatibility(&kb)?)?;
            out["method"] = json!("direct");
            return Ok(out);
        }
    };
    let mut out = match rip_theorem_check(&kb, &cert) {
        Ok(v) => verdict(named, &v)?,
        Err(ipalg_core::Error::Precondition(Precondition::NotPairwiseCompatible(i, j))) => json!({
            "verdict": "incompatible",
            "pair": [named[i].0, named[j].0],
        }),
        Err(ipalg_core::Error::Precondition(Precondition::Inconsistent)) => {
            json!({"verdict": "inconsistent"})
        }
        Err(e) => return Err(e),
    };
    out["method"] = json!("running intersection");
    out["parents"] = json!(cert.parents());
    Ok(out)
}

/// Values keyed by cell labels, in cell order.
fn cell_map(sub: &Space, values: &[Rational]) -> Result<Json, ipalg_core::Error> {
    let scope = sub.full_scope();
    let cells = sub.enumerate_cells(scope)?;
    let map: Map<String, Json> = cells
        .iter()
        .zip(values)
        .map(|(c, v)| (sub.cell_label(scope, c), json!(rational::format(v))))
        .collect();
    Ok(Json::Object(map))
}

/// A deterministic description of a labeled piece.
pub fn summary(piece: &LabeledPiece) -> Result<Json, ipalg_core::Error> {
    let space = piece.space();
    let sub = space.subspace(piece.label())?;
    let scope = sub.full_scope();
    let mut out = Map::new();
    out.insert("kind".into(), json!(piece.kind().name()));
    out.insert("label".into(), json!(space.scope_names(piece.label())));
    let maps = |vectors: Vec<Vec<Rational>>| -> Result<Json, ipalg_core::Error> {
        Ok(Json::Array(
            vectors
                .iter()
                .map(|v| cell_map(&sub, v))
                .collect::<Result<_, _>>()?,
        ))
    };
    match piece.content() {
        Content::Cone(c) => {
            out.insert("form".into(), json!(c.kind().name()));
            if let Some(event) = c.event() {
                let cells = sub.enumerate_cells(scope)?;
                let labels: Vec<String> = event
                    .cells()
                    .iter()
                    .map(|&i| sub.cell_label(scope, &cells[i]))
                    .collect();
                out.insert("cells".into(), json!(labels));
            }
            let strict = c.strict_masses();
            if !strict.is_empty() {
                out.insert("strict".into(), maps(strict)?);
            }
            let gens: Vec<Vec<Rational>> = c
                .generators()
                .into_iter()
                .map(|g| g.into_values())
                .collect();
            if !gens.is_empty() {
                out.insert("generators".into(), maps(gens)?);
            }
        }
        Content::Prevision(p) => {
            let form = match p.assessment() {
                None => "null",
                Some(a) if a.is_empty() => "vacuous",
                Some(_) if p.is_linear()? => "linear",
                Some(_) => "generated",
            };
            out.insert("form".into(), json!(form));
            if let Some(mass) = p.linear_mass()? {
                out.insert("mass".into(), cell_map(&sub, &mass)?);
            } else if let Some(a) = p.assessment().filter(|a| !a.is_empty()) {
                out.insert(
                    "generators".into(),
                    maps(a.into_iter().map(|g| g.into_values()).collect())?,
                );
            }
        }
    }
    Ok(Json::Object(out))
}
