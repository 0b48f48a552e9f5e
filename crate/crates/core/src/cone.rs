//! Coherent sets of desirable gambles and the contradiction, with combination,
//! extraction, meet and the information order.
//!
//! Every coherent piece is stored in one of four canonical forms. The general
//! form `Mixed` pairs an open cone `T = {f : q·f > 0 for all q ∈ Q}`, given by the
//! mass functions `Q`, with a closed cone `K = cone(G ∪ units)`; the piece is
//! `T ∪ (K \ {0})`. Canonically `cone(Q) ⊆ K*` and every generator of `K` lies on
//! the boundary of `T`. `Generated(G)` is the case `T = int K`, `Event(A)` the case
//! `Q = {e_ω : ω ∈ A}` with no generators.

use ipalg_lp::rational::dot;
use ipalg_lp::{extreme_rays, Rational};
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::events::EventSet;
use crate::geometry::{
    self, all_positive_against, canonical_generators, closed_contains, dual_rays, expand_masses,
    extreme_subset, generators_of, hrep_of_cone, in_cone, marginal_closed_cone, normalized, unit,
    Vector,
};
use crate::prevision::LowerPrevision;
use crate::space::{Gamble, Projection, Scope, Space};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PieceKind {
    Vacuous,
    Generated,
    Event,
    Mixed,
    Contradiction,
}

impl PieceKind {
    pub fn name(self) -> &'static str {
        match self {
            PieceKind::Vacuous => "vacuous",
            PieceKind::Generated => "generated",
            PieceKind::Event => "event",
            PieceKind::Mixed => "mixed",
            PieceKind::Contradiction => "contradiction",
        }
    }
}

#[derive(Debug, Clone)]
enum Form {
    Vacuous,
    Generated(Vec<Vector>),
    Event(EventSet),
    Mixed {
        strict: Vec<Vector>,
        generators: Vec<Vector>,
    },
    Contradiction,
}

/// An element of the domain-free algebra: a coherent set of desirable gambles on
/// the full scope of a space, or the contradiction `L(Ω)`.
///
/// Equality is semantic; use [`ConePiece::equals`].
#[derive(Debug, Clone)]
pub struct ConePiece {
    space: Space,
    form: Form,
}

/// Strict part (if any) and closed generators of a coherent piece.
struct Parts {
    strict: Option<Vec<Vector>>,
    gens: Vec<Vector>,
}

/// True when the gambles avoid partial loss: no nonnegative, nonzero combination
/// of them is pointwise nonpositive.
pub fn avoids_partial_loss(gambles: &[Gamble]) -> Result<bool> {
    let vectors: Vec<Vector> = gambles.iter().map(|g| g.values().to_vec()).collect();
    if let Some(first) = vectors.first() {
        if vectors.iter().any(|v| v.len() != first.len()) {
            return Err(Error::WrongLength {
                expected: first.len(),
                found: vectors
                    .iter()
                    .map(Vec::len)
                    .find(|&l| l != first.len())
                    .unwrap(),
            });
        }
    }
    geometry::avoids_partial_loss(&vectors)
}

impl ConePiece {
    pub fn vacuous(space: &Space) -> ConePiece {
        ConePiece {
            space: space.clone(),
            form: Form::Vacuous,
        }
    }

    pub fn contradiction(space: &Space) -> ConePiece {
        ConePiece {
            space: space.clone(),
            form: Form::Contradiction,
        }
    }

    /// The natural extension `posi(G ∪ L+)`, or the contradiction if it contains 0.
    pub fn from_assessments(space: &Space, gambles: &[Gamble]) -> Result<ConePiece> {
        let vectors = full_vectors(space, gambles)?;
        ConePiece::from_parts(space, None, vectors)
    }

    /// `D_A · E(G)`.
    pub fn mixed(event: &EventSet, gambles: &[Gamble]) -> Result<ConePiece> {
        event
            .embed()
            .combine(&ConePiece::from_assessments(event.space(), gambles)?)
    }

    pub(crate) fn from_event(event: EventSet) -> ConePiece {
        let space = event.space().clone();
        let form = if event.is_empty() {
            Form::Contradiction
        } else if event.is_full() {
            Form::Vacuous
        } else {
            Form::Event(event)
        };
        ConePiece { space, form }
    }

    fn generated(space: &Space, gens: Vec<Vector>) -> ConePiece {
        let form = if gens.is_empty() {
            Form::Vacuous
        } else {
            Form::Generated(gens)
        };
        ConePiece {
            space: space.clone(),
            form,
        }
    }

    /// Canonicalizes `T(strict) ∪ cone(gens ∪ units) \ {0}` under the closure operator.
    fn from_parts(
        space: &Space,
        strict: Option<Vec<Vector>>,
        gens: Vec<Vector>,
    ) -> Result<ConePiece> {
        let n = space.cell_count(space.full_scope())?;
        if !geometry::avoids_partial_loss(&gens)? {
            return Ok(ConePiece::contradiction(space));
        }
        let gens = canonical_generators(gens)?;
        let Some(strict) = strict else {
            return Ok(ConePiece::generated(space, gens));
        };
        let strict = normalized(strict);
        let inside = strict
            .iter()
            .all(|q| gens.iter().all(|g| !dot(q, g).is_negative()));
        let q = if inside {
            extreme_subset(strict)
        } else {
            let mut h = hrep_of_cone(&strict, n)?;
            h.inequalities.extend((0..n).map(|i| unit(n, i)));
            h.inequalities.extend(gens.iter().cloned());
            normalized(extreme_rays(&h)?.rays)
        };
        if q.is_empty() {
            return Ok(ConePiece::contradiction(space));
        }
        let gens: Vec<Vector> = gens
            .into_iter()
            .filter(|g| q.iter().any(|p| dot(p, g).is_zero()))
            .collect();
        if gens.is_empty()
            && q.iter()
                .all(|p| p.iter().filter(|x| !x.is_zero()).count() == 1)
        {
            let cells = q
                .iter()
                .map(|p| p.iter().position(|x| !x.is_zero()).unwrap());
            return Ok(EventSet::new(space, cells)?.embed());
        }
        let closed_dual = dual_rays(&gens, n)?;
        if closed_dual.iter().all(|e| in_cone(&q, e)) {
            return Ok(ConePiece::generated(space, gens));
        }
        Ok(ConePiece {
            space: space.clone(),
            form: Form::Mixed {
                strict: q,
                generators: gens,
            },
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn kind(&self) -> PieceKind {
        match self.form {
            Form::Vacuous => PieceKind::Vacuous,
            Form::Generated(_) => PieceKind::Generated,
            Form::Event(_) => PieceKind::Event,
            Form::Mixed { .. } => PieceKind::Mixed,
            Form::Contradiction => PieceKind::Contradiction,
        }
    }

    pub fn is_contradiction(&self) -> bool {
        matches!(self.form, Form::Contradiction)
    }

    pub fn is_vacuous(&self) -> bool {
        matches!(self.form, Form::Vacuous)
    }

    /// Canonical generators of the closed part (empty for vacuous, event and contradiction).
    pub fn generators(&self) -> Vec<Gamble> {
        let gens = match &self.form {
            Form::Generated(g) | Form::Mixed { generators: g, .. } => g.clone(),
            _ => Vec::new(),
        };
        gens.into_iter()
            .map(|g| Gamble::on(&self.space, g).expect("generator length matches space"))
            .collect()
    }

    /// The event of an `Event` piece.
    pub fn event(&self) -> Option<&EventSet> {
        match &self.form {
            Form::Event(a) => Some(a),
            _ => None,
        }
    }

    /// Mass functions describing the strict part of a `Mixed` piece.
    pub fn strict_masses(&self) -> Vec<Vec<Rational>> {
        match &self.form {
            Form::Mixed { strict, .. } => strict.clone(),
            _ => Vec::new(),
        }
    }

    fn parts(&self) -> Parts {
        let n = self.num_cells();
        match &self.form {
            Form::Vacuous | Form::Contradiction => Parts {
                strict: None,
                gens: Vec::new(),
            },
            Form::Generated(g) => Parts {
                strict: None,
                gens: g.clone(),
            },
            Form::Event(a) => Parts {
                strict: Some(a.cells().into_iter().map(|c| unit(n, c)).collect()),
                gens: Vec::new(),
            },
            Form::Mixed { strict, generators } => Parts {
                strict: Some(strict.clone()),
                gens: generators.clone(),
            },
        }
    }

    fn num_cells(&self) -> usize {
        self.space
            .cell_count(self.space.full_scope())
            .expect("space was validated at construction")
    }

    /// Normalized extreme rays of the closure of the dual of the strict part:
    /// the vertices of the credal set of this piece.
    pub(crate) fn strict_dual(&self) -> Result<Vec<Vector>> {
        let n = self.num_cells();
        Ok(match &self.form {
            Form::Vacuous => (0..n).map(|i| unit(n, i)).collect(),
            Form::Generated(g) => dual_rays(g, n)?,
            Form::Event(a) => a.cells().into_iter().map(|c| unit(n, c)).collect(),
            Form::Mixed { strict, .. } => strict.clone(),
            Form::Contradiction => Vec::new(),
        })
    }

    fn check_gamble(&self, f: &Gamble) -> Result<()> {
        if f.space() != &self.space || f.scope() != self.space.full_scope() {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    fn check_space(&self, other: &ConePiece) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Exact membership of a full-scope gamble.
    pub fn contains(&self, f: &Gamble) -> Result<bool> {
        self.check_gamble(f)?;
        if self.is_contradiction() {
            return Ok(true);
        }
        if f.is_zero() {
            return Ok(false);
        }
        if f.is_positive() {
            return Ok(true);
        }
        match &self.form {
            Form::Vacuous | Form::Contradiction => Ok(false),
            Form::Event(a) => Ok(a.cells().iter().all(|&c| f.values()[c].is_positive())),
            Form::Generated(g) => closed_contains(g, f.values()),
            Form::Mixed { strict, generators } => Ok(all_positive_against(strict, f.values())
                || closed_contains(generators, f.values())?),
        }
    }

    /// `C(D1 ∪ D2)`.
    pub fn combine(&self, other: &ConePiece) -> Result<ConePiece> {
        self.check_space(other)?;
        match (&self.form, &other.form) {
            (Form::Contradiction, _) | (_, Form::Contradiction) => {
                return Ok(ConePiece::contradiction(&self.space))
            }
            (Form::Vacuous, _) => return Ok(other.clone()),
            (_, Form::Vacuous) => return Ok(self.clone()),
            (Form::Event(a), Form::Event(b)) => return Ok(a.intersection(b)?.embed()),
            _ => {}
        }
        let (a, b) = (self.parts(), other.parts());
        let mut gens = a.gens;
        gens.extend(b.gens);
        let strict = match (a.strict, b.strict) {
            (None, None) => None,
            (Some(q), None) | (None, Some(q)) => Some(q),
            (Some(q1), Some(q2)) => {
                let n = self.num_cells();
                let mut h = hrep_of_cone(&q1, n)?;
                let h2 = hrep_of_cone(&q2, n)?;
                h.inequalities.extend(h2.inequalities);
                h.equalities.extend(h2.equalities);
                h.inequalities.extend((0..n).map(|i| unit(n, i)));
                let q = normalized(extreme_rays(&h)?.rays);
                if q.is_empty() {
                    return Ok(ConePiece::contradiction(&self.space));
                }
                Some(q)
            }
        };
        ConePiece::from_parts(&self.space, strict, gens)
    }

    /// `ε_S(D) = C(D ∩ L_S)`.
    pub fn extract(&self, s: Scope) -> Result<ConePiece> {
        let full = self.space.full_scope();
        self.space.check_subset(s, full)?;
        if s == full {
            return Ok(self.clone());
        }
        let proj = self.space.projection(full, s)?;
        let sub = self.space.subspace(s)?;
        self.marginalize(&proj, &sub)?.cylinder(&proj, &self.space)
    }

    /// `D ∩ L_S`, restricted to the cells of `target = Ω_S`.
    pub(crate) fn marginalize(&self, proj: &Projection, target: &Space) -> Result<ConePiece> {
        Ok(match &self.form {
            Form::Vacuous => ConePiece::vacuous(target),
            Form::Contradiction => ConePiece::contradiction(target),
            Form::Event(a) => a.image(proj, target).embed(),
            Form::Generated(g) => ConePiece::generated(target, marginal_closed_cone(g, proj)?),
            Form::Mixed { strict, generators } => {
                let gens = marginal_closed_cone(generators, proj)?;
                let masses = strict.iter().map(|q| proj.pushforward(q)).collect();
                ConePiece::from_parts(target, Some(masses), gens)?
            }
        })
    }

    /// The closure in `source` of this piece's gambles lifted along `proj`.
    pub(crate) fn cylinder(&self, proj: &Projection, source: &Space) -> Result<ConePiece> {
        let lift = |gens: &[Vector]| {
            let mut out: Vec<Vector> = gens.iter().map(|g| proj.pullback(g)).collect();
            out.sort();
            out
        };
        let form = match &self.form {
            Form::Vacuous => Form::Vacuous,
            Form::Contradiction => Form::Contradiction,
            Form::Event(a) => return Ok(a.preimage(proj, source).embed()),
            Form::Generated(g) => Form::Generated(lift(g)),
            Form::Mixed { strict, generators } => Form::Mixed {
                strict: expand_masses(strict, proj)?,
                generators: lift(generators),
            },
        };
        Ok(ConePiece {
            space: source.clone(),
            form,
        })
    }

    /// `D1 ∩ D2` for vacuous, generated and event pieces (events only with events).
    pub fn meet(&self, other: &ConePiece) -> Result<ConePiece> {
        self.check_space(other)?;
        match (&self.form, &other.form) {
            (Form::Contradiction, _) => Ok(other.clone()),
            (_, Form::Contradiction) => Ok(self.clone()),
            (Form::Vacuous, _) | (_, Form::Vacuous) => Ok(ConePiece::vacuous(&self.space)),
            (Form::Event(a), Form::Event(b)) => Ok(a.union(b)?.embed()),
            (Form::Generated(g1), Form::Generated(g2)) => {
                let n = self.num_cells();
                let mut h = ipalg_lp::HRep::new(n);
                h.inequalities = dual_rays(g1, n)?;
                h.inequalities.extend(dual_rays(g2, n)?);
                ConePiece::from_parts(&self.space, None, generators_of(&h)?)
            }
            _ => Err(Error::Unsupported(format!(
                "meet of {} and {} pieces",
                self.kind().name(),
                other.kind().name()
            ))),
        }
    }

    /// Information order: `D1 ≤ D2` iff `D1 ⊆ D2`.
    pub fn leq(&self, other: &ConePiece) -> Result<bool> {
        self.check_space(other)?;
        match (&self.form, &other.form) {
            (_, Form::Contradiction) => return Ok(true),
            (Form::Contradiction, _) => return Ok(false),
            (Form::Vacuous, _) => return Ok(true),
            (_, Form::Vacuous) => return Ok(false),
            (Form::Event(a), Form::Event(b)) => return Ok(b.is_subset(a)),
            (Form::Generated(g1), Form::Generated(g2)) => {
                for g in g1 {
                    if !closed_contains(g2, g)? {
                        return Ok(false);
                    }
                }
                return Ok(true);
            }
            _ => {}
        }
        // Strict parts: T1 ⊆ T2 iff cone(Q2) ⊆ cone(Q1).
        let q1 = self.strict_dual()?;
        let q2 = other.strict_dual()?;
        if !q2.iter().all(|q| in_cone(&q1, q)) {
            return Ok(false);
        }
        let gens2 = other.parts().gens;
        for g in self.parts().gens {
            if !all_positive_against(&q2, &g) && !closed_contains(&gens2, &g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &ConePiece) -> Result<bool> {
        Ok(self.leq(other)? && other.leq(self)?)
    }

    /// The smallest scope `S` with `ε_S(D) = D`.
    pub fn least_support(&self) -> Result<Scope> {
        let mut support = self.space.full_scope();
        if self.is_vacuous() || self.is_contradiction() {
            return Ok(Scope::EMPTY);
        }
        for v in self.space.full_scope().indices() {
            let candidate = support.without(v);
            if self.extract(candidate)?.equals(self)? {
                support = candidate;
            }
        }
        Ok(support)
    }

    /// Whether every member outside `L+` stays desirable after subtracting some `δ > 0`.
    pub fn is_strictly_desirable(&self) -> Result<bool> {
        match &self.form {
            Form::Contradiction => Err(Error::Unsupported(
                "strict desirability of the contradiction".into(),
            )),
            Form::Vacuous | Form::Event(_) => Ok(true),
            Form::Generated(g) => {
                for gen in g {
                    match geometry::lower_value(g, gen)? {
                        Some(delta) if !delta.is_positive() => return Ok(false),
                        _ => {}
                    }
                }
                Ok(true)
            }
            Form::Mixed { strict, generators } => {
                Ok(generators.iter().all(|g| all_positive_against(strict, g)))
            }
        }
    }

    /// Membership in the closure `{f : P(f) ≥ 0}` of the piece.
    pub fn in_closure(&self, f: &Gamble) -> Result<bool> {
        self.check_gamble(f)?;
        if self.is_contradiction() {
            return Ok(true);
        }
        LowerPrevision::sigma(self)?.tau_bar_contains(f)
    }
}

pub(crate) fn full_vectors(space: &Space, gambles: &[Gamble]) -> Result<Vec<Vector>> {
    gambles
        .iter()
        .map(|g| {
            if g.space() != space || g.scope() != space.full_scope() {
                Err(Error::SpaceMismatch)
            } else {
                Ok(g.values().to_vec())
            }
        })
        .collect()
}
