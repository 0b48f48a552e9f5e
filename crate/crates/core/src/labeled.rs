//! Labeled pieces: content stored on the small space of its label, and the
//! isomorphism with globally stored pieces carrying a support.

use crate::cone::ConePiece;
use crate::error::{Error, Result};
use crate::prevision::LowerPrevision;
use crate::space::{Projection, Scope, Space};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContentKind {
    Cone,
    Prevision,
}

impl ContentKind {
    pub fn name(self) -> &'static str {
        match self {
            ContentKind::Cone => "cone",
            ContentKind::Prevision => "prevision",
        }
    }
}

/// Either kind of information: a set of gambles or a lower prevision.
#[derive(Debug, Clone)]
pub enum Content {
    Cone(ConePiece),
    Prevision(LowerPrevision),
}

impl From<ConePiece> for Content {
    fn from(c: ConePiece) -> Self {
        Content::Cone(c)
    }
}

impl From<LowerPrevision> for Content {
    fn from(p: LowerPrevision) -> Self {
        Content::Prevision(p)
    }
}

impl Content {
    pub fn vacuous(kind: ContentKind, space: &Space) -> Content {
        match kind {
            ContentKind::Cone => ConePiece::vacuous(space).into(),
            ContentKind::Prevision => LowerPrevision::vacuous(space).into(),
        }
    }

    pub fn null(kind: ContentKind, space: &Space) -> Content {
        match kind {
            ContentKind::Cone => ConePiece::contradiction(space).into(),
            ContentKind::Prevision => LowerPrevision::null(space).into(),
        }
    }

    pub fn kind(&self) -> ContentKind {
        match self {
            Content::Cone(_) => ContentKind::Cone,
            Content::Prevision(_) => ContentKind::Prevision,
        }
    }

    pub fn space(&self) -> &Space {
        match self {
            Content::Cone(c) => c.space(),
            Content::Prevision(p) => p.space(),
        }
    }

    pub fn is_null(&self) -> bool {
        match self {
            Content::Cone(c) => c.is_contradiction(),
            Content::Prevision(p) => p.is_null(),
        }
    }

    pub fn as_cone(&self) -> Option<&ConePiece> {
        match self {
            Content::Cone(c) => Some(c),
            Content::Prevision(_) => None,
        }
    }

    pub fn as_prevision(&self) -> Option<&LowerPrevision> {
        match self {
            Content::Prevision(p) => Some(p),
            Content::Cone(_) => None,
        }
    }

    fn mismatch(&self, other: &Content) -> Error {
        Error::KindMismatch(format!(
            "{} and {}",
            self.kind().name(),
            other.kind().name()
        ))
    }

    pub fn combine(&self, other: &Content) -> Result<Content> {
        match (self, other) {
            (Content::Cone(a), Content::Cone(b)) => Ok(a.combine(b)?.into()),
            (Content::Prevision(a), Content::Prevision(b)) => Ok(a.combine(b)?.into()),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn extract(&self, s: Scope) -> Result<Content> {
        match self {
            Content::Cone(c) => Ok(c.extract(s)?.into()),
            Content::Prevision(p) => Ok(p.extract(s)?.into()),
        }
    }

    pub fn equals(&self, other: &Content) -> Result<bool> {
        match (self, other) {
            (Content::Cone(a), Content::Cone(b)) => a.equals(b),
            (Content::Prevision(a), Content::Prevision(b)) => a.equals(b),
            _ => Err(self.mismatch(other)),
        }
    }

    pub(crate) fn marginalize(&self, proj: &Projection, target: &Space) -> Result<Content> {
        match self {
            Content::Cone(c) => Ok(c.marginalize(proj, target)?.into()),
            Content::Prevision(p) => Ok(p.marginalize(proj, target)?.into()),
        }
    }

    pub(crate) fn cylinder(&self, proj: &Projection, source: &Space) -> Result<Content> {
        match self {
            Content::Cone(c) => Ok(c.cylinder(proj, source)?.into()),
            Content::Prevision(p) => Ok(p.cylinder(proj, source)?.into()),
        }
    }

    /// The smallest scope `S` with `ε_S(c) = c`.
    pub fn least_support(&self) -> Result<Scope> {
        if let Content::Cone(c) = self {
            return c.least_support();
        }
        let space = self.space();
        if self.is_null() {
            return Ok(Scope::EMPTY);
        }
        let mut support = space.full_scope();
        for v in space.full_scope().indices() {
            let candidate = support.without(v);
            if self.extract(candidate)?.equals(self)? {
                support = candidate;
            }
        }
        Ok(support)
    }
}

/// Content over `Ω_S` paired with its label `S`, a scope of a parent space.
#[derive(Debug, Clone)]
pub struct LabeledPiece {
    space: Space,
    label: Scope,
    content: Content,
}

impl LabeledPiece {
    /// Fails unless the content lives on the subspace of the label's variables.
    pub fn new(space: &Space, label: Scope, content: Content) -> Result<LabeledPiece> {
        if *content.space() != space.subspace(label)? {
            return Err(Error::SpaceMismatch);
        }
        Ok(LabeledPiece {
            space: space.clone(),
            label,
            content,
        })
    }

    pub fn vacuous(space: &Space, label: Scope, kind: ContentKind) -> Result<LabeledPiece> {
        let sub = space.subspace(label)?;
        LabeledPiece::new(space, label, Content::vacuous(kind, &sub))
    }

    pub fn null(space: &Space, label: Scope, kind: ContentKind) -> Result<LabeledPiece> {
        let sub = space.subspace(label)?;
        LabeledPiece::new(space, label, Content::null(kind, &sub))
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn label(&self) -> Scope {
        self.label
    }

    pub fn content(&self) -> &Content {
        &self.content
    }

    pub fn kind(&self) -> ContentKind {
        self.content.kind()
    }

    pub fn is_null(&self) -> bool {
        self.content.is_null()
    }

    /// The content carried to the larger label `to`, as the closure of its cylinder.
    pub fn vacuous_extension(&self, to: Scope) -> Result<LabeledPiece> {
        self.space.check_subset(self.label, to)?;
        if to == self.label {
            return Ok(self.clone());
        }
        let proj = self.space.projection(to, self.label)?;
        let sub = self.space.subspace(to)?;
        LabeledPiece::new(&self.space, to, self.content.cylinder(&proj, &sub)?)
    }

    /// `(D1, S) · (D2, T)` with label `S ∪ T`.
    pub fn combine(&self, other: &LabeledPiece) -> Result<LabeledPiece> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let union = self.label.union(other.label);
        let a = self.vacuous_extension(union)?;
        let b = other.vacuous_extension(union)?;
        LabeledPiece::new(&self.space, union, a.content.combine(&b.content)?)
    }

    /// `π_T(D, S) = (ε_T(D), T)` with the content restricted to `Ω_T`.
    pub fn project(&self, t: Scope) -> Result<LabeledPiece> {
        self.space.check_subset(t, self.label)?;
        if t == self.label {
            return Ok(self.clone());
        }
        let proj = self.space.projection(self.label, t)?;
        let sub = self.space.subspace(t)?;
        LabeledPiece::new(&self.space, t, self.content.marginalize(&proj, &sub)?)
    }

    /// Same label and semantically equal content.
    pub fn equals(&self, other: &LabeledPiece) -> Result<bool> {
        Ok(self.space == other.space
            && self.label == other.label
            && self.content.equals(&other.content)?)
    }
}

/// Content over the full space together with a support `S` (`ε_S(D) = D`).
#[derive(Debug, Clone)]
pub struct GlobalLabeled {
    content: Content,
    support: Scope,
}

impl GlobalLabeled {
    /// Verifies the support property.
    pub fn new(content: Content, support: Scope) -> Result<GlobalLabeled> {
        if !content.extract(support)?.equals(&content)? {
            return Err(Error::Precondition(crate::error::Precondition::Support(
                content.space().describe(support),
            )));
        }
        Ok(GlobalLabeled { content, support })
    }

    pub fn content(&self) -> &Content {
        &self.content
    }

    pub fn support(&self) -> Scope {
        self.support
    }

    /// `(D1 · D2, S ∪ T)`.
    pub fn combine(&self, other: &GlobalLabeled) -> Result<GlobalLabeled> {
        Ok(GlobalLabeled {
            content: self.content.combine(&other.content)?,
            support: self.support.union(other.support),
        })
    }

    /// `(ε_T(D), T)` for `T ⊆ S`.
    pub fn project(&self, t: Scope) -> Result<GlobalLabeled> {
        let space = self.content.space();
        space.check_subset(t, self.support)?;
        Ok(GlobalLabeled {
            content: self.content.extract(t)?,
            support: t,
        })
    }

    pub fn equals(&self, other: &GlobalLabeled) -> Result<bool> {
        Ok(self.support == other.support && self.content.equals(&other.content)?)
    }
}

/// `h(D, S) = ((D ∩ L_S)↓S, S)`.
pub fn h(g: &GlobalLabeled) -> Result<LabeledPiece> {
    let space = g.content.space();
    let proj = space.projection(space.full_scope(), g.support)?;
    let sub = space.subspace(g.support)?;
    LabeledPiece::new(space, g.support, g.content.marginalize(&proj, &sub)?)
}

/// `h⁻¹(D̃, S) = (C(D̃↑I), S)`.
pub fn h_inverse(phi: &LabeledPiece) -> Result<GlobalLabeled> {
    let space = &phi.space;
    let proj = space.projection(space.full_scope(), phi.label)?;
    Ok(GlobalLabeled {
        content: phi.content.cylinder(&proj, space)?,
        support: phi.label,
    })
}
