//! The marginal problem: consistency, compatibility, the running intersection
//! property and join-tree message passing.

use crate::error::{Error, Precondition, Result};
use crate::labeled::{ContentKind, LabeledPiece};
use crate::space::{Scope, Space};

/// An ordered family of labeled pieces of one kind over one space.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    pieces: Vec<LabeledPiece>,
}

impl KnowledgeBase {
    pub fn new(pieces: Vec<LabeledPiece>) -> Result<KnowledgeBase> {
        let Some(first) = pieces.first() else {
            return Err(Error::Precondition(Precondition::Empty));
        };
        for p in &pieces[1..] {
            if p.space() != first.space() {
                return Err(Error::SpaceMismatch);
            }
            if p.kind() != first.kind() {
                return Err(Error::KindMismatch(format!(
                    "{} and {}",
                    first.kind().name(),
                    p.kind().name()
                )));
            }
        }
        Ok(KnowledgeBase { pieces })
    }

    pub fn pieces(&self) -> &[LabeledPiece] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn space(&self) -> &Space {
        self.pieces[0].space()
    }

    pub fn kind(&self) -> ContentKind {
        self.pieces[0].kind()
    }

    pub fn scopes(&self) -> Vec<Scope> {
        self.pieces.iter().map(LabeledPiece::label).collect()
    }

    /// `D_1 · … · D_n`.
    pub fn combination(&self) -> Result<LabeledPiece> {
        let mut total = self.pieces[0].clone();
        for p in &self.pieces[1..] {
            total = total.combine(p)?;
        }
        Ok(total)
    }
}

/// Parent indices `p(i) > i` (0-based) witnessing the running intersection
/// property: `S_i ∩ S_p(i) = S_i ∩ (S_{i+1} ∪ … ∪ S_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RipCertificate {
    parents: Vec<usize>,
}

impl RipCertificate {
    pub fn new(parents: Vec<usize>) -> RipCertificate {
        RipCertificate { parents }
    }

    pub fn parents(&self) -> &[usize] {
        &self.parents
    }

    /// The first index at which the certificate fails for `scopes`.
    pub fn first_violation(&self, scopes: &[Scope]) -> Option<usize> {
        let n = scopes.len();
        if self.parents.len() != n.saturating_sub(1) {
            return Some(self.parents.len().min(n.saturating_sub(1)));
        }
        (0..self.parents.len()).find(|&i| {
            let p = self.parents[i];
            p <= i || p >= n || scopes[i].intersection(scopes[p]) != running_target(scopes, i)
        })
    }
}

fn running_target(scopes: &[Scope], i: usize) -> Scope {
    let rest = scopes[i + 1..]
        .iter()
        .fold(Scope::EMPTY, |acc, &s| acc.union(s));
    scopes[i].intersection(rest)
}

/// A certificate choosing the smallest valid parent for each index, or the first
/// index with no valid parent.
pub fn satisfies_rip(scopes: &[Scope]) -> std::result::Result<RipCertificate, usize> {
    let n = scopes.len();
    let mut parents = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n.saturating_sub(1) {
        let target = running_target(scopes, i);
        match (i + 1..n).find(|&j| scopes[i].intersection(scopes[j]) == target) {
            Some(p) => parents.push(p),
            None => return Err(i),
        }
    }
    Ok(RipCertificate { parents })
}

/// Whether both pieces agree on their common variables.
pub fn pairwise_compatible(a: &LabeledPiece, b: &LabeledPiece) -> Result<bool> {
    let common = a.label().intersection(b.label());
    a.project(common)?.equals(&b.project(common)?)
}

#[derive(Debug, Clone)]
pub enum Verdict {
    /// The combination, whose marginals are the inputs.
    Compatible(LabeledPiece),
    /// The combination is the null piece.
    Inconsistent,
    /// Indices whose marginal of the combination differs from the input.
    Incompatible(Vec<usize>),
}

impl Verdict {
    pub fn is_compatible(&self) -> bool {
        matches!(self, Verdict::Compatible(_))
    }
}

/// Combines all pieces and compares the marginals of the result with the inputs.
pub fn check_compatibility(kb: &KnowledgeBase) -> Result<Verdict> {
    let total = kb.combination()?;
    if total.is_null() {
        return Ok(Verdict::Inconsistent);
    }
    let mut failing = Vec::new();
    for (i, p) in kb.pieces.iter().enumerate() {
        if !total.project(p.label())?.equals(p)? {
            failing.push(i);
        }
    }
    Ok(if failing.is_empty() {
        Verdict::Compatible(total)
    } else {
        Verdict::Incompatible(failing)
    })
}

/// Decides compatibility of a consistent, pairwise compatible family with the
/// running intersection property, which must be compatible.
///
/// Violated hypotheses are reported as [`Error::Precondition`]; a marginal that
/// fails to match is reported as [`Error::InternalInvariant`].
pub fn rip_theorem_check(kb: &KnowledgeBase, cert: &RipCertificate) -> Result<Verdict> {
    let scopes = kb.scopes();
    if let Some(i) = cert.first_violation(&scopes) {
        return Err(Error::Precondition(Precondition::InvalidCertificate(i)));
    }
    for i in 0..kb.len() {
        for j in i + 1..kb.len() {
            if !pairwise_compatible(&kb.pieces[i], &kb.pieces[j])? {
                return Err(Error::Precondition(Precondition::NotPairwiseCompatible(
                    i, j,
                )));
            }
        }
    }
    let total = kb.combination()?;
    if total.is_null() {
        return Err(Error::Precondition(Precondition::Inconsistent));
    }
    for (i, p) in kb.pieces.iter().enumerate() {
        if !total.project(p.label())?.equals(p)? {
            return Err(Error::InternalInvariant(format!(
                "marginal {i} of a pairwise compatible join tree differs from its input"
            )));
        }
    }
    Ok(Verdict::Compatible(total))
}

/// Marginals of the total combination on every label, by collect and distribute
/// passes along the tree given by the certificate.
pub fn join_tree_marginals(kb: &KnowledgeBase, cert: &RipCertificate) -> Result<Vec<LabeledPiece>> {
    let scopes = kb.scopes();
    if let Some(i) = cert.first_violation(&scopes) {
        return Err(Error::Precondition(Precondition::InvalidCertificate(i)));
    }
    let n = kb.len();
    let parents = cert.parents();
    // Collect: children have smaller indices than their parents.
    let mut state: Vec<LabeledPiece> = kb.pieces.clone();
    for i in 0..n - 1 {
        let p = parents[i];
        let message = state[i].project(scopes[i].intersection(scopes[p]))?;
        state[p] = state[p].combine(&message)?;
    }
    // Distribute from the root back down.
    let mut marginals: Vec<Option<LabeledPiece>> = vec![None; n];
    marginals[n - 1] = Some(state[n - 1].clone());
    for i in (0..n - 1).rev() {
        let p = parents[i];
        let from_parent = marginals[p]
            .as_ref()
            .expect("parents are finished first")
            .project(scopes[i].intersection(scopes[p]))?;
        marginals[i] = Some(state[i].combine(&from_parent)?);
    }
    Ok(marginals
        .into_iter()
        .map(|m| m.expect("all nodes visited"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::ConePiece;
    use crate::labeled::Content;
    use crate::space::Gamble;

    fn scopes(space: &Space, names: &[&[&str]]) -> Vec<Scope> {
        names.iter().map(|n| space.scope(n).unwrap()).collect()
    }

    #[test]
    fn rip_examples() {
        let s = Space::binary(&["X", "Y", "Z", "W"]);
        let chain = scopes(&s, &[&["X", "Y"], &["Y", "Z"], &["Z", "W"]]);
        assert_eq!(satisfies_rip(&chain).unwrap().parents(), &[1, 2]);
        let cycle = scopes(&s, &[&["X", "Y"], &["Y", "Z"], &["Z", "X"]]);
        assert_eq!(satisfies_rip(&cycle), Err(0));
        assert!(satisfies_rip(&chain[..1]).unwrap().parents().is_empty());
        assert_eq!(
            RipCertificate::new(vec![2]).first_violation(&cycle),
            Some(1)
        );
    }

    #[test]
    fn disjoint_labels_are_pairwise_compatible() {
        let s = Space::binary(&["X", "Y"]);
        let x = s.scope(&["X"]).unwrap();
        let y = s.scope(&["Y"]).unwrap();
        let sx = s.subspace(x).unwrap();
        let sy = s.subspace(y).unwrap();
        let a =
            ConePiece::from_assessments(&sx, &[Gamble::from_ints(&sx, &[1, -1]).unwrap()]).unwrap();
        let b =
            ConePiece::from_assessments(&sy, &[Gamble::from_ints(&sy, &[-1, 3]).unwrap()]).unwrap();
        let a = LabeledPiece::new(&s, x, Content::Cone(a)).unwrap();
        let b = LabeledPiece::new(&s, y, Content::Cone(b)).unwrap();
        assert!(pairwise_compatible(&a, &b).unwrap());
        assert!(pairwise_compatible(&a, &a).unwrap());
        let kb = KnowledgeBase::new(vec![a.clone(), b]).unwrap();
        assert!(check_compatibility(&kb).unwrap().is_compatible());
        let single = KnowledgeBase::new(vec![a]).unwrap();
        assert!(check_compatibility(&single).unwrap().is_compatible());
        let cert = satisfies_rip(&single.scopes()).unwrap();
        assert_eq!(join_tree_marginals(&single, &cert).unwrap().len(), 1);
    }

    #[test]
    fn incompatible_pair_is_a_precondition_error() {
        let s = Space::binary(&["X"]);
        let x = s.full_scope();
        let a =
            ConePiece::from_assessments(&s, &[Gamble::from_ints(&s, &[1, -1]).unwrap()]).unwrap();
        let a = LabeledPiece::new(&s, x, Content::Cone(a)).unwrap();
        let b = LabeledPiece::vacuous(&s, x, ContentKind::Cone).unwrap();
        let kb = KnowledgeBase::new(vec![a, b]).unwrap();
        let cert = satisfies_rip(&kb.scopes()).unwrap();
        assert!(matches!(
            rip_theorem_check(&kb, &cert),
            Err(Error::Precondition(Precondition::NotPairwiseCompatible(
                0, 1
            )))
        ));
        assert!(matches!(
            check_compatibility(&kb).unwrap(),
            Verdict::Incompatible(ref failing) if failing == &[1]
        ));
    }
}
