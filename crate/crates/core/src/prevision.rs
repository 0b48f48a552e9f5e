//! Coherent lower previsions, credal sets and linear previsions.
//!
//! A coherent lower prevision is stored as the generators `G` of its closed
//! assessment cone: `P(f) = sup{μ : f − μ ∈ cone(G ∪ units)}`.

use std::fmt;

use ipalg_lp::rational::{dot, format};
use ipalg_lp::{HRep, Rational};
use num_traits::{One, Signed, Zero};

use crate::cone::{full_vectors, ConePiece, PieceKind};
use crate::error::{Error, Result};
use crate::geometry::{
    self, avoids_sure_loss, canonical_generators, dual_rays, generators_of, marginal_closed_cone,
    unit, Vector,
};
use crate::space::{Gamble, Projection, Scope, Space};

/// A lower prevision value; the null prevision is `+∞` everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Finite(Rational),
    Infinite,
}

impl Value {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Value::Finite(v) => Some(v),
            Value::Infinite => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(v) => f.write_str(&format(v)),
            Value::Infinite => f.write_str("+inf"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LowerPrevision {
    space: Space,
    /// `None` is the null prevision.
    assessment: Option<Vec<Vector>>,
}

/// Vertices of the credal set of a coherent lower prevision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CredalSet {
    pub vertices: Vec<Vec<Rational>>,
}

impl CredalSet {
    /// Minimum expectation of `f` over the vertices.
    pub fn lower_envelope(&self, f: &[Rational]) -> Option<Rational> {
        self.vertices.iter().map(|p| dot(p, f)).min()
    }
}

impl LowerPrevision {
    pub fn vacuous(space: &Space) -> LowerPrevision {
        LowerPrevision {
            space: space.clone(),
            assessment: Some(Vec::new()),
        }
    }

    pub fn null(space: &Space) -> LowerPrevision {
        LowerPrevision {
            space: space.clone(),
            assessment: None,
        }
    }

    fn from_vectors(space: &Space, gens: Vec<Vector>) -> Result<LowerPrevision> {
        let n = space.cell_count(space.full_scope())?;
        if !avoids_sure_loss(&gens, n)? {
            return Ok(LowerPrevision::null(space));
        }
        Ok(LowerPrevision {
            space: space.clone(),
            assessment: Some(canonical_generators(gens)?),
        })
    }

    /// The natural extension of the assessment "every gamble in `gambles` is almost desirable".
    pub fn from_gambles(space: &Space, gambles: &[Gamble]) -> Result<LowerPrevision> {
        LowerPrevision::from_vectors(space, full_vectors(space, gambles)?)
    }

    /// The natural extension of lower bounds `P(f_k) ≥ μ_k`; null on sure loss.
    pub fn natural_extension_from_bounds(
        space: &Space,
        bounds: &[(Gamble, Rational)],
    ) -> Result<LowerPrevision> {
        let shifted: Vec<Gamble> = bounds.iter().map(|(f, mu)| f.add_constant(&-mu)).collect();
        LowerPrevision::from_gambles(space, &shifted)
    }

    /// The expectation functional of a mass function on the full scope.
    pub fn linear(space: &Space, mass: &[Rational]) -> Result<LowerPrevision> {
        let m = MassFunction::new(space, space.full_scope(), mass.to_vec())?;
        let n = mass.len();
        // Credal set {m}: p·(e_ω − m(ω)) ≥ 0 and its negation for every cell.
        let mut gens = Vec::with_capacity(2 * n);
        for w in 0..n {
            let g: Vector = (0..n)
                .map(|v| {
                    let e = if v == w {
                        Rational::one()
                    } else {
                        Rational::zero()
                    };
                    e - &m.masses[w]
                })
                .collect();
            gens.push(g.iter().map(|x| -x).collect());
            gens.push(g);
        }
        LowerPrevision::from_vectors(space, gens)
    }

    /// `σ(D)(f) = sup{μ : f − μ ∈ D}`.
    pub fn sigma(d: &ConePiece) -> Result<LowerPrevision> {
        let space = d.space();
        let n = space.cell_count(space.full_scope())?;
        match d.kind() {
            PieceKind::Contradiction => Ok(LowerPrevision::null(space)),
            PieceKind::Vacuous => Ok(LowerPrevision::vacuous(space)),
            PieceKind::Generated => {
                let gens = d
                    .generators()
                    .into_iter()
                    .map(Gamble::into_values)
                    .collect();
                Ok(LowerPrevision {
                    space: space.clone(),
                    assessment: Some(gens),
                })
            }
            PieceKind::Event | PieceKind::Mixed => {
                // Closed cone {f : q·f ≥ 0 for q in the credal vertices}.
                let mut h = HRep::new(n);
                h.inequalities = d.strict_dual()?;
                LowerPrevision::from_vectors(space, generators_of(&h)?)
            }
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn is_null(&self) -> bool {
        self.assessment.is_none()
    }

    /// Canonical generators of the assessment cone; `None` for the null prevision.
    pub fn assessment(&self) -> Option<Vec<Gamble>> {
        self.assessment.as_ref().map(|gens| {
            gens.iter()
                .map(|g| {
                    Gamble::on(&self.space, g.clone()).expect("generator length matches space")
                })
                .collect()
        })
    }

    fn check_gamble(&self, f: &Gamble) -> Result<()> {
        if f.space() != &self.space || f.scope() != self.space.full_scope() {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    fn check_space(&self, other: &LowerPrevision) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// `P(f)`.
    pub fn lower(&self, f: &Gamble) -> Result<Value> {
        self.check_gamble(f)?;
        let Some(gens) = &self.assessment else {
            return Ok(Value::Infinite);
        };
        match geometry::lower_value(gens, f.values())? {
            Some(v) => Ok(Value::Finite(v)),
            None => Err(Error::InternalInvariant(
                "coherent prevision with unbounded value".into(),
            )),
        }
    }

    /// `P̄(f) = −P(−f)`; `None` for the null prevision.
    pub fn upper(&self, f: &Gamble) -> Result<Option<Rational>> {
        Ok(self.lower(&f.neg())?.finite().map(|v| -v))
    }

    /// `E*(max{P1, P2})`: the natural extension of both assessments together.
    pub fn combine(&self, other: &LowerPrevision) -> Result<LowerPrevision> {
        self.check_space(other)?;
        match (&self.assessment, &other.assessment) {
            (None, _) | (_, None) => Ok(LowerPrevision::null(&self.space)),
            (Some(_), Some(b)) if b.is_empty() => Ok(self.clone()),
            (Some(a), Some(_)) if a.is_empty() => Ok(other.clone()),
            (Some(a), Some(b)) => {
                let mut gens = a.clone();
                gens.extend(b.iter().cloned());
                LowerPrevision::from_vectors(&self.space, gens)
            }
        }
    }

    /// The natural extension of the restriction to `s`-measurable gambles.
    pub fn extract(&self, s: Scope) -> Result<LowerPrevision> {
        let full = self.space.full_scope();
        self.space.check_subset(s, full)?;
        if s == full {
            return Ok(self.clone());
        }
        let proj = self.space.projection(full, s)?;
        let sub = self.space.subspace(s)?;
        self.marginalize(&proj, &sub)?.cylinder(&proj, &self.space)
    }

    pub(crate) fn marginalize(&self, proj: &Projection, target: &Space) -> Result<LowerPrevision> {
        Ok(LowerPrevision {
            space: target.clone(),
            assessment: match &self.assessment {
                None => None,
                Some(gens) => Some(marginal_closed_cone(gens, proj)?),
            },
        })
    }

    pub(crate) fn cylinder(&self, proj: &Projection, source: &Space) -> Result<LowerPrevision> {
        Ok(LowerPrevision {
            space: source.clone(),
            assessment: self.assessment.as_ref().map(|gens| {
                let mut out: Vec<Vector> = gens.iter().map(|g| proj.pullback(g)).collect();
                out.sort();
                out
            }),
        })
    }

    /// `self ≤ other` pointwise.
    pub fn leq(&self, other: &LowerPrevision) -> Result<bool> {
        self.check_space(other)?;
        let (Some(a), Some(b)) = (&self.assessment, &other.assessment) else {
            return Ok(other.is_null());
        };
        for g in a {
            match geometry::lower_value(b, g)? {
                Some(v) if v.is_negative() => return Ok(false),
                _ => {}
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &LowerPrevision) -> Result<bool> {
        Ok(self.leq(other)? && other.leq(self)?)
    }

    pub fn credal_vertices(&self) -> Result<CredalSet> {
        let Some(gens) = &self.assessment else {
            return Err(Error::Unsupported(
                "credal set of the null prevision".into(),
            ));
        };
        let n = self.space.cell_count(self.space.full_scope())?;
        Ok(CredalSet {
            vertices: dual_rays(gens, n)?,
        })
    }

    /// The mass function of a linear prevision, found by comparing lower and upper
    /// probabilities of every cell.
    pub fn linear_mass(&self) -> Result<Option<Vec<Rational>>> {
        if self.is_null() {
            return Err(Error::Unsupported("linearity of the null prevision".into()));
        }
        let n = self.space.cell_count(self.space.full_scope())?;
        let mut mass = Vec::with_capacity(n);
        for w in 0..n {
            let indicator = Gamble::on(&self.space, unit(n, w))?;
            let lower = self.lower(&indicator)?;
            let upper = self.upper(&indicator)?;
            match (lower.finite(), upper) {
                (Some(l), Some(u)) if *l == u => mass.push(u),
                _ => return Ok(None),
            }
        }
        Ok(Some(mass))
    }

    pub fn is_linear(&self) -> Result<bool> {
        Ok(self.linear_mass()?.is_some())
    }

    /// `f ∈ {f : P(f) > 0} ∪ L+`.
    pub fn tau_strict_contains(&self, f: &Gamble) -> Result<bool> {
        if f.is_positive() {
            return Ok(true);
        }
        Ok(match self.lower(f)? {
            Value::Finite(v) => v.is_positive(),
            Value::Infinite => true,
        })
    }

    /// `f ∈ {f : P(f) ≥ 0}`.
    pub fn tau_bar_contains(&self, f: &Gamble) -> Result<bool> {
        Ok(match self.lower(f)? {
            Value::Finite(v) => !v.is_negative(),
            Value::Infinite => true,
        })
    }
}

/// A probability mass function on the cells of `Ω_scope`.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    space: Space,
    scope: Scope,
    masses: Vec<Rational>,
}

impl MassFunction {
    pub fn new(space: &Space, scope: Scope, masses: Vec<Rational>) -> Result<MassFunction> {
        let n = space.cell_count(scope)?;
        if masses.len() != n {
            return Err(Error::WrongLength {
                expected: n,
                found: masses.len(),
            });
        }
        if masses.iter().any(Signed::is_negative) {
            return Err(Error::InvalidMass("negative mass".into()));
        }
        if masses.iter().sum::<Rational>() != Rational::one() {
            return Err(Error::InvalidMass("masses do not sum to 1".into()));
        }
        Ok(MassFunction {
            space: space.clone(),
            scope,
            masses,
        })
    }

    pub fn scope(&self) -> Scope {
        self.scope
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    /// The marginal on `t ⊆ scope`.
    pub fn marginal(&self, t: Scope) -> Result<MassFunction> {
        let proj = self.space.projection(self.scope, t)?;
        Ok(MassFunction {
            space: self.space.clone(),
            scope: t,
            masses: proj.pushforward(&self.masses),
        })
    }

    pub fn expectation(&self, f: &Gamble) -> Result<Rational> {
        if f.space() != &self.space || f.scope() != self.scope {
            return Err(Error::SpaceMismatch);
        }
        Ok(dot(&self.masses, f.values()))
    }
}

/// Whether the marginals of `p` belong to the finite relations `r1` and `r2`.
pub fn natural_join_membership(
    p: &MassFunction,
    r1: &[MassFunction],
    r2: &[MassFunction],
) -> Result<bool> {
    let member = |relation: &[MassFunction]| -> Result<bool> {
        for q in relation {
            if q.space != p.space {
                return Err(Error::SpaceMismatch);
            }
            if !q.scope.is_subset(p.scope) {
                return Err(Error::NotSubset {
                    sub: p.space.describe(q.scope),
                    sup: p.space.describe(p.scope),
                });
            }
            if p.marginal(q.scope)? == *q {
                return Ok(true);
            }
        }
        Ok(false)
    };
    Ok(member(r1)? && member(r2)?)
}

/// `p(x) = p1(x_S) · p2(x_T) / m(x_{S∩T})` when the marginals on `S ∩ T` agree.
pub fn glue(p1: &MassFunction, p2: &MassFunction) -> Result<Option<MassFunction>> {
    if p1.space != p2.space {
        return Err(Error::SpaceMismatch);
    }
    let space = &p1.space;
    let common = p1.scope.intersection(p2.scope);
    let m1 = p1.marginal(common)?;
    if m1 != p2.marginal(common)? {
        return Ok(None);
    }
    let union = p1.scope.union(p2.scope);
    let to1 = space.projection(union, p1.scope)?;
    let to2 = space.projection(union, p2.scope)?;
    let to_common = space.projection(union, common)?;
    let masses = (0..to1.source_len())
        .map(|w| {
            let m = &m1.masses[to_common.image(w)];
            if m.is_zero() {
                Rational::zero()
            } else {
                &p1.masses[to1.image(w)] * &p2.masses[to2.image(w)] / m
            }
        })
        .collect();
    Ok(Some(MassFunction::new(space, union, masses)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ipalg_lp::rational::{int, ratio};

    fn ab() -> Space {
        Space::new([("X", ["a", "b"])]).unwrap()
    }

    fn sigma_of(space: &Space, gens: &[&[i64]]) -> LowerPrevision {
        let gambles: Vec<Gamble> = gens
            .iter()
            .map(|g| Gamble::from_ints(space, g).unwrap())
            .collect();
        LowerPrevision::sigma(&ConePiece::from_assessments(space, &gambles).unwrap()).unwrap()
    }

    fn ind_a(space: &Space) -> Gamble {
        Gamble::from_ints(space, &[1, 0]).unwrap()
    }

    #[test]
    fn sigma_examples() {
        let s = ab();
        let vac = LowerPrevision::sigma(&ConePiece::vacuous(&s)).unwrap();
        let f = Gamble::from_ints(&s, &[4, -2]).unwrap();
        assert_eq!(vac.lower(&f).unwrap(), Value::Finite(int(-2)));
        assert_eq!(vac.upper(&f).unwrap(), Some(int(4)));
        assert!(LowerPrevision::sigma(&ConePiece::contradiction(&s))
            .unwrap()
            .is_null());
        let p = sigma_of(&s, &[&[1, -1]]);
        assert_eq!(p.lower(&ind_a(&s)).unwrap(), Value::Finite(ratio(1, 2)));
    }

    #[test]
    fn values_for_boundary_generator() {
        let s = ab();
        let p = sigma_of(&s, &[&[1, -2]]);
        assert_eq!(p.lower(&ind_a(&s)).unwrap(), Value::Finite(ratio(2, 3)));
        // The credal set is {p : p_a ≥ 2 p_b}; the largest p_a is 1.
        assert_eq!(p.upper(&ind_a(&s)).unwrap(), Some(int(1)));
        let null = LowerPrevision::null(&s);
        assert_eq!(null.lower(&ind_a(&s)).unwrap(), Value::Infinite);
        assert_eq!(null.upper(&ind_a(&s)).unwrap(), None);
    }

    #[test]
    fn credal_examples() {
        let s = ab();
        assert_eq!(
            LowerPrevision::vacuous(&s)
                .credal_vertices()
                .unwrap()
                .vertices,
            vec![vec![int(0), int(1)], vec![int(1), int(0)]]
        );
        assert_eq!(
            sigma_of(&s, &[&[1, -1]])
                .credal_vertices()
                .unwrap()
                .vertices,
            vec![vec![ratio(1, 2), ratio(1, 2)], vec![int(1), int(0)]]
        );
        let both = sigma_of(&s, &[&[1, -2]])
            .combine(&sigma_of(&s, &[&[-1, 2]]))
            .unwrap();
        assert_eq!(
            both.credal_vertices().unwrap().vertices,
            vec![vec![ratio(2, 3), ratio(1, 3)]]
        );
        assert!(both.is_linear().unwrap());
        assert!(!sigma_of(&s, &[&[1, -2]]).is_linear().unwrap());
        assert!(!LowerPrevision::vacuous(&s).is_linear().unwrap());
        let single = Space::new([("X", ["only"])]).unwrap();
        assert_eq!(
            LowerPrevision::vacuous(&single).linear_mass().unwrap(),
            Some(vec![int(1)])
        );
    }

    #[test]
    fn domination() {
        let s = ab();
        let p = sigma_of(&s, &[&[1, -1]]);
        let q = sigma_of(&s, &[&[1, -1], &[0, 1]]);
        assert!(LowerPrevision::vacuous(&s).leq(&p).unwrap());
        assert!(p.leq(&LowerPrevision::null(&s)).unwrap());
        assert!(p.leq(&q).unwrap());
        assert!(!LowerPrevision::null(&s).leq(&p).unwrap());
        assert!(p.combine(&p).unwrap().equals(&p).unwrap());
        assert!(p
            .combine(&LowerPrevision::vacuous(&s))
            .unwrap()
            .equals(&p)
            .unwrap());
    }

    #[test]
    fn bounds() {
        let s = ab();
        let p =
            LowerPrevision::natural_extension_from_bounds(&s, &[(ind_a(&s), ratio(1, 2))]).unwrap();
        assert_eq!(p.lower(&ind_a(&s)).unwrap(), Value::Finite(ratio(1, 2)));
        let ind_b = Gamble::from_ints(&s, &[0, 1]).unwrap();
        assert_eq!(p.lower(&ind_b).unwrap(), Value::Finite(int(0)));
        assert!(LowerPrevision::natural_extension_from_bounds(&s, &[])
            .unwrap()
            .equals(&LowerPrevision::vacuous(&s))
            .unwrap());
        assert!(
            LowerPrevision::natural_extension_from_bounds(&s, &[(ind_a(&s), int(2))])
                .unwrap()
                .is_null()
        );
    }

    #[test]
    fn tau_sets() {
        let s = ab();
        let p = sigma_of(&s, &[&[1, -2]]);
        let f = Gamble::from_ints(&s, &[1, -2]).unwrap();
        assert!(!p.tau_strict_contains(&f).unwrap());
        assert!(p.tau_bar_contains(&f).unwrap());
        let neg = Gamble::from_ints(&s, &[-1, -1]).unwrap();
        assert!(!p.tau_strict_contains(&neg).unwrap());
        assert!(!p.tau_bar_contains(&neg).unwrap());
        assert!(p
            .tau_strict_contains(&Gamble::from_ints(&s, &[0, 1]).unwrap())
            .unwrap());
    }

    #[test]
    fn linear_prevision() {
        let s = ab();
        let p = LowerPrevision::linear(&s, &[ratio(2, 3), ratio(1, 3)]).unwrap();
        assert_eq!(
            p.linear_mass().unwrap(),
            Some(vec![ratio(2, 3), ratio(1, 3)])
        );
        assert!(LowerPrevision::linear(&s, &[ratio(2, 3), ratio(2, 3)]).is_err());
    }

    #[test]
    fn mass_functions() {
        let s = Space::binary(&["X", "Y", "Z"]);
        let xy = s.scope(&["X", "Y"]).unwrap();
        let yz = s.scope(&["Y", "Z"]).unwrap();
        let uniform4 = vec![ratio(1, 4); 4];
        let p = MassFunction::new(&s, xy, uniform4.clone()).unwrap();
        let x = MassFunction::new(&s, s.scope(&["X"]).unwrap(), vec![ratio(1, 2); 2]).unwrap();
        let y = MassFunction::new(&s, s.scope(&["Y"]).unwrap(), vec![ratio(1, 2); 2]).unwrap();
        assert!(
            natural_join_membership(&p, std::slice::from_ref(&x), std::slice::from_ref(&y))
                .unwrap()
        );
        let point = MassFunction::new(&s, xy, vec![int(1), int(0), int(0), int(0)]).unwrap();
        assert!(!natural_join_membership(&point, &[x], &[y]).unwrap());

        let p1 = MassFunction::new(&s, xy, vec![ratio(1, 2), int(0), int(0), ratio(1, 2)]).unwrap();
        let p2 = MassFunction::new(
            &s,
            yz,
            vec![ratio(1, 4), ratio(1, 4), ratio(1, 8), ratio(3, 8)],
        )
        .unwrap();
        let joint = glue(&p1, &p2).unwrap().unwrap();
        assert_eq!(joint.marginal(xy).unwrap(), p1);
        assert_eq!(joint.marginal(yz).unwrap(), p2);
        let skewed =
            MassFunction::new(&s, yz, vec![ratio(1, 4), int(0), int(0), ratio(3, 4)]).unwrap();
        assert_eq!(glue(&p1, &skewed).unwrap(), None);
    }
}
