//! Events (sets of cells) with intersection, union and cylindrification.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::cone::ConePiece;
use crate::error::{Error, Result};
use crate::space::{Cell, Gamble, Projection, Scope, Space};

/// A subset of the cells of the full scope of a space.
#[derive(Clone, PartialEq, Eq)]
pub struct EventSet {
    space: Space,
    cells: FixedBitSet,
}

impl fmt::Debug for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.cells.ones()).finish()
    }
}

impl EventSet {
    pub fn new(space: &Space, cells: impl IntoIterator<Item = usize>) -> Result<EventSet> {
        let n = space.cell_count(space.full_scope())?;
        let mut bits = FixedBitSet::with_capacity(n);
        for c in cells {
            if c >= n {
                return Err(Error::WrongLength {
                    expected: n,
                    found: c + 1,
                });
            }
            bits.insert(c);
        }
        Ok(EventSet {
            space: space.clone(),
            cells: bits,
        })
    }

    pub fn from_cells(space: &Space, cells: &[Cell]) -> Result<EventSet> {
        let indices = cells
            .iter()
            .map(|c| space.cell_index(space.full_scope(), c))
            .collect::<Result<Vec<_>>>()?;
        EventSet::new(space, indices)
    }

    pub fn empty(space: &Space) -> Result<EventSet> {
        EventSet::new(space, [])
    }

    pub fn full(space: &Space) -> Result<EventSet> {
        let n = space.cell_count(space.full_scope())?;
        EventSet::new(space, 0..n)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn contains(&self, cell: usize) -> bool {
        self.cells.contains(cell)
    }

    pub fn len(&self) -> usize {
        self.cells.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.cells.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    /// Member cell indices in increasing order.
    pub fn cells(&self) -> Vec<usize> {
        self.cells.ones().collect()
    }

    pub fn is_subset(&self, other: &EventSet) -> bool {
        self.cells.is_subset(&other.cells)
    }

    fn same_space(&self, other: &EventSet) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub fn intersection(&self, other: &EventSet) -> Result<EventSet> {
        self.same_space(other)?;
        let mut cells = self.cells.clone();
        cells.intersect_with(&other.cells);
        Ok(EventSet {
            space: self.space.clone(),
            cells,
        })
    }

    pub fn union(&self, other: &EventSet) -> Result<EventSet> {
        self.same_space(other)?;
        let mut cells = self.cells.clone();
        cells.union_with(&other.cells);
        Ok(EventSet {
            space: self.space.clone(),
            cells,
        })
    }

    /// The saturation of the event: every cell agreeing on `s` with some member.
    pub fn cylindrify(&self, s: Scope) -> Result<EventSet> {
        let proj = self.space.projection(self.space.full_scope(), s)?;
        let sub = self.space.subspace(s)?;
        Ok(self.image(&proj, &sub).preimage(&proj, &self.space))
    }

    pub(crate) fn image(&self, proj: &Projection, target: &Space) -> EventSet {
        let mut bits = FixedBitSet::with_capacity(proj.target_len());
        for c in self.cells.ones() {
            bits.insert(proj.image(c));
        }
        EventSet {
            space: target.clone(),
            cells: bits,
        }
    }

    pub(crate) fn preimage(&self, proj: &Projection, source: &Space) -> EventSet {
        let mut bits = FixedBitSet::with_capacity(proj.source_len());
        for c in 0..proj.source_len() {
            if self.cells.contains(proj.image(c)) {
                bits.insert(c);
            }
        }
        EventSet {
            space: source.clone(),
            cells: bits,
        }
    }

    /// The coherent set `D_A` of gambles with positive infimum on the event.
    pub fn embed(&self) -> ConePiece {
        ConePiece::from_event(self.clone())
    }

    pub fn indicator(&self) -> Gamble {
        Gamble::indicator(&self.space, self.space.full_scope(), &self.cells())
            .expect("event cells are in range")
    }
}

/// `(a ∩ b, a ∪ b)`.
pub fn event_union_meet(a: &EventSet, b: &EventSet) -> Result<(EventSet, EventSet)> {
    Ok((a.intersection(b)?, a.union(b)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cylindrify_examples() {
        let s = Space::binary(&["X", "Y"]);
        let a = EventSet::new(&s, [1]).unwrap();
        let x = s.scope(&["X"]).unwrap();
        assert_eq!(a.cylindrify(x).unwrap().cells(), vec![0, 1]);
        assert!(EventSet::empty(&s)
            .unwrap()
            .cylindrify(x)
            .unwrap()
            .is_empty());
        assert!(a.cylindrify(Scope::EMPTY).unwrap().is_full());
        assert_eq!(a.cylindrify(s.full_scope()).unwrap(), a);
    }

    #[test]
    fn union_and_meet() {
        let s = Space::new([("X", ["a", "b"])]).unwrap();
        let a = EventSet::new(&s, [0]).unwrap();
        let b = EventSet::new(&s, [1]).unwrap();
        let (meet, join) = event_union_meet(&a, &b).unwrap();
        assert!(meet.is_empty());
        assert!(join.is_full());
        let full = EventSet::full(&s).unwrap();
        assert_eq!(a.intersection(&full).unwrap(), a);
    }

    #[test]
    fn mismatched_spaces() {
        let a = EventSet::full(&Space::binary(&["X"])).unwrap();
        let b = EventSet::full(&Space::binary(&["Y"])).unwrap();
        assert_eq!(a.union(&b), Err(Error::SpaceMismatch));
    }
}
