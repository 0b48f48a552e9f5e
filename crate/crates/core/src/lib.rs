//! Exact information algebras of coherent sets of desirable gambles and coherent
//! lower previsions on finite multivariate possibility spaces.
//!
//! ```
//! use ipalg_core::{ConePiece, Gamble, LowerPrevision, Space, Value};
//! use ipalg_lp::rational::ratio;
//!
//! let space = Space::new([("X", ["a", "b"])]).unwrap();
//! let f = Gamble::from_ints(&space, &[1, -1]).unwrap();
//! let d = ConePiece::from_assessments(&space, &[f]).unwrap();
//! let p = LowerPrevision::sigma(&d).unwrap();
//! let a = Gamble::from_ints(&space, &[1, 0]).unwrap();
//! assert_eq!(p.lower(&a).unwrap(), Value::Finite(ratio(1, 2)));
//! ```

mod cone;
mod error;
mod events;
mod geometry;
mod labeled;
mod marginal;
mod prevision;
mod space;
#[cfg(feature = "testkit")]
pub mod testkit;

pub use cone::{avoids_partial_loss, ConePiece, PieceKind};
pub use error::{Error, Precondition, Result};
pub use events::{event_union_meet, EventSet};
pub use labeled::{h, h_inverse, Content, ContentKind, GlobalLabeled, LabeledPiece};
pub use marginal::{
    check_compatibility, join_tree_marginals, pairwise_compatible, rip_theorem_check,
    satisfies_rip, KnowledgeBase, RipCertificate, Verdict,
};
pub use prevision::{
    glue, natural_join_membership, CredalSet, LowerPrevision, MassFunction, Value,
};
pub use space::{Cell, Gamble, Projection, Scope, Space, Variable};
