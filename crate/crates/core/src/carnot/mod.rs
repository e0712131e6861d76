//! Lie group and Lie algebra structure of the jet space J²(ℝ²,ℝ).

pub mod algebra;
pub mod alpha;
pub mod group;
pub mod jet;

pub use algebra::{bracket, AlgebraVector, Basis, BracketEntry, StructureConstants};
pub use alpha::{alpha_at, AlphaForm};
pub use group::{frame_at, group_multiply, left_invariant_field, CoordVector, GroupPoint};
pub use jet::{from_jet, to_jet, JetPoint};
