//! Clopen subsets of `2^ℕ × ℕ` and representable points of `2^ℕ`.

pub mod clopen;
pub mod pairing;
pub mod point;
pub mod repset;
pub mod word;

pub use clopen::{cylinder_subset, ClopenX, Cylinder};
pub use pairing::{pair, unpair};
pub use point::{PointB, PointEq, EQ_BUDGET};
pub use repset::{IndexFilter, NamedPredicate, RepSet, SparseSeq};
pub use word::BitWord;
