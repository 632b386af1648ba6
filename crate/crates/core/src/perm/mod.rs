//! Permutation groups small enough to enumerate: elements, subgroups,
//! conjugacy classes and p-subgroups.

pub mod classes;
pub mod dsl;
pub mod element;
pub mod group;
pub mod hom;
pub mod psub;
pub mod subgroup;

pub use classes::ConjClassTable;
pub use dsl::{parse_group_spec, parse_group_spec_with_cap};
pub use element::Perm;
pub use group::{PermGroup, DEFAULT_CAP};
pub use psub::{PSubgroupOrbit, PSubgroupPoset};
pub use subgroup::Subgroup;
