//! Finite-semigroup machinery shared by every verification oracle:
//! canonical matrix sets, interned multiplication tables, closure,
//! equivalence closure, subsemigroup enumeration and isomorphism search.

mod iso;
mod matset;
mod partition;
mod poset;
mod subsemigroups;
mod table;
mod universe;

pub use iso::{table_iso, verify_iso};
pub use matset::{closure, MatSet};
pub use partition::{equiv_closure, Partition};
pub use poset::preorder_depths;
pub use subsemigroups::enumerate_subsemigroups;
pub use table::{build_table, SemigroupTable};
pub use universe::Universe;
