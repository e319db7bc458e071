//! Maximal nilpotent subsemigroups T = φ(𝓕) up to isomorphism: the
//! preorders ≺ and ≪, depth sets, the K_{u,v} sets and super rank, the
//! isomorphism fingerprint, and the isomorphism decision procedure.

mod context;
mod decide;
mod fingerprint;
mod superrank;

pub use context::{LlMethod, NilContext, PrecMethod, Preorder};
pub use decide::{iso_construct, iso_decide, FieldClass, Verdict};
pub use fingerprint::{Fingerprint, KSizes, UStat};
pub use superrank::K_INDICES;
