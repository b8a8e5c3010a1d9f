//! A finite-instance engine for 2-categorical descent.
//!
//! The crate represents normalized pseudofunctors `F: C^op → Cat` over finite
//! categories, constructs the pseudocone category `PC(F)` and the elements
//! fibration `El(F)`, and verifies the structural theorems relating them by
//! exhaustive search.  On top of that sit finite group actions: free
//! resolutions, the equivariance isomorphism `Θ` with its GIT cocycle,
//! change-of-groups functors, and equivariant stalks/traces over
//! exact-rational matrix fibres.
//!
//! Everything is deterministic: identifiers are opaque strings, all
//! enumeration orders are lexicographic, and all arithmetic is exact.

pub mod cli;
pub mod criteria;
pub mod equivariant;
pub mod fincat;
pub mod fixtures;
pub mod functors;
pub mod grothendieck;
pub mod matq;
pub mod pseudocone;
pub mod report;
pub mod trace;
pub mod twocat;

pub use report::{EngineError, Report};
