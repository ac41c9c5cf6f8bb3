//! Exact, certificate-carrying decision procedures for positively ordered
//! commutative monoids, their Grothendieck cones, the tensor product with
//! the Cuntz semigroup `Z`, and algebraic Cu-semigroups built from a
//! compact layer.
//!
//! Every decision returns a three-valued [`Verdict`]. `Yes` and `No`
//! carry witnesses that [`Instance::replay`] re-checks; `Unknown` names
//! the budget bound that ran out.

pub mod arith;
pub mod budget;
pub mod catalog;
pub mod culayer;
pub mod cuz;
pub mod elem;
pub mod error;
pub mod finite;
pub mod grothendieck;
pub mod instance;
pub mod json;
pub mod lattice;
pub mod relations;
pub mod tensorz;
pub mod vector;
pub mod verdict;

pub use budget::SearchBudget;
pub use cuz::CuZ;
pub use elem::Elem;
pub use error::{CoreError, CoreResult};
pub use instance::Instance;
pub use relations::PropertyId;
pub use verdict::{Tri, Verdict};
