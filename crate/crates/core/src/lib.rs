//! Workbench for the representation theory of the infinitesimal quantum
//! group of gl2/sl2 at an odd primitive `l`-th root of unity: exact scalar
//! arithmetic, weight/block combinatorics, explicit module constructions,
//! Krull-Schmidt decomposition of tensor powers of the natural module, and
//! endomorphism-algebra structure with quiver presentations.

pub mod algebra;
pub mod endo;
pub mod linalg;
pub mod quiver;
pub mod reps;
pub mod scalars;
pub mod weights;

pub use scalars::{make_field, Field, FieldConfig, FieldMode, Scalar, ScalarError};
