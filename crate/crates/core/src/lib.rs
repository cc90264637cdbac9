//! Exact computations with divided-power algebras over prime fields: p-maps,
//! Beck modules and derivations, Kähler differentials, the divided-power
//! polynomial algebra O(n) and the Witt algebra, and localization.

pub mod algebra;
pub mod beckmod;
pub mod derivations;
pub mod dpoly;
pub mod error;
pub mod kaehler;
pub mod localization;
pub mod exactlin;
pub mod report;
pub mod sampling;

pub use algebra::{FiniteCommAlgebra, PMap, PdAlgebra};
pub use error::{Error, Result};
pub use exactlin::{Fp, Matrix, Subspace};
pub use report::{Check, Report};
pub use sampling::Sampling;
