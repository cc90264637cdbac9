//! Finite-dimensional commutative algebras with a p-map on the augmentation
//! ideal, and the constructions built on them.

mod constructors;
mod gamma;
mod localize;
mod pmap;
mod quotient;
mod structure;
mod tensor;

pub use constructors::{
    divided_power_algebra, divided_power_algebra_capped, divided_power_generators, truncated_polynomial_algebra,
    DividedPowerShape, DEFAULT_DIM_CAP,
};
pub use gamma::{reconstruct_gamma, verify_gamma_identities};
pub use localize::{localization_kernel, localize_algebra, Localization, LocalizationKind};
pub use pmap::{correction, eval_pmap, shift_pmap, verify_pmap_axioms, PMap, PdAlgebra};
pub use quotient::{is_p_ideal, quotient_algebra, QuotientAlgebra};
pub use structure::{fmt_combination, FiniteCommAlgebra, SparseVec};
pub use tensor::{tensor_square, TensorSquare};
