//! Exact arithmetic over F_p: residues, dense matrices, RREF-canonical
//! subspaces and the p-adic combinatorics the rest of the crate relies on.

mod combinat;
mod field;
mod matrix;
mod subspace;

pub use combinat::{binom_mod_p, dp_coeff, factorial_unit_part, factorial_valuation};
pub use field::{is_prime, is_zero, mod_inverse, unit_vec, zero_vec, Fp, MAX_PRIME};
pub use matrix::{rref_kernel_solve, LinearSolve, Matrix};
pub use subspace::{QuotientSpace, Subspace};
