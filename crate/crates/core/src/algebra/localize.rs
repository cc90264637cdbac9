use serde::Serialize;

use super::quotient::{graded_quotient, is_graded, QuotientAlgebra};
use super::PdAlgebra;
use crate::error::{Error, Result};
use crate::exactlin::{rref_kernel_solve, Matrix, Subspace};

/// How `f` behaves in `A`: invertible, nilpotent, or neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LocalizationKind {
    Unit,
    Nilpotent,
    Mixed,
}

/// `A_f` together with the canonical map `A → A_f` and `1/f ∈ A_f`.
#[derive(Debug, Clone)]
pub struct Localization {
    pub quotient: QuotientAlgebra,
    pub kind: LocalizationKind,
    pub f: Vec<u64>,
    pub f_inverse: Vec<u64>,
}

impl Localization {
    pub fn algebra(&self) -> &PdAlgebra {
        &self.quotient.algebra
    }

    pub fn canonical(&self) -> &Matrix {
        &self.quotient.proj
    }

    /// The class of `a / f^i` in `A_f`.
    pub fn fraction(&self, a: &[u64], i: u64) -> Vec<u64> {
        let lf = self.algebra().algebra();
        lf.mul(&self.quotient.project(a), &lf.pow(&self.f_inverse, i))
    }
}

/// Kernel of `A → A_f`: the elements killed by a power of `f`. Multiplication
/// by `f` on a space of dimension `N` has `ker L_f^N` as its stable kernel.
pub fn localization_kernel(pd: &PdAlgebra, f: &[u64]) -> Result<Subspace> {
    let a = pd.algebra();
    a.check_elem(f)?;
    let l = a.left_mul_matrix(f);
    let mut power = Matrix::identity(a.field(), a.dim());
    let mut base = l;
    let mut n = a.dim();
    while n > 0 {
        if n & 1 == 1 {
            power = power.matmul(&base);
        }
        base = base.matmul(&base);
        n >>= 1;
    }
    Ok(power.kernel())
}

/// Localization `A_f = A[t]/(tf - 1)`, realized as `A / ker(A → A_f)`.
///
/// The fraction `x / f^i` is the class of `x` times `[f]^{-i}`, and the p-map
/// is `π(x/f^i) = π(x)/f^{ip}`, which on representatives is the class of π(x).
pub fn localize_algebra(pd: &PdAlgebra, f: &[u64]) -> Result<Localization> {
    let a = pd.algebra();
    let k = localization_kernel(pd, f)?;
    let kind = match k.dim() {
        0 => LocalizationKind::Unit,
        d if d == a.dim() => LocalizationKind::Nilpotent,
        _ => LocalizationKind::Mixed,
    };
    if !is_graded(a, &k) {
        return Err(Error::NonGradedLocalization(format!("kernel of dimension {} does not split along A_0 ⊕ A_+", k.dim())));
    }
    let k_plus = k.intersect(&a.plus_subspace())?;
    for b in k_plus.basis() {
        let v = pd.pi_unchecked(b);
        if !k.contains(&v) {
            return Err(Error::NonGradedLocalization(format!("π({}) = {} leaves the kernel", a.fmt(b), a.fmt(&v))));
        }
    }
    let quotient = graded_quotient(pd, &k)?;
    let lf = quotient.algebra.algebra();
    let fbar = quotient.project(f);
    let f_inverse = if lf.dim() == 0 {
        Vec::new()
    } else {
        let solve = rref_kernel_solve(&lf.left_mul_matrix(&fbar), Some(&lf.one()))?;
        solve.solution.ok_or_else(|| Error::InvalidAlgebra("f is not invertible in A_f".into()))?
    };
    Ok(Localization { quotient, kind, f: f.to_vec(), f_inverse })
}
