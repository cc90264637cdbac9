use super::{FiniteCommAlgebra, PdAlgebra};
use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Subspace};

/// `A / K` for a graded, π-stable ideal `K`, presented on standard basis
/// representatives of `A`.
#[derive(Debug, Clone)]
pub struct QuotientAlgebra {
    pub algebra: PdAlgebra,
    /// `A → A/K` in coordinates.
    pub proj: Matrix,
    /// Basis indices of `A` whose classes form the basis of the quotient.
    pub reps: Vec<usize>,
    pub kernel: Subspace,
}

impl QuotientAlgebra {
    pub fn project(&self, v: &[u64]) -> Vec<u64> {
        self.proj.mul_vec(v)
    }

    /// The representative `Σ c_a e_{reps[a]}` of a class.
    pub fn lift(&self, coords: &[u64]) -> Vec<u64> {
        let mut v = vec![0; self.proj.cols()];
        for (&r, &c) in self.reps.iter().zip(coords) {
            v[r] = c;
        }
        v
    }
}

/// Whether `sub` splits as `(sub ∩ A_0) ⊕ (sub ∩ A_+)`.
pub(crate) fn is_graded(a: &FiniteCommAlgebra, sub: &Subspace) -> bool {
    sub.basis().iter().all(|b| sub.contains(&a.plus_part(b)))
}

/// The quotient by an ideal `k` that the caller has checked to be graded and
/// π-stable. Representatives are chosen greedily among standard basis vectors,
/// A_0 indices first, so the unit (when it survives) is basis element 0.
pub(crate) fn graded_quotient(pd: &PdAlgebra, k: &Subspace) -> Result<QuotientAlgebra> {
    let a = pd.algebra();
    let f = a.field();
    let d = a.dim();
    let mut order = a.zero_part_indices();
    order.extend_from_slice(a.plus_indices());
    let mut current = k.clone();
    let mut reps = Vec::new();
    for i in order {
        let e = a.basis_vec(i);
        if !current.contains(&e) {
            current = current.sum(&Subspace::span(f, d, &[e]))?;
            reps.push(i);
        }
    }
    reps.sort_unstable();
    let q = reps.len();
    if q == 0 {
        let algebra = PdAlgebra::with_zero_pmap(FiniteCommAlgebra::zero_ring(f));
        return Ok(QuotientAlgebra { algebra, proj: Matrix::zeros(f, 0, d), reps, kernel: k.clone() });
    }
    if reps[0] != 0 {
        return Err(Error::InvalidAlgebra("quotient kernel contains a unit-class conflict".into()));
    }
    let mut cols: Vec<Vec<u64>> = reps.iter().map(|&r| a.basis_vec(r)).collect();
    cols.extend(k.basis().iter().cloned());
    let b = Matrix::from_columns(f, d, &cols)?;
    let inv = b.inverse().ok_or_else(|| Error::InvalidAlgebra("representatives do not complete the kernel".into()))?;
    let mut proj = Matrix::zeros(f, q, d);
    for i in 0..q {
        proj.row_mut(i).copy_from_slice(inv.row(i));
    }
    let labels = reps.iter().map(|&r| a.label(r).to_string()).collect();
    let plus: Vec<usize> = (0..q).filter(|&s| a.is_plus_index(reps[s])).collect();
    let alg = FiniteCommAlgebra::from_fn(f, labels, plus, |s, t| proj.mul_vec(&a.basis_product_vec(reps[s], reps[t])))?;
    let images = (0..q)
        .map(|s| if a.is_plus_index(reps[s]) { proj.mul_vec(pd.pmap().image(reps[s])) } else { vec![0; q] })
        .collect();
    let algebra = PdAlgebra::new(alg, images)?;
    Ok(QuotientAlgebra { algebra, proj, reps, kernel: k.clone() })
}

fn check_ideal_in_plus(pd: &PdAlgebra, j: &Subspace) -> Result<()> {
    let a = pd.algebra();
    if j.ambient_dim() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: j.ambient_dim() });
    }
    if let Some(b) = j.basis().iter().find(|b| !a.in_plus(b)) {
        return Err(Error::NotInPlus(b.clone()));
    }
    if let Some(w) = a.ideal_witness(j) {
        return Err(Error::NotAnIdeal(w));
    }
    Ok(())
}

/// Whether an ideal `J ⊆ A_+` is stable under π. Testing a basis suffices:
/// the correction terms `x^k y^{p-k}` of the addition rule already lie in `J`.
pub fn is_p_ideal(pd: &PdAlgebra, j: &Subspace) -> Result<bool> {
    check_ideal_in_plus(pd, j)?;
    Ok(p_ideal_witness(pd, j).is_none())
}

fn p_ideal_witness(pd: &PdAlgebra, j: &Subspace) -> Option<String> {
    j.basis().iter().find_map(|b| {
        let v = pd.pi_unchecked(b);
        (!j.contains(&v)).then(|| format!("π({}) = {}", pd.fmt(b), pd.fmt(&v)))
    })
}

pub fn quotient_algebra(pd: &PdAlgebra, j: &Subspace) -> Result<QuotientAlgebra> {
    check_ideal_in_plus(pd, j)?;
    if let Some(w) = p_ideal_witness(pd, j) {
        return Err(Error::NotPIdeal(w));
    }
    graded_quotient(pd, j)
}
