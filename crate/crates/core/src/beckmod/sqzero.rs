use std::sync::Arc;

use super::BeckModule;
use crate::algebra::{FiniteCommAlgebra, PdAlgebra};
use crate::error::Result;
use crate::exactlin::{Matrix, Subspace};

/// `A ⊕_p M` with product `(a,m)(a',m') = (aa', am' + a'm)` and p-map
/// `π(a,m) = (π(a), P m - a^{p-1} m)`. Basis: A's basis, then M's.
#[derive(Debug, Clone)]
pub struct SquareZeroExtension {
    pub algebra: PdAlgebra,
    /// `A ⊕ M → A`
    pub proj: Matrix,
    /// `a ↦ (a, 0)`
    pub zero_section: Matrix,
    /// `m ↦ (0, m)`
    pub inclusion: Matrix,
    base_dim: usize,
}

impl SquareZeroExtension {
    pub fn pair(&self, a: &[u64], m: &[u64]) -> Vec<u64> {
        let mut v = a.to_vec();
        v.extend_from_slice(m);
        v
    }

    pub fn split<'v>(&self, v: &'v [u64]) -> (&'v [u64], &'v [u64]) {
        v.split_at(self.base_dim)
    }

    /// The kernel of the projection with the induced action and p-map.
    pub fn recover_module(&self, base: &Arc<PdAlgebra>) -> Result<BeckModule> {
        let e = self.algebra.algebra();
        let f = e.field();
        let d = self.base_dim;
        let md = e.dim() - d;
        let kernel = self.proj.kernel();
        let coords = |v: &[u64]| -> Vec<u64> { kernel.coords(v).expect("stays in the kernel") };
        let action = (0..d)
            .map(|i| {
                let cols: Vec<Vec<u64>> = kernel.basis().iter().map(|k| coords(&e.mul(&e.basis_vec(i), k))).collect();
                Matrix::from_columns(f, md, &cols)
            })
            .collect::<Result<Vec<_>>>()?;
        let pi_cols: Vec<Vec<u64>> = kernel.basis().iter().map(|k| coords(&self.algebra.pi_unchecked(k))).collect();
        let pi = Matrix::from_columns(f, md, &pi_cols)?;
        let labels = (0..md).map(|k| e.label(d + k).to_string()).collect();
        BeckModule::new(base.clone(), labels, action, pi)
    }

    pub fn kernel(&self) -> Subspace {
        self.proj.kernel()
    }
}

pub fn square_zero_extension(m: &BeckModule) -> Result<SquareZeroExtension> {
    let pd = m.algebra();
    let a = pd.algebra();
    let f = a.field();
    let d = a.dim();
    let md = m.dim();
    let n = d + md;
    let mut labels: Vec<String> = a.labels().to_vec();
    labels.extend(m.labels().iter().map(|l| format!("({l})")));
    let mut plus: Vec<usize> = a.plus_indices().to_vec();
    plus.extend(d..n);
    let ext = FiniteCommAlgebra::from_fn(f, labels, plus, |i, j| {
        let mut v = vec![0; n];
        match (i < d, j < d) {
            (true, true) => v[..d].copy_from_slice(&a.basis_product_vec(i, j)),
            (true, false) => v[d..].copy_from_slice(&m.action(i).column(j - d)),
            (false, true) => v[d..].copy_from_slice(&m.action(j).column(i - d)),
            (false, false) => {}
        }
        v
    })?;
    let images = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            if i < d {
                if a.is_plus_index(i) {
                    v[..d].copy_from_slice(pd.pmap().image(i));
                }
            } else {
                v[d..].copy_from_slice(&m.pi().column(i - d));
            }
            v
        })
        .collect();
    let algebra = PdAlgebra::new(ext, images)?;
    let mut proj = Matrix::zeros(f, d, n);
    let mut zero_section = Matrix::zeros(f, n, d);
    for i in 0..d {
        proj[(i, i)] = 1;
        zero_section[(i, i)] = 1;
    }
    let mut inclusion = Matrix::zeros(f, n, md);
    for k in 0..md {
        inclusion[(d + k, k)] = 1;
    }
    Ok(SquareZeroExtension { algebra, proj, zero_section, inclusion, base_dim: d })
}
