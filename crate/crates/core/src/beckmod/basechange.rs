use std::sync::Arc;

use super::BeckModule;
use crate::algebra::PdAlgebra;
use crate::error::{Error, Result};
use crate::exactlin::{is_zero, Matrix, QuotientSpace, Subspace};

/// A Beck module presented as `F / R` for a linear space `F` carrying an
/// action and a P-map that both preserve `R`.
#[derive(Debug, Clone)]
pub struct PresentedModule {
    pub module: BeckModule,
    pub quotient: QuotientSpace,
}

impl PresentedModule {
    /// Class of a vector of `F`.
    pub fn class(&self, v: &[u64]) -> Vec<u64> {
        self.quotient.coords(v).expect("ambient vector")
    }
}

/// Descends `action` and `pi` (square matrices on `F`) to `F / relations`.
/// `InconsistentPAction` if P does not preserve the relations,
/// `InvalidModule` if the action does not.
pub fn quotient_module(
    algebra: &Arc<PdAlgebra>,
    action: &[Matrix],
    pi: &Matrix,
    relations: &Subspace,
    labels: &[String],
) -> Result<PresentedModule> {
    let f = algebra.field();
    let n = relations.ambient_dim();
    for (i, r) in action.iter().enumerate() {
        if let Some(b) = relations.basis().iter().find(|b| !relations.contains(&r.mul_vec(b))) {
            return Err(Error::InvalidModule(format!(
                "relations not stable under {}: {:?}",
                algebra.algebra().label(i),
                b
            )));
        }
    }
    if let Some(b) = relations.basis().iter().find(|b| !relations.contains(&pi.mul_vec(b))) {
        return Err(Error::InconsistentPAction(format!("P maps relation {:?} to {:?}", b, pi.mul_vec(b))));
    }
    let quotient = QuotientSpace::new(&Subspace::full(f, n), relations)?;
    let q = quotient.dim();
    let reps = quotient.reps().to_vec();
    let descend = |m: &Matrix| -> Matrix {
        let cols: Vec<Vec<u64>> = reps.iter().map(|r| quotient.coords(&m.mul_vec(r)).expect("ambient")).collect();
        Matrix::from_columns(f, q, &cols).expect("square")
    };
    let new_action = action.iter().map(&descend).collect();
    let new_pi = descend(pi);
    let new_labels = reps
        .iter()
        .map(|r| {
            // representatives are RREF rows; name them after their pivot
            let pivot = r.iter().position(|&c| c != 0).expect("nonzero representative");
            if r.iter().filter(|&&c| c != 0).count() == 1 {
                labels[pivot].clone()
            } else {
                format!("[{}]", crate::algebra::fmt_combination(r, labels))
            }
        })
        .collect();
    let module = BeckModule::new(algebra.clone(), new_labels, new_action, new_pi)?;
    Ok(PresentedModule { module, quotient })
}

/// Checks that `sigma` (matrix of `B → A`) is unital, multiplicative on basis
/// pairs, maps `B_+` into `A_+` and commutes with π on the `B_+` basis. The
/// basis suffices for π: the addition-rule corrections are products, which a
/// multiplicative map carries to the corresponding corrections.
pub fn check_pd_homomorphism(source: &PdAlgebra, target: &PdAlgebra, sigma: &Matrix) -> Result<()> {
    let (b, a) = (source.algebra(), target.algebra());
    if sigma.shape() != (a.dim(), b.dim()) {
        return Err(Error::DimensionMismatch { expected: a.dim() * b.dim(), found: sigma.rows() * sigma.cols() });
    }
    if b.dim() > 0 && sigma.mul_vec(&b.one()) != a.one() {
        return Err(Error::NotHomomorphism("1 is not sent to 1".into()));
    }
    for i in 0..b.dim() {
        let si = sigma.column(i);
        for j in i..b.dim() {
            let lhs = sigma.mul_vec(&b.basis_product_vec(i, j));
            let rhs = a.mul(&si, &sigma.column(j));
            if lhs != rhs {
                return Err(Error::NotHomomorphism(format!("σ({} · {}) != σ({})σ({})", b.label(i), b.label(j), b.label(i), b.label(j))));
            }
        }
    }
    for &i in b.plus_indices() {
        let si = sigma.column(i);
        if !a.in_plus(&si) {
            return Err(Error::NotHomomorphism(format!("σ({}) = {} is not in A_+", b.label(i), a.fmt(&si))));
        }
        let lhs = sigma.mul_vec(source.pmap().image(i));
        let rhs = target.pi_unchecked(&si);
        if lhs != rhs {
            return Err(Error::NotHomomorphism(format!("σ(π({})) = {} but π(σ({})) = {}", b.label(i), a.fmt(&lhs), b.label(i), a.fmt(&rhs))));
        }
    }
    Ok(())
}

/// `M ⊗_B A` along `σ: B → A`, as the quotient of `M ⊗_k A` (basis `m_k ⊗ e_j`
/// at index `k·dim A + j`) by `b m ⊗ a - m ⊗ σ(b) a`, with
/// `x(m ⊗ a) = m ⊗ xa` and `P(m ⊗ a) = P m ⊗ a^p`.
pub fn base_change(m: &BeckModule, sigma: &Matrix, target: &Arc<PdAlgebra>) -> Result<PresentedModule> {
    let source = m.algebra();
    check_pd_homomorphism(source, target, sigma)?;
    let (b, a) = (source.algebra(), target.algebra());
    let f = a.field();
    let (md, ad) = (m.dim(), a.dim());
    let n = md * ad;
    let idx = |k: usize, j: usize| k * ad + j;
    let mut relations = Vec::new();
    for i in 0..b.dim() {
        let sb = sigma.column(i);
        let rho = m.action(i);
        for k in 0..md {
            let bm = rho.column(k);
            for j in 0..ad {
                let mut v = vec![0; n];
                for (l, &c) in bm.iter().enumerate() {
                    if c != 0 {
                        v[idx(l, j)] = f.add(v[idx(l, j)], c);
                    }
                }
                let sa = a.mul(&sb, &a.basis_vec(j));
                for (t, &c) in sa.iter().enumerate() {
                    if c != 0 {
                        v[idx(k, t)] = f.sub(v[idx(k, t)], c);
                    }
                }
                if !is_zero(&v) {
                    relations.push(v);
                }
            }
        }
    }
    let relations = Subspace::span(f, n, &relations);
    let action: Vec<Matrix> = (0..ad)
        .map(|x| {
            let mut mat = Matrix::zeros(f, n, n);
            for k in 0..md {
                for j in 0..ad {
                    for &(t, c) in a.basis_product(x, j) {
                        mat[(idx(k, t), idx(k, j))] = f.add(mat[(idx(k, t), idx(k, j))], c);
                    }
                }
            }
            mat
        })
        .collect();
    let frob: Vec<Vec<u64>> = (0..ad).map(|j| a.pow(&a.basis_vec(j), f.p())).collect();
    let mut pi = Matrix::zeros(f, n, n);
    for k in 0..md {
        let pm = m.pi().column(k);
        for j in 0..ad {
            for (l, &c) in pm.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (t, &e) in frob[j].iter().enumerate() {
                    if e != 0 {
                        pi[(idx(l, t), idx(k, j))] = f.add(pi[(idx(l, t), idx(k, j))], f.mul(c, e));
                    }
                }
            }
        }
    }
    let labels: Vec<String> = (0..n).map(|v| format!("{}⊗{}", m.labels()[v / ad], a.label(v % ad))).collect();
    quotient_module(target, &action, &pi, &relations, &labels)
}

/// `N` viewed over `B` through `σ: B → A`.
pub fn restrict_scalars(n: &BeckModule, sigma: &Matrix, source: &Arc<PdAlgebra>) -> Result<BeckModule> {
    check_pd_homomorphism(source, n.algebra(), sigma)?;
    let action = (0..source.dim()).map(|i| n.act_matrix(&sigma.column(i))).collect();
    BeckModule::new(source.clone(), n.labels().to_vec(), action, n.pi().clone())
}
