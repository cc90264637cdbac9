use super::{FiniteCommAlgebra, PdAlgebra};
use crate::error::{Error, Result};
use crate::exactlin::Matrix;
use crate::report::{Check, Report};
use crate::sampling::{random_combination, Sampling};

/// `A ⊗ A` with its p-map, the two inclusions and the multiplication map.
#[derive(Debug, Clone)]
pub struct TensorSquare {
    pub algebra: PdAlgebra,
    /// `a ↦ a ⊗ 1`
    pub left: Matrix,
    /// `a ↦ 1 ⊗ a`
    pub right: Matrix,
    /// `μ: a ⊗ b ↦ ab`
    pub mu: Matrix,
    base_dim: usize,
}

impl TensorSquare {
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.base_dim + j
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    /// Coordinates of `u ⊗ v`.
    pub fn tensor(&self, u: &[u64], v: &[u64]) -> Vec<u64> {
        let f = self.algebra.field();
        let d = self.base_dim;
        let mut out = vec![0; d * d];
        for (i, &a) in u.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in v.iter().enumerate() {
                out[i * d + j] = f.add(out[i * d + j], f.mul(a, b));
            }
        }
        out
    }

    /// Checks that μ is multiplicative on all basis pairs, preserves the unit,
    /// maps T_+ into A_+ and commutes with the p-maps on sampled elements.
    pub fn verify_mu(&self, base: &PdAlgebra, sampling: &Sampling) -> Report {
        let t = self.algebra.algebra();
        let a = base.algebra();
        let f = t.field();
        let mut report = Report::new();
        let unit = self.mu.mul_vec(&t.one()) == a.one();
        report.push(Check::new("mu-unit", unit));
        let mut witness = None;
        'outer: for i in 0..t.dim() {
            let ei = t.basis_vec(i);
            let mi = self.mu.mul_vec(&ei);
            for j in i..t.dim() {
                let ej = t.basis_vec(j);
                let lhs = self.mu.mul_vec(&t.mul(&ei, &ej));
                let rhs = a.mul(&mi, &self.mu.mul_vec(&ej));
                if lhs != rhs {
                    witness = Some(format!("μ({} · {}) = {} but μ·μ = {}", t.label(i), t.label(j), a.fmt(&lhs), a.fmt(&rhs)));
                    break 'outer;
                }
            }
        }
        report.push(Check::from_witness("mu-multiplicative", witness).dim("basis-pairs", t.dim() * (t.dim() + 1) / 2));
        let grading = t.plus_indices().iter().find_map(|&i| {
            let v = self.mu.mul_vec(&t.basis_vec(i));
            (!a.in_plus(&v)).then(|| format!("μ({}) = {}", t.label(i), a.fmt(&v)))
        });
        report.push(Check::from_witness("mu-graded", grading));
        let plus = t.plus_basis();
        let mut rng = sampling.rng(21);
        let mut witness = None;
        for _ in 0..sampling.samples {
            let x = random_combination(f, t.dim(), &plus, &mut rng);
            let lhs = self.mu.mul_vec(&self.algebra.pi_unchecked(&x));
            let rhs = base.pi_unchecked(&self.mu.mul_vec(&x));
            if lhs != rhs {
                witness = Some(format!("t = {}: μ(π t) = {} but π(μ t) = {}", t.fmt(&x), a.fmt(&lhs), a.fmt(&rhs)));
                break;
            }
        }
        report.push(Check::from_witness("mu-pi-equivariant", witness).dim("samples", sampling.samples));
        report
    }
}

/// `A ⊗ A` for an augmented `A`, with basis `e_i ⊗ e_j` at index `i·dim + j`.
///
/// The p-map is seeded by `π(e_i ⊗ 1) = π(e_i) ⊗ 1`, `π(1 ⊗ e_j) = 1 ⊗ π(e_j)`
/// and `π(e_i ⊗ e_j) = 0` for `i, j ≥ 1` (a product of two elements of the
/// augmentation ideal), then extended by the addition rule.
pub fn tensor_square(pd: &PdAlgebra) -> Result<TensorSquare> {
    let a = pd.algebra();
    if !a.is_augmented() {
        return Err(Error::InvalidAlgebra("tensor square needs an augmented algebra (A_0 = k)".into()));
    }
    let f = a.field();
    let d = a.dim();
    let td = d * d;
    let cap = super::constructors::DEFAULT_DIM_CAP;
    if td as u64 > cap {
        return Err(Error::DimensionCapExceeded { dim: td as u64, cap });
    }
    let labels = (0..td)
        .map(|k| {
            let (i, j) = (k / d, k % d);
            format!("{}⊗{}", a.label(i), a.label(j))
        })
        .collect();
    let t = FiniteCommAlgebra::from_fn(f, labels, (1..td).collect(), |k, l| {
        let (i1, j1) = (k / d, k % d);
        let (i2, j2) = (l / d, l % d);
        let mut v = vec![0; td];
        for &(r, c) in a.basis_product(i1, i2) {
            for &(s, c2) in a.basis_product(j1, j2) {
                v[r * d + s] = f.add(v[r * d + s], f.mul(c, c2));
            }
        }
        v
    })?;
    let images = (0..td)
        .map(|k| {
            let (i, j) = (k / d, k % d);
            let mut v = vec![0; td];
            if k == 0 {
                return v;
            }
            if j == 0 {
                for (r, &c) in pd.pmap().image(i).iter().enumerate() {
                    v[r * d] = c;
                }
            } else if i == 0 {
                for (s, &c) in pd.pmap().image(j).iter().enumerate() {
                    v[s] = c;
                }
            }
            v
        })
        .collect();
    let algebra = PdAlgebra::new(t, images)?;
    let left_cols: Vec<Vec<u64>> = (0..d)
        .map(|i| {
            let mut v = vec![0; td];
            v[i * d] = 1;
            v
        })
        .collect();
    let right_cols: Vec<Vec<u64>> = (0..d)
        .map(|j| {
            let mut v = vec![0; td];
            v[j] = 1;
            v
        })
        .collect();
    let mu_cols: Vec<Vec<u64>> = (0..td).map(|k| a.basis_product_vec(k / d, k % d)).collect();
    Ok(TensorSquare {
        algebra,
        left: Matrix::from_columns(f, td, &left_cols)?,
        right: Matrix::from_columns(f, td, &right_cols)?,
        mu: Matrix::from_columns(f, d, &mu_cols)?,
        base_dim: d,
    })
}
