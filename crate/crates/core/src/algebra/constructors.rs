use super::{FiniteCommAlgebra, PdAlgebra};
use crate::error::{Error, Result};
use crate::exactlin::{binom_mod_p, dp_coeff, Fp};

pub const DEFAULT_DIM_CAP: u64 = 4096;

/// `k[x]/(x^p)` with basis `1, x, ..., x^{p-1}` and the zero p-map.
pub fn truncated_polynomial_algebra(field: Fp) -> Result<PdAlgebra> {
    let p = field.p();
    if p > DEFAULT_DIM_CAP {
        return Err(Error::DimensionCapExceeded { dim: p, cap: DEFAULT_DIM_CAP });
    }
    let d = p as usize;
    let labels = (0..d)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x{i}"),
        })
        .collect();
    let alg = FiniteCommAlgebra::from_fn(field, labels, (1..d).collect(), |i, j| {
        let mut v = vec![0; d];
        if i + j < d {
            v[i + j] = 1;
        }
        v
    })?;
    Ok(PdAlgebra::with_zero_pmap(alg))
}

/// Exponent vectors of the truncated divided-power algebra, in basis order
/// (mixed radix, first variable fastest).
#[derive(Debug, Clone)]
pub struct DividedPowerShape {
    pub bounds: Vec<u64>,
}

impl DividedPowerShape {
    pub fn dim(&self) -> usize {
        self.bounds.iter().product::<u64>() as usize
    }

    pub fn exponents(&self, mut index: usize) -> Vec<u64> {
        self.bounds
            .iter()
            .map(|&b| {
                let e = index as u64 % b;
                index /= b as usize;
                e
            })
            .collect()
    }

    /// `None` when some exponent is out of range.
    pub fn index(&self, exps: &[u64]) -> Option<usize> {
        let mut idx = 0usize;
        let mut stride = 1usize;
        for (&e, &b) in exps.iter().zip(&self.bounds) {
            if e >= b {
                return None;
            }
            idx += e as usize * stride;
            stride *= b as usize;
        }
        Some(idx)
    }

    pub fn label(&self, exps: &[u64]) -> String {
        let single = self.bounds.len() == 1;
        let mut s = String::new();
        for (i, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let var = if single { "x".to_string() } else { format!("x{}", i + 1) };
            s.push_str(&var);
            if e > 1 {
                s.push_str(&format!("({e})"));
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }
}

/// The truncated divided-power algebra O(n; m) with `n = m.len()`.
pub fn divided_power_algebra(field: Fp, m: &[u32]) -> Result<PdAlgebra> {
    divided_power_algebra_capped(field, m, DEFAULT_DIM_CAP)
}

pub fn divided_power_algebra_capped(field: Fp, m: &[u32], cap: u64) -> Result<PdAlgebra> {
    let p = field.p();
    if m.is_empty() || m.contains(&0) {
        return Err(Error::InvalidAlgebra("O(n; m) needs n ≥ 1 and every m_i ≥ 1".into()));
    }
    let mut bounds = Vec::with_capacity(m.len());
    let mut dim: u64 = 1;
    for &mi in m {
        let b = p.checked_pow(mi).filter(|&b| b <= cap);
        let Some(b) = b else {
            return Err(Error::DimensionCapExceeded { dim: u64::MAX, cap });
        };
        dim = dim.saturating_mul(b);
        bounds.push(b);
    }
    if dim > cap {
        return Err(Error::DimensionCapExceeded { dim, cap });
    }
    let shape = DividedPowerShape { bounds };
    let d = shape.dim();
    let exps: Vec<Vec<u64>> = (0..d).map(|i| shape.exponents(i)).collect();
    let labels = exps.iter().map(|e| shape.label(e)).collect();
    let alg = FiniteCommAlgebra::from_fn(field, labels, (1..d).collect(), |i, j| {
        let mut v = vec![0; d];
        let sum: Vec<u64> = exps[i].iter().zip(&exps[j]).map(|(a, b)| a + b).collect();
        if let Some(k) = shape.index(&sum) {
            v[k] = exps[i].iter().zip(&exps[j]).fold(1, |acc, (&a, &b)| field.mul(acc, binom_mod_p(a + b, a, field)));
        }
        v
    })?;
    let images = (0..d)
        .map(|i| {
            let mut v = vec![0; d];
            let e = &exps[i];
            let support: Vec<usize> = (0..e.len()).filter(|&t| e[t] > 0).collect();
            if let [t] = support[..] {
                let r = e[t];
                let mut target = vec![0; e.len()];
                target[t] = p * r;
                if let Some(k) = shape.index(&target) {
                    v[k] = dp_coeff(field, r);
                }
            }
            v
        })
        .collect();
    PdAlgebra::new(alg, images)
}

/// Labels of the generators `x_1, ..., x_n` (or `x` when n = 1) in O(n; m).
pub fn divided_power_generators(pd: &PdAlgebra, n: usize) -> Vec<Vec<u64>> {
    let labels: Vec<String> = if n == 1 { vec!["x".into()] } else { (1..=n).map(|i| format!("x{i}")).collect() };
    labels
        .iter()
        .map(|l| pd.algebra().basis_vec(pd.algebra().index_of(l).expect("generator label exists")))
        .collect()
}
