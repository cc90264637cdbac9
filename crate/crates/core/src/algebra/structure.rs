use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exactlin::{is_zero, unit_vec, Fp, Matrix, Subspace};
use crate::report::{Check, Report};

/// Sparse coordinate vector: `(basis index, nonzero coefficient)` pairs.
pub type SparseVec = Vec<(usize, u64)>;

/// A finite-dimensional commutative F_p-algebra given by structure constants,
/// together with a splitting `A = A_0 ⊕ A_+` along basis indices.
///
/// Basis element 0 is the unit. The zero algebra has dimension 0 and no basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCommAlgebra {
    field: Fp,
    labels: Vec<String>,
    table: Vec<Vec<SparseVec>>,
    plus: Vec<usize>,
    is_plus: Vec<bool>,
}

fn to_sparse(field: Fp, v: &[u64]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter_map(|(k, &c)| {
            let c = field.reduce(c);
            (c != 0).then_some((k, c))
        })
        .collect()
}

impl FiniteCommAlgebra {
    /// Builds an algebra from a product rule on basis indices.
    ///
    /// Only shape is validated here; the ring axioms are checked by
    /// [`FiniteCommAlgebra::verify_axioms`].
    pub fn from_fn<F>(field: Fp, labels: Vec<String>, plus: Vec<usize>, product: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Vec<u64>,
    {
        let dim = labels.len();
        let mut is_plus = vec![false; dim];
        for &i in &plus {
            if i >= dim {
                return Err(Error::InvalidAlgebra(format!("plus index {i} out of range")));
            }
            if i == 0 {
                return Err(Error::InvalidAlgebra("the unit cannot lie in A_+".into()));
            }
            if is_plus[i] {
                return Err(Error::InvalidAlgebra(format!("plus index {i} repeated")));
            }
            is_plus[i] = true;
        }
        let mut table = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut row = Vec::with_capacity(dim);
            for j in 0..dim {
                let v = product(i, j);
                if v.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
                }
                row.push(to_sparse(field, &v));
            }
            table.push(row);
        }
        let plus = (0..dim).filter(|&i| is_plus[i]).collect();
        Ok(FiniteCommAlgebra { field, labels, table, plus, is_plus })
    }

    /// The zero ring (dimension 0, where 1 = 0).
    pub fn zero_ring(field: Fp) -> Self {
        FiniteCommAlgebra { field, labels: Vec::new(), table: Vec::new(), plus: Vec::new(), is_plus: Vec::new() }
    }

    /// The ground field k itself.
    pub fn ground_field(field: Fp) -> Self {
        Self::from_fn(field, vec!["1".into()], vec![], |_, _| vec![1]).expect("k is well formed")
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Indices of the basis elements spanning A_+, increasing.
    pub fn plus_indices(&self) -> &[usize] {
        &self.plus
    }

    pub fn zero_part_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| !self.is_plus[i]).collect()
    }

    pub fn is_plus_index(&self, i: usize) -> bool {
        self.is_plus[i]
    }

    pub fn zero_part_dim(&self) -> usize {
        self.dim() - self.plus.len()
    }

    /// `A_0 = k`: every basis element except the unit lies in A_+.
    pub fn is_augmented(&self) -> bool {
        self.dim() >= 1 && self.zero_part_dim() == 1
    }

    pub fn is_zero_ring(&self) -> bool {
        self.dim() == 0
    }

    pub fn one(&self) -> Vec<u64> {
        if self.dim() == 0 {
            return Vec::new();
        }
        unit_vec(self.dim(), 0)
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.dim()]
    }

    pub fn basis_vec(&self, i: usize) -> Vec<u64> {
        unit_vec(self.dim(), i)
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i][j]
    }

    pub fn basis_product_vec(&self, i: usize, j: usize) -> Vec<u64> {
        let mut v = self.zero();
        for &(k, c) in &self.table[i][j] {
            v[k] = c;
        }
        v
    }

    pub fn check_elem(&self, u: &[u64]) -> Result<()> {
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: u.len() });
        }
        Ok(())
    }

    pub fn mul(&self, u: &[u64], v: &[u64]) -> Vec<u64> {
        debug_assert_eq!(u.len(), self.dim());
        debug_assert_eq!(v.len(), self.dim());
        let f = self.field;
        let mut out = self.zero();
        for (i, &a) in u.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let row = &self.table[i];
            for (j, &b) in v.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = f.mul(a, b);
                for &(k, c) in &row[j] {
                    out[k] = f.add(out[k], f.mul(ab, c));
                }
            }
        }
        out
    }

    /// Checked product: both operands must have length `dim`.
    pub fn multiply(&self, u: &[u64], v: &[u64]) -> Result<Vec<u64>> {
        self.check_elem(u)?;
        self.check_elem(v)?;
        Ok(self.mul(u, v))
    }

    pub fn pow(&self, u: &[u64], n: u64) -> Vec<u64> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, u);
        }
        acc
    }

    /// `[u, u^2, ..., u^n]`
    pub fn powers(&self, u: &[u64], n: usize) -> Vec<Vec<u64>> {
        let mut out: Vec<Vec<u64>> = Vec::with_capacity(n);
        for k in 0..n {
            let next = if k == 0 { u.to_vec() } else { self.mul(&out[k - 1], u) };
            out.push(next);
        }
        out
    }

    /// Matrix of `v ↦ u·v`; column `j` is `u·e_j`.
    pub fn left_mul_matrix(&self, u: &[u64]) -> Matrix {
        let cols: Vec<Vec<u64>> = (0..self.dim()).map(|j| self.mul(u, &self.basis_vec(j))).collect();
        Matrix::from_columns(self.field, self.dim(), &cols).expect("columns have length dim")
    }

    pub fn basis_mul_matrix(&self, i: usize) -> Matrix {
        let cols: Vec<Vec<u64>> = (0..self.dim()).map(|j| self.basis_product_vec(i, j)).collect();
        Matrix::from_columns(self.field, self.dim(), &cols).expect("columns have length dim")
    }

    pub fn in_plus(&self, u: &[u64]) -> bool {
        u.iter().enumerate().all(|(i, &c)| c == 0 || self.is_plus[i])
    }

    /// Component of `u` along A_+.
    pub fn plus_part(&self, u: &[u64]) -> Vec<u64> {
        u.iter().enumerate().map(|(i, &c)| if self.is_plus[i] { c } else { 0 }).collect()
    }

    pub fn zero_part(&self, u: &[u64]) -> Vec<u64> {
        u.iter().enumerate().map(|(i, &c)| if self.is_plus[i] { 0 } else { c }).collect()
    }

    pub fn plus_basis(&self) -> Vec<Vec<u64>> {
        self.plus.iter().map(|&i| self.basis_vec(i)).collect()
    }

    pub fn plus_subspace(&self) -> Subspace {
        Subspace::span(self.field, self.dim(), &self.plus_basis())
    }

    pub fn zero_part_subspace(&self) -> Subspace {
        let vs: Vec<Vec<u64>> = self.zero_part_indices().into_iter().map(|i| self.basis_vec(i)).collect();
        Subspace::span(self.field, self.dim(), &vs)
    }

    /// Span of all products of pairs of A_+ basis elements.
    pub fn plus_squared(&self) -> Subspace {
        let mut vs = Vec::new();
        for (a, &i) in self.plus.iter().enumerate() {
            for &j in &self.plus[a..] {
                vs.push(self.basis_product_vec(i, j));
            }
        }
        Subspace::span(self.field, self.dim(), &vs)
    }

    /// Smallest ideal containing the given vectors.
    pub fn ideal_generated_by(&self, gens: &[Vec<u64>]) -> Subspace {
        let mut vs = Vec::new();
        for g in gens {
            for j in 0..self.dim() {
                vs.push(self.mul(g, &self.basis_vec(j)));
            }
        }
        Subspace::span(self.field, self.dim(), &vs)
    }

    /// Whether `sub` is closed under multiplication by every basis element.
    pub fn ideal_witness(&self, sub: &Subspace) -> Option<String> {
        for b in sub.basis() {
            for j in 0..self.dim() {
                let w = self.mul(&self.basis_vec(j), b);
                if !sub.contains(&w) {
                    return Some(format!("{} · ({}) = {} leaves the subspace", self.label(j), self.fmt(b), self.fmt(&w)));
                }
            }
        }
        None
    }

    /// Human-readable element, e.g. `2 x2 + x`.
    pub fn fmt(&self, u: &[u64]) -> String {
        fmt_combination(u, &self.labels)
    }

    /// Checks unit, commutativity, associativity on all basis triples, that A_0
    /// is a subalgebra and A_+ an ideal, and `x^p = 0` on the A_+ basis.
    pub fn verify_axioms(&self) -> Report {
        let mut report = Report::new();
        let d = self.dim();
        if d == 0 {
            report.push(Check::pass("zero-ring").note("dimension 0: every axiom holds vacuously"));
            return report;
        }
        let unit = (0..d).find_map(|j| {
            let v = self.basis_product_vec(0, j);
            (v != self.basis_vec(j)).then(|| format!("1 · {} = {}", self.label(j), self.fmt(&v)))
        });
        report.push(Check::from_witness("unit", unit));

        let comm = (0..d).find_map(|i| {
            (i..d).find_map(|j| {
                (self.table[i][j] != self.table[j][i]).then(|| format!("{} · {} != {} · {}", self.label(i), self.label(j), self.label(j), self.label(i)))
            })
        });
        report.push(Check::from_witness("commutativity", comm));

        let mut assoc = None;
        'outer: for i in 0..d {
            for j in 0..d {
                let ij = self.basis_product_vec(i, j);
                if is_zero(&ij) && self.table[j].iter().all(|s| s.is_empty()) {
                    continue;
                }
                for k in 0..d {
                    let left = self.mul(&ij, &self.basis_vec(k));
                    let jk = self.basis_product_vec(j, k);
                    let right = self.mul(&self.basis_vec(i), &jk);
                    if left != right {
                        assoc = Some(format!(
                            "({} {}) {} = {} but {} ({} {}) = {}",
                            self.label(i),
                            self.label(j),
                            self.label(k),
                            self.fmt(&left),
                            self.label(i),
                            self.label(j),
                            self.label(k),
                            self.fmt(&right)
                        ));
                        break 'outer;
                    }
                }
            }
        }
        report.push(Check::from_witness("associativity", assoc).dim("basis-triples", d * d * d));

        let zero_idx = self.zero_part_indices();
        let sub0 = zero_idx.iter().find_map(|&i| {
            zero_idx.iter().find_map(|&j| {
                let v = self.basis_product_vec(i, j);
                (!self.zero_part(&v).eq(&v)).then(|| format!("{} · {} = {} leaves A_0", self.label(i), self.label(j), self.fmt(&v)))
            })
        });
        report.push(Check::from_witness("A0-subalgebra", sub0));

        let ideal = self.plus.iter().find_map(|&i| {
            (0..d).find_map(|j| {
                let v = self.basis_product_vec(i, j);
                (!self.in_plus(&v)).then(|| format!("{} · {} = {} leaves A_+", self.label(i), self.label(j), self.fmt(&v)))
            })
        });
        report.push(Check::from_witness("A+-ideal", ideal));

        let p = self.p();
        let nil = self.plus.iter().find_map(|&i| {
            let v = self.pow(&self.basis_vec(i), p);
            (!is_zero(&v)).then(|| format!("{}^{p} = {}", self.label(i), self.fmt(&v)))
        });
        report.push(Check::from_witness("x^p=0", nil).note("basis check suffices: (x+y)^p = x^p + y^p in characteristic p"));
        report
    }

    /// Errors with the first failed axiom.
    pub fn validate(&self) -> Result<()> {
        let r = self.verify_axioms();
        let first = r.failures().next().map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()));
        match first {
            Some(msg) => Err(Error::InvalidAlgebra(msg)),
            None => Ok(()),
        }
    }
}

pub fn fmt_combination(u: &[u64], labels: &[String]) -> String {
    let mut s = String::new();
    for (i, &c) in u.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if !s.is_empty() {
            s.push_str(" + ");
        }
        if c == 1 {
            s.push_str(&labels[i]);
        } else {
            let _ = write!(s, "{c} {}", labels[i]);
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}
