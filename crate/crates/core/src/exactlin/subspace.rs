use super::{Fp, Matrix};
use crate::error::{Error, Result};

/// A subspace of F_p^n stored by its canonical RREF basis.
///
/// Two subspaces are equal iff their bases are equal, so `PartialEq` is
/// subspace equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    field: Fp,
    ambient: usize,
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Fp, ambient: usize) -> Self {
        Subspace { field, ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: Fp, ambient: usize) -> Self {
        let basis = (0..ambient).map(|i| super::unit_vec(ambient, i)).collect();
        Subspace { field, ambient, basis, pivots: (0..ambient).collect() }
    }

    /// Span of arbitrary vectors (panics on length mismatch; see [`Subspace::try_span`]).
    pub fn span(field: Fp, ambient: usize, vectors: &[Vec<u64>]) -> Self {
        Self::try_span(field, ambient, vectors).expect("vector length matches ambient dimension")
    }

    pub fn try_span(field: Fp, ambient: usize, vectors: &[Vec<u64>]) -> Result<Self> {
        if vectors.is_empty() {
            return Ok(Self::zero(field, ambient));
        }
        let m = Matrix::from_rows(field, ambient, vectors)?;
        let (red, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| red.row(i).to_vec()).collect();
        Ok(Subspace { field, ambient, basis, pivots })
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Number of elements, `p^dim`, saturating at `u64::MAX`.
    pub fn cardinality(&self) -> u64 {
        self.field.p().checked_pow(self.dim() as u32).unwrap_or(u64::MAX)
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        if self.field != other.field {
            return Err(Error::ModulusMismatch);
        }
        Ok(())
    }

    /// Canonical representative of `v + U`: the pivot coordinates are cleared.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.ambient, "vector length matches ambient dimension");
        let f = self.field;
        let mut w: Vec<u64> = v.iter().map(|&x| f.reduce(x)).collect();
        for (b, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = w[pc];
            if c != 0 {
                f.axpy(&mut w, f.neg(c), b);
            }
        }
        w
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        super::is_zero(&self.reduce(v))
    }

    /// Coordinates of `v` in the RREF basis, or `None` if `v` is not in the subspace.
    pub fn coords(&self, v: &[u64]) -> Option<Vec<u64>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| self.field.reduce(v[pc])).collect())
    }

    pub fn combine(&self, coeffs: &[u64]) -> Vec<u64> {
        assert_eq!(coeffs.len(), self.dim());
        let mut v = vec![0; self.ambient];
        for (b, &c) in self.basis.iter().zip(coeffs) {
            self.field.axpy(&mut v, c, b);
        }
        v
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::try_span(self.field, self.ambient, &vs)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return Ok(Subspace::zero(self.field, self.ambient));
        }
        // Σ x_i u_i - Σ y_j v_j = 0; the x-part of the kernel gives the intersection.
        let f = self.field;
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().map(|v| f.neg_vec(v)));
        let m = Matrix::from_columns(f, self.ambient, &cols)?;
        let vecs: Vec<Vec<u64>> = m.kernel().basis().iter().map(|k| self.combine(&k[..a])).collect();
        Subspace::try_span(f, self.ambient, &vecs)
    }

    /// Standard basis vectors at the non-pivot columns: coset representatives
    /// completing this subspace to the ambient space.
    pub fn quotient_basis(&self) -> Vec<Vec<u64>> {
        let mut is_pivot = vec![false; self.ambient];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.ambient)
            .filter(|&c| !is_pivot[c])
            .map(|c| super::unit_vec(self.ambient, c))
            .collect()
    }

    /// Span of all products `u·v` of basis vectors under a bilinear, commutative
    /// multiplication. Only unordered pairs are formed when `self == other`.
    pub fn product_span<F>(&self, other: &Subspace, mul: F) -> Result<Subspace>
    where
        F: Fn(&[u64], &[u64]) -> Vec<u64>,
    {
        self.check(other)?;
        let same = self == other;
        let mut products = Vec::new();
        for (i, u) in self.basis.iter().enumerate() {
            let start = if same { i } else { 0 };
            for v in &other.basis[start..] {
                let w = mul(u, v);
                if w.len() != self.ambient {
                    return Err(Error::DimensionMismatch { expected: self.ambient, found: w.len() });
                }
                if !super::is_zero(&w) {
                    products.push(w);
                }
            }
        }
        Subspace::try_span(self.field, self.ambient, &products)
    }
}

/// The quotient `W / U` for subspaces `U ⊆ W` of a common ambient space.
///
/// Representatives are the RREF of `W`'s basis reduced modulo `U`; their pivots
/// avoid `U`'s pivots, which makes coordinates a plain read-off.
#[derive(Debug, Clone)]
pub struct QuotientSpace {
    top: Subspace,
    modulo: Subspace,
    reps: Subspace,
}

impl QuotientSpace {
    pub fn new(top: &Subspace, modulo: &Subspace) -> Result<Self> {
        top.check(modulo)?;
        if !modulo.is_subspace_of(top) {
            return Err(Error::NotASubspace);
        }
        let reduced: Vec<Vec<u64>> = top.basis.iter().map(|b| modulo.reduce(b)).collect();
        let reps = Subspace::try_span(top.field, top.ambient, &reduced)?;
        Ok(QuotientSpace { top: top.clone(), modulo: modulo.clone(), reps })
    }

    pub fn dim(&self) -> usize {
        self.reps.dim()
    }

    pub fn top(&self) -> &Subspace {
        &self.top
    }

    pub fn modulo(&self) -> &Subspace {
        &self.modulo
    }

    /// Canonical coset representatives, one per quotient coordinate.
    pub fn reps(&self) -> &[Vec<u64>] {
        self.reps.basis()
    }

    /// Coordinates of the class of `v`; `None` if `v` is not in the top space.
    pub fn coords(&self, v: &[u64]) -> Option<Vec<u64>> {
        if !self.top.contains(v) {
            return None;
        }
        let r = self.modulo.reduce(v);
        Some(self.reps.pivots().iter().map(|&pc| r[pc]).collect())
    }

    pub fn lift(&self, coords: &[u64]) -> Vec<u64> {
        self.reps.combine(coords)
    }

    pub fn same_class(&self, a: &[u64], b: &[u64]) -> bool {
        let d = self.top.field.sub_vec(a, b);
        self.modulo.contains(&d)
    }
}
