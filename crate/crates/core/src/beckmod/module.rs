use std::sync::Arc;

use crate::algebra::{fmt_combination, PdAlgebra};
use crate::error::{Error, Result};
use crate::exactlin::{is_zero, Matrix, Subspace};
use crate::report::{Check, Report};
use crate::sampling::{random_combination, Sampling};

/// A Beck module over `(A, π)`: an A-module `M` with action matrices `ρ(e_i)`
/// and an F_p-linear map `P = π_M` killing `A_+·M`.
#[derive(Debug, Clone)]
pub struct BeckModule {
    algebra: Arc<PdAlgebra>,
    labels: Vec<String>,
    action: Vec<Matrix>,
    pi: Matrix,
}

impl PartialEq for BeckModule {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.action == other.action && self.pi == other.pi
    }
}

pub(crate) fn same_algebra(a: &Arc<PdAlgebra>, b: &Arc<PdAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl BeckModule {
    /// Shape-checked constructor; the module axioms are checked by [`verify_beck_module`].
    pub fn new(algebra: Arc<PdAlgebra>, labels: Vec<String>, action: Vec<Matrix>, pi: Matrix) -> Result<Self> {
        let m = labels.len();
        if action.len() != algebra.dim() {
            return Err(Error::DimensionMismatch { expected: algebra.dim(), found: action.len() });
        }
        for r in action.iter().chain(std::iter::once(&pi)) {
            if r.shape() != (m, m) {
                return Err(Error::DimensionMismatch { expected: m, found: r.rows().max(r.cols()) });
            }
            if r.field() != algebra.field() {
                return Err(Error::ModulusMismatch);
            }
        }
        Ok(BeckModule { algebra, labels, action, pi })
    }

    pub fn algebra(&self) -> &Arc<PdAlgebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn action(&self, i: usize) -> &Matrix {
        &self.action[i]
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.action
    }

    pub fn pi(&self) -> &Matrix {
        &self.pi
    }

    /// `ρ(a) = Σ a_i ρ(e_i)`.
    pub fn act_matrix(&self, a: &[u64]) -> Matrix {
        let f = self.algebra.field();
        let mut out = Matrix::zeros(f, self.dim(), self.dim());
        for (i, &c) in a.iter().enumerate() {
            if c != 0 {
                out = out.add(&self.action[i].scale(c));
            }
        }
        out
    }

    pub fn act(&self, a: &[u64], m: &[u64]) -> Vec<u64> {
        let f = self.algebra.field();
        let mut out = vec![0; self.dim()];
        for (i, &c) in a.iter().enumerate() {
            if c != 0 {
                f.axpy(&mut out, c, &self.action[i].mul_vec(m));
            }
        }
        out
    }

    pub fn apply_pi(&self, m: &[u64]) -> Vec<u64> {
        self.pi.mul_vec(m)
    }

    pub fn fmt(&self, m: &[u64]) -> String {
        fmt_combination(m, &self.labels)
    }

    /// The same module with `P` replaced.
    pub fn with_pi(&self, pi: Matrix) -> Result<Self> {
        BeckModule::new(self.algebra.clone(), self.labels.clone(), self.action.clone(), pi)
    }
}

/// `(A, 0)`: `A` acting on itself with the zero map.
pub fn trivial_module(algebra: &Arc<PdAlgebra>) -> BeckModule {
    let a = algebra.algebra();
    let action = (0..a.dim()).map(|i| a.basis_mul_matrix(i)).collect();
    let pi = Matrix::zeros(a.field(), a.dim(), a.dim());
    BeckModule::new(algebra.clone(), a.labels().to_vec(), action, pi).expect("shapes agree")
}

pub fn zero_module(algebra: &Arc<PdAlgebra>) -> BeckModule {
    let f = algebra.field();
    let action = vec![Matrix::zeros(f, 0, 0); algebra.dim()];
    BeckModule::new(algebra.clone(), Vec::new(), action, Matrix::zeros(f, 0, 0)).expect("shapes agree")
}

/// `(U, π|_U)` for an A-stable, π-stable subspace `U ⊆ A_+` on which π is additive.
pub fn module_from_pmap_restriction(algebra: &Arc<PdAlgebra>, u: &Subspace, sampling: &Sampling) -> Result<BeckModule> {
    let a = algebra.algebra();
    let f = a.field();
    let d = a.dim();
    if u.ambient_dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: u.ambient_dim() });
    }
    if let Some(b) = u.basis().iter().find(|b| !a.in_plus(b)) {
        return Err(Error::NotInPlus(b.clone()));
    }
    if let Some(w) = a.ideal_witness(u) {
        return Err(Error::NotStable(w));
    }
    for b in u.basis() {
        let v = algebra.pi_unchecked(b);
        if !u.contains(&v) {
            return Err(Error::NotStable(format!("π({}) = {} leaves the subspace", a.fmt(b), a.fmt(&v))));
        }
    }
    let basis = u.basis();
    let pairs = u.cardinality().saturating_mul(u.cardinality());
    let check = |x: &[u64], y: &[u64]| -> Result<()> {
        let c = algebra.correction(x, y);
        if is_zero(&c) {
            Ok(())
        } else {
            Err(Error::NotAdditive(format!("x = {}, y = {}: correction {}", a.fmt(x), a.fmt(y), a.fmt(&c))))
        }
    };
    if pairs <= sampling.exhaustive_cap {
        let all = Sampling { exhaustive_cap: u64::MAX, ..*sampling };
        let mut elems = Vec::new();
        crate::sampling::sweep(f, d, basis, &all, 0, |x| {
            elems.push(x.to_vec());
            true
        });
        for x in &elems {
            for y in &elems {
                check(x, y)?;
            }
        }
    } else {
        // basis pairs first: they give the most readable witnesses
        for x in basis {
            for y in basis {
                check(x, y)?;
            }
        }
        let mut rng = sampling.rng(31);
        for _ in 0..sampling.samples {
            let x = random_combination(f, d, basis, &mut rng);
            let y = random_combination(f, d, basis, &mut rng);
            check(&x, &y)?;
        }
    }
    let coords = |v: &[u64]| u.coords(v).expect("stable subspace");
    let action = (0..d)
        .map(|i| {
            let cols: Vec<Vec<u64>> = basis.iter().map(|b| coords(&a.mul(&a.basis_vec(i), b))).collect();
            Matrix::from_columns(f, basis.len(), &cols).expect("square")
        })
        .collect();
    let pi_cols: Vec<Vec<u64>> = basis.iter().map(|b| coords(&algebra.pi_unchecked(b))).collect();
    let pi = Matrix::from_columns(f, basis.len(), &pi_cols)?;
    let labels = basis.iter().map(|b| a.fmt(b)).collect();
    BeckModule::new(algebra.clone(), labels, action, pi)
}

/// Checks `ρ(1) = id`, `ρ(e_i)ρ(e_j) = ρ(e_i e_j)`, `P ρ(a) = 0` for `a ∈ A_+`
/// and `P ρ(a_0) = ρ(a_0^p) P` for `a_0 ∈ A_0`, all on basis elements.
pub fn verify_beck_module(m: &BeckModule) -> Report {
    let pd = m.algebra();
    let a = pd.algebra();
    let f = a.field();
    let n = m.dim();
    let mut report = Report::new();
    if a.dim() == 0 {
        report.push(Check::new("zero-ring-module", n == 0).note("a module over the zero ring is zero"));
        return report;
    }
    let unit = (m.action(0) != &Matrix::identity(f, n)).then(|| "ρ(1) is not the identity".to_string());
    report.push(Check::from_witness("unit", unit).dim("module", n));

    let mut witness = None;
    'outer: for i in 0..a.dim() {
        for j in i..a.dim() {
            let lhs = m.action(i).matmul(m.action(j));
            let rhs = m.act_matrix(&a.basis_product_vec(i, j));
            if lhs != rhs {
                witness = Some(format!("ρ({})ρ({}) != ρ({} · {})", a.label(i), a.label(j), a.label(i), a.label(j)));
                break 'outer;
            }
        }
    }
    report.push(Check::from_witness("multiplicative", witness));

    let kills = a.plus_indices().iter().find_map(|&i| {
        let prod = m.pi().matmul(m.action(i));
        (!prod.is_zero()).then(|| {
            let k = (0..n).find(|&k| !is_zero(&prod.column(k))).expect("nonzero column");
            format!("a = {}, m = {}: P(a·m) = {}", a.label(i), m.labels[k], m.fmt(&prod.column(k)))
        })
    });
    report.push(Check::from_witness("P-kills-A+", kills));

    let zero_part = a.zero_part_indices();
    let twisted = zero_part.iter().find_map(|&j| {
        let lhs = m.pi().matmul(m.action(j));
        let rhs = m.act_matrix(&a.pow(&a.basis_vec(j), f.p())).matmul(m.pi());
        (lhs != rhs).then(|| format!("P ρ({0}) != ρ({0}^p) P", a.label(j)))
    });
    report.push(Check::from_witness("P-twisted-A0", twisted).dim("A0", zero_part.len()));
    report
}

/// Linear maps `F: M → N` with `F ρ_M(e_i) = ρ_N(e_i) F` and `F P_M = P_N F`.
pub fn hom_beck(m: &BeckModule, n: &BeckModule) -> Result<Vec<Matrix>> {
    if !same_algebra(m.algebra(), n.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let f = m.algebra().field();
    let (dm, dn) = (m.dim(), n.dim());
    let vars = dm * dn;
    let mut rows = Vec::new();
    let pairs = m.actions().iter().zip(n.actions()).chain(std::iter::once((m.pi(), n.pi())));
    for (rm, rn) in pairs {
        // (F rm - rn F)[r][c] = Σ_k F[r][k] rm[k][c] - Σ_k rn[r][k] F[k][c]
        for r in 0..dn {
            for c in 0..dm {
                let mut row = vec![0u64; vars];
                for k in 0..dm {
                    row[r * dm + k] = f.add(row[r * dm + k], rm[(k, c)]);
                }
                for k in 0..dn {
                    row[k * dm + c] = f.sub(row[k * dm + c], rn[(r, k)]);
                }
                if !is_zero(&row) {
                    rows.push(row);
                }
            }
        }
    }
    let system = Matrix::from_rows(f, vars, &rows)?;
    let basis: Vec<Matrix> = system
        .kernel()
        .basis()
        .iter()
        .map(|v| Matrix::from_rows(f, dm, &v.chunks(dm.max(1)).take(dn).map(|c| c.to_vec()).collect::<Vec<_>>()).expect("shape"))
        .collect();
    for h in &basis {
        debug_assert!(is_beck_hom(m, n, h));
    }
    Ok(basis)
}

pub fn is_beck_hom(m: &BeckModule, n: &BeckModule, h: &Matrix) -> bool {
    h.shape() == (n.dim(), m.dim())
        && m.actions().iter().zip(n.actions()).all(|(rm, rn)| h.matmul(rm) == rn.matmul(h))
        && h.matmul(m.pi()) == n.pi().matmul(h)
}

/// Report on whether `h` is a Beck-module map `M → N`, naming the first failing generator.
pub fn check_beck_hom(name: &str, m: &BeckModule, n: &BeckModule, h: &Matrix) -> Check {
    if h.shape() != (n.dim(), m.dim()) {
        return Check::fail(name, format!("shape {:?}, expected {:?}", h.shape(), (n.dim(), m.dim())));
    }
    let a = m.algebra().algebra();
    let bad_action = (0..a.dim()).find(|&i| h.matmul(m.action(i)) != n.action(i).matmul(h));
    let witness = match bad_action {
        Some(i) => Some(format!("does not commute with {}", a.label(i))),
        None => (h.matmul(m.pi()) != n.pi().matmul(h)).then(|| "does not commute with P".to_string()),
    };
    Check::from_witness(name, witness)
}
