//! Derivations `D: A → M` as matrices whose column `i` is `D(e_i)`:
//! ordinary, Beck (compatible with π and P) and special.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{reconstruct_gamma, PdAlgebra};
use crate::beckmod::{trivial_module, BeckModule};
use crate::error::{Error, Result};
use crate::exactlin::{is_zero, Matrix, Subspace};
use crate::report::{Check, Report};
use crate::sampling::{sweep, Sampling};

/// Elements of A_+ up to which Beck identities are revalidated exhaustively.
pub const REVALIDATION_CAP: u64 = 729;

fn var(md: usize, i: usize, r: usize) -> usize {
    i * md + r
}

fn unflatten(m: &BeckModule, v: &[u64]) -> Matrix {
    let (md, d) = (m.dim(), m.algebra().dim());
    let cols: Vec<Vec<u64>> = (0..d).map(|i| v[i * md..(i + 1) * md].to_vec()).collect();
    Matrix::from_columns(m.algebra().field(), md, &cols).expect("shape")
}

fn leibniz_rows(m: &BeckModule) -> Vec<Vec<u64>> {
    let a = m.algebra().algebra();
    let f = a.field();
    let (md, d) = (m.dim(), a.dim());
    let vars = md * d;
    let mut rows = Vec::new();
    if d == 0 {
        return rows;
    }
    for r in 0..md {
        let mut row = vec![0; vars];
        row[var(md, 0, r)] = 1;
        rows.push(row);
    }
    for i in 0..d {
        for j in i..d {
            let prod = a.basis_product(i, j);
            let (ri, rj) = (m.action(i), m.action(j));
            for r in 0..md {
                let mut row = vec![0; vars];
                for &(k, c) in prod {
                    row[var(md, k, r)] = f.add(row[var(md, k, r)], c);
                }
                for s in 0..md {
                    row[var(md, j, s)] = f.sub(row[var(md, j, s)], ri[(r, s)]);
                    row[var(md, i, s)] = f.sub(row[var(md, i, s)], rj[(r, s)]);
                }
                if !is_zero(&row) {
                    rows.push(row);
                }
            }
        }
    }
    rows
}

/// Rows of the linear conditions `D(π(a)) - P D(a) + a^{p-1} D(a) = 0`.
fn beck_rows(m: &BeckModule, a_elem: &[u64]) -> Vec<Vec<u64>> {
    let pd = m.algebra();
    let a = pd.algebra();
    let f = a.field();
    let (md, d) = (m.dim(), a.dim());
    let vars = md * d;
    let pa = pd.pi_unchecked(a_elem);
    // coefficient of D(a)[s] in output r: -P[r][s] + ρ(a^{p-1})[r][s]
    let twist = m.act_matrix(&a.pow(a_elem, f.p() - 1)).sub(m.pi());
    let mut rows = Vec::new();
    for r in 0..md {
        let mut row = vec![0; vars];
        for (k, &c) in pa.iter().enumerate() {
            if c != 0 {
                row[var(md, k, r)] = f.add(row[var(md, k, r)], c);
            }
        }
        for s in 0..md {
            let t = twist[(r, s)];
            if t == 0 {
                continue;
            }
            for (k, &c) in a_elem.iter().enumerate() {
                if c != 0 {
                    row[var(md, k, s)] = f.add(row[var(md, k, s)], f.mul(t, c));
                }
            }
        }
        if !is_zero(&row) {
            rows.push(row);
        }
    }
    rows
}

fn solve(m: &BeckModule, rows: &[Vec<u64>]) -> Vec<Matrix> {
    let f = m.algebra().field();
    let vars = m.dim() * m.algebra().dim();
    let sys = Matrix::from_rows(f, vars, rows).expect("row length");
    sys.kernel().basis().iter().map(|v| unflatten(m, v)).collect()
}

/// Basis of `Der(A, M)`.
pub fn derivations(m: &BeckModule) -> Vec<Matrix> {
    solve(m, &leibniz_rows(m))
}

/// `D(a)` for a derivation matrix.
pub fn apply(d: &Matrix, a: &[u64]) -> Vec<u64> {
    d.mul_vec(a)
}

/// First Leibniz failure of `d` on a basis pair, if any.
pub fn leibniz_witness(m: &BeckModule, d: &Matrix) -> Option<String> {
    let a = m.algebra().algebra();
    if a.dim() > 0 && !is_zero(&d.column(0)) {
        return Some(format!("D(1) = {}", m.fmt(&d.column(0))));
    }
    for i in 0..a.dim() {
        for j in i..a.dim() {
            let lhs = d.mul_vec(&a.basis_product_vec(i, j));
            let f = a.field();
            let rhs = f.add_vec(&m.action(i).mul_vec(&d.column(j)), &m.action(j).mul_vec(&d.column(i)));
            if lhs != rhs {
                return Some(format!("D({} {}) = {} but Leibniz gives {}", a.label(i), a.label(j), m.fmt(&lhs), m.fmt(&rhs)));
            }
        }
    }
    None
}

/// Both sides of the Beck identity at `a`: `(D(π(a)), P D(a) - a^{p-1} D(a))`.
pub fn beck_sides(m: &BeckModule, d: &Matrix, a_elem: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let pd = m.algebra();
    let a = pd.algebra();
    let f = a.field();
    let lhs = d.mul_vec(&pd.pi_unchecked(a_elem));
    let da = d.mul_vec(a_elem);
    let rhs = f.sub_vec(&m.apply_pi(&da), &m.act(&a.pow(a_elem, f.p() - 1), &da));
    (lhs, rhs)
}

/// Checks `D(1) = 0`, Leibniz on basis pairs and the Beck identity on all of
/// A_+ (or on samples when A_+ has more than [`REVALIDATION_CAP`] elements).
pub fn audit_beck_derivation(m: &BeckModule, d: &Matrix, sampling: &Sampling) -> Report {
    let a = m.algebra().algebra();
    let mut report = Report::new();
    let unit = (a.dim() > 0 && !is_zero(&d.column(0))).then(|| format!("D(1) = {}", m.fmt(&d.column(0))));
    report.push(Check::from_witness("d-unit", unit));
    report.push(Check::from_witness("leibniz", leibniz_witness(m, d)).dim("basis-pairs", a.dim() * (a.dim() + 1) / 2));
    let s = Sampling { exhaustive_cap: REVALIDATION_CAP, ..*sampling };
    let mut witness = None;
    let cov = sweep(a.field(), a.dim(), &a.plus_basis(), &s, 47, |x| {
        let (lhs, rhs) = beck_sides(m, d, x);
        if lhs != rhs {
            witness = Some(format!("a = {}: D(π(a)) = {} but P D(a) - a^(p-1) D(a) = {}", a.fmt(x), m.fmt(&lhs), m.fmt(&rhs)));
            return false;
        }
        true
    });
    report.push(
        Check::from_witness("beck-identity", witness)
            .dim("elements", cov.visited)
            .note(if cov.exhaustive { "exhaustive over A_+" } else { "sampled" }),
    );
    report
}

/// Outcome of revalidating the A_+-basis Beck constraints on many elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Revalidation {
    pub exhaustive: bool,
    pub elements: usize,
    /// Set when some element violated the identity although every basis
    /// element satisfied it; the basis was then recomputed with all checked
    /// elements as constraints.
    pub basis_insufficiency: Option<String>,
}

#[derive(Debug, Clone)]
pub struct BeckDerivations {
    pub basis: Vec<Matrix>,
    pub revalidation: Revalidation,
}

impl BeckDerivations {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn span(&self, m: &BeckModule) -> Subspace {
        span_of(m, &self.basis)
    }
}

/// The subspace of flattened derivation matrices spanned by `basis`.
pub fn span_of(m: &BeckModule, basis: &[Matrix]) -> Subspace {
    let vars = m.dim() * m.algebra().dim();
    let flat: Vec<Vec<u64>> = basis.iter().map(|d| (0..d.cols()).flat_map(|i| d.column(i)).collect()).collect();
    Subspace::span(m.algebra().field(), vars, &flat)
}

/// Basis of `Der_p(A, M)`: derivations with `D(π(a)) = P D(a) - a^{p-1} D(a)`
/// for `a ∈ A_+`.
///
/// The identity is imposed on the A_+ basis and then revalidated on every
/// element of A_+ (or on `sampling.samples` random elements when A_+ has more
/// than [`REVALIDATION_CAP`] elements).
pub fn beck_derivations(m: &BeckModule, sampling: &Sampling) -> BeckDerivations {
    let pd = m.algebra();
    let a = pd.algebra();
    let f = a.field();
    let mut rows = leibniz_rows(m);
    for &i in a.plus_indices() {
        rows.extend(beck_rows(m, &a.basis_vec(i)));
    }
    let mut basis = solve(m, &rows);

    let s = Sampling { exhaustive_cap: REVALIDATION_CAP, ..*sampling };
    let mut elements = Vec::new();
    let cov = sweep(f, a.dim(), &a.plus_basis(), &s, 41, |x| {
        elements.push(x.to_vec());
        true
    });
    let mut insufficiency = None;
    'search: for x in &elements {
        for d in &basis {
            let (lhs, rhs) = beck_sides(m, d, x);
            if lhs != rhs {
                insufficiency = Some(format!("a = {}: D(π(a)) = {} but P D(a) - a^(p-1) D(a) = {}", a.fmt(x), m.fmt(&lhs), m.fmt(&rhs)));
                break 'search;
            }
        }
    }
    if insufficiency.is_some() {
        for x in &elements {
            rows.extend(beck_rows(m, x));
        }
        basis = solve(m, &rows);
    }
    BeckDerivations {
        basis,
        revalidation: Revalidation { exhaustive: cov.exhaustive, elements: cov.visited, basis_insufficiency: insufficiency },
    }
}

/// Special derivations of `A`: Beck derivations into `(A, 0)`, together with a
/// report cross-checking `D(γ_n(x)) = γ_{n-1}(x) D(x)` for `n ≤ p` on A_+.
pub fn special_derivations(pd: &Arc<PdAlgebra>, sampling: &Sampling) -> (BeckDerivations, Report) {
    let m = trivial_module(pd);
    let beck = beck_derivations(&m, sampling);
    let mut report = Report::new();
    let a = pd.algebra();
    let f = a.field();
    let s = Sampling { exhaustive_cap: REVALIDATION_CAP, ..*sampling };
    let mut witness = None;
    let cov = sweep(f, a.dim(), &a.plus_basis(), &s, 43, |x| {
        for d in &beck.basis {
            if let Some(n) = gamma_failure(pd, d, x) {
                witness = Some(format!("n = {n}, x = {}", a.fmt(x)));
                return false;
            }
        }
        true
    });
    report.push(
        Check::from_witness("gamma-cross-check", witness)
            .dim("special", beck.dim())
            .dim("elements", cov.visited)
            .note(if cov.exhaustive { "exhaustive over A_+" } else { "sampled" }),
    );
    (beck, report)
}

/// Smallest `n ≤ p` with `D(γ_n(x)) != γ_{n-1}(x) D(x)`, if any.
pub fn gamma_failure(pd: &PdAlgebra, d: &Matrix, x: &[u64]) -> Option<u64> {
    let a = pd.algebra();
    let dx = d.mul_vec(x);
    let mut prev = a.one();
    for n in 1..=a.p() {
        let g = reconstruct_gamma(pd, n, x).expect("x in A_+");
        if d.mul_vec(&g) != a.mul(&prev, &dx) {
            return Some(n);
        }
        prev = g;
    }
    None
}

/// `[D1, D2] = D1 D2 - D2 D1` for derivations of `A` into itself.
pub fn lie_bracket(d1: &Matrix, d2: &Matrix) -> Result<Matrix> {
    if d1.shape() != d2.shape() || d1.rows() != d1.cols() {
        return Err(Error::DimensionMismatch { expected: d1.rows(), found: d2.rows() });
    }
    Ok(d1.matmul(d2).sub(&d2.matmul(d1)))
}
