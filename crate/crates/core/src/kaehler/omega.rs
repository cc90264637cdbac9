use std::sync::Arc;

use super::KaehlerData;
use crate::algebra::PdAlgebra;
use crate::beckmod::{check_beck_hom, quotient_module, verify_beck_module, PresentedModule};
use crate::derivations::audit_beck_derivation;
use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Subspace};
use crate::report::{Check, Report};
use crate::sampling::Sampling;

/// The module generated over A by symbols `de_i` (`e_i` in the A_+ basis)
/// subject to the Leibniz relations, with
/// `P·de_i = d(π(e_i)) + e_i^{p-1} de_i`, `P(a·ω) = 0` for `a ∈ A_+`.
#[derive(Debug, Clone)]
pub struct PresentedOmega {
    pub presented: PresentedModule,
    /// A-basis indices carrying a generator, in generator order.
    pub generators: Vec<usize>,
    pub relations: Subspace,
    /// Column `i` is the class of `d(e_i)`.
    pub d: Matrix,
    pub report: Report,
}

impl PresentedOmega {
    pub fn dim(&self) -> usize {
        self.presented.module.dim()
    }

    /// Free-module coordinate of `e_j · de_{generators[g]}`.
    pub fn free_index(&self, j: usize, g: usize) -> usize {
        j * self.generators.len() + g
    }
}

pub fn omega_p_presentation(pd: &Arc<PdAlgebra>, sampling: &Sampling) -> Result<PresentedOmega> {
    let a = pd.algebra();
    if !a.is_augmented() {
        return Err(Error::InvalidAlgebra("the presentation needs an augmented algebra (A_0 = k)".into()));
    }
    let f = a.field();
    let p = f.p();
    let gens: Vec<usize> = a.plus_indices().to_vec();
    let ng = gens.len();
    let dim = a.dim();
    let n = dim * ng;
    let mut gen_of = vec![None; dim];
    for (g, &i) in gens.iter().enumerate() {
        gen_of[i] = Some(g);
    }
    let idx = |j: usize, g: usize| j * ng + g;
    // a ↦ Σ a_i de_i as a free-module vector
    let d_free = |v: &[u64]| {
        let mut out = vec![0; n];
        for (i, &c) in v.iter().enumerate() {
            if let (Some(g), true) = (gen_of[i], c != 0) {
                out[idx(0, g)] = f.add(out[idx(0, g)], c);
            }
        }
        out
    };
    let action: Vec<Matrix> = (0..dim)
        .map(|x| {
            let mut m = Matrix::zeros(f, n, n);
            for j in 0..dim {
                for &(t, c) in a.basis_product(x, j) {
                    for g in 0..ng {
                        m[(idx(t, g), idx(j, g))] = f.add(m[(idx(t, g), idx(j, g))], c);
                    }
                }
            }
            m
        })
        .collect();
    let act = |x: &[u64], v: &[u64]| {
        let mut out = vec![0; n];
        for (i, &c) in x.iter().enumerate() {
            if c != 0 {
                f.axpy(&mut out, c, &action[i].mul_vec(v));
            }
        }
        out
    };

    let mut relators = Vec::new();
    for (gi, &i) in gens.iter().enumerate() {
        for (gj, &j) in gens.iter().enumerate().skip(gi) {
            let mut r = d_free(&a.basis_product_vec(i, j));
            r[idx(i, gj)] = f.sub(r[idx(i, gj)], 1);
            r[idx(j, gi)] = f.sub(r[idx(j, gi)], 1);
            relators.push(r);
        }
    }
    let mut closure = Vec::with_capacity(relators.len() * dim);
    for r in &relators {
        for m in &action {
            closure.push(m.mul_vec(r));
        }
    }
    let relations = Subspace::span(f, n, &closure);

    let mut pi = Matrix::zeros(f, n, n);
    for (g, &i) in gens.iter().enumerate() {
        let e = a.basis_vec(i);
        let mut img = d_free(pd.pmap().image(i));
        let unit_gen = {
            let mut v = vec![0; n];
            v[idx(0, g)] = 1;
            v
        };
        f.axpy(&mut img, 1, &act(&a.pow(&e, p - 1), &unit_gen));
        for (r, &c) in img.iter().enumerate() {
            pi[(r, idx(0, g))] = c;
        }
    }
    let labels: Vec<String> = (0..n)
        .map(|v| {
            let (j, g) = (v / ng.max(1), v % ng.max(1));
            if j == 0 {
                format!("d{}", a.label(gens[g]))
            } else {
                format!("{}·d{}", a.label(j), a.label(gens[g]))
            }
        })
        .collect();
    let presented = quotient_module(pd, &action, &pi, &relations, &labels)?;
    let q = presented.module.dim();
    let d_cols: Vec<Vec<u64>> = (0..dim).map(|i| presented.class(&d_free(&a.basis_vec(i)))).collect();
    let d = Matrix::from_columns(f, q, &d_cols)?;
    let mut report = Report::new();
    report.extend_prefixed("beck-module", verify_beck_module(&presented.module));
    report.extend_prefixed("d", audit_beck_derivation(&presented.module, &d, sampling));
    Ok(PresentedOmega { presented, generators: gens, relations, d, report })
}

/// The canonical map `e_j·de_i ↦ e_j·d(e_i)` from the presentation to `I/I²`,
/// checked to be a bijective Beck-module map compatible with `d`.
pub fn omega_to_kaehler(omega: &PresentedOmega, k: &KaehlerData) -> Result<Matrix> {
    let f = k.base.field();
    let ng = omega.generators.len();
    let cols: Vec<Vec<u64>> = omega
        .presented
        .quotient
        .reps()
        .iter()
        .map(|r| {
            let mut out = vec![0; k.dim()];
            for (v, &c) in r.iter().enumerate() {
                if c != 0 {
                    let (j, g) = (v / ng, v % ng);
                    let dg = k.d.column(omega.generators[g]);
                    f.axpy(&mut out, c, &k.module.action(j).mul_vec(&dg));
                }
            }
            out
        })
        .collect();
    Matrix::from_columns(f, k.dim(), &cols)
}

pub fn verify_omega_iso(omega: &PresentedOmega, k: &KaehlerData) -> Report {
    let mut report = Report::new();
    let h = match omega_to_kaehler(omega, k) {
        Ok(h) => h,
        Err(e) => {
            report.push(Check::fail("canonical-map", e.to_string()));
            return report;
        }
    };
    report.push(check_beck_hom("beck-hom", &omega.presented.module, &k.module, &h));
    let rank = h.rank();
    let (dom, cod) = (omega.dim(), k.dim());
    let bijective = (rank != dom || rank != cod).then(|| format!("rank {rank}, dim Ω_p = {dom}, dim I/I² = {cod}"));
    report.push(Check::from_witness("bijective", bijective).dim("omega", dom).dim("kaehler", cod).dim("rank", rank));
    let compatible = (h.matmul(&omega.d) != k.d).then(|| "the map does not carry d to d".to_string());
    report.push(Check::from_witness("compatible-d", compatible));
    report
}
