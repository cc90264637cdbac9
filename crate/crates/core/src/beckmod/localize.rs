use std::sync::Arc;

use super::{base_change, check_beck_hom, BeckModule, PresentedModule};
use crate::algebra::{localize_algebra, Localization};
use crate::error::{Error, Result};
use crate::exactlin::{Matrix, QuotientSpace, Subspace};
use crate::report::{Check, Report};

/// Both models of the localization of a Beck module and the comparison map.
#[derive(Debug, Clone)]
pub struct LocalizedModule {
    pub localization: Localization,
    pub algebra: Arc<crate::algebra::PdAlgebra>,
    /// `M_f = {m / f^i}` with `P(m/f^i) = Pm / f^{pi}`.
    pub fractions: BeckModule,
    /// `M → M_f`
    pub fraction_map: Matrix,
    /// `M ⊗_A A_f` with `P(m ⊗ a/f^i) = a^p Pm ⊗ 1/f^{pi}`.
    pub tensor: PresentedModule,
    /// `τ(m/f^i) = m ⊗ 1/f^i`
    pub tau: Matrix,
    pub report: Report,
}

/// Kernel of `M → M_f`: elements killed by a power of `f`.
fn torsion(m: &BeckModule, f: &[u64]) -> Subspace {
    let field = m.algebra().field();
    let rho = m.act_matrix(f);
    let mut power = Matrix::identity(field, m.dim());
    for _ in 0..m.dim() {
        power = power.matmul(&rho);
    }
    power.kernel()
}

pub fn localize_module(m: &BeckModule, f: &[u64]) -> Result<LocalizedModule> {
    let pd = m.algebra();
    let field = pd.field();
    let localization = localize_algebra(pd, f)?;
    let af = Arc::new(localization.algebra().clone());
    let lq = &localization.quotient;

    // M_f = M / torsion, acted on by A_f through representatives
    let tors = torsion(m, f);
    let quotient = QuotientSpace::new(&Subspace::full(field, m.dim()), &tors)?;
    let q = quotient.dim();
    let reps = quotient.reps().to_vec();
    let descend = |mat: &Matrix| -> Matrix {
        let cols: Vec<Vec<u64>> = reps.iter().map(|r| quotient.coords(&mat.mul_vec(r)).expect("ambient")).collect();
        Matrix::from_columns(field, q, &cols).expect("square")
    };
    for b in tors.basis() {
        if !tors.contains(&m.apply_pi(b)) {
            return Err(Error::InconsistentPAction(format!("P does not preserve the {}-torsion", pd.fmt(f))));
        }
    }
    let action: Vec<Matrix> = lq.reps.iter().map(|&r| descend(m.action(r))).collect();
    let pi = descend(m.pi());
    let labels = reps
        .iter()
        .map(|r| {
            let pivot = r.iter().position(|&c| c != 0).expect("nonzero");
            m.labels()[pivot].clone()
        })
        .collect();
    let fractions = BeckModule::new(af.clone(), labels, action, pi)?;
    let fraction_cols: Vec<Vec<u64>> = (0..m.dim()).map(|k| quotient.coords(&crate::exactlin::unit_vec(m.dim(), k)).expect("ambient")).collect();
    let fraction_map = Matrix::from_columns(field, q, &fraction_cols)?;

    let tensor = base_change(m, &lq.proj, &af)?;
    let one = af.algebra().one();
    // τ([m]) = m ⊗ 1 on representatives of M_f
    let tau_cols: Vec<Vec<u64>> = reps
        .iter()
        .map(|r| {
            let mut v = vec![0; m.dim() * af.dim()];
            for (k, &c) in r.iter().enumerate() {
                if c != 0 {
                    for (j, &u) in one.iter().enumerate() {
                        v[k * af.dim() + j] = field.add(v[k * af.dim() + j], field.mul(c, u));
                    }
                }
            }
            tensor.class(&v)
        })
        .collect();
    let tau = Matrix::from_columns(field, tensor.module.dim(), &tau_cols)?;

    let mut report = Report::new();
    report.push(check_beck_hom("tau-beck-hom", &fractions, &tensor.module, &tau));
    let rank = tau.rank();
    report.push(
        Check::new("tau-bijective", rank == fractions.dim() && rank == tensor.module.dim())
            .dim("M_f", fractions.dim())
            .dim("M⊗A_f", tensor.module.dim())
            .dim("rank", rank),
    );
    Ok(LocalizedModule { localization, algebra: af, fractions, fraction_map, tensor, tau, report })
}
