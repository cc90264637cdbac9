//! Localization of divided-power algebras and Beck modules at an element `f`,
//! and the universal derivation of `A_f`.
//!
//! For an augmented finite algebra, A_+ is nil and Spec A is a point, so
//! statements about sheaves on Spec A reduce to statements about global
//! sections. `f` is then either a unit (`A_f ≅ A`) or nilpotent (`A_f = 0`);
//! pregraded algebras with a larger A_0 also admit the mixed case.

use std::sync::Arc;

use crate::algebra::{localize_algebra, LocalizationKind};
use crate::beckmod::{check_pd_homomorphism, localize_module, BeckModule};
use crate::derivations::{audit_beck_derivation, beck_derivations};
use crate::error::{Error, Result};
use crate::kaehler::kaehler_differentials;
use crate::report::{Check, Report};
use crate::sampling::Sampling;
use crate::PdAlgebra;

const AFFINE_NOTE: &str = "A_+ is nil, so Spec A = Spec A_0; for A_0 = k it is one point and the sheaf statements reduce to global sections";

#[derive(Debug, Clone)]
pub struct LocalizationIso {
    pub kind: LocalizationKind,
    pub report: Report,
}

/// Compares `M_f` (fractions) with `M ⊗_A A_f` through `τ(m/f^i) = m ⊗ 1/f^i`
/// and records whether `f` is a unit, nilpotent or neither.
pub fn verify_localization_iso(m: &BeckModule, f: &[u64], sampling: &Sampling) -> Result<LocalizationIso> {
    let pd = m.algebra();
    let lm = localize_module(m, f)?;
    let kind = lm.localization.kind;
    let af = &lm.algebra;
    let mut report = lm.report.clone();

    let consistent = match kind {
        LocalizationKind::Unit => (af.dim() != pd.dim()).then(|| format!("f is a unit but dim A_f = {}", af.dim())),
        LocalizationKind::Nilpotent => {
            (af.dim() != 0 || lm.fractions.dim() != 0).then(|| "f is nilpotent but A_f or M_f is nonzero".to_string())
        }
        LocalizationKind::Mixed => (af.dim() == 0 || af.dim() == pd.dim()).then(|| "mixed f with a degenerate A_f".to_string()),
    };
    let label = match kind {
        LocalizationKind::Unit => "unit",
        LocalizationKind::Nilpotent => "nilpotent",
        LocalizationKind::Mixed => "mixed",
    };
    report.push(
        Check::from_witness("degeneracy-class", consistent)
            .dim("A", pd.dim())
            .dim("A_f", af.dim())
            .note(format!("{label}; {AFFINE_NOTE}")),
    );

    if kind == LocalizationKind::Unit {
        let canonical = lm.localization.canonical();
        let iso = match check_pd_homomorphism(pd, af, canonical) {
            Err(e) => Some(e.to_string()),
            Ok(()) if canonical.rank() != pd.dim() => Some("A → A_f is not bijective".to_string()),
            Ok(()) => None,
        };
        report.push(Check::from_witness("canonical-iso", iso));
        let before = beck_derivations(m, sampling).dim();
        let after = beck_derivations(&lm.fractions, sampling).dim();
        report.push(
            Check::new("der-p-transported", before == after)
                .dim("der-A", before)
                .dim("der-A_f", after),
        );
    }
    Ok(LocalizationIso { kind, report })
}

/// `d_f(a/f^i) = (1/f^i) d(a) - (1/f^{2i}) a d(f^i)` with values in `(I/I²)_f`.
///
/// Checks that the formula does not depend on the chosen fraction
/// (`a/f^i = af/f^{i+1}`) for `i < p`, that it restricts to `d` on `A`, and
/// that the resulting map is a Beck derivation of `A_f`.
pub fn localized_universal_derivation(pd: &Arc<PdAlgebra>, f: &[u64], sampling: &Sampling) -> Result<Report> {
    let loc = localize_algebra(pd, f)?;
    if loc.algebra().dim() == 0 {
        return Err(Error::ZeroLocalization);
    }
    let a = pd.algebra();
    let field = a.field();
    let p = field.p();
    let k = kaehler_differentials(pd, sampling)?;
    let lm = localize_module(&k.module, f)?;
    let omega_f = &lm.fractions;
    let af = loc.algebra().algebra();
    let inv_pow = |i: u64| af.pow(&loc.f_inverse, i);
    let d_frac = |x: &[u64], i: u64| {
        let dx = lm.fraction_map.mul_vec(&k.d.mul_vec(x));
        let fi = a.pow(f, i);
        let dfi = lm.fraction_map.mul_vec(&k.d.mul_vec(&fi));
        let first = omega_f.act(&inv_pow(i), &dx);
        let coeff = af.mul(&inv_pow(2 * i), &loc.quotient.project(x));
        field.sub_vec(&first, &omega_f.act(&coeff, &dfi))
    };

    let mut report = Report::new();
    let mut witness = None;
    'outer: for j in 0..a.dim() {
        let e = a.basis_vec(j);
        for i in 0..p {
            let lhs = d_frac(&e, i);
            let rhs = d_frac(&a.mul(&e, f), i + 1);
            if lhs != rhs {
                witness = Some(format!("{0}/f^{i} and {0}·f/f^{1}", a.label(j), i + 1));
                break 'outer;
            }
        }
    }
    report.push(Check::from_witness("fraction-independent", witness).dim("exponents", p as usize));

    let cols: Vec<Vec<u64>> = loc.quotient.reps.iter().map(|&r| d_frac(&a.basis_vec(r), 0)).collect();
    let d_f = crate::exactlin::Matrix::from_columns(field, omega_f.dim(), &cols)?;
    let mut witness = None;
    'outer2: for j in 0..a.dim() {
        for i in 0..p {
            let x = a.basis_vec(j);
            let via_matrix = d_f.mul_vec(&loc.fraction(&x, i));
            if via_matrix != d_frac(&x, i) {
                witness = Some(format!("{}/f^{i}", a.label(j)));
                break 'outer2;
            }
        }
    }
    report.push(Check::from_witness("linear-on-fractions", witness));
    report.extend_prefixed("d_f", audit_beck_derivation(omega_f, &d_f, sampling));
    report.push(Check::new("affine-reduction", true).note(AFFINE_NOTE));
    Ok(report)
}

#[cfg(test)]
mod tests;
