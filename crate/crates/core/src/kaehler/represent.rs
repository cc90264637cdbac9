use super::KaehlerData;
use crate::beckmod::{check_beck_hom, hom_beck, BeckModule};
use crate::derivations::{audit_beck_derivation, beck_derivations};
use crate::error::Result;
use crate::exactlin::{is_zero, Matrix};
use crate::report::{Check, Report};
use crate::sampling::Sampling;

/// The bijection `Hom(I/I², M) ≅ Der_p(A, M)` evaluated on bases.
#[derive(Debug, Clone)]
pub struct Representability {
    /// Basis of `Der_p(A, M)`.
    pub derivations: Vec<Matrix>,
    /// Basis of Beck-module maps `I/I² → M`.
    pub homs: Vec<Matrix>,
    /// The hom induced by each basis derivation.
    pub forward: Vec<Matrix>,
    /// `f ∘ d` for each basis hom.
    pub backward: Vec<Matrix>,
    pub report: Report,
}

/// `Φ_D: A ⊗ A → M`, `a ⊗ a' ↦ a·D(a')`.
fn phi(k: &KaehlerData, m: &BeckModule, d: &Matrix) -> Matrix {
    let a = k.base.algebra();
    let dim = a.dim();
    let f = a.field();
    let cols: Vec<Vec<u64>> = (0..dim * dim).map(|t| m.action(t / dim).mul_vec(&d.column(t % dim))).collect();
    Matrix::from_columns(f, m.dim(), &cols).expect("shape")
}

/// The hom `I/I² → M` induced by a derivation `D`.
pub fn hom_from_derivation(k: &KaehlerData, m: &BeckModule, d: &Matrix) -> Matrix {
    phi(k, m, d).matmul(&k.reps)
}

pub fn derivation_from_hom(k: &KaehlerData, h: &Matrix) -> Matrix {
    h.matmul(&k.d)
}

pub fn representability(k: &KaehlerData, m: &BeckModule, sampling: &Sampling) -> Result<Representability> {
    let homs = hom_beck(&k.module, m)?;
    let ders = beck_derivations(m, sampling).basis;
    let mut report = Report::new();
    let dims = (homs.len() != ders.len()).then(|| format!("dim Hom = {}, dim Der_p = {}", homs.len(), ders.len()));
    report.push(Check::from_witness("dims", dims).dim("hom", homs.len()).dim("der", ders.len()));

    let forward: Vec<Matrix> = ders.iter().map(|d| hom_from_derivation(k, m, d)).collect();
    let backward: Vec<Matrix> = homs.iter().map(|h| derivation_from_hom(k, h)).collect();

    let kills = ders.iter().enumerate().find_map(|(n, d)| {
        let ph = phi(k, m, d);
        k.i2.basis().iter().any(|b| !is_zero(&ph.mul_vec(b))).then(|| format!("Φ of derivation {n} is nonzero on I²"))
    });
    report.push(Check::from_witness("phi-kills-I2", kills));

    let mut witness = None;
    for (n, h) in forward.iter().enumerate() {
        let c = check_beck_hom("forward", &k.module, m, h);
        if !c.pass {
            witness = Some(format!("derivation {n}: {}", c.witness.unwrap_or_default()));
            break;
        }
    }
    report.push(Check::from_witness("forward-beck-homs", witness));

    let mut witness = None;
    for (n, d) in backward.iter().enumerate() {
        let r = audit_beck_derivation(m, d, sampling);
        let failure = r.failures().next().map(|c| format!("hom {n}: {} ({})", c.name, c.witness.clone().unwrap_or_default()));
        if failure.is_some() {
            witness = failure;
            break;
        }
    }
    report.push(Check::from_witness("backward-beck-derivations", witness));

    let der_trip = ders.iter().zip(&forward).position(|(d, h)| &derivation_from_hom(k, h) != d);
    report.push(Check::from_witness("round-trip-der", der_trip.map(|n| format!("derivation {n}"))));
    let hom_trip = homs.iter().zip(&backward).position(|(h, d)| &hom_from_derivation(k, m, d) != h);
    report.push(Check::from_witness("round-trip-hom", hom_trip.map(|n| format!("hom {n}"))));

    Ok(Representability { derivations: ders, homs, forward, backward, report })
}
