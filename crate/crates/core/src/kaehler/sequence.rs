use std::sync::Arc;

use super::{kaehler_differentials, KaehlerData};
use crate::algebra::{quotient_algebra, PdAlgebra, QuotientAlgebra};
use crate::beckmod::{base_change, check_beck_hom, verify_beck_module, BeckModule, PresentedModule};
use crate::error::{Error, Result};
use crate::exactlin::{Matrix, QuotientSpace, Subspace};
use crate::report::{Check, Report};
use crate::sampling::Sampling;

/// `J/J² --φ--> Ω(A) ⊗_A A/J --ψ--> Ω(A/J) → 0` over `A/J`, with `Ω` realized
/// as `I/I²`.
#[derive(Debug, Clone)]
pub struct FundamentalSequence {
    pub quotient: QuotientAlgebra,
    pub conormal: BeckModule,
    pub middle: PresentedModule,
    pub kaehler_a: KaehlerData,
    pub kaehler_quotient: KaehlerData,
    pub phi: Matrix,
    pub psi: Matrix,
    pub report: Report,
}

/// `J/J²` over `A/J`, with P induced by π.
fn conormal_module(pd: &PdAlgebra, quotient: &QuotientAlgebra, qa: &Arc<PdAlgebra>, j: &Subspace) -> Result<BeckModule> {
    let a = pd.algebra();
    let f = a.field();
    let j2 = j.product_span(j, |u, v| a.mul(u, v))?;
    let qs = QuotientSpace::new(j, &j2)?;
    let reps = qs.reps().to_vec();
    let n = reps.len();
    let class = |v: &[u64]| qs.coords(v).ok_or_else(|| Error::NotPIdeal(format!("{} leaves J", a.fmt(v))));
    let mut action = Vec::with_capacity(quotient.reps.len());
    for &r in &quotient.reps {
        let e = a.basis_vec(r);
        let cols = reps.iter().map(|v| class(&a.mul(&e, v))).collect::<Result<Vec<_>>>()?;
        action.push(Matrix::from_columns(f, n, &cols)?);
    }
    let pi_cols = reps.iter().map(|v| class(&pd.pi_unchecked(v))).collect::<Result<Vec<_>>>()?;
    let pi = Matrix::from_columns(f, n, &pi_cols)?;
    let labels = reps.iter().map(|v| format!("[{}]", a.fmt(v))).collect();
    BeckModule::new(qa.clone(), labels, action, pi)
}

pub fn second_fundamental_sequence(pd: &Arc<PdAlgebra>, j: &Subspace, sampling: &Sampling) -> Result<FundamentalSequence> {
    let a = pd.algebra();
    let f = a.field();
    let quotient = quotient_algebra(pd, j)?;
    let qa = Arc::new(quotient.algebra.clone());
    let conormal = conormal_module(pd, &quotient, &qa, j)?;
    let ka = kaehler_differentials(pd, sampling)?;
    let kq = kaehler_differentials(&qa, sampling)?;
    let middle = base_change(&ka.module, &quotient.proj, &qa)?;
    let qd = qa.dim();

    // φ(x + J²) = d(x) ⊗ 1; the unit of A/J is basis element 0
    let j2_reps: Vec<Vec<u64>> = {
        let j2 = j.product_span(j, |u, v| a.mul(u, v))?;
        QuotientSpace::new(j, &j2)?.reps().to_vec()
    };
    let phi_cols: Vec<Vec<u64>> = j2_reps
        .iter()
        .map(|x| {
            let dx = ka.d.mul_vec(x);
            let mut v = vec![0; ka.dim() * qd];
            for (k, &c) in dx.iter().enumerate() {
                v[k * qd] = c;
            }
            middle.class(&v)
        })
        .collect();
    let phi = Matrix::from_columns(f, middle.module.dim(), &phi_cols)?;

    // Ω(A) → Ω(A/J) induced by the projection on both tensor factors
    let d = a.dim();
    let omega_proj_cols = (0..ka.dim())
        .map(|k| {
            let t = ka.reps.column(k);
            let mut img = vec![0; qd * qd];
            for (idx, &c) in t.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let (l, r) = (quotient.proj.column(idx / d), quotient.proj.column(idx % d));
                f.axpy(&mut img, c, &kq.tensor.tensor(&l, &r));
            }
            kq.class(&img).ok_or_else(|| Error::InvalidModule("projection does not map I into I".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let omega_proj = Matrix::from_columns(f, kq.dim(), &omega_proj_cols)?;
    let psi_cols: Vec<Vec<u64>> = middle
        .quotient
        .reps()
        .iter()
        .map(|v| {
            let mut out = vec![0; kq.dim()];
            for (idx, &c) in v.iter().enumerate() {
                if c != 0 {
                    let (k, s) = (idx / qd, idx % qd);
                    f.axpy(&mut out, c, &kq.module.action(s).mul_vec(&omega_proj.column(k)));
                }
            }
            out
        })
        .collect();
    let psi = Matrix::from_columns(f, kq.dim(), &psi_cols)?;

    let mut report = Report::new();
    report.extend_prefixed("conormal", verify_beck_module(&conormal));
    report.extend_prefixed("middle", verify_beck_module(&middle.module));
    report.push(check_beck_hom("phi-beck-hom", &conormal, &middle.module, &phi));
    report.push(check_beck_hom("psi-beck-hom", &middle.module, &kq.module, &psi));
    let rank = psi.rank();
    let onto = (rank != kq.dim()).then(|| format!("rank ψ = {rank} < {}", kq.dim()));
    report.push(Check::from_witness("psi-surjective", onto).dim("rank", rank));
    let image = phi.image();
    let kernel = psi.kernel();
    let exact = (image != kernel).then(|| format!("dim im φ = {}, dim ker ψ = {}", image.dim(), kernel.dim()));
    report.push(
        Check::from_witness("exact-middle", exact)
            .dim("conormal", conormal.dim())
            .dim("middle", middle.module.dim())
            .dim("target", kq.dim())
            .dim("image", image.dim()),
    );
    Ok(FundamentalSequence { quotient, conormal, middle, kaehler_a: ka, kaehler_quotient: kq, phi, psi, report })
}
