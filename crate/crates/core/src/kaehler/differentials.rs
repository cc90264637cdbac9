use std::sync::Arc;

use crate::algebra::{tensor_square, PdAlgebra, TensorSquare};
use crate::beckmod::{verify_beck_module, BeckModule};
use crate::derivations::audit_beck_derivation;
use crate::error::{Error, Result};
use crate::exactlin::{Matrix, QuotientSpace, Subspace};
use crate::report::{Check, Report};
use crate::sampling::{random_combination, sweep, Sampling};

/// `I/I²` for `I = ker(μ: A ⊗ A → A)`, with the A-action through the left
/// factor, the P-map induced by π on `A ⊗ A`, and `d(a) = (1⊗a - a⊗1) + I²`.
#[derive(Debug, Clone)]
pub struct KaehlerData {
    pub base: Arc<PdAlgebra>,
    pub tensor: TensorSquare,
    pub i: Subspace,
    pub i2: Subspace,
    pub module: BeckModule,
    /// Column `i` is the class of `d(e_i)`.
    pub d: Matrix,
    /// Column `i` is `1⊗e_i - e_i⊗1` in `A ⊗ A`.
    pub d_raw: Matrix,
    /// Representatives in `A ⊗ A` of the module basis, one per column.
    pub reps: Matrix,
    /// Construction checks: p-ideals, well-definedness of P, the Beck module axioms.
    pub report: Report,
    quotient: QuotientSpace,
    /// Change of coordinates from the canonical quotient basis to `reps`.
    to_reps: Matrix,
}

impl KaehlerData {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    /// Class in `I/I²` of an element of `I`; `None` outside `I`.
    pub fn class(&self, t: &[u64]) -> Option<Vec<u64>> {
        self.quotient.coords(t).map(|c| self.to_reps.mul_vec(&c))
    }
}

/// Builds `I/I²`. Its basis is chosen greedily among the `e_j·d(e_i)`, grouped
/// by `i`, so labels read `dx`, `x·dx`, `dy`.
pub fn kaehler_differentials(pd: &Arc<PdAlgebra>, sampling: &Sampling) -> Result<KaehlerData> {
    let a = pd.algebra();
    let f = a.field();
    let ts = tensor_square(pd)?;
    let t = ts.algebra.algebra();
    let td = t.dim();
    let i = ts.mu.kernel();
    let i2 = i.product_span(&i, |u, v| t.mul(u, v))?;
    let quotient = QuotientSpace::new(&i, &i2)?;
    let q = quotient.dim();

    let d_cols: Vec<Vec<u64>> = (0..a.dim()).map(|k| f.sub_vec(&ts.right.column(k), &ts.left.column(k))).collect();
    let d_raw = Matrix::from_columns(f, td, &d_cols)?;

    let mut chosen: Vec<(String, Vec<u64>)> = Vec::new();
    let mut span = Subspace::zero(f, q);
    'pick: for &g in a.plus_indices() {
        for j in 0..a.dim() {
            let left = ts.left.column(j);
            let cand = t.mul(&left, &d_cols[g]);
            let c = quotient.coords(&cand).expect("e_j·d(e_i) lies in I");
            if span.contains(&c) {
                continue;
            }
            span = span.sum(&Subspace::span(f, q, &[c]))?;
            let label = if j == 0 { format!("d{}", a.label(g)) } else { format!("{}·d{}", a.label(j), a.label(g)) };
            chosen.push((label, cand));
            if chosen.len() == q {
                break 'pick;
            }
        }
    }
    if chosen.len() != q {
        return Err(Error::InvalidModule("the elements e_j·d(e_i) do not span I/I²".into()));
    }
    let rep_cols: Vec<Vec<u64>> = chosen.iter().map(|(_, v)| v.clone()).collect();
    let reps = Matrix::from_columns(f, td, &rep_cols)?;
    let class_cols: Vec<Vec<u64>> = rep_cols.iter().map(|v| quotient.coords(v).expect("in I")).collect();
    let to_reps = Matrix::from_columns(f, q, &class_cols)?.inverse().expect("chosen classes form a basis");
    let class = |v: &[u64]| quotient.coords(v).map(|c| to_reps.mul_vec(&c));

    let action = (0..a.dim())
        .map(|k| {
            let left = ts.left.column(k);
            let cols: Vec<Vec<u64>> = rep_cols.iter().map(|r| class(&t.mul(&left, r)).expect("I is an ideal")).collect();
            Matrix::from_columns(f, q, &cols)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut pi_cols = Vec::with_capacity(q);
    for r in &rep_cols {
        let img = ts.algebra.pi_unchecked(r);
        pi_cols.push(class(&img).ok_or_else(|| Error::InvalidModule(format!("π({}) leaves I", t.fmt(r))))?);
    }
    let pi = Matrix::from_columns(f, q, &pi_cols)?;
    let d_cols_q: Vec<Vec<u64>> = d_cols.iter().map(|v| class(v).expect("d(a) lies in I")).collect();
    let d = Matrix::from_columns(f, q, &d_cols_q)?;
    let labels = chosen.into_iter().map(|(l, _)| l).collect();
    let module = BeckModule::new(pd.clone(), labels, action, pi)?;

    let mut report = Report::new();
    let stable = |sub: &Subspace| {
        sub.basis().iter().find_map(|b| {
            let v = ts.algebra.pi_unchecked(b);
            (!sub.contains(&v)).then(|| format!("π({}) = {}", t.fmt(b), t.fmt(&v)))
        })
    };
    report.push(Check::from_witness("I-p-ideal", stable(&i)).dim("I", i.dim()));
    report.push(Check::from_witness("I2-p-ideal", stable(&i2)).dim("I2", i2.dim()));
    let mu_d = (0..a.dim()).find(|&k| !crate::exactlin::is_zero(&ts.mu.mul_vec(&d_cols[k])));
    report.push(Check::from_witness("mu-d-zero", mu_d.map(|k| format!("μ(d({})) != 0", a.label(k)))));

    let two_sided = (0..a.dim()).find_map(|k| {
        let diff = f.sub_vec(&ts.left.column(k), &ts.right.column(k));
        rep_cols
            .iter()
            .find(|r| !i2.contains(&t.mul(&diff, r)))
            .map(|r| format!("({0}⊗1 - 1⊗{0})·{1} is not in I²", a.label(k), t.fmt(r)))
    });
    report.push(Check::from_witness("two-sided-action", two_sided));

    let mut rng = sampling.rng(51);
    let mut witness = None;
    let trials = if i2.dim() == 0 { 0 } else { sampling.samples };
    for _ in 0..trials {
        let x = random_combination(f, td, i.basis(), &mut rng);
        let s = random_combination(f, td, i2.basis(), &mut rng);
        let diff = f.sub_vec(&ts.algebra.pi_unchecked(&x), &ts.algebra.pi_unchecked(&f.add_vec(&x, &s)));
        if !i2.contains(&diff) {
            witness = Some(format!("t = {}, s = {}", t.fmt(&x), t.fmt(&s)));
            break;
        }
    }
    report.push(Check::from_witness("piQ-well-defined", witness).dim("samples", trials));
    report.extend_prefixed("beck-module", verify_beck_module(&module));

    Ok(KaehlerData { base: pd.clone(), tensor: ts, i, i2, module, d, d_raw, reps, report, quotient, to_reps })
}

/// `d: A → I/I²` is a Beck derivation.
pub fn verify_universal_derivation(k: &KaehlerData, sampling: &Sampling) -> Report {
    audit_beck_derivation(&k.module, &k.d, sampling)
}

/// `x^{p-n} ⊗ x^n ≡ n·x^{p-1} ⊗ x (mod I²)` for every `x ∈ A_+`
/// (exhaustive up to `sampling.exhaustive_cap` elements, else sampled).
pub fn check_power_exchange(k: &KaehlerData, n: u64, sampling: &Sampling) -> Report {
    let a = k.base.algebra();
    let f = a.field();
    let p = f.p();
    let mut report = Report::new();
    let name = format!("power-exchange-n{n}");
    if n == 0 || n > p {
        report.push(Check::fail(name, format!("n = {n} outside 1..={p}")));
        return report;
    }
    let mut witness = None;
    let cov = sweep(f, a.dim(), &a.plus_basis(), sampling, 53 + n, |x| {
        let lhs = k.tensor.tensor(&a.pow(x, p - n), &a.pow(x, n));
        let rhs = f.scale_vec(f.reduce(n), &k.tensor.tensor(&a.pow(x, p - 1), x));
        if !k.i2.contains(&f.sub_vec(&lhs, &rhs)) {
            witness = Some(format!("x = {}", a.fmt(x)));
            return false;
        }
        true
    });
    report.push(
        Check::from_witness(name, witness)
            .dim("elements", cov.visited)
            .note(if cov.exhaustive { "exhaustive over A_+" } else { "sampled" }),
    );
    report
}
