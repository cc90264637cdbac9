use super::PdAlgebra;
use crate::error::{Error, Result};
use crate::exactlin::binom_mod_p;
use crate::report::{Check, Report};
use crate::sampling::{sweep, Sampling};

/// γ_n(x) from the p-map alone: writing n = Σ n_i p^i in base p,
/// `γ_n(x) = (Π n_i!)^{-1} Π (π^{∘i} x)^{n_i}`.
pub fn reconstruct_gamma(pd: &PdAlgebra, n: u64, x: &[u64]) -> Result<Vec<u64>> {
    let a = pd.algebra();
    a.check_elem(x)?;
    if !a.in_plus(x) {
        return Err(Error::NotInPlus(x.to_vec()));
    }
    if n == 0 {
        return Ok(a.one());
    }
    let f = a.field();
    let p = f.p();
    let mut out = a.one();
    let mut denom = 1u64;
    let mut current = x.to_vec();
    let mut rest = n;
    while rest > 0 {
        let digit = rest % p;
        out = a.mul(&out, &a.pow(&current, digit));
        for k in 2..=digit {
            denom = f.mul(denom, k);
        }
        rest /= p;
        if rest > 0 {
            current = pd.pi_unchecked(&current);
        }
    }
    Ok(f.scale_vec(f.inv(denom)?, &out))
}

/// On elements of A_+ (exhaustive up to the sampling cap): `n! γ_n(x) = x^n`
/// and `γ_i(x) γ_j(x) = C(i+j, i) γ_{i+j}(x)` for indices up to `max_n`, and
/// `γ_p = π`.
pub fn verify_gamma_identities(pd: &PdAlgebra, max_n: u64, sampling: &Sampling) -> Report {
    let a = pd.algebra();
    let f = a.field();
    let p = f.p();
    let mut fact_w = None;
    let mut prod_w = None;
    let mut pi_w = None;
    let cov = sweep(f, a.dim(), &a.plus_basis(), sampling, 61, |x| {
        let g: Vec<Vec<u64>> = (0..=max_n).map(|n| reconstruct_gamma(pd, n, x).expect("x in A_+")).collect();
        let mut fact = 1u64;
        for n in 1..=max_n {
            fact = f.mul(fact, f.reduce(n));
            if fact_w.is_none() && f.scale_vec(fact, &g[n as usize]) != a.pow(x, n) {
                fact_w = Some(format!("n = {n}, x = {}", a.fmt(x)));
            }
        }
        for i in 0..=max_n {
            for j in i..=max_n - i {
                let lhs = a.mul(&g[i as usize], &g[j as usize]);
                let rhs = f.scale_vec(binom_mod_p(i + j, i, f), &g[(i + j) as usize]);
                if prod_w.is_none() && lhs != rhs {
                    prod_w = Some(format!("γ_{i}γ_{j} at x = {}", a.fmt(x)));
                }
            }
        }
        if pi_w.is_none() && max_n >= p && g[p as usize] != pd.pi_unchecked(x) {
            pi_w = Some(format!("x = {}", a.fmt(x)));
        }
        fact_w.is_none() && prod_w.is_none() && pi_w.is_none()
    });
    let coverage = if cov.exhaustive { "exhaustive over A_+" } else { "sampled" };
    let mut report = Report::new();
    report.push(Check::from_witness("factorial", fact_w).dim("max-n", max_n as usize).dim("elements", cov.visited).note(coverage));
    report.push(Check::from_witness("product-rule", prod_w).dim("elements", cov.visited).note(coverage));
    report.push(Check::from_witness("gamma-p-is-pi", pi_w).dim("elements", cov.visited).note(coverage));
    report
}
