//! The untruncated divided-power algebra O(n) over F_p, stored sparsely, and
//! its special vector fields `Σ f_i d_i`.
//!
//! Exponents are unbounded, so `π(x^(r)) = c·x^(pr)` never falls off the end
//! of a truncation. Degree and term counts are bounded by a [`DpBudget`]
//! instead; exceeding it is an error.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exactlin::{binom_mod_p, dp_coeff, Fp};
use crate::report::{Check, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpBudget {
    pub max_degree: u64,
    pub max_terms: usize,
}

impl Default for DpBudget {
    fn default() -> Self {
        DpBudget { max_degree: 12, max_terms: 64 }
    }
}

/// Exponent vector `a` of `x^(a) = x_1^(a_1) ⋯ x_n^(a_n)`.
pub type DPMonomial = Vec<u64>;

#[derive(Clone, PartialEq, Eq)]
pub struct DPPoly {
    field: Fp,
    n: usize,
    terms: BTreeMap<DPMonomial, u64>,
}

impl DPPoly {
    pub fn zero(field: Fp, n: usize) -> Self {
        DPPoly { field, n, terms: BTreeMap::new() }
    }

    pub fn one(field: Fp, n: usize) -> Self {
        Self::monomial(field, vec![0; n], 1)
    }

    pub fn monomial(field: Fp, exps: DPMonomial, coeff: u64) -> Self {
        let mut u = Self::zero(field, exps.len());
        u.add_term(exps, coeff);
        u
    }

    /// `x_i^(r)` with `i` counted from 1.
    pub fn var_power(field: Fp, n: usize, i: usize, r: u64) -> Self {
        let mut e = vec![0; n];
        e[i - 1] = r;
        Self::monomial(field, e, 1)
    }

    pub fn from_terms(field: Fp, n: usize, terms: impl IntoIterator<Item = (DPMonomial, u64)>) -> Self {
        let mut u = Self::zero(field, n);
        for (e, c) in terms {
            assert_eq!(e.len(), n, "exponent vector length");
            u.add_term(e, c);
        }
        u
    }

    fn add_term(&mut self, exps: DPMonomial, coeff: u64) {
        let c = self.field.reduce(coeff);
        if c == 0 {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Occupied(mut o) => {
                let v = self.field.add(*o.get(), c);
                if v == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
        }
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DPMonomial, u64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> u64 {
        self.terms.get(&vec![0; self.n]).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u64 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &DPPoly) -> DPPoly {
        self.check_compatible(other);
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &DPPoly) -> DPPoly {
        self.add(&other.scale(self.field.neg(1)))
    }

    pub fn scale(&self, c: u64) -> DPPoly {
        let f = self.field;
        DPPoly::from_terms(f, self.n, self.terms.iter().map(|(e, &v)| (e.clone(), f.mul(c, v))))
    }

    fn check_compatible(&self, other: &DPPoly) {
        assert!(self.field == other.field && self.n == other.n, "operands over different O(n)");
    }

    pub fn within(&self, budget: &DpBudget) -> Result<()> {
        if self.degree() > budget.max_degree {
            return Err(Error::BudgetExceeded(format!("degree {} > {}", self.degree(), budget.max_degree)));
        }
        if self.num_terms() > budget.max_terms {
            return Err(Error::BudgetExceeded(format!("{} terms > {}", self.num_terms(), budget.max_terms)));
        }
        Ok(())
    }
}

impl fmt::Display for DPPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let mut first = true;
        for (e, &c) in &self.terms {
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            let mono = monomial_label(e);
            match (c, mono.as_str()) {
                (_, "1") => write!(out, "{c}")?,
                (1, _) => write!(out, "{mono}")?,
                _ => write!(out, "{c}{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DPPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "DPPoly(p={}, n={}: {self})", self.field.p(), self.n)
    }
}

pub fn monomial_label(e: &[u64]) -> String {
    let single = e.len() == 1;
    let mut s = String::new();
    for (i, &a) in e.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let var = if single { "x".to_string() } else { format!("x{}", i + 1) };
        s.push_str(&var);
        if a > 1 {
            s.push_str(&format!("({a})"));
        }
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

/// `x^(a) x^(b) = Π_i C(a_i + b_i, a_i) x^(a+b)`.
pub fn dp_multiply(u: &DPPoly, v: &DPPoly) -> DPPoly {
    u.check_compatible(v);
    let f = u.field;
    let mut out = DPPoly::zero(f, u.n);
    for (a, &cu) in &u.terms {
        for (b, &cv) in &v.terms {
            let coeff = a.iter().zip(b).fold(f.mul(cu, cv), |acc, (&ai, &bi)| {
                if acc == 0 {
                    0
                } else {
                    f.mul(acc, binom_mod_p(ai + bi, ai, f))
                }
            });
            if coeff != 0 {
                out.add_term(a.iter().zip(b).map(|(x, y)| x + y).collect(), coeff);
            }
        }
    }
    out
}

pub fn dp_pow(u: &DPPoly, k: u64) -> DPPoly {
    (0..k).fold(DPPoly::one(u.field, u.n), |acc, _| dp_multiply(&acc, u))
}

/// `γ_k(u) = u^k / k!` for `k < p`.
pub fn gamma_small(u: &DPPoly, k: u64) -> DPPoly {
    let f = u.field;
    assert!(k < f.p(), "γ_k by division needs k < p");
    let fact = (1..=k).fold(1, |acc, i| f.mul(acc, i));
    dp_pow(u, k).scale(f.inv(fact).expect("k! is a unit"))
}

fn pmap_monomial(f: Fp, e: &[u64]) -> DPPoly {
    let support: Vec<usize> = (0..e.len()).filter(|&i| e[i] > 0).collect();
    match support[..] {
        [i] => {
            let mut t = vec![0; e.len()];
            t[i] = f.p() * e[i];
            DPPoly::monomial(f, t, dp_coeff(f, e[i]))
        }
        _ => DPPoly::zero(f, e.len()),
    }
}

/// `π = γ_p` on O(n)_+: seeded on monomials by `π(x_i^(r)) = c_r x_i^(pr)`
/// and `π(mixed monomial) = 0`, then extended term by term with
/// `π(u + v) = π(u) + π(v) + Σ_k ((-1)^k / k) u^k v^(p-k)`.
pub fn dp_pmap(u: &DPPoly, budget: &DpBudget) -> Result<DPPoly> {
    if u.constant_term() != 0 {
        return Err(Error::NonzeroConstantTerm);
    }
    let f = u.field;
    let p = f.p();
    if u.degree().saturating_mul(p) > budget.max_degree {
        return Err(Error::BudgetExceeded(format!("π of a degree-{} element has degree {}", u.degree(), u.degree() * p)));
    }
    let mut acc = DPPoly::zero(f, u.n);
    let mut pi_acc = DPPoly::zero(f, u.n);
    for (e, &c) in &u.terms {
        let term = DPPoly::monomial(f, e.clone(), c);
        // c^p = c in F_p
        let pi_term = pmap_monomial(f, e).scale(c);
        let mut next = pi_acc.add(&pi_term);
        for k in 1..p {
            let cross = dp_multiply(&dp_pow(&acc, k), &dp_pow(&term, p - k));
            next = next.add(&cross.scale(f.cocycle_coeff(k)));
        }
        acc = acc.add(&term);
        pi_acc = next;
    }
    pi_acc.within(budget)?;
    Ok(pi_acc)
}

/// `d_i(x_j^(r)) = δ_ij x_i^(r-1)`, extended to monomials by the product rule.
pub fn d_i(u: &DPPoly, i: usize) -> Result<DPPoly> {
    if i == 0 || i > u.n {
        return Err(Error::VariableOutOfRange { index: i, n: u.n });
    }
    let mut out = DPPoly::zero(u.field, u.n);
    for (e, &c) in &u.terms {
        if e[i - 1] > 0 {
            let mut t = e.clone();
            t[i - 1] -= 1;
            out.add_term(t, c);
        }
    }
    Ok(out)
}

/// `D = Σ f_i d_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpecialVectorField {
    components: Vec<DPPoly>,
}

impl SpecialVectorField {
    pub fn new(components: Vec<DPPoly>) -> Result<Self> {
        let n = components.len();
        if let Some(c) = components.iter().find(|c| c.nvars() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: c.nvars() });
        }
        Ok(SpecialVectorField { components })
    }

    /// The lowering operator `d_i`.
    pub fn basis_field(field: Fp, n: usize, i: usize) -> Self {
        let mut comps = vec![DPPoly::zero(field, n); n];
        comps[i - 1] = DPPoly::one(field, n);
        SpecialVectorField { components: comps }
    }

    pub fn components(&self) -> &[DPPoly] {
        &self.components
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn apply(&self, u: &DPPoly) -> DPPoly {
        let mut out = DPPoly::zero(u.field, u.n);
        for (i, f) in self.components.iter().enumerate() {
            out = out.add(&dp_multiply(f, &d_i(u, i + 1).expect("index in range")));
        }
        out
    }

    pub fn check_beck_identity(&self, a: &DPPoly, budget: &DpBudget) -> Result<Option<String>> {
        check_beck_identity(|u| Ok(self.apply(u)), a, budget)
    }
}

impl fmt::Display for SpecialVectorField {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            write!(out, "({c}) d{}", i + 1)?;
        }
        if first {
            write!(out, "0")?;
        }
        Ok(())
    }
}

/// Compares `D(π(a))` with `γ_{p-1}(a) D(a)` for an arbitrary operator `D`.
/// Returns a witness string when they differ.
pub fn check_beck_identity<D>(d: D, a: &DPPoly, budget: &DpBudget) -> Result<Option<String>>
where
    D: Fn(&DPPoly) -> Result<DPPoly>,
{
    if a.constant_term() != 0 {
        return Err(Error::NonzeroConstantTerm);
    }
    let p = a.field.p();
    let lhs = d(&dp_pmap(a, budget)?)?;
    let rhs = dp_multiply(&gamma_small(a, p - 1), &d(a)?);
    Ok((lhs != rhs).then(|| format!("a = {a}: D(π(a)) = {lhs} but γ_(p-1)(a) D(a) = {rhs}")))
}

/// `[Σ f_i d_i, Σ g_j d_j] = Σ_j (Σ_i f_i d_i(g_j) - g_i d_i(f_j)) d_j`.
pub fn witt_bracket(d1: &SpecialVectorField, d2: &SpecialVectorField) -> Result<SpecialVectorField> {
    if d1.nvars() != d2.nvars() {
        return Err(Error::DimensionMismatch { expected: d1.nvars(), found: d2.nvars() });
    }
    let comps = (0..d1.nvars()).map(|j| d1.apply(&d2.components[j]).sub(&d2.apply(&d1.components[j]))).collect();
    SpecialVectorField::new(comps)
}

/// A random element with at most `terms` terms of degree `≤ max_degree`,
/// without constant term when `plus`.
pub fn random_dppoly<R: Rng>(rng: &mut R, field: Fp, n: usize, max_degree: u64, terms: usize, plus: bool) -> DPPoly {
    let mut u = DPPoly::zero(field, n);
    let lo = u64::from(plus);
    if max_degree < lo {
        return u;
    }
    for _ in 0..terms {
        let deg = rng.gen_range(lo..=max_degree);
        let mut e = vec![0; n];
        for _ in 0..deg {
            e[rng.gen_range(0..n)] += 1;
        }
        u.add_term(e, rng.gen_range(1..field.p()));
    }
    u
}

pub fn random_special_field<R: Rng>(rng: &mut R, field: Fp, n: usize, max_degree: u64, terms: usize) -> SpecialVectorField {
    SpecialVectorField { components: (0..n).map(|_| random_dppoly(rng, field, n, max_degree, terms, false)).collect() }
}

/// Sizes for [`witt_battery`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WittBattery {
    pub trials: usize,
    pub elements: usize,
    pub pairs: usize,
    pub seed: u64,
    pub budget: DpBudget,
}

impl Default for WittBattery {
    fn default() -> Self {
        WittBattery { trials: 200, elements: 10, pairs: 50, seed: 0, budget: DpBudget::default() }
    }
}

/// Random special fields against the identity `D(π(a)) = γ_{p-1}(a) D(a)`,
/// the lowering operators on `x_j^(r)` for `r ≤ 9`, closure and the Jacobi
/// identity for brackets, and `d_1` at `a = x_1`.
pub fn witt_battery(field: Fp, n: usize, cfg: &WittBattery) -> Result<Report> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    let budget = &cfg.budget;
    // elements of degree ≤ d have p-th divided powers of degree ≤ pd
    let elem_degree = (budget.max_degree / field.p()).clamp(1, 3);
    let mut report = Report::new();

    let mut failures = 0;
    let mut witness = None;
    for _ in 0..cfg.trials {
        let d = random_special_field(&mut rng, field, n, 3, 3);
        for _ in 0..cfg.elements {
            let a = random_dppoly(&mut rng, field, n, elem_degree, 3, true);
            if let Some(w) = d.check_beck_identity(&a, budget)? {
                failures += 1;
                witness.get_or_insert(format!("D = {d}; {w}"));
            }
        }
    }
    report.push(
        Check::from_witness("special-fields", witness)
            .dim("fields", cfg.trials)
            .dim("elements", cfg.elements)
            .dim("failures", failures),
    );

    let mut witness = None;
    let mut cases = 0;
    for i in 1..=n {
        for j in 1..=n {
            for r in 1..=9 {
                cases += 1;
                let got = d_i(&DPPoly::var_power(field, n, j, r), i)?;
                let mut e = vec![0; n];
                e[j - 1] = r - 1;
                let want = if i == j { DPPoly::monomial(field, e, 1) } else { DPPoly::zero(field, n) };
                if got != want && witness.is_none() {
                    witness = Some(format!("d{i}(x{j}^({r})) = {got}"));
                }
            }
        }
    }
    report.push(Check::from_witness("lowering-operators", witness).dim("cases", cases));

    let mut witness = None;
    let mut jacobi = None;
    for _ in 0..cfg.pairs {
        let u = random_special_field(&mut rng, field, n, 2, 2);
        let v = random_special_field(&mut rng, field, n, 2, 2);
        let w = random_special_field(&mut rng, field, n, 2, 2);
        let uv = witt_bracket(&u, &v)?;
        for _ in 0..5 {
            let a = random_dppoly(&mut rng, field, n, elem_degree, 3, true);
            if let Some(fail) = uv.check_beck_identity(&a, budget)? {
                witness.get_or_insert(format!("[{u}, {v}]: {fail}"));
            }
        }
        let terms = [witt_bracket(&u, &witt_bracket(&v, &w)?)?, witt_bracket(&v, &witt_bracket(&w, &u)?)?, witt_bracket(&w, &uv)?];
        let nonzero = (0..n).any(|i| !terms[0].components[i].add(&terms[1].components[i]).add(&terms[2].components[i]).is_zero());
        if nonzero {
            jacobi.get_or_insert(format!("u = {u}, v = {v}, w = {w}"));
        }
    }
    report.push(Check::from_witness("brackets-special", witness).dim("pairs", cfg.pairs));
    report.push(Check::from_witness("jacobi", jacobi).dim("triples", cfg.pairs));

    let d1 = SpecialVectorField::basis_field(field, n, 1);
    let x1 = DPPoly::var_power(field, n, 1, 1);
    report.push(Check::from_witness("d1-at-x1", d1.check_beck_identity(&x1, budget)?).note(TRUNCATION_NOTE));
    Ok(report)
}

/// Why `d_1` is special in O(n) but `d/dx` is not a Beck derivation of O(1;1).
pub const TRUNCATION_NOTE: &str = "in O(n) the p-map sends x to x^(p) and d_1(x^(p)) = x^(p-1) = γ_(p-1)(x); \
in the truncation O(1;1) the element x^(p) is missing, so π(x) = 0 and the identity would force x^(p-1) = 0, \
which excludes the constant field d/dx there";

#[cfg(test)]
mod tests;
