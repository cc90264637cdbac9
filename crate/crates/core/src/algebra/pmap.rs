use super::FiniteCommAlgebra;
use crate::error::{Error, Result};
use crate::exactlin::{is_zero, Fp, Subspace};
use crate::report::{Check, Report};
use crate::sampling::{random_combination, sweep, sweep_projective, Sampling};

/// Images of the A_+ basis under a p-map, indexed by basis index
/// (entries for A_0 indices are kept at zero and never read).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PMap {
    images: Vec<Vec<u64>>,
}

impl PMap {
    pub fn images(&self) -> &[Vec<u64>] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &[u64] {
        &self.images[i]
    }
}

/// A pregraded algebra together with a p-map on its augmentation ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdAlgebra {
    algebra: FiniteCommAlgebra,
    pmap: PMap,
    // nil_powers of each A_+ basis element, cached for the evaluation fold
    basis_powers: Vec<Vec<Vec<u64>>>,
}

impl PdAlgebra {
    /// `images[i]` is π(e_i) for `i` in A_+; other entries must be zero.
    pub fn new(algebra: FiniteCommAlgebra, images: Vec<Vec<u64>>) -> Result<Self> {
        let d = algebra.dim();
        if images.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: images.len() });
        }
        let mut reduced = Vec::with_capacity(d);
        for (i, img) in images.into_iter().enumerate() {
            algebra.check_elem(&img)?;
            let img: Vec<u64> = img.iter().map(|&c| algebra.field().reduce(c)).collect();
            if !algebra.is_plus_index(i) {
                if !is_zero(&img) {
                    return Err(Error::InvalidAlgebra(format!("p-map given on {} which is not in A_+", algebra.label(i))));
                }
            } else if !algebra.in_plus(&img) {
                return Err(Error::NotInPlus(img));
            }
            reduced.push(img);
        }
        let basis_powers = (0..d)
            .map(|i| if algebra.is_plus_index(i) { algebra.nil_powers(&algebra.basis_vec(i)) } else { Vec::new() })
            .collect();
        Ok(PdAlgebra { algebra, pmap: PMap { images: reduced }, basis_powers })
    }

    pub fn with_zero_pmap(algebra: FiniteCommAlgebra) -> Self {
        let images = vec![algebra.zero(); algebra.dim()];
        Self::new(algebra, images).expect("zero images are valid")
    }

    pub fn algebra(&self) -> &FiniteCommAlgebra {
        &self.algebra
    }

    pub fn pmap(&self) -> &PMap {
        &self.pmap
    }

    pub fn field(&self) -> Fp {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Evaluates π on `u ∈ A_+`.
    pub fn pi(&self, u: &[u64]) -> Result<Vec<u64>> {
        self.algebra.check_elem(u)?;
        if !self.algebra.in_plus(u) {
            return Err(Error::NotInPlus(u.to_vec()));
        }
        Ok(self.pi_unchecked(u))
    }

    /// Evaluation by folding the basis expansion of `u` with the addition
    /// rule; `u` must lie in A_+.
    pub fn pi_unchecked(&self, u: &[u64]) -> Vec<u64> {
        let a = &self.algebra;
        let f = a.field();
        let mut acc = a.zero();
        let mut acc_pi = a.zero();
        let mut acc_powers: Vec<Vec<u64>> = Vec::new();
        for &i in a.plus_indices() {
            let lambda = f.reduce(u[i]);
            if lambda == 0 {
                continue;
            }
            f.axpy(&mut acc_pi, lambda, &self.pmap.images[i]);
            if !acc_powers.is_empty() {
                let s_powers: Vec<Vec<u64>> = self.basis_powers[i]
                    .iter()
                    .enumerate()
                    .map(|(j, e)| f.scale_vec(f.pow(lambda, j as u64 + 1), e))
                    .collect();
                let c = correction_from_powers(a, &acc_powers, &s_powers);
                f.axpy(&mut acc_pi, 1, &c);
            }
            acc[i] = f.add(acc[i], lambda);
            acc_powers = a.nil_powers(&acc);
        }
        acc_pi
    }

    /// The addition-rule correction `Σ_{k=1}^{p-1} ((-1)^k/k) x^k y^{p-k}`.
    pub fn correction(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        correction(&self.algebra, x, y)
    }

    /// π^{∘n}(u).
    pub fn pi_iter(&self, u: &[u64], n: u32) -> Result<Vec<u64>> {
        let mut v = u.to_vec();
        for _ in 0..n {
            v = self.pi(&v)?;
        }
        Ok(v)
    }

    pub fn fmt(&self, u: &[u64]) -> String {
        self.algebra.fmt(u)
    }
}

impl FiniteCommAlgebra {
    /// `[x, x^2, ..., x^m]` stopping before the first zero power or at `x^{p-1}`.
    pub fn nil_powers(&self, x: &[u64]) -> Vec<Vec<u64>> {
        let p = self.p();
        let mut out: Vec<Vec<u64>> = Vec::new();
        if is_zero(x) {
            return out;
        }
        out.push(x.to_vec());
        while (out.len() as u64) < p - 1 {
            let next = self.mul(out.last().expect("nonempty"), x);
            if is_zero(&next) {
                break;
            }
            out.push(next);
        }
        out
    }
}

fn correction_from_powers(a: &FiniteCommAlgebra, xs: &[Vec<u64>], ys: &[Vec<u64>]) -> Vec<u64> {
    let f = a.field();
    let p = f.p() as usize;
    let mut out = a.zero();
    for k in 1..=xs.len() {
        let j = p - k;
        if j == 0 || j > ys.len() {
            continue;
        }
        let term = a.mul(&xs[k - 1], &ys[j - 1]);
        f.axpy(&mut out, f.cocycle_coeff(k as u64), &term);
    }
    out
}

pub fn correction(a: &FiniteCommAlgebra, x: &[u64], y: &[u64]) -> Vec<u64> {
    correction_from_powers(a, &a.nil_powers(x), &a.nil_powers(y))
}

/// Checked evaluation of π on `u ∈ A_+`.
pub fn eval_pmap(pd: &PdAlgebra, u: &[u64]) -> Result<Vec<u64>> {
    pd.pi(u)
}

/// Shifts π by a linear map φ: A_+ → A_+ vanishing on A_+^2.
/// `phi[i]` is φ(e_i) for A_+ indices; other entries are ignored.
pub fn shift_pmap(pd: &PdAlgebra, phi: &[Vec<u64>]) -> Result<PdAlgebra> {
    let a = pd.algebra();
    let f = a.field();
    if phi.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: phi.len() });
    }
    for &i in a.plus_indices() {
        a.check_elem(&phi[i])?;
        if !a.in_plus(&phi[i]) {
            return Err(Error::InvalidShift(format!("φ({}) = {} is not in A_+", a.label(i), a.fmt(&phi[i]))));
        }
    }
    let apply = |v: &[u64]| {
        let mut out = a.zero();
        for &i in a.plus_indices() {
            f.axpy(&mut out, v[i], &phi[i]);
        }
        out
    };
    for v in a.plus_squared().basis() {
        let w = apply(v);
        if !is_zero(&w) {
            return Err(Error::InvalidShift(format!("φ({}) = {}", a.fmt(v), a.fmt(&w))));
        }
    }
    let images = (0..a.dim())
        .map(|i| if a.is_plus_index(i) { f.add_vec(pd.pmap().image(i), &phi[i]) } else { a.zero() })
        .collect();
    PdAlgebra::new(a.clone(), images)
}

const STREAM_PAIRS: u64 = 11;
const STREAM_TRIPLES: u64 = 12;
const STREAM_SYMMETRY: u64 = 13;
const STREAM_PRODUCTS: u64 = 14;
const STREAM_SCALING: u64 = 15;

fn permutations3() -> [[usize; 3]; 6] {
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

/// Verifies the p-map axioms. Pair checks are exhaustive when the number of
/// pairs is within `sampling.exhaustive_cap`, sampled otherwise.
///
/// `π(uv) = 0` is checked exhaustively whenever `|A_+|` is within the cap:
/// for fixed `u`, π restricted to `u·A_+` is additive and homogeneous (every
/// correction term carries a factor `u^p = 0`), so it suffices to test a basis
/// of `u·A_+`, and it suffices to let `u` run over projective representatives.
pub fn verify_pmap_axioms(pd: &PdAlgebra, sampling: &Sampling) -> Report {
    let a = pd.algebra();
    let f = a.field();
    let d = a.dim();
    let mut report = Report::new();
    let plus = a.plus_basis();
    let plus_count = a.plus_subspace().cardinality();

    let img = a.plus_indices().iter().find_map(|&i| {
        let v = pd.pmap().image(i);
        (!a.in_plus(v)).then(|| format!("π({}) = {}", a.label(i), a.fmt(v)))
    });
    report.push(Check::from_witness("image-in-A+", img));

    let nil = a.plus_indices().iter().find_map(|&i| {
        let v = a.pow(&a.basis_vec(i), f.p());
        (!is_zero(&v)).then(|| format!("{}^{} = {}", a.label(i), f.p(), a.fmt(&v)))
    });
    report.push(Check::from_witness("nilpotence x^p=0", nil).dim("plus-basis", plus.len()));

    // additivity: π(x+y) = π(x) + π(y) + corr(x,y)
    let pair_exhaustive = plus_count.checked_mul(plus_count).is_some_and(|n| n <= sampling.exhaustive_cap);
    let mut witness = None;
    let mut visited = 0usize;
    let mut check_pair = |x: &[u64], y: &[u64]| -> bool {
        visited += 1;
        let lhs = pd.pi_unchecked(&f.add_vec(x, y));
        let mut rhs = f.add_vec(&pd.pi_unchecked(x), &pd.pi_unchecked(y));
        f.axpy(&mut rhs, 1, &pd.correction(x, y));
        if lhs != rhs {
            witness = Some(format!("x = {}, y = {}: π(x+y) = {} but π(x)+π(y)+corr = {}", a.fmt(x), a.fmt(y), a.fmt(&lhs), a.fmt(&rhs)));
            return false;
        }
        true
    };
    if pair_exhaustive {
        let all = Sampling { exhaustive_cap: u64::MAX, ..*sampling };
        let mut xs = Vec::new();
        sweep(f, d, &plus, &all, 0, |x| {
            xs.push(x.to_vec());
            true
        });
        'pairs: for x in &xs {
            for y in &xs {
                if !check_pair(x, y) {
                    break 'pairs;
                }
            }
        }
    } else {
        let mut rng = sampling.rng(STREAM_PAIRS);
        for _ in 0..sampling.samples {
            let x = random_combination(f, d, &plus, &mut rng);
            let y = random_combination(f, d, &plus, &mut rng);
            if !check_pair(&x, &y) {
                break;
            }
        }
    }
    report.push(
        Check::from_witness("additivity", witness)
            .dim("pairs", visited)
            .note(if pair_exhaustive { "exhaustive" } else { "sampled" }),
    );

    // order independence of the fold on triples
    let mut rng = sampling.rng(STREAM_TRIPLES);
    let mut witness = None;
    let trials = if plus.is_empty() { 0 } else { sampling.samples };
    for _ in 0..trials {
        let t: Vec<Vec<u64>> = (0..3).map(|_| random_combination(f, d, &plus, &mut rng)).collect();
        let direct = pd.pi_unchecked(&f.add_vec(&f.add_vec(&t[0], &t[1]), &t[2]));
        for perm in permutations3() {
            let (mut s, mut ps) = (t[perm[0]].clone(), pd.pi_unchecked(&t[perm[0]]));
            for &k in &perm[1..] {
                let c = pd.correction(&s, &t[k]);
                ps = f.add_vec(&f.add_vec(&ps, &pd.pi_unchecked(&t[k])), &c);
                s = f.add_vec(&s, &t[k]);
            }
            if ps != direct {
                witness = Some(format!("order {:?} on ({}), ({}), ({}) gives {} vs {}", perm, a.fmt(&t[0]), a.fmt(&t[1]), a.fmt(&t[2]), a.fmt(&ps), a.fmt(&direct)));
                break;
            }
        }
        if witness.is_some() {
            break;
        }
    }
    report.push(Check::from_witness("fold-order-independence", witness).dim("triples", trials));

    let mut rng = sampling.rng(STREAM_SYMMETRY);
    let mut witness = None;
    for _ in 0..trials {
        let x = random_combination(f, d, &plus, &mut rng);
        let y = random_combination(f, d, &plus, &mut rng);
        let (c1, c2) = (pd.correction(&x, &y), pd.correction(&y, &x));
        if c1 != c2 {
            witness = Some(format!("corr({}, {}) = {} but swapped gives {}", a.fmt(&x), a.fmt(&y), a.fmt(&c1), a.fmt(&c2)));
            break;
        }
    }
    report.push(Check::from_witness("correction-symmetry", witness).dim("pairs", trials));

    // π(uv) = 0
    let mut witness = None;
    let exhaustive = plus_count <= sampling.exhaustive_cap;
    let mut visited = 0usize;
    if exhaustive {
        let all = Sampling { exhaustive_cap: u64::MAX, ..*sampling };
        visited = sweep_projective(f, d, &plus, &all, STREAM_PRODUCTS, |u| {
            let products: Vec<Vec<u64>> = plus.iter().map(|e| a.mul(u, e)).collect();
            let w = Subspace::span(f, d, &products);
            for b in w.basis() {
                let v = pd.pi_unchecked(b);
                if !is_zero(&v) {
                    witness = Some(format!("u = {}: π({}) = {} although {} lies in u·A_+", a.fmt(u), a.fmt(b), a.fmt(&v), a.fmt(b)));
                    return false;
                }
            }
            true
        })
        .visited;
    } else {
        let mut rng = sampling.rng(STREAM_PRODUCTS);
        for _ in 0..sampling.samples {
            visited += 1;
            let u = random_combination(f, d, &plus, &mut rng);
            let v = random_combination(f, d, &plus, &mut rng);
            let uv = a.mul(&u, &v);
            let w = pd.pi_unchecked(&uv);
            if !is_zero(&w) {
                witness = Some(format!("u = {}, v = {}: π(uv) = {}", a.fmt(&u), a.fmt(&v), a.fmt(&w)));
                break;
            }
        }
    }
    report.push(
        Check::from_witness("product-vanishing", witness)
            .dim("elements", visited)
            .note(if exhaustive { "exhaustive over u, reduced to a basis of u·A_+" } else { "sampled pairs" }),
    );

    // scaling by A_0 basis elements and scalars
    let zero_basis: Vec<usize> = a.zero_part_indices();
    let mut witness = None;
    let mut rng = sampling.rng(STREAM_SCALING);
    let cov = sweep(f, d, &plus, sampling, STREAM_SCALING, |x| {
        let px = pd.pi_unchecked(x);
        for &j in &zero_basis {
            let a0 = a.basis_vec(j);
            let lhs = pd.pi_unchecked(&a.mul(&a0, x));
            let rhs = a.mul(&a.pow(&a0, f.p()), &px);
            if lhs != rhs {
                witness = Some(format!("a0 = {}, x = {}: π(a0 x) = {} but a0^p π(x) = {}", a.label(j), a.fmt(x), a.fmt(&lhs), a.fmt(&rhs)));
                return false;
            }
        }
        let lambda = rand::Rng::gen_range(&mut rng, 0..f.p());
        let lhs = pd.pi_unchecked(&f.scale_vec(lambda, x));
        let rhs = f.scale_vec(lambda, &px);
        if lhs != rhs {
            witness = Some(format!("λ = {lambda}, x = {}: π(λx) = {} but λπ(x) = {}", a.fmt(x), a.fmt(&lhs), a.fmt(&rhs)));
            return false;
        }
        true
    });
    report.push(
        Check::from_witness("A0-scaling", witness)
            .dim("elements", cov.visited)
            .dim("A0-basis", zero_basis.len())
            .note(if cov.exhaustive { "exhaustive" } else { "sampled" }),
    );
    report
}
