//! Exhaustive-or-sampled sweeps over the elements of a subspace.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactlin::Fp;

/// Controls how element sweeps are performed: every element when the
/// subspace has at most `exhaustive_cap` elements, otherwise `samples`
/// uniformly random elements drawn from a generator seeded with `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampling {
    pub exhaustive_cap: u64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { exhaustive_cap: 10_000, samples: 1_000, seed: 0 }
    }
}

impl Sampling {
    pub fn with_cap(self, exhaustive_cap: u64) -> Self {
        Sampling { exhaustive_cap, ..self }
    }

    pub fn with_samples(self, samples: usize) -> Self {
        Sampling { samples, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Sampling { seed, ..self }
    }

    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// How much of a space a sweep covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coverage {
    pub exhaustive: bool,
    pub visited: usize,
}

fn count(p: u64, r: usize) -> Option<u64> {
    p.checked_pow(r as u32)
}

/// Visits `Σ c_i b_i` for every coefficient tuple (or random samples).
/// The visitor returns `false` to stop early.
pub fn sweep<F>(field: Fp, ambient: usize, basis: &[Vec<u64>], sampling: &Sampling, stream: u64, mut visit: F) -> Coverage
where
    F: FnMut(&[u64]) -> bool,
{
    let r = basis.len();
    let p = field.p();
    let exhaustive = count(p, r).is_some_and(|n| n <= sampling.exhaustive_cap);
    let mut visited = 0;
    if exhaustive {
        let mut coeffs = vec![0u64; r];
        let mut v = vec![0u64; ambient];
        loop {
            visited += 1;
            if !visit(&v) {
                break;
            }
            // odometer increment, updating v incrementally
            let mut i = 0;
            loop {
                if i == r {
                    return Coverage { exhaustive, visited };
                }
                coeffs[i] += 1;
                field.axpy(&mut v, 1, &basis[i]);
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
        }
    } else {
        let mut rng = sampling.rng(stream);
        for _ in 0..sampling.samples {
            let v = random_combination(field, ambient, basis, &mut rng);
            visited += 1;
            if !visit(&v) {
                break;
            }
        }
    }
    Coverage { exhaustive, visited }
}

/// Like [`sweep`] but over projective representatives: nonzero combinations
/// whose first nonzero coefficient is 1. Sufficient for checks that are
/// homogeneous under scalars.
pub fn sweep_projective<F>(
    field: Fp,
    ambient: usize,
    basis: &[Vec<u64>],
    sampling: &Sampling,
    stream: u64,
    mut visit: F,
) -> Coverage
where
    F: FnMut(&[u64]) -> bool,
{
    let r = basis.len();
    let p = field.p();
    let exhaustive = count(p, r).is_some_and(|n| n <= sampling.exhaustive_cap);
    if !exhaustive {
        let mut rng = sampling.rng(stream);
        let mut visited = 0;
        for _ in 0..sampling.samples {
            let v = random_combination(field, ambient, basis, &mut rng);
            visited += 1;
            if !visit(&v) {
                break;
            }
        }
        return Coverage { exhaustive, visited };
    }
    let mut visited = 0;
    // leading index `lead` carries coefficient 1, indices after it are free
    for lead in 0..r {
        let tail = &basis[lead + 1..];
        let mut coeffs = vec![0u64; tail.len()];
        let mut v = basis[lead].clone();
        'odometer: loop {
            visited += 1;
            if !visit(&v) {
                return Coverage { exhaustive, visited };
            }
            let mut i = 0;
            loop {
                if i == tail.len() {
                    break 'odometer;
                }
                coeffs[i] += 1;
                field.axpy(&mut v, 1, &tail[i]);
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
        }
    }
    Coverage { exhaustive, visited }
}

pub fn random_combination<R: Rng>(field: Fp, ambient: usize, basis: &[Vec<u64>], rng: &mut R) -> Vec<u64> {
    let mut v = vec![0u64; ambient];
    for b in basis {
        let c = rng.gen_range(0..field.p());
        field.axpy(&mut v, c, b);
    }
    v
}
