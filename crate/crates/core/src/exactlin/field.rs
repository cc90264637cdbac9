use serde::Serialize;

use crate::error::{Error, Result};

/// Largest admissible modulus. Products of two residues stay below 2^62.
pub const MAX_PRIME: u64 = 1 << 31;

/// The prime field F_p.
///
/// Elements are plain `u64` residues in `[0, p)`; the field value carries only
/// the modulus, so vectors and matrices store bare residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..=MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(Error::NonPrimeModulus(p));
        }
        Ok(Fp { p })
    }

    #[inline]
    pub fn p(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(self, a: u64) -> u64 {
        a % self.p
    }

    pub fn from_i64(self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(self, a: u64) -> Result<u64> {
        let a = a % self.p;
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(self.from_i64(t0))
    }

    /// `(-1)^k / k`, the coefficient of `x^k y^(p-k)` in the p-map cocycle.
    pub fn cocycle_coeff(self, k: u64) -> u64 {
        let inv = self.inv(k).expect("1 <= k < p");
        if k % 2 == 1 {
            self.neg(inv)
        } else {
            inv
        }
    }
}

/// `a · mod_inverse(a) = 1 (mod p)`.
pub fn mod_inverse(field: Fp, a: u64) -> Result<u64> {
    field.inv(a)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Vector helpers over F_p. Vectors are dense `Vec<u64>` coordinate tuples.

pub fn zero_vec(n: usize) -> Vec<u64> {
    vec![0; n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

pub fn is_zero(v: &[u64]) -> bool {
    v.iter().all(|&x| x == 0)
}

impl Fp {
    /// `y += c·x`
    pub fn axpy(self, y: &mut [u64], c: u64, x: &[u64]) {
        debug_assert_eq!(y.len(), x.len());
        if c == 0 {
            return;
        }
        for (yi, &xi) in y.iter_mut().zip(x) {
            if xi != 0 {
                *yi = (*yi + c * xi) % self.p;
            }
        }
    }

    pub fn add_vec(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| self.add(x, y)).collect()
    }

    pub fn sub_vec(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| self.sub(x, y)).collect()
    }

    pub fn scale_vec(self, c: u64, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| self.mul(c, x)).collect()
    }

    pub fn neg_vec(self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| self.neg(x)).collect()
    }

    pub fn dot(self, a: &[u64], b: &[u64]) -> u64 {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| (acc + x * y) % self.p)
    }
}
