//! p-adic combinatorics: binomials by Lucas' theorem and the composite
//! divided-power coefficient `(pr)! / (p! (r!)^p)` reduced mod p.

use super::Fp;

/// `C(n, k) mod p` by Lucas' theorem. `k > n` gives 0.
pub fn binom_mod_p(n: u64, k: u64, field: Fp) -> u64 {
    if k > n {
        return 0;
    }
    let p = field.p();
    let (mut n, mut k) = (n, k);
    let mut acc = 1 % p;
    while k > 0 || n > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        acc = field.mul(acc, small_binom(ni, ki, field));
        n /= p;
        k /= p;
    }
    acc
}

/// `C(a, b) mod p` for `b <= a < p`, where every factor is a unit.
fn small_binom(a: u64, b: u64, field: Fp) -> u64 {
    let b = b.min(a - b);
    let mut num = 1;
    let mut den = 1;
    for i in 0..b {
        num = field.mul(num, a - i);
        den = field.mul(den, i + 1);
    }
    field.mul(num, field.inv(den).expect("den is a product of units"))
}

/// Legendre's formula: exponent of p in n!.
pub fn factorial_valuation(n: u64, p: u64) -> u64 {
    let mut v = 0;
    let mut m = n / p;
    while m > 0 {
        v += m;
        m /= p;
    }
    v
}

/// `n! / p^v(n!) mod p`, using the block identity
/// `u(n!) = (-1)^(n/p) · (n mod p)! · u((n/p)!)`.
pub fn factorial_unit_part(n: u64, field: Fp) -> u64 {
    let p = field.p();
    let mut acc = 1 % p;
    let mut m = n;
    while m > 0 {
        let r = m % p;
        for i in 2..=r {
            acc = field.mul(acc, i);
        }
        if (m / p) % 2 == 1 {
            acc = field.neg(acc);
        }
        m /= p;
    }
    acc
}

/// Coefficient `(pr)! / (p! (r!)^p) mod p` relating `γ_p(γ_r(x))` to `γ_{pr}(x)`.
///
/// The valuation is computed first; a positive valuation means the coefficient
/// vanishes in F_p. Otherwise the unit parts of the three factorials are combined.
pub fn dp_coeff(field: Fp, r: u64) -> u64 {
    let p = field.p();
    let n = p.checked_mul(r).expect("p·r must fit in u64");
    let v = factorial_valuation(n, p) as i128
        - factorial_valuation(p, p) as i128
        - p as i128 * factorial_valuation(r, p) as i128;
    debug_assert!(v >= 0, "the coefficient is an integer");
    if v > 0 {
        return 0;
    }
    let num = factorial_unit_part(n, field);
    let den_p = factorial_unit_part(p, field);
    let den_r = field.pow(factorial_unit_part(r, field), p);
    let den = field.mul(den_p, den_r);
    field.mul(num, field.inv(den).expect("unit parts are invertible"))
}
