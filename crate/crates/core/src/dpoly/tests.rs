use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;

fn f(p: u64) -> Fp {
    Fp::new(p).unwrap()
}

fn x(p: u64, r: u64) -> DPPoly {
    DPPoly::var_power(f(p), 1, 1, r)
}

fn fact(n: u64) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, i| acc * i)
}

fn to_fp(v: &BigInt, p: u64) -> u64 {
    let r = v % BigInt::from(p);
    let r = if r < BigInt::from(0) { r + BigInt::from(p) } else { r };
    u64::try_from(r).unwrap()
}

/// Product over the integers: x^(a) x^(b) = (a+b)!/(a! b!) x^(a+b) per variable.
fn multiply_oracle(u: &DPPoly, v: &DPPoly) -> DPPoly {
    let p = u.field().p();
    let mut terms = Vec::new();
    for (a, cu) in u.terms() {
        for (b, cv) in v.terms() {
            let mut c = BigInt::from(cu * cv);
            for (&ai, &bi) in a.iter().zip(b) {
                c = c * fact(ai + bi) / (fact(ai) * fact(bi));
            }
            terms.push((a.iter().zip(b).map(|(s, t)| s + t).collect(), to_fp(&c, p)));
        }
    }
    DPPoly::from_terms(u.field(), u.nvars(), terms)
}

/// `γ_p(u) = u^p / p!` evaluated over the integers: with `x^(a) = x^a / a!`,
/// the coefficient of `x^(N)` is `Σ_{ordered p-tuples} Π c · Π_j N_j! / Π r_{i,j}!`
/// divided by `p!`.
fn pmap_oracle(u: &DPPoly) -> DPPoly {
    let p = u.field().p();
    let n = u.nvars();
    let terms: Vec<(Vec<u64>, u64)> = u.terms().map(|(e, c)| (e.clone(), c)).collect();
    let t = terms.len();
    let mut sums: BTreeMap<Vec<u64>, BigInt> = BTreeMap::new();
    for code in 0..t.pow(p as u32) {
        let mut c = code;
        let mut idx = Vec::new();
        for _ in 0..p {
            idx.push(c % t);
            c /= t;
        }
        let mut total = vec![0; n];
        let mut coeff = BigInt::from(1);
        for &i in &idx {
            coeff *= terms[i].1;
            for (tj, &e) in total.iter_mut().zip(&terms[i].0) {
                *tj += e;
            }
        }
        let mut num = coeff;
        for (j, &t) in total.iter().enumerate().take(n) {
            num *= fact(t);
            for &i in &idx {
                num /= fact(terms[i].0[j]);
            }
        }
        *sums.entry(total).or_insert_with(|| BigInt::from(0)) += num;
    }
    let pf = fact(p);
    DPPoly::from_terms(
        u.field(),
        n,
        sums.into_iter().map(|(e, s)| {
            assert_eq!(&s % &pf, BigInt::from(0), "u^p/p! has integral coefficients");
            (e, to_fp(&(s / &pf), p))
        }),
    )
}

#[test]
fn multiplication_examples() {
    assert_eq!(dp_multiply(&x(3, 1), &x(3, 1)), x(3, 2).scale(2));
    assert!(dp_multiply(&x(3, 2), &x(3, 1)).is_zero());
    let x1x2 = DPPoly::monomial(f(3), vec![1, 1], 1);
    let x1 = DPPoly::var_power(f(3), 2, 1, 1);
    assert_eq!(dp_multiply(&x1x2, &x1), DPPoly::monomial(f(3), vec![2, 1], 2));
}

#[test]
fn multiplication_matches_integer_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for p in [2, 3, 5] {
        for n in 1..=3 {
            for _ in 0..40 {
                let u = random_dppoly(&mut rng, f(p), n, 8, 4, false);
                let v = random_dppoly(&mut rng, f(p), n, 8, 4, false);
                assert_eq!(dp_multiply(&u, &v), multiply_oracle(&u, &v), "p={p} u={u} v={v}");
            }
        }
    }
}

#[test]
fn multiplication_is_associative_and_commutative() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for p in [2, 3, 5] {
        for n in 1..=3 {
            for _ in 0..112 {
                let [a, b, c] = [0; 3].map(|_| random_dppoly(&mut rng, f(p), n, 8, 3, false));
                assert_eq!(dp_multiply(&a, &b), dp_multiply(&b, &a));
                assert_eq!(dp_multiply(&dp_multiply(&a, &b), &c), dp_multiply(&a, &dp_multiply(&b, &c)));
            }
        }
    }
}

#[test]
fn pth_powers_vanish_on_the_augmentation_ideal() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for p in [2, 3, 5] {
        for n in 1..=3 {
            for _ in 0..30 {
                let u = random_dppoly(&mut rng, f(p), n, 4, 3, true);
                assert!(dp_pow(&u, p).is_zero(), "p={p} u={u}");
            }
        }
    }
}

#[test]
fn pmap_examples() {
    let b = DpBudget::default();
    assert_eq!(dp_pmap(&x(3, 1), &b).unwrap(), x(3, 3));
    assert_eq!(dp_pmap(&x(3, 3), &DpBudget { max_degree: 27, max_terms: 64 }).unwrap(), x(3, 9));
    assert_eq!(dp_pmap(&x(3, 1).add(&x(3, 2)), &b).unwrap(), x(3, 3));
    assert_eq!(dp_pmap(&DPPoly::one(f(3), 1), &b), Err(Error::NonzeroConstantTerm));
    assert!(matches!(dp_pmap(&x(3, 5), &b), Err(Error::BudgetExceeded(_))));
}

#[test]
fn pmap_matches_integer_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let budget = DpBudget { max_degree: 40, max_terms: 1000 };
    for p in [2, 3, 5] {
        for n in 1..=2 {
            for _ in 0..25 {
                let u = random_dppoly(&mut rng, f(p), n, 4, 3, true);
                assert_eq!(dp_pmap(&u, &budget).unwrap(), pmap_oracle(&u), "p={p} u={u}");
            }
        }
    }
}

#[test]
fn pmap_addition_rule_on_random_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let budget = DpBudget { max_degree: 40, max_terms: 1000 };
    for p in [2, 3] {
        for _ in 0..30 {
            let [a, b, c] = [0; 3].map(|_| random_dppoly(&mut rng, f(p), 2, 3, 2, true));
            let direct = dp_pmap(&a.add(&b).add(&c), &budget).unwrap();
            let bc = b.add(&c);
            let mut split = dp_pmap(&a, &budget).unwrap().add(&dp_pmap(&bc, &budget).unwrap());
            for k in 1..p {
                let term = dp_multiply(&dp_pow(&a, k), &dp_pow(&bc, p - k));
                split = split.add(&term.scale(f(p).cocycle_coeff(k)));
            }
            assert_eq!(direct, split);
        }
    }
}

#[test]
fn lowering_operators() {
    let x1_2_x2 = DPPoly::monomial(f(3), vec![2, 1], 1);
    assert_eq!(d_i(&x1_2_x2, 1).unwrap(), DPPoly::monomial(f(3), vec![1, 1], 1));
    assert!(d_i(&DPPoly::var_power(f(3), 2, 2, 5), 1).unwrap().is_zero());
    assert!(d_i(&DPPoly::one(f(3), 2), 1).unwrap().is_zero());
    assert!(matches!(d_i(&x1_2_x2, 3), Err(Error::VariableOutOfRange { .. })));
    for n in 1..=2 {
        for i in 1..=n {
            for j in 1..=n {
                for r in 1..=9 {
                    let got = d_i(&DPPoly::var_power(f(3), n, j, r), i).unwrap();
                    let want = if i == j { DPPoly::var_power(f(3), n, j, r - 1) } else { DPPoly::zero(f(3), n) };
                    assert_eq!(got, want);
                }
            }
        }
    }
}

#[test]
fn beck_identity_examples() {
    let b = DpBudget::default();
    let d1 = SpecialVectorField::basis_field(f(3), 1, 1);
    assert_eq!(d1.check_beck_identity(&x(3, 1), &b).unwrap(), None);
    let d1_2 = SpecialVectorField::basis_field(f(3), 2, 1);
    assert_eq!(d1_2.check_beck_identity(&DPPoly::var_power(f(3), 2, 2, 1), &b).unwrap(), None);
    assert_eq!(d1.check_beck_identity(&DPPoly::one(f(3), 1), &b), Err(Error::NonzeroConstantTerm));

    // d_1 except that x^(3) is sent to 0
    let broken = |u: &DPPoly| {
        let kept = DPPoly::from_terms(f(3), 1, u.terms().filter(|(e, _)| e[0] != 3).map(|(e, c)| (e.clone(), c)));
        d_i(&kept, 1)
    };
    let w = check_beck_identity(broken, &x(3, 1), &b).unwrap();
    assert!(w.unwrap().contains("x(2)"));
}

#[test]
fn bracket_examples() {
    let d1 = SpecialVectorField::basis_field(f(3), 2, 1);
    let d2 = SpecialVectorField::basis_field(f(3), 2, 2);
    let zero = SpecialVectorField::new(vec![DPPoly::zero(f(3), 2); 2]).unwrap();
    assert_eq!(witt_bracket(&d1, &d2).unwrap(), zero);
    assert_eq!(witt_bracket(&d1, &d1).unwrap(), zero);
    let x1d1 = SpecialVectorField::new(vec![DPPoly::var_power(f(3), 2, 1, 1), DPPoly::zero(f(3), 2)]).unwrap();
    let minus_d1 = SpecialVectorField::new(vec![DPPoly::one(f(3), 2).scale(2), DPPoly::zero(f(3), 2)]).unwrap();
    assert_eq!(witt_bracket(&x1d1, &d1).unwrap(), minus_d1);
}

#[test]
fn random_special_fields_satisfy_the_beck_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let b = DpBudget::default();
    for n in 1..=2 {
        for _ in 0..40 {
            let d = random_special_field(&mut rng, f(3), n, 3, 3);
            for _ in 0..5 {
                let a = random_dppoly(&mut rng, f(3), n, 3, 3, true);
                assert_eq!(d.check_beck_identity(&a, &b).unwrap(), None, "D = {d}");
            }
        }
    }
}

#[test]
fn brackets_satisfy_jacobi_and_stay_special() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let b = DpBudget::default();
    for _ in 0..20 {
        let [u, v, w] = [0; 3].map(|_| random_special_field(&mut rng, f(3), 2, 2, 2));
        let uv = witt_bracket(&u, &v).unwrap();
        let jac = [
            witt_bracket(&u, &witt_bracket(&v, &w).unwrap()).unwrap(),
            witt_bracket(&v, &witt_bracket(&w, &u).unwrap()).unwrap(),
            witt_bracket(&w, &uv).unwrap(),
        ];
        for i in 0..2 {
            let s = jac[0].components()[i].add(&jac[1].components()[i]).add(&jac[2].components()[i]);
            assert!(s.is_zero());
        }
        let a = random_dppoly(&mut rng, f(3), 2, 3, 2, true);
        assert_eq!(uv.check_beck_identity(&a, &b).unwrap(), None);
    }
}

#[test]
fn witt_battery_passes() {
    for n in 1..=2 {
        let cfg = WittBattery { trials: 30, elements: 4, pairs: 10, seed: 9, ..WittBattery::default() };
        let r = witt_battery(f(3), n, &cfg).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.get("special-fields").unwrap().dims["failures"], 0);
        assert_eq!(r.get("lowering-operators").unwrap().dims["cases"], 9 * n * n);
    }
}
