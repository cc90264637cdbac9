use std::sync::Arc;

use super::*;
use crate::algebra::{divided_power_algebra, shift_pmap, truncated_polynomial_algebra, FiniteCommAlgebra};
use crate::beckmod::{module_from_pmap_restriction, trivial_module};
use crate::exactlin::Fp;

fn f3() -> Fp {
    Fp::new(3).unwrap()
}

fn trunc() -> Arc<PdAlgebra> {
    Arc::new(truncated_polynomial_algebra(f3()).unwrap())
}

fn cube_with_pmap() -> Arc<PdAlgebra> {
    let base = truncated_polynomial_algebra(f3()).unwrap();
    let phi = vec![vec![0; 3], vec![0, 0, 1], vec![0; 3]];
    Arc::new(shift_pmap(&base, &phi).unwrap())
}

/// k[x]/x³ with an extra square-zero generator y (xy = 0), π(x) = x², π(y) = 0.
fn with_extra_nilpotent() -> Arc<PdAlgebra> {
    let labels = ["1", "x", "x2", "y"].map(String::from).to_vec();
    let alg = FiniteCommAlgebra::from_fn(f3(), labels, vec![1, 2, 3], |i, j| {
        let mut v = vec![0; 4];
        match (i, j) {
            (0, k) | (k, 0) => v[k] = 1,
            (1, 1) => v[2] = 1,
            _ => {}
        }
        v
    })
    .unwrap();
    Arc::new(PdAlgebra::new(alg, vec![vec![0; 4], vec![0, 0, 1, 0], vec![0; 4], vec![0; 4]]).unwrap())
}

fn idempotent_times_dual_numbers() -> Arc<PdAlgebra> {
    let labels = ["1", "e", "x", "ex"].map(String::from).to_vec();
    let alg = FiniteCommAlgebra::from_fn(f3(), labels, vec![2, 3], |i, j| {
        let (ei, xi) = (i & 1, i >> 1);
        let (ej, xj) = (j & 1, j >> 1);
        let mut v = vec![0; 4];
        if xi + xj < 2 {
            v[(ei | ej) + 2 * (xi + xj)] = 1;
        }
        v
    })
    .unwrap();
    Arc::new(PdAlgebra::with_zero_pmap(alg))
}

#[test]
fn localization_iso_and_degeneracy_classes() {
    let pd = trunc();
    let m = trivial_module(&pd);
    for (f, kind, dim) in [
        (vec![1, 1, 0], LocalizationKind::Unit, 3),
        (vec![1, 0, 0], LocalizationKind::Unit, 3),
        (vec![0, 1, 0], LocalizationKind::Nilpotent, 0),
    ] {
        let iso = verify_localization_iso(&m, &f, &Sampling::default()).unwrap();
        assert_eq!(iso.kind, kind);
        assert!(iso.report.passed(), "{:?}", iso.report);
        assert_eq!(iso.report.get("degeneracy-class").unwrap().dims["A_f"], dim);
    }
    let iso = verify_localization_iso(&m, &[1, 1, 0], &Sampling::default()).unwrap();
    assert!(iso.report.get("canonical-iso").unwrap().pass);
    assert_eq!(iso.report.get("der-p-transported").unwrap().dims["der-A"], 2);
}

#[test]
fn localization_iso_for_shifted_modules() {
    let ex = cube_with_pmap();
    let plus = module_from_pmap_restriction(&ex, &ex.algebra().plus_subspace(), &Sampling::default()).unwrap();
    for f in [vec![1, 1, 0], vec![2, 1, 1], vec![0, 0, 1]] {
        for m in [trivial_module(&ex), plus.clone()] {
            let iso = verify_localization_iso(&m, &f, &Sampling::default()).unwrap();
            assert!(iso.report.passed(), "{:?}", iso.report);
        }
    }
    let iso = verify_localization_iso(&trivial_module(&ex), &[1, 1, 0], &Sampling::default()).unwrap();
    assert_eq!(iso.report.get("der-p-transported").unwrap().dims["der-A_f"], 1);
}

#[test]
fn mixed_localization_is_reported() {
    let pd = idempotent_times_dual_numbers();
    let iso = verify_localization_iso(&trivial_module(&pd), &[0, 1, 0, 0], &Sampling::default()).unwrap();
    assert_eq!(iso.kind, LocalizationKind::Mixed);
    assert!(iso.report.passed(), "{:?}", iso.report);
    assert_eq!(iso.report.get("tau-bijective").unwrap().dims["M_f"], 2);
}

#[test]
fn localized_universal_derivation_is_beck() {
    for pd in [cube_with_pmap(), trunc(), with_extra_nilpotent()] {
        let one_plus_x = {
            let mut v = pd.algebra().one();
            v[1] = 1;
            v
        };
        for f in [pd.algebra().one(), one_plus_x] {
            let r = localized_universal_derivation(&pd, &f, &Sampling::default()).unwrap();
            assert!(r.passed(), "{:?}", r);
            assert!(r.get("d_f/beck-identity").unwrap().note.as_deref() == Some("exhaustive over A_+"));
        }
    }
    let o21 = Arc::new(divided_power_algebra(f3(), &[1, 1]).unwrap());
    let mut f = o21.algebra().one();
    f[1] = 2;
    let r = localized_universal_derivation(&o21, &f, &Sampling::default().with_samples(100)).unwrap();
    assert!(r.passed(), "{:?}", r);
}

#[test]
fn nilpotent_localization_has_no_universal_derivation() {
    let pd = trunc();
    assert_eq!(localized_universal_derivation(&pd, &[0, 1, 0], &Sampling::default()), Err(Error::ZeroLocalization));
}
