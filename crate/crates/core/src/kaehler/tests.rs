use std::sync::Arc;

use super::*;
use crate::algebra::{divided_power_algebra, shift_pmap, truncated_polynomial_algebra, FiniteCommAlgebra, PdAlgebra};
use crate::beckmod::{
    module_from_pmap_restriction, section_homs_bruteforce, trivial_module, zero_module, DEFAULT_SECTION_CAP,
};
use crate::exactlin::{Fp, Matrix, Subspace};
use crate::sampling::Sampling;

fn f(p: u64) -> Fp {
    Fp::new(p).unwrap()
}

fn trunc(p: u64) -> Arc<PdAlgebra> {
    Arc::new(truncated_polynomial_algebra(f(p)).unwrap())
}

fn cube_with_pmap() -> Arc<PdAlgebra> {
    let base = truncated_polynomial_algebra(f(3)).unwrap();
    let phi = vec![vec![0; 3], vec![0, 0, 1], vec![0; 3]];
    Arc::new(shift_pmap(&base, &phi).unwrap())
}

fn o(p: u64, m: &[u32]) -> Arc<PdAlgebra> {
    Arc::new(divided_power_algebra(f(p), m).unwrap())
}

fn ground() -> Arc<PdAlgebra> {
    Arc::new(PdAlgebra::with_zero_pmap(FiniteCommAlgebra::ground_field(f(3))))
}

fn quick() -> Sampling {
    Sampling::default().with_samples(200)
}

#[test]
fn kaehler_dimensions() {
    let k = kaehler_differentials(&trunc(3), &Sampling::default()).unwrap();
    assert_eq!(k.tensor.algebra.dim(), 9);
    assert_eq!(k.i.dim(), 6);
    assert_eq!(k.i2.dim(), 3);
    assert_eq!(k.dim(), 3);
    assert!(k.report.passed(), "{:?}", k.report);
    assert_eq!(k.module.labels(), ["dx", "x·dx", "x2·dx"]);

    let k = kaehler_differentials(&ground(), &Sampling::default()).unwrap();
    assert_eq!(k.dim(), 0);
    assert!(k.report.passed());

    let k = kaehler_differentials(&o(3, &[1, 1]), &quick()).unwrap();
    assert_eq!(k.dim(), 18);
    assert!(k.report.passed(), "{:?}", k.report);
}

#[test]
fn universal_derivation_is_beck() {
    for pd in [cube_with_pmap(), trunc(3), trunc(2), o(3, &[2])] {
        let k = kaehler_differentials(&pd, &quick()).unwrap();
        assert!(k.report.passed());
        assert!(verify_universal_derivation(&k, &Sampling::default()).passed());
    }
}

#[test]
fn corrupted_p_map_breaks_the_universal_derivation() {
    let mut k = kaehler_differentials(&cube_with_pmap(), &Sampling::default()).unwrap();
    let n = k.dim();
    let mut bad = k.module.pi().clone();
    // shift every image by one basis position
    let mut shifted = Matrix::zeros(f(3), n, n);
    for c in 0..n {
        for r in 0..n {
            shifted[((r + 1) % n, c)] = bad[(r, c)];
        }
    }
    bad = shifted;
    assert_ne!(&bad, k.module.pi());
    k.module = k.module.with_pi(bad).unwrap();
    let r = verify_universal_derivation(&k, &Sampling::default());
    let c = r.get("beck-identity").unwrap();
    assert!(!c.pass);
    assert!(c.witness.as_ref().unwrap().starts_with("a = "));
}

#[test]
fn power_exchange_modulo_i_squared() {
    for pd in [trunc(2), trunc(3), cube_with_pmap(), o(3, &[1, 1])] {
        let p = pd.field().p();
        let k = kaehler_differentials(&pd, &quick()).unwrap();
        for n in 1..=p {
            let r = check_power_exchange(&k, n, &Sampling::default());
            assert!(r.passed(), "p={p} n={n}");
            assert!(r.checks[0].note.as_deref() == Some("exhaustive over A_+"));
        }
        assert!(!check_power_exchange(&k, 0, &Sampling::default()).passed());
    }
}

#[test]
fn power_exchange_detects_a_wrong_coefficient() {
    // x ⊗ x² against 1·x² ⊗ x instead of 2·x² ⊗ x: not congruent mod I²
    let pd = trunc(3);
    let k = kaehler_differentials(&pd, &Sampling::default()).unwrap();
    let a = pd.algebra();
    let fx = f(3);
    let x = a.basis_vec(1);
    let lhs = k.tensor.tensor(&x, &a.pow(&x, 2));
    let good = fx.scale_vec(2, &k.tensor.tensor(&a.pow(&x, 2), &x));
    let bad = k.tensor.tensor(&a.pow(&x, 2), &x);
    assert!(k.i2.contains(&fx.sub_vec(&lhs, &good)));
    assert!(!k.i2.contains(&fx.sub_vec(&lhs, &bad)));
}

#[test]
fn presented_omega_values() {
    let pd = trunc(3);
    let om = omega_p_presentation(&pd, &Sampling::default()).unwrap();
    assert_eq!(om.dim(), 3);
    assert!(om.report.passed(), "{:?}", om.report);
    // P·dx = x²·dx when π = 0
    let m = &om.presented.module;
    let dx = om.d.column(1);
    let x2_dx = m.act(&[0, 0, 1], &dx);
    assert_eq!(m.apply_pi(&dx), x2_dx);

    let ex = cube_with_pmap();
    let om = omega_p_presentation(&ex, &Sampling::default()).unwrap();
    assert!(om.report.passed());
    let m = &om.presented.module;
    let dx = om.d.column(1);
    let want = f(3).add_vec(&m.act(&[0, 2, 0], &dx), &m.act(&[0, 0, 1], &dx));
    assert_eq!(m.apply_pi(&dx), want);
    // d(x²) = 2x·dx
    assert_eq!(om.d.column(2), m.act(&[0, 2, 0], &dx));

    assert_eq!(omega_p_presentation(&ground(), &Sampling::default()).unwrap().dim(), 0);
}

#[test]
fn omega_is_isomorphic_to_kaehler() {
    for (pd, dim) in [(trunc(3), 3), (cube_with_pmap(), 3), (ground(), 0), (o(3, &[1, 1]), 18), (o(3, &[2]), 18)] {
        let k = kaehler_differentials(&pd, &quick()).unwrap();
        let om = omega_p_presentation(&pd, &Sampling::default()).unwrap();
        let r = verify_omega_iso(&om, &k);
        assert!(r.passed(), "{:?}", r);
        assert_eq!(r.get("bijective").unwrap().dims["omega"], dim);
        assert_eq!(r.get("bijective").unwrap().dims["kaehler"], dim);
    }
}

#[test]
fn representability_on_the_battery() {
    let ex = cube_with_pmap();
    let k = kaehler_differentials(&ex, &Sampling::default()).unwrap();
    let r = representability(&k, &trivial_module(&ex), &Sampling::default()).unwrap();
    assert!(r.report.passed(), "{:?}", r.report);
    assert_eq!((r.homs.len(), r.derivations.len()), (1, 1));
    // independent count: sections of the square-zero extension
    let sections = section_homs_bruteforce(&trivial_module(&ex), DEFAULT_SECTION_CAP).unwrap();
    assert_eq!(sections.count(), 3usize.pow(r.homs.len() as u32));

    let r = representability(&k, &zero_module(&ex), &Sampling::default()).unwrap();
    assert!(r.report.passed());
    assert_eq!((r.homs.len(), r.derivations.len()), (0, 0));

    let plus = module_from_pmap_restriction(&ex, &ex.algebra().plus_subspace(), &Sampling::default()).unwrap();
    let r = representability(&k, &plus, &Sampling::default()).unwrap();
    assert!(r.report.passed());
    assert_eq!(r.homs.len(), 1);

    let r = representability(&k, &k.module, &Sampling::default()).unwrap();
    assert!(r.report.passed());

    for pd in [trunc(3), o(3, &[1, 1]), o(3, &[2])] {
        let k = kaehler_differentials(&pd, &quick()).unwrap();
        for m in [trivial_module(&pd), k.module.clone()] {
            let r = representability(&k, &m, &quick()).unwrap();
            assert!(r.report.passed(), "{:?}", r.report);
        }
    }
}

#[test]
fn representability_rejects_foreign_modules() {
    let k = kaehler_differentials(&trunc(3), &Sampling::default()).unwrap();
    let other = trivial_module(&cube_with_pmap());
    assert!(representability(&k, &other, &Sampling::default()).is_err());
}

#[test]
fn fundamental_sequence_for_a_variable() {
    let pd = o(3, &[1, 1]);
    let a = pd.algebra();
    let x2 = a.basis_vec(a.index_of("x2").unwrap());
    let j = a.ideal_generated_by(&[x2]);
    let seq = second_fundamental_sequence(&pd, &j, &quick()).unwrap();
    assert!(seq.report.passed(), "{:?}", seq.report);
    assert_eq!(seq.conormal.dim(), 3);
    assert_eq!(seq.middle.module.dim(), 6);
    assert_eq!(seq.kaehler_quotient.dim(), 3);
    assert_eq!(seq.report.get("exact-middle").unwrap().dims["image"], 3);
}

#[test]
fn fundamental_sequence_edge_cases() {
    let pd = o(3, &[1, 1]);
    let zero = Subspace::zero(f(3), 9);
    let seq = second_fundamental_sequence(&pd, &zero, &quick()).unwrap();
    assert!(seq.report.passed());
    assert_eq!(seq.conormal.dim(), 0);
    assert_eq!(seq.psi.rank(), 18);
    assert_eq!(seq.middle.module.dim(), 18);

    let pd = trunc(3);
    let j = Subspace::span(f(3), 3, &[vec![0, 0, 1]]);
    let seq = second_fundamental_sequence(&pd, &j, &Sampling::default()).unwrap();
    assert!(seq.report.passed(), "{:?}", seq.report);
    assert_eq!(seq.quotient.algebra.dim(), 2);
    assert_eq!(seq.conormal.dim(), 1);

    let ex = cube_with_pmap();
    let j = Subspace::span(f(3), 3, &[vec![0, 1, 0], vec![0, 0, 1]]);
    let seq = second_fundamental_sequence(&ex, &j, &Sampling::default()).unwrap();
    assert!(seq.report.passed());

    // span{x} is not an ideal
    let j = Subspace::span(f(3), 3, &[vec![0, 1, 0]]);
    assert!(second_fundamental_sequence(&pd, &j, &Sampling::default()).is_err());
}
