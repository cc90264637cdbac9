use pdcom::Fp;
use pdcom_cli::dsl::{parse_expr, parse_session, print_session, CheckKind, DslErrorKind, Expr, LabelTable, ModuleRef, Stanza};
use pdcom_cli::env::build_env;
use proptest::prelude::*;

const CUBE: &str = "prime 3
algebra A basis 1 x x2 plus x x2
mul A x x = 2 x2
pmap A x = x2
pmap A x2 = 0
";

fn expr(terms: &[(u64, &str)]) -> Expr {
    Expr { terms: terms.iter().map(|&(c, l)| (c, l.to_string())).collect() }
}

#[test]
fn cube_with_pmap_parses_to_the_expected_stanzas() {
    let s = parse_session(CUBE).unwrap();
    assert_eq!(s.prime, 3);
    assert_eq!(s.lines, vec![2, 3, 4, 5]);
    assert_eq!(
        s.stanzas,
        vec![
            Stanza::Algebra { name: "A".into(), basis: vec!["1".into(), "x".into(), "x2".into()], plus: vec!["x".into(), "x2".into()] },
            Stanza::Mul { algebra: "A".into(), left: "x".into(), right: "x".into(), value: expr(&[(2, "x2")]) },
            Stanza::Pmap { algebra: "A".into(), label: "x".into(), value: expr(&[(1, "x2")]) },
            Stanza::Pmap { algebra: "A".into(), label: "x2".into(), value: expr(&[]) },
        ]
    );
    let env = build_env(&s).unwrap();
    let pd = &env.algebra("A").unwrap().pd;
    assert!(pd.algebra().verify_axioms().passed());
    assert_eq!(pd.algebra().mul(&[0, 1, 0], &[0, 1, 0]), vec![0, 0, 2]);
    assert_eq!(pd.pmap().image(1), &[0, 0, 1]);
}

#[test]
fn empty_file_is_missing_prime() {
    for src in ["", "# only a comment\n\n"] {
        let e = parse_session(src).unwrap_err();
        assert_eq!(e.kind, DslErrorKind::Parse);
        assert_eq!(e.message, "missing prime");
    }
}

#[test]
fn composite_modulus_is_rejected_at_its_token() {
    let e = parse_session("prime 4\n").unwrap_err();
    assert_eq!((e.kind, e.line, e.column), (DslErrorKind::NonPrimeModulus, 1, 7));
    let e = parse_session("  prime 1\n").unwrap_err();
    assert_eq!((e.kind, e.column), (DslErrorKind::NonPrimeModulus, 9));
}

#[test]
fn second_prime_is_a_duplicate() {
    let e = parse_session("prime 3\nprime 5\n").unwrap_err();
    assert_eq!((e.kind, e.line), (DslErrorKind::DuplicatePrime, 2));
}

#[test]
fn labels_must_be_declared_before_use() {
    let e = parse_session("prime 3\nmul A x x = x\n").unwrap_err();
    assert_eq!((e.kind, e.line, e.column), (DslErrorKind::UnknownLabel, 2, 5));
    let e = parse_session("prime 3\nalgebra A basis 1 x plus x\nmul A x z = x\n").unwrap_err();
    assert_eq!((e.kind, e.column), (DslErrorKind::UnknownLabel, 9));
    let e = parse_session("prime 3\nalgebra A basis 1 x plus x\nmul A x x = 2 q\n").unwrap_err();
    assert_eq!((e.kind, e.column), (DslErrorKind::UnknownLabel, 15));
    let e = parse_session("prime 3\nalgebra A basis 1 x plus y\n").unwrap_err();
    assert_eq!((e.kind, e.column), (DslErrorKind::UnknownLabel, 26));
}

#[test]
fn expected_token_diagnostics() {
    let e = parse_session("prime 3\nalgebra A basis 1 x plus x\nmul A x x x\n").unwrap_err();
    assert_eq!((e.kind, e.column), (DslErrorKind::Parse, 11));
    assert!(e.message.contains("expected `=`"), "{}", e.message);
    let e = parse_session("prime 3\nalgebra A basis 1 x plus x\nmul A x x =\n").unwrap_err();
    assert_eq!(e.column, 12);
    assert!(e.message.contains("expected an expression"));
    let e = parse_session("prime 3\nalgebra A base 1 x\n").unwrap_err();
    assert_eq!(e.column, 11);
}

#[test]
fn coefficients_are_reduced_and_merged_at_parse_time() {
    let f = Fp::new(3).unwrap();
    let labels: Vec<String> = ["1", "x", "x2"].iter().map(|s| s.to_string()).collect();
    let t = LabelTable { labels: &labels, unit: Some("1") };
    assert_eq!(parse_expr(f, "x2 + 4 x - 7 + x + 5 x2", t).unwrap(), expr(&[(2, "1"), (2, "x")]));
    assert_eq!(parse_expr(f, "- x + x", t).unwrap(), expr(&[]));
    assert_eq!(parse_expr(f, "0", t).unwrap(), expr(&[]));
    assert_eq!(parse_expr(f, "3 x", t).unwrap(), expr(&[]));
    assert_eq!(parse_expr(f, "-1 x2", t).unwrap(), expr(&[(2, "x2")]));
    let m = LabelTable { labels: &labels[1..], unit: None };
    assert!(parse_expr(f, "2", m).is_err());
    assert_eq!(parse_expr(f, "0", m).unwrap(), expr(&[]));
}

#[test]
fn unlisted_products_default_to_zero_and_are_symmetric() {
    let src = "prime 5\nalgebra A basis 1 x y xy plus x y xy\nmul A y x = xy\n";
    let env = build_env(&parse_session(src).unwrap()).unwrap();
    let a = env.algebra("A").unwrap().pd.algebra().clone();
    assert_eq!(a.mul(&[0, 1, 0, 0], &[0, 0, 1, 0]), vec![0, 0, 0, 1]);
    assert_eq!(a.mul(&[0, 0, 1, 0], &[0, 1, 0, 0]), vec![0, 0, 0, 1]);
    assert_eq!(a.mul(&[0, 1, 0, 0], &[0, 1, 0, 0]), vec![0; 4]);
    assert_eq!(a.mul(&[1, 0, 0, 0], &[0, 0, 0, 3]), vec![0, 0, 0, 3]);
    assert!(a.verify_axioms().passed());
}

#[test]
fn modules_default_to_unit_identity() {
    let src = "prime 3
algebra A basis 1 x x2 plus x x2
mul A x x = 2 x2
module M over A basis m n
act M x m = n
pimap M m = n
";
    let env = build_env(&parse_session(src).unwrap()).unwrap();
    let m = &env.module("M").unwrap().module;
    assert_eq!(m.act(&[1, 0, 0], &[1, 2]), vec![1, 2]);
    assert_eq!(m.act(&[0, 1, 0], &[1, 0]), vec![0, 1]);
    assert_eq!(m.apply_pi(&[1, 0]), vec![0, 1]);
}

#[test]
fn check_directives_carry_typed_arguments() {
    let src = "prime 3
algebra A basis 1 x x2 plus x x2
mul A x x = 2 x2
pmap A x = x2
check beck A plus candidate x = 2 x , x2 = x2
check sequence A x2 , x + x2
check localize A trivial 1 + x
check power-exchange A 2
check witt 2 30
";
    let s = parse_session(src).unwrap();
    let checks: Vec<_> = s.stanzas.iter().filter_map(|st| if let Stanza::Check(c) = st { Some(c) } else { None }).collect();
    assert_eq!(checks[0].kind, CheckKind::Beck);
    assert_eq!(checks[0].module, Some(ModuleRef::Plus));
    assert_eq!(checks[0].candidate, vec![("x".into(), expr(&[(2, "x")])), ("x2".into(), expr(&[(1, "x2")]))]);
    assert_eq!(checks[1].ideal, vec![expr(&[(1, "x2")]), expr(&[(1, "x"), (1, "x2")])]);
    assert_eq!(checks[2].element, Some(expr(&[(1, "1"), (1, "x")])));
    assert_eq!(checks[3].n, Some(2));
    assert_eq!((checks[4].n, checks[4].trials), (Some(2), Some(30)));
    assert_eq!(parse_session(&print_session(&s)).unwrap(), s);
}

#[test]
fn build_errors_point_at_the_offending_stanza() {
    let e = build_env(&parse_session("prime 3\nalgebra A basis 1 x plus x\nmul A x x = x\nmul A x x = 2 x\n").unwrap()).unwrap_err();
    assert_eq!((e.kind, e.line), (DslErrorKind::Invalid, 4));
    let e = parse_session("prime 3\nalgebra A basis 1 x plus x\npmap A 1 = x\n").unwrap_err();
    assert_eq!((e.kind, e.line, e.column), (DslErrorKind::Invalid, 3, 8));
}

/// Renders a random session in loose style: extra spaces, comments,
/// unnormalized and negative coefficients, repeated labels.
fn session_text() -> impl Strategy<Value = String> {
    let prime = prop::sample::select(vec![2u64, 3, 5, 7]);
    let dim = 1usize..5;
    (prime, dim, any::<u64>()).prop_map(|(p, dim, seed)| {
        let mut rng = seed;
        let mut next = move |n: u64| {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng >> 33) % n.max(1)
        };
        let labels: Vec<String> = (0..dim).map(|i| if i == 0 { "one".to_string() } else { format!("e{i}") }).collect();
        let plus: Vec<&String> = labels[1..].iter().filter(|_| next(3) > 0).collect();
        let mut text = format!("# random\n  prime   {p}\nalgebra A basis {} ", labels.join("  "));
        if !plus.is_empty() {
            text.push_str(&format!("plus {}", plus.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(" ")));
        }
        text.push_str("  # trailing comment\n\n");
        let expr = |pool: &[&String], allow_scalar: bool, next: &mut dyn FnMut(u64) -> u64| -> String {
            let k = next(4);
            if k == 0 || pool.is_empty() {
                return "0".into();
            }
            let mut parts = Vec::new();
            for i in 0..k {
                let c = next(40) as i64 - 20;
                let sign = if i == 0 { "" } else if next(2) == 0 { "+ " } else { "- " };
                if allow_scalar && next(5) == 0 {
                    parts.push(format!("{sign}{c}"));
                } else {
                    parts.push(format!("{sign}{c} {}", pool[next(pool.len() as u64) as usize]));
                }
            }
            parts.join(" ")
        };
        let all: Vec<&String> = labels.iter().collect();
        for _ in 0..next(5) {
            let (i, j) = (next(dim as u64) as usize, next(dim as u64) as usize);
            let e = expr(&all, true, &mut next);
            text.push_str(&format!("mul A {} {} = {e}\n", labels[i], labels[j]));
        }
        for l in &plus {
            if next(2) == 0 {
                let e = expr(&plus, false, &mut next);
                text.push_str(&format!("pmap A {l} = {e}\n"));
            }
        }
        let mlabels: Vec<String> = (0..next(3)).map(|i| format!("m{i}")).collect();
        text.push_str(&format!("module M over A basis {}\n", mlabels.join(" ")));
        let mrefs: Vec<&String> = mlabels.iter().collect();
        for m in &mlabels {
            let e = expr(&mrefs, false, &mut next);
            text.push_str(&format!("act M {} {m} = {e}\n", labels[next(dim as u64) as usize]));
            let e = expr(&mrefs, false, &mut next);
            text.push_str(&format!("pimap M {m} = {e}\n"));
        }
        text.push_str("check verify A M\ncheck witt 1 3\ncheck power-exchange A\n");
        text.push_str(&format!("check localize A trivial {}\n", expr(&all, true, &mut next)));
        text.push_str(&format!("check sequence A {} , {}\n", expr(&all, true, &mut next), expr(&all, true, &mut next)));
        text
    })
}

proptest! {
    #[test]
    fn print_then_parse_is_a_fixed_point(src in session_text()) {
        let s = parse_session(&src).unwrap();
        let printed = print_session(&s);
        let again = parse_session(&printed).unwrap();
        prop_assert_eq!(&again, &s);
        prop_assert_eq!(print_session(&again), printed);
    }
}

#[test]
fn numerals_are_not_labels_except_the_unit_one() {
    assert!(parse_session("prime 3\nalgebra A basis 1 x plus x\n").is_ok());
    let e = parse_session("prime 3\nalgebra A basis 1 2 plus 2\n").unwrap_err();
    assert_eq!((e.line, e.column), (2, 19));
    assert!(parse_session("prime 3\nalgebra A basis 0 x plus x\n").is_err());
    assert!(parse_session("prime 3\nalgebra A basis 1 x plus x\nmodule M over A basis 1\n").is_err());
}
