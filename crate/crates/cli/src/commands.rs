use std::sync::Arc;

use pdcom::algebra::{verify_gamma_identities, verify_pmap_axioms, LocalizationKind};
use pdcom::beckmod::{module_from_pmap_restriction, section_homs_bruteforce, trivial_module, verify_beck_module, zero_module, BeckModule, DEFAULT_SECTION_CAP};
use pdcom::derivations::{audit_beck_derivation, beck_derivations, derivations, leibniz_witness, span_of, special_derivations};
use pdcom::dpoly::{witt_battery, WittBattery, TRUNCATION_NOTE};
use pdcom::kaehler::{check_power_exchange, kaehler_differentials, omega_p_presentation, representability, second_fundamental_sequence, verify_omega_iso, verify_universal_derivation};
use pdcom::localization::{localized_universal_derivation, verify_localization_iso};
use pdcom::{Check, Matrix, PdAlgebra, Report, Sampling};

use crate::dsl::{CheckDirective, CheckKind, ModuleRef};
use crate::env::{expr_vector, Env};

/// Runs one check. Domain errors become a failing `error` check so that a
/// session keeps going and the report says what went wrong.
pub fn run_check(env: &Env, d: &CheckDirective, sampling: &Sampling) -> Report {
    match try_run(env, d, sampling) {
        Ok(r) => r,
        Err(e) => {
            let mut r = Report::new();
            r.push(Check::fail("error", e));
            r
        }
    }
}

type Outcome<T> = Result<T, String>;

fn algebra<'a>(env: &'a Env, d: &CheckDirective) -> Outcome<&'a Arc<PdAlgebra>> {
    match &d.algebra {
        Some(name) => env.algebra(name).map(|a| &a.pd).ok_or_else(|| format!("no algebra named `{name}`")),
        None => env.algebras.first().map(|a| &a.pd).ok_or_else(|| "no algebra given".to_string()),
    }
}

/// Resolves a module reference over `pd`; `trivial` when none is given.
pub fn resolve_module(env: &Env, pd: &Arc<PdAlgebra>, m: Option<&ModuleRef>, sampling: &Sampling) -> Outcome<BeckModule> {
    Ok(match m.unwrap_or(&ModuleRef::Trivial) {
        ModuleRef::Trivial => trivial_module(pd),
        ModuleRef::Zero => zero_module(pd),
        ModuleRef::Plus => module_from_pmap_restriction(pd, &pd.algebra().plus_subspace(), sampling).map_err(|e| e.to_string())?,
        ModuleRef::Kaehler => kaehler_differentials(pd, sampling).map_err(|e| e.to_string())?.module,
        ModuleRef::Named(name) => env.module(name).map(|m| m.module.clone()).ok_or_else(|| format!("no module named `{name}`"))?,
    })
}

/// `D(x) = 2 x2, D(x2) = 0` for a derivation matrix (column `i` is `D(e_i)`).
pub fn fmt_derivation(m: &BeckModule, d: &Matrix) -> String {
    let a = m.algebra().algebra();
    let parts: Vec<String> = (0..a.dim()).map(|i| format!("D({}) = {}", a.label(i), m.fmt(&d.column(i)))).collect();
    parts.join(", ")
}

fn basis_note(m: &BeckModule, basis: &[Matrix]) -> String {
    if basis.is_empty() {
        return "basis: none".into();
    }
    let parts: Vec<String> = basis.iter().map(|d| format!("[{}]", fmt_derivation(m, d))).collect();
    format!("basis: {}", parts.join("; "))
}

fn try_run(env: &Env, d: &CheckDirective, sampling: &Sampling) -> Outcome<Report> {
    let mut report = Report::new();
    if d.kind == CheckKind::Witt {
        let n = d.n.unwrap_or(1) as usize;
        let cfg = WittBattery { trials: d.trials.unwrap_or(200), seed: sampling.seed, ..WittBattery::default() };
        return witt_battery(env.field, n, &cfg).map_err(|e| e.to_string());
    }
    let pd = algebra(env, d)?;
    let module = || resolve_module(env, pd, d.module.as_ref(), sampling);
    let err = |e: pdcom::Error| e.to_string();
    match d.kind {
        CheckKind::Verify => {
            report.extend_prefixed("algebra", pd.algebra().verify_axioms());
            report.extend_prefixed("pmap", verify_pmap_axioms(pd, sampling));
            if d.module.is_some() {
                report.extend_prefixed("module", verify_beck_module(&module()?));
            }
        }
        CheckKind::Gamma => {
            report.extend(verify_gamma_identities(pd, 2 * pd.field().p(), sampling));
        }
        CheckKind::Derivations => {
            let m = module()?;
            let basis = derivations(&m);
            let bad = basis.iter().find_map(|b| leibniz_witness(&m, b));
            report.push(Check::from_witness("leibniz-basis", bad).dim("der", basis.len()).note(basis_note(&m, &basis)));
        }
        CheckKind::Special => {
            let (special, r) = special_derivations(pd, sampling);
            report.extend(r);
            let m = trivial_module(pd);
            report.push(
                Check::pass("special")
                    .dim("special", special.dim())
                    .dim("revalidated-elements", special.revalidation.elements)
                    .note(format!("{}; {TRUNCATION_NOTE}", basis_note(&m, &special.basis))),
            );
        }
        CheckKind::Beck => {
            let m = module()?;
            let beck = beck_derivations(&m, sampling);
            let coverage = if beck.revalidation.exhaustive { "exhaustive over A_+" } else { "sampled" };
            report.push(
                Check::from_witness("revalidation", beck.revalidation.basis_insufficiency.clone())
                    .dim("elements", beck.revalidation.elements)
                    .note(coverage),
            );
            report.push(Check::pass("beck-derivations").dim("der-p", beck.dim()).note(basis_note(&m, &beck.basis)));
            for (k, b) in beck.basis.iter().enumerate() {
                report.extend_prefixed(&format!("basis-{k}"), audit_beck_derivation(&m, b, sampling));
            }
            if !d.candidate.is_empty() {
                let a = pd.algebra();
                let mut cols = vec![vec![0; m.dim()]; a.dim()];
                for (label, value) in &d.candidate {
                    let i = a.index_of(label).ok_or_else(|| format!("unknown label `{label}`"))?;
                    cols[i] = expr_vector(value, m.labels());
                }
                let cand = Matrix::from_columns(pd.field(), m.dim(), &cols).map_err(err)?;
                let mut audit = audit_beck_derivation(&m, &cand, sampling);
                let in_span = span_of(&m, std::slice::from_ref(&cand)).is_subspace_of(&span_of(&m, &beck.basis));
                audit.push(Check::new("in-der-p", in_span).note(fmt_derivation(&m, &cand)));
                report.extend_prefixed("candidate", audit);
            }
        }
        CheckKind::Kaehler => {
            let k = kaehler_differentials(pd, sampling).map_err(err)?;
            report.push(Check::pass("dims").dim("I", k.i.dim()).dim("I2", k.i2.dim()).dim("omega", k.dim()).note(format!("basis: {}", k.module.labels().join(", "))));
            report.extend(k.report.clone());
            report.extend_prefixed("d", verify_universal_derivation(&k, sampling));
        }
        CheckKind::Omega => {
            let omega = omega_p_presentation(pd, sampling).map_err(err)?;
            let k = kaehler_differentials(pd, sampling).map_err(err)?;
            report.extend_prefixed("presentation", omega.report.clone());
            report.extend_prefixed("kaehler", k.report.clone());
            report.extend_prefixed("iso", verify_omega_iso(&omega, &k));
        }
        CheckKind::Representability => {
            let m = module()?;
            let k = kaehler_differentials(pd, sampling).map_err(err)?;
            report.extend(representability(&k, &m, sampling).map_err(err)?.report);
        }
        CheckKind::PowerExchange => {
            let k = kaehler_differentials(pd, sampling).map_err(err)?;
            let ns: Vec<u64> = match d.n {
                Some(n) => vec![n],
                None => (1..=pd.field().p()).collect(),
            };
            for n in ns {
                report.extend(check_power_exchange(&k, n, sampling));
            }
        }
        CheckKind::Sequence => {
            let gens: Vec<Vec<u64>> = d.ideal.iter().map(|e| expr_vector(e, pd.algebra().labels())).collect();
            let j = pd.algebra().ideal_generated_by(&gens);
            report.extend(second_fundamental_sequence(pd, &j, sampling).map_err(err)?.report);
        }
        CheckKind::Sections => {
            let m = module()?;
            let search = section_homs_bruteforce(&m, DEFAULT_SECTION_CAP).map_err(err)?;
            let beck = beck_derivations(&m, sampling);
            let expected = pd.field().p().checked_pow(beck.dim() as u32);
            report.push(
                Check::new("sections-match-der-p", expected == Some(search.count() as u64))
                    .dim("candidates", search.candidates as usize)
                    .dim("sections", search.count())
                    .dim("der-p", beck.dim()),
            );
        }
        CheckKind::Localize => {
            let m = module()?;
            let f = expr_vector(d.element.as_ref().ok_or("localize needs an element")?, pd.algebra().labels());
            let iso = verify_localization_iso(&m, &f, sampling).map_err(err)?;
            report.extend(iso.report);
            if iso.kind == LocalizationKind::Nilpotent {
                report.push(Check::pass("d_f").note("f is nilpotent, so A_f = 0 and there is no derivation to check"));
            } else if !pd.algebra().is_augmented() {
                report.push(Check::pass("d_f").note("A_0 is not the ground field; the universal derivation is built on augmented algebras only"));
            } else {
                report.extend_prefixed("d_f", localized_universal_derivation(pd, &f, sampling).map_err(err)?);
            }
        }
        CheckKind::Witt => unreachable!("handled above"),
    }
    Ok(report)
}
