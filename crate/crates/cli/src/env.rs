use std::collections::BTreeMap;
use std::sync::Arc;

use pdcom::algebra::{divided_power_algebra, truncated_polynomial_algebra};
use pdcom::beckmod::BeckModule;
use pdcom::{FiniteCommAlgebra, Fp, Matrix, PdAlgebra};

use crate::dsl::{CheckDirective, DslError, DslErrorKind, Expr, Generator, Session, Stanza};

#[derive(Debug, Clone)]
pub struct NamedAlgebra {
    pub name: String,
    pub line: usize,
    pub pd: Arc<PdAlgebra>,
}

#[derive(Debug, Clone)]
pub struct NamedModule {
    pub name: String,
    pub over: String,
    pub line: usize,
    pub module: BeckModule,
}

/// The structures a session declares, plus its `check` stanzas in order.
#[derive(Debug, Clone)]
pub struct Env {
    pub field: Fp,
    pub algebras: Vec<NamedAlgebra>,
    pub modules: Vec<NamedModule>,
    pub checks: Vec<(usize, CheckDirective)>,
}

impl Env {
    pub fn algebra(&self, name: &str) -> Option<&NamedAlgebra> {
        self.algebras.iter().find(|a| a.name == name)
    }

    pub fn module(&self, name: &str) -> Option<&NamedModule> {
        self.modules.iter().find(|m| m.name == name)
    }
}

/// Coordinates of a parsed expression in the basis `labels`. The parser has
/// already resolved every label.
pub fn expr_vector(e: &Expr, labels: &[String]) -> Vec<u64> {
    let mut v = vec![0; labels.len()];
    for (c, l) in &e.terms {
        let i = labels.iter().position(|x| x == l).expect("label resolved at parse time");
        v[i] = *c;
    }
    v
}

struct AlgDraft {
    name: String,
    line: usize,
    basis: Vec<String>,
    plus: Vec<String>,
    generated: Option<PdAlgebra>,
    products: BTreeMap<(usize, usize), (Vec<u64>, usize)>,
    pmap: BTreeMap<usize, (Vec<u64>, usize)>,
}

struct ModDraft {
    name: String,
    over: String,
    line: usize,
    basis: Vec<String>,
    action: BTreeMap<(usize, usize), (Vec<u64>, usize)>,
    pi: BTreeMap<usize, (Vec<u64>, usize)>,
}

fn invalid(line: usize, msg: impl Into<String>) -> DslError {
    DslError::new(DslErrorKind::Invalid, line, 1, msg)
}

fn set_once<K: Ord + Copy>(map: &mut BTreeMap<K, (Vec<u64>, usize)>, key: K, value: Vec<u64>, line: usize, what: &str) -> Result<(), DslError> {
    if let Some((old, first)) = map.get(&key) {
        if *old != value {
            return Err(invalid(line, format!("{what} conflicts with the value given on line {first}")));
        }
        return Ok(());
    }
    map.insert(key, (value, line));
    Ok(())
}

/// Builds every algebra and module of `s`. Structural problems the core
/// rejects are reported on the line of the offending stanza.
pub fn build_env(s: &Session) -> Result<Env, DslError> {
    let field = Fp::new(s.prime).map_err(|_| DslError::new(DslErrorKind::NonPrimeModulus, 1, 1, format!("{} is not prime", s.prime)))?;
    let mut algs: Vec<AlgDraft> = Vec::new();
    let mut mods: Vec<ModDraft> = Vec::new();
    let mut checks = Vec::new();
    for (stanza, &line) in s.stanzas.iter().zip(&s.lines) {
        match stanza {
            Stanza::Algebra { name, basis, plus } => algs.push(AlgDraft {
                name: name.clone(),
                line,
                basis: basis.clone(),
                plus: plus.clone(),
                generated: None,
                products: BTreeMap::new(),
                pmap: BTreeMap::new(),
            }),
            Stanza::Generate { name, generator } => {
                let pd = match generator {
                    Generator::DividedPower(m) => divided_power_algebra(field, m),
                    Generator::TruncatedPoly => truncated_polynomial_algebra(field),
                }
                .map_err(|e| invalid(line, e.to_string()))?;
                let a = pd.algebra();
                algs.push(AlgDraft {
                    name: name.clone(),
                    line,
                    basis: a.labels().to_vec(),
                    plus: a.plus_indices().iter().map(|&i| a.label(i).to_string()).collect(),
                    generated: Some(pd),
                    products: BTreeMap::new(),
                    pmap: BTreeMap::new(),
                });
            }
            Stanza::Mul { algebra, left, right, value } => {
                let d = algs.iter_mut().find(|a| &a.name == algebra).ok_or_else(|| invalid(line, format!("no algebra `{algebra}`")))?;
                if d.generated.is_some() {
                    return Err(invalid(line, format!("`{algebra}` is generated and cannot be edited")));
                }
                let i = d.basis.iter().position(|l| l == left).expect("resolved");
                let j = d.basis.iter().position(|l| l == right).expect("resolved");
                let v = expr_vector(value, &d.basis);
                set_once(&mut d.products, (i.min(j), i.max(j)), v, line, &format!("product {left}·{right}"))?;
            }
            Stanza::Pmap { algebra, label, value } => {
                let d = algs.iter_mut().find(|a| &a.name == algebra).ok_or_else(|| invalid(line, format!("no algebra `{algebra}`")))?;
                if d.generated.is_some() {
                    return Err(invalid(line, format!("`{algebra}` is generated and cannot be edited")));
                }
                let i = d.basis.iter().position(|l| l == label).expect("resolved");
                let v = expr_vector(value, &d.basis);
                set_once(&mut d.pmap, i, v, line, &format!("π({label})"))?;
            }
            Stanza::Module { name, over, basis } => mods.push(ModDraft {
                name: name.clone(),
                over: over.clone(),
                line,
                basis: basis.clone(),
                action: BTreeMap::new(),
                pi: BTreeMap::new(),
            }),
            Stanza::Act { module, label, target, value } => {
                let d = mods.iter_mut().find(|m| &m.name == module).ok_or_else(|| invalid(line, format!("no module `{module}`")))?;
                let alg = algs.iter().find(|a| a.name == d.over).expect("declared before the module");
                let i = alg.basis.iter().position(|l| l == label).expect("resolved");
                let k = d.basis.iter().position(|l| l == target).expect("resolved");
                let v = expr_vector(value, &d.basis);
                set_once(&mut d.action, (i, k), v, line, &format!("{label}·{target}"))?;
            }
            Stanza::Pimap { module, label, value } => {
                let d = mods.iter_mut().find(|m| &m.name == module).ok_or_else(|| invalid(line, format!("no module `{module}`")))?;
                let k = d.basis.iter().position(|l| l == label).expect("resolved");
                let v = expr_vector(value, &d.basis);
                set_once(&mut d.pi, k, v, line, &format!("P({label})"))?;
            }
            Stanza::Check(c) => checks.push((line, c.clone())),
        }
    }

    let mut algebras = Vec::new();
    for d in algs {
        let pd = match d.generated {
            Some(pd) => pd,
            None => build_algebra(field, &d)?,
        };
        algebras.push(NamedAlgebra { name: d.name, line: d.line, pd: Arc::new(pd) });
    }
    let mut modules = Vec::new();
    for d in mods {
        let alg = algebras.iter().find(|a| a.name == d.over).expect("declared");
        let n = alg.pd.dim();
        let md = d.basis.len();
        let column_matrix = |cols: &dyn Fn(usize) -> Vec<u64>| -> Matrix {
            let cols: Vec<Vec<u64>> = (0..md).map(cols).collect();
            Matrix::from_columns(field, md, &cols).expect("square")
        };
        let action: Vec<Matrix> = (0..n)
            .map(|i| {
                let explicit = d.action.keys().any(|&(x, _)| x == i);
                column_matrix(&|k| match d.action.get(&(i, k)) {
                    Some((v, _)) => v.clone(),
                    None if i == 0 && !explicit => (0..md).map(|r| u64::from(r == k)).collect(),
                    None => vec![0; md],
                })
            })
            .collect();
        let pi = column_matrix(&|k| d.pi.get(&k).map_or_else(|| vec![0; md], |(v, _)| v.clone()));
        let module = BeckModule::new(alg.pd.clone(), d.basis.clone(), action, pi).map_err(|e| invalid(d.line, e.to_string()))?;
        modules.push(NamedModule { name: d.name, over: d.over, line: d.line, module });
    }
    Ok(Env { field, algebras, modules, checks })
}

fn build_algebra(field: Fp, d: &AlgDraft) -> Result<PdAlgebra, DslError> {
    let n = d.basis.len();
    let plus: Vec<usize> = d.plus.iter().map(|l| d.basis.iter().position(|b| b == l).expect("resolved")).collect();
    for (&(_, j), (v, line)) in d.products.iter().filter(|((i, _), _)| *i == 0) {
        if v.iter().enumerate().any(|(r, &c)| c != u64::from(r == j)) {
            return Err(invalid(*line, format!("the unit {} must act as the identity", d.basis[0])));
        }
    }
    let products = &d.products;
    let alg = FiniteCommAlgebra::from_fn(field, d.basis.clone(), plus, |i, j| {
        let key = (i.min(j), i.max(j));
        match products.get(&key) {
            Some((v, _)) => v.clone(),
            None if key.0 == 0 => (0..n).map(|r| u64::from(r == key.1)).collect(),
            None => vec![0; n],
        }
    })
    .map_err(|e| invalid(d.line, e.to_string()))?;
    let images: Vec<Vec<u64>> = (0..n).map(|i| d.pmap.get(&i).map_or_else(|| vec![0; n], |(v, _)| v.clone())).collect();
    PdAlgebra::new(alg, images).map_err(|e| invalid(d.line, e.to_string()))
}
