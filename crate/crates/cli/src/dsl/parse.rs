use std::collections::BTreeMap;

use pdcom::algebra::{divided_power_algebra, truncated_polynomial_algebra};
use pdcom::Fp;

use super::{CheckDirective, CheckKind, DslError, DslErrorKind, Expr, Generator, ModuleRef, Session, Stanza};

#[derive(Debug, Clone, Copy)]
struct Tok<'a> {
    text: &'a str,
    col: usize,
}

fn tokenize(line: &str) -> Vec<Tok<'_>> {
    let code = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in code.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Tok { text: &code[s..i], col: code[..s].chars().count() + 1 });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Tok { text: &code[s..], col: code[..s].chars().count() + 1 });
    }
    out
}

fn is_operator(s: &str) -> bool {
    matches!(s, "+" | "-" | "=" | ",")
}

/// Labels an expression may use. `unit` is the label a bare integer multiplies;
/// module expressions have none.
#[derive(Debug, Clone, Copy)]
pub struct LabelTable<'a> {
    pub labels: &'a [String],
    pub unit: Option<&'a str>,
}

/// Parses `text` as an expression over `table`, reporting errors on line 1.
pub fn parse_expr(field: Fp, text: &str, table: LabelTable<'_>) -> Result<Expr, DslError> {
    let toks = tokenize(text);
    let end = text.chars().count() + 1;
    Parser::expr(field, 1, &toks, end, table)
}

#[derive(Debug, Clone)]
struct AlgInfo {
    labels: Vec<String>,
    plus: Vec<String>,
}

struct Parser {
    field: Option<Fp>,
    prime_line: Option<usize>,
    algebras: BTreeMap<String, AlgInfo>,
    modules: BTreeMap<String, (String, Vec<String>)>,
    stanzas: Vec<Stanza>,
    lines: Vec<usize>,
}

/// Parses a whole session. Names and labels are resolved as they are declared,
/// so every reference must follow its declaration.
pub fn parse_session(src: &str) -> Result<Session, DslError> {
    let mut p = Parser {
        field: None,
        prime_line: None,
        algebras: BTreeMap::new(),
        modules: BTreeMap::new(),
        stanzas: Vec::new(),
        lines: Vec::new(),
    };
    let mut last_line = 1;
    for (i, line) in src.lines().enumerate() {
        let ln = i + 1;
        last_line = ln;
        let toks = tokenize(line);
        if toks.is_empty() {
            continue;
        }
        let end = line.find('#').map_or(line, |c| &line[..c]).trim_end().chars().count() + 1;
        p.stanza(ln, &toks, end)?;
    }
    let field = p.field.ok_or_else(|| DslError::new(DslErrorKind::Parse, last_line, 1, "missing prime"))?;
    Ok(Session { prime: field.p(), stanzas: p.stanzas, lines: p.lines })
}

fn err(kind: DslErrorKind, line: usize, col: usize, msg: impl Into<String>) -> DslError {
    DslError::new(kind, line, col, msg)
}

impl Parser {
    fn stanza(&mut self, ln: usize, toks: &[Tok<'_>], end: usize) -> Result<(), DslError> {
        let head = toks[0];
        if head.text == "prime" {
            return self.prime(ln, toks, end);
        }
        let field = self.field.ok_or_else(|| err(DslErrorKind::Parse, ln, head.col, "missing prime: the first stanza must be `prime P`"))?;
        let stanza = match head.text {
            "algebra" => self.algebra(ln, toks, end)?,
            "generate" => self.generate(field, ln, toks, end)?,
            "mul" => self.mul(field, ln, toks, end)?,
            "pmap" => self.pmap(field, ln, toks, end)?,
            "module" => self.module(ln, toks, end)?,
            "act" => self.act(field, ln, toks, end)?,
            "pimap" => self.pimap(field, ln, toks, end)?,
            "check" => Stanza::Check(self.check(field, ln, toks, end)?),
            other => return Err(err(DslErrorKind::Parse, ln, head.col, format!("unknown stanza `{other}`"))),
        };
        self.stanzas.push(stanza);
        self.lines.push(ln);
        Ok(())
    }

    fn prime(&mut self, ln: usize, toks: &[Tok<'_>], end: usize) -> Result<(), DslError> {
        if let Some(first) = self.prime_line {
            return Err(err(DslErrorKind::DuplicatePrime, ln, toks[0].col, format!("prime already declared on line {first}")));
        }
        if !self.stanzas.is_empty() {
            return Err(err(DslErrorKind::Parse, ln, toks[0].col, "`prime` must come before every other stanza"));
        }
        let t = toks.get(1).ok_or_else(|| err(DslErrorKind::Parse, ln, end, "expected a prime after `prime`"))?;
        let p: u64 = t.text.parse().map_err(|_| err(DslErrorKind::Parse, ln, t.col, format!("expected an integer, found `{}`", t.text)))?;
        let field = Fp::new(p).map_err(|_| err(DslErrorKind::NonPrimeModulus, ln, t.col, format!("{p} is not prime")))?;
        expect_end(ln, toks, 2)?;
        self.field = Some(field);
        self.prime_line = Some(ln);
        Ok(())
    }

    fn fresh_name(&self, ln: usize, t: Tok<'_>) -> Result<String, DslError> {
        check_ident(ln, t)?;
        if self.algebras.contains_key(t.text) || self.modules.contains_key(t.text) {
            return Err(err(DslErrorKind::Invalid, ln, t.col, format!("`{}` is already defined", t.text)));
        }
        if matches!(t.text, "trivial" | "zero" | "plus" | "kaehler") {
            return Err(err(DslErrorKind::Invalid, ln, t.col, format!("`{}` is reserved", t.text)));
        }
        Ok(t.text.to_string())
    }

    fn algebra_ref(&self, ln: usize, t: Tok<'_>) -> Result<&AlgInfo, DslError> {
        self.algebras.get(t.text).ok_or_else(|| err(DslErrorKind::UnknownLabel, ln, t.col, format!("no algebra named `{}`", t.text)))
    }

    fn module_ref(&self, ln: usize, t: Tok<'_>) -> Result<&(String, Vec<String>), DslError> {
        self.modules.get(t.text).ok_or_else(|| err(DslErrorKind::UnknownLabel, ln, t.col, format!("no module named `{}`", t.text)))
    }

    fn algebra(&mut self, ln: usize, toks: &[Tok<'_>], end: usize) -> Result<Stanza, DslError> {
        let name_tok = *toks.get(1).ok_or_else(|| err(DslErrorKind::Parse, ln, end, "expected an algebra name"))?;
        let name = self.fresh_name(ln, name_tok)?;
        keyword(ln, toks, 2, "basis", end)?;
        let plus_at = toks.iter().position(|t| t.text == "plus").unwrap_or(toks.len());
        let basis_toks = &toks[3..plus_at.max(3)];
        if basis_toks.is_empty() {
            return Err(err(DslErrorKind::Parse, ln, toks.get(3).map_or(end, |t| t.col), "expected at least one basis label (the unit)"));
        }
        let basis = labels_list(ln, basis_toks, true)?;
        let mut plus = Vec::new();
        if plus_at < toks.len() {
            for t in &toks[plus_at + 1..] {
                if !basis.iter().any(|b| b == t.text) {
                    return Err(err(DslErrorKind::UnknownLabel, ln, t.col, format!("`{}` is not a basis label of {name}", t.text)));
                }
                if t.text == basis[0] {
                    return Err(err(DslErrorKind::Invalid, ln, t.col, "the unit cannot lie in the plus part"));
                }
                if plus.iter().any(|p| p == t.text) {
                    return Err(err(DslErrorKind::Invalid, ln, t.col, format!("`{}` listed twice", t.text)));
                }
                plus.push(t.text.to_string());
            }
        }
        self.algebras.insert(name.clone(), AlgInfo { labels: basis.clone(), plus: plus.clone() });
        Ok(Stanza::Algebra { name, basis, plus })
    }

    fn generate(&mut self, field: Fp, ln: usize, toks: &[Tok<'_>], end: usize) -> Result<Stanza, DslError> {
        let name_tok = *toks.get(1).ok_or_else(|| err(DslErrorKind::Parse, ln, end, "expected an algebra name"))?;
        let name = self.fresh_name(ln, name_tok)?;
        let kind = toks.get(2).ok_or_else(|| err(DslErrorKind::Parse, ln, end, "expected `divided-power` or `truncated-poly`"))?;
        let (generator, pd) = match kind.text {
            "divided-power" => {
                let mut heights = Vec::new();
                for t in &toks[3..] {
                    let m: u32 = t.text.parse().ok().filter(|&m| m >= 1).ok_or_else(|| err(DslErrorKind::Parse, ln, t.col, format!("expected a height >= 1, found `{}`", t.text)))?;
                    heights.push(m);
                }
                if heights.is_empty() {
                    return Err(err(DslErrorKind::Parse, ln, end, "expected one height per variable"));
                }
                let pd = divided_power_algebra(field, &heights).map_err(|e| err(DslErrorKind::Invalid, ln, kind.col, e.to_string()))?;
                (Generator::DividedPower(heights), pd)
            }
            "truncated-poly" => {
                expect_end(ln, toks, 3)?;
                let pd = truncated_polynomial_algebra(field).map_err(|e| err(DslErrorKind::Invalid, ln, kind.col, e.to_string()))?;
                (Generator::TruncatedPoly, pd)
            }
            other => return Err(err(DslErrorKind::Parse, ln, kind.col, format!("unknown generator `{other}`"))),
        };
        let a = pd.algebra();
        let labels = a.labels().to_vec();
        let plus = a.plus_indices().iter().map(|&i| labels[i].clone()).collect();
        self.algebras.insert(name.clone(), AlgInfo { labels, plus });
        Ok(Stanza::Generate { name, generator })
    }

    fn mul(&mut self, field: Fp, ln: usize, toks: &[Tok<'_>], end: usize) -> Result<Stanza, DslError> {
        let name_tok = *toks.get(1).ok_or_else(|| err(DslErrorKind::Parse, ln, end, "expected an algebra name"))?;
        let info = self.algebra_ref(ln, name_tok)?.clone();
        let left = label_in(ln, toks.get(2).copied(), &info.labels, end)?;
        let right = label_in(ln, toks.get(3).copied(), &info.labels, end)?;
        keyword(ln, toks, 4, "=", end)?;
        let table = LabelTable { labels: &info.labels, unit: Some(&info.labels[0]) };
        let value = Self::expr(field, ln, &toks[5..], end, table)?;
        Ok(Stanza::Mul { algebra: name_tok.text.to_string(), left, right, value })
    }

    fn pmap(&mut self, field: Fp, ln: usize, toks: &[Tok<'_>], end: usize) -> Result<Stanza, DslError> {
        let name_tok = *toks.get(1).ok_or_else(|| err(DslErrorKind::Parse, ln, end, "expected an algebra name"))?;
        let info = self.algebra_ref(ln, name_tok)?.clone();
        let label_tok = toks.get(2).copied();
        let label = label_in(ln, label_tok, &info.labels, end)?;
        if !info.plus.contains(&label) {
            return Err(err(DslErrorKind::Invalid, ln, toks[2].col, format!("π is only defined on the plus part; `{label}` is not in it")));
        }
        keyword(ln, toks, 3, "=", end)?;
        let table = LabelTable { labels: &info.labels, unit: Some(&info.labels[0]) };
        let value = Self::expr(field, ln, &toks[4..], end, table)?;
        if let Some((_, l)) = value.terms.iter().find(|(_, l)| !info.plus.contains(l)) {
            let col = toks[4..].iter().find(|t| t.text == l).map_or(toks.get(4).map_or(end, |t| t.col), |t| t.col);
            return Err(err(DslErrorKind::Invalid, ln, col, format!("π must land in the plus part; `{l}` is not in it")));
        }
        Ok(Stanza::Pmap { algebra: name_tok.text.to_string(), label, value })
    }

    fn module(&mut self, ln: usize, toks: &[Tok<'_>], end: usize) -> Result<Stanza, DslError> {
        let name_tok = *toks.get(1).ok_or_else(|| err(DslErrorKind::Parse, ln, end, "expected a module name"))?;
        let name = self.fresh_name(ln, name_tok)?;
        keyword(ln, toks, 2, "over", end)?;
        let over_tok = *toks.get(3).ok_or_else(|| err(DslErrorKind::Parse, ln, end, "expected an algebra name"))?;
        self.algebra_ref(ln, over_tok)?;
        keyword(ln, toks, 4, "basis", end)?;
        let basis = labels_list(ln, &toks[5..], false)?;
        self.modules.insert(name.clone(), (over_tok.text.to_string(), basis.clone()));
        Ok(Stanza::Module { name, over: over_tok.text.to_string(), basis })
    }

    fn act(&mut self, field: Fp, ln: usize, toks: &[Tok<'_>], end: usize) -> Result<Stanza, DslError> {
        let name_tok = *toks.get(1).ok_or_else(|| err(DslErrorKind::Parse, ln, end, "expected a module name"))?;
        let (over, basis) = self.module_ref(ln, name_tok)?.clone();
        let alg = self.algebras[&over].labels.clone();
        let label = label_in(ln, toks.get(2).copied(), &alg, end)?;
        let target = label_in(ln, toks.get(3).copied(), &basis, end)?;
        keyword(ln, toks, 4, "=", end)?;
        let value = Self::expr(field, ln, &toks[5..], end, LabelTable { labels: &basis, unit: None })?;
        Ok(Stanza::Act { module: name_tok.text.to_string(), label, target, value })
    }

    fn pimap(&mut self, field: Fp, ln: usize, toks: &[Tok<'_>], end: usize) -> Result<Stanza, DslError> {
        let name_tok = *toks.get(1).ok_or_else(|| err(DslErrorKind::Parse, ln, end, "expected a module name"))?;
        let (_, basis) = self.module_ref(ln, name_tok)?.clone();
        let label = label_in(ln, toks.get(2).copied(), &basis, end)?;
        keyword(ln, toks, 3, "=", end)?;
        let value = Self::expr(field, ln, &toks[4..], end, LabelTable { labels: &basis, unit: None })?;
        Ok(Stanza::Pimap { module: name_tok.text.to_string(), label, value })
    }

    fn check(&mut self, field: Fp, ln: usize, toks: &[Tok<'_>], end: usize) -> Result<CheckDirective, DslError> {
        let kind_tok = *toks.get(1).ok_or_else(|| err(DslErrorKind::Parse, ln, end, "expected a check kind"))?;
        let kind = CheckKind::from_name(kind_tok.text).ok_or_else(|| err(DslErrorKind::Parse, ln, kind_tok.col, format!("unknown check `{}`", kind_tok.text)))?;
        let mut d = CheckDirective::new(kind);
        if kind == CheckKind::Witt {
            d.n = Some(int_at(ln, toks, 2, end, "number of variables")?);
            d.trials = Some(int_at(ln, toks, 3, end, "number of trials")? as usize);
            expect_end(ln, toks, 4)?;
            return Ok(d);
        }
        let alg_tok = *toks.get(2).ok_or_else(|| err(DslErrorKind::Parse, ln, end, "expected an algebra name"))?;
        let info = self.algebra_ref(ln, alg_tok)?.clone();
        d.algebra = Some(alg_tok.text.to_string());
        let mut pos = 3;
        if kind.takes_module() {
            match toks.get(pos) {
                Some(t) => {
                    d.module = Some(self.parse_module_ref(ln, *t, alg_tok.text)?);
                    pos += 1;
                }
                None if kind == CheckKind::Verify => {}
                None => return Err(err(DslErrorKind::Parse, ln, end, "expected a module (trivial, zero, plus, kaehler or a name)")),
            }
        }
        let table = LabelTable { labels: &info.labels, unit: Some(&info.labels[0]) };
        let rest = &toks[pos..];
        match kind {
            CheckKind::PowerExchange => {
                if !rest.is_empty() {
                    d.n = Some(int_at(ln, toks, pos, end, "n")?);
                    expect_end(ln, toks, pos + 1)?;
                }
            }
            CheckKind::Sequence => {
                if rest.is_empty() {
                    return Err(err(DslErrorKind::Parse, ln, end, "expected ideal generators"));
                }
                for chunk in split_commas(rest) {
                    let chunk_end = rest_end(chunk, end);
                    d.ideal.push(Self::expr(field, ln, chunk, chunk_end, table)?);
                }
            }
            CheckKind::Localize => {
                d.element = Some(Self::expr(field, ln, rest, end, table)?);
            }
            CheckKind::Beck if !rest.is_empty() => {
                if rest[0].text != "candidate" {
                    return Err(err(DslErrorKind::Parse, ln, rest[0].col, format!("expected `candidate`, found `{}`", rest[0].text)));
                }
                let module_labels = self.module_labels(d.module.as_ref().expect("beck takes a module"), &info);
                for chunk in split_commas(&rest[1..]) {
                    let chunk_end = rest_end(chunk, end);
                    let Some(first) = chunk.first() else {
                        return Err(err(DslErrorKind::Parse, ln, chunk_end, "expected `label = expr`"));
                    };
                    let label = label_in(ln, Some(*first), &info.labels, chunk_end)?;
                    keyword(ln, chunk, 1, "=", chunk_end)?;
                    let value = match &module_labels {
                        Some(ls) => Self::expr(field, ln, &chunk[2..], chunk_end, LabelTable { labels: ls, unit: None })?,
                        None => return Err(err(DslErrorKind::Invalid, ln, first.col, "candidates are only supported for modules with declared bases")),
                    };
                    if d.candidate.iter().any(|(l, _)| *l == label) {
                        return Err(err(DslErrorKind::Invalid, ln, first.col, format!("value for `{label}` given twice")));
                    }
                    d.candidate.push((label, value));
                }
            }
            _ => expect_end(ln, toks, pos)?,
        }
        Ok(d)
    }

    fn parse_module_ref(&self, ln: usize, t: Tok<'_>, algebra: &str) -> Result<ModuleRef, DslError> {
        Ok(match t.text {
            "trivial" => ModuleRef::Trivial,
            "zero" => ModuleRef::Zero,
            "plus" => ModuleRef::Plus,
            "kaehler" => ModuleRef::Kaehler,
            name => {
                let (over, _) = self.module_ref(ln, t)?;
                if over != algebra {
                    return Err(err(DslErrorKind::Invalid, ln, t.col, format!("module `{name}` is over {over}, not {algebra}")));
                }
                ModuleRef::Named(name.to_string())
            }
        })
    }

    /// Basis labels of a module whose basis is known at parse time.
    fn module_labels(&self, m: &ModuleRef, info: &AlgInfo) -> Option<Vec<String>> {
        match m {
            ModuleRef::Trivial => Some(info.labels.clone()),
            ModuleRef::Plus => Some(info.plus.clone()),
            ModuleRef::Zero => Some(Vec::new()),
            ModuleRef::Kaehler => None,
            ModuleRef::Named(n) => Some(self.modules[n].1.clone()),
        }
    }

    fn expr(field: Fp, ln: usize, toks: &[Tok<'_>], end: usize, table: LabelTable<'_>) -> Result<Expr, DslError> {
        if toks.is_empty() {
            return Err(err(DslErrorKind::Parse, ln, end, "expected an expression"));
        }
        let mut coeffs = vec![0u64; table.labels.len()];
        let mut i = 0;
        let mut first = true;
        while i < toks.len() {
            let mut negative = false;
            if first {
                if toks[i].text == "-" {
                    negative = true;
                    i += 1;
                }
            } else {
                match toks[i].text {
                    "+" => {}
                    "-" => negative = true,
                    other => return Err(err(DslErrorKind::Parse, ln, toks[i].col, format!("expected `+` or `-`, found `{other}`"))),
                }
                i += 1;
            }
            first = false;
            let t = *toks.get(i).ok_or_else(|| err(DslErrorKind::Parse, ln, end, "expected a term"))?;
            if is_operator(t.text) {
                return Err(err(DslErrorKind::Parse, ln, t.col, format!("expected a term, found `{}`", t.text)));
            }
            let (c, label_tok) = match t.text.parse::<i64>() {
                Ok(c) => match toks.get(i + 1) {
                    Some(next) if !is_operator(next.text) => {
                        i += 2;
                        (c, Some(*next))
                    }
                    _ => {
                        i += 1;
                        (c, None)
                    }
                },
                Err(_) => {
                    i += 1;
                    (1, Some(t))
                }
            };
            let mut c = field.from_i64(c);
            if negative {
                c = field.neg(c);
            }
            let index = match label_tok {
                Some(lt) => table.labels.iter().position(|l| l == lt.text).ok_or_else(|| err(DslErrorKind::UnknownLabel, ln, lt.col, format!("`{}` is not declared here", lt.text)))?,
                None => match table.unit.and_then(|u| table.labels.iter().position(|l| l == u)) {
                    Some(u) => u,
                    None if c == 0 => continue,
                    None => return Err(err(DslErrorKind::Parse, ln, t.col, "a nonzero scalar needs a basis label here")),
                },
            };
            coeffs[index] = field.add(coeffs[index], c);
        }
        let terms = coeffs.iter().zip(table.labels).filter(|(c, _)| **c != 0).map(|(&c, l)| (c, l.clone())).collect();
        Ok(Expr { terms })
    }
}

fn check_ident(ln: usize, t: Tok<'_>) -> Result<(), DslError> {
    if is_operator(t.text) || t.text.parse::<i64>().is_ok() {
        return Err(err(DslErrorKind::Parse, ln, t.col, format!("`{}` cannot be used as a name", t.text)));
    }
    Ok(())
}

/// Basis labels. Numerals would read as scalars inside expressions, so the
/// only one allowed is `1`, and only for the unit of an algebra.
fn labels_list(ln: usize, toks: &[Tok<'_>], unit_first: bool) -> Result<Vec<String>, DslError> {
    let mut out: Vec<String> = Vec::new();
    for (i, t) in toks.iter().enumerate() {
        let numeral = t.text.parse::<i64>().is_ok() && !(unit_first && i == 0 && t.text == "1");
        if numeral || is_operator(t.text) || matches!(t.text, "plus" | "basis" | "over" | "candidate") {
            return Err(err(DslErrorKind::Parse, ln, t.col, format!("`{}` cannot be used as a label", t.text)));
        }
        if out.iter().any(|l| l == t.text) {
            return Err(err(DslErrorKind::Invalid, ln, t.col, format!("label `{}` declared twice", t.text)));
        }
        out.push(t.text.to_string());
    }
    Ok(out)
}

fn label_in(ln: usize, t: Option<Tok<'_>>, labels: &[String], end: usize) -> Result<String, DslError> {
    let t = t.ok_or_else(|| err(DslErrorKind::Parse, ln, end, "expected a label"))?;
    if labels.iter().any(|l| l == t.text) {
        Ok(t.text.to_string())
    } else {
        Err(err(DslErrorKind::UnknownLabel, ln, t.col, format!("`{}` is not declared here", t.text)))
    }
}

fn keyword(ln: usize, toks: &[Tok<'_>], at: usize, word: &str, end: usize) -> Result<(), DslError> {
    match toks.get(at) {
        Some(t) if t.text == word => Ok(()),
        Some(t) => Err(err(DslErrorKind::Parse, ln, t.col, format!("expected `{word}`, found `{}`", t.text))),
        None => Err(err(DslErrorKind::Parse, ln, end, format!("expected `{word}`"))),
    }
}

fn expect_end(ln: usize, toks: &[Tok<'_>], at: usize) -> Result<(), DslError> {
    match toks.get(at) {
        Some(t) => Err(err(DslErrorKind::Parse, ln, t.col, format!("unexpected `{}`", t.text))),
        None => Ok(()),
    }
}

fn int_at(ln: usize, toks: &[Tok<'_>], at: usize, end: usize, what: &str) -> Result<u64, DslError> {
    let t = toks.get(at).ok_or_else(|| err(DslErrorKind::Parse, ln, end, format!("expected {what}")))?;
    t.text.parse().map_err(|_| err(DslErrorKind::Parse, ln, t.col, format!("expected {what}, found `{}`", t.text)))
}

fn split_commas<'a, 'b>(toks: &'b [Tok<'a>]) -> Vec<&'b [Tok<'a>]> {
    toks.split(|t| t.text == ",").collect()
}

fn rest_end(chunk: &[Tok<'_>], end: usize) -> usize {
    chunk.last().map_or(end, |t| t.col + t.text.chars().count())
}
