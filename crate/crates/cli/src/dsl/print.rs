use std::fmt::Write;

use super::{CheckDirective, CheckKind, Expr, Generator, Session, Stanza};

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (c, l)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *c == 1 {
                write!(f, "{l}")?;
            } else {
                write!(f, "{c} {l}")?;
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for CheckDirective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "check {}", self.kind.name())?;
        if self.kind == CheckKind::Witt {
            return write!(f, " {} {}", self.n.unwrap_or(1), self.trials.unwrap_or(200));
        }
        if let Some(a) = &self.algebra {
            write!(f, " {a}")?;
        }
        if let Some(m) = &self.module {
            write!(f, " {}", m.name())?;
        }
        match self.kind {
            CheckKind::PowerExchange => {
                if let Some(n) = self.n {
                    write!(f, " {n}")?;
                }
            }
            CheckKind::Sequence => {
                let gens: Vec<String> = self.ideal.iter().map(Expr::to_string).collect();
                write!(f, " {}", gens.join(" , "))?;
            }
            CheckKind::Localize => {
                if let Some(e) = &self.element {
                    write!(f, " {e}")?;
                }
            }
            CheckKind::Beck if !self.candidate.is_empty() => {
                let vals: Vec<String> = self.candidate.iter().map(|(l, e)| format!("{l} = {e}")).collect();
                write!(f, " candidate {}", vals.join(" , "))?;
            }
            _ => {}
        }
        Ok(())
    }
}

/// Canonical text of a session: one stanza per line, single spaces,
/// normalized expressions. Parsing the output gives back an equal session.
pub fn print_session(s: &Session) -> String {
    let mut out = format!("prime {}\n", s.prime);
    for stanza in &s.stanzas {
        let _ = match stanza {
            Stanza::Algebra { name, basis, plus } => {
                let _ = write!(out, "algebra {name} basis {}", basis.join(" "));
                if !plus.is_empty() {
                    let _ = write!(out, " plus {}", plus.join(" "));
                }
                writeln!(out)
            }
            Stanza::Generate { name, generator: Generator::DividedPower(m) } => {
                let hs: Vec<String> = m.iter().map(u32::to_string).collect();
                writeln!(out, "generate {name} divided-power {}", hs.join(" "))
            }
            Stanza::Generate { name, generator: Generator::TruncatedPoly } => writeln!(out, "generate {name} truncated-poly"),
            Stanza::Mul { algebra, left, right, value } => writeln!(out, "mul {algebra} {left} {right} = {value}"),
            Stanza::Pmap { algebra, label, value } => writeln!(out, "pmap {algebra} {label} = {value}"),
            Stanza::Module { name, over, basis } => {
                let _ = write!(out, "module {name} over {over} basis");
                for b in basis {
                    let _ = write!(out, " {b}");
                }
                writeln!(out)
            }
            Stanza::Act { module, label, target, value } => writeln!(out, "act {module} {label} {target} = {value}"),
            Stanza::Pimap { module, label, value } => writeln!(out, "pimap {module} {label} = {value}"),
            Stanza::Check(d) => writeln!(out, "{d}"),
        };
    }
    out
}
