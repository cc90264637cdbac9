//! The session language: one stanza per line, `#` comments, whitespace-separated tokens.
//!
//! ```text
//! prime 3
//! algebra A basis 1 x x2 plus x x2
//! mul A x x = 2 x2
//! pmap A x = x2
//! module M over A basis m
//! act M x m = 0
//! pimap M m = 0
//! generate B divided-power 1 1
//! check beck A plus
//! ```

mod parse;
mod print;

use std::fmt;

pub use parse::{parse_expr, parse_session, LabelTable};
pub use print::print_session;

/// A linear combination over a declared basis, normalized: basis order,
/// merged, no zero coefficients. The empty combination is `0`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Expr {
    pub terms: Vec<(u64, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    /// `O(n; m)` with one height per variable.
    DividedPower(Vec<u32>),
    /// `k[x]/(x^p)` with the zero p-map.
    TruncatedPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleRef {
    /// `(A, 0)`
    Trivial,
    Zero,
    /// `(A_+, π)`
    Plus,
    /// `I/I²`
    Kaehler,
    Named(String),
}

impl ModuleRef {
    pub fn name(&self) -> &str {
        match self {
            ModuleRef::Trivial => "trivial",
            ModuleRef::Zero => "zero",
            ModuleRef::Plus => "plus",
            ModuleRef::Kaehler => "kaehler",
            ModuleRef::Named(n) => n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CheckKind {
    Verify,
    Gamma,
    Derivations,
    Special,
    Beck,
    Kaehler,
    Omega,
    Representability,
    PowerExchange,
    Sequence,
    Sections,
    Witt,
    Localize,
}

impl CheckKind {
    pub const ALL: [CheckKind; 13] = [
        CheckKind::Verify,
        CheckKind::Gamma,
        CheckKind::Derivations,
        CheckKind::Special,
        CheckKind::Beck,
        CheckKind::Kaehler,
        CheckKind::Omega,
        CheckKind::Representability,
        CheckKind::PowerExchange,
        CheckKind::Sequence,
        CheckKind::Sections,
        CheckKind::Witt,
        CheckKind::Localize,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Verify => "verify",
            CheckKind::Gamma => "gamma",
            CheckKind::Derivations => "derivations",
            CheckKind::Special => "special",
            CheckKind::Beck => "beck",
            CheckKind::Kaehler => "kaehler",
            CheckKind::Omega => "omega",
            CheckKind::Representability => "representability",
            CheckKind::PowerExchange => "power-exchange",
            CheckKind::Sequence => "sequence",
            CheckKind::Sections => "sections",
            CheckKind::Witt => "witt",
            CheckKind::Localize => "localize",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Whether the check takes a module argument.
    pub fn takes_module(self) -> bool {
        matches!(
            self,
            CheckKind::Verify
                | CheckKind::Derivations
                | CheckKind::Beck
                | CheckKind::Representability
                | CheckKind::Sections
                | CheckKind::Localize
        )
    }
}

/// A `check` stanza, or the equivalent command-line invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckDirective {
    pub kind: CheckKind,
    pub algebra: Option<String>,
    pub module: Option<ModuleRef>,
    /// `n` for `power-exchange`; number of variables for `witt`.
    pub n: Option<u64>,
    pub trials: Option<usize>,
    /// Ideal generators for `sequence`.
    pub ideal: Vec<Expr>,
    /// The element to invert for `localize`.
    pub element: Option<Expr>,
    /// Values `D(e) = expr` of a derivation to audit with `beck`.
    pub candidate: Vec<(String, Expr)>,
}

impl CheckDirective {
    pub fn new(kind: CheckKind) -> Self {
        CheckDirective {
            kind,
            algebra: None,
            module: None,
            n: None,
            trials: None,
            ideal: Vec::new(),
            element: None,
            candidate: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stanza {
    Algebra { name: String, basis: Vec<String>, plus: Vec<String> },
    Generate { name: String, generator: Generator },
    Mul { algebra: String, left: String, right: String, value: Expr },
    Pmap { algebra: String, label: String, value: Expr },
    Module { name: String, over: String, basis: Vec<String> },
    Act { module: String, label: String, target: String, value: Expr },
    Pimap { module: String, label: String, value: Expr },
    Check(CheckDirective),
}

/// A parsed file. Equality ignores line numbers.
#[derive(Debug, Clone)]
pub struct Session {
    pub prime: u64,
    pub stanzas: Vec<Stanza>,
    /// Source line of each stanza.
    pub lines: Vec<usize>,
}

impl PartialEq for Session {
    fn eq(&self, other: &Self) -> bool {
        self.prime == other.prime && self.stanzas == other.stanzas
    }
}

impl Eq for Session {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DslErrorKind {
    Parse,
    DuplicatePrime,
    UnknownLabel,
    NonPrimeModulus,
    /// The stanzas parse but describe an invalid structure.
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DslError {
    pub kind: DslErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl DslError {
    pub fn new(kind: DslErrorKind, line: usize, column: usize, message: impl Into<String>) -> Self {
        DslError { kind, line, column, message: message.into() }
    }
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            DslErrorKind::Parse => "parse error",
            DslErrorKind::DuplicatePrime => "duplicate prime",
            DslErrorKind::UnknownLabel => "unknown label",
            DslErrorKind::NonPrimeModulus => "non-prime modulus",
            DslErrorKind::Invalid => "invalid structure",
        };
        write!(f, "{}:{}: {kind}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for DslError {}
