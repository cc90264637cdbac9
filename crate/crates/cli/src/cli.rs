use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use pdcom::{Report, Sampling};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::commands::{resolve_module, run_check};
use crate::dsl::{parse_expr, parse_session, print_session, CheckDirective, CheckKind, DslError, Generator, LabelTable, ModuleRef, Session, Stanza};
use crate::env::build_env;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "pdcom", version, about = "Beck modules, derivations and Kähler differentials of finite p-algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ring axioms, p-map axioms and (with --module) Beck module axioms.
    Verify(ModuleArgs),
    /// γ_n reconstructed from π: factorials, product rule, γ_p = π.
    Gamma(Target),
    /// Ordinary k-derivations A → M.
    Derivations(ModuleArgs),
    /// Special derivations A → A, cross-checked against γ.
    Special(Target),
    /// Beck derivations A → M, optionally auditing a candidate.
    Beck(BeckArgs),
    /// I/I² with its universal derivation.
    Kaehler(Target),
    /// The presentation Ω_p against I/I².
    Omega(Target),
    /// Der_p(A, M) against Beck-module maps I/I² → M.
    Representability(ModuleArgs),
    /// d(a^n) = n a^{n-1} da and d(π a) = a^{p-1} da.
    PowerExchange(PowerArgs),
    /// J/J² → Ω_A ⊗ A/J → Ω_{A/J} → 0 for an ideal J.
    Sequence(SequenceArgs),
    /// Brute-force sections of A ⊕_p M → A against p^dim Der_p.
    Sections(ModuleArgs),
    /// Random special vector fields on O(n) and their brackets.
    Witt(WittArgs),
    /// M_f against M ⊗ A_f, and d on A_f.
    Localize(LocalizeArgs),
    /// Runs every `check` stanza of a session file.
    Run(RunArgs),
    /// Prints a session file in canonical form.
    Fmt(FmtArgs),
}

#[derive(Args, Debug, Clone)]
struct Source {
    /// Session file declaring the algebra.
    #[arg(long, short = 'f', conflicts_with_all = ["divided_power", "truncated_poly"])]
    file: Option<PathBuf>,
    /// Algebra of the session file to use (default: the first one).
    #[arg(long, short = 'a', requires = "file")]
    algebra: Option<String>,
    /// The divided power algebra O(N; M): N variables of height M.
    #[arg(long = "O", num_args = 2, value_names = ["N", "M"], requires = "prime", conflicts_with = "truncated_poly")]
    divided_power: Option<Vec<u32>>,
    /// k[x]/(x^p) with the zero p-map.
    #[arg(long, requires = "prime")]
    truncated_poly: bool,
    /// Characteristic for the generated algebras.
    #[arg(short = 'p', long = "prime")]
    prime: Option<u64>,
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Print a JSON report.
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random samples per check when a space is too large to sweep.
    #[arg(long)]
    budget: Option<usize>,
    /// Record wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
struct Target {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct ModuleArgs {
    #[command(flatten)]
    target: Target,
    /// trivial, zero, plus, kaehler, or a module declared in the session file.
    #[arg(long, short = 'm')]
    module: Option<String>,
}

#[derive(Args, Debug)]
struct BeckArgs {
    #[command(flatten)]
    module: ModuleArgs,
    /// A value `LABEL=EXPR` of a derivation to audit; repeat for each basis element.
    #[arg(long)]
    candidate: Vec<String>,
}

#[derive(Args, Debug)]
struct PowerArgs {
    #[command(flatten)]
    target: Target,
    /// Only this exponent (default: every n in 1..=p).
    #[arg(short = 'n')]
    n: Option<u64>,
}

#[derive(Args, Debug)]
struct SequenceArgs {
    #[command(flatten)]
    target: Target,
    /// Generator of the ideal J; repeat for more.
    #[arg(long, required = true)]
    ideal: Vec<String>,
}

#[derive(Args, Debug)]
struct LocalizeArgs {
    #[command(flatten)]
    module: ModuleArgs,
    /// The element f to invert.
    #[arg(long)]
    element: String,
}

#[derive(Args, Debug)]
struct WittArgs {
    #[arg(short = 'p', long = "prime")]
    prime: u64,
    /// Number of variables.
    #[arg(short = 'n', default_value_t = 1)]
    n: u64,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct RunArgs {
    file: PathBuf,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct FmtArgs {
    file: PathBuf,
    /// Exit with status 1 if the file is not already canonical.
    #[arg(long)]
    check: bool,
}

/// Everything one invocation printed, and its exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn usage(msg: impl Into<String>) -> Self {
        CliOutput { code: EXIT_USAGE, stdout: String::new(), stderr: msg.into() }
    }

    fn parse(source: &str, e: &DslError) -> Self {
        CliOutput { code: EXIT_PARSE, stdout: String::new(), stderr: format!("{source}:{e}\n") }
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    command: &'a str,
    prime: u64,
    inputs: &'a BTreeMap<String, String>,
    seed: u64,
    digest: String,
    checks: &'a Report,
    elapsed_ms: Option<u64>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_cli<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CliOutput::usage(text)
            } else {
                CliOutput { code: EXIT_PASS, stdout: text, stderr: String::new() }
            };
        }
    };
    match cli.command {
        Command::Fmt(a) => fmt_file(&a),
        Command::Run(a) => run_file(&a),
        Command::Witt(a) => {
            let session = Session { prime: a.prime, stanzas: Vec::new(), lines: Vec::new() };
            let mut d = CheckDirective::new(CheckKind::Witt);
            d.n = Some(a.n);
            d.trials = Some(a.trials);
            let mut inputs = BTreeMap::new();
            inputs.insert("n".to_string(), a.n.to_string());
            inputs.insert("trials".to_string(), a.trials.to_string());
            single(&session, d, inputs, &a.out)
        }
        Command::Verify(a) => with_module(CheckKind::Verify, a, |_, _| Ok(())),
        Command::Gamma(t) => plain(CheckKind::Gamma, t),
        Command::Derivations(a) => with_module(CheckKind::Derivations, a, |_, _| Ok(())),
        Command::Special(t) => plain(CheckKind::Special, t),
        Command::Beck(b) => {
            let candidates = b.candidate;
            with_module(CheckKind::Beck, b.module, move |ctx, d| {
                for c in &candidates {
                    let (label, expr) = c.split_once('=').ok_or_else(|| CliOutput::usage(format!("--candidate expects LABEL=EXPR, got `{c}`\n")))?;
                    let label = label.trim().to_string();
                    if !ctx.algebra_labels.contains(&label) {
                        return Err(CliOutput::usage(format!("--candidate: unknown label `{label}`\n")));
                    }
                    let labels = ctx.module_labels()?;
                    let e = parse_expr(ctx.field, expr, LabelTable { labels: &labels, unit: None }).map_err(|e| CliOutput::parse("--candidate", &e))?;
                    d.candidate.push((label, e));
                }
                Ok(())
            })
        }
        Command::Kaehler(t) => plain(CheckKind::Kaehler, t),
        Command::Omega(t) => plain(CheckKind::Omega, t),
        Command::Representability(a) => with_module(CheckKind::Representability, a, |_, _| Ok(())),
        Command::PowerExchange(a) => {
            let n = a.n;
            with_extra(CheckKind::PowerExchange, a.target, None, move |_, d| {
                d.n = n;
                Ok(())
            })
        }
        Command::Sequence(a) => {
            let ideal = a.ideal;
            with_extra(CheckKind::Sequence, a.target, None, move |ctx, d| {
                for g in &ideal {
                    let e = parse_expr(ctx.field, g, ctx.algebra_table()).map_err(|e| CliOutput::parse("--ideal", &e))?;
                    d.ideal.push(e);
                }
                Ok(())
            })
        }
        Command::Sections(a) => with_module(CheckKind::Sections, a, |_, _| Ok(())),
        Command::Localize(a) => {
            let element = a.element;
            with_module(CheckKind::Localize, a.module, move |ctx, d| {
                let e = parse_expr(ctx.field, &element, ctx.algebra_table()).map_err(|e| CliOutput::parse("--element", &e))?;
                d.element = Some(e);
                Ok(())
            })
        }
    }
}

/// What a flag-parsing closure needs to interpret expressions.
struct Context<'a> {
    field: pdcom::Fp,
    session: &'a Session,
    algebra: String,
    algebra_labels: Vec<String>,
    module: Option<ModuleRef>,
}

impl Context<'_> {
    fn algebra_table(&self) -> LabelTable<'_> {
        LabelTable { labels: &self.algebra_labels, unit: self.algebra_labels.first().map(String::as_str) }
    }

    fn module_labels(&self) -> Result<Vec<String>, CliOutput> {
        let env = build_env(self.session).map_err(|e| CliOutput::parse("session", &e))?;
        let pd = &env.algebra(&self.algebra).expect("resolved").pd;
        let m = resolve_module(&env, pd, self.module.as_ref(), &Sampling::default()).map_err(|e| CliOutput { code: EXIT_FAIL, stdout: String::new(), stderr: format!("{e}\n") })?;
        Ok(m.labels().to_vec())
    }
}

fn plain(kind: CheckKind, t: Target) -> CliOutput {
    with_extra(kind, t, None, |_, _| Ok(()))
}

fn with_module<F>(kind: CheckKind, a: ModuleArgs, extra: F) -> CliOutput
where
    F: FnOnce(&Context<'_>, &mut CheckDirective) -> Result<(), CliOutput>,
{
    with_extra(kind, a.target, a.module, extra)
}

fn with_extra<F>(kind: CheckKind, t: Target, module: Option<String>, extra: F) -> CliOutput
where
    F: FnOnce(&Context<'_>, &mut CheckDirective) -> Result<(), CliOutput>,
{
    let (session, source) = match load_source(&t.source) {
        Ok(s) => s,
        Err(e) => return e,
    };
    let (algebra, labels) = match algebra_of(&session, t.source.algebra.as_deref()) {
        Ok(x) => x,
        Err(e) => return e,
    };
    let module = module.map(|m| match m.as_str() {
        "trivial" => ModuleRef::Trivial,
        "zero" => ModuleRef::Zero,
        "plus" => ModuleRef::Plus,
        "kaehler" => ModuleRef::Kaehler,
        _ => ModuleRef::Named(m),
    });
    if let Some(ModuleRef::Named(name)) = &module {
        let declared = session.stanzas.iter().any(|s| matches!(s, Stanza::Module { name: n, over, .. } if n == name && *over == algebra));
        if !declared {
            return CliOutput::usage(format!("no module `{name}` over {algebra}\n"));
        }
    }
    let mut d = CheckDirective::new(kind);
    d.algebra = Some(algebra.clone());
    d.module = module.clone();
    let ctx = Context { field: pdcom::Fp::new(session.prime).expect("checked at load"), session: &session, algebra: algebra.clone(), algebra_labels: labels, module };
    if let Err(e) = extra(&ctx, &mut d) {
        return e;
    }
    let mut inputs = BTreeMap::new();
    inputs.insert("source".to_string(), source.clone());
    inputs.insert("algebra".to_string(), algebra);
    if let Some(m) = &d.module {
        inputs.insert("module".to_string(), m.name().to_string());
    }
    if let Some(n) = d.n {
        inputs.insert("n".to_string(), n.to_string());
    }
    if !d.ideal.is_empty() {
        let gens: Vec<String> = d.ideal.iter().map(ToString::to_string).collect();
        inputs.insert("ideal".to_string(), gens.join(" , "));
    }
    if let Some(e) = &d.element {
        inputs.insert("element".to_string(), e.to_string());
    }
    if !d.candidate.is_empty() {
        let vals: Vec<String> = d.candidate.iter().map(|(l, e)| format!("{l} = {e}")).collect();
        inputs.insert("candidate".to_string(), vals.join(" , "));
    }
    single(&session, d, inputs, &t.out)
}

fn single(session: &Session, d: CheckDirective, inputs: BTreeMap<String, String>, out: &Output) -> CliOutput {
    let env = match build_env(session) {
        Ok(env) => env,
        Err(e) => return CliOutput::parse("session", &e),
    };
    let sampling = sampling(out);
    let start = Instant::now();
    let report = run_check(&env, &d, &sampling);
    let elapsed = start.elapsed();
    let digest_input = format!("{}{}\n", print_session(session), d);
    render(d.kind.name(), session.prime, &inputs, &digest_input, &report, out, elapsed)
}

fn sampling(out: &Output) -> Sampling {
    let s = Sampling::default().with_seed(out.seed);
    match out.budget {
        Some(b) => s.with_samples(b),
        None => s,
    }
}

fn render(command: &str, prime: u64, inputs: &BTreeMap<String, String>, digest_input: &str, report: &Report, out: &Output, elapsed: std::time::Duration) -> CliOutput {
    let code = if report.passed() { EXIT_PASS } else { EXIT_FAIL };
    let elapsed_ms = out.timing.then_some(elapsed.as_millis() as u64);
    let stdout = if out.json {
        let digest: String = Sha256::digest(digest_input.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
        let json = JsonReport { command, prime, inputs, seed: out.seed, digest, checks: report, elapsed_ms };
        let mut s = serde_json::to_string_pretty(&json).expect("report serializes");
        s.push('\n');
        s
    } else {
        render_text(command, prime, inputs, report, elapsed_ms)
    };
    CliOutput { code, stdout, stderr: String::new() }
}

fn render_text(command: &str, prime: u64, inputs: &BTreeMap<String, String>, report: &Report, elapsed_ms: Option<u64>) -> String {
    let mut s = format!("{command} (p = {prime}");
    for (k, v) in inputs {
        s.push_str(&format!(", {k} {v}"));
    }
    s.push_str(")\n");
    for c in &report.checks {
        s.push_str(&format!("  {} {}", if c.pass { "ok  " } else { "FAIL" }, c.name));
        if !c.dims.is_empty() {
            let dims: Vec<String> = c.dims.iter().map(|(k, v)| format!("{k}={v}")).collect();
            s.push_str(&format!(" [{}]", dims.join(" ")));
        }
        s.push('\n');
        if let Some(w) = &c.witness {
            s.push_str(&format!("       witness: {w}\n"));
        }
        if let Some(n) = &c.note {
            s.push_str(&format!("       {n}\n"));
        }
    }
    let failed = report.failures().count();
    if failed == 0 {
        s.push_str(&format!("passed: {} checks", report.checks.len()));
    } else {
        s.push_str(&format!("FAILED: {failed} of {} checks", report.checks.len()));
    }
    if let Some(ms) = elapsed_ms {
        s.push_str(&format!(" in {ms} ms"));
    }
    s.push('\n');
    s
}

fn read_session(path: &PathBuf) -> Result<Session, CliOutput> {
    let text = std::fs::read_to_string(path).map_err(|e| CliOutput::usage(format!("cannot read {}: {e}\n", path.display())))?;
    parse_session(&text).map_err(|e| CliOutput::parse(&path.display().to_string(), &e))
}

fn load_source(src: &Source) -> Result<(Session, String), CliOutput> {
    if let Some(path) = &src.file {
        if src.prime.is_some() {
            return Err(CliOutput::usage("-p only applies to --O and --truncated-poly\n"));
        }
        return Ok((read_session(path)?, path.display().to_string()));
    }
    let p = src.prime.ok_or_else(|| CliOutput::usage("give --file, or a generator (--O N M or --truncated-poly) with -p\n"))?;
    if pdcom::Fp::new(p).is_err() {
        return Err(CliOutput::parse("-p", &DslError::new(crate::dsl::DslErrorKind::NonPrimeModulus, 1, 1, format!("{p} is not prime"))));
    }
    let (generator, source) = match (&src.divided_power, src.truncated_poly) {
        (Some(nm), false) => {
            let (n, m) = (nm[0], nm[1]);
            if n == 0 || m == 0 {
                return Err(CliOutput::usage("--O needs N >= 1 and M >= 1\n"));
            }
            (Generator::DividedPower(vec![m; n as usize]), format!("O({n};{m})"))
        }
        (None, true) => (Generator::TruncatedPoly, "k[x]/(x^p)".to_string()),
        _ => return Err(CliOutput::usage("give --file, or a generator (--O N M or --truncated-poly) with -p\n")),
    };
    let session = Session { prime: p, stanzas: vec![Stanza::Generate { name: "A".into(), generator }], lines: vec![1] };
    Ok((session, source))
}

fn algebra_of(session: &Session, wanted: Option<&str>) -> Result<(String, Vec<String>), CliOutput> {
    let env = build_env(session).map_err(|e| CliOutput::parse("session", &e))?;
    let a = match wanted {
        Some(name) => env.algebra(name).ok_or_else(|| CliOutput::usage(format!("no algebra named `{name}`\n")))?,
        None => env.algebras.first().ok_or_else(|| CliOutput::usage("the session declares no algebra\n"))?,
    };
    Ok((a.name.clone(), a.pd.algebra().labels().to_vec()))
}

fn run_file(a: &RunArgs) -> CliOutput {
    let session = match read_session(&a.file) {
        Ok(s) => s,
        Err(e) => return e,
    };
    let env = match build_env(&session) {
        Ok(env) => env,
        Err(e) => return CliOutput::parse(&a.file.display().to_string(), &e),
    };
    let sampling = sampling(&a.out);
    let start = Instant::now();
    let mut report = Report::new();
    for (line, d) in &env.checks {
        report.extend_prefixed(&format!("{line}:{}", d.kind.name()), run_check(&env, d, &sampling));
    }
    let elapsed = start.elapsed();
    let mut inputs = BTreeMap::new();
    inputs.insert("source".to_string(), a.file.display().to_string());
    inputs.insert("directives".to_string(), env.checks.len().to_string());
    render("run", session.prime, &inputs, &print_session(&session), &report, &a.out, elapsed)
}

fn fmt_file(a: &FmtArgs) -> CliOutput {
    let text = match std::fs::read_to_string(&a.file) {
        Ok(t) => t,
        Err(e) => return CliOutput::usage(format!("cannot read {}: {e}\n", a.file.display())),
    };
    let session = match parse_session(&text) {
        Ok(s) => s,
        Err(e) => return CliOutput::parse(&a.file.display().to_string(), &e),
    };
    let canonical = print_session(&session);
    if a.check && canonical != text {
        return CliOutput { code: EXIT_FAIL, stdout: String::new(), stderr: format!("{} is not in canonical form\n", a.file.display()) };
    }
    CliOutput { code: EXIT_PASS, stdout: canonical, stderr: String::new() }
}
