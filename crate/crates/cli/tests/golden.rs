use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use pdcom_cli::{run_cli, EXIT_FAIL, EXIT_PARSE, EXIT_PASS, EXIT_USAGE};

const CLI_CASES: &[(&str, &[&str])] = &[
    ("cli_verify_divided_1_2", &["verify", "--O", "1", "2", "-p", "3", "--json"]),
    ("cli_witt_n2_seed7", &["witt", "-p", "3", "-n", "2", "--trials", "200", "--seed", "7", "--json"]),
    ("cli_representability_cube", &["representability", "--file", "tests/corpus/cube_pmap.pd", "--module", "trivial", "--json"]),
    ("cli_beck_candidate", &["beck", "--file", "tests/corpus/cube_pmap.pd", "--module", "plus", "--candidate", "x=2 x", "--candidate", "x2=x2", "--json"]),
    ("cli_sequence_divided_2_1", &["sequence", "--O", "2", "1", "-p", "3", "--ideal", "x2", "--json"]),
    ("cli_localize_cube", &["localize", "--file", "tests/corpus/cube_pmap.pd", "--element", "1 + x", "--json"]),
    ("cli_special_truncated", &["special", "--truncated-poly", "-p", "3", "--json"]),
];

fn sorted_files(dir: &str, ext: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).filter(|p| p.extension().is_some_and(|e| e == ext)).collect();
    v.sort();
    v
}

fn stem(p: &Path) -> String {
    p.file_stem().unwrap().to_string_lossy().into_owned()
}

/// Compares against `tests/golden/NAME`, or rewrites it when `UPDATE_GOLDEN` is set.
fn assert_golden(name: &str, actual: &str) {
    let path = Path::new("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

fn expected_code(src: &str) -> i32 {
    if src.lines().any(|l| l.trim() == "# verdict: fail") {
        EXIT_FAIL
    } else {
        EXIT_PASS
    }
}

#[test]
fn corpus_has_at_least_ten_sessions() {
    assert!(sorted_files("tests/corpus", "pd").len() >= 10);
}

#[test]
fn corpus_reports_match_goldens() {
    for path in sorted_files("tests/corpus", "pd") {
        let src = fs::read_to_string(&path).unwrap();
        let p = path.to_string_lossy().into_owned();
        let out = run_cli(["pdcom", "run", &p, "--json", "--seed", "0"]);
        assert_eq!(out.code, expected_code(&src), "{p}: {}", out.stderr);
        assert!(out.stderr.is_empty(), "{p}: {}", out.stderr);
        assert_golden(&format!("{}.json", stem(&path)), &out.stdout);
    }
}

#[test]
fn corpus_reports_are_byte_stable() {
    for path in sorted_files("tests/corpus", "pd") {
        let p = path.to_string_lossy().into_owned();
        let a = run_cli(["pdcom", "run", &p, "--json", "--seed", "5"]);
        let b = run_cli(["pdcom", "run", &p, "--json", "--seed", "5"]);
        assert_eq!(a, b, "{p}");
    }
}

#[test]
fn corpus_files_are_canonical() {
    // fmt output parses back to the same session and is its own fixed point
    for path in sorted_files("tests/corpus", "pd") {
        let p = path.to_string_lossy().into_owned();
        let once = run_cli(["pdcom", "fmt", &p]);
        assert_eq!(once.code, EXIT_PASS, "{p}");
        let tmp = std::env::temp_dir().join(format!("pdcom-fmt-{}.pd", stem(&path)));
        fs::write(&tmp, &once.stdout).unwrap();
        let twice = run_cli(["pdcom".into(), "fmt".into(), tmp.clone().into_os_string()]);
        assert_eq!(once.stdout, twice.stdout, "{p}");
        let check = run_cli(["pdcom".into(), "fmt".into(), "--check".into(), tmp.into_os_string()]);
        assert_eq!(check.code, EXIT_PASS);
    }
}

#[test]
fn malformed_inputs_give_positioned_diagnostics() {
    let files = sorted_files("tests/malformed", "pd");
    assert!(files.len() >= 8);
    for path in files {
        let p = path.to_string_lossy().into_owned();
        let out = run_cli(["pdcom", "run", &p]);
        assert_eq!(out.code, EXIT_PARSE, "{p}");
        assert!(out.stdout.is_empty());
        // path:line:column: kind: message
        let rest = out.stderr.strip_prefix(&format!("{p}:")).expect("diagnostic names the file");
        let mut parts = rest.splitn(3, ':');
        parts.next().unwrap().parse::<usize>().expect("line number");
        parts.next().unwrap().parse::<usize>().expect("column number");
        assert_golden(&format!("{}.err", stem(&path)), &out.stderr);
    }
}

#[test]
fn command_line_reports_match_goldens() {
    for (name, args) in CLI_CASES {
        let argv: Vec<&str> = std::iter::once("pdcom").chain(args.iter().copied()).collect();
        let out = run_cli(argv.clone());
        assert!(out.stderr.is_empty(), "{name}: {}", out.stderr);
        let expected = if *name == "cli_beck_candidate" { EXIT_FAIL } else { EXIT_PASS };
        assert_eq!(out.code, expected, "{name}");
        assert_eq!(out, run_cli(argv), "{name} is not deterministic");
        assert_golden(&format!("{name}.json"), &out.stdout);
    }
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["pdcom"],
        vec!["pdcom", "verify"],
        vec!["pdcom", "verify", "--O", "1", "2"],
        vec!["pdcom", "verify", "--file", "tests/corpus/cube_pmap.pd", "--O", "1", "1", "-p", "3"],
        vec!["pdcom", "beck", "--file", "tests/corpus/cube_pmap.pd", "--candidate", "x 2"],
        vec!["pdcom", "run", "tests/corpus/does_not_exist.pd"],
        vec!["pdcom", "frobnicate"],
    ] {
        let out = run_cli(args.clone());
        assert_eq!(out.code, EXIT_USAGE, "{args:?}: {}", out.stderr);
    }
    let help = run_cli(["pdcom", "--help"]);
    assert_eq!(help.code, EXIT_PASS);
    assert!(help.stdout.contains("power-exchange"));
}

#[test]
fn bad_expressions_on_the_command_line_are_parse_errors() {
    let out = run_cli(["pdcom", "localize", "--file", "tests/corpus/cube_pmap.pd", "--element", "1 + y"]);
    assert_eq!(out.code, EXIT_PARSE);
    assert!(out.stderr.starts_with("--element:1:5:"), "{}", out.stderr);
    let out = run_cli(["pdcom", "verify", "--O", "1", "1", "-p", "4"]);
    assert_eq!(out.code, EXIT_PARSE);
}

#[test]
fn timing_is_recorded_only_on_request() {
    let plain = run_cli(["pdcom", "gamma", "--truncated-poly", "-p", "3", "--json"]);
    assert!(plain.stdout.contains("\"elapsed_ms\": null"));
    let timed = run_cli(["pdcom", "gamma", "--truncated-poly", "-p", "3", "--json", "--timing"]);
    let v: serde_json::Value = serde_json::from_str(&timed.stdout).unwrap();
    assert!(v["elapsed_ms"].is_u64());
}

#[test]
fn json_report_has_the_documented_fields() {
    let out = run_cli(["pdcom", "kaehler", "--truncated-poly", "-p", "3", "--json", "--seed", "11"]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    for key in ["command", "prime", "inputs", "seed", "digest", "checks", "elapsed_ms"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["command"], "kaehler");
    assert_eq!(v["seed"], 11);
    assert_eq!(v["digest"].as_str().unwrap().len(), 64);
    for c in v["checks"].as_array().unwrap() {
        assert!(c["name"].is_string() && c["pass"].is_boolean() && c["dims"].is_object());
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_pdcom");
    let code = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code().unwrap();
    assert_eq!(code(&["verify", "--O", "1", "1", "-p", "3"]), EXIT_PASS);
    assert_eq!(code(&["run", "tests/corpus/broken_pmap.pd"]), EXIT_FAIL);
    assert_eq!(code(&["verify"]), EXIT_USAGE);
    assert_eq!(code(&["run", "tests/malformed/nonprime.pd"]), EXIT_PARSE);
    let out = Command::new(bin).args(["run", "tests/corpus/witt.pd", "--json"]).output().unwrap();
    let inproc = run_cli(["pdcom", "run", "tests/corpus/witt.pd", "--json"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), inproc.stdout);
}
