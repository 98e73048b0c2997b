use std::path::{Path, PathBuf};
use std::process::Command;

use qclosure::cli::{parse_qdf, run_from, serialize, PRELUDE};

fn fixtures() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "qdf"))
        .collect();
    v.sort();
    v
}

/// Expected exit code from the file-name prefix.
fn expected_code(p: &Path) -> i32 {
    let stem = p.file_name().unwrap().to_str().unwrap();
    match stem.split('_').next().unwrap() {
        "pass" => 0,
        "law" => 1,
        "parse" | "resolve" => 2,
        "cap" => 3,
        other => panic!("fixture prefix {other}"),
    }
}

fn qc(args: &[&str]) -> qclosure::cli::RunOutput {
    run_from(std::iter::once("qclosure").chain(args.iter().copied()))
}

#[test]
fn corpus_covers_every_error_class() {
    let codes: std::collections::BTreeSet<i32> =
        fixtures().iter().map(|p| expected_code(p)).collect();
    assert_eq!(codes.into_iter().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    for prefix in ["pass", "law", "parse", "resolve", "cap"] {
        assert!(fixtures().iter().any(|p| p
            .file_name()
            .unwrap()
            .to_str()
            .unwrap()
            .starts_with(prefix)));
    }
}

#[test]
fn exit_codes_in_process() {
    for f in fixtures() {
        let out = qc(&["--file", f.to_str().unwrap(), "validate"]);
        assert_eq!(
            out.code,
            expected_code(&f),
            "{}: {}{}",
            f.display(),
            out.stdout,
            out.stderr
        );
        if out.code == 1 {
            assert!(out.stdout.contains("[FAIL]") && out.stdout.contains("replay: qclosure"));
        }
        if out.code >= 2 {
            assert!(out.stderr.starts_with("error: "), "{}", out.stderr);
        }
    }
}

#[test]
fn exit_codes_of_the_binary() {
    let bin = env!("CARGO_BIN_EXE_qclosure");
    for f in fixtures() {
        let st = Command::new(bin)
            .args(["-f", f.to_str().unwrap(), "validate"])
            .output()
            .unwrap();
        assert_eq!(st.status.code(), Some(expected_code(&f)), "{}", f.display());
    }
    let st = Command::new(bin)
        .args(["laws", "no-such-suite"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(2));
    let st = Command::new(bin).args(["frobnicate"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    let st = Command::new(bin)
        .args(["dq", "drastic(4)"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(1));
    let st = Command::new(bin)
        .args(["--cap", "3", "presheaves", "chain2"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(3));
}

#[test]
fn roundtrip_is_stable() {
    let mut texts = vec![PRELUDE.to_string()];
    for f in fixtures() {
        let name = f.file_name().unwrap().to_str().unwrap().to_string();
        if !name.starts_with("parse") {
            texts.push(std::fs::read_to_string(&f).unwrap());
        }
    }
    for t in texts {
        let d = parse_qdf(&t).unwrap();
        let s = serialize(&d);
        let d2 = parse_qdf(&s).unwrap();
        assert_eq!(d, d2);
        assert_eq!(serialize(&d2), s);
    }
    // fmt output is itself a fixed point
    let f = fixtures()
        .into_iter()
        .find(|p| p.ends_with("pass_two_spaces.qdf"))
        .unwrap();
    let once = qc(&["-f", f.to_str().unwrap(), "fmt"]);
    assert_eq!(once.code, 0);
    let tmp = std::env::temp_dir().join(format!("qclosure-fmt-{}.qdf", std::process::id()));
    std::fs::write(&tmp, &once.stdout).unwrap();
    let twice = qc(&["-f", tmp.to_str().unwrap(), "fmt"]);
    std::fs::remove_file(&tmp).unwrap();
    assert_eq!(once.stdout, twice.stdout);
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["laws", "kan", "--seed", "11"],
        vec!["--format", "json", "laws", "kan", "--seed", "11"],
        vec!["laws", "continuity", "--max-size", "1"],
        vec!["validate"],
        vec!["--format", "json", "specialize", "S2"],
    ] {
        let a = qc(&args);
        let b = qc(&args);
        assert_eq!(a, b, "{args:?}");
        assert_eq!(a.code, 0, "{args:?}: {}", a.stderr);
    }
    let a = qc(&["laws", "kan", "--seed", "11"]);
    let b = qc(&["laws", "kan", "--seed", "12"]);
    assert_ne!(a.stdout, b.stdout);
    // binary and library agree byte for byte
    let bin = Command::new(env!("CARGO_BIN_EXE_qclosure"))
        .args(["laws", "kan", "--seed", "11"])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(bin.stdout).unwrap(), a.stdout);
}

#[test]
fn json_lines_parse() {
    let out = qc(&["--format", "json", "laws", "lattices"]);
    for line in out.stdout.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["suite"], "lattices");
        assert_eq!(v["verdict"], "pass");
        assert!(v.get("elapsed_ms").is_none());
    }
    let out = qc(&["--format", "json", "--timing", "laws", "lattices"]);
    let v: serde_json::Value = serde_json::from_str(out.stdout.lines().next().unwrap()).unwrap();
    assert!(v["elapsed_ms"].is_u64());
}

#[test]
fn prelude_commands() {
    let out = qc(&["closure", "apply", "S2", "[*| b=1]"]);
    assert_eq!(out.stdout, "c[*| a=0, b=1] = [*| a=1, b=1]\n");
    let out = qc(&["closure", "apply", "S2", "[*| b=1] junk"]);
    assert_eq!(out.code, 2);
    let out = qc(&["presheaves", "chain2"]);
    assert_eq!(out.stdout.lines().count(), 3);
    let out = qc(&["specialize", "S2"]);
    assert!(
        out.stdout.starts_with("a: a=1 b=1\nb: a=0 b=1\n"),
        "{}",
        out.stdout
    );
    let out = qc(&["roundtrip", "S2", "indiscrete2"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("closed continuous relations"));
    let out = qc(&["closure", "table", "discrete2"]);
    assert_eq!(out.stdout.lines().count(), 4);
}

#[test]
fn file_names_shadow_the_prelude() {
    let tmp = std::env::temp_dir().join(format!("qclosure-shadow-{}.qdf", std::process::id()));
    std::fs::write(
        &tmp,
        "TYPEDSET pt2 OVER 2: z:*\nEND\n\nCLOSURE S2 ON pt2\nCLOSED [*| z=1]\nEND\n",
    )
    .unwrap();
    let out = qc(&["-f", tmp.to_str().unwrap(), "closure", "table", "S2"]);
    std::fs::remove_file(&tmp).unwrap();
    assert_eq!(out.stdout, "[*| z=0] -> [*| z=1]\n[*| z=1] -> [*| z=1]\n");
}
