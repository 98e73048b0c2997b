//! One PASS/FAIL line per acceptance criterion, each under its time limit.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::path::Path;
use std::time::{Duration, Instant};

use qclosure::cli::suites::{run_suite, SuiteOptions};
use qclosure::cli::{parse_qdf, run_from, serialize, PRELUDE};
use qclosure::report::LawReport;

/// Leading integer of the detail of the report whose instance contains `key`.
fn count(reports: &[LawReport], key: &str) -> Result<usize, String> {
    let r = reports
        .iter()
        .find(|r| r.instance.contains(key))
        .ok_or_else(|| format!("no report matching `{key}`"))?;
    let d = r.detail.as_deref().unwrap_or("");
    d.split_whitespace()
        .next()
        .and_then(|w| w.parse().ok())
        .ok_or_else(|| format!("no count in `{d}`"))
}

fn expect(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs a suite with default options; every report must pass.
fn suite(name: &str) -> Result<Vec<LawReport>, String> {
    let reports = run_suite(name, &SuiteOptions::default())
        .expect("known suite")
        .map_err(|e| e.to_string())?;
    if let Some(r) = reports.iter().find(|r| !r.passed()) {
        return Err(r.to_text());
    }
    Ok(reports)
}

// Moore families on n-point sets: 1, 2, 7, 61.
const MOORE: [usize; 4] = [1, 2, 7, 61];

fn c1() -> Result<(), String> {
    let r = suite("quantaloid")?;
    expect(
        r.iter().any(|r| r.instance.contains("drastic(4) rejected")),
        || "no drastic witness".into(),
    )?;
    // 2, godel(2..=5), luk(2..=5) and their images
    expect(
        r.iter().filter(|r| r.instance.ends_with(" laws")).count() == 18,
        || "law instances".into(),
    )
}

fn c2() -> Result<(), String> {
    let r = suite("dq")?;
    expect(r.len() == 2, || format!("{} instances", r.len()))
}

fn c3() -> Result<(), String> {
    let r = suite("kan")?;
    expect(count(&r, "seeded")? >= 100, || {
        "fewer than 100 seeded instances".into()
    })?;
    expect(count(&r, "all distributors")? > 0, || {
        "no exhaustive instances".into()
    })
}

fn c4() -> Result<(), String> {
    let r = suite("yoneda")?;
    // preorders on 0..=3 labelled points: 1 + 1 + 4 + 29
    let n = count(&r, "every presheaf")?;
    expect(n == 35, || format!("{n} categories"))
}

fn c5() -> Result<(), String> {
    let r = suite("completeness")?;
    expect(count(&r, "sup formula")? > 0, || "no sup instances".into())?;
    expect(count(&r, "agree")? > 0, || {
        "no completeness instances".into()
    })
}

fn c6() -> Result<(), String> {
    let r = suite("continuity")?;
    let spaces: usize = MOORE[..3].iter().sum();
    expect(
        r.iter()
            .all(|r| r.instance.contains(&format!("{spaces} spaces"))),
        || "space count".into(),
    )?;
    expect(
        count(&r, "functor")? > 0 && count(&r, "relation")? > 0,
        || "empty family".into(),
    )
}

fn c7() -> Result<(), String> {
    let r = suite("specialization")?;
    let spaces: usize = MOORE.iter().sum();
    let n = count(&r, "x in c{y}")?;
    expect(n == spaces, || format!("{n} spaces, expected {spaces}"))?;
    expect(count(&r, "objects over 2")? == 35, || {
        "categories over 2".into()
    })?;
    expect(count(&r, "over D(luk(3))")? > 0, || {
        "categories over D(luk(3))".into()
    })?;
    expect(count(&r, "Alexandrov")? > 0, || "Alexandrov".into())
}

fn c8() -> Result<(), String> {
    let r = suite("nucleus")?;
    expect(count(&r, "compositional")? > 0, || "no pairs".into())
}

fn c9() -> Result<(), String> {
    let r = suite("equivalence")?;
    // closure spaces on categories with at most two elements over 2:
    // 1 + 2 + 7 (discrete) + 2 * 4 (chains) + 2 (indiscrete)
    let pairs = count(&r, "match sup-maps")?;
    let spaces = 20;
    expect(pairs == spaces * spaces, || format!("{pairs} pairs"))?;
    expect(count(&r, "reduction")? > 0, || {
        "no reduction witness".into()
    })
}

fn c10() -> Result<(), String> {
    let r = suite("lattices")?;
    // lattices with 1..=4 elements up to isomorphism: 1 + 1 + 1 + 2
    let n = count(&r, "isomorphism")?;
    expect(n == 5, || format!("{n} lattices"))
}

fn c11() -> Result<(), String> {
    let r = suite("fuzzy")?;
    for k in ["luk(3)", "godel(3)"] {
        expect(
            r.iter().any(|r| {
                r.instance
                    .starts_with(&format!("{k} powerset on {{x0:1, x1:1}}"))
            }),
            || k.into(),
        )?;
        expect(
            r.iter()
                .any(|r| r.instance.starts_with(&format!("{k} closure spaces"))),
            || k.into(),
        )?;
    }
    Ok(())
}

fn qc(args: &[&str]) -> qclosure::cli::RunOutput {
    run_from(std::iter::once("qclosure").chain(args.iter().copied()))
}

fn c12() -> Result<(), String> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    let mut classes = std::collections::BTreeSet::new();
    let mut texts = vec![PRELUDE.to_string()];
    for f in &files {
        let stem = f.file_name().unwrap().to_str().unwrap();
        let want = match stem.split('_').next().unwrap() {
            "pass" => 0,
            "law" => 1,
            "parse" | "resolve" => 2,
            "cap" => 3,
            _ => continue,
        };
        classes.insert(stem.split('_').next().unwrap().to_string());
        let out = qc(&["-f", f.to_str().unwrap(), "validate"]);
        expect(out.code == want, || {
            format!("{stem}: exit {} not {want}", out.code)
        })?;
        if want != 2 || stem.starts_with("resolve") {
            texts.push(std::fs::read_to_string(f).unwrap());
        }
    }
    expect(classes.len() == 5, || format!("error classes {classes:?}"))?;
    for t in texts {
        let d = parse_qdf(&t).map_err(|e| e.to_string())?;
        let s = serialize(&d);
        let d2 = parse_qdf(&s).map_err(|e| e.to_string())?;
        expect(d == d2 && serialize(&d2) == s, || {
            "round-trip changed the document".into()
        })?;
    }
    for args in [
        ["laws", "kan", "--seed", "5"],
        ["--format", "json", "laws", "yoneda"],
    ] {
        let (a, b) = (qc(&args), qc(&args));
        expect(a == b && a.code == 0, || {
            format!("{args:?} not reproducible")
        })?;
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    type Check = fn() -> Result<(), String>;
    let criteria: [(&str, u64, Check); 12] = [
        ("quantaloid laws", 10, c1),
        ("DQ closed forms", 5, c2),
        ("Kan adjunction", 30, c3),
        ("Yoneda", 10, c4),
        ("presheaf completeness", 30, c5),
        ("continuity equivalences", 60, c6),
        ("specialization", 60, c7),
        ("nucleus", 60, c8),
        ("closed relations vs sup-maps", 120, c9),
        ("C(I L) = L", 10, c10),
        ("fuzzy layer", 60, c11),
        ("CLI", 5, c12),
    ];
    let mut failed = Vec::new();
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = f();
        let el = t.elapsed();
        let res = res.and_then(|()| {
            expect(el < Duration::from_secs(*limit), || {
                format!("took {:.2}s, limit {limit}s", el.as_secs_f64())
            })
        });
        match &res {
            Ok(()) => println!(
                "PASS {:>2} {name} ({:.2}s < {limit}s)",
                i + 1,
                el.as_secs_f64()
            ),
            Err(e) => {
                println!(
                    "FAIL {:>2} {name} ({:.2}s, limit {limit}s): {e}",
                    i + 1,
                    el.as_secs_f64()
                );
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
