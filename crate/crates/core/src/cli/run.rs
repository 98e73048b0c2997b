//! Command-line interface: argument parsing, dispatch and report output.

use std::fmt::Write as _;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use super::qdf::{
    error_exit_code, parse_presheaf_lit, parse_qdf, serialize, QdfDocument, QdfError,
};
use super::resolve::{resolve, Env, LitError, Resolved};
use super::suites::{run_suite, SuiteOptions, SUITES};
use crate::algebra::validate_quantaloid;
use crate::closure::{classical_specialization, specialization};
use crate::contdist::check_bijection;
use crate::qcat::presheaf::{format_presheaf, Kind};
use crate::qcat::DEFAULT_CAP;
use crate::report::LawReport;
use crate::Error;

/// Instances available to every command; a document may shadow them.
pub const PRELUDE: &str = "\
# two points over the Boolean quantale
TYPEDSET pt2 OVER 2
a:* b:*
END

# a <= b
CATEGORY chain2 ON pt2
HOM a b=1
END

# Sierpinski space: closed sets {a} and {a, b}
CLOSURE S2 ON pt2
CLOSED [*| a=1] [*| a=1, b=1]
MODE exact
END

CLOSURE discrete2 ON pt2
CLOSED [*| ] [*| a=1] [*| b=1] [*| a=1, b=1]
MODE exact
END

CLOSURE indiscrete2 ON pt2
CLOSED [*| a=1, b=1]
MODE exact
END
";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "qclosure",
    version,
    about = "Finite quantaloid-enriched closure spaces: definitions and law suites"
)]
pub struct Cli {
    /// Definition file; its blocks are added to (and may shadow) the built-in instances.
    #[arg(short, long, global = true)]
    pub file: Option<String>,

    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,

    /// Bound on enumerated presheaves, closure systems and candidate maps.
    #[arg(long, default_value_t = DEFAULT_CAP, global = true)]
    pub cap: usize,

    /// Seed for randomized instance families.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    /// Overrides a suite's carrier size bound.
    #[arg(long, global = true)]
    pub max_size: Option<usize>,

    /// Adds elapsed milliseconds to reports (output is then no longer reproducible).
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Resolve the document and validate every block.
    Validate,
    /// List the presheaves of a category (or typed set, taken discrete).
    Presheaves { category: String },
    /// Closure operations.
    Closure {
        #[command(subcommand)]
        op: ClosureOp,
    },
    /// Specialization category of a closure space.
    Specialize { space: String },
    /// Build and check D(k) for a quantale.
    Dq { quantale: String },
    /// Run one law suite.
    Laws { suite: String },
    /// Closed continuous relations A ⇸ B against sup-maps C(B) → C(A).
    Roundtrip { a: String, b: String },
    /// Run suites.
    Suite {
        #[command(subcommand)]
        which: SuiteWhich,
    },
    /// Print the document in canonical form.
    Fmt,
}

#[derive(Debug, Subcommand)]
pub enum ClosureOp {
    /// Apply the closure operator of SPACE to a presheaf literal such as `[*| a=1]`.
    Apply { space: String, presheaf: String },
    /// Print the whole closure table of SPACE.
    Table { space: String },
}

#[derive(Debug, Subcommand)]
pub enum SuiteWhich {
    /// Every suite in canonical order.
    All,
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl RunOutput {
    fn error(e: &QdfError) -> Self {
        RunOutput {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: e.exit_code(),
        }
    }
}

/// Parses arguments (including the program name) and runs.
pub fn run_from<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                RunOutput {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                RunOutput {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            }
        }
    }
}

/// Loads the prelude and the optional file.
fn load(cli: &Cli) -> Result<(QdfDocument, Resolved), QdfError> {
    let prelude = parse_qdf(PRELUDE).expect("prelude parses");
    let base = resolve(&prelude, Env::new(), cli.cap)?;
    let Some(path) = &cli.file else {
        return Ok((prelude, base));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| QdfError::Usage(format!("cannot read {path}: {e}")))?;
    let doc = parse_qdf(&text)?;
    let res = resolve(&doc, base.env, cli.cap)?;
    Ok((doc, res))
}

struct Out<'a> {
    cli: &'a Cli,
    text: String,
    failed: bool,
}

impl Out<'_> {
    fn report(&mut self, r: &LawReport) {
        self.failed |= !r.passed();
        match self.cli.format {
            Format::Text => {
                let _ = writeln!(self.text, "{}", r.to_text());
            }
            Format::Json => {
                let _ = writeln!(
                    self.text,
                    "{}",
                    serde_json::to_string(r).expect("serializable")
                );
            }
        }
    }

    fn line(&mut self, text: impl FnOnce() -> String, value: impl FnOnce() -> serde_json::Value) {
        match self.cli.format {
            Format::Text => {
                let _ = writeln!(self.text, "{}", text());
            }
            Format::Json => {
                let _ = writeln!(self.text, "{}", value());
            }
        }
    }

    fn finish(self) -> RunOutput {
        RunOutput {
            stdout: self.text,
            stderr: String::new(),
            code: self.failed as i32,
        }
    }
}

/// The command line that reproduces a report.
fn replay(cli: &Cli, rest: &str) -> String {
    let mut s = String::from("qclosure");
    if let Some(f) = &cli.file {
        s.push_str(&format!(" --file {f}"));
    }
    if cli.cap != DEFAULT_CAP {
        s.push_str(&format!(" --cap {}", cli.cap));
    }
    s.push(' ');
    s.push_str(rest);
    s
}

fn with_replay(mut r: LawReport, rp: &str) -> LawReport {
    if !r.passed() && r.replay.is_none() {
        r.replay = Some(rp.to_string());
    }
    r
}

fn suite_replay(cli: &Cli, suite: &str) -> String {
    let mut s = format!("laws {suite} --seed {}", cli.seed);
    if let Some(n) = cli.max_size {
        s.push_str(&format!(" --max-size {n}"));
    }
    replay(cli, &s)
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> RunOutput {
    match dispatch(cli) {
        Ok(o) => o,
        Err(e) => RunOutput::error(&e),
    }
}

fn unknown(what: &str, name: &str) -> QdfError {
    QdfError::Usage(format!("unknown {what} `{name}`"))
}

fn dispatch(cli: &Cli) -> Result<RunOutput, QdfError> {
    let mut out = Out {
        cli,
        text: String::new(),
        failed: false,
    };
    let opts = SuiteOptions {
        cap: cli.cap,
        seed: cli.seed,
        max_size: cli.max_size,
    };
    match &cli.command {
        Command::Laws { suite } => {
            if !SUITES.contains(&suite.as_str()) {
                return Err(QdfError::Usage(format!(
                    "unknown suite `{suite}`; expected one of {}",
                    SUITES.join(", ")
                )));
            }
            run_suites(cli, &mut out, &[suite.as_str()], &opts)?;
        }
        Command::Suite {
            which: SuiteWhich::All,
        } => run_suites(cli, &mut out, SUITES, &opts)?,
        Command::Dq { quantale } => {
            let mut env = load(cli)?.1.env;
            let rp = replay(cli, &format!("dq {quantale}"));
            let k = env.quantale(quantale).map_err(QdfError::Usage)?;
            let div = k.is_divisible()?;
            if !div.divisible {
                out.report(&with_replay(
                    LawReport::fail(
                        "dq",
                        format!("{} divisibility", k.name()),
                        div.witness.unwrap_or_default(),
                    ),
                    &rp,
                ));
                return Ok(out.finish());
            }
            out.report(&LawReport::pass("dq", format!("{} divisibility", k.name())));
            let d = env.dq(quantale).map_err(QdfError::Usage)?;
            let q = d.quantaloid();
            let sizes: Vec<String> = q
                .objects()
                .flat_map(|a| q.objects().map(move |b| (a, b)))
                .map(|(a, b)| {
                    format!(
                        "|hom({},{})|={}",
                        q.object_name(a),
                        q.object_name(b),
                        q.hom(a, b).len()
                    )
                })
                .collect();
            out.line(
                || {
                    format!(
                        "objects: {}\n{}",
                        q.object_names().join(" "),
                        sizes.join(" ")
                    )
                },
                || json!({"quantaloid": q.name(), "objects": q.object_names(), "hom_sizes": sizes}),
            );
            let laws = LawReport::from_violations(
                "dq",
                format!("{} laws", q.name()),
                &validate_quantaloid(q),
            );
            out.report(&with_replay(laws, &rp));
            let forms = LawReport::from_violations(
                "dq",
                format!("{} closed-form implications", q.name()),
                &d.check_closed_forms(),
            );
            out.report(&with_replay(forms, &rp));
        }
        Command::Fmt => {
            let (doc, _) = load(cli)?;
            out.text.push_str(&serialize(&doc));
        }
        Command::Validate => {
            let (_, res) = load(cli)?;
            let rp = replay(cli, "validate");
            for r in res.reports {
                out.report(&with_replay(r, &rp));
            }
        }
        Command::Presheaves { category } => {
            let mut env = load(cli)?.1.env;
            let px = env
                .presheaf_cat(category, cli.cap)?
                .ok_or_else(|| unknown("category", category))?;
            let cat = px.base();
            for (i, mu) in px.items().iter().enumerate() {
                let lit = format_presheaf(cat.quantaloid(), Kind::Presheaf, cat.set(), mu);
                out.line(
                    || format!("#{i} {lit}"),
                    || json!({"category": category, "index": i, "presheaf": lit}),
                );
            }
        }
        Command::Closure {
            op: ClosureOp::Apply { space, presheaf },
        } => {
            let env = load(cli)?.1.env;
            let s = env
                .space(space)
                .ok_or_else(|| unknown("closure space", space))?;
            let (lit, n) = parse_presheaf_lit(presheaf.trim()).map_err(|msg| QdfError::Parse {
                line: 1,
                col: 1,
                msg,
            })?;
            if n != presheaf.trim().len() {
                return Err(QdfError::Parse {
                    line: 1,
                    col: n + 1,
                    msg: "unexpected text after the presheaf".into(),
                });
            }
            match env.presheaf(s.px(), &lit) {
                Ok(m) => {
                    let px = s.px();
                    let fmt = |i: usize| {
                        format_presheaf(
                            px.quantaloid(),
                            Kind::Presheaf,
                            px.base().set(),
                            px.item(i),
                        )
                    };
                    let (a, b) = (fmt(m), fmt(s.apply(m)));
                    out.line(
                        || format!("c{a} = {b}"),
                        || json!({"space": space, "presheaf": a, "closure": b, "closed": s.is_closed(m)}),
                    );
                }
                Err(LitError::Resolve(msg)) => return Err(QdfError::Resolve { line: 1, msg }),
                Err(LitError::NotPresheaf(msg)) => {
                    out.report(&with_replay(
                        LawReport::fail("closure", format!("apply {space}"), msg),
                        &replay(cli, &format!("closure apply {space} '{presheaf}'")),
                    ));
                }
            }
        }
        Command::Closure {
            op: ClosureOp::Table { space },
        } => {
            let env = load(cli)?.1.env;
            let s = env
                .space(space)
                .ok_or_else(|| unknown("closure space", space))?;
            for (m, c) in crate::closure::space::display_table(s) {
                out.line(
                    || format!("{m} -> {c}"),
                    || json!({"space": space, "presheaf": m, "closure": c}),
                );
            }
        }
        Command::Specialize { space } => {
            let env = load(cli)?.1.env;
            let s = env
                .space(space)
                .ok_or_else(|| unknown("closure space", space))?;
            let rp = replay(cli, &format!("specialize {space}"));
            let inst = format!("specialization of {space}");
            let sp = match specialization(s, cli.cap) {
                Ok(sp) => sp,
                Err(e) if error_exit_code(&e) == 3 => return Err(e.into()),
                Err(e) => {
                    out.report(&with_replay(
                        LawReport::fail("specialize", inst, e.to_string()),
                        &rp,
                    ));
                    return Ok(out.finish());
                }
            };
            let q = sp.quantaloid();
            let n = sp.len();
            let rows: Vec<Vec<String>> = (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| q.elem_name(sp.ty(a), sp.ty(b), sp.h(a, b)).to_string())
                        .collect()
                })
                .collect();
            for (a, row) in rows.iter().enumerate() {
                let cells: Vec<String> = (0..n)
                    .map(|b| format!("{}={}", sp.name(b), row[b]))
                    .collect();
                out.line(
                    || format!("{}: {}", sp.name(a), cells.join(" ")),
                    || json!({"space": space, "element": sp.name(a), "hom": row}),
                );
            }
            // over the Boolean quantale, compare with x ∈ c{y}
            let mut rep = LawReport::pass("specialize", inst.clone());
            if q.num_objects() == 1
                && q.hom(crate::algebra::Obj(0), crate::algebra::Obj(0)).len() == 2
                && s.has_discrete_base()
            {
                let cl = classical_specialization(s)?;
                let bad = (0..n)
                    .flat_map(|a| (0..n).map(move |b| (a, b)))
                    .find(|&(a, b)| (sp.h(a, b) == 1) != cl[a][b]);
                rep = match bad {
                    None => rep.with_detail("agrees with x in c{y}"),
                    Some((a, b)) => LawReport::fail(
                        "specialize",
                        inst,
                        format!(
                            "differs from x in c{{y}} at ({}, {})",
                            sp.name(a),
                            sp.name(b)
                        ),
                    ),
                };
            }
            out.report(&with_replay(rep, &rp));
        }
        Command::Roundtrip { a, b } => {
            let env = load(cli)?.1.env;
            let s = env.space(a).ok_or_else(|| unknown("closure space", a))?;
            let t = env.space(b).ok_or_else(|| unknown("closure space", b))?;
            let inst = format!("closed continuous {a} -> {b} vs sup-maps C({b}) -> C({a})");
            if **s.base().quantaloid() != **t.base().quantaloid() {
                return Err(QdfError::Usage(format!(
                    "{a} and {b} live over different quantaloids"
                )));
            }
            let r = match check_bijection(s, t, cli.cap) {
                Ok(Ok(bij)) => LawReport::pass("roundtrip", inst).with_detail(format!(
                    "{} closed continuous relations, {} sup-maps",
                    bij.closed_continuous, bij.sup_maps
                )),
                Ok(Err(w)) => LawReport::fail("roundtrip", inst, w),
                Err(e @ Error::CapExceeded { .. }) => return Err(e.into()),
                Err(e) => LawReport::fail("roundtrip", inst, e.to_string()),
            };
            out.report(&with_replay(r, &replay(cli, &format!("roundtrip {a} {b}"))));
        }
    }
    Ok(out.finish())
}

fn run_suites(
    cli: &Cli,
    out: &mut Out,
    names: &[&str],
    opts: &SuiteOptions,
) -> Result<(), QdfError> {
    for name in names {
        let t = Instant::now();
        let reports = run_suite(name, opts).expect("known suite")?;
        let ms = t.elapsed().as_millis();
        let rp = suite_replay(cli, name);
        for mut r in reports {
            if cli.timing {
                r.elapsed_ms = Some(ms);
            }
            out.report(&with_replay(r, &rp));
        }
    }
    Ok(())
}
