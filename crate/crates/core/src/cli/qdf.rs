//! The line-oriented definition format: syntax tree, parser and serializer.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::Error;

/// Characters that may not occur in names.
const RESERVED: &[char] = &['=', '*', '.', ',', '|', '[', ']', ':', '<', '#'];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantaleDef {
    pub name: String,
    pub elements: Vec<String>,
    pub order: Vec<(String, String)>,
    pub mul: Vec<(String, String, String)>,
    pub unit: Option<String>,
}

/// `HOM p q: e…`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomLine {
    pub src: String,
    pub tgt: String,
    pub elements: Vec<String>,
}

/// `ORDER p q: a<=b …`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderLine {
    pub src: String,
    pub tgt: String,
    pub pairs: Vec<(String, String)>,
}

/// `COMP (q r)(p q): v.u=w …` with `u: p → q`, `v: q → r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompLine {
    pub p: String,
    pub q: String,
    pub r: String,
    pub entries: Vec<(String, String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantaloidDef {
    pub name: String,
    pub objects: Vec<String>,
    pub homs: Vec<HomLine>,
    pub orders: Vec<OrderLine>,
    pub comps: Vec<CompLine>,
    pub ids: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedSetDef {
    pub name: String,
    pub over: String,
    pub members: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryDef {
    pub name: String,
    pub on: String,
    pub homs: Vec<(String, String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationDef {
    pub name: String,
    pub from: String,
    pub to: String,
    pub entries: Vec<(String, String, String)>,
}

/// `[q| x=e, …]`; the type may be left out over a one-object quantaloid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresheafLit {
    pub ty: Option<String>,
    pub values: Vec<(String, String)>,
}

impl fmt::Display for PresheafLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self
            .values
            .iter()
            .map(|(x, e)| format!("{x}={e}"))
            .collect();
        match &self.ty {
            Some(t) => write!(f, "[{t}| {}]", vals.join(", ")),
            None => write!(f, "[{}]", vals.join(", ")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeDef {
    Exact,
    Generate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureDef {
    pub name: String,
    pub on: String,
    pub closed: Vec<PresheafLit>,
    pub table: Vec<(PresheafLit, PresheafLit)>,
    pub mode: Option<ModeDef>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    Quantale(QuantaleDef),
    Quantaloid(QuantaloidDef),
    TypedSet(TypedSetDef),
    Category(CategoryDef),
    Relation(RelationDef),
    Closure(ClosureDef),
}

impl Block {
    pub fn keyword(&self) -> &'static str {
        match self {
            Block::Quantale(_) => "QUANTALE",
            Block::Quantaloid(_) => "QUANTALOID",
            Block::TypedSet(_) => "TYPEDSET",
            Block::Category(_) => "CATEGORY",
            Block::Relation(_) => "RELATION",
            Block::Closure(_) => "CLOSURE",
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Block::Quantale(b) => &b.name,
            Block::Quantaloid(b) => &b.name,
            Block::TypedSet(b) => &b.name,
            Block::Category(b) => &b.name,
            Block::Relation(b) => &b.name,
            Block::Closure(b) => &b.name,
        }
    }
}

/// A parsed document. Equality ignores source positions.
#[derive(Debug, Clone, Default)]
pub struct QdfDocument {
    pub blocks: Vec<Block>,
    /// Header line of each block (1-based); zero for synthesized blocks.
    pub lines: Vec<usize>,
}

impl PartialEq for QdfDocument {
    fn eq(&self, other: &Self) -> bool {
        self.blocks == other.blocks
    }
}

impl Eq for QdfDocument {}

impl QdfDocument {
    pub fn line_of(&self, i: usize) -> usize {
        self.lines.get(i).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QdfError {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("resolution error at line {line}: {msg}")]
    Resolve { line: usize, msg: String },

    /// Unknown command-line names and unreadable files.
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Model(Error),
}

impl QdfError {
    /// 1 law violation, 2 parse or resolution error, 3 resource cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            QdfError::Parse { .. } | QdfError::Resolve { .. } | QdfError::Usage(_) => 2,
            QdfError::Model(e) => error_exit_code(e),
        }
    }
}

impl From<Error> for QdfError {
    fn from(e: Error) -> Self {
        QdfError::Model(e)
    }
}

/// Exit code class of a library error.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => 3,
        Error::TypeMismatch(_) | Error::NotAnElement { .. } | Error::Unsupported(_) => 2,
        _ => 1,
    }
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl<'a> Line<'a> {
    /// Whitespace-separated tokens with 1-based columns.
    fn tokens(&self) -> Vec<(usize, &'a str)> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, c) in self.text.char_indices() {
            match (c.is_whitespace(), start) {
                (true, Some(s)) => {
                    out.push((s, &self.text[s..i]));
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((s, &self.text[s..]));
        }
        out.into_iter().map(|(s, t)| (self.col(s), t)).collect()
    }

    fn col(&self, byte: usize) -> usize {
        self.text[..byte].chars().count() + 1
    }

    fn err(&self, col: usize, msg: impl Into<String>) -> QdfError {
        QdfError::Parse {
            line: self.no,
            col,
            msg: msg.into(),
        }
    }
}

fn strip_comment(s: &str) -> &str {
    match s.find('#') {
        Some(i) => &s[..i],
        None => s,
    }
}

fn check_name<'a>(line: &Line, col: usize, s: &'a str, what: &str) -> Result<&'a str, QdfError> {
    if s.is_empty() {
        return Err(line.err(col, format!("empty {what}")));
    }
    // `*` only separates factors in MUL, so object names may use it
    let allowed = |c: &char| what == "object" && *c == '*';
    if let Some(c) = s
        .chars()
        .find(|c| (RESERVED.contains(c) && !allowed(c)) || c.is_whitespace())
    {
        return Err(line.err(
            col,
            format!("{what} `{s}` contains reserved character `{c}`"),
        ));
    }
    Ok(s)
}

/// Splits `a<sep>b` at the first separator, checking both halves as names.
fn split2<'a>(
    line: &Line,
    col: usize,
    tok: &'a str,
    sep: &str,
    what: &str,
) -> Result<(&'a str, &'a str), QdfError> {
    let (a, b) = tok
        .split_once(sep)
        .ok_or_else(|| line.err(col, format!("expected {what}, found `{tok}`")))?;
    Ok((
        check_name(line, col, a, "name")?,
        check_name(line, col, b, "name")?,
    ))
}

fn owned(v: (&str, &str)) -> (String, String) {
    (v.0.to_string(), v.1.to_string())
}

/// Parses a definition document.
pub fn parse_qdf(text: &str) -> Result<QdfDocument, QdfError> {
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .map(|(i, t)| Line {
            no: i + 1,
            text: strip_comment(t),
        })
        .filter(|l| !l.text.trim().is_empty())
        .collect();
    let mut doc = QdfDocument::default();
    let mut i = 0;
    while i < lines.len() {
        let head = &lines[i];
        let toks = head.tokens();
        let (col, kw) = toks[0];
        let end = (i + 1..lines.len())
            .find(|&j| lines[j].tokens()[0].1 == "END")
            .ok_or_else(|| head.err(col, format!("{kw} block without END")))?;
        let body = &lines[i + 1..end];
        if let Some(l) = body.iter().find(|l| is_header(l.tokens()[0].1)) {
            return Err(l.err(
                1,
                format!("{} inside {kw} block (missing END?)", l.tokens()[0].1),
            ));
        }
        let end_toks = lines[end].tokens();
        if end_toks.len() > 1 {
            return Err(lines[end].err(end_toks[1].0, "unexpected text after END"));
        }
        let block = match kw {
            "QUANTALE" => Block::Quantale(parse_quantale(head, &toks, body)?),
            "QUANTALOID" => Block::Quantaloid(parse_quantaloid(head, &toks, body)?),
            "TYPEDSET" => Block::TypedSet(parse_typedset(head, &toks, body)?),
            "CATEGORY" => Block::Category(parse_category(head, &toks, body)?),
            "RELATION" => Block::Relation(parse_relation(head, &toks, body)?),
            "CLOSURE" => Block::Closure(parse_closure(head, &toks, body)?),
            _ => return Err(head.err(col, format!("unknown block keyword `{kw}`"))),
        };
        doc.blocks.push(block);
        doc.lines.push(head.no);
        i = end + 1;
    }
    Ok(doc)
}

fn is_header(t: &str) -> bool {
    matches!(
        t,
        "QUANTALE" | "QUANTALOID" | "TYPEDSET" | "CATEGORY" | "RELATION" | "CLOSURE"
    )
}

/// `KW name` exactly.
fn header_name<'a>(line: &Line, toks: &[(usize, &'a str)]) -> Result<&'a str, QdfError> {
    match toks.get(1) {
        Some(&(c, n)) => {
            if toks.len() > 2 {
                return Err(line.err(toks[2].0, "unexpected text after block name"));
            }
            check_name(line, c, n, "block name")
        }
        None => Err(line.err(toks[0].0 + toks[0].1.len(), "missing block name")),
    }
}

type Tokens<'b, 'a> = &'b [(usize, &'a str)];

/// `KW name WORD target[:] rest…`; returns (name, target, remaining tokens).
fn header_ref<'a, 'b>(
    line: &Line,
    toks: Tokens<'b, 'a>,
    word: &str,
) -> Result<(&'a str, &'a str, Tokens<'b, 'a>), QdfError> {
    let kw = toks[0].1;
    if toks.len() < 4 || toks[2].1 != word {
        let col = toks.get(2).map_or(toks[0].0, |t| t.0);
        return Err(line.err(col, format!("expected `{kw} name {word} target`")));
    }
    let name = check_name(line, toks[1].0, toks[1].1, "block name")?;
    let target = check_name(
        line,
        toks[3].0,
        toks[3].1.strip_suffix(':').unwrap_or(toks[3].1),
        "reference",
    )?;
    Ok((name, target, &toks[4..]))
}

fn parse_quantale(
    head: &Line,
    toks: &[(usize, &str)],
    body: &[Line],
) -> Result<QuantaleDef, QdfError> {
    let mut d = QuantaleDef {
        name: header_name(head, toks)?.to_string(),
        elements: Vec::new(),
        order: Vec::new(),
        mul: Vec::new(),
        unit: None,
    };
    for l in body {
        let t = l.tokens();
        let args = &t[1..];
        match t[0].1 {
            "ELEMENTS" => {
                for &(c, e) in args {
                    d.elements.push(check_name(l, c, e, "element")?.to_string());
                }
            }
            "ORDER" => {
                for &(c, p) in args {
                    d.order.push(owned(split2(l, c, p, "<=", "a<=b")?));
                }
            }
            "MUL" => {
                for &(c, m) in args {
                    let (ab, r) = m
                        .split_once('=')
                        .ok_or_else(|| l.err(c, format!("expected a*b=c, found `{m}`")))?;
                    let (a, b) = split2(l, c, ab, "*", "a*b=c")?;
                    let r = check_name(l, c, r, "element")?;
                    d.mul.push((a.into(), b.into(), r.into()));
                }
            }
            "UNIT" => {
                if args.len() != 1 {
                    return Err(l.err(t[0].0, "UNIT takes exactly one element"));
                }
                if d.unit.is_some() {
                    return Err(l.err(t[0].0, "duplicate UNIT"));
                }
                d.unit = Some(check_name(l, args[0].0, args[0].1, "element")?.to_string());
            }
            other => return Err(l.err(t[0].0, format!("unexpected `{other}` in QUANTALE block"))),
        }
    }
    Ok(d)
}

/// `p q:` at the start of a HOM/ORDER line.
fn pair_prefix(l: &Line, t: &[(usize, &str)]) -> Result<(String, String, usize), QdfError> {
    if t.len() < 3 {
        return Err(l.err(t[0].0, format!("expected `{} p q: …`", t[0].1)));
    }
    let p = check_name(l, t[1].0, t[1].1, "object")?;
    let q = t[2]
        .1
        .strip_suffix(':')
        .ok_or_else(|| l.err(t[2].0, "expected `:` after the object pair"))?;
    let q = check_name(l, t[2].0, q, "object")?;
    Ok((p.into(), q.into(), 3))
}

fn parse_quantaloid(
    head: &Line,
    toks: &[(usize, &str)],
    body: &[Line],
) -> Result<QuantaloidDef, QdfError> {
    let mut d = QuantaloidDef {
        name: header_name(head, toks)?.to_string(),
        objects: Vec::new(),
        homs: Vec::new(),
        orders: Vec::new(),
        comps: Vec::new(),
        ids: Vec::new(),
    };
    for l in body {
        let t = l.tokens();
        match t[0].1 {
            "OBJECTS" => {
                for &(c, o) in &t[1..] {
                    d.objects.push(check_name(l, c, o, "object")?.to_string());
                }
            }
            "HOM" => {
                let (src, tgt, k) = pair_prefix(l, &t)?;
                let elements = t[k..]
                    .iter()
                    .map(|&(c, e)| check_name(l, c, e, "element").map(str::to_string))
                    .collect::<Result<_, _>>()?;
                d.homs.push(HomLine { src, tgt, elements });
            }
            "ORDER" => {
                let (src, tgt, k) = pair_prefix(l, &t)?;
                let pairs = t[k..]
                    .iter()
                    .map(|&(c, p)| split2(l, c, p, "<=", "a<=b").map(owned))
                    .collect::<Result<_, _>>()?;
                d.orders.push(OrderLine { src, tgt, pairs });
            }
            "COMP" => d.comps.push(parse_comp(l)?),
            "ID" => {
                for &(c, e) in &t[1..] {
                    let (q, x) = e
                        .split_once('=')
                        .ok_or_else(|| l.err(c, format!("expected q=e, found `{e}`")))?;
                    d.ids.push((
                        check_name(l, c, q, "object")?.into(),
                        check_name(l, c, x, "element")?.into(),
                    ));
                }
            }
            other => return Err(l.err(t[0].0, format!("unexpected `{other}` in QUANTALOID block"))),
        }
    }
    Ok(d)
}

fn parse_comp(l: &Line) -> Result<CompLine, QdfError> {
    let rest = l.text.trim_start()["COMP".len()..].trim_start();
    // column of a suffix of the line
    let at = |s: &str| l.col(l.text.len() - s.len());
    let bad = |s: &str| l.err(at(s), "expected `COMP (q r)(p q): v.u=w …`");
    let paren = |s: &'_ str| -> Result<(String, String, usize), QdfError> {
        let s2 = s.strip_prefix('(').ok_or_else(|| bad(s))?;
        let close = s2.find(')').ok_or_else(|| bad(s))?;
        let inner: Vec<&str> = s2[..close].split_whitespace().collect();
        if inner.len() != 2 {
            return Err(bad(s));
        }
        let a = check_name(l, at(s), inner[0], "object")?;
        let b = check_name(l, at(s), inner[1], "object")?;
        Ok((a.into(), b.into(), close + 2))
    };
    let (q1, r, n1) = paren(rest)?;
    let rest = rest[n1..].trim_start();
    let (p, q2, n2) = paren(rest)?;
    let rest = &rest[n2..];
    let rest = rest.strip_prefix(':').ok_or_else(|| bad(rest))?;
    if q1 != q2 {
        return Err(l.err(
            at(rest),
            format!("middle objects differ: ({q1} {r})({p} {q2})"),
        ));
    }
    let mut entries = Vec::new();
    let mut tail = rest;
    loop {
        tail = tail.trim_start();
        if tail.is_empty() {
            break;
        }
        let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
        let (tok, c) = (&tail[..len], at(tail));
        tail = &tail[len..];
        let (vu, w) = tok
            .split_once('=')
            .ok_or_else(|| l.err(c, format!("expected v.u=w, found `{tok}`")))?;
        let (v, u) = split2(l, c, vu, ".", "v.u=w")?;
        let w = check_name(l, c, w, "element")?;
        entries.push((v.into(), u.into(), w.into()));
    }
    Ok(CompLine {
        p,
        q: q1,
        r,
        entries,
    })
}

fn parse_typedset(
    head: &Line,
    toks: &[(usize, &str)],
    body: &[Line],
) -> Result<TypedSetDef, QdfError> {
    let (name, over, rest) = header_ref(head, toks, "OVER")?;
    let mut d = TypedSetDef {
        name: name.into(),
        over: over.into(),
        members: Vec::new(),
    };
    let member = |l: &Line, c: usize, m: &str| -> Result<(String, String), QdfError> {
        let (x, t) = m
            .split_once(':')
            .ok_or_else(|| l.err(c, format!("expected x:type, found `{m}`")))?;
        Ok((
            check_name(l, c, x, "element")?.into(),
            check_name(l, c, t, "object")?.into(),
        ))
    };
    for &(c, m) in rest {
        d.members.push(member(head, c, m)?);
    }
    for l in body {
        for (c, m) in l.tokens() {
            d.members.push(member(l, c, m)?);
        }
    }
    Ok(d)
}

fn parse_category(
    head: &Line,
    toks: &[(usize, &str)],
    body: &[Line],
) -> Result<CategoryDef, QdfError> {
    let (name, on, rest) = header_ref(head, toks, "ON")?;
    if let Some(&(c, _)) = rest.first() {
        return Err(head.err(c, "unexpected text after CATEGORY header"));
    }
    let mut d = CategoryDef {
        name: name.into(),
        on: on.into(),
        homs: Vec::new(),
    };
    for l in body {
        let t = l.tokens();
        if t[0].1 != "HOM" {
            return Err(l.err(t[0].0, format!("unexpected `{}` in CATEGORY block", t[0].1)));
        }
        d.homs.extend(triples(l, &t[1..])?);
    }
    Ok(d)
}

/// `x y=e` pairs of tokens.
fn triples(l: &Line, t: &[(usize, &str)]) -> Result<Vec<(String, String, String)>, QdfError> {
    if !t.len().is_multiple_of(2) {
        let c = t.last().map_or(1, |x| x.0);
        return Err(l.err(c, "entries come as `x y=e`"));
    }
    t.chunks(2)
        .map(|ch| {
            let x = check_name(l, ch[0].0, ch[0].1, "element")?;
            let (y, e) = split2(l, ch[1].0, ch[1].1, "=", "y=e")?;
            Ok((x.into(), y.into(), e.into()))
        })
        .collect()
}

fn parse_relation(
    head: &Line,
    toks: &[(usize, &str)],
    body: &[Line],
) -> Result<RelationDef, QdfError> {
    let (name, from, rest) = header_ref(head, toks, "FROM")?;
    if rest.len() < 2 || rest[0].1 != "TO" {
        let c = rest.first().map_or(head.text.chars().count(), |t| t.0);
        return Err(head.err(c, "expected `RELATION name FROM a TO b`"));
    }
    let to = check_name(
        head,
        rest[1].0,
        rest[1].1.strip_suffix(':').unwrap_or(rest[1].1),
        "reference",
    )?;
    let mut d = RelationDef {
        name: name.into(),
        from: from.into(),
        to: to.into(),
        entries: triples(head, &rest[2..])?,
    };
    for l in body {
        d.entries.extend(triples(l, &l.tokens())?);
    }
    Ok(d)
}

/// Parses a presheaf literal at the start of `s`; returns it and the number
/// of bytes consumed.
pub fn parse_presheaf_lit(s: &str) -> Result<(PresheafLit, usize), String> {
    let inner_start = s
        .strip_prefix('[')
        .ok_or("presheaf literal must start with `[`")?;
    let close = inner_start
        .find(']')
        .ok_or("unterminated presheaf literal")?;
    let inner = &inner_start[..close];
    let (ty, vals) = match inner.split_once('|') {
        Some((t, v)) => (Some(t.trim()), v),
        None => (None, inner),
    };
    let name_ok = |n: &str| {
        !n.is_empty()
            && !n
                .chars()
                .any(|c| RESERVED.contains(&c) || c.is_whitespace())
    };
    if let Some(t) = ty {
        if !(name_ok(t) || t == "*") {
            return Err(format!("bad presheaf type `{t}`"));
        }
    }
    let mut values = Vec::new();
    for part in vals.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (x, e) = part
            .split_once('=')
            .ok_or(format!("expected x=e, found `{part}`"))?;
        let (x, e) = (x.trim(), e.trim());
        if !name_ok(x) || !name_ok(e) {
            return Err(format!("bad presheaf entry `{part}`"));
        }
        values.push((x.to_string(), e.to_string()));
    }
    Ok((
        PresheafLit {
            ty: ty.map(str::to_string),
            values,
        },
        close + 2,
    ))
}

fn parse_closure(
    head: &Line,
    toks: &[(usize, &str)],
    body: &[Line],
) -> Result<ClosureDef, QdfError> {
    let (name, on, rest) = header_ref(head, toks, "ON")?;
    if let Some(&(c, _)) = rest.first() {
        return Err(head.err(c, "unexpected text after CLOSURE header"));
    }
    let mut d = ClosureDef {
        name: name.into(),
        on: on.into(),
        closed: Vec::new(),
        table: Vec::new(),
        mode: None,
    };
    for l in body {
        let t = l.tokens();
        let kw = t[0].1;
        let after = l.text.trim_start()[kw.len()..].to_string();
        let start = l.text.len() - after.len();
        let mut lits = LitScanner {
            line: l,
            s: &after,
            pos: 0,
            base: start,
        };
        match kw {
            "CLOSED" => {
                while let Some(lit) = lits.next()? {
                    d.closed.push(lit);
                }
            }
            "TABLE" => {
                while let Some(a) = lits.next()? {
                    lits.arrow()?;
                    let b = lits
                        .next()?
                        .ok_or_else(|| l.err(lits.col(), "expected a presheaf after `->`"))?;
                    d.table.push((a, b));
                }
            }
            "MODE" => {
                if t.len() != 2 {
                    return Err(l.err(t[0].0, "MODE takes one of exact|generate"));
                }
                if d.mode.is_some() {
                    return Err(l.err(t[0].0, "duplicate MODE"));
                }
                d.mode = Some(match t[1].1 {
                    "exact" => ModeDef::Exact,
                    "generate" => ModeDef::Generate,
                    m => return Err(l.err(t[1].0, format!("unknown mode `{m}`"))),
                });
            }
            other => return Err(l.err(t[0].0, format!("unexpected `{other}` in CLOSURE block"))),
        }
    }
    Ok(d)
}

struct LitScanner<'a> {
    line: &'a Line<'a>,
    s: &'a str,
    pos: usize,
    base: usize,
}

impl LitScanner<'_> {
    fn skip_ws(&mut self) {
        let rest = &self.s[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn col(&self) -> usize {
        self.line.col(self.base + self.pos)
    }

    fn next(&mut self) -> Result<Option<PresheafLit>, QdfError> {
        self.skip_ws();
        if self.pos == self.s.len() {
            return Ok(None);
        }
        let (lit, n) =
            parse_presheaf_lit(&self.s[self.pos..]).map_err(|m| self.line.err(self.col(), m))?;
        self.pos += n;
        Ok(Some(lit))
    }

    fn arrow(&mut self) -> Result<(), QdfError> {
        self.skip_ws();
        if self.s[self.pos..].starts_with("->") {
            self.pos += 2;
            Ok(())
        } else {
            Err(self.line.err(self.col(), "expected `->`"))
        }
    }
}

const PER_LINE: usize = 8;

fn chunked(out: &mut String, kw: &str, items: &[String]) {
    for ch in items.chunks(PER_LINE) {
        let _ = writeln!(out, "{kw} {}", ch.join(" "));
    }
}

/// Canonical text of a document; `parse_qdf(serialize(d)) == d`.
pub fn serialize(doc: &QdfDocument) -> String {
    let mut out = String::new();
    for (i, b) in doc.blocks.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        write_block(&mut out, b);
    }
    out
}

fn write_block(out: &mut String, b: &Block) {
    match b {
        Block::Quantale(d) => {
            let _ = writeln!(out, "QUANTALE {}", d.name);
            if !d.elements.is_empty() {
                let _ = writeln!(out, "ELEMENTS {}", d.elements.join(" "));
            }
            let order: Vec<String> = d.order.iter().map(|(a, b)| format!("{a}<={b}")).collect();
            chunked(out, "ORDER", &order);
            let mul: Vec<String> = d
                .mul
                .iter()
                .map(|(a, b, c)| format!("{a}*{b}={c}"))
                .collect();
            chunked(out, "MUL", &mul);
            if let Some(u) = &d.unit {
                let _ = writeln!(out, "UNIT {u}");
            }
        }
        Block::Quantaloid(d) => {
            let _ = writeln!(out, "QUANTALOID {}", d.name);
            if !d.objects.is_empty() {
                let _ = writeln!(out, "OBJECTS {}", d.objects.join(" "));
            }
            for h in &d.homs {
                let _ = writeln!(out, "HOM {} {}: {}", h.src, h.tgt, h.elements.join(" "));
            }
            for o in &d.orders {
                let pairs: Vec<String> = o.pairs.iter().map(|(a, b)| format!("{a}<={b}")).collect();
                let _ = writeln!(out, "ORDER {} {}: {}", o.src, o.tgt, pairs.join(" "));
            }
            for c in &d.comps {
                let es: Vec<String> = c
                    .entries
                    .iter()
                    .map(|(v, u, w)| format!("{v}.{u}={w}"))
                    .collect();
                let _ = writeln!(
                    out,
                    "COMP ({} {})({} {}): {}",
                    c.q,
                    c.r,
                    c.p,
                    c.q,
                    es.join(" ")
                );
            }
            let ids: Vec<String> = d.ids.iter().map(|(q, e)| format!("{q}={e}")).collect();
            chunked(out, "ID", &ids);
        }
        Block::TypedSet(d) => {
            let _ = writeln!(out, "TYPEDSET {} OVER {}", d.name, d.over);
            let ms: Vec<String> = d.members.iter().map(|(x, t)| format!("{x}:{t}")).collect();
            for ch in ms.chunks(PER_LINE) {
                let _ = writeln!(out, "{}", ch.join(" "));
            }
        }
        Block::Category(d) => {
            let _ = writeln!(out, "CATEGORY {} ON {}", d.name, d.on);
            let hs: Vec<String> = d
                .homs
                .iter()
                .map(|(x, y, e)| format!("{x} {y}={e}"))
                .collect();
            chunked(out, "HOM", &hs);
        }
        Block::Relation(d) => {
            let _ = writeln!(out, "RELATION {} FROM {} TO {}", d.name, d.from, d.to);
            let es: Vec<String> = d
                .entries
                .iter()
                .map(|(x, y, e)| format!("{x} {y}={e}"))
                .collect();
            for ch in es.chunks(PER_LINE) {
                let _ = writeln!(out, "{}", ch.join(" "));
            }
        }
        Block::Closure(d) => {
            let _ = writeln!(out, "CLOSURE {} ON {}", d.name, d.on);
            for m in &d.closed {
                let _ = writeln!(out, "CLOSED {m}");
            }
            for (a, b) in &d.table {
                let _ = writeln!(out, "TABLE {a} -> {b}");
            }
            match d.mode {
                Some(ModeDef::Exact) => out.push_str("MODE exact\n"),
                Some(ModeDef::Generate) => out.push_str("MODE generate\n"),
                None => {}
            }
        }
    }
    out.push_str("END\n");
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# three-element chain with Lukasiewicz product
QUANTALE L3
ELEMENTS 0 h 1
ORDER 0<=h h<=1
MUL 0*0=0 0*h=0 0*1=0 h*0=0 h*h=0 h*1=h 1*0=0 1*h=h 1*1=1
UNIT 1
END

QUANTALOID two
OBJECTS a
HOM a a: 0 1
ORDER a a: 0<=1
COMP (a a)(a a): 0.0=0 0.1=0 1.0=0 1.1=1
ID a=1
END

TYPEDSET X OVER 2: x:* y:*
END

CATEGORY C ON X
HOM x y=1
END

RELATION R FROM C TO C
x x=1 y y=1
END

CLOSURE S ON C
CLOSED [*| x=1, y=1] [*| ]
TABLE [*| x=1] -> [*| x=1, y=1]
MODE generate
END
";

    #[test]
    fn parse_and_roundtrip() {
        let d = parse_qdf(SAMPLE).unwrap();
        assert_eq!(d.blocks.len(), 6);
        assert_eq!(d.lines, vec![2, 9, 17, 20, 24, 28]);
        let Block::Quantaloid(q) = &d.blocks[1] else {
            panic!()
        };
        assert_eq!(q.comps[0].entries.len(), 4);
        let Block::Closure(c) = &d.blocks[5] else {
            panic!()
        };
        assert_eq!(c.closed[1].values.len(), 0);
        assert_eq!(c.table.len(), 1);
        let s = serialize(&d);
        let d2 = parse_qdf(&s).unwrap();
        assert_eq!(d, d2);
        assert_eq!(serialize(&d2), s);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = parse_qdf("QUANTALE k\nELEMENTS a b\n").unwrap_err();
        assert!(matches!(e, QdfError::Parse { line: 1, .. }), "{e}");
        let e = parse_qdf("QUANTALE k\nMUL a*b\nEND\n").unwrap_err();
        assert!(
            matches!(
                e,
                QdfError::Parse {
                    line: 2,
                    col: 5,
                    ..
                }
            ),
            "{e}"
        );
        let e = parse_qdf("FOO x\nEND\n").unwrap_err();
        assert!(matches!(
            e,
            QdfError::Parse {
                line: 1,
                col: 1,
                ..
            }
        ));
        let e = parse_qdf("CLOSURE s ON c\nCLOSED [*| x=1\nEND\n").unwrap_err();
        assert!(e.to_string().contains("unterminated"), "{e}");
        let e = parse_qdf("QUANTALOID q\nCOMP (a b)(c d): x.y=z\nEND\n").unwrap_err();
        assert!(e.to_string().contains("middle objects"), "{e}");
    }

    #[test]
    fn presheaf_literals() {
        let (l, n) = parse_presheaf_lit("[1/2| x=0, y=1/2] rest").unwrap();
        assert_eq!(n, 17);
        assert_eq!(l.ty.as_deref(), Some("1/2"));
        assert_eq!(l.to_string(), "[1/2| x=0, y=1/2]");
        let (l, _) = parse_presheaf_lit("[x=1]").unwrap();
        assert_eq!(l.ty, None);
        assert!(parse_presheaf_lit("[x=]").is_err());
    }
}
