//! Name resolution: from a parsed document to validated structures.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::qdf::*;
use crate::algebra::{
    boolean, build_dq, drastic, godel, lukasiewicz, validate_quantaloid, Dq, Elem, FiniteLattice,
    Obj, Quantale, Quantaloid,
};
use crate::closure::space::{from_closed_system, Mode};
use crate::closure::ClosureSpace;
use crate::contdist::{check_continuous_dist, is_closed_dist};
use crate::qcat::category::validate_named;
use crate::qcat::presheaf::{entry_lattice, Kind, Presheaf, PresheafCat};
use crate::qcat::{QCategory, QRelation, TypedSet};
use crate::report::LawReport;
use crate::{Error, Result};

/// A relation together with the names of its ends.
#[derive(Debug, Clone)]
pub struct NamedRelation {
    pub rel: QRelation,
    pub from: String,
    pub to: String,
}

/// Everything a document (plus built-ins) defines.
#[derive(Debug, Clone, Default)]
pub struct Env {
    quantales: BTreeMap<String, Quantale>,
    quantaloids: BTreeMap<String, Arc<Quantaloid>>,
    dqs: BTreeMap<String, Dq>,
    sets: BTreeMap<String, (Arc<Quantaloid>, TypedSet)>,
    cats: BTreeMap<String, QCategory>,
    pxs: BTreeMap<String, Arc<PresheafCat>>,
    relations: BTreeMap<String, NamedRelation>,
    spaces: BTreeMap<String, ClosureSpace>,
    /// `KIND name` of blocks that failed validation.
    failed: BTreeSet<String>,
}

/// `godel(3)` style names.
fn builtin_arg(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?
        .strip_prefix('(')?
        .strip_suffix(')')?
        .parse()
        .ok()
}

fn builtin_quantale(name: &str) -> Option<Result<Quantale>> {
    if name == "2" {
        return Some(Ok(boolean()));
    }
    if let Some(n) = builtin_arg(name, "godel") {
        return Some(godel(n));
    }
    if let Some(n) = builtin_arg(name, "luk").or_else(|| builtin_arg(name, "lukasiewicz")) {
        return Some(lukasiewicz(n));
    }
    builtin_arg(name, "drastic").map(drastic)
}

impl Env {
    pub fn new() -> Self {
        Self::default()
    }

    /// Drops cached state for a name about to be redefined.
    fn forget(&mut self, keyword: &str, name: &str) {
        if matches!(keyword, "TYPEDSET" | "CATEGORY") {
            self.pxs.remove(name);
        }
        self.failed.remove(&format!("{keyword} {name}"));
    }

    /// A declared or built-in quantale (`2`, `godel(n)`, `luk(n)`,
    /// `drastic(n)`).
    pub fn quantale(&mut self, name: &str) -> Result<Quantale, String> {
        if let Some(k) = self.quantales.get(name) {
            return Ok(k.clone());
        }
        if self.failed.contains(&format!("QUANTALE {name}")) {
            return Err(format!("quantale {name} failed validation"));
        }
        match builtin_quantale(name) {
            Some(Ok(k)) => {
                self.quantales.insert(name.to_string(), k.clone());
                Ok(k)
            }
            Some(Err(e)) => Err(e.to_string()),
            None => Err(format!("unknown quantale `{name}`")),
        }
    }

    /// `D(k)` for a quantale name `k`.
    pub fn dq(&mut self, name: &str) -> Result<Dq, String> {
        if let Some(d) = self.dqs.get(name) {
            return Ok(d.clone());
        }
        let k = self.quantale(name)?;
        let d = build_dq(&k).map_err(|e| e.to_string())?;
        self.dqs.insert(name.to_string(), d.clone());
        Ok(d)
    }

    /// A declared quantaloid or quantale, a built-in quantale, or `D(k)`.
    pub fn quantaloid(&mut self, name: &str) -> Result<Arc<Quantaloid>, String> {
        if let Some(q) = self.quantaloids.get(name) {
            return Ok(q.clone());
        }
        if self.failed.contains(&format!("QUANTALOID {name}")) {
            return Err(format!("quantaloid {name} failed validation"));
        }
        let q = if let Some(inner) = name.strip_prefix("D(").and_then(|s| s.strip_suffix(')')) {
            self.dq(inner)?.quantaloid().clone()
        } else {
            Arc::new(self.quantale(name)?.into_quantaloid())
        };
        self.quantaloids.insert(name.to_string(), q.clone());
        Ok(q)
    }

    pub fn typed_set(&self, name: &str) -> Option<&(Arc<Quantaloid>, TypedSet)> {
        self.sets.get(name)
    }

    /// A declared category, else the discrete category on a typed set.
    pub fn category(&self, name: &str) -> Option<QCategory> {
        if let Some(c) = self.cats.get(name) {
            return Some(c.clone());
        }
        self.sets
            .get(name)
            .map(|(q, s)| QCategory::discrete(q.clone(), s.clone()))
    }

    pub fn space(&self, name: &str) -> Option<&ClosureSpace> {
        self.spaces.get(name)
    }

    pub fn relation(&self, name: &str) -> Option<&NamedRelation> {
        self.relations.get(name)
    }

    pub fn space_names(&self) -> impl Iterator<Item = &str> {
        self.spaces.keys().map(String::as_str)
    }

    /// The shared presheaf category of a category or typed set name.
    pub fn presheaf_cat(&mut self, name: &str, cap: usize) -> Result<Option<Arc<PresheafCat>>> {
        if let Some(p) = self.pxs.get(name) {
            return Ok(Some(p.clone()));
        }
        let Some(cat) = self.category(name) else {
            return Ok(None);
        };
        let px = Arc::new(PresheafCat::presheaves(&cat, cap)?);
        self.pxs.insert(name.to_string(), px.clone());
        Ok(Some(px))
    }

    fn is_failed(&self, kind: &str, name: &str) -> bool {
        self.failed.contains(&format!("{kind} {name}"))
    }

    /// Resolves a presheaf literal against the base of `px`.
    pub fn presheaf(&self, px: &PresheafCat, lit: &PresheafLit) -> Result<usize, LitError> {
        let cat = px.base();
        let q = cat.quantaloid();
        let ty = match &lit.ty {
            Some(t) => q
                .object_index(t)
                .ok_or_else(|| LitError::Resolve(format!("unknown object `{t}` in {lit}")))?,
            None if q.num_objects() == 1 => Obj(0),
            None => return Err(LitError::Resolve(format!("{lit} needs an explicit type"))),
        };
        let mut vals: Vec<Option<Elem>> = vec![None; cat.len()];
        for (x, e) in &lit.values {
            let i = cat
                .set()
                .index_of(x)
                .ok_or_else(|| LitError::Resolve(format!("unknown element `{x}` in {lit}")))?;
            let l = entry_lattice(q, Kind::Presheaf, cat.ty(i), ty);
            let v = l.index_of(e).ok_or_else(|| {
                LitError::Resolve(format!(
                    "`{e}` is not in hom({},{}) in {lit}",
                    q.object_name(cat.ty(i)),
                    q.object_name(ty)
                ))
            })?;
            if vals[i].is_some_and(|old| old != v) {
                return Err(LitError::Resolve(format!(
                    "conflicting values for `{x}` in {lit}"
                )));
            }
            vals[i] = Some(v);
        }
        let vals = vals
            .iter()
            .enumerate()
            .map(|(i, v)| v.unwrap_or_else(|| q.bottom(cat.ty(i), ty)))
            .collect();
        px.index_of(&Presheaf::new(ty, vals)).ok_or_else(|| {
            LitError::NotPresheaf(format!("{lit} is not a presheaf on {}", cat_label(cat)))
        })
    }
}

fn cat_label(c: &QCategory) -> String {
    format!("{{{}}}", c.set().names().join(", "))
}

/// Failure to turn a literal into an enumerated presheaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LitError {
    /// Unknown names or values outside their hom-set.
    Resolve(String),
    /// Well-formed, but the absorption law fails.
    NotPresheaf(String),
}

/// A resolved document: the environment plus one report per block.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub env: Env,
    pub reports: Vec<LawReport>,
}

const SUITE: &str = "validate";

/// Resolves `doc` on top of `env`. Unknown names, incomplete tables and
/// malformed entries abort with a resolution error; law failures become
/// failing reports and the block is left undefined; a presheaf enumeration
/// over `cap` aborts with the cap error.
pub fn resolve(doc: &QdfDocument, mut env: Env, cap: usize) -> Result<Resolved, QdfError> {
    let mut reports = Vec::new();
    let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
    for (i, b) in doc.blocks.iter().enumerate() {
        let line = doc.line_of(i);
        let rerr = |msg: String| QdfError::Resolve { line, msg };
        let kind = match b {
            Block::Quantale(_) | Block::Quantaloid(_) => "QUANTALOID",
            other => other.keyword(),
        };
        if !seen.insert((kind.to_string(), b.name().to_string())) {
            return Err(rerr(format!(
                "duplicate {} name `{}`",
                b.keyword(),
                b.name()
            )));
        }
        env.forget(b.keyword(), b.name());
        let inst = format!("{} {}", b.keyword(), b.name());
        let outcome = match b {
            Block::Quantale(d) => resolve_quantale(&mut env, d).map_err(rerr)?,
            Block::Quantaloid(d) => resolve_quantaloid(&mut env, d).map_err(rerr)?,
            Block::TypedSet(d) => resolve_typedset(&mut env, d).map_err(rerr)?,
            Block::Category(d) => resolve_category(&mut env, d).map_err(rerr)?,
            Block::Relation(d) => resolve_relation(&mut env, d, cap).map_err(|e| e.at(line))?,
            Block::Closure(d) => resolve_closure(&mut env, d, cap).map_err(|e| e.at(line))?,
        };
        let report = match outcome {
            Outcome::Ok(detail) => LawReport::pass(SUITE, inst).with_detail(detail),
            Outcome::Failed(w) => {
                env.failed.insert(format!("{} {}", b.keyword(), b.name()));
                LawReport::fail(SUITE, inst, w)
            }
        };
        reports.push(report);
    }
    Ok(Resolved { env, reports })
}

enum Outcome {
    Ok(String),
    Failed(String),
}

/// Errors from blocks that may also hit the cap.
enum BlockError {
    Resolve(String),
    Cap(Error),
}

impl BlockError {
    fn at(self, line: usize) -> QdfError {
        match self {
            BlockError::Resolve(msg) => QdfError::Resolve { line, msg },
            BlockError::Cap(e) => QdfError::Model(e),
        }
    }
}

impl From<String> for BlockError {
    fn from(s: String) -> Self {
        BlockError::Resolve(s)
    }
}

fn index_map(names: &[String], what: &str) -> Result<BTreeMap<String, usize>, String> {
    let mut m = BTreeMap::new();
    for (i, n) in names.iter().enumerate() {
        if m.insert(n.clone(), i).is_some() {
            return Err(format!("duplicate {what} `{n}`"));
        }
    }
    Ok(m)
}

fn lookup(m: &BTreeMap<String, usize>, name: &str, ctx: &str) -> Result<usize, String> {
    m.get(name)
        .copied()
        .ok_or_else(|| format!("unknown {ctx} `{name}`"))
}

fn lattice(
    names: &[String],
    pairs: &[(String, String)],
    ctx: &str,
) -> Result<Result<FiniteLattice, Error>, String> {
    let idx = index_map(names, &format!("element in {ctx}"))?;
    let ps = pairs
        .iter()
        .map(|(a, b)| {
            Ok((
                lookup(&idx, a, &format!("element in {ctx} ORDER"))?,
                lookup(&idx, b, &format!("element in {ctx} ORDER"))?,
            ))
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(FiniteLattice::from_pairs(names.to_vec(), &ps))
}

fn law_outcome(what: &str, v: &[crate::report::Violation]) -> Option<Outcome> {
    if v.is_empty() {
        None
    } else {
        let w: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        Some(Outcome::Failed(format!("{what}: {}", w.join("; "))))
    }
}

fn resolve_quantale(env: &mut Env, d: &QuantaleDef) -> Result<Outcome, String> {
    let lat = match lattice(&d.elements, &d.order, "QUANTALE")? {
        Ok(l) => l,
        Err(e) => return Ok(Outcome::Failed(e.to_string())),
    };
    let n = lat.len();
    let idx = index_map(&d.elements, "element")?;
    let mut mul: Vec<Option<Elem>> = vec![None; n * n];
    for (a, b, c) in &d.mul {
        let (ia, ib) = (
            lookup(&idx, a, "element in MUL")?,
            lookup(&idx, b, "element in MUL")?,
        );
        let ic = lookup(&idx, c, "element in MUL")? as Elem;
        let slot = &mut mul[ia * n + ib];
        if slot.is_some_and(|old| old != ic) {
            return Err(format!("conflicting MUL entries for {a}*{b}"));
        }
        *slot = Some(ic);
    }
    if let Some(k) = mul.iter().position(Option::is_none) {
        return Err(format!(
            "MUL table is not total: no entry for {}*{}",
            d.elements[k / n],
            d.elements[k % n]
        ));
    }
    let unit = d.unit.as_ref().ok_or("missing UNIT")?;
    let unit = lookup(&idx, unit, "UNIT element")? as Elem;
    let k = Quantale::from_table(
        d.name.clone(),
        lat,
        mul.into_iter().flatten().collect(),
        unit,
    )
    .map_err(|e| e.to_string())?;
    if let Some(o) = law_outcome("quantale laws", &validate_quantaloid(k.as_quantaloid())) {
        return Ok(o);
    }
    env.quantaloids
        .insert(d.name.clone(), Arc::new(k.as_quantaloid().clone()));
    env.quantales.insert(d.name.clone(), k);
    Ok(Outcome::Ok(format!(
        "{n} element{}",
        if n == 1 { "" } else { "s" }
    )))
}

fn resolve_quantaloid(env: &mut Env, d: &QuantaloidDef) -> Result<Outcome, String> {
    let m = d.objects.len();
    if m == 0 {
        return Err("QUANTALOID without OBJECTS".into());
    }
    let oidx = index_map(&d.objects, "object")?;
    let mut hom_names: Vec<Option<Vec<String>>> = vec![None; m * m];
    for h in &d.homs {
        let k =
            lookup(&oidx, &h.src, "object in HOM")? * m + lookup(&oidx, &h.tgt, "object in HOM")?;
        if hom_names[k].is_some() {
            return Err(format!("duplicate HOM {} {}", h.src, h.tgt));
        }
        hom_names[k] = Some(h.elements.clone());
    }
    let mut hom_orders: Vec<Vec<(String, String)>> = vec![Vec::new(); m * m];
    for o in &d.orders {
        let k = lookup(&oidx, &o.src, "object in ORDER")? * m
            + lookup(&oidx, &o.tgt, "object in ORDER")?;
        hom_orders[k].extend(o.pairs.iter().cloned());
    }
    let mut homs = Vec::with_capacity(m * m);
    for k in 0..m * m {
        let names = hom_names[k]
            .as_ref()
            .ok_or_else(|| format!("no HOM line for {} {}", d.objects[k / m], d.objects[k % m]))?;
        let ctx = format!("hom({},{})", d.objects[k / m], d.objects[k % m]);
        match lattice(names, &hom_orders[k], &ctx)? {
            Ok(l) => homs.push(l),
            Err(e) => return Ok(Outcome::Failed(format!("{ctx}: {e}"))),
        }
    }
    let mut ids: Vec<Option<Elem>> = vec![None; m];
    for (q, e) in &d.ids {
        let qi = lookup(&oidx, q, "object in ID")?;
        let ei = homs[qi * m + qi]
            .index_of(e)
            .ok_or_else(|| format!("`{e}` is not in hom({q},{q})"))?;
        if ids[qi].is_some_and(|old| old != ei) {
            return Err(format!("conflicting ID for {q}"));
        }
        ids[qi] = Some(ei);
    }
    if let Some(q) = ids.iter().position(Option::is_none) {
        return Err(format!("no ID for object {}", d.objects[q]));
    }
    // tables[(p*m+q)*m+r][v * |hom(p,q)| + u]
    let mut tables: Vec<Vec<Option<Elem>>> = Vec::with_capacity(m * m * m);
    for p in 0..m {
        for q in 0..m {
            for r in 0..m {
                tables.push(vec![None; homs[q * m + r].len() * homs[p * m + q].len()]);
            }
        }
    }
    for c in &d.comps {
        let (p, q, r) = (
            lookup(&oidx, &c.p, "object in COMP")?,
            lookup(&oidx, &c.q, "object in COMP")?,
            lookup(&oidx, &c.r, "object in COMP")?,
        );
        let (hpq, hqr, hpr) = (&homs[p * m + q], &homs[q * m + r], &homs[p * m + r]);
        for (v, u, w) in &c.entries {
            let vi = hqr
                .index_of(v)
                .ok_or_else(|| format!("`{v}` is not in hom({},{})", c.q, c.r))?;
            let ui = hpq
                .index_of(u)
                .ok_or_else(|| format!("`{u}` is not in hom({},{})", c.p, c.q))?;
            let wi = hpr
                .index_of(w)
                .ok_or_else(|| format!("`{w}` is not in hom({},{})", c.p, c.r))?;
            let slot = &mut tables[(p * m + q) * m + r][vi as usize * hpq.len() + ui as usize];
            if slot.is_some_and(|old| old != wi) {
                return Err(format!(
                    "conflicting COMP entries for {v}.{u} in ({} {})({} {})",
                    c.q, c.r, c.p, c.q
                ));
            }
            *slot = Some(wi);
        }
    }
    for p in 0..m {
        for q in 0..m {
            for r in 0..m {
                let t = &tables[(p * m + q) * m + r];
                if let Some(k) = t.iter().position(Option::is_none) {
                    let hpq = &homs[p * m + q];
                    let (v, u) = (k / hpq.len(), k % hpq.len());
                    return Err(format!(
                        "COMP ({1} {2})({0} {1}) is not total: no entry for {3}.{4}",
                        d.objects[p],
                        d.objects[q],
                        d.objects[r],
                        homs[q * m + r].name(v as Elem),
                        hpq.name(u as Elem)
                    ));
                }
            }
        }
    }
    let ids: Vec<Elem> = ids.into_iter().flatten().collect();
    let lens: Vec<usize> = homs.iter().map(FiniteLattice::len).collect();
    let q = Quantaloid::from_fn(
        d.name.clone(),
        d.objects.clone(),
        homs,
        ids,
        |p, q, r, v, u| {
            let t = &tables[(p.idx() * m + q.idx()) * m + r.idx()];
            Ok(t[v as usize * lens[p.idx() * m + q.idx()] + u as usize].expect("checked total"))
        },
    )
    .map_err(|e| e.to_string())?;
    if let Some(o) = law_outcome("quantaloid laws", &validate_quantaloid(&q)) {
        return Ok(o);
    }
    env.quantaloids.insert(d.name.clone(), Arc::new(q));
    Ok(Outcome::Ok(format!("{m} objects")))
}

fn resolve_typedset(env: &mut Env, d: &TypedSetDef) -> Result<Outcome, String> {
    if env.is_failed("QUANTALE", &d.over) || env.is_failed("QUANTALOID", &d.over) {
        return Ok(Outcome::Failed(format!(
            "depends on {} which failed validation",
            d.over
        )));
    }
    let q = env.quantaloid(&d.over)?;
    let names: Vec<String> = d.members.iter().map(|(x, _)| x.clone()).collect();
    index_map(&names, "element")?;
    let types = d
        .members
        .iter()
        .map(|(x, t)| {
            q.object_index(t)
                .ok_or_else(|| format!("`{t}` (type of {x}) is not an object of {}", d.over))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let n = names.len();
    env.sets.insert(
        d.name.clone(),
        (q, TypedSet::new(names, types).map_err(|e| e.to_string())?),
    );
    Ok(Outcome::Ok(format!(
        "{n} element{}",
        if n == 1 { "" } else { "s" }
    )))
}

fn resolve_category(env: &mut Env, d: &CategoryDef) -> Result<Outcome, String> {
    if env.is_failed("TYPEDSET", &d.on) {
        return Ok(Outcome::Failed(format!(
            "depends on {} which failed validation",
            d.on
        )));
    }
    let (q, set) = env
        .sets
        .get(&d.on)
        .cloned()
        .ok_or_else(|| format!("unknown typed set `{}`", d.on))?;
    let t = set.types().to_vec();
    let n = t.len();
    let mut given: Vec<Option<Elem>> = vec![None; n * n];
    for (x, y, e) in &d.homs {
        let xi = set
            .index_of(x)
            .ok_or_else(|| format!("unknown element `{x}` of {}", d.on))?;
        let yi = set
            .index_of(y)
            .ok_or_else(|| format!("unknown element `{y}` of {}", d.on))?;
        let l = q.hom(t[xi], t[yi]);
        let ei = l.index_of(e).ok_or_else(|| {
            format!(
                "`{e}` is not in hom({},{})",
                q.object_name(t[xi]),
                q.object_name(t[yi])
            )
        })?;
        let slot = &mut given[xi * n + yi];
        if slot.is_some_and(|old| old != ei) {
            return Err(format!("conflicting HOM entries for {x} {y}"));
        }
        *slot = Some(ei);
    }
    let hom = QRelation::from_fn(&t, &t, |a, b| {
        given[a * n + b].unwrap_or_else(|| {
            if a == b {
                q.id(t[a])
            } else {
                q.bottom(t[a], t[b])
            }
        })
    });
    if let Some(o) = law_outcome("category laws", &validate_named(&q, &set, &hom)) {
        return Ok(o);
    }
    env.cats
        .insert(d.name.clone(), QCategory::new_unchecked(q, set, hom));
    Ok(Outcome::Ok(format!(
        "{n} element{}",
        if n == 1 { "" } else { "s" }
    )))
}

/// A relation end: a closure space, a category or a typed set (discrete).
fn end_category(env: &Env, name: &str) -> Result<Option<QCategory>, String> {
    for kind in ["CLOSURE", "CATEGORY", "TYPEDSET"] {
        if env.is_failed(kind, name) {
            return Ok(None);
        }
    }
    if let Some(s) = env.spaces.get(name) {
        return Ok(Some(s.base().clone()));
    }
    env.category(name)
        .map(Some)
        .ok_or_else(|| format!("unknown category, typed set or closure space `{name}`"))
}

fn resolve_relation(env: &mut Env, d: &RelationDef, _cap: usize) -> Result<Outcome, BlockError> {
    let (Some(x), Some(y)) = (end_category(env, &d.from)?, end_category(env, &d.to)?) else {
        return Ok(Outcome::Failed(
            "depends on a block which failed validation".into(),
        ));
    };
    let q = x.quantaloid().clone();
    if *q != **y.quantaloid() {
        return Err(format!("{} and {} live over different quantaloids", d.from, d.to).into());
    }
    let (tx, ty) = (x.types().to_vec(), y.types().to_vec());
    let mut given: Vec<Option<Elem>> = vec![None; tx.len() * ty.len()];
    for (a, b, e) in &d.entries {
        let ai = x
            .set()
            .index_of(a)
            .ok_or_else(|| format!("unknown element `{a}` of {}", d.from))?;
        let bi = y
            .set()
            .index_of(b)
            .ok_or_else(|| format!("unknown element `{b}` of {}", d.to))?;
        let ei = q.hom(tx[ai], ty[bi]).index_of(e).ok_or_else(|| {
            format!(
                "`{e}` is not in hom({},{})",
                q.object_name(tx[ai]),
                q.object_name(ty[bi])
            )
        })?;
        let slot = &mut given[ai * ty.len() + bi];
        if slot.is_some_and(|old| old != ei) {
            return Err(format!("conflicting entries for {a} {b}").into());
        }
        *slot = Some(ei);
    }
    let rel = QRelation::from_fn(&tx, &ty, |a, b| {
        given[a * ty.len() + b].unwrap_or_else(|| q.bottom(tx[a], ty[b]))
    });
    let right = QRelation::compose(&q, &rel, x.hom()).expect("shapes match");
    let left = QRelation::compose(&q, y.hom(), &rel).expect("shapes match");
    for (side, r) in [
        ("absorb the domain hom", right),
        ("absorb the codomain hom", left),
    ] {
        if let Some((a, b)) = r.leq_witness(&q, &rel) {
            return Ok(Outcome::Failed(format!(
                "not a distributor: fails to {side} at ({}, {})",
                x.name(a),
                y.name(b)
            )));
        }
    }
    let mut detail = format!("{}×{} distributor", tx.len(), ty.len());
    if let (Some(s), Some(t)) = (env.spaces.get(&d.from), env.spaces.get(&d.to)) {
        let cont = check_continuous_dist(&rel, s, t).map_err(|e| e.to_string())?;
        let closed = is_closed_dist(&rel, s).map_err(|e| e.to_string())?;
        detail.push_str(&format!(", continuous: {cont}, closed: {closed}"));
    }
    env.relations.insert(
        d.name.clone(),
        NamedRelation {
            rel,
            from: d.from.clone(),
            to: d.to.clone(),
        },
    );
    Ok(Outcome::Ok(detail))
}

fn resolve_closure(env: &mut Env, d: &ClosureDef, cap: usize) -> Result<Outcome, BlockError> {
    if env.is_failed("CATEGORY", &d.on) || env.is_failed("TYPEDSET", &d.on) {
        return Ok(Outcome::Failed(format!(
            "depends on {} which failed validation",
            d.on
        )));
    }
    let px = match env.presheaf_cat(&d.on, cap) {
        Ok(Some(p)) => p,
        Ok(None) => return Err(format!("unknown category or typed set `{}`", d.on).into()),
        Err(e @ Error::CapExceeded { .. }) => return Err(BlockError::Cap(e)),
        Err(e) => return Err(e.to_string().into()),
    };
    if !d.closed.is_empty() && !d.table.is_empty() {
        return Err("CLOSED and TABLE cannot be combined".to_string().into());
    }
    let lit = |l: &PresheafLit| -> Result<std::result::Result<usize, String>, BlockError> {
        match env.presheaf(&px, l) {
            Ok(i) => Ok(Ok(i)),
            Err(LitError::Resolve(m)) => Err(m.into()),
            Err(LitError::NotPresheaf(m)) => Ok(Err(m)),
        }
    };
    let built = if !d.table.is_empty() {
        if d.mode.is_some() {
            return Err("MODE only applies to CLOSED".to_string().into());
        }
        let mut table: Vec<Option<usize>> = vec![None; px.len()];
        for (a, b) in &d.table {
            let (ia, ib) = match (lit(a)?, lit(b)?) {
                (Ok(ia), Ok(ib)) => (ia, ib),
                (Err(m), _) | (_, Err(m)) => return Ok(Outcome::Failed(m)),
            };
            if table[ia].is_some_and(|old| old != ib) {
                return Err(format!("conflicting TABLE entries for {a}").into());
            }
            table[ia] = Some(ib);
        }
        if let Some(m) = table.iter().position(Option::is_none) {
            return Err(format!("TABLE is not total: no image for {}", px.name(m)).into());
        }
        ClosureSpace::from_table(
            d.name.clone(),
            px.clone(),
            table.into_iter().flatten().collect(),
        )
    } else {
        let mut closed = Vec::new();
        for l in &d.closed {
            match lit(l)? {
                Ok(i) => closed.push(i),
                Err(m) => return Ok(Outcome::Failed(m)),
            }
        }
        let mode = match d.mode {
            Some(ModeDef::Generate) => Mode::Generate,
            _ => Mode::Exact,
        };
        from_closed_system(px.clone(), &closed, mode).map(|s| s.with_name(d.name.clone()))
    };
    match built {
        Ok(s) => {
            let detail = format!(
                "{} presheaves, {} closed",
                px.len(),
                s.closed_indices().len()
            );
            env.spaces.insert(d.name.clone(), s);
            Ok(Outcome::Ok(detail))
        }
        Err(e @ Error::CapExceeded { .. }) => Err(BlockError::Cap(e)),
        Err(e) => Ok(Outcome::Failed(e.to_string())),
    }
}
