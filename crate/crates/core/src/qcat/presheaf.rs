//! Presheaves, copresheaves and their enumerated categories.

use std::collections::HashMap;
use std::sync::Arc;

use super::category::QCategory;
use super::relation::{QRelation, TypedSet};
use crate::algebra::{Elem, FiniteLattice, Obj, Quantaloid};
use crate::{Error, Result};

/// Default bound on the number of enumerated presheaves.
pub const DEFAULT_CAP: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    /// `μ: 𝕏 ⇸ {q}`, entries `μ(x) ∈ hom(|x|, q)`.
    Presheaf,
    /// `λ: {q} ⇸ 𝕏`, entries `λ(x) ∈ hom(q, |x|)`.
    Copresheaf,
}

/// A presheaf (or copresheaf) of type `ty`: one entry per element of the
/// base. The derived order is lexicographic in `(ty, vals)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Presheaf {
    pub ty: Obj,
    pub vals: Vec<Elem>,
}

impl Presheaf {
    pub fn new(ty: Obj, vals: Vec<Elem>) -> Self {
        Presheaf { ty, vals }
    }

    /// The least presheaf of type `ty`.
    pub fn bottom(q: &Quantaloid, kind: Kind, types: &[Obj], ty: Obj) -> Self {
        let vals = types
            .iter()
            .map(|&t| entry_lattice(q, kind, t, ty).bottom())
            .collect();
        Presheaf { ty, vals }
    }

    /// The greatest presheaf of type `ty` (entries `⊤`).
    pub fn top(q: &Quantaloid, kind: Kind, types: &[Obj], ty: Obj) -> Self {
        let vals = types
            .iter()
            .map(|&t| entry_lattice(q, kind, t, ty).top())
            .collect();
        Presheaf { ty, vals }
    }

    /// As a relation `X ⇸ {ty}` (presheaf) or `{ty} ⇸ X` (copresheaf).
    pub fn to_relation(&self, kind: Kind, types: &[Obj]) -> QRelation {
        match kind {
            Kind::Presheaf => QRelation::from_fn(types, &[self.ty], |x, _| self.vals[x]),
            Kind::Copresheaf => QRelation::from_fn(&[self.ty], types, |_, x| self.vals[x]),
        }
    }

    /// Pointwise order (same type required).
    pub fn pointwise_leq(&self, q: &Quantaloid, kind: Kind, types: &[Obj], other: &Self) -> bool {
        self.ty == other.ty
            && types
                .iter()
                .enumerate()
                .all(|(i, &t)| entry_lattice(q, kind, t, self.ty).leq(self.vals[i], other.vals[i]))
    }

    /// Pointwise meet (same type required).
    pub fn meet(&self, q: &Quantaloid, kind: Kind, types: &[Obj], other: &Self) -> Self {
        debug_assert_eq!(self.ty, other.ty);
        let vals = types
            .iter()
            .enumerate()
            .map(|(i, &t)| entry_lattice(q, kind, t, self.ty).meet(self.vals[i], other.vals[i]))
            .collect();
        Presheaf { ty: self.ty, vals }
    }

    pub fn join(&self, q: &Quantaloid, kind: Kind, types: &[Obj], other: &Self) -> Self {
        debug_assert_eq!(self.ty, other.ty);
        let vals = types
            .iter()
            .enumerate()
            .map(|(i, &t)| entry_lattice(q, kind, t, self.ty).join(self.vals[i], other.vals[i]))
            .collect();
        Presheaf { ty: self.ty, vals }
    }
}

/// The hom-set holding an entry at an element of type `t` for a
/// (co)presheaf of type `ty`.
#[inline]
pub fn entry_lattice(q: &Quantaloid, kind: Kind, t: Obj, ty: Obj) -> &FiniteLattice {
    match kind {
        Kind::Presheaf => q.hom(t, ty),
        Kind::Copresheaf => q.hom(ty, t),
    }
}

/// `(μ∘𝕏)(x) = ⋁_y μ(y) ∘ 𝕏(x,y)` for presheaves, `(𝕏∘λ)(x) = ⋁_y 𝕏(y,x) ∘ λ(y)`
/// for copresheaves.
pub fn absorb(x: &QCategory, kind: Kind, mu: &Presheaf) -> Presheaf {
    let q = x.quantaloid();
    let n = x.len();
    let vals = (0..n)
        .map(|a| {
            let ta = x.ty(a);
            let l = entry_lattice(q, kind, ta, mu.ty);
            l.join_all((0..n).map(|b| match kind {
                Kind::Presheaf => q.comp(ta, x.ty(b), mu.ty, mu.vals[b], x.h(a, b)),
                Kind::Copresheaf => q.comp(mu.ty, x.ty(b), ta, x.h(b, a), mu.vals[b]),
            }))
        })
        .collect();
    Presheaf { ty: mu.ty, vals }
}

#[inline]
fn pair_ok(x: &QCategory, kind: Kind, ty: Obj, i: usize, vi: Elem, j: usize, vj: Elem) -> bool {
    // μ(j) ∘ 𝕏(i,j) ≤ μ(i), resp. 𝕏(j,i) ∘ λ(j) ≤ λ(i)
    let q = x.quantaloid();
    let (ti, tj) = (x.ty(i), x.ty(j));
    match kind {
        Kind::Presheaf => q.hom(ti, ty).leq(q.comp(ti, tj, ty, vj, x.h(i, j)), vi),
        Kind::Copresheaf => q.hom(ty, ti).leq(q.comp(ty, tj, ti, x.h(j, i), vj), vi),
    }
}

/// The one-sided filter `μ∘𝕏 ≤ μ` (resp. `𝕏∘λ ≤ λ`).
pub fn is_presheaf(x: &QCategory, kind: Kind, mu: &Presheaf) -> bool {
    let n = x.len();
    mu.vals.len() == n
        && (0..n).all(|i| entry_lattice(x.quantaloid(), kind, x.ty(i), mu.ty).contains(mu.vals[i]))
        && (0..n).all(|i| (0..n).all(|j| pair_ok(x, kind, mu.ty, i, mu.vals[i], j, mu.vals[j])))
}

/// All (co)presheaves on `x`, ordered by `(type, entries)`; fails once more
/// than `cap` have been found.
pub fn enumerate(x: &QCategory, kind: Kind, cap: usize) -> Result<Vec<Presheaf>> {
    let q = x.quantaloid().clone();
    let n = x.len();
    let mut out = Vec::new();
    for ty in q.objects() {
        let sizes: Vec<usize> = (0..n)
            .map(|i| entry_lattice(&q, kind, x.ty(i), ty).len())
            .collect();
        let mut cur = vec![0 as Elem; n];
        enumerate_rec(x, kind, ty, &sizes, 0, &mut cur, &mut out, cap)?;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_rec(
    x: &QCategory,
    kind: Kind,
    ty: Obj,
    sizes: &[usize],
    i: usize,
    cur: &mut Vec<Elem>,
    out: &mut Vec<Presheaf>,
    cap: usize,
) -> Result<()> {
    if i == sizes.len() {
        if out.len() >= cap {
            return Err(Error::CapExceeded {
                what: "presheaf category".into(),
                cap,
            });
        }
        out.push(Presheaf::new(ty, cur.clone()));
        return Ok(());
    }
    for v in 0..sizes[i] as Elem {
        cur[i] = v;
        let ok = (0..=i).all(|j| {
            pair_ok(x, kind, ty, i, v, j, cur[j]) && pair_ok(x, kind, ty, j, cur[j], i, v)
        });
        if ok {
            enumerate_rec(x, kind, ty, sizes, i + 1, cur, out, cap)?;
        }
    }
    Ok(())
}

/// `P𝕏(μ,μ') = ⋀_x μ'(x) ↙ μ(x)`, resp. `P†𝕏(λ,λ') = ⋀_x λ'(x) ↘ λ(x)`.
pub fn presheaf_hom(q: &Quantaloid, kind: Kind, types: &[Obj], a: &Presheaf, b: &Presheaf) -> Elem {
    let l = q.hom(a.ty, b.ty);
    l.meet_all(types.iter().enumerate().map(|(i, &t)| match kind {
        Kind::Presheaf => q.left_impl(t, a.ty, b.ty, b.vals[i], a.vals[i]),
        Kind::Copresheaf => q.right_impl(a.ty, b.ty, t, b.vals[i], a.vals[i]),
    }))
}

/// Textual form `[q| x=e, y=e]`, also accepted by the definition format.
pub fn format_presheaf(q: &Quantaloid, kind: Kind, set: &TypedSet, mu: &Presheaf) -> String {
    let entries: Vec<String> = (0..set.len())
        .map(|i| {
            let l = entry_lattice(q, kind, set.ty(i), mu.ty);
            format!("{}={}", set.name(i), l.name(mu.vals[i]))
        })
        .collect();
    format!("[{}| {}]", q.object_name(mu.ty), entries.join(", "))
}

/// The enumerated category `P𝕏` (or `P†𝕏`) with an index for lookups.
#[derive(Debug, Clone)]
pub struct PresheafCat {
    kind: Kind,
    base: QCategory,
    items: Vec<Presheaf>,
    index: HashMap<Presheaf, usize>,
    cat: QCategory,
}

impl PresheafCat {
    pub fn new(base: &QCategory, kind: Kind, cap: usize) -> Result<Self> {
        let items = enumerate(base, kind, cap)?;
        Ok(Self::from_items(base, kind, items))
    }

    pub fn presheaves(base: &QCategory, cap: usize) -> Result<Self> {
        Self::new(base, Kind::Presheaf, cap)
    }

    pub fn copresheaves(base: &QCategory, cap: usize) -> Result<Self> {
        Self::new(base, Kind::Copresheaf, cap)
    }

    /// Builds the full subcategory of `P𝕏` on the given (co)presheaves.
    pub fn from_items(base: &QCategory, kind: Kind, items: Vec<Presheaf>) -> Self {
        let q = base.quantaloid().clone();
        let index = items
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let names = items
            .iter()
            .map(|m| format_presheaf(&q, kind, base.set(), m))
            .collect();
        let types: Vec<Obj> = items.iter().map(|m| m.ty).collect();
        let hom = QRelation::from_fn(&types, &types, |a, b| {
            presheaf_hom(&q, kind, base.types(), &items[a], &items[b])
        });
        let set = TypedSet::new(names, types).expect("same length");
        let cat = QCategory::new_unchecked(q, set, hom);
        PresheafCat {
            kind,
            base: base.clone(),
            items,
            index,
            cat,
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn base(&self) -> &QCategory {
        &self.base
    }

    pub fn quantaloid(&self) -> &Arc<Quantaloid> {
        self.base.quantaloid()
    }

    pub fn cat(&self) -> &QCategory {
        &self.cat
    }

    pub fn items(&self) -> &[Presheaf] {
        &self.items
    }

    pub fn item(&self, i: usize) -> &Presheaf {
        &self.items[i]
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn index_of(&self, mu: &Presheaf) -> Option<usize> {
        self.index.get(mu).copied()
    }

    /// Index lookup that treats absence as an internal error.
    pub fn expect_index(&self, mu: &Presheaf) -> Result<usize> {
        self.index_of(mu).ok_or_else(|| {
            Error::Inconsistent(format!(
                "{} is not an enumerated {}",
                self.display(mu),
                match self.kind {
                    Kind::Presheaf => "presheaf",
                    Kind::Copresheaf => "copresheaf",
                }
            ))
        })
    }

    pub fn display(&self, mu: &Presheaf) -> String {
        format_presheaf(self.quantaloid(), self.kind, self.base.set(), mu)
    }

    pub fn name(&self, i: usize) -> &str {
        self.cat.name(i)
    }

    #[inline]
    pub fn hom(&self, a: usize, b: usize) -> Elem {
        self.cat.h(a, b)
    }

    /// Underlying order of the (co)presheaf category.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.cat.leq(a, b)
    }

    /// Pointwise order, which is the underlying order for presheaves and
    /// its reverse for copresheaves.
    pub fn pointwise_leq(&self, a: usize, b: usize) -> bool {
        self.items[a].pointwise_leq(
            self.quantaloid(),
            self.kind,
            self.base.types(),
            &self.items[b],
        )
    }

    pub fn of_type(&self, ty: Obj) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.items[i].ty == ty)
    }

    /// Index of the least (co)presheaf of type `ty` in the pointwise order.
    pub fn pointwise_bottom(&self, ty: Obj) -> usize {
        let p = Presheaf::bottom(self.quantaloid(), self.kind, self.base.types(), ty);
        self.index_of(&p).expect("bottom is always a presheaf")
    }

    pub fn pointwise_top(&self, ty: Obj) -> usize {
        let p = Presheaf::top(self.quantaloid(), self.kind, self.base.types(), ty);
        self.index_of(&p).expect("top is always a presheaf")
    }

    /// Pointwise meet of two enumerated presheaves of the same type.
    pub fn meet(&self, a: usize, b: usize) -> Result<usize> {
        let m = self.items[a].meet(
            self.quantaloid(),
            self.kind,
            self.base.types(),
            &self.items[b],
        );
        self.expect_index(&m)
    }

    /// Pointwise join of two enumerated presheaves of the same type.
    pub fn join(&self, a: usize, b: usize) -> Result<usize> {
        let m = self.items[a].join(
            self.quantaloid(),
            self.kind,
            self.base.types(),
            &self.items[b],
        );
        self.expect_index(&m)
    }

    /// Yoneda map `x ↦ 𝕏(-,x)` (presheaves) or `x ↦ 𝕏(x,-)` (copresheaves).
    pub fn yoneda(&self) -> Result<Vec<usize>> {
        (0..self.base.len())
            .map(|x| self.expect_index(&self.representable(x)))
            .collect()
    }

    pub fn representable(&self, x: usize) -> Presheaf {
        let b = &self.base;
        let vals = match self.kind {
            Kind::Presheaf => b.hom().column(x),
            Kind::Copresheaf => b.hom().row(x),
        };
        Presheaf::new(b.ty(x), vals)
    }

    /// `u ∘ μ` for `u: |μ| → r` (presheaves), i.e. the tensor in `P𝕏`.
    pub fn tensor(&self, u: Elem, r: Obj, mu: usize) -> Presheaf {
        let q = self.quantaloid();
        let m = &self.items[mu];
        let vals = self
            .base
            .types()
            .iter()
            .enumerate()
            .map(|(i, &t)| q.comp(t, m.ty, r, u, m.vals[i]))
            .collect();
        Presheaf::new(r, vals)
    }

    /// `v ↘ μ` for `v: r → |μ|` (presheaves), i.e. the cotensor in `P𝕏`.
    pub fn cotensor(&self, v: Elem, r: Obj, mu: usize) -> Presheaf {
        let q = self.quantaloid();
        let m = &self.items[mu];
        let vals = self
            .base
            .types()
            .iter()
            .enumerate()
            .map(|(i, &t)| q.right_impl(t, r, m.ty, v, m.vals[i]))
            .collect();
        Presheaf::new(r, vals)
    }
}

/// Transpose `t̃φ: Y → P𝕏`, `y ↦ φ(-,y)`, as indices into `px`.
pub fn transpose(px: &PresheafCat, y_types: &[Obj], phi: &QRelation) -> Result<Vec<usize>> {
    if phi.dom() != px.base().types() || phi.cod() != y_types {
        return Err(Error::TypeMismatch(
            "relation does not match the transpose target".into(),
        ));
    }
    (0..phi.cols())
        .map(|y| px.expect_index(&Presheaf::new(y_types[y], phi.column(y))))
        .collect()
}

/// Inverse transpose `t̃f(x,y) = (fy)(x)`.
pub fn untranspose(px: &PresheafCat, y_types: &[Obj], f: &[usize]) -> Result<QRelation> {
    if f.len() != y_types.len() {
        return Err(Error::TypeMismatch("map has the wrong length".into()));
    }
    for (y, &m) in f.iter().enumerate() {
        if px.item(m).ty != y_types[y] {
            return Err(Error::TypeMismatch(format!(
                "column {y} has the wrong type"
            )));
        }
    }
    Ok(QRelation::from_fn(px.base().types(), y_types, |x, y| {
        px.item(f[y]).vals[x]
    }))
}
