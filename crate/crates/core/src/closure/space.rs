//! Closure operators as tables over an enumerated presheaf category, closure
//! systems and the category of closed presheaves.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::Arc;

use crate::algebra::{Elem, Obj};
use crate::qcat::complete;
use crate::qcat::presheaf::{Kind, Presheaf, PresheafCat};
use crate::qcat::QCategory;
use crate::report::{Validation, Violation};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// The given presheaves must already form a closure system.
    Exact,
    /// Close the given presheaves under cotensors and meets first.
    Generate,
}

/// A Q-closure space `(𝕏, c)`; `c` is a total table over the enumerated `P𝕏`.
#[derive(Debug, Clone)]
pub struct ClosureSpace {
    name: String,
    px: Arc<PresheafCat>,
    table: Vec<usize>,
}

impl PartialEq for ClosureSpace {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table
            && self.px.items() == other.px.items()
            && self.base() == other.base()
    }
}

impl Eq for ClosureSpace {}

/// Checks totality, type preservation, extensivity, idempotence and the
/// functor condition `P𝕏(μ,μ') ≤ P𝕏(cμ,cμ')`.
pub fn validate_closure_space(px: &PresheafCat, table: &[usize]) -> Vec<Violation> {
    let mut v = Validation::new();
    let n = px.len();
    if table.len() != n || table.iter().any(|&t| t >= n) {
        v.fail("total", || {
            format!("table has {} entries for {} presheaves", table.len(), n)
        });
        return v.into_violations();
    }
    let q = px.quantaloid();
    for m in 0..n {
        v.check(
            px.item(table[m]).ty == px.item(m).ty,
            "type-preserving",
            || format!("c{} has a different type", px.name(m)),
        );
        v.check(px.leq(m, table[m]), "extensive", || {
            format!(
                "{} is not below c of it = {}",
                px.name(m),
                px.name(table[m])
            )
        });
        v.check(table[table[m]] == table[m], "idempotent", || {
            format!(
                "cc{} = {} differs from c{0} = {}",
                px.name(m),
                px.name(table[table[m]]),
                px.name(table[m])
            )
        });
    }
    if v.has_failed("type-preserving") {
        return v.into_violations();
    }
    for a in 0..n {
        for b in 0..n {
            let l = q.hom(px.item(a).ty, px.item(b).ty);
            if !l.leq(px.hom(a, b), px.hom(table[a], table[b])) {
                v.fail("hom-preserving", || {
                    format!(
                        "P(X)({}, {}) is not below P(X)(c{0}, c{1})",
                        px.name(a),
                        px.name(b)
                    )
                });
            }
        }
    }
    v.into_violations()
}

impl ClosureSpace {
    /// Validated construction.
    pub fn from_table(
        name: impl Into<String>,
        px: Arc<PresheafCat>,
        table: Vec<usize>,
    ) -> Result<Self> {
        if px.kind() != Kind::Presheaf {
            return Err(Error::TypeMismatch(
                "closure spaces live on presheaf categories".into(),
            ));
        }
        let v = validate_closure_space(&px, &table);
        if !v.is_empty() {
            return Err(Error::Law(v));
        }
        Ok(ClosureSpace {
            name: name.into(),
            px,
            table,
        })
    }

    pub fn new_unchecked(name: impl Into<String>, px: Arc<PresheafCat>, table: Vec<usize>) -> Self {
        ClosureSpace {
            name: name.into(),
            px,
            table,
        }
    }

    /// `(𝕏, 1_{P𝕏})`.
    pub fn discrete(px: Arc<PresheafCat>) -> Self {
        let table = (0..px.len()).collect();
        Self::new_unchecked("discrete", px, table)
    }

    /// `c μ = ⊤` of type `|μ|`.
    pub fn indiscrete(px: Arc<PresheafCat>) -> Self {
        let table = px.items().iter().map(|m| px.pointwise_top(m.ty)).collect();
        Self::new_unchecked("indiscrete", px, table)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn base(&self) -> &QCategory {
        self.px.base()
    }

    pub fn px(&self) -> &Arc<PresheafCat> {
        &self.px
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, m: usize) -> usize {
        self.table[m]
    }

    pub fn apply_presheaf(&self, mu: &Presheaf) -> Result<&Presheaf> {
        let i = self.px.index_of(mu).ok_or_else(|| {
            Error::TypeMismatch(format!(
                "{} is not a presheaf on the base of {}",
                self.px.display(mu),
                self.name
            ))
        })?;
        Ok(self.px.item(self.table[i]))
    }

    #[inline]
    pub fn is_closed(&self, m: usize) -> bool {
        self.table[m] == m
    }

    /// Indices of the closed presheaves, in enumeration order.
    pub fn closed_indices(&self) -> Vec<usize> {
        (0..self.table.len())
            .filter(|&m| self.table[m] == m)
            .collect()
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate_closure_space(&self.px, &self.table)
    }

    pub fn has_discrete_base(&self) -> bool {
        let b = self.base();
        let q = b.quantaloid();
        (0..b.len()).all(|x| {
            (0..b.len()).all(|y| {
                let e = b.h(x, y);
                if x == y {
                    e == q.id(b.ty(x))
                } else {
                    e == q.hom(b.ty(x), b.ty(y)).bottom()
                }
            })
        })
    }

    /// Pointwise comparison of operators on the same `P𝕏`.
    pub fn op_leq(&self, other: &ClosureSpace) -> bool {
        (0..self.table.len()).all(|m| self.px.leq(self.table[m], other.table[m]))
    }

    pub fn closed_category(&self) -> ClosedCat {
        ClosedCat::new(self)
    }
}

/// Saturates `seed` (indices into `px`) under cotensors `v ↘ μ`, pointwise
/// binary meets and the top presheaf of every type.
pub fn generate(px: &PresheafCat, seed: &[usize]) -> Result<BTreeSet<usize>> {
    let q = px.quantaloid().clone();
    let mut set: BTreeSet<usize> = seed.iter().copied().collect();
    for t in q.objects() {
        set.insert(px.pointwise_top(t));
    }
    let mut queue: VecDeque<usize> = set.iter().copied().collect();
    while let Some(m) = queue.pop_front() {
        let ty = px.item(m).ty;
        let mut fresh = Vec::new();
        for r in q.objects() {
            for v in q.hom(r, ty).elements() {
                fresh.push(px.expect_index(&px.cotensor(v, r, m))?);
            }
        }
        let same: Vec<usize> = set
            .iter()
            .copied()
            .filter(|&o| px.item(o).ty == ty)
            .collect();
        for o in same {
            fresh.push(px.meet(m, o)?);
        }
        for f in fresh {
            if set.insert(f) {
                queue.push_back(f);
            }
        }
    }
    Ok(set)
}

/// First failure of closure under cotensors and meets, if any.
pub fn closure_system_witness(px: &PresheafCat, set: &BTreeSet<usize>) -> Result<Option<String>> {
    let q = px.quantaloid();
    for t in q.objects() {
        let top = px.pointwise_top(t);
        if !set.contains(&top) {
            return Ok(Some(format!("top presheaf {} is missing", px.name(top))));
        }
    }
    for &m in set {
        let ty = px.item(m).ty;
        for r in q.objects() {
            for v in q.hom(r, ty).elements() {
                let c = px.expect_index(&px.cotensor(v, r, m))?;
                if !set.contains(&c) {
                    return Ok(Some(format!(
                        "cotensor of {} by {} is {}, which is missing",
                        px.name(m),
                        q.elem_name(r, ty, v),
                        px.name(c)
                    )));
                }
            }
        }
        for &o in set {
            if px.item(o).ty == ty {
                let c = px.meet(m, o)?;
                if !set.contains(&c) {
                    return Ok(Some(format!(
                        "meet of {} and {} is {}, which is missing",
                        px.name(m),
                        px.name(o),
                        px.name(c)
                    )));
                }
            }
        }
    }
    Ok(None)
}

/// The reflection `c μ = ⋀_{ν ∈ A} P𝕏(μ,ν) ↘ ν` onto a closure system `A`.
pub fn reflection_table(px: &PresheafCat, system: &BTreeSet<usize>) -> Result<Vec<usize>> {
    let q = px.quantaloid();
    let types = px.base().types();
    (0..px.len())
        .map(|m| {
            let ty = px.item(m).ty;
            let mut acc = Presheaf::top(q, Kind::Presheaf, types, ty);
            for &n in system {
                let c = px.cotensor(px.hom(m, n), ty, n);
                acc = acc.meet(q, Kind::Presheaf, types, &c);
            }
            px.expect_index(&acc)
        })
        .collect()
}

/// Builds `(𝕏, c)` from a set of closed presheaves (indices into `px`).
pub fn from_closed_system(
    px: Arc<PresheafCat>,
    closed: &[usize],
    mode: Mode,
) -> Result<ClosureSpace> {
    let given: BTreeSet<usize> = closed.iter().copied().collect();
    let system = match mode {
        Mode::Generate => generate(&px, closed)?,
        Mode::Exact => {
            if let Some(w) = closure_system_witness(&px, &given)? {
                return Err(Error::NotClosureSystem(w));
            }
            given
        }
    };
    let table = reflection_table(&px, &system)?;
    let fixed: BTreeSet<usize> = (0..table.len()).filter(|&m| table[m] == m).collect();
    if fixed != system {
        return Err(Error::Inconsistent(
            "fixed points of the reflection differ from the closure system".into(),
        ));
    }
    for m in 0..px.len() {
        for &n in &system {
            if px.hom(table[m], n) != px.hom(m, n) {
                return Err(Error::Inconsistent(format!(
                    "reflection adjunction fails at ({}, {})",
                    px.name(m),
                    px.name(n)
                )));
            }
        }
    }
    ClosureSpace::from_table("generated", px, table)
}

/// Same, from explicit presheaves.
pub fn from_closed_presheaves(
    px: Arc<PresheafCat>,
    closed: &[Presheaf],
    mode: Mode,
) -> Result<ClosureSpace> {
    let idx = closed
        .iter()
        .map(|m| px.expect_index(m))
        .collect::<Result<Vec<_>>>()?;
    from_closed_system(px, &idx, mode)
}

/// Every closure system on `P𝕏`, each as a validated space, in a canonical
/// order (sorted by closed set). Fails once more than `cap` are found.
pub fn all_closure_spaces(px: &Arc<PresheafCat>, cap: usize) -> Result<Vec<ClosureSpace>> {
    let start = generate(px, &[])?;
    let mut seen: HashSet<BTreeSet<usize>> = HashSet::new();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(sys) = queue.pop_front() {
        for m in 0..px.len() {
            if sys.contains(&m) {
                continue;
            }
            let mut seed: Vec<usize> = sys.iter().copied().collect();
            seed.push(m);
            let next = generate(px, &seed)?;
            if seen.insert(next.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded {
                        what: "closure systems".into(),
                        cap,
                    });
                }
                queue.push_back(next);
            }
        }
    }
    let mut systems: Vec<Vec<usize>> = seen.into_iter().map(|s| s.into_iter().collect()).collect();
    systems.sort();
    systems
        .iter()
        .enumerate()
        .map(|(i, s)| {
            Ok(from_closed_system(px.clone(), s, Mode::Exact)?.with_name(format!("cls#{i}")))
        })
        .collect()
}

/// The complete category `C(𝕏,c)` of closed presheaves with inherited homs.
#[derive(Debug, Clone)]
pub struct ClosedCat {
    /// Indices into `P𝕏` of the closed presheaves.
    pub members: Vec<usize>,
    /// Full subcategory of `P𝕏` on the members, indexed like `members`.
    pub pcat: PresheafCat,
}

impl ClosedCat {
    pub fn new(space: &ClosureSpace) -> Self {
        let members = space.closed_indices();
        let items = members.iter().map(|&m| space.px.item(m).clone()).collect();
        let pcat = PresheafCat::from_items(space.base(), Kind::Presheaf, items);
        ClosedCat { members, pcat }
    }

    pub fn cat(&self) -> &QCategory {
        self.pcat.cat()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Position of a `P𝕏` index among the members.
    pub fn position(&self, px_index: usize) -> Option<usize> {
        self.members.binary_search(&px_index).ok()
    }

    pub fn expect_position(&self, px_index: usize) -> Result<usize> {
        self.position(px_index)
            .ok_or_else(|| Error::Inconsistent(format!("presheaf #{px_index} is not closed")))
    }
}

/// Checks that `C(𝕏,c)` is complete and that its suprema, tensors and
/// cotensors are computed by `c·⋁`, `c(u∘ν)` and `v↘ν` in `P𝕏`.
/// `cap` bounds the enumeration of presheaves on `C(𝕏,c)`.
pub fn check_closed_category(space: &ClosureSpace, cap: usize) -> Result<Vec<Violation>> {
    let cc = space.closed_category();
    let a = cc.cat();
    let px = space.px();
    let q = px.quantaloid().clone();
    let types = space.base().types();
    let pa = PresheafCat::presheaves(a, cap)?;
    let mut v = Validation::new();
    v.check(complete::is_complete(a, &pa)?, "complete", || {
        format!("C({}) is not complete", space.name())
    });
    for big in pa.items() {
        let ty = big.ty;
        let vals = types
            .iter()
            .enumerate()
            .map(|(x, &tx)| {
                q.hom(tx, ty).join_all(
                    cc.members.iter().enumerate().map(|(i, &m)| {
                        q.comp(tx, px.item(m).ty, ty, big.vals[i], px.item(m).vals[x])
                    }),
                )
            })
            .collect::<Vec<Elem>>();
        let joined = px.expect_index(&Presheaf::new(ty, vals))?;
        let formula = cc.expect_position(space.apply(joined))?;
        let direct = complete::sup(a, big);
        v.check(direct == Some(formula), "sup formula", || {
            format!(
                "sup of {} in C is {:?}, formula gives {}",
                pa.display(big),
                direct.map(|d| a.name(d).to_string()),
                a.name(formula)
            )
        });
    }
    for (i, &m) in cc.members.iter().enumerate() {
        let ty = px.item(m).ty;
        for r in q.objects() {
            for u in q.hom(ty, r).elements() {
                let t = px.expect_index(&px.tensor(u, r, m))?;
                let formula = cc.expect_position(space.apply(t))?;
                v.check(
                    complete::tensor(a, u, r, i) == Some(formula),
                    "tensor formula",
                    || format!("tensor of {} by {}", a.name(i), q.hom(ty, r).name(u)),
                );
            }
            for w in q.hom(r, ty).elements() {
                let t = px.expect_index(&px.cotensor(w, r, m))?;
                let pos = cc.position(t);
                v.check(
                    pos.is_some() && complete::cotensor(a, w, r, i) == pos,
                    "cotensor formula",
                    || format!("cotensor of {} by {}", a.name(i), q.hom(r, ty).name(w)),
                );
            }
        }
    }
    Ok(v.into_violations())
}

/// Parses presheaf literals against a base, e.g. for fixtures.
pub fn presheaf_of_set(px: &PresheafCat, ty: Obj, vals: Vec<Elem>) -> Result<usize> {
    px.expect_index(&Presheaf::new(ty, vals))
}

/// Applies `c` to the pointwise join of a family, i.e. the join in `C(𝕏,c)`.
pub fn closed_join(space: &ClosureSpace, family: &[usize], ty: Obj) -> Result<usize> {
    let px = space.px();
    let mut acc = px.pointwise_bottom(ty);
    for &m in family {
        acc = px.join(acc, m)?;
    }
    Ok(space.apply(acc))
}

/// Every presheaf paired with its closure, by name.
pub fn display_table(space: &ClosureSpace) -> Vec<(String, String)> {
    let px = space.px();
    (0..px.len())
        .map(|m| (px.name(m).to_string(), px.name(space.apply(m)).to_string()))
        .collect()
}
