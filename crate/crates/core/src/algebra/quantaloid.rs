//! Small quantaloids as explicit composition tables.

use std::fmt;

use super::lattice::{Elem, FiniteLattice};
use crate::report::{Validation, Violation};
use crate::{Error, Result};

/// An object of a quantaloid (also the type of an element of a typed set).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Obj(pub u16);

impl Obj {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

/// A morphism `elem: src -> tgt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub src: Obj,
    pub tgt: Obj,
    pub elem: Elem,
}

impl Arrow {
    pub fn new(src: Obj, tgt: Obj, elem: Elem) -> Self {
        Arrow { src, tgt, elem }
    }
}

/// Which residual of composition to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `w ↙ u`, right adjoint of `- ∘ u`.
    Left,
    /// `v ↘ w`, right adjoint of `v ∘ -`.
    Right,
}

/// A finite quantaloid: objects, one finite lattice per hom-set, and total
/// composition tables. Both implications are tabulated at construction by
/// the brute-force join `w ↙ u = ⋁{v | v∘u ≤ w}` (dually for `↘`).
#[derive(Debug, Clone)]
pub struct Quantaloid {
    name: String,
    objects: Vec<String>,
    homs: Vec<FiniteLattice>,
    comp: Vec<Vec<Elem>>,
    ids: Vec<Elem>,
    left: Vec<Vec<Elem>>,
    right: Vec<Vec<Elem>>,
}

impl PartialEq for Quantaloid {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.homs == other.homs
            && self.comp == other.comp
            && self.ids == other.ids
    }
}

impl Eq for Quantaloid {}

impl Quantaloid {
    /// Builds a quantaloid by tabulating `comp(p, q, r, v, u) = v ∘ u` for
    /// `u ∈ hom(p,q)`, `v ∈ hom(q,r)`. `homs` is indexed `p * m + q`.
    ///
    /// Only structural well-formedness is enforced here; the quantaloid laws
    /// are checked by [`validate_quantaloid`].
    pub fn from_fn(
        name: impl Into<String>,
        objects: Vec<String>,
        homs: Vec<FiniteLattice>,
        ids: Vec<Elem>,
        mut comp: impl FnMut(Obj, Obj, Obj, Elem, Elem) -> Result<Elem>,
    ) -> Result<Self> {
        let m = objects.len();
        if m == 0 || m > u16::MAX as usize {
            return Err(Error::Unsupported(format!("{m} objects")));
        }
        if homs.len() != m * m {
            return Err(Error::TypeMismatch(format!(
                "expected {} hom-sets, got {}",
                m * m,
                homs.len()
            )));
        }
        if ids.len() != m {
            return Err(Error::TypeMismatch(
                "one identity per object required".into(),
            ));
        }
        for (q, &e) in ids.iter().enumerate() {
            if !homs[q * m + q].contains(e) {
                return Err(Error::NotAnElement {
                    elem: e as usize,
                    context: format!("hom({0},{0})", objects[q]),
                });
            }
        }
        let mut tables = Vec::with_capacity(m * m * m);
        for p in 0..m {
            for q in 0..m {
                for r in 0..m {
                    let (hpq, hqr, hpr) = (&homs[p * m + q], &homs[q * m + r], &homs[p * m + r]);
                    let mut t = Vec::with_capacity(hpq.len() * hqr.len());
                    for v in hqr.elements() {
                        for u in hpq.elements() {
                            let w = comp(Obj(p as u16), Obj(q as u16), Obj(r as u16), v, u)?;
                            if !hpr.contains(w) {
                                return Err(Error::NotAnElement {
                                    elem: w as usize,
                                    context: format!("hom({},{})", objects[p], objects[r]),
                                });
                            }
                            t.push(w);
                        }
                    }
                    tables.push(t);
                }
            }
        }
        let mut out = Quantaloid {
            name: name.into(),
            objects,
            homs,
            comp: tables,
            ids,
            left: Vec::new(),
            right: Vec::new(),
        };
        out.tabulate_implications();
        Ok(out)
    }

    fn tabulate_implications(&mut self) {
        let m = self.objects.len();
        let mut left = Vec::with_capacity(m * m * m);
        let mut right = Vec::with_capacity(m * m * m);
        for p in 0..m {
            for q in 0..m {
                for r in 0..m {
                    let (o_p, o_q, o_r) = (Obj(p as u16), Obj(q as u16), Obj(r as u16));
                    let (hpq, hqr, hpr) =
                        (self.hom(o_p, o_q), self.hom(o_q, o_r), self.hom(o_p, o_r));
                    let mut lt = Vec::with_capacity(hpr.len() * hpq.len());
                    for w in hpr.elements() {
                        for u in hpq.elements() {
                            let cands = hqr
                                .elements()
                                .filter(|&v| hpr.leq(self.comp(o_p, o_q, o_r, v, u), w));
                            lt.push(hqr.join_all(cands));
                        }
                    }
                    let mut rt = Vec::with_capacity(hqr.len() * hpr.len());
                    for v in hqr.elements() {
                        for w in hpr.elements() {
                            let cands = hpq
                                .elements()
                                .filter(|&u| hpr.leq(self.comp(o_p, o_q, o_r, v, u), w));
                            rt.push(hpq.join_all(cands));
                        }
                    }
                    left.push(lt);
                    right.push(rt);
                }
            }
        }
        self.left = left;
        self.right = right;
    }

    #[inline]
    fn tri(&self, p: Obj, q: Obj, r: Obj) -> usize {
        let m = self.objects.len();
        (p.idx() * m + q.idx()) * m + r.idx()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = Obj> + Clone {
        (0..self.objects.len() as u16).map(Obj)
    }

    pub fn object_name(&self, q: Obj) -> &str {
        &self.objects[q.idx()]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn object_index(&self, name: &str) -> Option<Obj> {
        self.objects
            .iter()
            .position(|n| n == name)
            .map(|i| Obj(i as u16))
    }

    #[inline]
    pub fn hom(&self, p: Obj, q: Obj) -> &FiniteLattice {
        &self.homs[p.idx() * self.objects.len() + q.idx()]
    }

    #[inline]
    pub fn id(&self, q: Obj) -> Elem {
        self.ids[q.idx()]
    }

    pub fn top(&self, p: Obj, q: Obj) -> Elem {
        self.hom(p, q).top()
    }

    pub fn bottom(&self, p: Obj, q: Obj) -> Elem {
        self.hom(p, q).bottom()
    }

    /// `v ∘ u` for `u ∈ hom(p,q)`, `v ∈ hom(q,r)`.
    #[inline]
    pub fn comp(&self, p: Obj, q: Obj, r: Obj, v: Elem, u: Elem) -> Elem {
        let t = self.tri(p, q, r);
        self.comp[t][v as usize * self.hom(p, q).len() + u as usize]
    }

    /// `w ↙ u ∈ hom(q,r)` for `w ∈ hom(p,r)`, `u ∈ hom(p,q)`.
    #[inline]
    pub fn left_impl(&self, p: Obj, q: Obj, r: Obj, w: Elem, u: Elem) -> Elem {
        let t = self.tri(p, q, r);
        self.left[t][w as usize * self.hom(p, q).len() + u as usize]
    }

    /// `v ↘ w ∈ hom(p,q)` for `v ∈ hom(q,r)`, `w ∈ hom(p,r)`.
    #[inline]
    pub fn right_impl(&self, p: Obj, q: Obj, r: Obj, v: Elem, w: Elem) -> Elem {
        let t = self.tri(p, q, r);
        self.right[t][v as usize * self.hom(p, r).len() + w as usize]
    }

    fn check_arrow(&self, a: Arrow) -> Result<()> {
        if a.src.idx() >= self.num_objects() || a.tgt.idx() >= self.num_objects() {
            return Err(Error::TypeMismatch(format!(
                "arrow {a:?} has unknown objects"
            )));
        }
        if !self.hom(a.src, a.tgt).contains(a.elem) {
            return Err(Error::NotAnElement {
                elem: a.elem as usize,
                context: format!(
                    "hom({},{})",
                    self.object_name(a.src),
                    self.object_name(a.tgt)
                ),
            });
        }
        Ok(())
    }

    /// Composite `v ∘ u` of `u: p → q` and `v: q → r`.
    pub fn compose(&self, v: Arrow, u: Arrow) -> Result<Arrow> {
        self.check_arrow(u)?;
        self.check_arrow(v)?;
        if v.src != u.tgt {
            return Err(Error::TypeMismatch(format!(
                "cannot compose {} after {}",
                self.show(v),
                self.show(u)
            )));
        }
        Ok(Arrow::new(
            u.src,
            v.tgt,
            self.comp(u.src, u.tgt, v.tgt, v.elem, u.elem),
        ))
    }

    /// `side = Left`: `a = w: p → r`, `b = u: p → q`, returns `w ↙ u: q → r`.
    /// `side = Right`: `a = v: q → r`, `b = w: p → r`, returns `v ↘ w: p → q`.
    pub fn implication(&self, side: Side, a: Arrow, b: Arrow) -> Result<Arrow> {
        self.check_arrow(a)?;
        self.check_arrow(b)?;
        match side {
            Side::Left => {
                let (w, u) = (a, b);
                if w.src != u.src {
                    return Err(Error::TypeMismatch(format!(
                        "{} ↙ {}: domains differ",
                        self.show(w),
                        self.show(u)
                    )));
                }
                let e = self.left_impl(u.src, u.tgt, w.tgt, w.elem, u.elem);
                Ok(Arrow::new(u.tgt, w.tgt, e))
            }
            Side::Right => {
                let (v, w) = (a, b);
                if v.tgt != w.tgt {
                    return Err(Error::TypeMismatch(format!(
                        "{} ↘ {}: codomains differ",
                        self.show(v),
                        self.show(w)
                    )));
                }
                let e = self.right_impl(w.src, v.src, v.tgt, v.elem, w.elem);
                Ok(Arrow::new(w.src, v.src, e))
            }
        }
    }

    pub fn show(&self, a: Arrow) -> String {
        format!(
            "{}:{}→{}",
            self.hom(a.src, a.tgt).name(a.elem),
            self.object_name(a.src),
            self.object_name(a.tgt)
        )
    }

    /// Name of `e ∈ hom(p,q)`.
    pub fn elem_name(&self, p: Obj, q: Obj, e: Elem) -> &str {
        self.hom(p, q).name(e)
    }
}

impl fmt::Display for Quantaloid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} objects)", self.name, self.objects.len())
    }
}

/// Checks lattice tables, unit laws, associativity, preservation of empty and
/// binary joins in each argument (which for finite lattices is preservation
/// of all joins), and the three-way residuation equivalence.
pub fn validate_quantaloid(q: &Quantaloid) -> Vec<Violation> {
    let mut rep = Validation::new();
    let objs: Vec<Obj> = q.objects().collect();
    let nm = |o: Obj| q.object_name(o).to_string();

    for &p in &objs {
        for &r in &objs {
            let h = q.hom(p, r);
            for a in h.elements() {
                for b in h.elements() {
                    let j = h.join(a, b);
                    let ok = h.leq(a, j)
                        && h.leq(b, j)
                        && h.elements()
                            .all(|c| !(h.leq(a, c) && h.leq(b, c)) || h.leq(j, c));
                    rep.check(ok, "lattice join", || {
                        format!("hom({},{}) {} ∨ {}", nm(p), nm(r), h.name(a), h.name(b))
                    });
                }
            }
        }
    }

    for &p in &objs {
        for &r in &objs {
            for u in q.hom(p, r).elements() {
                let l = q.comp(p, r, r, q.id(r), u);
                let rr = q.comp(p, p, r, u, q.id(p));
                rep.check(l == u && rr == u, "unit", || {
                    format!("u = {}", q.show(Arrow::new(p, r, u)))
                });
            }
        }
    }

    for &p in &objs {
        for &qq in &objs {
            for &r in &objs {
                for &s in &objs {
                    for u in q.hom(p, qq).elements() {
                        for v in q.hom(qq, r).elements() {
                            let vu = q.comp(p, qq, r, v, u);
                            for w in q.hom(r, s).elements() {
                                let a = q.comp(p, r, s, w, vu);
                                let b = q.comp(p, qq, s, q.comp(qq, r, s, w, v), u);
                                rep.check(a == b, "associativity", || {
                                    format!(
                                        "w = {}, v = {}, u = {}",
                                        q.show(Arrow::new(r, s, w)),
                                        q.show(Arrow::new(qq, r, v)),
                                        q.show(Arrow::new(p, qq, u))
                                    )
                                });
                            }
                        }
                    }
                }
            }
        }
    }

    for &p in &objs {
        for &qq in &objs {
            for &r in &objs {
                let (hpq, hqr, hpr) = (q.hom(p, qq), q.hom(qq, r), q.hom(p, r));
                for v in hqr.elements() {
                    rep.check(
                        q.comp(p, qq, r, v, hpq.bottom()) == hpr.bottom(),
                        "join preservation (right argument)",
                        || format!("v = {} composed with ⊥", q.show(Arrow::new(qq, r, v))),
                    );
                    for u1 in hpq.elements() {
                        for u2 in hpq.elements() {
                            let lhs = q.comp(p, qq, r, v, hpq.join(u1, u2));
                            let rhs = hpr.join(q.comp(p, qq, r, v, u1), q.comp(p, qq, r, v, u2));
                            rep.check(lhs == rhs, "join preservation (right argument)", || {
                                format!(
                                    "v = {}, u1 = {}, u2 = {}",
                                    q.show(Arrow::new(qq, r, v)),
                                    q.show(Arrow::new(p, qq, u1)),
                                    q.show(Arrow::new(p, qq, u2))
                                )
                            });
                        }
                    }
                }
                for u in hpq.elements() {
                    rep.check(
                        q.comp(p, qq, r, hqr.bottom(), u) == hpr.bottom(),
                        "join preservation (left argument)",
                        || format!("⊥ composed with u = {}", q.show(Arrow::new(p, qq, u))),
                    );
                    for v1 in hqr.elements() {
                        for v2 in hqr.elements() {
                            let lhs = q.comp(p, qq, r, hqr.join(v1, v2), u);
                            let rhs = hpr.join(q.comp(p, qq, r, v1, u), q.comp(p, qq, r, v2, u));
                            rep.check(lhs == rhs, "join preservation (left argument)", || {
                                format!(
                                    "v1 = {}, v2 = {}, u = {}",
                                    q.show(Arrow::new(qq, r, v1)),
                                    q.show(Arrow::new(qq, r, v2)),
                                    q.show(Arrow::new(p, qq, u))
                                )
                            });
                        }
                    }
                }
                for u in hpq.elements() {
                    for v in hqr.elements() {
                        for w in hpr.elements() {
                            let a = hpr.leq(q.comp(p, qq, r, v, u), w);
                            let b = hqr.leq(v, q.left_impl(p, qq, r, w, u));
                            let c = hpq.leq(u, q.right_impl(p, qq, r, v, w));
                            rep.check(a == b && b == c, "residuation adjointness", || {
                                format!(
                                    "u = {}, v = {}, w = {}",
                                    q.show(Arrow::new(p, qq, u)),
                                    q.show(Arrow::new(qq, r, v)),
                                    q.show(Arrow::new(p, r, w))
                                )
                            });
                        }
                    }
                }
            }
        }
    }
    rep.into_violations()
}

/// The opposite quantaloid: `hom^op(p,q) = hom(q,p)` and `v ∘^op u = u ∘ v`.
pub fn build_opposite(q: &Quantaloid) -> Quantaloid {
    let m = q.num_objects();
    let mut homs = Vec::with_capacity(m * m);
    for p in q.objects() {
        for r in q.objects() {
            homs.push(q.hom(r, p).clone());
        }
    }
    let name = match q.name().strip_suffix("^op") {
        Some(base) => base.to_string(),
        None => format!("{}^op", q.name()),
    };
    let ids = q.objects().map(|o| q.id(o)).collect();
    Quantaloid::from_fn(
        name,
        q.object_names().to_vec(),
        homs,
        ids,
        |p, qq, r, v, u| {
            // u: p→q in Q^op is u: q→p in Q; v: q→r in Q^op is v: r→q in Q.
            Ok(q.comp(r, qq, p, u, v))
        },
    )
    .expect("opposite of a well-formed quantaloid is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::quantale;

    #[test]
    fn boolean_composition_and_implication() {
        let two = quantale::boolean();
        let q = two.as_quantaloid();
        let o = Obj(0);
        let one = Arrow::new(o, o, 1);
        let zero = Arrow::new(o, o, 0);
        assert_eq!(q.compose(one, one).unwrap(), one);
        assert_eq!(q.implication(Side::Left, zero, zero).unwrap(), one);
        assert!(validate_quantaloid(q).is_empty());
    }

    #[test]
    fn lukasiewicz_left_implication() {
        let l3 = quantale::lukasiewicz(3).unwrap();
        let q = l3.as_quantaloid();
        let o = Obj(0);
        // 0 / h = ⋁{v | v & h ≤ 0} = h
        let r = q
            .implication(Side::Left, Arrow::new(o, o, 0), Arrow::new(o, o, 1))
            .unwrap();
        assert_eq!(r.elem, 1);
    }

    #[test]
    fn broken_table_reports_violations() {
        let l = FiniteLattice::chain(vec!["0".into(), "1".into()]).unwrap();
        let q = Quantaloid::from_fn(
            "bad",
            vec!["*".into()],
            vec![l],
            vec![1],
            |_, _, _, _, _| Ok(0),
        )
        .unwrap();
        let v = validate_quantaloid(&q);
        assert!(v.iter().any(|x| x.law == "unit"));
    }

    #[test]
    fn composition_type_mismatch() {
        let dq = crate::algebra::build_dq(&quantale::lukasiewicz(3).unwrap()).unwrap();
        let q = dq.quantaloid();
        let a = Arrow::new(Obj(0), Obj(1), 0);
        let b = Arrow::new(Obj(2), Obj(2), 0);
        assert!(matches!(q.compose(a, b), Err(Error::TypeMismatch(_))));
        assert!(q.implication(Side::Left, a, b).is_err());
    }

    #[test]
    fn opposite_is_involutive() {
        let two = quantale::boolean();
        assert_eq!(&build_opposite(two.as_quantaloid()), two.as_quantaloid());
        let dq = crate::algebra::build_dq(&quantale::lukasiewicz(3).unwrap()).unwrap();
        let q = dq.quantaloid();
        let op = build_opposite(q);
        assert_eq!(&build_opposite(&op), q.as_ref());
        for p in q.objects() {
            for r in q.objects() {
                assert_eq!(op.hom(p, r).len(), q.hom(r, p).len());
            }
        }
        assert!(validate_quantaloid(&op).is_empty());
    }
}
