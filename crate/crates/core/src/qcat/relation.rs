//! Typed sets and Q-relations with the matrix composition and implications.

use crate::algebra::{Elem, Obj, Quantaloid};
use crate::{Error, Result};

/// A finite set whose elements carry a type (an object of the quantaloid).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypedSet {
    names: Vec<String>,
    types: Vec<Obj>,
}

impl TypedSet {
    pub fn new(names: Vec<String>, types: Vec<Obj>) -> Result<Self> {
        if names.len() != types.len() {
            return Err(Error::TypeMismatch("one type per element required".into()));
        }
        Ok(TypedSet { names, types })
    }

    /// Elements named `x0, x1, …` with the given types.
    pub fn anonymous(types: Vec<Obj>) -> Self {
        let names = (0..types.len()).map(|i| format!("x{i}")).collect();
        TypedSet { names, types }
    }

    pub fn check_types(&self, q: &Quantaloid) -> Result<()> {
        for (n, t) in self.names.iter().zip(&self.types) {
            if t.idx() >= q.num_objects() {
                return Err(Error::TypeMismatch(format!(
                    "{n} has no valid type in {}",
                    q.name()
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn types(&self) -> &[Obj] {
        &self.types
    }

    #[inline]
    pub fn ty(&self, i: usize) -> Obj {
        self.types[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// A Q-relation `φ: X ⇸ Y`: a matrix with `φ(x,y) ∈ hom(|x|,|y|)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QRelation {
    dom: Vec<Obj>,
    cod: Vec<Obj>,
    data: Vec<Elem>,
}

impl QRelation {
    pub fn from_fn(dom: &[Obj], cod: &[Obj], mut f: impl FnMut(usize, usize) -> Elem) -> Self {
        let mut data = Vec::with_capacity(dom.len() * cod.len());
        for x in 0..dom.len() {
            for y in 0..cod.len() {
                data.push(f(x, y));
            }
        }
        QRelation {
            dom: dom.to_vec(),
            cod: cod.to_vec(),
            data,
        }
    }

    /// Builds from raw row-major entries, checking each against its hom-set.
    pub fn from_entries(q: &Quantaloid, dom: &[Obj], cod: &[Obj], data: Vec<Elem>) -> Result<Self> {
        if data.len() != dom.len() * cod.len() {
            return Err(Error::TypeMismatch(
                "relation has the wrong number of entries".into(),
            ));
        }
        let r = QRelation {
            dom: dom.to_vec(),
            cod: cod.to_vec(),
            data,
        };
        r.check(q)?;
        Ok(r)
    }

    pub fn check(&self, q: &Quantaloid) -> Result<()> {
        for x in 0..self.rows() {
            for y in 0..self.cols() {
                let e = self.get(x, y);
                if !q.hom(self.dom[x], self.cod[y]).contains(e) {
                    return Err(Error::NotAnElement {
                        elem: e as usize,
                        context: format!(
                            "hom({},{}) at entry ({x},{y})",
                            q.object_name(self.dom[x]),
                            q.object_name(self.cod[y])
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn bottom(q: &Quantaloid, dom: &[Obj], cod: &[Obj]) -> Self {
        Self::from_fn(dom, cod, |x, y| q.bottom(dom[x], cod[y]))
    }

    pub fn top(q: &Quantaloid, dom: &[Obj], cod: &[Obj]) -> Self {
        Self::from_fn(dom, cod, |x, y| q.top(dom[x], cod[y]))
    }

    /// `id_X(x,y) = 1_{|x|}` if `x = y`, else `⊥`.
    pub fn identity(q: &Quantaloid, types: &[Obj]) -> Self {
        Self::from_fn(types, types, |x, y| {
            if x == y {
                q.id(types[x])
            } else {
                q.bottom(types[x], types[y])
            }
        })
    }

    pub fn dom(&self) -> &[Obj] {
        &self.dom
    }

    pub fn cod(&self) -> &[Obj] {
        &self.cod
    }

    pub fn rows(&self) -> usize {
        self.dom.len()
    }

    pub fn cols(&self) -> usize {
        self.cod.len()
    }

    pub fn entries(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Elem {
        self.data[x * self.cod.len() + y]
    }

    pub fn set(&mut self, x: usize, y: usize, e: Elem) {
        let c = self.cod.len();
        self.data[x * c + y] = e;
    }

    /// Column `φ(-, y)` as a presheaf value vector.
    pub fn column(&self, y: usize) -> Vec<Elem> {
        (0..self.rows()).map(|x| self.get(x, y)).collect()
    }

    /// Row `φ(x, -)`.
    pub fn row(&self, x: usize) -> Vec<Elem> {
        (0..self.cols()).map(|y| self.get(x, y)).collect()
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(Error::TypeMismatch(
                "relations have different domains or codomains".into(),
            ));
        }
        Ok(())
    }

    /// `(ψ ∘ φ)(x,z) = ⋁_y ψ(y,z) ∘ φ(x,y)` for `φ: X ⇸ Y`, `ψ: Y ⇸ Z`.
    pub fn compose(q: &Quantaloid, psi: &Self, phi: &Self) -> Result<Self> {
        if phi.cod != psi.dom {
            return Err(Error::TypeMismatch(
                "composite of non-adjacent relations".into(),
            ));
        }
        let (dx, dy, dz) = (&phi.dom, &phi.cod, &psi.cod);
        Ok(Self::from_fn(dx, dz, |x, z| {
            let (p, r) = (dx[x], dz[z]);
            q.hom(p, r)
                .join_all((0..dy.len()).map(|y| q.comp(p, dy[y], r, psi.get(y, z), phi.get(x, y))))
        }))
    }

    /// `(ξ ↙ φ)(y,z) = ⋀_x ξ(x,z) ↙ φ(x,y)` for `ξ: X ⇸ Z`, `φ: X ⇸ Y`.
    pub fn left_impl(q: &Quantaloid, xi: &Self, phi: &Self) -> Result<Self> {
        if xi.dom != phi.dom {
            return Err(Error::TypeMismatch(
                "left implication needs a common domain".into(),
            ));
        }
        let (dx, dy, dz) = (&phi.dom, &phi.cod, &xi.cod);
        Ok(Self::from_fn(dy, dz, |y, z| {
            let (qq, r) = (dy[y], dz[z]);
            q.hom(qq, r).meet_all(
                (0..dx.len()).map(|x| q.left_impl(dx[x], qq, r, xi.get(x, z), phi.get(x, y))),
            )
        }))
    }

    /// `(ψ ↘ ξ)(x,y) = ⋀_z ψ(y,z) ↘ ξ(x,z)` for `ψ: Y ⇸ Z`, `ξ: X ⇸ Z`.
    pub fn right_impl(q: &Quantaloid, psi: &Self, xi: &Self) -> Result<Self> {
        if psi.cod != xi.cod {
            return Err(Error::TypeMismatch(
                "right implication needs a common codomain".into(),
            ));
        }
        let (dx, dy, dz) = (&xi.dom, &psi.dom, &psi.cod);
        Ok(Self::from_fn(dx, dy, |x, y| {
            let (p, qq) = (dx[x], dy[y]);
            q.hom(p, qq).meet_all(
                (0..dz.len()).map(|z| q.right_impl(p, qq, dz[z], psi.get(y, z), xi.get(x, z))),
            )
        }))
    }

    pub fn leq(&self, q: &Quantaloid, other: &Self) -> Result<bool> {
        self.same_shape(other)?;
        Ok(self.leq_unchecked(q, other))
    }

    pub(crate) fn leq_unchecked(&self, q: &Quantaloid, other: &Self) -> bool {
        (0..self.rows()).all(|x| {
            (0..self.cols()).all(|y| {
                q.hom(self.dom[x], self.cod[y])
                    .leq(self.get(x, y), other.get(x, y))
            })
        })
    }

    /// First entry where `self ≤ other` fails.
    pub fn leq_witness(&self, q: &Quantaloid, other: &Self) -> Option<(usize, usize)> {
        for x in 0..self.rows() {
            for y in 0..self.cols() {
                if !q
                    .hom(self.dom[x], self.cod[y])
                    .leq(self.get(x, y), other.get(x, y))
                {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn join(&self, q: &Quantaloid, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self::from_fn(&self.dom, &self.cod, |x, y| {
            q.hom(self.dom[x], self.cod[y])
                .join(self.get(x, y), other.get(x, y))
        }))
    }

    pub fn meet(&self, q: &Quantaloid, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self::from_fn(&self.dom, &self.cod, |x, y| {
            q.hom(self.dom[x], self.cod[y])
                .meet(self.get(x, y), other.get(x, y))
        }))
    }
}

/// Every relation `X ⇸ Y` over `q`, in lexicographic order of entries.
pub fn all_relations(q: &Quantaloid, dom: &[Obj], cod: &[Obj]) -> Vec<QRelation> {
    let slots: Vec<usize> = (0..dom.len() * cod.len())
        .map(|k| q.hom(dom[k / cod.len()], cod[k % cod.len()]).len())
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![0 as Elem; slots.len()];
    loop {
        out.push(QRelation {
            dom: dom.to_vec(),
            cod: cod.to_vec(),
            data: cur.clone(),
        });
        let mut i = slots.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if (cur[i] as usize) < slots[i] {
                break;
            }
            cur[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{boolean, build_dq, lukasiewicz, validate_quantaloid};
    use proptest::prelude::*;

    fn bool_rel(rows: usize, cols: usize, bits: u32) -> QRelation {
        let o = [Obj(0)];
        QRelation::from_fn(&vec![o[0]; rows], &vec![o[0]; cols], |x, y| {
            ((bits >> (x * cols + y)) & 1) as Elem
        })
    }

    proptest! {
        #[test]
        fn boolean_composition_is_relational(a in 0u32..16, b in 0u32..16) {
            let two = boolean();
            let q = two.as_quantaloid();
            let (phi, psi) = (bool_rel(2, 2, a), bool_rel(2, 2, b));
            let c = QRelation::compose(q, &psi, &phi).unwrap();
            for x in 0..2 {
                for z in 0..2 {
                    let set = (0..2).any(|y| phi.get(x, y) == 1 && psi.get(y, z) == 1);
                    prop_assert_eq!(c.get(x, z) == 1, set);
                }
            }
        }

        #[test]
        fn boolean_left_implication_is_universal(a in 0u32..16, b in 0u32..16) {
            let two = boolean();
            let q = two.as_quantaloid();
            let (xi, phi) = (bool_rel(2, 2, a), bool_rel(2, 2, b));
            let r = QRelation::left_impl(q, &xi, &phi).unwrap();
            for y in 0..2 {
                for z in 0..2 {
                    let forall = (0..2).all(|x| phi.get(x, y) == 0 || xi.get(x, z) == 1);
                    prop_assert_eq!(r.get(y, z) == 1, forall);
                }
            }
        }
    }

    #[test]
    fn identity_shape() {
        let dq = build_dq(&lukasiewicz(3).unwrap()).unwrap();
        let q = dq.quantaloid();
        let t = [Obj(1), Obj(2)];
        let id = QRelation::identity(q, &t);
        assert_eq!(id.get(0, 0), q.id(Obj(1)));
        assert_eq!(id.get(1, 1), q.id(Obj(2)));
        assert_eq!(id.get(0, 1), q.bottom(Obj(1), Obj(2)));
    }

    /// Relations on fixed typed sets form a quantaloid; check its laws on a
    /// small exhaustive family by building the table explicitly.
    #[test]
    fn relations_between_typed_sets_satisfy_quantaloid_laws() {
        let dq = build_dq(&lukasiewicz(3).unwrap()).unwrap();
        let q = dq.quantaloid();
        let sets: Vec<Vec<Obj>> = vec![vec![Obj(1)], vec![Obj(2)]];
        let homs: Vec<Vec<QRelation>> = sets
            .iter()
            .flat_map(|a| sets.iter().map(move |b| (a, b)))
            .map(|(a, b)| all_relations(q, a, b))
            .collect();
        let m = sets.len();
        let lattices: Vec<_> = homs
            .iter()
            .map(|rs| {
                let names = (0..rs.len()).map(|i| i.to_string()).collect();
                let leq = rs
                    .iter()
                    .flat_map(|a| rs.iter().map(move |b| (a, b)))
                    .map(|(a, b)| a.leq_unchecked(q, b))
                    .collect();
                crate::algebra::FiniteLattice::from_order(names, leq).unwrap()
            })
            .collect();
        let ids = (0..m)
            .map(|i| {
                let id = QRelation::identity(q, &sets[i]);
                homs[i * m + i].iter().position(|r| *r == id).unwrap() as Elem
            })
            .collect();
        let rq = Quantaloid::from_fn(
            "rel",
            vec!["A".into(), "B".into()],
            lattices,
            ids,
            |p, qq, r, v, u| {
                let (p, qq, r) = (p.idx(), qq.idx(), r.idx());
                let c = QRelation::compose(
                    q,
                    &homs[qq * m + r][v as usize],
                    &homs[p * m + qq][u as usize],
                )
                .unwrap();
                Ok(homs[p * m + r].iter().position(|x| *x == c).unwrap() as Elem)
            },
        )
        .unwrap();
        assert!(validate_quantaloid(&rq).is_empty());
        // The matrix implications agree with the brute-force residuals.
        for p in 0..m {
            for qq in 0..m {
                for r in 0..m {
                    for (ui, u) in homs[p * m + qq].iter().enumerate() {
                        for (wi, w) in homs[p * m + r].iter().enumerate() {
                            let li = QRelation::left_impl(q, w, u).unwrap();
                            let bi = rq.left_impl(
                                Obj(p as u16),
                                Obj(qq as u16),
                                Obj(r as u16),
                                wi as Elem,
                                ui as Elem,
                            );
                            assert_eq!(homs[qq * m + r][bi as usize], li);
                        }
                    }
                    for (vi, v) in homs[qq * m + r].iter().enumerate() {
                        for (wi, w) in homs[p * m + r].iter().enumerate() {
                            let ri = QRelation::right_impl(q, v, w).unwrap();
                            let bi = rq.right_impl(
                                Obj(p as u16),
                                Obj(qq as u16),
                                Obj(r as u16),
                                vi as Elem,
                                wi as Elem,
                            );
                            assert_eq!(homs[p * m + qq][bi as usize], ri);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn mismatched_shapes_are_rejected() {
        let two = boolean();
        let q = two.as_quantaloid();
        let a = bool_rel(2, 2, 0);
        let b = bool_rel(1, 2, 0);
        assert!(QRelation::compose(q, &a, &b).is_ok());
        assert!(QRelation::compose(q, &b, &a).is_err());
        assert!(a.leq(q, &b).is_err());
    }
}
