//! The quantaloid `DQ` of a divisible quantale.

use std::sync::Arc;

use super::lattice::{Elem, FiniteLattice};
use super::quantale::Quantale;
use super::quantaloid::{Obj, Quantaloid};
use crate::report::{Validation, Violation};
use crate::{Error, Result};

/// `DQ` together with the translation between local hom indices and
/// elements of the base quantale.
///
/// Objects of `DQ` are the elements of `K` (same indices, same names);
/// `hom(x, y)` is the down-set of `x ∧ y`, so its elements are a subset of
/// `K` re-indexed locally.
#[derive(Debug, Clone)]
pub struct Dq {
    base: Quantale,
    quantaloid: Arc<Quantaloid>,
    to_k: Vec<Vec<Elem>>,
    from_k: Vec<Vec<Option<Elem>>>,
}

/// Builds `DQ` for a divisible quantale `K`: `hom(x,y) = {u ≤ x∧y}`,
/// `v ∘ u = v & (y \ u)`, identity on `x` is `x`.
pub fn build_dq(k: &Quantale) -> Result<Dq> {
    k.require_divisible()?;
    let n = k.len();
    let kl = k.lattice();
    let mut homs = Vec::with_capacity(n * n);
    let mut to_k = Vec::with_capacity(n * n);
    let mut from_k = Vec::with_capacity(n * n);
    for x in k.elements() {
        for y in k.elements() {
            let m = kl.meet(x, y);
            let members: Vec<Elem> = k.elements().filter(|&u| kl.leq(u, m)).collect();
            let names = members.iter().map(|&u| kl.name(u).to_string()).collect();
            let leq = members
                .iter()
                .flat_map(|&a| members.iter().map(move |&b| (a, b)))
                .map(|(a, b)| kl.leq(a, b))
                .collect();
            homs.push(FiniteLattice::from_order(names, leq)?);
            let mut back = vec![None; n];
            for (i, &u) in members.iter().enumerate() {
                back[u as usize] = Some(i as Elem);
            }
            to_k.push(members);
            from_k.push(back);
        }
    }
    let ids = k
        .elements()
        .map(|x| from_k[x as usize * n + x as usize][x as usize].expect("x ≤ x∧x"))
        .collect();
    let objects = kl.names().to_vec();
    let q = Quantaloid::from_fn(
        format!("D({})", k.name()),
        objects,
        homs,
        ids,
        |p, q, r, v, u| {
            let (p, q, r) = (p.idx(), q.idx(), r.idx());
            let vk = to_k[q * n + r][v as usize];
            let uk = to_k[p * n + q][u as usize];
            let w = k.mul(vk, k.under(q as Elem, uk));
            from_k[p * n + r][w as usize].ok_or_else(|| {
                Error::Inconsistent(format!(
                    "composite {} lies outside hom({},{})",
                    kl.name(w),
                    kl.name(p as Elem),
                    kl.name(r as Elem)
                ))
            })
        },
    )?;
    Ok(Dq {
        base: k.clone(),
        quantaloid: Arc::new(q),
        to_k,
        from_k,
    })
}

impl Dq {
    pub fn base(&self) -> &Quantale {
        &self.base
    }

    pub fn quantaloid(&self) -> &Arc<Quantaloid> {
        &self.quantaloid
    }

    /// The object of `DQ` corresponding to `k ∈ K`.
    pub fn obj(&self, k: Elem) -> Obj {
        Obj(k)
    }

    fn slot(&self, x: Obj, y: Obj) -> usize {
        x.idx() * self.base.len() + y.idx()
    }

    /// The element of `K` underlying a local arrow of `hom(x,y)`.
    pub fn to_k(&self, x: Obj, y: Obj, e: Elem) -> Elem {
        self.to_k[self.slot(x, y)][e as usize]
    }

    /// The local index of `k` in `hom(x,y)`, if `k ≤ x∧y`.
    pub fn from_k(&self, x: Obj, y: Obj, k: Elem) -> Option<Elem> {
        self.from_k[self.slot(x, y)][k as usize]
    }

    /// Compares the brute-force implications against
    /// `w ↙ u = y∧z∧(w/(y\u))` and `v ↘ w = x∧y∧((v/y)\w)` on every triple,
    /// and the composition against its second form `(v/y) & u`.
    pub fn check_closed_forms(&self) -> Vec<Violation> {
        let k = &self.base;
        let q = &*self.quantaloid;
        let mut rep = Validation::new();
        let objs: Vec<Obj> = q.objects().collect();
        for &x in &objs {
            for &y in &objs {
                for &z in &objs {
                    let (kx, ky, kz) = (x.0, y.0, z.0);
                    for u in q.hom(x, y).elements() {
                        let uk = self.to_k(x, y, u);
                        for v in q.hom(y, z).elements() {
                            let vk = self.to_k(y, z, v);
                            let c = self.to_k(x, z, q.comp(x, y, z, v, u));
                            rep.check(
                                c == k.mul(k.over(vk, ky), uk),
                                "composition second form",
                                || {
                                    format!(
                                        "x={} y={} z={} u={} v={}",
                                        k.elem_name(kx),
                                        k.elem_name(ky),
                                        k.elem_name(kz),
                                        k.elem_name(uk),
                                        k.elem_name(vk)
                                    )
                                },
                            );
                        }
                        for w in q.hom(x, z).elements() {
                            let wk = self.to_k(x, z, w);
                            let brute = self.to_k(y, z, q.left_impl(x, y, z, w, u));
                            let closed = k.meet(k.meet(ky, kz), k.over(wk, k.under(ky, uk)));
                            rep.check(brute == closed, "left implication closed form", || {
                                format!(
                                    "x={} y={} z={} w={} u={}: brute {} vs closed {}",
                                    k.elem_name(kx),
                                    k.elem_name(ky),
                                    k.elem_name(kz),
                                    k.elem_name(wk),
                                    k.elem_name(uk),
                                    k.elem_name(brute),
                                    k.elem_name(closed)
                                )
                            });
                        }
                    }
                    for v in q.hom(y, z).elements() {
                        let vk = self.to_k(y, z, v);
                        for w in q.hom(x, z).elements() {
                            let wk = self.to_k(x, z, w);
                            let brute = self.to_k(x, y, q.right_impl(x, y, z, v, w));
                            let closed = k.meet(k.meet(kx, ky), k.under(k.over(vk, ky), wk));
                            rep.check(brute == closed, "right implication closed form", || {
                                format!(
                                    "x={} y={} z={} v={} w={}: brute {} vs closed {}",
                                    k.elem_name(kx),
                                    k.elem_name(ky),
                                    k.elem_name(kz),
                                    k.elem_name(vk),
                                    k.elem_name(wk),
                                    k.elem_name(brute),
                                    k.elem_name(closed)
                                )
                            });
                        }
                    }
                }
            }
        }
        rep.into_violations()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::quantale::{boolean, drastic, godel, lukasiewicz};
    use crate::algebra::quantaloid::{validate_quantaloid, Arrow};

    #[test]
    fn d2_shape() {
        let dq = build_dq(&boolean()).unwrap();
        let q = dq.quantaloid();
        assert_eq!(q.hom(Obj(1), Obj(1)).len(), 2);
        for (a, b) in [(0, 0), (0, 1), (1, 0)] {
            assert_eq!(q.hom(Obj(a), Obj(b)).len(), 1);
            assert_eq!(q.comp(Obj(a), Obj(b), Obj(a), 0, 0), 0);
        }
    }

    #[test]
    fn dl3_sizes_identities_and_composite() {
        let dq = build_dq(&lukasiewicz(3).unwrap()).unwrap();
        let q = dq.quantaloid();
        let (h, one) = (Obj(1), Obj(2));
        assert_eq!(q.hom(h, h).len(), 2);
        for x in q.objects() {
            assert_eq!(dq.to_k(x, x, q.id(x)), x.0);
        }
        // v = h: h → 1, u = h: 1 → h, v ∘ u = h & (h \ h) = h
        let u = Arrow::new(one, h, dq.from_k(one, h, 1).unwrap());
        let v = Arrow::new(h, one, dq.from_k(h, one, 1).unwrap());
        let c = q.compose(v, u).unwrap();
        assert_eq!(dq.to_k(one, one, c.elem), 1);
        assert!(validate_quantaloid(q).is_empty());
    }

    #[test]
    fn closed_forms_hold() {
        for k in [lukasiewicz(3).unwrap(), godel(4).unwrap(), boolean()] {
            let dq = build_dq(&k).unwrap();
            assert!(dq.check_closed_forms().is_empty(), "{}", k.name());
        }
    }

    #[test]
    fn non_divisible_is_rejected() {
        assert!(matches!(
            build_dq(&drastic(4).unwrap()),
            Err(Error::NotDivisible(_))
        ));
    }
}
