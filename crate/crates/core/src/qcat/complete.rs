//! Suprema, infima, tensors, cotensors and completeness of Q-categories.

use super::category::QCategory;
use super::presheaf::{Kind, Presheaf, PresheafCat};
use crate::algebra::{Elem, Obj};
use crate::{Error, Result};

/// Finds `s` with `|s| = |μ|` and `𝕏(s,z) = ⋀_x 𝕏(x,z) ↙ μ(x)` for all `z`.
pub fn sup(x: &QCategory, mu: &Presheaf) -> Option<usize> {
    let q = x.quantaloid();
    let n = x.len();
    let target: Vec<Elem> = (0..n)
        .map(|z| {
            let tz = x.ty(z);
            q.hom(mu.ty, tz)
                .meet_all((0..n).map(|a| q.left_impl(x.ty(a), mu.ty, tz, x.h(a, z), mu.vals[a])))
        })
        .collect();
    x.of_type(mu.ty)
        .find(|&s| (0..n).all(|z| x.h(s, z) == target[z]))
}

/// Finds `s` with `|s| = |λ|` and `𝕏(z,s) = ⋀_x λ(x) ↘ 𝕏(z,x)` for all `z`.
pub fn inf(x: &QCategory, lam: &Presheaf) -> Option<usize> {
    let q = x.quantaloid();
    let n = x.len();
    let target: Vec<Elem> = (0..n)
        .map(|z| {
            let tz = x.ty(z);
            q.hom(tz, lam.ty)
                .meet_all((0..n).map(|a| q.right_impl(tz, lam.ty, x.ty(a), lam.vals[a], x.h(z, a))))
        })
        .collect();
    x.of_type(lam.ty)
        .find(|&s| (0..n).all(|z| x.h(z, s) == target[z]))
}

/// Tensor `u ⊗ a` for `u: |a| → r`: `𝕏(t,z) = 𝕏(a,z) ↙ u`.
pub fn tensor(x: &QCategory, u: Elem, r: Obj, a: usize) -> Option<usize> {
    let q = x.quantaloid();
    let ta = x.ty(a);
    x.of_type(r)
        .find(|&t| (0..x.len()).all(|z| x.h(t, z) == q.left_impl(ta, r, x.ty(z), x.h(a, z), u)))
}

/// Cotensor `v ⊲ a` for `v: r → |a|`: `𝕏(z,t) = v ↘ 𝕏(z,a)`.
pub fn cotensor(x: &QCategory, v: Elem, r: Obj, a: usize) -> Option<usize> {
    let q = x.quantaloid();
    let ta = x.ty(a);
    x.of_type(r)
        .find(|&t| (0..x.len()).all(|z| x.h(z, t) == q.right_impl(x.ty(z), r, ta, v, x.h(z, a))))
}

pub fn is_tensored(x: &QCategory) -> bool {
    let q = x.quantaloid();
    (0..x.len()).all(|a| {
        q.objects().all(|r| {
            q.hom(x.ty(a), r)
                .elements()
                .all(|u| tensor(x, u, r, a).is_some())
        })
    })
}

pub fn is_cotensored(x: &QCategory) -> bool {
    let q = x.quantaloid();
    (0..x.len()).all(|a| {
        q.objects().all(|r| {
            q.hom(r, x.ty(a))
                .elements()
                .all(|v| cotensor(x, v, r, a).is_some())
        })
    })
}

/// Least upper bound of `a` and `b` in the underlying preorder, if any.
pub fn underlying_join(x: &QCategory, a: usize, b: usize) -> Option<usize> {
    let ty = x.ty(a);
    if x.ty(b) != ty {
        return None;
    }
    let ub: Vec<usize> = x
        .of_type(ty)
        .filter(|&c| x.leq(a, c) && x.leq(b, c))
        .collect();
    ub.iter()
        .copied()
        .find(|&j| ub.iter().all(|&c| x.leq(j, c)))
}

/// A least element of `X_q`, if any.
pub fn underlying_bottom(x: &QCategory, ty: Obj) -> Option<usize> {
    let els: Vec<usize> = x.of_type(ty).collect();
    els.iter()
        .copied()
        .find(|&b| els.iter().all(|&c| x.leq(b, c)))
}

/// Every `X_q` has a least element and all binary joins; for finite
/// preorders that is all joins.
pub fn is_order_complete(x: &QCategory) -> bool {
    x.quantaloid().objects().all(|ty| {
        underlying_bottom(x, ty).is_some()
            && x.of_type(ty)
                .all(|a| x.of_type(ty).all(|b| underlying_join(x, a, b).is_some()))
    })
}

/// Completeness decided by a direct supremum search over `P𝕏`.
pub fn is_complete_direct(x: &QCategory, px: &PresheafCat) -> bool {
    px.items().iter().all(|m| sup(x, m).is_some())
}

/// Tensored, cotensored and order-complete.
pub fn is_complete_criterion(x: &QCategory) -> bool {
    is_tensored(x) && is_cotensored(x) && is_order_complete(x)
}

/// Both completeness verdicts; disagreement is an internal error.
pub fn is_complete(x: &QCategory, px: &PresheafCat) -> Result<bool> {
    if px.kind() != Kind::Presheaf {
        return Err(Error::TypeMismatch(
            "completeness needs the presheaf category".into(),
        ));
    }
    let direct = is_complete_direct(x, px);
    let crit = is_complete_criterion(x);
    if direct != crit {
        return Err(Error::Inconsistent(format!(
            "direct completeness {direct} but tensor/cotensor/order criterion {crit}"
        )));
    }
    Ok(direct)
}

/// The map `sup: P𝕏 → 𝕏` of a complete category.
pub fn sup_map(x: &QCategory, px: &PresheafCat) -> Result<Vec<usize>> {
    px.items()
        .iter()
        .map(|m| {
            sup(x, m)
                .ok_or_else(|| Error::NotComplete(format!("{} has no supremum", px.display(m))))
        })
        .collect()
}

/// `sup Φ = ⋁_μ Φ(μ) ∘ μ` in `P𝕏`, for a presheaf `Φ` on `P𝕏`.
pub fn presheaf_sup_formula(px: &PresheafCat, big_phi: &Presheaf) -> Presheaf {
    let q = px.quantaloid();
    let types = px.base().types();
    let ty = big_phi.ty;
    let vals = types
        .iter()
        .enumerate()
        .map(|(x, &tx)| {
            q.hom(tx, ty).join_all(
                px.items()
                    .iter()
                    .enumerate()
                    .map(|(i, m)| q.comp(tx, m.ty, ty, big_phi.vals[i], m.vals[x])),
            )
        })
        .collect();
    Presheaf::new(ty, vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{boolean, build_dq, lukasiewicz, Quantaloid};
    use crate::qcat::presheaf::DEFAULT_CAP;
    use crate::qcat::relation::{QRelation, TypedSet};
    use std::sync::Arc;

    fn two() -> Arc<Quantaloid> {
        Arc::new(boolean().into_quantaloid())
    }

    #[test]
    fn discrete_pair_is_not_complete() {
        let d = QCategory::discrete(two(), TypedSet::anonymous(vec![Obj(0); 2]));
        let pd = PresheafCat::presheaves(&d, DEFAULT_CAP).unwrap();
        assert!(!is_complete(&d, &pd).unwrap());
        let top = Presheaf::new(Obj(0), vec![1, 1]);
        assert_eq!(sup(&d, &top), None);
    }

    #[test]
    fn presheaf_categories_are_complete() {
        let t = vec![Obj(0); 2];
        let hom = QRelation::from_fn(&t, &t, |a, b| (a <= b) as Elem);
        let c = QCategory::new(two(), TypedSet::anonymous(t), hom).unwrap();
        let px = PresheafCat::presheaves(&c, DEFAULT_CAP).unwrap();
        let ppx = PresheafCat::presheaves(px.cat(), DEFAULT_CAP).unwrap();
        assert!(is_complete(px.cat(), &ppx).unwrap());
        // sup Φ = union over 2
        for big in ppx.items() {
            let s = sup(px.cat(), big).unwrap();
            assert_eq!(*px.item(s), presheaf_sup_formula(&px, big));
        }
    }

    #[test]
    fn tensors_in_presheaf_category() {
        let dq = build_dq(&lukasiewicz(3).unwrap()).unwrap();
        let q = dq.quantaloid().clone();
        let x = QCategory::discrete(q.clone(), TypedSet::anonymous(vec![Obj(1), Obj(2)]));
        let px = PresheafCat::presheaves(&x, DEFAULT_CAP).unwrap();
        for m in 0..px.len() {
            let ty = px.item(m).ty;
            for r in q.objects() {
                for u in q.hom(ty, r).elements() {
                    let t = tensor(px.cat(), u, r, m).unwrap();
                    assert_eq!(*px.item(t), px.tensor(u, r, m));
                }
                for v in q.hom(r, ty).elements() {
                    let t = cotensor(px.cat(), v, r, m).unwrap();
                    assert_eq!(*px.item(t), px.cotensor(v, r, m));
                }
            }
        }
        assert!(is_complete_criterion(px.cat()));
    }
}
