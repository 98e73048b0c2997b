//! Discrete reduction, specialization categories and Alexandrov spaces.

use std::sync::Arc;

use super::continuity::functor_d;
use super::space::ClosureSpace;
use crate::algebra::Elem;
use crate::qcat::presheaf::{absorb, Kind, Presheaf, PresheafCat};
use crate::qcat::{QCategory, QRelation};
use crate::{Error, Result};

/// `(𝕏₀, c₀)` with `c₀ μ = c(μ∘𝕏)`.
pub fn underlying_discrete(s: &ClosureSpace, cap: usize) -> Result<ClosureSpace> {
    let x = s.base();
    let x0 = QCategory::discrete(x.quantaloid().clone(), x.set().clone());
    let p0 = Arc::new(PresheafCat::presheaves(&x0, cap)?);
    let px = s.px();
    let table = p0
        .items()
        .iter()
        .map(|m| {
            let absorbed = px.expect_index(&absorb(x, Kind::Presheaf, m))?;
            p0.expect_index(px.item(s.apply(absorbed)))
        })
        .collect::<Result<Vec<_>>>()?;
    ClosureSpace::from_table(format!("{}_0", s.name()), p0, table)
}

/// The closed presheaves of a space, as presheaves.
pub fn closed_presheaves(s: &ClosureSpace) -> Vec<Presheaf> {
    s.closed_indices()
        .into_iter()
        .map(|m| s.px().item(m).clone())
        .collect()
}

/// `⋀_{μ ∈ C} μ(y) ↘ μ(x)` over a family of presheaves on `types`.
pub fn meet_formula(s: &ClosureSpace, family: &[Presheaf]) -> QRelation {
    let q = s.base().quantaloid();
    let t = s.base().types();
    QRelation::from_fn(t, t, |x, y| {
        q.hom(t[x], t[y]).meet_all(
            family
                .iter()
                .map(|m| q.right_impl(t[x], t[y], m.ty, m.vals[y], m.vals[x])),
        )
    })
}

/// `t̃c: X ⇸ P𝕏`, `t̃c(x, μ) = (cμ)(x)`.
pub fn transpose_of_operator(s: &ClosureSpace) -> QRelation {
    let px = s.px();
    let cod: Vec<_> = px.items().iter().map(|m| m.ty).collect();
    QRelation::from_fn(s.base().types(), &cod, |x, m| px.item(s.apply(m)).vals[x])
}

/// The specialization category `(𝕏₀, t̃c ↘ t̃c)`. Computed as the implication
/// of the transpose, by the meet over closed presheaves, and through the
/// discrete reduction; all three must agree.
pub fn specialization(s: &ClosureSpace, cap: usize) -> Result<QCategory> {
    let q = s.base().quantaloid();
    let tc = transpose_of_operator(s);
    let by_impl = QRelation::right_impl(q, &tc, &tc)?;
    let by_meet = meet_formula(s, &closed_presheaves(s));
    if by_impl != by_meet {
        return Err(Error::Inconsistent(
            "specialization: implication and meet formula differ".into(),
        ));
    }
    if !s.has_discrete_base() {
        let s0 = underlying_discrete(s, cap)?;
        let via0 = meet_formula(&s0, &closed_presheaves(&s0));
        if via0 != by_meet {
            return Err(Error::Inconsistent(
                "specialization differs from that of the discrete reduction".into(),
            ));
        }
    }
    QCategory::new(q.clone(), s.base().set().clone(), by_meet)
}

/// `(𝕏₀, φ ↘ φ)` for any relation `φ` out of `𝕏₀`.
pub fn specialization_of_relation(x: &QCategory, phi: &QRelation) -> Result<QCategory> {
    let rel = QRelation::right_impl(x.quantaloid(), phi, phi)?;
    QCategory::new(x.quantaloid().clone(), x.set().clone(), rel)
}

/// `DS(𝕏,c)`, on the same presheaf category as `s` (discrete base required).
pub fn ds(s: &ClosureSpace, cap: usize) -> Result<ClosureSpace> {
    require_discrete(s)?;
    let d = functor_d(&specialization(s, cap)?, cap)?;
    let table = d
        .table()
        .iter()
        .map(|&m| s.px().expect_index(d.px().item(m)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClosureSpace::new_unchecked("DS", s.px().clone(), table))
}

fn require_discrete(s: &ClosureSpace) -> Result<()> {
    if s.has_discrete_base() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "{} does not have a discrete base",
            s.name()
        )))
    }
}

/// Closed presheaves closed under `u∘μ`, `v↘μ`, and all joins and meets per
/// type (including the empty ones).
pub fn alexandrov_closure_criterion(s: &ClosureSpace) -> Result<bool> {
    let px = s.px();
    let q = px.quantaloid();
    let closed = s.closed_indices();
    for t in q.objects() {
        if !s.is_closed(px.pointwise_bottom(t)) || !s.is_closed(px.pointwise_top(t)) {
            return Ok(false);
        }
    }
    for &m in &closed {
        let ty = px.item(m).ty;
        for r in q.objects() {
            for u in q.hom(ty, r).elements() {
                if !s.is_closed(px.expect_index(&px.tensor(u, r, m))?) {
                    return Ok(false);
                }
            }
            for v in q.hom(r, ty).elements() {
                if !s.is_closed(px.expect_index(&px.cotensor(v, r, m))?) {
                    return Ok(false);
                }
            }
        }
        for &o in &closed {
            if px.item(o).ty == ty && (!s.is_closed(px.join(m, o)?) || !s.is_closed(px.meet(m, o)?))
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Alexandrov by closure properties and by `c = DS(c)`; they must agree.
/// `DS(c) ≤ c` is asserted along the way.
pub fn is_alexandrov(s: &ClosureSpace, cap: usize) -> Result<bool> {
    require_discrete(s)?;
    let by_closure = alexandrov_closure_criterion(s)?;
    let dsc = ds(s, cap)?;
    if !dsc.op_leq(s) {
        return Err(Error::Inconsistent(format!(
            "DS(c) is not below c on {}",
            s.name()
        )));
    }
    let fixed = dsc.table() == s.table();
    if by_closure != fixed {
        return Err(Error::Inconsistent(format!(
            "Alexandrov criteria disagree on {} (closure {by_closure}, DS fixed point {fixed})",
            s.name()
        )));
    }
    Ok(fixed)
}

/// Over `2`: `x ≤ y` iff `x ∈ c{y}`.
pub fn classical_specialization(s: &ClosureSpace) -> Result<Vec<Vec<bool>>> {
    let px = s.px();
    let n = s.base().len();
    (0..n)
        .map(|y| {
            let vals: Vec<Elem> = (0..n).map(|i| (i == y) as Elem).collect();
            let single = px.expect_index(&Presheaf::new(s.base().ty(y), vals))?;
            let cy = px.item(s.apply(single));
            Ok((0..n).map(|x| cy.vals[x] == 1).collect())
        })
        .collect::<Result<Vec<Vec<bool>>>>()
        .map(|cols| {
            (0..n)
                .map(|x| (0..n).map(|y| cols[y][x]).collect())
                .collect()
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{boolean, build_dq, lukasiewicz, Obj, Quantaloid};
    use crate::closure::space::{all_closure_spaces, from_closed_system, Mode};
    use crate::qcat::{TypedSet, DEFAULT_CAP};

    fn two() -> Arc<Quantaloid> {
        Arc::new(boolean().into_quantaloid())
    }

    fn dpx(n: usize) -> Arc<PresheafCat> {
        let x = QCategory::discrete(two(), TypedSet::anonymous(vec![Obj(0); n]));
        Arc::new(PresheafCat::presheaves(&x, DEFAULT_CAP).unwrap())
    }

    fn s2() -> ClosureSpace {
        let px = dpx(2);
        let a = px.index_of(&Presheaf::new(Obj(0), vec![1, 0])).unwrap();
        let ab = px.index_of(&Presheaf::new(Obj(0), vec![1, 1])).unwrap();
        from_closed_system(px, &[a, ab], Mode::Exact).unwrap()
    }

    #[test]
    fn s2_specialization() {
        let sp = specialization(&s2(), DEFAULT_CAP).unwrap();
        assert!(sp.leq(0, 1) && !sp.leq(1, 0));
        assert!(!is_alexandrov(&s2(), DEFAULT_CAP).unwrap());
        let pt = ClosureSpace::indiscrete(dpx(1));
        assert!(!is_alexandrov(&pt, DEFAULT_CAP).unwrap());
        let disc = ClosureSpace::discrete(dpx(2));
        let sp = specialization(&disc, DEFAULT_CAP).unwrap();
        assert!(!sp.leq(0, 1) && !sp.leq(1, 0));
    }

    #[test]
    fn specialization_is_classical_on_three_points() {
        for s in all_closure_spaces(&dpx(3), 1000).unwrap() {
            let sp = specialization(&s, DEFAULT_CAP).unwrap();
            let cl = classical_specialization(&s).unwrap();
            for x in 0..3 {
                for y in 0..3 {
                    assert_eq!(sp.leq(x, y), cl[x][y]);
                }
            }
            is_alexandrov(&s, DEFAULT_CAP).unwrap();
        }
    }

    #[test]
    fn discrete_reduction_of_chain() {
        let t = vec![Obj(0); 2];
        let hom = QRelation::from_fn(&t, &t, |a, b| (a <= b) as Elem);
        let chain = QCategory::new(two(), TypedSet::anonymous(t), hom).unwrap();
        let px = Arc::new(PresheafCat::presheaves(&chain, DEFAULT_CAP).unwrap());
        let s = ClosureSpace::discrete(px);
        let s0 = underlying_discrete(&s, DEFAULT_CAP).unwrap();
        let b = s0
            .px()
            .index_of(&Presheaf::new(Obj(0), vec![0, 1]))
            .unwrap();
        assert_eq!(s0.px().item(s0.apply(b)).vals, vec![1, 1]);
        assert_eq!(closed_presheaves(&s), closed_presheaves(&s0));
        // S∘D = id
        let d = functor_d(&chain, DEFAULT_CAP).unwrap();
        assert_eq!(specialization(&d, DEFAULT_CAP).unwrap(), chain);
        assert!(is_alexandrov(&d, DEFAULT_CAP).unwrap());
        // the specialization of the non-discrete space routes through c0
        assert_eq!(specialization(&s, DEFAULT_CAP).unwrap(), chain);
    }

    #[test]
    fn fuzzy_s_d() {
        let dq = build_dq(&lukasiewicz(3).unwrap()).unwrap();
        let q = dq.quantaloid().clone();
        let t = vec![Obj(1), Obj(2)];
        // x of type h, y of type 1, hom(x,y) = h
        let hom = QRelation::from_fn(&t, &t, |a, b| match (a, b) {
            (0, 0) => q.id(Obj(1)),
            (1, 1) => q.id(Obj(2)),
            (0, 1) => dq.from_k(Obj(1), Obj(2), 1).unwrap(),
            _ => q.hom(t[a], t[b]).bottom(),
        });
        let x = QCategory::new(q, TypedSet::anonymous(t), hom).unwrap();
        let d = functor_d(&x, DEFAULT_CAP).unwrap();
        assert_eq!(specialization(&d, DEFAULT_CAP).unwrap(), x);
        assert!(is_alexandrov(&d, DEFAULT_CAP).unwrap());
    }
}
