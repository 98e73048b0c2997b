//! Continuous distributors between closure spaces, final structures, the
//! adjunction `ζ▷ ⊣ ζ◁`, and the nucleus `cl`.

use std::sync::Arc;

use crate::closure::{ClosureSpace, FourWay};
use crate::qcat::category::{check_adjunction, is_distributor};
use crate::qcat::kan::{lower_star, star, tabulate};
use crate::qcat::presheaf::{Presheaf, PresheafCat};
use crate::qcat::QRelation;
use crate::{Error, Result};

fn require_distributor(zeta: &QRelation, s: &ClosureSpace, t: &ClosureSpace) -> Result<()> {
    if !is_distributor(s.base(), t.base(), zeta) {
        return Err(Error::TypeMismatch(format!(
            "relation is not a distributor from {} to {}",
            s.name(),
            t.name()
        )));
    }
    Ok(())
}

/// `ζ*: P𝕐 → P𝕏` and `ζ_*: P𝕏 → P𝕐` as tables.
pub fn kan_tables(
    zeta: &QRelation,
    s: &ClosureSpace,
    t: &ClosureSpace,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let q = s.base().quantaloid();
    let st = tabulate(t.px(), s.px(), |l| star(q, zeta, l))?;
    let lo = tabulate(s.px(), t.px(), |m| lower_star(q, zeta, m))?;
    Ok((st, lo))
}

/// The four conditions for `ζ: (𝕏,c) ⇸ (𝕐,d)`: `ζ*d ≤ cζ*`, `cζ*d ≤ cζ*`,
/// `dζ_*c ≤ ζ_*c`, and `ζ_*` preserving closed presheaves.
pub fn dist_conditions(zeta: &QRelation, s: &ClosureSpace, t: &ClosureSpace) -> Result<FourWay> {
    require_distributor(zeta, s, t)?;
    let (st, lo) = kan_tables(zeta, s, t)?;
    let (px, py) = (s.px(), t.px());
    let (c, d) = (s.table(), t.table());
    let i = (0..py.len()).all(|l| px.leq(st[d[l]], c[st[l]]));
    let ii = (0..py.len()).all(|l| px.leq(c[st[d[l]]], c[st[l]]));
    let iii = (0..px.len()).all(|m| py.leq(d[lo[c[m]]], lo[c[m]]));
    let iv = (0..px.len())
        .filter(|&m| c[m] == m)
        .all(|m| d[lo[m]] == lo[m]);
    Ok(FourWay { i, ii, iii, iv })
}

pub fn check_continuous_dist(zeta: &QRelation, s: &ClosureSpace, t: &ClosureSpace) -> Result<bool> {
    dist_conditions(zeta, s, t)?.verdict("distributor")
}

fn require_continuous(zeta: &QRelation, s: &ClosureSpace, t: &ClosureSpace) -> Result<()> {
    if !check_continuous_dist(zeta, s, t)? {
        return Err(Error::NotContinuous(format!(
            "distributor from {} to {}",
            s.name(),
            t.name()
        )));
    }
    Ok(())
}

/// `d = ⋀ᵢ (ζᵢ)_* cᵢ ζᵢ*` on `P𝕐`; the empty family gives the indiscrete
/// space.
pub fn final_structure(
    py: Arc<PresheafCat>,
    family: &[(QRelation, &ClosureSpace)],
) -> Result<ClosureSpace> {
    let mut table: Vec<usize> = py.items().iter().map(|m| py.pointwise_top(m.ty)).collect();
    let y = py.base().clone();
    for (zeta, s) in family {
        if !is_distributor(s.base(), &y, zeta) {
            return Err(Error::TypeMismatch(format!(
                "family member from {} is not a distributor",
                s.name()
            )));
        }
        let q = y.quantaloid();
        let st = tabulate(&py, s.px(), |l| star(q, zeta, l))?;
        let lo = tabulate(s.px(), &py, |m| lower_star(q, zeta, m))?;
        for l in 0..py.len() {
            table[l] = py.meet(table[l], lo[s.apply(st[l])])?;
        }
    }
    ClosureSpace::from_table("final", py, table)
}

/// `ζ▷ = c̄ζ*: C(𝕐,d) → C(𝕏,c)` and `ζ◁ = ζ_*: C(𝕏,c) → C(𝕐,d)`, as maps of
/// positions among closed presheaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistAdjoints {
    pub right: Vec<usize>,
    pub left: Vec<usize>,
}

/// The adjunction `ζ▷ ⊣ ζ◁` is verified.
pub fn dist_adjoints(zeta: &QRelation, s: &ClosureSpace, t: &ClosureSpace) -> Result<DistAdjoints> {
    require_continuous(zeta, s, t)?;
    let (st, lo) = kan_tables(zeta, s, t)?;
    let (cs, ct) = (s.closed_category(), t.closed_category());
    let right = ct
        .members
        .iter()
        .map(|&l| cs.expect_position(s.apply(st[l])))
        .collect::<Result<Vec<_>>>()?;
    let left = cs
        .members
        .iter()
        .map(|&m| ct.expect_position(lo[m]))
        .collect::<Result<Vec<_>>>()?;
    if !check_adjunction(ct.cat(), cs.cat(), &right, &left)? {
        return Err(Error::Inconsistent(format!(
            "ζ▷ is not left adjoint to ζ◁ for {} ⇸ {}",
            s.name(),
            t.name()
        )));
    }
    Ok(DistAdjoints { right, left })
}

/// Only `ζ▷`.
pub fn triangle_map(zeta: &QRelation, s: &ClosureSpace, t: &ClosureSpace) -> Result<Vec<usize>> {
    Ok(dist_adjoints(zeta, s, t)?.right)
}

/// Column `y` of `ζ` as a presheaf on the domain.
fn column(zeta: &QRelation, y: usize) -> Presheaf {
    Presheaf::new(zeta.cod()[y], zeta.column(y))
}

/// `cl ζ`: every column replaced by its closure in `(𝕏,c)`.
pub fn dist_closure(zeta: &QRelation, s: &ClosureSpace) -> Result<QRelation> {
    let px = s.px();
    let mut out = zeta.clone();
    for y in 0..zeta.cols() {
        let closed = s.apply(px.expect_index(&column(zeta, y))?);
        for (x, &v) in px.item(closed).vals.iter().enumerate() {
            out.set(x, y, v);
        }
    }
    Ok(out)
}

/// Every column is a closed presheaf of `(𝕏,c)`.
pub fn is_closed_dist(zeta: &QRelation, s: &ClosureSpace) -> Result<bool> {
    let px = s.px();
    for y in 0..zeta.cols() {
        if !s.is_closed(px.expect_index(&column(zeta, y))?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `cl(η∘ζ)` for `ζ: (𝕏,c) ⇸ 𝕐`, `η: 𝕐 ⇸ 𝕑`.
pub fn compose_cl(eta: &QRelation, zeta: &QRelation, s: &ClosureSpace) -> Result<QRelation> {
    let q = s.base().quantaloid();
    dist_closure(&QRelation::compose(q, eta, zeta)?, s)
}

/// `cl(ζ ∨ η)`.
pub fn join_cl(a: &QRelation, b: &QRelation, s: &ClosureSpace) -> Result<QRelation> {
    dist_closure(&a.join(s.base().quantaloid(), b)?, s)
}

/// `cl(𝕏)`, the identity of `(𝕏,c)` in the quotient.
pub fn identity_cl(s: &ClosureSpace) -> Result<QRelation> {
    dist_closure(s.base().hom(), s)
}

/// Properties of `cl` on one continuous `ζ`: closed, continuous, above `ζ`,
/// idempotent, `c(cl ζ)* = cζ*` and `(cl ζ)▷ = ζ▷`. Returns the first
/// failure.
pub fn check_closure_laws(
    zeta: &QRelation,
    s: &ClosureSpace,
    t: &ClosureSpace,
) -> Result<Option<String>> {
    let q = s.base().quantaloid();
    let cl = dist_closure(zeta, s)?;
    if !is_closed_dist(&cl, s)? {
        return Ok(Some("cl ζ is not closed".into()));
    }
    if !check_continuous_dist(&cl, s, t)? {
        return Ok(Some("cl ζ is not continuous".into()));
    }
    if !zeta.leq(q, &cl)? {
        return Ok(Some("ζ is not below cl ζ".into()));
    }
    if dist_closure(&cl, s)? != cl {
        return Ok(Some("cl is not idempotent".into()));
    }
    let (st, _) = kan_tables(zeta, s, t)?;
    let (stc, _) = kan_tables(&cl, s, t)?;
    if (0..st.len()).any(|l| s.apply(st[l]) != s.apply(stc[l])) {
        return Ok(Some("c(cl ζ)* differs from cζ*".into()));
    }
    if triangle_map(&cl, s, t)? != triangle_map(zeta, s, t)? {
        return Ok(Some("(cl ζ)▷ differs from ζ▷".into()));
    }
    Ok(None)
}

/// Lax compositionality `cl η ∘ cl ζ ≤ cl(η∘ζ)` plus `(η∘ζ)▷ = ζ▷∘η▷`.
pub fn check_composite_laws(
    zeta: &QRelation,
    eta: &QRelation,
    s: &ClosureSpace,
    t: &ClosureSpace,
    u: &ClosureSpace,
) -> Result<Option<String>> {
    let q = s.base().quantaloid();
    let comp = QRelation::compose(q, eta, zeta)?;
    if !check_continuous_dist(&comp, s, u)? {
        return Ok(Some("η∘ζ is not continuous".into()));
    }
    let lhs = QRelation::compose(q, &dist_closure(eta, t)?, &dist_closure(zeta, s)?)?;
    if !lhs.leq(q, &dist_closure(&comp, s)?)? {
        return Ok(Some("cl η ∘ cl ζ is not below cl(η∘ζ)".into()));
    }
    let z = triangle_map(zeta, s, t)?;
    let e = triangle_map(eta, t, u)?;
    let ze: Vec<usize> = e.iter().map(|&i| z[i]).collect();
    if triangle_map(&comp, s, u)? != ze {
        return Ok(Some("(η∘ζ)▷ differs from ζ▷∘η▷".into()));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{boolean, Elem, Obj, Quantaloid};
    use crate::closure::{all_closure_spaces, from_closed_system, Mode};
    use crate::qcat::relation::all_relations;
    use crate::qcat::{QCategory, TypedSet, DEFAULT_CAP};

    fn two() -> Arc<Quantaloid> {
        Arc::new(boolean().into_quantaloid())
    }

    fn dpx(n: usize) -> Arc<PresheafCat> {
        let x = QCategory::discrete(two(), TypedSet::anonymous(vec![Obj(0); n]));
        Arc::new(PresheafCat::presheaves(&x, DEFAULT_CAP).unwrap())
    }

    pub(crate) fn s2() -> ClosureSpace {
        let px = dpx(2);
        let a = px.index_of(&Presheaf::new(Obj(0), vec![1, 0])).unwrap();
        let ab = px.index_of(&Presheaf::new(Obj(0), vec![1, 1])).unwrap();
        from_closed_system(px, &[a, ab], Mode::Exact).unwrap()
    }

    fn rel(data: [Elem; 4]) -> QRelation {
        let t = [Obj(0); 2];
        QRelation::from_fn(&t, &t, |x, y| data[x * 2 + y])
    }

    #[test]
    fn empty_and_identity() {
        let s = s2();
        let q = s.base().quantaloid();
        let t = [Obj(0); 2];
        assert!(check_continuous_dist(&QRelation::bottom(q, &t, &t), &s, &s).unwrap());
        let id = s.base().hom().clone();
        let adj = dist_adjoints(&id, &s, &s).unwrap();
        assert_eq!(adj.right, vec![0, 1]);
        // identity_cl = column closure: c{a} = {a}, c{b} = {a,b}
        assert_eq!(identity_cl(&s).unwrap(), rel([1, 1, 0, 1]));
        let icl = identity_cl(&s).unwrap();
        for zeta in all_relations(q, &t, &t) {
            if check_continuous_dist(&zeta, &s, &s).unwrap() && is_closed_dist(&zeta, &s).unwrap() {
                assert_eq!(compose_cl(&icl, &zeta, &s).unwrap(), zeta);
                assert_eq!(compose_cl(&zeta, &icl, &s).unwrap(), zeta);
            }
        }
    }

    #[test]
    fn final_structures() {
        let s = s2();
        let py = s.px().clone();
        let empty = final_structure(py.clone(), &[]).unwrap();
        assert_eq!(empty, ClosureSpace::indiscrete(py.clone()));
        let single = final_structure(py.clone(), &[(s.base().hom().clone(), &s)]).unwrap();
        assert_eq!(single.table(), s.table());
        // the final structure is the largest one making the family continuous
        let zeta = rel([0, 1, 1, 0]);
        let fin = final_structure(py.clone(), &[(zeta.clone(), &s)]).unwrap();
        assert!(check_continuous_dist(&zeta, &s, &fin).unwrap());
        for d in all_closure_spaces(&py, 100).unwrap() {
            assert_eq!(
                check_continuous_dist(&zeta, &s, &d).unwrap(),
                d.op_leq(&fin)
            );
        }
    }

    #[test]
    fn closure_laws_on_two_points() {
        let spaces = all_closure_spaces(&dpx(2), 100).unwrap();
        let q = two();
        let t = [Obj(0); 2];
        for s in &spaces {
            for u in &spaces {
                for zeta in all_relations(&q, &t, &t) {
                    if check_continuous_dist(&zeta, s, u).unwrap() {
                        assert_eq!(check_closure_laws(&zeta, s, u).unwrap(), None);
                    }
                }
            }
        }
    }
}
