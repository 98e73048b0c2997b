//! Sup-preserving maps between complete categories, their realization as
//! closed continuous distributors, and the equivalence checks.

use std::collections::BTreeSet;

use super::dist::{
    check_continuous_dist, compose_cl, dist_adjoints, identity_cl, is_closed_dist, triangle_map,
};
use crate::algebra::Obj;
use crate::closure::{functor_i, sup_on_closed, underlying_discrete, ClosedCat, ClosureSpace};
use crate::qcat::category::{check_functor, is_distributor, QCategory};
use crate::qcat::complete::{self, underlying_bottom, underlying_join};
use crate::qcat::presheaf::{untranspose, PresheafCat};
use crate::qcat::relation::all_relations;
use crate::qcat::QRelation;
use crate::{Error, Result};

/// Tensor preservation plus preservation of underlying joins (including
/// least elements) per type.
pub fn sup_preserving_by_criterion(a: &QCategory, b: &QCategory, f: &[usize]) -> bool {
    let q = a.quantaloid();
    if !check_functor(a, b, f).is_functor {
        return false;
    }
    for x in 0..a.len() {
        for r in q.objects() {
            for u in q.hom(a.ty(x), r).elements() {
                let (ta, tb) = (
                    complete::tensor(a, u, r, x),
                    complete::tensor(b, u, r, f[x]),
                );
                match (ta, tb) {
                    (Some(ta), Some(tb)) if b.is_iso(f[ta], tb) => {}
                    _ => return false,
                }
            }
        }
    }
    for ty in q.objects() {
        match (underlying_bottom(a, ty), underlying_bottom(b, ty)) {
            (Some(x), Some(y)) if b.is_iso(f[x], y) => {}
            (None, _) => {}
            _ => return false,
        }
        for x in a.of_type(ty) {
            for y in a.of_type(ty) {
                if let Some(j) = underlying_join(a, x, y) {
                    match underlying_join(b, f[x], f[y]) {
                        Some(k) if b.is_iso(f[j], k) => {}
                        _ => return false,
                    }
                }
            }
        }
    }
    true
}

/// `f sup = sup f→` over every presheaf on `a`.
pub fn sup_preserving_direct(
    a: &QCategory,
    pa: &PresheafCat,
    b: &QCategory,
    pb: &PresheafCat,
    f: &[usize],
) -> Result<bool> {
    crate::closure::is_sup_preserving(a, pa, b, pb, f)
}

/// All sup-preserving maps `a → b` between complete categories, in
/// lexicographic order. Candidates are enumerated as functors with tensor
/// pruning, filtered by the tensor/underlying-join criterion, and every
/// functor's verdict is cross-checked against direct sup preservation.
pub fn sup_maps(a: &QCategory, b: &QCategory, cap: usize) -> Result<Vec<Vec<usize>>> {
    let pa = PresheafCat::presheaves(a, cap)?;
    let pb = PresheafCat::presheaves(b, cap)?;
    let q = a.quantaloid();
    let n = a.len();
    let mut tensors: Vec<Vec<(usize, usize, Obj, crate::algebra::Elem)>> = vec![Vec::new(); n];
    for x in 0..n {
        for r in q.objects() {
            for u in q.hom(a.ty(x), r).elements() {
                let t = complete::tensor(a, u, r, x)
                    .ok_or_else(|| Error::NotComplete("domain is not tensored".into()))?;
                tensors[x.max(t)].push((x, t, r, u));
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    let mut visited = 0usize;
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    // iterative backtracking: (position, next candidate)
    while let Some((i, cand)) = stack.pop() {
        if i == n {
            visited += 1;
            if visited > cap {
                return Err(Error::CapExceeded {
                    what: "candidate maps".into(),
                    cap,
                });
            }
            let crit = sup_preserving_by_criterion(a, b, &cur);
            let direct = sup_preserving_direct(a, &pa, b, &pb, &cur)?;
            if crit != direct {
                return Err(Error::Inconsistent(format!(
                    "sup preservation of {cur:?}: criterion {crit}, direct {direct}"
                )));
            }
            if crit {
                out.push(cur.clone());
            }
            continue;
        }
        if cand >= b.len() {
            continue;
        }
        stack.push((i, cand + 1));
        if b.ty(cand) != a.ty(i) {
            continue;
        }
        cur[i] = cand;
        let functorial = (0..=i).all(|j| {
            q.hom(a.ty(j), a.ty(i)).leq(a.h(j, i), b.h(cur[j], cand))
                && q.hom(a.ty(i), a.ty(j)).leq(a.h(i, j), b.h(cand, cur[j]))
        });
        let tensorial = tensors[i].iter().all(|&(x, t, r, u)| {
            complete::tensor(b, u, r, cur[x]).is_some_and(|tb| b.is_iso(cur[t], tb))
        });
        if functorial && tensorial {
            stack.push((i + 1, 0));
        }
    }
    out.sort();
    Ok(out)
}

/// `t̃ζ = incl∘g∘d̄∘y_𝕐` for `g: C(𝕐,d) → C(𝕏,c)` given as positions.
pub fn realize_sup_map(
    g: &[usize],
    s: &ClosureSpace,
    t: &ClosureSpace,
    cap: usize,
) -> Result<QRelation> {
    let (cs, ct) = (s.closed_category(), t.closed_category());
    if g.len() != ct.len() || g.iter().any(|&v| v >= cs.len()) {
        return Err(Error::TypeMismatch(
            "map does not go between the closed presheaves".into(),
        ));
    }
    let pa = PresheafCat::presheaves(ct.cat(), cap)?;
    let pb = PresheafCat::presheaves(cs.cat(), cap)?;
    if !sup_preserving_direct(ct.cat(), &pa, cs.cat(), &pb, g)? {
        return Err(Error::NotSupPreserving(format!(
            "map C({}) → C({})",
            t.name(),
            s.name()
        )));
    }
    let ys = t.px().yoneda()?;
    let cols = ys
        .iter()
        .map(|&y| Ok(cs.members[g[ct.expect_position(t.apply(y))?]]))
        .collect::<Result<Vec<_>>>()?;
    let zeta = untranspose(s.px(), t.base().types(), &cols)?;
    if !is_distributor(s.base(), t.base(), &zeta) || !check_continuous_dist(&zeta, s, t)? {
        return Err(Error::Inconsistent(
            "realized distributor is not continuous".into(),
        ));
    }
    if !is_closed_dist(&zeta, s)? || triangle_map(&zeta, s, t)? != g {
        return Err(Error::Inconsistent(
            "realized distributor does not reproduce the map".into(),
        ));
    }
    Ok(zeta)
}

/// `f^♮: (𝕐,c_𝕐) ⇸ (𝕏,c_𝕏)` for sup-preserving `f: 𝕏 → 𝕐`, checked to be
/// closed, continuous, and to induce `f` under the `sup` isomorphisms.
pub fn icl_embed(x: &QCategory, y: &QCategory, f: &[usize], cap: usize) -> Result<QRelation> {
    let (ix, iy) = (functor_i(x, cap)?, functor_i(y, cap)?);
    let pa = ix.px();
    let pb = iy.px();
    if !sup_preserving_direct(x, pa, y, pb, f)? {
        return Err(Error::NotSupPreserving(
            "map between complete categories".into(),
        ));
    }
    let zeta = QRelation::from_fn(y.types(), x.types(), |b, a| y.h(b, f[a]));
    if !check_continuous_dist(&zeta, &iy, &ix)? || !is_closed_dist(&zeta, &iy)? {
        return Err(Error::Inconsistent(
            "cograph is not closed continuous".into(),
        ));
    }
    let tri = triangle_map(&zeta, &iy, &ix)?;
    let (sx, sy) = (sup_on_closed(x, &ix)?, sup_on_closed(y, &iy)?);
    for (i, &v) in tri.iter().enumerate() {
        if sy[v] != f[sx[i]] {
            return Err(Error::Inconsistent("(f^♮)▷ is not conjugate to f".into()));
        }
    }
    Ok(zeta)
}

/// All distributors between the bases of two spaces.
pub fn all_distributors(s: &ClosureSpace, t: &ClosureSpace) -> Vec<QRelation> {
    all_relations(s.base().quantaloid(), s.base().types(), t.base().types())
        .into_iter()
        .filter(|z| is_distributor(s.base(), t.base(), z))
        .collect()
}

/// Outcome of the hom-bijection check for one ordered pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bijection {
    pub closed_continuous: usize,
    pub sup_maps: usize,
}

/// `ζ ↦ ζ▷` between closed continuous `S ⇸ T` and sup-preserving
/// `C(T) → C(S)`, with `realize_sup_map` as two-sided inverse.
pub fn check_bijection(
    s: &ClosureSpace,
    t: &ClosureSpace,
    cap: usize,
) -> Result<std::result::Result<Bijection, String>> {
    let (cs, ct) = (s.closed_category(), t.closed_category());
    let maps = sup_maps(ct.cat(), cs.cat(), cap)?;
    let mut images = BTreeSet::new();
    let mut closed = 0;
    for zeta in all_distributors(s, t) {
        if !check_continuous_dist(&zeta, s, t)? || !is_closed_dist(&zeta, s)? {
            continue;
        }
        closed += 1;
        let g = dist_adjoints(&zeta, s, t)?.right;
        if !images.insert(g.clone()) {
            return Ok(Err(format!("two closed distributors share the map {g:?}")));
        }
        if realize_sup_map(&g, s, t, cap)? != zeta {
            return Ok(Err(format!(
                "realize(ζ▷) differs from ζ for ζ = {:?}",
                zeta.entries()
            )));
        }
    }
    let expected: BTreeSet<Vec<usize>> = maps.iter().cloned().collect();
    if images != expected {
        return Ok(Err(format!(
            "{} closed continuous distributors but {} sup-preserving maps",
            closed,
            maps.len()
        )));
    }
    for g in &maps {
        let zeta = realize_sup_map(g, s, t, cap)?;
        if triangle_map(&zeta, s, t)? != *g {
            return Ok(Err(format!("realize({g:?})▷ differs")));
        }
    }
    Ok(Ok(Bijection {
        closed_continuous: closed,
        sup_maps: maps.len(),
    }))
}

/// `ζ ▷ = η ▷ ⟺ cl ζ = cl η` over all continuous distributors `S ⇸ T`.
pub fn check_faithfulness(s: &ClosureSpace, t: &ClosureSpace) -> Result<bool> {
    let mut cont = Vec::new();
    for zeta in all_distributors(s, t) {
        if check_continuous_dist(&zeta, s, t)? {
            let g = triangle_map(&zeta, s, t)?;
            let cl = super::dist::dist_closure(&zeta, s)?;
            cont.push((g, cl));
        }
    }
    Ok(cont
        .iter()
        .all(|(g1, c1)| cont.iter().all(|(g2, c2)| (g1 == g2) == (c1 == c2))))
}

/// The identity between `C(S)` and `C(T)` when both have the same closed
/// presheaves, as positions `C(T) → C(S)`.
fn shared_identity(cs: &ClosedCat, ct: &ClosedCat) -> Result<Vec<usize>> {
    ct.pcat
        .items()
        .iter()
        .map(|m| {
            cs.pcat
                .index_of(m)
                .ok_or_else(|| Error::Inconsistent("closed presheaves differ".into()))
        })
        .collect()
}

/// Witnesses `ζ: S ⇸ S₀`, `η: S₀ ⇸ S` of `S ≅ S₀` in the quotient, with
/// `cl(η∘ζ) = cl(𝕏)` and `cl(ζ∘η) = cl(𝕏₀)` verified.
pub fn discrete_reduction_witnesses(
    s: &ClosureSpace,
    cap: usize,
) -> Result<(QRelation, QRelation)> {
    let s0 = underlying_discrete(s, cap)?;
    let (cs, c0) = (s.closed_category(), s0.closed_category());
    let zeta = realize_sup_map(&shared_identity(&cs, &c0)?, s, &s0, cap)?;
    let eta = realize_sup_map(&shared_identity(&c0, &cs)?, &s0, s, cap)?;
    if compose_cl(&eta, &zeta, s)? != identity_cl(s)? {
        return Err(Error::Inconsistent(
            "cl(η∘ζ) is not the identity of S".into(),
        ));
    }
    if compose_cl(&zeta, &eta, &s0)? != identity_cl(&s0)? {
        return Err(Error::Inconsistent(
            "cl(ζ∘η) is not the identity of S₀".into(),
        ));
    }
    Ok((zeta, eta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{boolean, Elem, Quantaloid};
    use crate::closure::{all_closure_spaces, from_closed_system, Mode};
    use crate::qcat::presheaf::Presheaf;
    use crate::qcat::{TypedSet, DEFAULT_CAP};
    use std::sync::Arc;

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

    fn chain(n: usize) -> QCategory {
        let t = vec![Obj(0); n];
        let hom = QRelation::from_fn(&t, &t, |a, b| (a <= b) as Elem);
        QCategory::new(two(), TypedSet::anonymous(t), hom).unwrap()
    }

    #[test]
    fn sup_maps_on_two_chain() {
        let c = chain(2);
        assert_eq!(sup_maps(&c, &c, DEFAULT_CAP).unwrap().len(), 2);
        let s = s2();
        let b = check_bijection(&s, &s, DEFAULT_CAP).unwrap().unwrap();
        assert_eq!(
            b,
            Bijection {
                closed_continuous: 2,
                sup_maps: 2
            }
        );
        // identity map realizes to [x ∈ c{y}]
        let z = realize_sup_map(&[0, 1], &s, &s, DEFAULT_CAP).unwrap();
        assert_eq!(z.entries(), &[1, 1, 0, 1]);
        assert!(check_faithfulness(&s, &s).unwrap());
    }

    #[test]
    fn non_sup_map_is_rejected() {
        let s = s2();
        assert!(matches!(
            realize_sup_map(&[1, 1], &s, &s, DEFAULT_CAP),
            Err(Error::NotSupPreserving(_))
        ));
    }

    #[test]
    fn bijection_on_all_small_pairs() {
        let mut spaces = Vec::new();
        for n in 0..=2 {
            spaces.extend(all_closure_spaces(&dpx(n), 100).unwrap());
        }
        assert_eq!(spaces.len(), 10);
        for s in &spaces {
            for t in &spaces {
                check_bijection(s, t, DEFAULT_CAP).unwrap().unwrap();
            }
        }
    }

    #[test]
    fn chain_reduction_witnesses() {
        let c = chain(2);
        let px = Arc::new(PresheafCat::presheaves(&c, DEFAULT_CAP).unwrap());
        let s = ClosureSpace::discrete(px);
        discrete_reduction_witnesses(&s, DEFAULT_CAP).unwrap();
    }

    #[test]
    fn icl_on_chain() {
        let c = chain(2);
        let z = icl_embed(&c, &c, &[0, 1], DEFAULT_CAP).unwrap();
        assert_eq!(&z, c.hom());
        let c3 = chain(3);
        for f in sup_maps(&c3, &c3, DEFAULT_CAP).unwrap() {
            icl_embed(&c3, &c3, &f, DEFAULT_CAP).unwrap();
        }
    }
}
