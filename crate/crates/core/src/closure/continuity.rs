//! Continuous functors, initial structures, the adjunction `f▷ ⊣ f◁`, and
//! the functors `D` and `I`.

use std::sync::Arc;

use super::space::ClosureSpace;
use crate::qcat::category::{check_adjunction, is_functor, QCategory};
use crate::qcat::complete;
use crate::qcat::kan::{image_backward, image_forward};
use crate::qcat::presheaf::{absorb, Kind, Presheaf, PresheafCat};
use crate::{Error, Result};

/// Verdicts of the four equivalent continuity conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourWay {
    pub i: bool,
    pub ii: bool,
    pub iii: bool,
    pub iv: bool,
}

impl FourWay {
    pub fn agree(&self) -> bool {
        self.i == self.ii && self.ii == self.iii && self.iii == self.iv
    }

    /// The common verdict, or an internal error naming the split.
    pub fn verdict(&self, what: &str) -> Result<bool> {
        if self.agree() {
            Ok(self.i)
        } else {
            Err(Error::Inconsistent(format!(
                "{what}: continuity conditions disagree {self:?}"
            )))
        }
    }
}

fn require_functor(f: &[usize], s: &ClosureSpace, t: &ClosureSpace) -> Result<()> {
    if !is_functor(s.base(), t.base(), f) {
        return Err(Error::NotContinuous(format!(
            "map from {} to {} is not a functor",
            s.name(),
            t.name()
        )));
    }
    Ok(())
}

/// The four conditions for `f: (𝕏,c) → (𝕐,d)`:
/// `f→c ≤ df→`, `df→c ≤ df→`, `cf←d ≤ f←d`, and `f←` preserving closed
/// presheaves.
pub fn continuity_conditions(f: &[usize], s: &ClosureSpace, t: &ClosureSpace) -> Result<FourWay> {
    require_functor(f, s, t)?;
    let (px, py) = (s.px(), t.px());
    let fwd = image_forward(s.base(), t.base(), f, px, py)?;
    let bwd = image_backward(s.base(), t.base(), f, px, py)?;
    let (c, d) = (s.table(), t.table());
    let i = (0..px.len()).all(|m| py.leq(fwd[c[m]], d[fwd[m]]));
    let ii = (0..px.len()).all(|m| py.leq(d[fwd[c[m]]], d[fwd[m]]));
    let iii = (0..py.len()).all(|l| px.leq(c[bwd[d[l]]], bwd[d[l]]));
    let iv = (0..py.len())
        .filter(|&l| d[l] == l)
        .all(|l| c[bwd[l]] == bwd[l]);
    Ok(FourWay { i, ii, iii, iv })
}

pub fn check_continuous_functor(f: &[usize], s: &ClosureSpace, t: &ClosureSpace) -> Result<bool> {
    continuity_conditions(f, s, t)?.verdict("functor")
}

/// `c = ⋀ᵢ fᵢ← dᵢ fᵢ→`; the empty family gives the indiscrete space.
pub fn initial_structure(
    px: Arc<PresheafCat>,
    family: &[(Vec<usize>, &ClosureSpace)],
) -> Result<ClosureSpace> {
    let x = px.base().clone();
    let mut table: Vec<usize> = px.items().iter().map(|m| px.pointwise_top(m.ty)).collect();
    for (f, t) in family {
        if !is_functor(&x, t.base(), f) {
            return Err(Error::NotContinuous(format!(
                "family member into {} is not a functor",
                t.name()
            )));
        }
        let fwd = image_forward(&x, t.base(), f, &px, t.px())?;
        let bwd = image_backward(&x, t.base(), f, &px, t.px())?;
        for m in 0..px.len() {
            table[m] = px.meet(table[m], bwd[t.apply(fwd[m])])?;
        }
    }
    ClosureSpace::from_table("initial", px, table)
}

/// `f▷ = d̄∘f→` and `f◁ = f←` restricted to closed presheaves, as maps of
/// positions in `C(𝕏,c)` and `C(𝕐,d)`. The adjunction is verified.
pub fn functor_adjoints(
    f: &[usize],
    s: &ClosureSpace,
    t: &ClosureSpace,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if !check_continuous_functor(f, s, t)? {
        return Err(Error::NotContinuous(format!(
            "map from {} to {}",
            s.name(),
            t.name()
        )));
    }
    let (px, py) = (s.px(), t.px());
    let fwd = image_forward(s.base(), t.base(), f, px, py)?;
    let bwd = image_backward(s.base(), t.base(), f, px, py)?;
    let (cs, ct) = (s.closed_category(), t.closed_category());
    let right = cs
        .members
        .iter()
        .map(|&m| ct.expect_position(t.apply(fwd[m])))
        .collect::<Result<Vec<_>>>()?;
    let left = ct
        .members
        .iter()
        .map(|&l| cs.expect_position(bwd[l]))
        .collect::<Result<Vec<_>>>()?;
    if !check_adjunction(cs.cat(), ct.cat(), &right, &left)? {
        return Err(Error::Inconsistent(format!(
            "f▷ is not left adjoint to f◁ for {} → {}",
            s.name(),
            t.name()
        )));
    }
    Ok((right, left))
}

/// `D𝕏 = (𝕏₀, μ ↦ μ∘𝕏)`.
pub fn functor_d(x: &QCategory, cap: usize) -> Result<ClosureSpace> {
    let x0 = QCategory::discrete(x.quantaloid().clone(), x.set().clone());
    let p0 = Arc::new(PresheafCat::presheaves(&x0, cap)?);
    let table = p0
        .items()
        .iter()
        .map(|m| p0.expect_index(&absorb(x, Kind::Presheaf, m)))
        .collect::<Result<Vec<_>>>()?;
    ClosureSpace::from_table("D", p0, table)
}

/// `I𝕏 = (𝕏, y∘sup)` for a separated complete `𝕏`.
pub fn functor_i(x: &QCategory, cap: usize) -> Result<ClosureSpace> {
    let px = Arc::new(PresheafCat::presheaves(x, cap)?);
    if !x.is_separated() {
        return Err(Error::NotSeparated("I needs a separated category".into()));
    }
    let sup = complete::sup_map(x, &px)?;
    let y = px.yoneda()?;
    let table = sup.iter().map(|&s| y[s]).collect();
    ClosureSpace::from_table("I", px, table)
}

/// `f sup_𝕏 = sup_𝕐 f→` for a functor between complete categories.
pub fn is_sup_preserving(
    x: &QCategory,
    px: &PresheafCat,
    y: &QCategory,
    py: &PresheafCat,
    f: &[usize],
) -> Result<bool> {
    if !is_functor(x, y, f) {
        return Ok(false);
    }
    let fwd = image_forward(x, y, f, px, py)?;
    let sx = complete::sup_map(x, px)?;
    let sy = complete::sup_map(y, py)?;
    Ok((0..px.len()).all(|m| f[sx[m]] == sy[fwd[m]]))
}

/// `sup` restricted to `C(I𝕏)`, as positions into `𝕏`; checks that
/// `C(I𝕏)` consists of the representables and that the map is a bijective
/// fully faithful functor.
pub fn sup_on_closed(x: &QCategory, space: &ClosureSpace) -> Result<Vec<usize>> {
    let px = space.px();
    let cc = space.closed_category();
    let mut reps: Vec<usize> = px.yoneda()?;
    reps.sort_unstable();
    reps.dedup();
    if reps != cc.members {
        return Err(Error::Inconsistent(
            "closed presheaves of I are not the representables".into(),
        ));
    }
    let map = cc
        .members
        .iter()
        .map(|&m| {
            complete::sup(x, px.item(m))
                .ok_or_else(|| Error::NotComplete("missing supremum".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let check = crate::qcat::check_functor(cc.cat(), x, &map);
    let mut seen = vec![false; x.len()];
    for &v in &map {
        seen[v] = true;
    }
    if !check.fully_faithful || seen.iter().any(|s| !s) || map.len() != x.len() {
        return Err(Error::Inconsistent(
            "sup: C(I X) → X is not an isomorphism".into(),
        ));
    }
    Ok(map)
}

/// `P(f) = f→`, compared with the map `C(Df) → C(Df)` induced by `Df`.
pub fn p_equals_cd(x: &QCategory, y: &QCategory, f: &[usize], cap: usize) -> Result<bool> {
    let (dx, dy) = (functor_d(x, cap)?, functor_d(y, cap)?);
    let (right, _) = functor_adjoints(f, &dx, &dy)?;
    let px = PresheafCat::presheaves(x, cap)?;
    let py = PresheafCat::presheaves(y, cap)?;
    let fwd = image_forward(x, y, f, &px, &py)?;
    let (cx, cy) = (dx.closed_category(), dy.closed_category());
    Ok(cx.members.iter().enumerate().all(|(i, &m)| {
        let mu: &Presheaf = dx.px().item(m);
        let image = py.item(
            fwd[px
                .index_of(mu)
                .expect("closed presheaves of D are presheaves")],
        );
        cy.pcat.item(right[i]) == image
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{boolean, Elem, Obj, Quantaloid};
    use crate::closure::space::{all_closure_spaces, from_closed_system, Mode};
    use crate::qcat::{QRelation, TypedSet, DEFAULT_CAP};

    fn two() -> Arc<Quantaloid> {
        Arc::new(boolean().into_quantaloid())
    }

    fn bool_cat(n: usize, le: impl Fn(usize, usize) -> bool) -> QCategory {
        let t = vec![Obj(0); n];
        let hom = QRelation::from_fn(&t, &t, |a, b| le(a, b) as Elem);
        QCategory::new(two(), TypedSet::anonymous(t), hom).unwrap()
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
    fn identity_and_constant_maps() {
        let s = s2();
        assert!(check_continuous_functor(&[0, 1], &s, &s).unwrap());
        let pt = ClosureSpace::indiscrete(dpx(1));
        assert!(check_continuous_functor(&[0, 0], &s, &pt).unwrap());
        // swapping a and b is not continuous on S2
        assert!(!check_continuous_functor(&[1, 0], &s, &s).unwrap());
        let (r, l) = functor_adjoints(&[0, 1], &s, &s).unwrap();
        assert_eq!(r, vec![0, 1]);
        assert_eq!(l, vec![0, 1]);
        functor_adjoints(&[0, 0], &s, &pt).unwrap();
    }

    #[test]
    fn four_conditions_agree_on_two_points() {
        let px = dpx(2);
        let spaces = all_closure_spaces(&px, 100).unwrap();
        for s in &spaces {
            for t in &spaces {
                for f in [[0, 0], [0, 1], [1, 0], [1, 1]] {
                    check_continuous_functor(&f, s, t).unwrap();
                }
            }
        }
    }

    #[test]
    fn initial_structures() {
        let s = s2();
        let init = initial_structure(s.px().clone(), &[(vec![0, 1], &s)]).unwrap();
        assert_eq!(init.table(), s.table());
        let p1 = dpx(1);
        let empty = initial_structure(p1.clone(), &[]).unwrap();
        assert_eq!(empty, ClosureSpace::indiscrete(p1));
        // the initial structure is the largest making f continuous
        let px = dpx(2);
        let spaces = all_closure_spaces(&px, 100).unwrap();
        let f = vec![1, 0];
        let init = initial_structure(px.clone(), &[(f.clone(), &s)]).unwrap();
        assert!(check_continuous_functor(&f, &init, &s).unwrap());
        for c in &spaces {
            let cont = check_continuous_functor(&f, c, &s).unwrap();
            assert_eq!(cont, c.op_leq(&init));
        }
    }

    #[test]
    fn d_on_chain_and_maps() {
        let chain = bool_cat(2, |a, b| a <= b);
        let d = functor_d(&chain, DEFAULT_CAP).unwrap();
        assert_eq!(d.closed_indices().len(), 3);
        let disc = bool_cat(2, |a, b| a == b);
        let dd = functor_d(&disc, DEFAULT_CAP).unwrap();
        assert_eq!(dd, ClosureSpace::discrete(dd.px().clone()));
        for f in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            let functor = is_functor(&chain, &chain, &f);
            assert_eq!(functor, check_continuous_functor(&f, &d, &d).unwrap());
            if functor {
                assert!(p_equals_cd(&chain, &chain, &f, DEFAULT_CAP).unwrap());
            }
        }
    }

    #[test]
    fn i_on_chain() {
        let chain = bool_cat(2, |a, b| a <= b);
        let i = functor_i(&chain, DEFAULT_CAP).unwrap();
        let closed: Vec<Vec<Elem>> = i
            .closed_indices()
            .iter()
            .map(|&m| i.px().item(m).vals.clone())
            .collect();
        assert_eq!(closed, vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(sup_on_closed(&chain, &i).unwrap(), vec![0, 1]);
        let px = PresheafCat::presheaves(&chain, DEFAULT_CAP).unwrap();
        for f in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            let sp = is_sup_preserving(&chain, &px, &chain, &px, &f).unwrap();
            let cont =
                is_functor(&chain, &chain, &f) && check_continuous_functor(&f, &i, &i).unwrap();
            assert_eq!(sp, cont, "{f:?}");
        }
    }
}
