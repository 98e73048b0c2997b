//! Q-categories, functors, adjunctions and distributors.

use std::sync::Arc;

use super::relation::{QRelation, TypedSet};
use crate::algebra::{Elem, Obj, Quantaloid};
use crate::report::{Validation, Violation};
use crate::{Error, Result};

/// A typed set with a reflexive, transitive hom relation.
#[derive(Debug, Clone)]
pub struct QCategory {
    q: Arc<Quantaloid>,
    set: TypedSet,
    hom: QRelation,
}

impl PartialEq for QCategory {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.q, &other.q) || *self.q == *other.q)
            && self.set == other.set
            && self.hom == other.hom
    }
}

impl Eq for QCategory {}

impl QCategory {
    /// Validates and builds; law failures are returned as `Error::Law`.
    pub fn new(q: Arc<Quantaloid>, set: TypedSet, hom: QRelation) -> Result<Self> {
        set.check_types(&q)?;
        if hom.dom() != set.types() || hom.cod() != set.types() {
            return Err(Error::TypeMismatch(
                "hom relation does not match the carrier".into(),
            ));
        }
        hom.check(&q)?;
        let v = validate_category(&q, &hom);
        if !v.is_empty() {
            return Err(Error::Law(v));
        }
        Ok(QCategory { q, set, hom })
    }

    /// Builds without checking the category laws (types are still trusted).
    pub fn new_unchecked(q: Arc<Quantaloid>, set: TypedSet, hom: QRelation) -> Self {
        QCategory { q, set, hom }
    }

    /// `(X, id_X)`.
    pub fn discrete(q: Arc<Quantaloid>, set: TypedSet) -> Self {
        let hom = QRelation::identity(&q, set.types());
        QCategory { q, set, hom }
    }

    pub fn quantaloid(&self) -> &Arc<Quantaloid> {
        &self.q
    }

    pub fn set(&self) -> &TypedSet {
        &self.set
    }

    pub fn hom(&self) -> &QRelation {
        &self.hom
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn types(&self) -> &[Obj] {
        self.set.types()
    }

    #[inline]
    pub fn ty(&self, x: usize) -> Obj {
        self.set.ty(x)
    }

    pub fn name(&self, x: usize) -> &str {
        self.set.name(x)
    }

    /// `𝕏(x,y)`.
    #[inline]
    pub fn h(&self, x: usize, y: usize) -> Elem {
        self.hom.get(x, y)
    }

    /// Underlying order: same type and `1 ≤ 𝕏(x,y)`.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        let (p, r) = (self.ty(x), self.ty(y));
        p == r && self.q.hom(p, p).leq(self.q.id(p), self.h(x, y))
    }

    pub fn is_iso(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) && self.leq(y, x)
    }

    pub fn underlying_preorder(&self) -> Preorder {
        let n = self.len();
        let leq: Vec<bool> = (0..n * n).map(|k| self.leq(k / n, k % n)).collect();
        let separated =
            (0..n).all(|x| (0..n).all(|y| x == y || !(leq[x * n + y] && leq[y * n + x])));
        Preorder { n, leq, separated }
    }

    pub fn is_separated(&self) -> bool {
        self.underlying_preorder().separated
    }

    /// Elements of type `q`.
    pub fn of_type(&self, q: Obj) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&x| self.ty(x) == q)
    }

    /// Full subcategory on the given elements (in the given order).
    pub fn full_sub(&self, elems: &[usize]) -> QCategory {
        let names = elems.iter().map(|&x| self.name(x).to_string()).collect();
        let types: Vec<Obj> = elems.iter().map(|&x| self.ty(x)).collect();
        let hom = QRelation::from_fn(&types, &types, |a, b| self.h(elems[a], elems[b]));
        QCategory {
            q: self.q.clone(),
            set: TypedSet::new(names, types).expect("same length"),
            hom,
        }
    }
}

/// Checks `1_{|x|} ≤ 𝕏(x,x)` and `𝕏(y,z) ∘ 𝕏(x,y) ≤ 𝕏(x,z)`.
pub fn validate_category(q: &Quantaloid, hom: &QRelation) -> Vec<Violation> {
    let mut rep = Validation::new();
    let t = hom.dom();
    let n = t.len();
    for x in 0..n {
        let p = t[x];
        rep.check(
            q.hom(p, p).leq(q.id(p), hom.get(x, x)),
            "reflexivity",
            || format!("x = #{x}"),
        );
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let c = q.comp(t[x], t[y], t[z], hom.get(y, z), hom.get(x, y));
                rep.check(
                    q.hom(t[x], t[z]).leq(c, hom.get(x, z)),
                    "transitivity",
                    || format!("(x, y, z) = (#{x}, #{y}, #{z})"),
                );
            }
        }
    }
    rep.into_violations()
}

/// Like [`validate_category`] but with element names in witnesses.
pub fn validate_named(q: &Quantaloid, set: &TypedSet, hom: &QRelation) -> Vec<Violation> {
    validate_category(q, hom)
        .into_iter()
        .map(|mut v| {
            for i in (0..set.len()).rev() {
                v.witness = v.witness.replace(&format!("#{i}"), set.name(i));
            }
            v
        })
        .collect()
}

/// The underlying preorder of a category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preorder {
    pub n: usize,
    pub leq: Vec<bool>,
    pub separated: bool,
}

impl Preorder {
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }
}

/// Outcome of [`check_functor`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorCheck {
    pub is_functor: bool,
    pub fully_faithful: bool,
    pub witness: Option<String>,
}

/// Checks type preservation and `𝕏(x,x') ≤ 𝕐(fx,fx')`, and whether equality
/// holds throughout.
pub fn check_functor(x: &QCategory, y: &QCategory, f: &[usize]) -> FunctorCheck {
    let q = x.quantaloid();
    if f.len() != x.len() || f.iter().any(|&v| v >= y.len()) {
        return FunctorCheck {
            is_functor: false,
            fully_faithful: false,
            witness: Some("map is not total into the codomain".into()),
        };
    }
    for a in 0..x.len() {
        if x.ty(a) != y.ty(f[a]) {
            return FunctorCheck {
                is_functor: false,
                fully_faithful: false,
                witness: Some(format!("{} changes type under f", x.name(a))),
            };
        }
    }
    let mut ff = true;
    let mut ff_witness = None;
    for a in 0..x.len() {
        for b in 0..x.len() {
            let (u, v) = (x.h(a, b), y.h(f[a], f[b]));
            if !q.hom(x.ty(a), x.ty(b)).leq(u, v) {
                return FunctorCheck {
                    is_functor: false,
                    fully_faithful: false,
                    witness: Some(format!(
                        "X({}, {}) is not below Y(f{0}, f{1})",
                        x.name(a),
                        x.name(b)
                    )),
                };
            }
            if u != v && ff {
                ff = false;
                ff_witness = Some(format!(
                    "X({}, {}) differs from Y(f{0}, f{1})",
                    x.name(a),
                    x.name(b)
                ));
            }
        }
    }
    FunctorCheck {
        is_functor: true,
        fully_faithful: ff,
        witness: ff_witness,
    }
}

pub fn is_functor(x: &QCategory, y: &QCategory, f: &[usize]) -> bool {
    check_functor(x, y, f).is_functor
}

/// Pointwise order `f ≤ g` between maps into `y`.
pub fn functor_leq(y: &QCategory, f: &[usize], g: &[usize]) -> bool {
    f.iter().zip(g).all(|(&a, &b)| y.leq(a, b))
}

/// Composite `g ∘ f` of maps.
pub fn compose_maps(g: &[usize], f: &[usize]) -> Vec<usize> {
    f.iter().map(|&a| g[a]).collect()
}

/// `f ⊣ g` for functors `f: X → Y`, `g: Y → X`, decided by the hom equation
/// `𝕐(fx,y) = 𝕏(x,gy)` and, independently, by `1 ≤ gf` and `fg ≤ 1`.
pub fn check_adjunction(x: &QCategory, y: &QCategory, f: &[usize], g: &[usize]) -> Result<bool> {
    let hom_eq = (0..x.len()).all(|a| (0..y.len()).all(|b| y.h(f[a], b) == x.h(a, g[b])));
    let unit = (0..x.len()).all(|a| x.leq(a, g[f[a]]));
    let counit = (0..y.len()).all(|b| y.leq(f[g[b]], b));
    if hom_eq != (unit && counit) {
        return Err(Error::Inconsistent(format!(
            "adjunction criteria disagree (hom equation {hom_eq}, unit/counit {})",
            unit && counit
        )));
    }
    Ok(hom_eq)
}

/// Graph `f♮(x,y) = 𝕐(fx,y)` and cograph `f^♮(y,x) = 𝕐(y,fx)`.
pub fn graph_cograph(x: &QCategory, y: &QCategory, f: &[usize]) -> (QRelation, QRelation) {
    let graph = QRelation::from_fn(x.types(), y.types(), |a, b| y.h(f[a], b));
    let cograph = QRelation::from_fn(y.types(), x.types(), |b, a| y.h(b, f[a]));
    (graph, cograph)
}

/// `𝕐 ∘ φ ∘ 𝕏 = φ`.
pub fn is_distributor(x: &QCategory, y: &QCategory, phi: &QRelation) -> bool {
    let q = x.quantaloid();
    if phi.dom() != x.types() || phi.cod() != y.types() {
        return false;
    }
    let a = QRelation::compose(q, phi, x.hom()).expect("shapes match");
    let b = QRelation::compose(q, y.hom(), &a).expect("shapes match");
    b == *phi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{boolean, build_dq, lukasiewicz};

    fn two() -> Arc<Quantaloid> {
        Arc::new(boolean().into_quantaloid())
    }

    pub(crate) fn bool_cat(n: usize, rel: &[(usize, usize)]) -> QCategory {
        let q = two();
        let t = vec![Obj(0); n];
        let hom = QRelation::from_fn(&t, &t, |a, b| (a == b || rel.contains(&(a, b))) as Elem);
        QCategory::new(q, TypedSet::anonymous(t), hom).unwrap()
    }

    #[test]
    fn discrete_and_chain_validate() {
        let q = two();
        let d = QCategory::discrete(q.clone(), TypedSet::anonymous(vec![Obj(0); 3]));
        assert!(validate_category(&q, d.hom()).is_empty());
        let p = d.underlying_preorder();
        assert!(p.separated && !p.leq(0, 1));
        let c = bool_cat(2, &[(0, 1)]);
        assert!(c.leq(0, 1) && !c.leq(1, 0));
    }

    #[test]
    fn missing_composite_fails_transitivity() {
        let q = two();
        let t = vec![Obj(0); 3];
        let hom = QRelation::from_fn(&t, &t, |a, b| {
            (a == b || (a, b) == (0, 1) || (a, b) == (1, 2)) as Elem
        });
        let set = TypedSet::new(vec!["a".into(), "b".into(), "c".into()], t).unwrap();
        let v = validate_named(&q, &set, &hom);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].law, "transitivity");
        assert!(v[0].witness.contains("(a, b, c)"));
    }

    #[test]
    fn luk_threshold_order() {
        let dq = lukasiewicz(3).unwrap();
        let q = Arc::new(dq.into_quantaloid());
        let t = vec![Obj(0); 2];
        // α(x,y) = 1, α(y,x) = h
        let hom = QRelation::from_fn(
            &t,
            &t,
            |a, b| if a == b || (a, b) == (0, 1) { 2 } else { 1 },
        );
        let c = QCategory::new(q, TypedSet::anonymous(t), hom).unwrap();
        assert!(c.leq(0, 1) && !c.leq(1, 0));
    }

    #[test]
    fn functor_checks() {
        let c = bool_cat(2, &[(0, 1)]);
        let d = bool_cat(2, &[]);
        let id = check_functor(&c, &c, &[0, 1]);
        assert!(id.is_functor && id.fully_faithful);
        assert!(check_functor(&d, &c, &[0, 1]).is_functor);
        assert!(!check_functor(&d, &c, &[0, 1]).fully_faithful);
        assert!(!check_functor(&c, &c, &[1, 0]).is_functor);

        let dq = build_dq(&boolean()).unwrap();
        let q = dq.quantaloid().clone();
        let x = QCategory::discrete(q.clone(), TypedSet::anonymous(vec![Obj(1)]));
        let y = QCategory::discrete(q, TypedSet::anonymous(vec![Obj(0)]));
        assert!(!check_functor(&x, &y, &[0]).is_functor);
    }

    #[test]
    fn adjunctions() {
        let c = bool_cat(2, &[(0, 1)]);
        assert!(check_adjunction(&c, &c, &[0, 1], &[0, 1]).unwrap());
        // constant maps on a chain: const_bottom ⊣ const_top
        assert!(check_adjunction(&c, &c, &[0, 0], &[1, 1]).unwrap());
        assert!(!check_adjunction(&c, &c, &[1, 1], &[0, 0]).unwrap());
    }

    #[test]
    fn graph_of_point_and_distributors() {
        let x = bool_cat(1, &[]);
        let y = bool_cat(2, &[]);
        let (g, cg) = graph_cograph(&x, &y, &[0]);
        assert_eq!(g.entries(), &[1, 0]);
        let q = x.quantaloid();
        assert!(is_distributor(&x, &y, &g) && is_distributor(&y, &x, &cg));
        let comp = QRelation::compose(q, &cg, &g).unwrap();
        assert!(x.hom().leq(q, &comp).unwrap());
        assert!(QRelation::compose(q, &g, &cg)
            .unwrap()
            .leq(q, y.hom())
            .unwrap());

        // lower sets of the chain a ≤ b as distributors into a point
        let chain = bool_cat(2, &[(0, 1)]);
        let pt = bool_cat(1, &[]);
        let a = QRelation::from_fn(chain.types(), pt.types(), |x, _| (x == 0) as Elem);
        let b = QRelation::from_fn(chain.types(), pt.types(), |x, _| (x == 1) as Elem);
        assert!(is_distributor(&chain, &pt, &a));
        assert!(!is_distributor(&chain, &pt, &b));
    }
}
