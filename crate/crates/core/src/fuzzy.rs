//! Fuzzy sets, preordered fuzzy sets, fuzzy powersets and fuzzy closure
//! spaces over a finite divisible quantale `K`, through the quantaloid `DK`.

use std::sync::Arc;

use crate::algebra::{build_dq, validate_quantaloid, Dq, Elem, Obj, Quantale};
use crate::closure::{self, all_closure_spaces, ClosureSpace};
use crate::contdist::check_bijection;
use crate::qcat::category::validate_category;
use crate::qcat::presheaf::{presheaf_hom, Kind, Presheaf, PresheafCat};
use crate::qcat::{QCategory, QRelation, TypedSet};
use crate::report::{LawReport, Validation, Violation};
use crate::{Error, Result};

/// A fuzzy set: names with memberships in `K`, i.e. a typed set over `DK`.
pub fn fuzzy_set(dq: &Dq, names: Vec<String>, membership: &[Elem]) -> Result<TypedSet> {
    let types = membership.iter().map(|&m| dq.obj(m)).collect();
    let set = TypedSet::new(names, types)?;
    set.check_types(dq.quantaloid())?;
    Ok(set)
}

/// Outcome of [`validate_pofs`].
#[derive(Debug, Clone)]
pub struct PofsReport {
    pub violations: Vec<Violation>,
    pub global: bool,
    /// The same data as a `DK`-category, when the axioms hold.
    pub category: Option<QCategory>,
}

/// Checks `α(x,y) ≤ α(x,x)∧α(y,y)` and `(α(y,z)/α(y,y)) & α(x,y) ≤ α(x,z)`,
/// and that the verdict agrees with validating the induced `DK`-category.
pub fn validate_pofs(dq: &Dq, names: Vec<String>, alpha: &[Vec<Elem>]) -> Result<PofsReport> {
    let k = dq.base();
    let n = alpha.len();
    if alpha.iter().any(|row| row.len() != n) || names.len() != n {
        return Err(Error::TypeMismatch("fuzzy preorder must be square".into()));
    }
    let nm = |i: usize| names[i].clone();
    let mut v = Validation::new();
    for x in 0..n {
        for y in 0..n {
            let bound = k.meet(alpha[x][x], alpha[y][y]);
            v.check(k.leq(alpha[x][y], bound), "membership bound", || {
                format!(
                    "α({}, {}) = {} is not below α({0},{0}) ∧ α({1},{1}) = {}",
                    nm(x),
                    nm(y),
                    k.elem_name(alpha[x][y]),
                    k.elem_name(bound)
                )
            });
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let lhs = k.mul(k.over(alpha[y][z], alpha[y][y]), alpha[x][y]);
                v.check(k.leq(lhs, alpha[x][z]), "fuzzy transitivity", || {
                    format!(
                        "(α({1},{2}) / α({1},{1})) & α({0},{1}) is not below α({0},{2})",
                        nm(x),
                        nm(y),
                        nm(z)
                    )
                });
            }
        }
    }
    let global = (0..n).all(|x| alpha[x][x] == k.top());
    let axioms_ok = v.is_ok();
    let membership: Vec<Elem> = (0..n).map(|x| alpha[x][x]).collect();
    let set = fuzzy_set(dq, names, &membership)?;
    let q = dq.quantaloid();
    let mut entries = Vec::with_capacity(n * n);
    let mut representable = true;
    for x in 0..n {
        for y in 0..n {
            match dq.from_k(set.ty(x), set.ty(y), alpha[x][y]) {
                Some(e) => entries.push(e),
                None => {
                    representable = false;
                    entries.push(0);
                }
            }
        }
    }
    let category = if representable {
        let hom = QRelation::from_entries(q, set.types(), set.types(), entries)?;
        let cat_ok = validate_category(q, &hom).is_empty();
        if cat_ok != axioms_ok {
            return Err(Error::Inconsistent(format!(
                "fuzzy preorder axioms {axioms_ok} but DK-category check {cat_ok}"
            )));
        }
        cat_ok.then(|| QCategory::new_unchecked(q.clone(), set, hom))
    } else {
        if axioms_ok {
            return Err(Error::Inconsistent(
                "axioms hold but α is not a DK-relation".into(),
            ));
        }
        None
    };
    Ok(PofsReport {
        violations: v.into_violations(),
        global,
        category,
    })
}

/// `S((X,l,q),(X,l',q')) = q ∧ q' ∧ ⋀ₓ l'x / (q \ lx)`, entries in `K`.
pub fn fuzzy_hom(k: &Quantale, l: &[Elem], q: Elem, l2: &[Elem], q2: Elem) -> Elem {
    let mut acc = k.meet(q, q2);
    for x in 0..l.len() {
        acc = k.meet(acc, k.over(l2[x], k.under(q, l[x])));
    }
    acc
}

/// A presheaf on a discrete `DK`-category as `(n, q)` with values in `K`.
pub fn as_triple(dq: &Dq, set: &TypedSet, mu: &Presheaf) -> (Vec<Elem>, Elem) {
    let n = (0..set.len())
        .map(|x| dq.to_k(set.ty(x), mu.ty, mu.vals[x]))
        .collect();
    (n, mu.ty.0)
}

/// The fuzzy powerset `P(X,m)`, checked to be exactly the
/// triples with `nx ≤ mx ∧ q`, with homs given by `fuzzy_hom`.
pub fn fuzzy_powerset(dq: &Dq, set: &TypedSet, cap: usize) -> Result<PresheafCat> {
    let x = QCategory::discrete(dq.quantaloid().clone(), set.clone());
    let px = PresheafCat::presheaves(&x, cap)?;
    let k = dq.base();
    let triples: Vec<(Vec<Elem>, Elem)> =
        px.items().iter().map(|m| as_triple(dq, set, m)).collect();
    // enumerate all (n, q) in K^X × K and filter
    let mut expected = Vec::new();
    let size = k.len();
    for q in k.elements() {
        let total = size.pow(set.len() as u32);
        for code in 0..total {
            let mut c = code;
            let n: Vec<Elem> = (0..set.len())
                .map(|_| {
                    let e = (c % size) as Elem;
                    c /= size;
                    e
                })
                .collect();
            if (0..set.len()).all(|i| k.leq(n[i], k.meet(set.ty(i).0, q))) {
                expected.push((n, q));
            }
        }
    }
    let mut got = triples.clone();
    got.sort();
    expected.sort();
    if got != expected {
        return Err(Error::Inconsistent(format!(
            "enumerated presheaves ({}) differ from the triples nx ≤ mx ∧ q ({})",
            got.len(),
            expected.len()
        )));
    }
    let q = dq.quantaloid();
    for (a, (la, qa)) in triples.iter().enumerate() {
        for (b, (lb, qb)) in triples.iter().enumerate() {
            let generic = presheaf_hom(q, Kind::Presheaf, set.types(), px.item(a), px.item(b));
            let generic_k = dq.to_k(px.item(a).ty, px.item(b).ty, generic);
            if generic_k != fuzzy_hom(k, la, *qa, lb, *qb) {
                return Err(Error::Inconsistent(format!(
                    "hom formula disagrees at ({}, {})",
                    px.name(a),
                    px.name(b)
                )));
            }
        }
    }
    Ok(px)
}

/// The four fuzzy closure bullets evaluated in `K`: membership
/// preservation `M(c(n,q)) = q`, `S(μ,μ') ≤ S(cμ,cμ')`, `μ ≤ cμ` and
/// `ccμ = cμ`.
pub fn fuzzy_bullets(dq: &Dq, px: &PresheafCat, table: &[usize]) -> Vec<Violation> {
    let k = dq.base();
    let set = px.base().set();
    let triples: Vec<(Vec<Elem>, Elem)> =
        px.items().iter().map(|m| as_triple(dq, set, m)).collect();
    let mut v = Validation::new();
    if table.len() != px.len() || table.iter().any(|&t| t >= px.len()) {
        v.fail("total", || "table is not total".into());
        return v.into_violations();
    }
    for m in 0..px.len() {
        let (l, q) = &triples[m];
        let (cl, cq) = &triples[table[m]];
        v.check(cq == q, "membership", || {
            format!("M(c{}) differs from {}", px.name(m), k.elem_name(*q))
        });
        v.check(
            cq == q && (0..l.len()).all(|x| k.leq(l[x], cl[x])),
            "extensive",
            || format!("{} is not below its closure", px.name(m)),
        );
        v.check(table[table[m]] == table[m], "idempotent", || {
            format!("cc{0} ≠ c{0}", px.name(m))
        });
    }
    if v.has_failed("membership") {
        return v.into_violations();
    }
    for a in 0..px.len() {
        for b in 0..px.len() {
            let (la, qa) = &triples[a];
            let (lb, qb) = &triples[b];
            let (ca, cb) = (&triples[table[a]], &triples[table[b]]);
            let before = fuzzy_hom(k, la, *qa, lb, *qb);
            let after = fuzzy_hom(k, &ca.0, ca.1, &cb.0, cb.1);
            v.check(k.leq(before, after), "hom-preserving", || {
                format!(
                    "S({}, {}) is not below S(c{0}, c{1})",
                    px.name(a),
                    px.name(b)
                )
            });
        }
    }
    v.into_violations()
}

/// `α(x,y) = mx ∧ my ∧ ⋀_{(n,q) closed} (ny / my) \ nx`, in `K`.
pub fn fuzzy_specialization(dq: &Dq, space: &ClosureSpace) -> Vec<Vec<Elem>> {
    let k = dq.base();
    let set = space.base().set();
    let closed: Vec<(Vec<Elem>, Elem)> = space
        .closed_indices()
        .iter()
        .map(|&m| as_triple(dq, set, space.px().item(m)))
        .collect();
    let m: Vec<Elem> = (0..set.len()).map(|x| set.ty(x).0).collect();
    (0..set.len())
        .map(|x| {
            (0..set.len())
                .map(|y| {
                    let mut acc = k.meet(m[x], m[y]);
                    for (n, _) in &closed {
                        acc = k.meet(acc, k.under(k.over(n[y], m[y]), n[x]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Bullet validation against generic validation on an arbitrary table, and
/// (for genuine spaces) fuzzy specialization against the generic one.
pub fn check_fuzzy_closure(
    dq: &Dq,
    px: &Arc<PresheafCat>,
    table: &[usize],
    cap: usize,
) -> Result<bool> {
    let bullets = fuzzy_bullets(dq, px, table).is_empty();
    let generic = closure::validate_closure_space(px, table).is_empty();
    if bullets != generic {
        return Err(Error::Inconsistent(format!(
            "fuzzy bullets {bullets} but generic closure validation {generic}"
        )));
    }
    if generic {
        let space = ClosureSpace::new_unchecked("fuzzy", px.clone(), table.to_vec());
        let sp = closure::specialization(&space, cap)?;
        let fz = fuzzy_specialization(dq, &space);
        let set = space.base().set();
        for x in 0..set.len() {
            for y in 0..set.len() {
                if dq.to_k(set.ty(x), set.ty(y), sp.h(x, y)) != fz[x][y] {
                    return Err(Error::Inconsistent(format!(
                        "fuzzy specialization differs at ({}, {})",
                        set.name(x),
                        set.name(y)
                    )));
                }
            }
        }
    }
    Ok(generic)
}

/// All fuzzy sets over `K` with at most `max` points, named `x0, x1, …`.
pub fn small_fuzzy_sets(dq: &Dq, max: usize) -> Vec<TypedSet> {
    let k = dq.base();
    let mut out = Vec::new();
    for n in 0..=max {
        let total = k.len().pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let m: Vec<Elem> = (0..n)
                .map(|_| {
                    let e = (c % k.len()) as Elem;
                    c /= k.len();
                    e
                })
                .collect();
            out.push(TypedSet::anonymous(m.into_iter().map(Obj).collect()));
        }
    }
    out
}

/// Divisibility, `DK` laws, powerset formulas, closure validation and the
/// equivalence on small fuzzy carriers. `max_points` bounds the carriers
/// used for the closure and equivalence steps.
pub fn builtin_suite(k: &Quantale, max_points: usize, cap: usize) -> Vec<LawReport> {
    let suite = "fuzzy";
    let name = k.name().to_string();
    let mut out = Vec::new();
    let div = match k.is_divisible() {
        Ok(d) => d,
        Err(e) => {
            out.push(LawReport::fail(
                suite,
                format!("{name} divisibility"),
                e.to_string(),
            ));
            return out;
        }
    };
    if !div.divisible {
        out.push(LawReport::fail(
            suite,
            format!("{name} divisibility"),
            div.witness.unwrap_or_default(),
        ));
        return out;
    }
    out.push(LawReport::pass(suite, format!("{name} divisibility")));
    let dq = match build_dq(k) {
        Ok(d) => d,
        Err(e) => {
            out.push(LawReport::fail(
                suite,
                format!("D({name}) construction"),
                e.to_string(),
            ));
            return out;
        }
    };
    let mut laws = validate_quantaloid(dq.quantaloid());
    laws.extend(dq.check_closed_forms());
    out.push(LawReport::from_violations(
        suite,
        format!("D({name}) laws"),
        &laws,
    ));
    for set in small_fuzzy_sets(&dq, 2) {
        let inst = format!("{name} powerset on {}", describe_fuzzy(&dq, &set));
        out.push(match fuzzy_powerset(&dq, &set, cap) {
            Ok(px) => LawReport::pass(suite, inst)
                .with_detail(format!("{} potential fuzzy subsets", px.len())),
            Err(e) => LawReport::fail(suite, inst, e.to_string()),
        });
    }
    let mut spaces = Vec::new();
    for set in small_fuzzy_sets(&dq, max_points) {
        let inst = format!("{name} closure spaces on {}", describe_fuzzy(&dq, &set));
        let res = (|| -> Result<Vec<ClosureSpace>> {
            let px = Arc::new(fuzzy_powerset(&dq, &set, cap)?);
            let all = all_closure_spaces(&px, cap)?;
            for s in &all {
                if !check_fuzzy_closure(&dq, &px, s.table(), cap)? {
                    return Err(Error::Inconsistent(format!(
                        "{} fails validation",
                        s.name()
                    )));
                }
            }
            Ok(all)
        })();
        match res {
            Ok(all) => {
                out.push(
                    LawReport::pass(suite, inst)
                        .with_detail(format!("{} closure spaces", all.len())),
                );
                if set.len() <= 1 {
                    spaces.extend(all);
                }
            }
            Err(e) => out.push(LawReport::fail(suite, inst, e.to_string())),
        }
    }
    let mut pairs = 0usize;
    let mut failure = None;
    'outer: for s in &spaces {
        for t in &spaces {
            pairs += 1;
            match check_bijection(s, t, cap) {
                Ok(Ok(_)) => {}
                Ok(Err(w)) => {
                    failure = Some(w);
                    break 'outer;
                }
                Err(e) => {
                    failure = Some(e.to_string());
                    break 'outer;
                }
            }
        }
    }
    let inst = format!(
        "{name} closed continuous relations vs sup-maps, {} spaces on at most one point",
        spaces.len()
    );
    out.push(match failure {
        None => LawReport::pass(suite, inst).with_detail(format!("{pairs} ordered pairs")),
        Some(w) => LawReport::fail(suite, inst, w),
    });
    out
}

/// `{x0:m0, x1:m1}` with memberships named in `K`.
pub fn describe_fuzzy(dq: &Dq, set: &TypedSet) -> String {
    let parts: Vec<String> = (0..set.len())
        .map(|i| format!("{}:{}", set.name(i), dq.base().elem_name(set.ty(i).0)))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{boolean, drastic, godel, lukasiewicz};
    use crate::qcat::DEFAULT_CAP;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("x{i}")).collect()
    }

    #[test]
    fn pofs_examples() {
        let dq = build_dq(&lukasiewicz(3).unwrap()).unwrap();
        let r = validate_pofs(&dq, names(2), &[vec![1, 1], vec![0, 2]]).unwrap();
        assert!(r.violations.is_empty() && !r.global && r.category.is_some());
        let r = validate_pofs(&dq, names(2), &[vec![1, 2], vec![0, 2]]).unwrap();
        assert!(r.violations.iter().any(|v| v.law == "membership bound"));
        let d2 = build_dq(&boolean()).unwrap();
        let r = validate_pofs(&d2, names(2), &[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(r.violations.is_empty() && r.global);
    }

    #[test]
    fn powerset_counts() {
        let dq = build_dq(&lukasiewicz(3).unwrap()).unwrap();
        let set = fuzzy_set(&dq, names(1), &[1]).unwrap();
        assert_eq!(fuzzy_powerset(&dq, &set, DEFAULT_CAP).unwrap().len(), 5);
        let d2 = build_dq(&boolean()).unwrap();
        let set = fuzzy_set(&d2, names(2), &[1, 1]).unwrap();
        let p = fuzzy_powerset(&d2, &set, DEFAULT_CAP).unwrap();
        assert_eq!(p.of_type(Obj(1)).count(), 4);
        assert_eq!(p.of_type(Obj(0)).count(), 1);
    }

    #[test]
    fn one_point_identity_space() {
        let dq = build_dq(&lukasiewicz(3).unwrap()).unwrap();
        let set = fuzzy_set(&dq, names(1), &[1]).unwrap();
        let px = Arc::new(fuzzy_powerset(&dq, &set, DEFAULT_CAP).unwrap());
        let s = ClosureSpace::discrete(px.clone());
        assert!(check_fuzzy_closure(&dq, &px, s.table(), DEFAULT_CAP).unwrap());
        assert_eq!(fuzzy_specialization(&dq, &s), vec![vec![1]]);
    }

    #[test]
    fn suites() {
        for k in [boolean(), lukasiewicz(3).unwrap(), godel(3).unwrap()] {
            for r in builtin_suite(&k, 1, DEFAULT_CAP) {
                assert!(r.passed(), "{}", r.to_text());
            }
        }
        let r = builtin_suite(&drastic(4).unwrap(), 1, DEFAULT_CAP);
        assert_eq!(r.len(), 1);
        assert!(!r[0].passed());
    }
}
