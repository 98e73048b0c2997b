//! Exhaustive and seeded generation of small instances.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Elem, Obj, Quantaloid};
use crate::qcat::{QCategory, QRelation, TypedSet};
use crate::{Error, Result};

/// Every `Q`-category on `n` labelled elements, all type assignments.
/// Fails once more than `cap` are found.
pub fn all_categories(q: &Arc<Quantaloid>, n: usize, cap: usize) -> Result<Vec<QCategory>> {
    let mut out = Vec::new();
    let m = q.num_objects();
    let mut types = vec![Obj(0); n];
    type_sequences(m, n, 0, &mut types, &mut |t| {
        let mut cur = vec![0 as Elem; n * n];
        fill(q, t, 0, &mut cur, &mut out, cap)
    })?;
    Ok(out)
}

fn type_sequences(
    m: usize,
    n: usize,
    i: usize,
    cur: &mut Vec<Obj>,
    f: &mut impl FnMut(&[Obj]) -> Result<()>,
) -> Result<()> {
    if i == n {
        return f(cur);
    }
    for t in 0..m {
        cur[i] = Obj(t as u16);
        type_sequences(m, n, i + 1, cur, f)?;
    }
    Ok(())
}

fn fill(
    q: &Arc<Quantaloid>,
    t: &[Obj],
    k: usize,
    cur: &mut Vec<Elem>,
    out: &mut Vec<QCategory>,
    cap: usize,
) -> Result<()> {
    let n = t.len();
    if k == n * n {
        if out.len() >= cap {
            return Err(Error::CapExceeded {
                what: "categories".into(),
                cap,
            });
        }
        let hom = QRelation::from_fn(t, t, |a, b| cur[a * n + b]);
        out.push(QCategory::new_unchecked(
            q.clone(),
            TypedSet::anonymous(t.to_vec()),
            hom,
        ));
        return Ok(());
    }
    let (x, y) = (k / n, k % n);
    let l = q.hom(t[x], t[y]);
    for e in l.elements() {
        if x == y && !l.leq(q.id(t[x]), e) {
            continue;
        }
        cur[k] = e;
        if transitive_so_far(q, t, cur, k) {
            fill(q, t, k + 1, cur, out, cap)?;
        }
    }
    Ok(())
}

/// Transitivity on every triple whose three entries are among the first
/// `k + 1` (row-major) and which involves entry `k`.
fn transitive_so_far(q: &Quantaloid, t: &[Obj], cur: &[Elem], k: usize) -> bool {
    let n = t.len();
    let set = |a: usize, b: usize| a * n + b <= k;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (xy, yz, xz) = (x * n + y, y * n + z, x * n + z);
                if !(set(x, y) && set(y, z) && set(x, z)) || (xy != k && yz != k && xz != k) {
                    continue;
                }
                let c = q.comp(t[x], t[y], t[z], cur[yz], cur[xy]);
                if !q.hom(t[x], t[z]).leq(c, cur[xz]) {
                    return false;
                }
            }
        }
    }
    true
}

/// All categories on at most `max` elements.
pub fn categories_up_to(q: &Arc<Quantaloid>, max: usize, cap: usize) -> Result<Vec<QCategory>> {
    let mut out = Vec::new();
    for n in 0..=max {
        out.extend(all_categories(q, n, cap.saturating_sub(out.len()))?);
    }
    Ok(out)
}

/// One representative per isomorphism class of lattices with `n` elements,
/// as order matrices `leq[a][b]`, bottom first.
pub fn lattices(n: usize) -> Vec<Vec<Vec<bool>>> {
    let mut classes: BTreeSet<Vec<Vec<bool>>> = BTreeSet::new();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|(a, b)| a < b)
        .collect();
    // every order can be relabeled so that a < b implies index(a) < index(b)
    for mask in 0u32..(1 << pairs.len()) {
        let mut leq = vec![vec![false; n]; n];
        for (i, v) in leq.iter_mut().enumerate() {
            v[i] = true;
        }
        for (bit, &(a, b)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                leq[a][b] = true;
            }
        }
        if !is_transitive(&leq) || !is_lattice(&leq) {
            continue;
        }
        classes.insert(canonical(&leq));
    }
    classes.into_iter().collect()
}

/// Lattices with at most `max` elements (at least one element).
pub fn lattices_up_to(max: usize) -> Vec<Vec<Vec<bool>>> {
    (1..=max).flat_map(lattices).collect()
}

fn is_transitive(leq: &[Vec<bool>]) -> bool {
    let n = leq.len();
    (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(leq[a][b] && leq[b][c]) || leq[a][c])))
}

fn is_lattice(leq: &[Vec<bool>]) -> bool {
    let n = leq.len();
    let least = |s: &[usize]| s.iter().copied().find(|&j| s.iter().all(|&c| leq[j][c]));
    let has_bottom = least(&(0..n).collect::<Vec<_>>()).is_some();
    has_bottom
        && (0..n).all(|a| {
            (0..n).all(|b| {
                let ub: Vec<usize> = (0..n).filter(|&c| leq[a][c] && leq[b][c]).collect();
                least(&ub).is_some()
            })
        })
}

fn canonical(leq: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = leq.len();
    let mut best: Option<Vec<Vec<bool>>> = None;
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |p| {
        // keep only linear extensions so that the bottom comes first
        if (0..n).any(|a| (0..n).any(|b| leq[p[a]][p[b]] && a > b)) {
            return;
        }
        let m: Vec<Vec<bool>> = (0..n)
            .map(|a| (0..n).map(|b| leq[p[a]][p[b]]).collect())
            .collect();
        if best.as_ref().is_none_or(|b| m > *b) {
            best = Some(m);
        }
    });
    best.expect("a linear extension exists")
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

/// A `2`-category from an order matrix, elements named `l0, l1, …`.
pub fn order_category(two: &Arc<Quantaloid>, leq: &[Vec<bool>]) -> QCategory {
    let n = leq.len();
    let t = vec![Obj(0); n];
    let hom = QRelation::from_fn(&t, &t, |a, b| leq[a][b] as Elem);
    let names = (0..n).map(|i| format!("l{i}")).collect();
    QCategory::new_unchecked(
        two.clone(),
        TypedSet::new(names, t).expect("same length"),
        hom,
    )
}

/// Seeded generator of random instances.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Uniform in `lo..=hi`.
    pub fn rng_range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi.max(lo))
    }

    /// A random relation with the given types.
    pub fn relation(&mut self, q: &Quantaloid, dom: &[Obj], cod: &[Obj]) -> QRelation {
        QRelation::from_fn(dom, cod, |x, y| {
            let l = q.hom(dom[x], cod[y]);
            self.rng.gen_range(0..l.len()) as Elem
        })
    }

    /// A random category on `n` elements: the reflexive-transitive closure
    /// of a random relation.
    pub fn category(&mut self, q: &Arc<Quantaloid>, n: usize) -> QCategory {
        let m = q.num_objects();
        let types: Vec<Obj> = (0..n)
            .map(|_| Obj(self.rng.gen_range(0..m) as u16))
            .collect();
        let r = self.relation(q, &types, &types);
        let mut h = r
            .join(q, &QRelation::identity(q, &types))
            .expect("same shape");
        loop {
            let next = h
                .join(q, &QRelation::compose(q, &h, &h).expect("same shape"))
                .expect("same shape");
            if next == h {
                break;
            }
            h = next;
        }
        QCategory::new_unchecked(q.clone(), TypedSet::anonymous(types), h)
    }

    /// A random distributor `x ⇸ y`: `𝕐 ∘ φ ∘ 𝕏` for a random `φ`.
    pub fn distributor(&mut self, x: &QCategory, y: &QCategory) -> QRelation {
        let q = x.quantaloid();
        let phi = self.relation(q, x.types(), y.types());
        let a = QRelation::compose(q, &phi, x.hom()).expect("shapes match");
        QRelation::compose(q, y.hom(), &a).expect("shapes match")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{boolean, build_dq, lukasiewicz};
    use crate::qcat::category::{is_distributor, validate_category};

    #[test]
    fn preorder_counts() {
        let two = Arc::new(boolean().into_quantaloid());
        let counts: Vec<usize> = (0..=3)
            .map(|n| all_categories(&two, n, 1000).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 1, 4, 29]);
        let dq = build_dq(&lukasiewicz(3).unwrap()).unwrap();
        let one: usize = all_categories(dq.quantaloid(), 1, 1000).unwrap().len();
        assert_eq!(one, 3);
        for c in all_categories(&two, 3, 1000).unwrap() {
            assert!(validate_category(&two, c.hom()).is_empty());
        }
    }

    #[test]
    fn pruned_enumeration_matches_brute_force() {
        use crate::qcat::relation::all_relations;
        let dq = build_dq(&lukasiewicz(3).unwrap()).unwrap();
        let q = dq.quantaloid();
        for n in 0..=2 {
            let mut brute = 0;
            for code in 0..3usize.pow(n as u32) {
                let t: Vec<Obj> = (0..n)
                    .map(|i| Obj((code / 3usize.pow(i as u32) % 3) as u16))
                    .collect();
                brute += all_relations(q, &t, &t)
                    .iter()
                    .filter(|r| validate_category(q, r).is_empty())
                    .count();
            }
            assert_eq!(all_categories(q, n, 100_000).unwrap().len(), brute);
        }
    }

    #[test]
    fn lattice_classes() {
        let counts: Vec<usize> = (1..=5).map(|n| lattices(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 5]);
    }

    #[test]
    fn random_instances_are_valid_and_reproducible() {
        let dq = build_dq(&lukasiewicz(3).unwrap()).unwrap();
        let q = dq.quantaloid().clone();
        let mut s = Sampler::new(7);
        let mut t = Sampler::new(7);
        for _ in 0..50 {
            let x = s.category(&q, 2);
            let y = s.category(&q, 2);
            assert!(validate_category(&q, x.hom()).is_empty());
            let phi = s.distributor(&x, &y);
            assert!(is_distributor(&x, &y, &phi));
            let x2 = t.category(&q, 2);
            let y2 = t.category(&q, 2);
            assert_eq!((x.hom(), y.hom()), (x2.hom(), y2.hom()));
            assert_eq!(phi, t.distributor(&x2, &y2));
        }
    }
}
