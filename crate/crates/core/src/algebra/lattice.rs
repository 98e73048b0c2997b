//! Finite complete lattices given by an explicit order table.

use crate::{Error, Result};

/// Index of an element inside one finite lattice (a hom-set of a quantaloid).
pub type Elem = u16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Join,
    Meet,
}

/// A finite lattice. Elements are indices `0..len()` in insertion order;
/// `names` holds their opaque symbols.
///
/// Joins and meets of pairs are tabulated on construction, so every bound
/// query is a table lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    names: Vec<String>,
    leq: Vec<bool>,
    join: Vec<Elem>,
    meet: Vec<Elem>,
    bottom: Elem,
    top: Elem,
}

impl FiniteLattice {
    /// Builds a lattice from a full order table (`leq[a * n + b]` iff `a <= b`).
    ///
    /// Fails unless the table is a partial order in which every pair has a
    /// join and a least element exists; for a finite poset that is exactly
    /// completeness.
    pub fn from_order(names: Vec<String>, leq: Vec<bool>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::NotALattice("empty carrier has no bottom".into()));
        }
        if n > Elem::MAX as usize {
            return Err(Error::NotALattice(format!("{n} elements is too many")));
        }
        if leq.len() != n * n {
            return Err(Error::NotALattice("order table has the wrong size".into()));
        }
        let le = |a: usize, b: usize| leq[a * n + b];
        for a in 0..n {
            if !le(a, a) {
                return Err(Error::NotALattice(format!("not reflexive at {}", names[a])));
            }
            for b in 0..n {
                if a != b && le(a, b) && le(b, a) {
                    return Err(Error::NotALattice(format!(
                        "not antisymmetric: {} <= {} <= {}",
                        names[a], names[b], names[a]
                    )));
                }
                for c in 0..n {
                    if le(a, b) && le(b, c) && !le(a, c) {
                        return Err(Error::NotALattice(format!(
                            "not transitive: {} <= {} <= {}",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        let least = |cands: &mut dyn Iterator<Item = usize>| -> Option<usize> {
            let cs: Vec<usize> = cands.collect();
            cs.iter().copied().find(|&c| cs.iter().all(|&d| le(c, d)))
        };
        let greatest = |cands: &mut dyn Iterator<Item = usize>| -> Option<usize> {
            let cs: Vec<usize> = cands.collect();
            cs.iter().copied().find(|&c| cs.iter().all(|&d| le(d, c)))
        };
        let bottom =
            least(&mut (0..n)).ok_or_else(|| Error::NotALattice("no least element".into()))?;
        let top = greatest(&mut (0..n))
            .ok_or_else(|| Error::NotALattice("no greatest element".into()))?;
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let j = least(&mut (0..n).filter(|&c| le(a, c) && le(b, c))).ok_or_else(|| {
                    Error::NotALattice(format!("{} and {} have no join", names[a], names[b]))
                })?;
                let m =
                    greatest(&mut (0..n).filter(|&c| le(c, a) && le(c, b))).ok_or_else(|| {
                        Error::NotALattice(format!("{} and {} have no meet", names[a], names[b]))
                    })?;
                join[a * n + b] = j as Elem;
                meet[a * n + b] = m as Elem;
            }
        }
        Ok(FiniteLattice {
            names,
            leq,
            join,
            meet,
            bottom: bottom as Elem,
            top: top as Elem,
        })
    }

    /// Builds a lattice from generating pairs `a <= b`, taking the
    /// reflexive-transitive closure first.
    pub fn from_pairs(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            leq[a * n + a] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::NotAnElement {
                    elem: a.max(b),
                    context: "order pairs".into(),
                });
            }
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for a in 0..n {
                if leq[a * n + k] {
                    for b in 0..n {
                        if leq[k * n + b] {
                            leq[a * n + b] = true;
                        }
                    }
                }
            }
        }
        Self::from_order(names, leq)
    }

    /// A chain ordered by position.
    pub fn chain(names: Vec<String>) -> Result<Self> {
        let n = names.len();
        let leq = (0..n * n).map(|i| i / n <= i % n).collect();
        Self::from_order(names, leq)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        0..self.names.len() as Elem
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<Elem> {
        self.names.iter().position(|n| n == name).map(|i| i as Elem)
    }

    pub fn contains(&self, e: Elem) -> bool {
        (e as usize) < self.names.len()
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a as usize * self.len() + b as usize]
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a as usize * self.len() + b as usize]
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a as usize * self.len() + b as usize]
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn join_all(&self, it: impl IntoIterator<Item = Elem>) -> Elem {
        it.into_iter().fold(self.bottom, |a, b| self.join(a, b))
    }

    pub fn meet_all(&self, it: impl IntoIterator<Item = Elem>) -> Elem {
        it.into_iter().fold(self.top, |a, b| self.meet(a, b))
    }

    /// Least upper bound or greatest lower bound of `set`; the empty set
    /// yields bottom resp. top.
    pub fn bound(&self, set: &[Elem], dir: Bound) -> Result<Elem> {
        if let Some(&bad) = set.iter().find(|&&e| !self.contains(e)) {
            return Err(Error::NotAnElement {
                elem: bad as usize,
                context: format!("lattice {{{}}}", self.names.join(",")),
            });
        }
        Ok(match dir {
            Bound::Join => self.join_all(set.iter().copied()),
            Bound::Meet => self.meet_all(set.iter().copied()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn chain_bounds() {
        let two = FiniteLattice::chain(names(&["0", "1"])).unwrap();
        assert_eq!(two.bound(&[], Bound::Join).unwrap(), 0);
        assert_eq!(two.bound(&[], Bound::Meet).unwrap(), 1);

        let l3 = FiniteLattice::chain(names(&["0", "h", "1"])).unwrap();
        assert_eq!(l3.bound(&[1, 2], Bound::Meet).unwrap(), 1);
        assert_eq!(l3.bound(&[0, 1], Bound::Join).unwrap(), 1);
    }

    #[test]
    fn foreign_element_is_rejected() {
        let two = FiniteLattice::chain(names(&["0", "1"])).unwrap();
        assert!(matches!(
            two.bound(&[0, 5], Bound::Join),
            Err(Error::NotAnElement { elem: 5, .. })
        ));
    }

    #[test]
    fn diamond_from_pairs() {
        // bottom, a, b, top
        let d = FiniteLattice::from_pairs(
            names(&["bot", "a", "b", "top"]),
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
        )
        .unwrap();
        assert_eq!(d.join(1, 2), 3);
        assert_eq!(d.meet(1, 2), 0);
        assert_eq!(d.bottom(), 0);
        assert_eq!(d.top(), 3);
    }

    #[test]
    fn antichain_is_not_a_lattice() {
        let err = FiniteLattice::from_pairs(names(&["a", "b"]), &[]).unwrap_err();
        assert!(matches!(err, Error::NotALattice(_)));
    }

    #[test]
    fn cycle_violates_antisymmetry() {
        let err = FiniteLattice::from_pairs(names(&["a", "b"]), &[(0, 1), (1, 0)]).unwrap_err();
        assert!(err.to_string().contains("antisymmetric"));
    }

    #[test]
    fn non_lattice_poset_has_no_join() {
        // 0 < a, b < c, d < 1 with a,b both below c and d: a∨b not unique.
        let l = FiniteLattice::from_pairs(
            names(&["0", "a", "b", "c", "d", "1"]),
            &[
                (0, 1),
                (0, 2),
                (1, 3),
                (1, 4),
                (2, 3),
                (2, 4),
                (3, 5),
                (4, 5),
            ],
        );
        assert!(l.is_err());
    }
}
