//! One-object quantaloids: unital quantales, the built-in finite chains and
//! the divisibility test.

use super::lattice::{Elem, FiniteLattice};
use super::quantaloid::{validate_quantaloid, Obj, Quantaloid};
use crate::report::Violation;
use crate::{Error, Result};

/// Largest chain length accepted by the built-in constructors.
pub const MAX_BUILTIN: usize = 8;

const STAR: Obj = Obj(0);

/// A unital quantale, stored as a quantaloid with the single object `*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantale(Quantaloid);

impl Quantale {
    /// Builds a quantale from its lattice and multiplication table
    /// (`mul[a * n + b] = a & b`). Laws are not checked here.
    pub fn from_table(
        name: impl Into<String>,
        lattice: FiniteLattice,
        mul: Vec<Elem>,
        unit: Elem,
    ) -> Result<Self> {
        let n = lattice.len();
        if mul.len() != n * n {
            return Err(Error::TypeMismatch(format!(
                "multiplication table needs {} entries, got {}",
                n * n,
                mul.len()
            )));
        }
        let q = Quantaloid::from_fn(
            name,
            vec!["*".into()],
            vec![lattice],
            vec![unit],
            |_, _, _, a, b| Ok(mul[a as usize * n + b as usize]),
        )?;
        Ok(Quantale(q))
    }

    /// Wraps a one-object quantaloid.
    pub fn from_quantaloid(q: Quantaloid) -> Result<Self> {
        if q.num_objects() != 1 {
            return Err(Error::TypeMismatch(format!(
                "a quantale has one object, {} has {}",
                q.name(),
                q.num_objects()
            )));
        }
        Ok(Quantale(q))
    }

    pub fn as_quantaloid(&self) -> &Quantaloid {
        &self.0
    }

    pub fn into_quantaloid(self) -> Quantaloid {
        self.0
    }

    pub fn name(&self) -> &str {
        self.0.name()
    }

    pub fn lattice(&self) -> &FiniteLattice {
        self.0.hom(STAR, STAR)
    }

    pub fn len(&self) -> usize {
        self.lattice().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        self.lattice().elements()
    }

    pub fn elem_name(&self, e: Elem) -> &str {
        self.lattice().name(e)
    }

    pub fn unit(&self) -> Elem {
        self.0.id(STAR)
    }

    pub fn top(&self) -> Elem {
        self.lattice().top()
    }

    pub fn bottom(&self) -> Elem {
        self.lattice().bottom()
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.lattice().leq(a, b)
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.lattice().meet(a, b)
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.lattice().join(a, b)
    }

    /// `x & y`.
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.0.comp(STAR, STAR, STAR, x, y)
    }

    /// `z / y`, the largest `x` with `x & y ≤ z`.
    pub fn over(&self, z: Elem, y: Elem) -> Elem {
        self.0.left_impl(STAR, STAR, STAR, z, y)
    }

    /// `x \ z`, the largest `y` with `x & y ≤ z`.
    pub fn under(&self, x: Elem, z: Elem) -> Elem {
        self.0.right_impl(STAR, STAR, STAR, x, z)
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate_quantaloid(&self.0)
    }

    /// Evaluates the four equivalent characterisations of divisibility.
    ///
    /// Returns the common verdict; if they disagree, or a divisible quantale
    /// has a unit other than top, the result is `Error::Inconsistent`.
    pub fn is_divisible(&self) -> Result<Divisibility> {
        let els: Vec<Elem> = self.elements().collect();
        let name = |e: Elem| self.elem_name(e).to_string();

        let mut w1 = None;
        'i: for &x in &els {
            for &y in &els {
                if !self.leq(x, y) {
                    continue;
                }
                let a = els.iter().any(|&a| self.mul(y, a) == x);
                let b = els.iter().any(|&b| self.mul(b, y) == x);
                if !(a && b) {
                    let side = if a { "b & y" } else { "y & a" };
                    w1 = Some(format!(
                        "x = {} ≤ y = {} but no element solves {} = x",
                        name(x),
                        name(y),
                        side
                    ));
                    break 'i;
                }
            }
        }

        let mut w2 = None;
        'ii: for &x in &els {
            for &y in &els {
                if self.leq(x, y)
                    && !(self.mul(y, self.under(y, x)) == x && self.mul(self.over(x, y), y) == x)
                {
                    w2 = Some(format!("x = {}, y = {}", name(x), name(y)));
                    break 'ii;
                }
            }
        }

        let mut w3 = None;
        'iii: for &x in &els {
            for &y in &els {
                for &z in &els {
                    if self.leq(x, z)
                        && self.leq(y, z)
                        && self.mul(x, self.under(z, y)) != self.mul(self.over(x, z), y)
                    {
                        w3 = Some(format!("x = {}, y = {}, z = {}", name(x), name(y), name(z)));
                        break 'iii;
                    }
                }
            }
        }

        let mut w4 = None;
        'iv: for &x in &els {
            for &y in &els {
                let m = self.meet(x, y);
                if self.mul(x, self.under(x, y)) != m || self.mul(self.over(y, x), x) != m {
                    w4 = Some(format!("x = {}, y = {}", name(x), name(y)));
                    break 'iv;
                }
            }
        }

        let verdicts = [w1.is_none(), w2.is_none(), w3.is_none(), w4.is_none()];
        if verdicts.iter().any(|&v| v != verdicts[3]) {
            return Err(Error::Inconsistent(format!(
                "divisibility conditions disagree on {}: {:?}",
                self.name(),
                verdicts
            )));
        }
        let divisible = verdicts[3];
        if divisible && self.unit() != self.top() {
            return Err(Error::Inconsistent(format!(
                "{} is divisible but its unit is not the top element",
                self.name()
            )));
        }
        Ok(Divisibility {
            divisible,
            witness: w1.or(w4),
        })
    }

    /// `Ok(())` if divisible, otherwise `Error::NotDivisible` carrying the
    /// witness.
    pub fn require_divisible(&self) -> Result<()> {
        let d = self.is_divisible()?;
        if d.divisible {
            Ok(())
        } else {
            Err(Error::NotDivisible(format!(
                "{}: {}",
                self.name(),
                d.witness.unwrap_or_default()
            )))
        }
    }
}

/// Outcome of [`Quantale::is_divisible`]. The witness, when present, is for
/// the first condition (existence of quotients).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisibility {
    pub divisible: bool,
    pub witness: Option<String>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Reduced-fraction names `i/(n-1)` for the `n`-chain.
pub fn chain_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            let d = n - 1;
            if i == 0 {
                "0".to_string()
            } else if i == d {
                "1".to_string()
            } else {
                let g = gcd(i, d);
                format!("{}/{}", i / g, d / g)
            }
        })
        .collect()
}

fn chain_quantale(name: String, n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Quantale> {
    if !(2..=MAX_BUILTIN).contains(&n) {
        return Err(Error::Unsupported(format!(
            "{name}: chain length must lie in 2..={MAX_BUILTIN}"
        )));
    }
    let lat = FiniteLattice::chain(chain_names(n))?;
    let mul = (0..n * n).map(|k| f(k / n, k % n) as Elem).collect();
    Quantale::from_table(name, lat, mul, (n - 1) as Elem)
}

/// The two-element Boolean algebra.
pub fn boolean() -> Quantale {
    chain_quantale("2".into(), 2, |a, b| a.min(b)).expect("valid")
}

/// The `n`-chain with `&` = min.
pub fn godel(n: usize) -> Result<Quantale> {
    chain_quantale(format!("godel({n})"), n, |a, b| a.min(b))
}

/// The `n`-chain with the Łukasiewicz t-norm `max(0, a + b - (n-1))`.
pub fn lukasiewicz(n: usize) -> Result<Quantale> {
    chain_quantale(format!("luk({n})"), n, move |a, b| {
        (a + b).saturating_sub(n - 1)
    })
}

/// The `n`-chain with the drastic product: `1 & b = b`, `a & 1 = a`, else 0.
pub fn drastic(n: usize) -> Result<Quantale> {
    chain_quantale(format!("drastic({n})"), n, move |a, b| {
        if a == n - 1 {
            b
        } else if b == n - 1 {
            a
        } else {
            0
        }
    })
}
