//! Kan and dual Kan adjunctions of a distributor, and the image functors of
//! a functor.

use super::category::{graph_cograph, QCategory};
use super::presheaf::{Kind, Presheaf, PresheafCat};
use super::relation::QRelation;
use crate::algebra::Quantaloid;
use crate::{Error, Result};

/// `φ* λ = λ ∘ φ`: `(φ*λ)(x) = ⋁_y λ(y) ∘ φ(x,y)`, presheaves on `Y` to `X`.
pub fn star(q: &Quantaloid, phi: &QRelation, lam: &Presheaf) -> Presheaf {
    let (dx, dy) = (phi.dom(), phi.cod());
    let vals = (0..dx.len())
        .map(|x| {
            q.hom(dx[x], lam.ty).join_all(
                (0..dy.len()).map(|y| q.comp(dx[x], dy[y], lam.ty, lam.vals[y], phi.get(x, y))),
            )
        })
        .collect();
    Presheaf::new(lam.ty, vals)
}

/// `φ_* μ = μ ↙ φ`: `(φ_*μ)(y) = ⋀_x μ(x) ↙ φ(x,y)`, presheaves on `X` to `Y`.
pub fn lower_star(q: &Quantaloid, phi: &QRelation, mu: &Presheaf) -> Presheaf {
    let (dx, dy) = (phi.dom(), phi.cod());
    let vals = (0..dy.len())
        .map(|y| {
            q.hom(dy[y], mu.ty).meet_all(
                (0..dx.len()).map(|x| q.left_impl(dx[x], dy[y], mu.ty, mu.vals[x], phi.get(x, y))),
            )
        })
        .collect();
    Presheaf::new(mu.ty, vals)
}

/// `φ† μ = φ ∘ μ`: `(φ†μ)(y) = ⋁_x φ(x,y) ∘ μ(x)`, copresheaves on `X` to `Y`.
pub fn dagger(q: &Quantaloid, phi: &QRelation, mu: &Presheaf) -> Presheaf {
    let (dx, dy) = (phi.dom(), phi.cod());
    let vals = (0..dy.len())
        .map(|y| {
            q.hom(mu.ty, dy[y]).join_all(
                (0..dx.len()).map(|x| q.comp(mu.ty, dx[x], dy[y], phi.get(x, y), mu.vals[x])),
            )
        })
        .collect();
    Presheaf::new(mu.ty, vals)
}

/// `φ_† λ = φ ↘ λ`: `(φ_†λ)(x) = ⋀_y φ(x,y) ↘ λ(y)`, copresheaves on `Y` to `X`.
pub fn lower_dagger(q: &Quantaloid, phi: &QRelation, lam: &Presheaf) -> Presheaf {
    let (dx, dy) = (phi.dom(), phi.cod());
    let vals = (0..dx.len())
        .map(|x| {
            q.hom(lam.ty, dx[x]).meet_all(
                (0..dy.len())
                    .map(|y| q.right_impl(lam.ty, dx[x], dy[y], phi.get(x, y), lam.vals[y])),
            )
        })
        .collect();
    Presheaf::new(lam.ty, vals)
}

/// Tabulates a (co)presheaf operation as a map between enumerated
/// categories.
pub fn tabulate(
    from: &PresheafCat,
    to: &PresheafCat,
    op: impl Fn(&Presheaf) -> Presheaf,
) -> Result<Vec<usize>> {
    from.items()
        .iter()
        .map(|m| to.expect_index(&op(m)))
        .collect()
}

/// The four Kan evaluators of `φ: X ⇸ Y` as tables over enumerated
/// categories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KanTables {
    /// `φ*: P𝕐 → P𝕏`
    pub star: Vec<usize>,
    /// `φ_*: P𝕏 → P𝕐`
    pub lower_star: Vec<usize>,
    /// `φ†: P†𝕏 → P†𝕐`
    pub dagger: Vec<usize>,
    /// `φ_†: P†𝕐 → P†𝕏`
    pub lower_dagger: Vec<usize>,
}

pub fn kan_adjoints(
    phi: &QRelation,
    px: &PresheafCat,
    py: &PresheafCat,
    pdx: &PresheafCat,
    pdy: &PresheafCat,
) -> Result<KanTables> {
    let q = px.quantaloid();
    Ok(KanTables {
        star: tabulate(py, px, |l| star(q, phi, l))?,
        lower_star: tabulate(px, py, |m| lower_star(q, phi, m))?,
        dagger: tabulate(pdx, pdy, |m| dagger(q, phi, m))?,
        lower_dagger: tabulate(pdy, pdx, |l| lower_dagger(q, phi, l))?,
    })
}

/// Checks `λ ≤ φ_*φ*λ`, `φ*φ_*μ ≤ μ` and the dual pair `φ_† ⊣ φ†`
/// (in the underlying orders of the copresheaf categories). Returns the
/// first failure.
pub fn check_kan_inequalities(
    t: &KanTables,
    px: &PresheafCat,
    py: &PresheafCat,
    pdx: &PresheafCat,
    pdy: &PresheafCat,
) -> Option<String> {
    for l in 0..py.len() {
        if !py.leq(l, t.lower_star[t.star[l]]) {
            return Some(format!("unit of φ* ⊣ φ_* fails at {}", py.name(l)));
        }
    }
    for m in 0..px.len() {
        if !px.leq(t.star[t.lower_star[m]], m) {
            return Some(format!("counit of φ* ⊣ φ_* fails at {}", px.name(m)));
        }
    }
    for l in 0..pdy.len() {
        if !pdy.leq(l, t.dagger[t.lower_dagger[l]]) {
            return Some(format!("unit of φ_† ⊣ φ† fails at {}", pdy.name(l)));
        }
    }
    for m in 0..pdx.len() {
        if !pdx.leq(t.lower_dagger[t.dagger[m]], m) {
            return Some(format!("counit of φ_† ⊣ φ† fails at {}", pdx.name(m)));
        }
    }
    None
}

/// `f→ = (f^♮)*: P𝕏 → P𝕐`.
pub fn image_forward(
    x: &QCategory,
    y: &QCategory,
    f: &[usize],
    px: &PresheafCat,
    py: &PresheafCat,
) -> Result<Vec<usize>> {
    let (_, cograph) = graph_cograph(x, y, f);
    tabulate(px, py, |m| star(x.quantaloid(), &cograph, m))
}

/// `f← = (f♮)*: P𝕐 → P𝕏`.
pub fn image_backward(
    x: &QCategory,
    y: &QCategory,
    f: &[usize],
    px: &PresheafCat,
    py: &PresheafCat,
) -> Result<Vec<usize>> {
    let (graph, _) = graph_cograph(x, y, f);
    tabulate(py, px, |l| star(x.quantaloid(), &graph, l))
}

/// `f⇒ = (f♮)†: P†𝕏 → P†𝕐`.
pub fn image_dag_forward(
    x: &QCategory,
    y: &QCategory,
    f: &[usize],
    pdx: &PresheafCat,
    pdy: &PresheafCat,
) -> Result<Vec<usize>> {
    let (graph, _) = graph_cograph(x, y, f);
    tabulate(pdx, pdy, |m| dagger(x.quantaloid(), &graph, m))
}

/// `f⇐ = (f^♮)†: P†𝕐 → P†𝕏`.
pub fn image_dag_backward(
    x: &QCategory,
    y: &QCategory,
    f: &[usize],
    pdx: &PresheafCat,
    pdy: &PresheafCat,
) -> Result<Vec<usize>> {
    let (_, cograph) = graph_cograph(x, y, f);
    tabulate(pdy, pdx, |l| dagger(x.quantaloid(), &cograph, l))
}

/// `f←λ` computed directly as `x ↦ λ(fx)`.
pub fn restrict(f: &[usize], lam: &Presheaf) -> Presheaf {
    Presheaf::new(lam.ty, f.iter().map(|&b| lam.vals[b]).collect())
}

/// Ensures `px` is a presheaf (not copresheaf) category.
pub fn require_kind(pc: &PresheafCat, kind: Kind) -> Result<()> {
    if pc.kind() != kind {
        return Err(Error::TypeMismatch("wrong (co)presheaf category".into()));
    }
    Ok(())
}
