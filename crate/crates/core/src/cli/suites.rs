//! Law suites over exhaustively enumerated and seeded instances. Each suite
//! returns one report per checked family; only a resource cap aborts a suite.

use std::sync::Arc;

use crate::algebra::{
    boolean, build_dq, drastic, godel, lukasiewicz, validate_quantaloid, Dq, Obj, Quantale,
    Quantaloid,
};
use crate::closure::{
    all_closure_spaces, classical_specialization, continuity_conditions, functor_d, functor_i,
    is_alexandrov, specialization, sup_on_closed, ClosureSpace,
};
use crate::contdist::{
    check_bijection, check_closure_laws, check_composite_laws, check_continuous_dist,
    discrete_reduction_witnesses, dist_conditions,
};
use crate::enumerate::{categories_up_to, lattices_up_to, order_category, Sampler};
use crate::fuzzy::builtin_suite;
use crate::qcat::complete::{is_complete, presheaf_sup_formula, sup};
use crate::qcat::kan::{check_kan_inequalities, kan_adjoints};
use crate::qcat::relation::all_relations;
use crate::qcat::{is_distributor, PresheafCat, QCategory, TypedSet, DEFAULT_CAP};
use crate::report::LawReport;
use crate::{Error, Result};

/// Number of seeded random instances per randomized family.
pub const SEEDED_INSTANCES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    pub cap: usize,
    pub seed: u64,
    /// Overrides the suite's own size bound.
    pub max_size: Option<usize>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            cap: DEFAULT_CAP,
            seed: 0,
            max_size: None,
        }
    }
}

impl SuiteOptions {
    fn size(&self, default: usize) -> usize {
        self.max_size.unwrap_or(default)
    }
}

/// Suite names in canonical order.
pub const SUITES: &[&str] = &[
    "quantaloid",
    "dq",
    "kan",
    "yoneda",
    "completeness",
    "continuity",
    "specialization",
    "nucleus",
    "equivalence",
    "lattices",
    "fuzzy",
];

/// Runs one suite by name; `None` for an unknown name.
pub fn run_suite(name: &str, o: &SuiteOptions) -> Option<Result<Vec<LawReport>>> {
    Some(match name {
        "quantaloid" => quantaloid_suite(o),
        "dq" => dq_suite(o),
        "kan" => kan_suite(o),
        "yoneda" => yoneda_suite(o),
        "completeness" => completeness_suite(o),
        "continuity" => continuity_suite(o),
        "specialization" => specialization_suite(o),
        "nucleus" => nucleus_suite(o),
        "equivalence" => equivalence_suite(o),
        "lattices" => lattices_suite(o),
        "fuzzy" => fuzzy_suite(o),
        _ => return None,
    })
}

/// Accumulates the checks of one family; keeps the first failure.
struct Family {
    suite: &'static str,
    inst: String,
    count: usize,
    failure: Option<String>,
}

impl Family {
    fn new(suite: &'static str, inst: impl Into<String>) -> Self {
        Family {
            suite,
            inst: inst.into(),
            count: 0,
            failure: None,
        }
    }

    /// `Ok(None)` passes, `Ok(Some(w))` fails with witness `w`; errors other
    /// than the cap count as failures.
    fn record(&mut self, r: Result<Option<String>>) -> Result<()> {
        self.count += 1;
        let w = match r {
            Ok(None) => return Ok(()),
            Ok(Some(w)) => w,
            Err(e @ Error::CapExceeded { .. }) => return Err(e),
            Err(e) => e.to_string(),
        };
        if self.failure.is_none() {
            self.failure = Some(w);
        }
        Ok(())
    }

    fn finish(self, unit: &str) -> LawReport {
        let detail = format!("{} {unit}", self.count);
        match self.failure {
            None => LawReport::pass(self.suite, self.inst),
            Some(w) => LawReport::fail(self.suite, self.inst, w),
        }
        .with_detail(detail)
    }
}

fn two() -> Arc<Quantaloid> {
    Arc::new(boolean().into_quantaloid())
}

fn dl3() -> Dq {
    build_dq(&lukasiewicz(3).expect("builtin")).expect("divisible")
}

/// Discrete `2`-carriers with `0..=max` points.
fn discrete_carriers(q: &Arc<Quantaloid>, max: usize) -> Vec<QCategory> {
    (0..=max)
        .map(|n| {
            let names = (0..n).map(|i| format!("p{i}")).collect();
            QCategory::discrete(
                q.clone(),
                TypedSet::new(names, vec![Obj(0); n]).expect("same length"),
            )
        })
        .collect()
}

/// All closure spaces on the given carriers.
fn spaces_on(cats: &[QCategory], cap: usize) -> Result<Vec<ClosureSpace>> {
    let mut out = Vec::new();
    for (i, c) in cats.iter().enumerate() {
        let px = Arc::new(PresheafCat::presheaves(c, cap)?);
        for s in all_closure_spaces(&px, cap)? {
            let name = format!("X{i}/{}", s.name());
            out.push(s.with_name(name));
        }
    }
    Ok(out)
}

fn quantaloid_suite(o: &SuiteOptions) -> Result<Vec<LawReport>> {
    const S: &str = "quantaloid";
    let max = o.size(5);
    let mut builtins: Vec<Quantale> = vec![boolean()];
    for n in 2..=max {
        for k in [godel(n), lukasiewicz(n)] {
            builtins.push(k?);
        }
    }
    let mut out = Vec::new();
    for k in &builtins {
        let v = validate_quantaloid(k.as_quantaloid());
        out.push(LawReport::from_violations(
            S,
            format!("{} laws", k.name()),
            &v,
        ));
        let dq = match build_dq(k) {
            Ok(d) => d,
            Err(e) => {
                out.push(LawReport::fail(
                    S,
                    format!("D({}) laws", k.name()),
                    e.to_string(),
                ));
                continue;
            }
        };
        let v = validate_quantaloid(dq.quantaloid());
        out.push(LawReport::from_violations(
            S,
            format!("D({}) laws", k.name()),
            &v,
        ));
    }
    let mut all = builtins.clone();
    for n in 2..=max {
        all.push(drastic(n)?);
    }
    let mut fam = Family::new(S, "divisibility conditions agree on all builtins");
    for k in &all {
        fam.record(k.is_divisible().map(|_| None))?;
    }
    out.push(fam.finish("quantales"));
    let d4 = drastic(4)?;
    let inst = "drastic(4) rejected by divisibility";
    out.push(match (d4.is_divisible(), build_dq(&d4)) {
        (Ok(d), Err(Error::NotDivisible(_))) if !d.divisible && d.witness.is_some() => {
            LawReport::pass(S, inst).with_detail(d.witness.unwrap_or_default())
        }
        (r, b) => LawReport::fail(
            S,
            inst,
            format!("divisibility {r:?}, D construction ok: {}", b.is_ok()),
        ),
    });
    Ok(out)
}

fn dq_suite(_o: &SuiteOptions) -> Result<Vec<LawReport>> {
    const S: &str = "dq";
    let mut out = Vec::new();
    for k in [lukasiewicz(3)?, godel(4)?] {
        let inst = format!("D({}) implications by closed form", k.name());
        out.push(match build_dq(&k) {
            Ok(d) => {
                LawReport::from_violations(S, inst, &d.check_closed_forms()).with_detail(format!(
                    "{} objects, all arrow triples",
                    d.quantaloid().num_objects()
                ))
            }
            Err(e) => LawReport::fail(S, inst, e.to_string()),
        });
    }
    Ok(out)
}

fn kan_check(
    x: &QCategory,
    y: &QCategory,
    phi: &crate::qcat::QRelation,
    cap: usize,
) -> Result<Option<String>> {
    let px = PresheafCat::presheaves(x, cap)?;
    let py = PresheafCat::presheaves(y, cap)?;
    let pdx = PresheafCat::copresheaves(x, cap)?;
    let pdy = PresheafCat::copresheaves(y, cap)?;
    let t = kan_adjoints(phi, &px, &py, &pdx, &pdy)?;
    Ok(check_kan_inequalities(&t, &px, &py, &pdx, &pdy))
}

fn kan_suite(o: &SuiteOptions) -> Result<Vec<LawReport>> {
    const S: &str = "kan";
    let max = o.size(2);
    let q = two();
    let cats = categories_up_to(&q, max, o.cap)?;
    let mut fam = Family::new(
        S,
        format!("all distributors between categories on <= {max} elements over 2"),
    );
    for x in &cats {
        for y in &cats {
            for phi in all_relations(&q, x.types(), y.types()) {
                if is_distributor(x, y, &phi) {
                    fam.record(kan_check(x, y, &phi, o.cap))?;
                }
            }
        }
    }
    let mut out = vec![fam.finish("distributors")];
    let dq = dl3();
    let dq_q = dq.quantaloid();
    let mut smp = Sampler::new(o.seed);
    let mut fam = Family::new(
        S,
        format!("seeded distributors over D(luk(3)), seed {}", o.seed),
    );
    for _ in 0..SEEDED_INSTANCES {
        let (n, m) = (smp.rng_range(1, max), smp.rng_range(1, max));
        let x = smp.category(dq_q, n);
        let y = smp.category(dq_q, m);
        let phi = smp.distributor(&x, &y);
        fam.record(kan_check(&x, &y, &phi, o.cap))?;
    }
    out.push(fam.finish("instances"));
    Ok(out)
}

fn yoneda_check(x: &QCategory, cap: usize) -> Result<Option<String>> {
    let px = PresheafCat::presheaves(x, cap)?;
    let y = px.yoneda()?;
    for (m, mu) in px.items().iter().enumerate() {
        for (i, &yi) in y.iter().enumerate() {
            if px.hom(yi, m) != mu.vals[i] {
                return Ok(Some(format!(
                    "P(y {}, {}) differs from the value at {}",
                    x.name(i),
                    px.name(m),
                    x.name(i)
                )));
            }
        }
    }
    for a in 0..x.len() {
        for b in 0..x.len() {
            if px.hom(y[a], y[b]) != x.h(a, b) {
                return Ok(Some(format!(
                    "y is not fully faithful at ({}, {})",
                    x.name(a),
                    x.name(b)
                )));
            }
        }
    }
    Ok(None)
}

fn yoneda_suite(o: &SuiteOptions) -> Result<Vec<LawReport>> {
    const S: &str = "yoneda";
    let max = o.size(3);
    let mut fam = Family::new(
        S,
        format!("every presheaf of every category on <= {max} elements over 2"),
    );
    for x in categories_up_to(&two(), max, o.cap)? {
        fam.record(yoneda_check(&x, o.cap))?;
    }
    Ok(vec![fam.finish("categories")])
}

/// `sup Φ` against `Φ ∘ (y_𝕏)♮` for every presheaf `Φ` on `P𝕏`.
fn sup_formula_check(px: &PresheafCat, cap: usize) -> Result<Option<String>> {
    let pc = px.cat();
    let ppx = PresheafCat::presheaves(pc, cap)?;
    for phi in ppx.items() {
        let formula = px.expect_index(&presheaf_sup_formula(px, phi))?;
        if sup(pc, phi) != Some(formula) {
            return Ok(Some(format!(
                "sup of {} is not {}",
                ppx.display(phi),
                px.name(formula)
            )));
        }
    }
    if !is_complete(pc, &ppx)? {
        return Ok(Some("a presheaf category is not complete".into()));
    }
    Ok(None)
}

fn completeness_suite(o: &SuiteOptions) -> Result<Vec<LawReport>> {
    const S: &str = "completeness";
    let bound = o.size(5);
    let mut cats = categories_up_to(&two(), 3, o.cap)?;
    let dq = dl3();
    cats.extend(categories_up_to(dq.quantaloid(), 2, o.cap)?);
    let mut sups = Family::new(
        S,
        format!("sup formula on presheaf categories with <= {bound} presheaves"),
    );
    let mut agree = Family::new(S, "direct and tensor/cotensor/order completeness agree");
    for x in &cats {
        let px = PresheafCat::presheaves(x, o.cap)?;
        agree.record(is_complete(x, &px).map(|_| None))?;
        if px.len() <= bound {
            sups.record(sup_formula_check(&px, o.cap))?;
        }
    }
    Ok(vec![sups.finish("instances"), agree.finish("categories")])
}

fn continuity_suite(o: &SuiteOptions) -> Result<Vec<LawReport>> {
    const S: &str = "continuity";
    let max = o.size(2);
    let q = two();
    let spaces = spaces_on(&discrete_carriers(&q, max), o.cap)?;
    let mut funs = Family::new(
        S,
        format!(
            "four functor conditions agree, {} spaces on <= {max} points",
            spaces.len()
        ),
    );
    let mut rels = Family::new(
        S,
        format!(
            "four relation conditions agree, {} spaces on <= {max} points",
            spaces.len()
        ),
    );
    for s in &spaces {
        for t in &spaces {
            let (n, m) = (s.base().len(), t.base().len());
            for code in 0..m.pow(n as u32) {
                let f: Vec<usize> = (0..n).map(|i| code / m.pow(i as u32) % m).collect();
                funs.record(
                    continuity_conditions(&f, s, t)
                        .and_then(|c| c.verdict("functor continuity"))
                        .map(|_| None),
                )?;
            }
            for zeta in all_relations(&q, s.base().types(), t.base().types()) {
                rels.record(
                    dist_conditions(&zeta, s, t)
                        .and_then(|c| c.verdict("relation continuity"))
                        .map(|_| None),
                )?;
            }
        }
    }
    Ok(vec![funs.finish("functors"), rels.finish("relations")])
}

fn specialization_suite(o: &SuiteOptions) -> Result<Vec<LawReport>> {
    const S: &str = "specialization";
    let max = o.size(3);
    let q = two();
    let mut out = Vec::new();
    let spaces = spaces_on(&discrete_carriers(&q, max), o.cap)?;
    let mut fam = Family::new(
        S,
        format!(
            "specialization is x in c{{y}} on {} spaces over 2",
            spaces.len()
        ),
    );
    let mut alex = Family::new(S, "Alexandrov criteria agree");
    for s in &spaces {
        fam.record((|| {
            let sp = specialization(s, o.cap)?;
            let cl = classical_specialization(s)?;
            let n = s.base().len();
            for a in 0..n {
                for b in 0..n {
                    if (sp.h(a, b) == 1) != cl[a][b] {
                        return Ok(Some(format!("{} at ({a}, {b})", s.name())));
                    }
                }
            }
            Ok(None)
        })())?;
        alex.record(is_alexandrov(s, o.cap).map(|_| None))?;
    }
    out.push(fam.finish("spaces"));
    let dq = dl3();
    for (label, qq) in [("2", q.clone()), ("D(luk(3))", dq.quantaloid().clone())] {
        let cats = categories_up_to(&qq, max, o.cap)?;
        let mut fam = Family::new(
            S,
            format!("S(D X) = X on categories with <= {max} objects over {label}"),
        );
        for x in &cats {
            fam.record((|| {
                let d = functor_d(x, o.cap)?;
                alex.record(
                    is_alexandrov(&d, o.cap)
                        .map(|a| (!a).then(|| "D X is not Alexandrov".to_string())),
                )?;
                let sd = specialization(&d, o.cap)?;
                Ok((sd.hom() != x.hom())
                    .then(|| format!("S(D X) differs from X = {:?}", x.hom().entries())))
            })())?;
        }
        out.push(fam.finish("categories"));
    }
    out.push(alex.finish("spaces"));
    Ok(out)
}

fn nucleus_suite(o: &SuiteOptions) -> Result<Vec<LawReport>> {
    const S: &str = "nucleus";
    let max = o.size(2);
    let q = two();
    let spaces = spaces_on(&discrete_carriers(&q, max), o.cap)?;
    // continuous relations per ordered pair of spaces
    let mut cont = vec![Vec::new(); spaces.len() * spaces.len()];
    let mut single = Family::new(
        S,
        format!(
            "cl is extensive and idempotent, {} spaces on <= {max} points",
            spaces.len()
        ),
    );
    for (i, s) in spaces.iter().enumerate() {
        for (j, t) in spaces.iter().enumerate() {
            for zeta in all_relations(&q, s.base().types(), t.base().types()) {
                if check_continuous_dist(&zeta, s, t)? {
                    single.record(check_closure_laws(&zeta, s, t))?;
                    cont[i * spaces.len() + j].push(zeta);
                }
            }
        }
    }
    let mut pairs = Family::new(
        S,
        "cl is laxly compositional on composable continuous pairs",
    );
    let n = spaces.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for zeta in &cont[i * n + j] {
                    for eta in &cont[j * n + k] {
                        pairs.record(check_composite_laws(
                            zeta, eta, &spaces[i], &spaces[j], &spaces[k],
                        ))?;
                    }
                }
            }
        }
    }
    Ok(vec![
        single.finish("continuous relations"),
        pairs.finish("pairs"),
    ])
}

fn equivalence_suite(o: &SuiteOptions) -> Result<Vec<LawReport>> {
    const S: &str = "equivalence";
    let max = o.size(2);
    let q = two();
    let cats = categories_up_to(&q, max, o.cap)?;
    let spaces = spaces_on(&cats, o.cap)?;
    let mut fam = Family::new(
        S,
        format!(
            "closed continuous relations match sup-maps, {} spaces on <= {max} points",
            spaces.len()
        ),
    );
    let mut total = 0usize;
    for s in &spaces {
        for t in &spaces {
            fam.record(check_bijection(s, t, o.cap).map(|r| match r {
                Ok(b) => {
                    total += b.closed_continuous;
                    None
                }
                Err(w) => Some(format!("{} -> {}: {w}", s.name(), t.name())),
            }))?;
        }
    }
    let inst = fam.inst.clone();
    let mut rep = fam.finish("ordered pairs");
    if rep.passed() {
        rep = LawReport::pass(S, inst).with_detail(format!(
            "{} ordered pairs, {total} closed continuous relations",
            spaces.len() * spaces.len()
        ));
    }
    let mut wit = Family::new(S, "discrete reduction witnesses compose to cl-identities");
    for s in spaces.iter().filter(|s| !s.has_discrete_base()) {
        wit.record(discrete_reduction_witnesses(s, o.cap).map(|_| None))?;
    }
    Ok(vec![rep, wit.finish("non-discrete spaces")])
}

fn lattices_suite(o: &SuiteOptions) -> Result<Vec<LawReport>> {
    const S: &str = "lattices";
    let max = o.size(4);
    let q = two();
    let ls = lattices_up_to(max);
    let mut fam = Family::new(
        S,
        format!(
            "sup: C(I L) -> L is an isomorphism, {} lattices with <= {max} elements",
            ls.len()
        ),
    );
    for l in &ls {
        let x = order_category(&q, l);
        fam.record(
            functor_i(&x, o.cap)
                .and_then(|s| sup_on_closed(&x, &s))
                .map(|_| None),
        )?;
    }
    Ok(vec![fam.finish("lattices")])
}

fn fuzzy_suite(o: &SuiteOptions) -> Result<Vec<LawReport>> {
    let max = o.size(2);
    let mut out = Vec::new();
    for k in [lukasiewicz(3)?, godel(3)?] {
        out.extend(builtin_suite(&k, max, o.cap));
    }
    Ok(out)
}
