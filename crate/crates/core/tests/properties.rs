use std::sync::Arc;

use proptest::prelude::*;

use qclosure::algebra::{build_dq, godel, lukasiewicz, validate_quantaloid, Elem, Obj, Quantale};
use qclosure::cli::{parse_qdf, run_from, serialize};
use qclosure::closure::{from_closed_system, Mode};
use qclosure::contdist::{check_continuous_dist, dist_closure, dist_conditions, is_closed_dist};
use qclosure::enumerate::Sampler;
use qclosure::qcat::category::{is_distributor, validate_category};
use qclosure::qcat::presheaf::{absorb, is_presheaf};
use qclosure::qcat::{Kind, PresheafCat, DEFAULT_CAP};

fn chain(kind: u8, n: usize) -> Quantale {
    match kind {
        0 => godel(n).unwrap(),
        _ => lukasiewicz(n).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chain_products_match_real_arithmetic(kind in 0u8..2, n in 2usize..7, a in 0usize..7, b in 0usize..7) {
        let (a, b) = (a % n, b % n);
        let k = chain(kind, n);
        let (x, y) = (a as f64 / (n - 1) as f64, b as f64 / (n - 1) as f64);
        let real = if kind == 0 { x.min(y) } else { (x + y - 1.0).max(0.0) };
        let got = k.mul(a as Elem, b as Elem) as f64 / (n - 1) as f64;
        prop_assert!((got - real).abs() < 1e-9);
    }

    #[test]
    fn quantale_residuation(kind in 0u8..2, n in 2usize..7, s in any::<[u8; 3]>()) {
        let k = chain(kind, n);
        let [x, y, z] = s.map(|v| (v as usize % n) as Elem);
        prop_assert_eq!(k.mul(k.mul(x, y), z), k.mul(x, k.mul(y, z)));
        prop_assert_eq!(k.mul(k.unit(), x), x);
        prop_assert_eq!(k.leq(k.mul(x, y), z), k.leq(x, k.over(z, y)));
        prop_assert_eq!(k.leq(k.mul(x, y), z), k.leq(y, k.under(x, z)));
    }

    #[test]
    fn dq_composition_by_formula(kind in 0u8..2, n in 2usize..6, s in any::<[u8; 5]>()) {
        let k = chain(kind, n);
        let d = build_dq(&k).unwrap();
        let q = d.quantaloid();
        let obj_of: Vec<Elem> = {
            let mut v = vec![0; q.num_objects()];
            for e in k.elements() {
                v[d.obj(e).idx()] = e;
            }
            v
        };
        let [p, r, t] = [s[0], s[1], s[2]].map(|v| Obj((v as usize % n) as u16));
        // hom(x, y) is the down-set of x ∧ y
        let m = k.meet(obj_of[p.idx()], obj_of[r.idx()]);
        prop_assert_eq!(q.hom(p, r).len(), k.elements().filter(|&a| k.leq(a, m)).count());
        let u = (s[3] as usize % q.hom(p, r).len()) as Elem;
        let v = (s[4] as usize % q.hom(r, t).len()) as Elem;
        let (uk, vk) = (d.to_k(p, r, u), d.to_k(r, t, v));
        let want = k.mul(k.over(vk, obj_of[r.idx()]), uk);
        prop_assert_eq!(d.to_k(p, t, q.comp(p, r, t, v, u)), want);
        // residuation in the quantaloid
        for w in q.hom(p, t).elements() {
            let le = q.hom(p, t).leq(q.comp(p, r, t, v, u), w);
            prop_assert_eq!(le, q.hom(r, t).leq(v, q.left_impl(p, r, t, w, u)));
            prop_assert_eq!(le, q.hom(p, r).leq(u, q.right_impl(p, r, t, v, w)));
        }
    }

    #[test]
    fn random_categories_and_distributors(seed in any::<u64>(), n in 0usize..4, m in 0usize..4) {
        let d = build_dq(&lukasiewicz(3).unwrap()).unwrap();
        let q = d.quantaloid().clone();
        let mut s = Sampler::new(seed);
        let x = s.category(&q, n);
        let y = s.category(&q, m);
        prop_assert!(validate_category(&q, x.hom()).is_empty());
        let phi = s.distributor(&x, &y);
        prop_assert!(is_distributor(&x, &y, &phi));
    }

    #[test]
    fn enumerated_presheaves_absorb(seed in any::<u64>(), n in 0usize..3) {
        let d = build_dq(&lukasiewicz(3).unwrap()).unwrap();
        let q = d.quantaloid().clone();
        let x = Sampler::new(seed).category(&q, n);
        let px = PresheafCat::presheaves(&x, DEFAULT_CAP).unwrap();
        for mu in px.items() {
            prop_assert!(is_presheaf(&x, Kind::Presheaf, mu));
            prop_assert_eq!(&absorb(&x, Kind::Presheaf, mu), mu);
        }
        // representables are presheaves and y is fully faithful
        let ys = px.yoneda().unwrap();
        for a in 0..n {
            for b in 0..n {
                prop_assert_eq!(px.hom(ys[a], ys[b]), x.h(a, b));
            }
        }
    }

    #[test]
    fn generated_closure_operators(seed in any::<u64>(), n in 0usize..3, picks in proptest::collection::vec(any::<u16>(), 0..4)) {
        let two = Arc::new(qclosure::algebra::boolean().into_quantaloid());
        let mut s = Sampler::new(seed);
        let x = s.category(&two, n);
        let px = Arc::new(PresheafCat::presheaves(&x, DEFAULT_CAP).unwrap());
        let seeds: Vec<usize> = picks.iter().map(|&p| p as usize % px.len()).collect();
        let sp = from_closed_system(px.clone(), &seeds, Mode::Generate).unwrap();
        prop_assert!(sp.validate().is_empty());
        for m in 0..px.len() {
            let c = sp.apply(m);
            prop_assert!(px.leq(m, c));
            prop_assert_eq!(sp.apply(c), c);
            for m2 in 0..px.len() {
                if px.leq(m, m2) {
                    prop_assert!(px.leq(c, sp.apply(m2)));
                }
            }
        }
        for &g in &seeds {
            prop_assert!(sp.is_closed(g));
        }
        // closed presheaves are closed under pointwise meets
        let closed = sp.closed_indices();
        for &a in &closed {
            for &b in &closed {
                prop_assert!(sp.is_closed(px.meet(a, b).unwrap()));
            }
        }
    }

    #[test]
    fn continuity_and_cl(seed in any::<u64>(), n in 1usize..3, m in 1usize..3, pa in any::<[u16; 2]>(), pb in any::<[u16; 2]>()) {
        let two = Arc::new(qclosure::algebra::boolean().into_quantaloid());
        let mut s = Sampler::new(seed);
        let x = s.category(&two, n);
        let y = s.category(&two, m);
        let px = Arc::new(PresheafCat::presheaves(&x, DEFAULT_CAP).unwrap());
        let py = Arc::new(PresheafCat::presheaves(&y, DEFAULT_CAP).unwrap());
        let sa: Vec<usize> = pa.iter().map(|&p| p as usize % px.len()).collect();
        let sb: Vec<usize> = pb.iter().map(|&p| p as usize % py.len()).collect();
        let a = from_closed_system(px, &sa, Mode::Generate).unwrap();
        let b = from_closed_system(py, &sb, Mode::Generate).unwrap();
        let zeta = s.distributor(&x, &y);
        let four = dist_conditions(&zeta, &a, &b).unwrap();
        prop_assert!(four.agree());
        prop_assert_eq!(check_continuous_dist(&zeta, &a, &b).unwrap(), four.i);
        let cz = dist_closure(&zeta, &a).unwrap();
        prop_assert!(is_closed_dist(&cz, &a).unwrap());
        prop_assert_eq!(&dist_closure(&cz, &a).unwrap(), &cz);
        prop_assert!(zeta.leq(&two, &cz).unwrap());
        if four.i {
            prop_assert!(check_continuous_dist(&cz, &a, &b).unwrap());
        }
    }

    #[test]
    fn quantaloid_laws_hold_for_dq(kind in 0u8..2, n in 2usize..5) {
        let d = build_dq(&chain(kind, n)).unwrap();
        prop_assert!(validate_quantaloid(d.quantaloid()).is_empty());
    }
}

fn doc_text(names: &[String], bits: &[u8], withchain: bool) -> String {
    let mut t = format!(
        "TYPEDSET X OVER 2: {}\nEND\n\n",
        names
            .iter()
            .map(|n| format!("{n}:*"))
            .collect::<Vec<_>>()
            .join(" ")
    );
    if withchain && names.len() >= 2 {
        t.push_str(&format!(
            "CATEGORY C ON X\nHOM {} {}=1\nEND\n\n",
            names[0], names[1]
        ));
    }
    t.push_str("CLOSURE S ON X\n");
    for b in bits {
        let vals: Vec<String> = names
            .iter()
            .enumerate()
            .map(|(i, n)| format!("{n}={}", (b >> i) & 1))
            .collect();
        t.push_str(&format!("CLOSED [*| {}]\n", vals.join(", ")));
    }
    t.push_str("MODE generate\nEND\n");
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn qdf_roundtrip(names in proptest::collection::btree_set("[a-z][a-z0-9]{0,3}", 1..4), bits in proptest::collection::vec(any::<u8>(), 0..4), withchain in any::<bool>()) {
        let names: Vec<String> = names.into_iter().collect();
        let text = doc_text(&names, &bits, withchain);
        let d = parse_qdf(&text).unwrap();
        let s = serialize(&d);
        let d2 = parse_qdf(&s).unwrap();
        prop_assert_eq!(&d, &d2);
        prop_assert_eq!(serialize(&d2), s);
    }

    #[test]
    fn suite_reports_depend_only_on_seed(seed in any::<u64>()) {
        let seed = seed.to_string();
        let args = ["qclosure", "laws", "kan", "--max-size", "1", "--seed", &seed];
        let a = run_from(args);
        let b = run_from(args);
        prop_assert_eq!(a.code, 0);
        prop_assert_eq!(a, b);
    }
}
