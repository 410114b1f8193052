use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;

use kzq_core::catalog::{catalog, parse_amalgams, resolve_spec, BUNDLED_AMALGAMS};
use kzq_core::fp::{hom_from_embedding, parse_presentation, todd_coxeter};
use kzq_core::ktheory::{
    amalgam_image, image_from_one_skeleton, image_from_one_skeleton_with, induction_maps, vc1_k0q, AmalgamSpec, Edge,
    GroupK, OneSkeleton, Reduction,
};
use kzq_core::perm::{FiniteGroup, GroupHom};
use kzq_core::rational::SchurProvider;
use kzq_core::zlin::AbIso;
use kzq_core::Error;

fn group(name: &str) -> Arc<FiniteGroup> {
    Arc::new(catalog(name).unwrap())
}

fn z2() -> AbIso {
    AbIso { rank: 0, torsion: vec![BigInt::from(2)] }
}

#[test]
fn counterexample_from_presentations() {
    let h = Arc::new(todd_coxeter(&parse_presentation("r,s;r^8,r^4*s^-2,s*r*s^-1*r^-7").unwrap()).unwrap());
    let k = Arc::new(todd_coxeter(&parse_presentation("a,b;a^16,b^2,b*a*b*a^-7").unwrap()).unwrap());
    let e1 = hom_from_embedding("r=a^2;s=a*b", h.clone(), k.clone()).unwrap();
    let e2 = hom_from_embedding("r=a^2;s=a*b", h, k).unwrap();
    let im = amalgam_image(&AmalgamSpec::new(e1, e2).unwrap(), &SchurProvider::core()).unwrap();
    assert_eq!(im.image.iso(), z2());
    assert_eq!(im.snake_image, z2());
    assert_eq!(im.ker_k_minus_1, z2());
}

#[test]
fn vc1_law() {
    let p = SchurProvider::core();
    let mut autos: Vec<(&str, String)> = Vec::new();
    for (name, outer) in [
        ("C5", vec!["a=a^2", "a=a^-1"]),
        ("C8", vec!["a=a^3", "a=a^5"]),
        ("D8", vec!["a=a^-1;b=b", "a=a;b=a*b"]),
        ("Q16", vec!["r=r^3;s=s", "r=r;s=r*s"]),
        ("QD32", vec!["a=a^3;b=b", "a=a^5;b=b"]),
        ("S3", vec!["a=a^2;b=b"]),
        ("C4xC2", vec!["a1=a1*a2;a2=a2", "a1=a1^-1;a2=a2"]),
    ] {
        for o in outer {
            autos.push((name, o.to_string()));
        }
    }
    for (name, text) in &autos {
        let g = group(name);
        let t = hom_from_embedding(text, g.clone(), g).unwrap();
        let r = vc1_k0q(&t, &p).unwrap();
        assert!(r.image.is_trivial(), "{name} {text}");
        assert_eq!(r.k0q.iso().rank, r.orbits.len());
    }
    for name in ["Q8", "S4", "D12"] {
        let g = group(name);
        for x in 0..g.order() {
            let t = GroupHom::conjugation(g.clone(), x);
            let r = vc1_k0q(&t, &p).unwrap();
            assert!(r.image.is_trivial(), "{name} conjugation by {x}");
            assert_eq!(r.orbits.len(), GroupK::new(g.clone(), &p).unwrap().irrs().len());
        }
    }
}

#[test]
fn vc1_rejects_non_automorphisms() {
    let g = group("C4");
    let t = hom_from_embedding("a=a^2", g.clone(), g).unwrap();
    assert!(matches!(vc1_k0q(&t, &SchurProvider::core()), Err(Error::NotAutomorphism(_))));
}

#[test]
fn vanishing_law_and_models_agree() {
    let p = SchurProvider::core();
    let mut s_of: BTreeMap<String, usize> = BTreeMap::new();
    let mut s = |spec: &str| -> usize {
        *s_of
            .entry(spec.to_string())
            .or_insert_with(|| GroupK::new(Arc::new(resolve_spec(spec).unwrap()), &p).unwrap().data.s())
    };
    let mut computed = 0;
    for rec in parse_amalgams(BUNDLED_AMALGAMS).unwrap() {
        let spec = AmalgamSpec::from_record(&rec).unwrap();
        let aug = match image_from_one_skeleton_with(&spec.skeleton(), &p, 0, Reduction::Augmentation) {
            Ok(im) => im,
            Err(Error::UnknownSchurIndex { .. }) => continue,
            Err(e) => panic!("{}: {e}", rec.label),
        };
        let quo = image_from_one_skeleton_with(&spec.skeleton(), &p, 0, Reduction::Quotient).unwrap();
        let seeded = image_from_one_skeleton_with(&spec.skeleton(), &p, 7, Reduction::Augmentation).unwrap();
        let iso = aug.image.iso();
        assert_eq!(iso, quo.image.iso(), "{}", rec.label);
        assert_eq!(iso, seeded.image.iso(), "{}", rec.label);
        assert!(iso.is_elementary_two(), "{}", rec.label);
        if s(&rec.h) == 0 && s(&rec.k1) == 0 && s(&rec.k2) == 0 {
            assert!(iso.is_trivial(), "{}", rec.label);
        }
        computed += 1;
    }
    assert!(computed >= 20);
}

#[test]
fn induction_is_functorial() {
    let p = SchurProvider::core();
    let (c2, q16, qd32) = (group("C2"), group("Q16"), group("QD32"));
    let a = hom_from_embedding("a=r^4", c2.clone(), q16.clone()).unwrap();
    let b = hom_from_embedding("r=a^2;s=a*b", q16.clone(), qd32.clone()).unwrap();
    let ab = a.then(&b);
    let (k2, k16, k32) =
        (GroupK::new(c2, &p).unwrap(), GroupK::new(q16, &p).unwrap(), GroupK::new(qd32, &p).unwrap());
    let ia = induction_maps(&a, &k2, &k16).unwrap();
    let ib = induction_maps(&b, &k16, &k32).unwrap();
    let iab = induction_maps(&ab, &k2, &k32).unwrap();
    assert_eq!(ib.k0q_full.mul(&ia.k0q_full), iab.k0q_full);
    assert!(ia.k0q.then(&ib.k0q).equals(&iab.k0q));
    assert!(ia.sc.then(&ib.sc).equals(&iab.sc));
    assert!(ia.k_minus_1.then(&ib.k_minus_1).equals(&iab.k_minus_1));
}

#[test]
fn triangle_skeleton() {
    // Three copies of C2 glued along the trivial group, all K_-1 vanish.
    let p = SchurProvider::core();
    let (c1, c2) = (group("C1"), group("C2"));
    let e = || hom_from_embedding("", c1.clone(), c2.clone()).unwrap();
    let sk = OneSkeleton {
        vertices: vec![c2.clone(), c2.clone(), c2.clone()],
        edges: (0..3).map(|i| Edge { group: c1.clone(), f_vertex: i, f: e(), g_vertex: (i + 1) % 3, g: e() }).collect(),
    };
    let im = image_from_one_skeleton(&sk, &p).unwrap();
    assert!(im.image.is_trivial());
}

#[test]
fn unknown_schur_data_is_reported() {
    let err = GroupK::new(group("SG(32,44)"), &SchurProvider::core()).unwrap_err();
    assert!(matches!(err, Error::UnknownSchurIndex { .. }));
}
