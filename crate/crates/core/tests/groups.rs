use std::sync::Arc;

use num_integer::Integer;

use kzq_core::catalog::{catalog, resolve_spec};
use kzq_core::chartab::{character_table, character_table_seeded, inner_product, induce, restrict};
use kzq_core::fp::{hom_from_embedding, parse_presentation, todd_coxeter};
use kzq_core::Error;

#[test]
fn catalog_orders() {
    for (name, order, classes) in [
        ("C1", 1, 1),
        ("C7", 7, 7),
        ("D4", 4, 4),
        ("D8", 8, 5),
        ("D12", 12, 6),
        ("Q8", 8, 5),
        ("Q16", 16, 7),
        ("Q32", 32, 11),
        ("QD16", 16, 7),
        ("QD32", 32, 11),
        ("S3", 6, 3),
        ("S4", 24, 5),
        ("Q16xC2", 32, 14),
        ("SG(32,42)", 32, 14),
        ("SG(32,44)", 32, 11),
    ] {
        let g = catalog(name).unwrap();
        assert_eq!((g.order(), g.class_count()), (order, classes), "{name}");
    }
}

#[test]
fn unknown_names() {
    for bad in ["Q12", "D5", "X3", "C0", "Cx2", "QD8"] {
        assert!(matches!(catalog(bad), Err(Error::UnknownName(_))), "{bad}");
    }
}

#[test]
fn power_maps_compose() {
    for name in ["Q16", "QD32", "S4", "C12", "D8xC2"] {
        let g = catalog(name).unwrap();
        let cd = g.classes();
        let e = cd.exponent() as i64;
        for k in 0..e {
            for l in 0..e {
                let kl = (k * l).mod_floor(&e);
                for c in 0..cd.len() {
                    assert_eq!(cd.power_map(l)[cd.power_map(k)[c]], cd.power_map(kl)[c], "{name} {k} {l}");
                }
            }
            for c in 0..cd.len() {
                let o = cd.orders()[c];
                assert_eq!(cd.orders()[cd.power_map(k)[c]], o / o.gcd(&(k as usize)), "{name}");
            }
        }
    }
}

#[test]
fn presentations_and_specs_agree() {
    let q16 = todd_coxeter(&parse_presentation("r,s;r^8,r^4*s^-2,s*r*s^-1*r^-7").unwrap()).unwrap();
    assert_eq!(q16.classes().order_size_multiset(), catalog("Q16").unwrap().classes().order_size_multiset());
    let spec = resolve_spec("pres:a,b;a^16,b^2,b*a*b*a^-7").unwrap();
    assert_eq!(spec.order(), 32);
    assert_eq!(resolve_spec("name:Q8 x C2").unwrap().order(), 16);
    match resolve_spec("pres:a;a^") {
        Err(Error::Parse { position, .. }) => assert!(position >= 5),
        other => panic!("{other:?}"),
    }
}

#[test]
fn frobenius_reciprocity() {
    for (h, k, embed) in [
        ("Q16", "QD32", "r=a^2;s=a*b"),
        ("C2", "S3", "a=b"),
        ("C3", "S3", "a=a"),
        ("Q8", "Q16", "r=r^2;s=s"),
        ("C4", "D8", "a=a"),
    ] {
        let hg = Arc::new(catalog(h).unwrap());
        let kg = Arc::new(catalog(k).unwrap());
        let f = hom_from_embedding(embed, hg.clone(), kg.clone()).unwrap();
        f.ensure_injective().unwrap();
        let th = character_table(&hg).unwrap();
        let tk = character_table(&kg).unwrap();
        for i in 0..th.len() {
            let ind = induce(&f, &th.character(i)).unwrap();
            for j in 0..tk.len() {
                let left = inner_product(&ind, &tk.character(j), tk.classes());
                let right = inner_product(&th.character(i), &restrict(&f, &tk.character(j)), th.classes());
                assert_eq!(left, right, "{h} -> {k}: {i}, {j}");
            }
        }
    }
}

#[test]
fn tables_do_not_depend_on_the_seed() {
    for name in ["QD32", "S4", "C5xC5"] {
        let g = Arc::new(catalog(name).unwrap());
        let mut a: Vec<_> = character_table_seeded(&g, 0).unwrap().values().to_vec();
        let mut b: Vec<_> = character_table_seeded(&g, 99).unwrap().values().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b, "{name}");
    }
}
