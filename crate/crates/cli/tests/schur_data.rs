use std::collections::BTreeSet;
use std::sync::Arc;

use kzq::corpus::{CORE_GROUPS, FIXTURE_GROUPS};
use kzq::datagen::Collector;
use kzq_core::catalog::catalog;

fn data_lines(text: &str) -> BTreeSet<String> {
    text.lines().map(str::trim).filter(|l| l.starts_with("schur")).map(String::from).collect()
}

fn generated(names: &[&str]) -> BTreeSet<String> {
    let mut c = Collector::default();
    for n in names {
        c.add(n, Arc::new(catalog(n).unwrap())).unwrap();
    }
    data_lines(&c.finish())
}

#[test]
fn bundled_data_matches_the_rule() {
    let core = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/schur/core.schur")).unwrap();
    assert_eq!(data_lines(&core), generated(CORE_GROUPS));
    let fixture = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/schur/sg32.schur")).unwrap();
    assert_eq!(data_lines(&fixture), generated(FIXTURE_GROUPS));
}

#[test]
fn no_rule_for_unknown_shapes() {
    let mut c = Collector::default();
    assert!(c.add("C3xS3", Arc::new(catalog("C3xS3").unwrap())).is_err());
}
