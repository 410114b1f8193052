//! Named groups.
//!
//! Families: `C<n>`, `D<2n>` (dihedral of order 2n), `Q<2^k>` (generalized
//! quaternion, k ≥ 3), `QD<2^k>` (quasidihedral, k ≥ 4), `S3`, `S4`, direct
//! products `AxB`, and the groups listed in the bundled data file.

use crate::error::{Error, Result};
use crate::fp::{parse_presentation, todd_coxeter, Presentation};
use crate::perm::{direct_product, FiniteGroup, Perm, DEFAULT_ORDER_BOUND};

const BUNDLED: &str = include_str!("../data/catalog.txt");

/// A group given by explicit permutation generators in a data file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRecord {
    pub name: String,
    pub degree: usize,
    pub gens: Vec<Perm>,
}

/// Parses lines `group <name> degree=<d> gens=<perm>;<perm>...`.
/// Blank lines and lines starting with `#` are ignored.
pub fn parse_group_data(text: &str) -> Result<Vec<GroupRecord>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in text.lines() {
        let line_start = offset;
        offset += line.len() + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |what: &str| Error::Parse { position: line_start, expected: what.to_string() };
        let mut parts = line.split_whitespace();
        if parts.next() != Some("group") {
            return Err(bad("`group`"));
        }
        let name = parts.next().ok_or_else(|| bad("a group name"))?.to_string();
        let degree: usize = parts
            .next()
            .and_then(|s| s.strip_prefix("degree="))
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("degree=<d>"))?;
        let gens_text = parts.next().and_then(|s| s.strip_prefix("gens=")).ok_or_else(|| bad("gens=<perms>"))?;
        if parts.next().is_some() {
            return Err(bad("end of line"));
        }
        let gens = gens_text
            .split(';')
            .map(|p| Perm::parse_cycles(p, degree))
            .collect::<Result<Vec<_>>>()?;
        out.push(GroupRecord { name, degree, gens });
    }
    Ok(out)
}

fn bundled_record(name: &str) -> Option<GroupRecord> {
    parse_group_data(BUNDLED).expect("bundled catalog data is well formed").into_iter().find(|r| r.name == name)
}

/// Names of the groups shipped in the bundled data file.
pub fn bundled_names() -> Vec<String> {
    parse_group_data(BUNDLED).expect("bundled catalog data is well formed").into_iter().map(|r| r.name).collect()
}

fn power_of_two_exponent(n: usize) -> Option<u32> {
    if n.is_power_of_two() {
        Some(n.trailing_zeros())
    } else {
        None
    }
}

/// The presentation used for a named family member, if the family is
/// built from one.
pub fn catalog_presentation(name: &str) -> Option<Presentation> {
    let name = name.trim();
    if let Some(n) = name.strip_prefix("QD").and_then(|s| s.parse::<usize>().ok()) {
        let k = power_of_two_exponent(n)?;
        if k < 4 {
            return None;
        }
        let half = n / 2;
        let twist = n / 4 - 1;
        return Some(parse_presentation(&format!("a,b;a^{half},b^2,b*a*b*a^-{twist}")).expect("family presentation"));
    }
    if let Some(n) = name.strip_prefix('Q').and_then(|s| s.parse::<usize>().ok()) {
        let k = power_of_two_exponent(n)?;
        if k < 3 {
            return None;
        }
        let half = n / 2;
        let quarter = n / 4;
        let inv = half - 1;
        return Some(
            parse_presentation(&format!("r,s;r^{half},r^{quarter}*s^-2,s*r*s^-1*r^-{inv}")).expect("family presentation"),
        );
    }
    None
}

fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 1 {
        return FiniteGroup::generate(Vec::new(), Vec::new(), DEFAULT_ORDER_BOUND);
    }
    let a = Perm::from_cycles(n, &[(0..n as u32).collect()])?;
    FiniteGroup::generate(vec!["a".into()], vec![a], DEFAULT_ORDER_BOUND)
}

fn dihedral(order: usize) -> Result<FiniteGroup> {
    let n = order / 2;
    if n == 2 {
        // no nontrivial reflection of two points
        let a = Perm::from_cycles(4, &[vec![0, 1], vec![2, 3]])?;
        let b = Perm::from_cycles(4, &[vec![0, 2], vec![1, 3]])?;
        return FiniteGroup::generate(vec!["a".into(), "b".into()], vec![a, b], DEFAULT_ORDER_BOUND);
    }
    let a = Perm::from_cycles(n, &[(0..n as u32).collect()])?;
    let refl: Vec<u32> = (0..n as u32).map(|i| (n as u32 - i) % n as u32).collect();
    let b = Perm::new(refl)?;
    FiniteGroup::generate(vec!["a".into(), "b".into()], vec![a, b], DEFAULT_ORDER_BOUND)
}

fn symmetric(n: usize) -> Result<FiniteGroup> {
    let a = Perm::from_cycles(n, &[(0..n as u32).collect()])?;
    let b = Perm::from_cycles(n, &[vec![0, 1]])?;
    FiniteGroup::generate(vec!["a".into(), "b".into()], vec![a, b], DEFAULT_ORDER_BOUND)
}

fn single(name: &str) -> Result<FiniteGroup> {
    let unknown = || Error::UnknownName(name.to_string());
    if let Some(rec) = bundled_record(name) {
        let names = (1..=rec.gens.len()).map(|i| format!("g{i}")).collect();
        return FiniteGroup::generate(names, rec.gens, DEFAULT_ORDER_BOUND);
    }
    if let Some(p) = catalog_presentation(name) {
        return todd_coxeter(&p);
    }
    match name {
        "S3" => return symmetric(3),
        "S4" => return symmetric(4),
        _ => {}
    }
    let digits = |prefix: &str| -> Option<usize> {
        let rest = name.strip_prefix(prefix)?;
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) || rest.starts_with('0') {
            return None;
        }
        rest.parse().ok()
    };
    if let Some(n) = digits("C") {
        if n > DEFAULT_ORDER_BOUND {
            return Err(Error::OrderBoundExceeded { bound: DEFAULT_ORDER_BOUND });
        }
        return cyclic(n);
    }
    if let Some(n) = digits("D") {
        if n < 4 || n % 2 != 0 {
            return Err(unknown());
        }
        if n > DEFAULT_ORDER_BOUND {
            return Err(Error::OrderBoundExceeded { bound: DEFAULT_ORDER_BOUND });
        }
        return dihedral(n);
    }
    Err(unknown())
}

/// Looks up a named group; `x` separates direct factors (`Q16xC2`).
pub fn catalog(name: &str) -> Result<FiniteGroup> {
    let factors: Vec<&str> = name.split('x').map(str::trim).collect();
    if factors.iter().any(|f| f.is_empty()) {
        return Err(Error::UnknownName(name.to_string()));
    }
    let mut group = single(factors[0])?;
    for f in &factors[1..] {
        group = direct_product(&group, &single(f)?)?;
    }
    Ok(group)
}

/// Resolves a group spec: `name:<catalog name>`, `pres:<presentation>`, a
/// bare catalog name, or factors joined by ` x ` (direct product).
pub fn resolve_spec(spec: &str) -> Result<FiniteGroup> {
    let factors: Vec<&str> = spec.split(" x ").map(str::trim).collect();
    if factors.len() > 1 {
        let mut group = resolve_spec(factors[0])?;
        for f in &factors[1..] {
            group = direct_product(&group, &resolve_spec(f)?)?;
        }
        return Ok(group);
    }
    let spec = spec.trim();
    if let Some(p) = spec.strip_prefix("pres:") {
        let pres = parse_presentation(p).map_err(|e| match e {
            Error::Parse { position, expected } => Error::Parse { position: position + 5, expected },
            other => other,
        })?;
        return todd_coxeter(&pres);
    }
    catalog(spec.strip_prefix("name:").unwrap_or(spec))
}

/// One line of the amalgam fixture file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmalgamRecord {
    pub label: String,
    pub h: String,
    pub k1: String,
    pub e1: String,
    pub k2: String,
    pub e2: String,
}

/// The bundled amalgam fixtures.
pub const BUNDLED_AMALGAMS: &str = include_str!("../data/amalgams.txt");

/// Parses `amalgam <label> h=.. k1=.. e1=.. k2=.. e2=..` lines.
pub fn parse_amalgams(text: &str) -> Result<Vec<AmalgamRecord>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in text.lines() {
        let start = offset;
        offset += line.len() + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |what: &str| Error::Parse { position: start, expected: what.to_string() };
        let mut parts = line.split_whitespace();
        if parts.next() != Some("amalgam") {
            return Err(bad("`amalgam`"));
        }
        let label = parts.next().ok_or_else(|| bad("a label"))?.to_string();
        let mut field = |key: &str| -> Result<String> {
            parts
                .next()
                .and_then(|t| t.strip_prefix(key)?.strip_prefix('='))
                .map(str::to_string)
                .ok_or_else(|| bad(&format!("{key}=")))
        };
        let rec = AmalgamRecord {
            h: field("h")?,
            k1: field("k1")?,
            e1: field("e1")?,
            k2: field("k2")?,
            e2: field("e2")?,
            label,
        };
        if parts.next().is_some() {
            return Err(bad("end of line"));
        }
        out.push(rec);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn amalgam_fixtures_parse() {
        let recs = parse_amalgams(BUNDLED_AMALGAMS).unwrap();
        assert!(recs.len() >= 20);
        assert_eq!(recs[0].e1, "");
        assert!(parse_amalgams("amalgam x h=C1 k1=C2 e1= k2=C2").is_err());
    }

    #[test]
    fn specs() {
        assert_eq!(resolve_spec("name:Q16").unwrap().order(), 16);
        assert_eq!(resolve_spec("pres:a,b;a^16,b^2,b*a*b*a^-7").unwrap().order(), 32);
        assert_eq!(resolve_spec("name:Q16 x name:C2").unwrap().class_count(), 14);
        assert_eq!(resolve_spec("S3 x pres:a;a^2").unwrap().order(), 12);
        assert!(matches!(resolve_spec("pres:x;;"), Err(Error::Parse { position: 7, .. })));
        assert!(matches!(resolve_spec("name:nope"), Err(Error::UnknownName(_))));
    }

    #[test]
    fn family_orders() {
        for (name, order, classes) in [
            ("C1", 1, 1),
            ("C7", 7, 7),
            ("D8", 8, 5),
            ("D10", 10, 4),
            ("Q8", 8, 5),
            ("Q16", 16, 7),
            ("Q32", 32, 11),
            ("QD16", 16, 7),
            ("QD32", 32, 11),
            ("S3", 6, 3),
            ("S4", 24, 5),
            ("Q16xC2", 32, 14),
            ("C2xC2xC2", 8, 8),
        ] {
            let g = catalog(name).unwrap();
            assert_eq!(g.order(), order, "{name}");
            assert_eq!(g.class_count(), classes, "{name}");
        }
    }

    #[test]
    fn unknown_names() {
        for name in ["", "Q12", "QD8", "D3", "C0", "C", "Z5", "Q16x", "foo"] {
            assert!(catalog(name).is_err(), "{name}");
        }
    }

    #[test]
    fn bundled_groups_load() {
        let names = bundled_names();
        assert!(names.contains(&"SG(32,42)".to_string()));
        assert!(names.contains(&"SG(32,44)".to_string()));
        for n in names {
            assert_eq!(catalog(&n).unwrap().order(), 32, "{n}");
        }
    }

    #[test]
    fn data_lines_are_checked() {
        assert!(parse_group_data("group X degree=3 gens=(1,2,3)").is_ok());
        assert!(parse_group_data("grp X degree=3 gens=(1,2)").is_err());
        assert!(parse_group_data("group X degree=2 gens=(1,2,3)").is_err());
    }
}
