//! Rational and p-adic representations: Galois fusion of classes and
//! characters, Frobenius–Schur indicators and Schur index data.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_integer::Integer;
use sha2::{Digest, Sha256};

use crate::chartab::{CharacterTable, ClassFunction};
use crate::cyclo::{rat_to_i64, Cyclotomic, Rat};
use crate::error::{Error, Result};
use crate::perm::{prime_factors, ClassData};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldTag {
    Q,
    Qp(u64),
    Fp(u64),
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Q => write!(f, "Q"),
            FieldTag::Qp(p) => write!(f, "Q{p}"),
            FieldTag::Fp(p) => write!(f, "F{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && prime_factors(p) == vec![p]
}

fn check_prime(tag: FieldTag) -> Result<()> {
    match tag {
        FieldTag::Qp(p) | FieldTag::Fp(p) if !is_prime(p) => Err(Error::NotPrime(p)),
        _ => Ok(()),
    }
}

/// Units of `Z/e` acting over `Q` or `Q_p`, as exponents in `1..e`.
pub fn acting_units(e: u64, tag: FieldTag) -> Result<Vec<u64>> {
    check_prime(tag)?;
    let units = (1..=e.max(1)).filter(|t| t.gcd(&e) == 1).map(|t| t % e.max(1));
    match tag {
        FieldTag::Q => Ok(units.collect()),
        FieldTag::Qp(p) => {
            let mut m = e;
            while m % p == 0 {
                m /= p;
            }
            let mut powers = BTreeSet::new();
            let mut x = 1 % m;
            loop {
                if !powers.insert(x) {
                    break;
                }
                x = x * p % m;
            }
            Ok(units.filter(|t| powers.contains(&(t % m))).collect())
        }
        FieldTag::Fp(p) => {
            let mut out = BTreeSet::new();
            let mut x = 1 % e.max(1);
            while out.insert(x) {
                x = x * p % e.max(1);
            }
            Ok(out.into_iter().collect())
        }
    }
}

/// Orbits of classes under `g ↦ g^t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisPartition {
    pub field: FieldTag,
    /// `None` for classes outside the partitioned set (p-singular classes over `F_p`).
    pub orbit_of: Vec<Option<usize>>,
    pub orbits: Vec<Vec<usize>>,
}

impl GaloisPartition {
    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }
}

pub fn galois_partition(classes: &ClassData, field: FieldTag) -> Result<GaloisPartition> {
    check_prime(field)?;
    let k = classes.len();
    let e = classes.exponent() as u64;
    let included: Vec<bool> = match field {
        FieldTag::Fp(p) => classes.orders().iter().map(|&o| o as u64 % p != 0).collect(),
        _ => vec![true; k],
    };
    let units = acting_units(e, field)?;
    let mut orbit_of = vec![None; k];
    let mut orbits = Vec::new();
    for c in 0..k {
        if !included[c] || orbit_of[c].is_some() {
            continue;
        }
        let id = orbits.len();
        let mut members: BTreeSet<usize> = BTreeSet::new();
        for &t in &units {
            members.insert(classes.power_map(t as i64)[c]);
        }
        for &m in &members {
            orbit_of[m] = Some(id);
        }
        orbits.push(members.into_iter().collect());
    }
    Ok(GaloisPartition { field, orbit_of, orbits })
}

/// Orbits of irreducible characters (row indices) under the same units.
pub fn character_orbits(table: &CharacterTable, field: FieldTag) -> Result<Vec<Vec<usize>>> {
    let cd = table.classes();
    let units = acting_units(cd.exponent() as u64, field)?;
    let mut seen = vec![false; table.len()];
    let mut out = Vec::new();
    for i in 0..table.len() {
        if seen[i] {
            continue;
        }
        let chi = table.character(i);
        let mut orbit = BTreeSet::new();
        for &t in &units {
            let j = table
                .position(&chi.twist(cd, t as i64))
                .ok_or_else(|| Error::CharacterTable("Galois twist is not an irreducible".into()))?;
            orbit.insert(j);
        }
        for &j in &orbit {
            seen[j] = true;
        }
        out.push(orbit.into_iter().collect());
    }
    Ok(out)
}

/// `(1/|G|) Σ_g χ(g²)` for row `i`.
pub fn fs_indicator(table: &CharacterTable, i: usize) -> i32 {
    let cd = table.classes();
    let sq = cd.power_map(2);
    let mut total = Cyclotomic::zero();
    for c in 0..cd.len() {
        total = &total + &table.values()[i][sq[c]].scale(&Rat::from_integer(cd.sizes()[c].into()));
    }
    let v = total.scale(&Rat::new(1.into(), cd.group_order().into()));
    v.to_rational().and_then(|q| rat_to_i64(&q)).expect("indicator is an integer") as i32
}

/// A place of `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchurData {
    pub m_infinity: u32,
    /// Local indices at the primes dividing the group order.
    pub m_p: BTreeMap<u64, u32>,
    pub m_global: u32,
}

impl SchurData {
    pub fn new(m_infinity: u32, m_p: BTreeMap<u64, u32>) -> Self {
        let m_global = m_p.values().fold(m_infinity, |acc, &m| acc.lcm(&m));
        SchurData { m_infinity, m_p, m_global }
    }

    pub fn local(&self, p: u64) -> u32 {
        self.m_p.get(&p).copied().unwrap_or(1)
    }
}

fn short_hash(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    hex::encode(&digest[..8])
}

/// Fingerprint hash of a group: order, class (order, size) multiset and
/// character degree multiset.
pub fn group_fingerprint(table: &CharacterTable) -> String {
    let cd = table.classes();
    let mut degrees = table.degrees().to_vec();
    degrees.sort_unstable();
    let text = format!("{}|{:?}|{:?}", cd.group_order(), cd.order_size_multiset(), degrees);
    short_hash(&text)
}

/// Fingerprint hash of a rational-valued class function given with its
/// degree: the sorted multiset of (class order, class size, value).
pub fn orbit_fingerprint(classes: &ClassData, orbit_sum: &ClassFunction) -> String {
    let mut cells: Vec<(usize, usize, String)> = (0..classes.len())
        .map(|c| (classes.orders()[c], classes.sizes()[c], orbit_sum.values[c].to_string()))
        .collect();
    cells.sort();
    let text = format!("{}|{:?}", orbit_sum.values[0], cells);
    short_hash(&text)
}

/// Table of local Schur indices keyed by fingerprints.
#[derive(Debug, Clone, Default)]
pub struct SchurProvider {
    listed: BTreeSet<String>,
    entries: HashMap<(String, String), BTreeMap<Place, u32>>,
    provenance: Vec<String>,
}

/// The data shipped inside the library.
pub const CORE_SCHUR_DATA: &str = include_str!("../data/schur/core.schur");

impl SchurProvider {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Provider preloaded with the bundled core data.
    pub fn core() -> Self {
        let mut p = Self::empty();
        p.load_str(CORE_SCHUR_DATA, "core.schur").expect("bundled Schur data is well formed");
        p
    }

    pub fn load_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::DataConflict(format!("cannot read {}: {e}", path.display())))?;
        let label = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        self.load_str(&text, &label)
    }

    /// Parses `schur group=<hash> [irr=<hash> p=<prime|inf> m=<int>]` lines.
    /// Comment lines of the form `# provenance: ...` are kept.
    pub fn load_str(&mut self, text: &str, label: &str) -> Result<()> {
        let mut offset = 0;
        for line in text.lines() {
            let start = offset;
            offset += line.len() + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if let Some(note) = line.trim().strip_prefix("# provenance:") {
                self.provenance.push(format!("{label}: {}", note.trim()));
            }
            if body.is_empty() {
                continue;
            }
            let bad = |what: &str| Error::Parse { position: start, expected: what.to_string() };
            let mut tokens = body.split_whitespace();
            if tokens.next() != Some("schur") {
                return Err(bad("`schur`"));
            }
            let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
            for tok in tokens {
                let (k, v) = tok.split_once('=').ok_or_else(|| bad("key=value"))?;
                if !matches!(k, "group" | "irr" | "p" | "m") || fields.insert(k, v).is_some() {
                    return Err(bad("one of group=, irr=, p=, m= (each at most once)"));
                }
            }
            let group = fields.get("group").ok_or_else(|| bad("group=<hash>"))?.to_string();
            self.listed.insert(group.clone());
            if fields.len() == 1 {
                continue;
            }
            let irr = fields.get("irr").ok_or_else(|| bad("irr=<hash>"))?.to_string();
            let place = match *fields.get("p").ok_or_else(|| bad("p=<prime|inf>"))? {
                "inf" => Place::Infinity,
                s => {
                    let p: u64 = s.parse().map_err(|_| bad("a prime or `inf`"))?;
                    if !is_prime(p) {
                        return Err(Error::NotPrime(p));
                    }
                    Place::Prime(p)
                }
            };
            let m: u32 = fields
                .get("m")
                .ok_or_else(|| bad("m=<int>"))?
                .parse()
                .ok()
                .filter(|&m| m >= 1)
                .ok_or_else(|| bad("a positive index"))?;
            let slot = self.entries.entry((group, irr)).or_default();
            if let Some(old) = slot.insert(place, m) {
                if old != m {
                    return Err(Error::DataConflict(format!("two values for the same index at p={place}")));
                }
            }
        }
        Ok(())
    }

    pub fn merge(&mut self, other: SchurProvider) -> Result<()> {
        self.listed.extend(other.listed);
        for (key, map) in other.entries {
            let slot = self.entries.entry(key).or_default();
            for (place, m) in map {
                if let Some(old) = slot.insert(place, m) {
                    if old != m {
                        return Err(Error::DataConflict(format!("conflicting index at p={place}")));
                    }
                }
            }
        }
        self.provenance.extend(other.provenance);
        Ok(())
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub fn lists_group(&self, group: &str) -> bool {
        self.listed.contains(group)
    }

    /// Schur data of one orbit. `fs` is the Frobenius–Schur indicator of its
    /// constituents; `primes` the prime divisors of the group order.
    pub fn resolve(&self, group: &str, orbit: &str, primes: &[u64], fs: i32) -> Result<SchurData> {
        if !self.listed.contains(group) {
            return Err(Error::UnknownSchurIndex { group: group.to_string(), orbit: orbit.to_string() });
        }
        let m_inf = if fs == -1 { 2 } else { 1 };
        let mut m_p: BTreeMap<u64, u32> = primes.iter().map(|&p| (p, 1)).collect();
        if let Some(map) = self.entries.get(&(group.to_string(), orbit.to_string())) {
            for (&place, &m) in map {
                match place {
                    Place::Infinity => {
                        if m != m_inf {
                            return Err(Error::DataConflict(format!(
                                "orbit {orbit} of group {group}: table gives m_inf={m}, Frobenius-Schur indicator {fs} gives {m_inf}"
                            )));
                        }
                    }
                    Place::Prime(p) => {
                        if !primes.contains(&p) {
                            return Err(Error::DataConflict(format!(
                                "orbit {orbit} of group {group}: local index at {p}, which does not divide the group order"
                            )));
                        }
                        m_p.insert(p, m);
                    }
                }
            }
        }
        Ok(SchurData::new(m_inf, m_p))
    }
}

/// A rational irreducible representation, described by its character.
#[derive(Debug, Clone)]
pub struct RationalIrr {
    /// Complex irreducibles (table rows) forming the Galois orbit.
    pub orbit: Vec<usize>,
    /// `m · Σ_{χ ∈ orbit} χ`.
    pub character: ClassFunction,
    pub degree: u64,
    pub center_degree: usize,
    pub constituent_degree: u64,
    pub fs: i32,
    pub fingerprint: String,
    pub schur: SchurData,
}

/// A `Q_p`-irreducible character: `m_p · (suborbit sum)`.
#[derive(Debug, Clone)]
pub struct QpIrr {
    /// Index of the rational irreducible containing it.
    pub parent: usize,
    pub suborbit: Vec<usize>,
    pub m_p: u32,
    pub character: ClassFunction,
}

fn orbit_sum(table: &CharacterTable, orbit: &[usize]) -> ClassFunction {
    orbit.iter().fold(ClassFunction::zero(table.classes().len()), |acc, &i| acc.add(&table.character(i)))
}

/// A Galois orbit of complex irreducibles over `Q`, before Schur data.
#[derive(Debug, Clone)]
pub struct OrbitInfo {
    pub orbit: Vec<usize>,
    pub sum: ClassFunction,
    pub fingerprint: String,
    pub fs: i32,
}

pub fn rational_orbits(table: &CharacterTable) -> Result<Vec<OrbitInfo>> {
    character_orbits(table, FieldTag::Q)?
        .into_iter()
        .map(|orbit| {
            let sum = orbit_sum(table, &orbit);
            let fingerprint = orbit_fingerprint(table.classes(), &sum);
            let fs = fs_indicator(table, orbit[0]);
            Ok(OrbitInfo { orbit, sum, fingerprint, fs })
        })
        .collect()
}

pub fn rational_irreducibles(table: &CharacterTable, provider: &SchurProvider) -> Result<Vec<RationalIrr>> {
    let group_fp = group_fingerprint(table);
    let primes = prime_factors(table.classes().group_order() as u64);
    let mut out = Vec::new();
    for OrbitInfo { orbit, sum, fingerprint, fs } in rational_orbits(table)? {
        let schur = provider.resolve(&group_fp, &fingerprint, &primes, fs)?;
        let m = schur.m_global;
        let constituent_degree = table.degrees()[orbit[0]];
        out.push(RationalIrr {
            degree: m as u64 * orbit.len() as u64 * constituent_degree,
            center_degree: orbit.len(),
            character: sum.scale_int(m as i64),
            orbit,
            constituent_degree,
            fs,
            fingerprint,
            schur,
        });
    }
    Ok(out)
}

/// Counts rational irreducibles with even global index and odd local index
/// at every prime dividing the group order.
pub fn s_count(irrs: &[RationalIrr], group_order: u64) -> usize {
    let primes = prime_factors(group_order);
    irrs.iter()
        .filter(|i| i.schur.m_global % 2 == 0 && primes.iter().all(|&p| i.schur.local(p) % 2 == 1))
        .count()
}

pub fn qp_irreducible_characters(table: &CharacterTable, p: u64, irrs: &[RationalIrr]) -> Result<Vec<QpIrr>> {
    let sub = character_orbits(table, FieldTag::Qp(p))?;
    let mut owner = vec![usize::MAX; table.len()];
    for (i, irr) in irrs.iter().enumerate() {
        for &c in &irr.orbit {
            owner[c] = i;
        }
    }
    let mut out: Vec<QpIrr> = sub
        .into_iter()
        .map(|suborbit| {
            let parent = owner[suborbit[0]];
            let m_p = irrs[parent].schur.local(p);
            let character = orbit_sum(table, &suborbit).scale_int(m_p as i64);
            QpIrr { parent, suborbit, m_p, character }
        })
        .collect();
    out.sort_by_key(|q| (q.parent, q.suborbit[0]));
    Ok(out)
}

/// Character table together with everything derived from Galois actions.
#[derive(Debug, Clone)]
pub struct RationalData {
    pub table: Arc<CharacterTable>,
    pub irrs: Vec<RationalIrr>,
    pub primes: Vec<u64>,
    pub qp: BTreeMap<u64, Vec<QpIrr>>,
    pub r_q: usize,
    pub r_qp: BTreeMap<u64, usize>,
    pub r_fp: BTreeMap<u64, usize>,
}

impl RationalData {
    pub fn new(table: Arc<CharacterTable>, provider: &SchurProvider) -> Result<Self> {
        let cd = table.classes();
        let irrs = rational_irreducibles(&table, provider)?;
        let primes = prime_factors(cd.group_order() as u64);
        let r_q = galois_partition(cd, FieldTag::Q)?.orbit_count();
        if r_q != irrs.len() {
            return Err(Error::CharacterTable("class and character orbit counts differ over Q".into()));
        }
        let mut qp = BTreeMap::new();
        let mut r_qp = BTreeMap::new();
        let mut r_fp = BTreeMap::new();
        for &p in &primes {
            let chars = qp_irreducible_characters(&table, p, &irrs)?;
            let count = galois_partition(cd, FieldTag::Qp(p))?.orbit_count();
            if count != chars.len() {
                return Err(Error::CharacterTable(format!("class and character orbit counts differ over Q{p}")));
            }
            r_qp.insert(p, count);
            r_fp.insert(p, galois_partition(cd, FieldTag::Fp(p))?.orbit_count());
            qp.insert(p, chars);
        }
        Ok(RationalData { table, irrs, primes, qp, r_q, r_qp, r_fp })
    }

    pub fn s(&self) -> usize {
        s_count(&self.irrs, self.table.classes().group_order() as u64)
    }

    pub fn group_fingerprint(&self) -> String {
        group_fingerprint(&self.table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;
    use crate::chartab::character_table;

    fn data(name: &str) -> RationalData {
        let t = character_table(&Arc::new(catalog(name).unwrap())).unwrap();
        RationalData::new(Arc::new(t), &SchurProvider::core()).unwrap()
    }

    #[test]
    fn unit_groups() {
        assert_eq!(acting_units(8, FieldTag::Q).unwrap(), vec![1, 3, 5, 7]);
        assert_eq!(acting_units(8, FieldTag::Qp(2)).unwrap(), vec![1, 3, 5, 7]);
        assert_eq!(acting_units(12, FieldTag::Qp(3)).unwrap(), vec![1, 5, 7, 11]);
        assert_eq!(acting_units(12, FieldTag::Qp(2)).unwrap(), vec![1, 5, 7, 11]);
        assert_eq!(acting_units(15, FieldTag::Qp(2)).unwrap(), vec![1, 2, 4, 8]);
        assert_eq!(acting_units(1, FieldTag::Q).unwrap(), vec![0]);
        assert_eq!(acting_units(8, FieldTag::Qp(4)).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn q16_qd32_counts() {
        let q16 = data("Q16");
        assert_eq!(q16.r_q, 6);
        assert_eq!(q16.r_fp[&2], 1);
        assert_eq!(q16.s(), 1);
        let qd = data("QD32");
        assert_eq!(qd.r_q, 7);
        assert_eq!(qd.s(), 0);
        assert!(qd.irrs.iter().all(|i| i.schur.m_global == 1));
    }

    #[test]
    fn q16_faithful_component() {
        let q16 = data("Q16");
        let two: Vec<&RationalIrr> = q16.irrs.iter().filter(|i| i.schur.m_global == 2).collect();
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].degree, 8);
        assert_eq!(two[0].constituent_degree, 2);
        assert_eq!(two[0].fs, -1);
        assert_eq!(two[0].center_degree, 2);
    }

    #[test]
    fn indicators() {
        let t = character_table(&Arc::new(catalog("C3").unwrap())).unwrap();
        assert_eq!(fs_indicator(&t, 0), 1);
        assert_eq!(fs_indicator(&t, 1), 0);
    }

    #[test]
    fn unknown_group_is_reported() {
        let t = character_table(&Arc::new(catalog("C3").unwrap())).unwrap();
        let err = rational_irreducibles(&t, &SchurProvider::empty()).unwrap_err();
        assert!(matches!(err, Error::UnknownSchurIndex { .. }));
    }

    #[test]
    fn data_lines() {
        let mut p = SchurProvider::empty();
        p.load_str("# provenance: test\nschur group=aa\nschur group=aa irr=bb p=2 m=2\n", "t").unwrap();
        assert_eq!(p.provenance(), &["t: test".to_string()]);
        let d = p.resolve("aa", "bb", &[2], 1).unwrap();
        assert_eq!(d.m_global, 2);
        assert!(matches!(p.resolve("aa", "bb", &[3], 1), Err(Error::DataConflict(_))));
        let mut q = SchurProvider::empty();
        q.load_str("schur group=aa irr=bb p=inf m=2", "t").unwrap();
        assert!(matches!(q.resolve("aa", "bb", &[2], 1), Err(Error::DataConflict(_))));
        assert!(q.resolve("aa", "bb", &[2], -1).is_ok());
        assert!(SchurProvider::empty().load_str("schur group=aa p=4 irr=x m=1", "t").is_err());
        assert!(SchurProvider::empty().load_str("schur grp=aa", "t").is_err());
        assert!(SchurProvider::empty().load_str("schur group=aa irr=bb p=2 m=0", "t").is_err());
    }
}
