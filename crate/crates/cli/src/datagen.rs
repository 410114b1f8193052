//! Generation of Schur index data lines from structural rules.
//!
//! Two rules are available:
//!
//! * `trivial`: every rational Schur index is 1. Valid for abelian, dihedral
//!   and symmetric groups.
//! * `two-group`: for a 2-group the division algebra of a rational
//!   irreducible is either its center `K` or the quaternion algebra over the
//!   totally real field `K`, ramified exactly at the real places and possibly
//!   at the unique prime over 2. So `m_inf = 2` iff the Frobenius–Schur
//!   indicator is -1, and since the number of ramified places is even,
//!   `m_2 = 2` iff additionally `[K:Q]` is odd, i.e. `K = Q`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use anyhow::{bail, Result};
use kzq_core::chartab::character_table;
use kzq_core::perm::FiniteGroup;
use kzq_core::rational::{group_fingerprint, rational_orbits};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Trivial,
    TwoGroup,
}

impl Rule {
    pub fn describe(self) -> &'static str {
        match self {
            Rule::Trivial => "all Schur indices 1",
            Rule::TwoGroup => "2-group rule: m_inf from the Frobenius-Schur indicator, m_2 = 2 iff also K = Q",
        }
    }
}

/// Picks the rule applying to a catalog name, if any.
pub fn rule_for(name: &str, group: &FiniteGroup) -> Option<Rule> {
    if group.order().is_power_of_two() {
        return Some(Rule::TwoGroup);
    }
    if group.is_abelian() || name == "S3" || name == "S4" {
        return Some(Rule::Trivial);
    }
    let dihedral = name
        .strip_prefix('D')
        .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()));
    dihedral.then_some(Rule::Trivial)
}

/// Keyed data produced for a set of groups; used to detect fingerprint
/// collisions carrying different indices.
#[derive(Debug, Default)]
pub struct Collector {
    seen: BTreeMap<(String, String), Vec<(String, u32)>>,
    text: String,
}

impl Collector {
    pub fn add(&mut self, name: &str, group: Arc<FiniteGroup>) -> Result<()> {
        let Some(rule) = rule_for(name, &group) else {
            bail!("no Schur index rule applies to {name}");
        };
        let table = character_table(&group)?;
        let gh = group_fingerprint(&table);
        writeln!(self.text, "# {name} (order {}): {}", group.order(), rule.describe())?;
        writeln!(self.text, "schur group={gh}")?;
        for info in rational_orbits(&table)? {
            let mut places: Vec<(String, u32)> = Vec::new();
            if rule == Rule::TwoGroup && info.fs == -1 {
                places.push(("inf".into(), 2));
                places.push(("2".into(), if info.orbit.len() == 1 { 2 } else { 1 }));
            }
            let key = (gh.clone(), info.fingerprint.clone());
            if let Some(prev) = self.seen.get(&key) {
                if *prev != places {
                    bail!("fingerprint collision with different indices in {name}");
                }
                continue;
            }
            for (p, m) in &places {
                if *m > 1 {
                    writeln!(self.text, "schur group={gh} irr={} p={p} m={m}", info.fingerprint)?;
                }
            }
            self.seen.insert(key, places);
        }
        Ok(())
    }

    pub fn finish(self) -> String {
        self.text
    }
}
