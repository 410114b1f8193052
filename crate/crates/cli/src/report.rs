//! Reports in JSON and aligned text.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use kzq_core::ktheory::{KTheoryReport, SkeletonImage, Vc1Report};
use kzq_core::zlin::AbIso;
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

/// An abelian group `Z^rank ⊕ ⊕ Z/t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbGroupJson {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl From<&AbIso> for AbGroupJson {
    fn from(g: &AbIso) -> Self {
        AbGroupJson { rank: g.rank, torsion: g.torsion_u64() }
    }
}

impl std::fmt::Display for AbGroupJson {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
        for &t in &self.torsion {
            *counts.entry(t).or_default() += 1;
        }
        for (t, k) in counts {
            parts.push(if k == 1 { format!("Z/{t}") } else { format!("(Z/{t})^{k}") });
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Common {
    pub schema: u32,
    pub command: String,
    pub input: BTreeMap<String, String>,
    pub seed: u64,
    pub provenance: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsReport {
    #[serde(flatten)]
    pub common: Common,
    pub group: String,
    pub order: usize,
    pub r_q: usize,
    pub r_qp: BTreeMap<String, usize>,
    pub r_fp: BTreeMap<String, usize>,
    pub carter_rank: i64,
    pub s: usize,
    pub k_minus_1: AbGroupJson,
    pub k_minus_1_via_sc: AbGroupJson,
    pub k0q_rank: usize,
    pub sc_rank: usize,
    pub image: Option<AbGroupJson>,
    pub agreement: bool,
}

impl InvariantsReport {
    pub fn new(common: Common, group: &str, r: &KTheoryReport) -> Self {
        let keyed = |m: &BTreeMap<u64, usize>| m.iter().map(|(p, v)| (p.to_string(), *v)).collect();
        InvariantsReport {
            common,
            group: group.to_string(),
            order: r.order,
            r_q: r.r_q,
            r_qp: keyed(&r.r_qp),
            r_fp: keyed(&r.r_fp),
            carter_rank: r.carter_rank,
            s: r.s,
            k_minus_1: (&r.k_minus_1).into(),
            k_minus_1_via_sc: (&r.k_minus_1_via_sc).into(),
            k0q_rank: r.k0q_rank,
            sc_rank: r.sc_rank,
            image: None,
            agreement: r.agreement,
        }
    }

    pub fn text(&self) -> String {
        let mut rows: Vec<(String, String)> = vec![
            ("group".into(), self.group.clone()),
            ("order".into(), self.order.to_string()),
            ("r_Q".into(), self.r_q.to_string()),
        ];
        for (p, v) in &self.r_qp {
            rows.push((format!("r_Q{p}"), v.to_string()));
            rows.push((format!("r_F{p}"), self.r_fp[p].to_string()));
        }
        rows.extend([
            ("carter rank".into(), self.carter_rank.to_string()),
            ("s".into(), self.s.to_string()),
            ("K_-1".into(), self.k_minus_1.to_string()),
            ("K_-1 via SC".into(), self.k_minus_1_via_sc.to_string()),
            ("agreement".into(), self.agreement.to_string()),
            ("reduced K_0 Q rank".into(), self.k0q_rank.to_string()),
            ("SC rank".into(), self.sc_rank.to_string()),
        ]);
        render(&self.common, &rows)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmalgamReport {
    #[serde(flatten)]
    pub common: Common,
    pub group: String,
    pub embed1: String,
    pub embed2: String,
    pub ker_k0q: AbGroupJson,
    pub ker_sc: AbGroupJson,
    pub ker_k_minus_1: AbGroupJson,
    pub image: Option<AbGroupJson>,
    pub agreement: bool,
}

impl AmalgamReport {
    pub fn new(common: Common, group: String, embed1: String, embed2: String, im: &SkeletonImage) -> Self {
        let image = im.image.iso();
        AmalgamReport {
            common,
            group,
            embed1,
            embed2,
            ker_k0q: (&im.ker_k0q).into(),
            ker_sc: (&im.ker_sc).into(),
            ker_k_minus_1: (&im.ker_k_minus_1).into(),
            agreement: image == im.snake_image,
            image: Some((&image).into()),
        }
    }

    pub fn text(&self) -> String {
        let rows: Vec<(String, String)> = vec![
            ("group".into(), self.group.clone()),
            ("embedding 1".into(), self.embed1.clone()),
            ("embedding 2".into(), self.embed2.clone()),
            ("ker K_0 Q".into(), self.ker_k0q.to_string()),
            ("ker SC".into(), self.ker_sc.to_string()),
            ("ker K_-1".into(), self.ker_k_minus_1.to_string()),
            ("image".into(), self.image.as_ref().map_or("-".into(), ToString::to_string)),
            ("agreement".into(), self.agreement.to_string()),
        ];
        render(&self.common, &rows)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vc1Json {
    pub group: String,
    pub automorphism: String,
    pub orbits: Vec<Vec<usize>>,
    pub k0q: AbGroupJson,
    pub image: Option<AbGroupJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vc1ReportJson {
    #[serde(flatten)]
    pub common: Common,
    #[serde(flatten)]
    pub body: Vc1Json,
}

impl Vc1ReportJson {
    pub fn new(common: Common, group: String, automorphism: String, r: &Vc1Report) -> Self {
        Vc1ReportJson {
            common,
            body: Vc1Json {
                group,
                automorphism,
                orbits: r.orbits.clone(),
                k0q: (&r.k0q.iso()).into(),
                image: Some((&r.image.iso()).into()),
            },
        }
    }

    pub fn text(&self) -> String {
        let b = &self.body;
        let rows: Vec<(String, String)> = vec![
            ("group".into(), format!("{} x| Z", b.group)),
            ("automorphism".into(), b.automorphism.clone()),
            ("orbits".into(), b.orbits.len().to_string()),
            ("K_0 QG".into(), b.k0q.to_string()),
            ("image".into(), b.image.as_ref().map_or("-".into(), ToString::to_string)),
            ("note".into(), "the image is trivial for every group of this type".into()),
        ];
        render(&self.common, &rows)
    }
}

fn render(common: &Common, rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        let _ = writeln!(out, "{k:<width$}  {v}");
    }
    let _ = writeln!(out, "{:<width$}  {}", "seed", common.seed);
    for p in &common.provenance {
        let _ = writeln!(out, "{:<width$}  {p}", "data");
    }
    out
}

/// Canonical JSON: keys of every object sorted, two-space indent.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("reports serialize");
    serde_json::to_string_pretty(&v).expect("reports serialize")
}
