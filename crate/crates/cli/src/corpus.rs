//! The acceptance corpus: one check per criterion.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, ensure, Result};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use kzq_core::catalog::{catalog, parse_amalgams, resolve_spec, BUNDLED_AMALGAMS};
use kzq_core::chartab::{column_product, inner_product, CharacterTable};
use kzq_core::cyclo::Cyclotomic;
use kzq_core::fp::{hom_from_embedding, parse_presentation, todd_coxeter};
use kzq_core::ktheory::{amalgam_image, AmalgamSpec, GroupK, Reduction};
use kzq_core::rational::{fs_indicator, group_fingerprint, SchurProvider};
use kzq_core::zlin::{hnf, snake, snf, AbIso, AbMap, FgAbGroup, IntMat, ShortExactSeq};
use kzq_core::Error;
use kzq_oracle as oracle;

pub const Q16_PRESENTATION: &str = "r,s;r^8,r^4*s^-2,s*r*s^-1*r^-7";
pub const QD32_PRESENTATION: &str = "a,b;a^16,b^2,b*a*b*a^-7";
pub const Q16_IN_QD32: &str = "r=a^2;s=a*b";

/// Groups whose Schur data ships with the library.
pub const CORE_GROUPS: &[&str] = &[
    "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11", "C12", "C13", "C14", "C15", "C16", "C17",
    "C18", "C19", "C20", "C21", "C22", "C23", "C24", "C25", "C26", "C27", "C28", "C29", "C30", "C31", "C32", "D4",
    "D6", "D8", "D10", "D12", "D14", "D16", "D18", "D20", "D22", "D24", "D26", "D28", "D30", "D32", "Q8", "Q16",
    "Q32", "QD16", "QD32", "S3", "S4", "C2xC2", "C2xC2xC2", "C4xC2", "C4xC4", "C8xC2", "C4xC2xC2", "C2xC2xC2xC2",
    "C16xC2", "C8xC4", "C8xC2xC2", "C4xC4xC2", "C4xC2xC2xC2", "C2xC2xC2xC2xC2", "C3xC3", "C6xC2", "C6xC6",
    "C12xC2", "D8xC2", "Q8xC2", "D16xC2", "QD16xC2", "D8xC4", "Q8xC4", "D8xC2xC2", "Q8xC2xC2",
];

/// Groups whose Schur data comes from the external fixture.
pub const FIXTURE_GROUPS: &[&str] = &["Q16xC2", "SG(32,42)", "SG(32,44)"];

/// Fixture amalgams with known images.
const EXPECTED_Z2: &[&str] = &["qd32-qd32", "qd32-sg42", "sg42-sg42"];
const EXPECTED_ZERO: &[&str] = &["q32-q32", "qd32-q32", "sg42-q32", "q16c2-q16c2", "q16c2-qd32", "q16c2-q32"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:>2} {:<20} {} ({:.2}s)",
            self.status,
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusResult {
    pub schema: u32,
    pub seed: u64,
    pub results: Vec<Outcome>,
    pub summary: String,
}

impl CorpusResult {
    pub fn failed(&self) -> bool {
        self.results.iter().any(|o| o.status == Status::Fail)
    }
}

pub fn summary(results: &[Outcome]) -> String {
    let count = |s| results.iter().filter(|o| o.status == s).count();
    let (pass, fail, skip) = (count(Status::Pass), count(Status::Fail), count(Status::Skip));
    let run = pass + fail;
    let pct = (100 * pass).checked_div(run).unwrap_or(100);
    let word = if fail == 0 { "PASS" } else { "FAIL" };
    format!("{word} {pct}% ({pass} passed, {fail} failed, {skip} skipped)")
}

/// `Ok(None)` means skipped.
type Check = fn(&mut Corpus) -> Result<Option<String>>;

struct Amalgam {
    label: String,
    groups: [String; 3],
    image: AbIso,
}

/// Shared state: per-group computations and amalgam images are done once.
pub struct Corpus {
    provider: SchurProvider,
    seed: u64,
    fixture: bool,
    groups: Vec<(String, GroupK)>,
    amalgams: Option<Result<(Vec<Amalgam>, usize), String>>,
}

impl Corpus {
    pub fn new(provider: SchurProvider, seed: u64) -> Result<Self> {
        let mut fixture = true;
        for name in FIXTURE_GROUPS {
            let g = Arc::new(catalog(name)?);
            let t = kzq_core::chartab::character_table(&g)?;
            fixture &= provider.lists_group(&group_fingerprint(&t));
        }
        Ok(Corpus { provider, seed, fixture, groups: Vec::new(), amalgams: None })
    }

    /// Whether the external Schur fixture is loaded.
    pub fn has_fixture(&self) -> bool {
        self.fixture
    }

    pub fn run(&mut self) -> CorpusResult {
        let checks: [(u32, &'static str, Check); 10] = [
            (1, "counterexample", Corpus::counterexample),
            (2, "carter-values", Corpus::carter_values),
            (3, "cross-validation", Corpus::cross_validation),
            (4, "class-tables", Corpus::class_tables),
            (5, "rank-formulas", Corpus::rank_formulas),
            (6, "schur-consistency", Corpus::schur_consistency),
            (7, "two-torsion-law", Corpus::two_torsion_law),
            (8, "other-amalgams", Corpus::other_amalgams),
            (9, "oracle-equivalence", Corpus::oracle_equivalence),
            (10, "todd-coxeter", Corpus::todd_coxeter),
        ];
        let mut results = Vec::new();
        for (id, name, check) in checks {
            let start = Instant::now();
            let (status, detail) = match check(self) {
                Ok(Some(d)) => (Status::Pass, d),
                Ok(None) => (Status::Skip, "external Schur fixture not loaded".to_string()),
                Err(e) => (Status::Fail, format!("{e:#}")),
            };
            results.push(Outcome { id, name, status, detail, elapsed: start.elapsed() });
        }
        let summary = summary(&results);
        CorpusResult { schema: crate::report::SCHEMA, seed: self.seed, results, summary }
    }

    fn group_names(&self) -> Vec<&'static str> {
        let mut names = CORE_GROUPS.to_vec();
        if self.fixture {
            names.extend(FIXTURE_GROUPS);
        }
        names
    }

    fn ensure_groups(&mut self) -> Result<()> {
        if !self.groups.is_empty() {
            return Ok(());
        }
        for name in self.group_names() {
            let g = Arc::new(catalog(name)?);
            let k = GroupK::with_options(g, &self.provider, self.seed, Reduction::Augmentation)
                .map_err(|e| anyhow!("{name}: {e}"))?;
            self.groups.push((name.to_string(), k));
        }
        Ok(())
    }

    fn counterexample(&mut self) -> Result<Option<String>> {
        let start = Instant::now();
        let h = Arc::new(todd_coxeter(&parse_presentation(Q16_PRESENTATION)?)?);
        let k = Arc::new(todd_coxeter(&parse_presentation(QD32_PRESENTATION)?)?);
        let e1 = hom_from_embedding(Q16_IN_QD32, h.clone(), k.clone())?;
        let e2 = hom_from_embedding(Q16_IN_QD32, h, k)?;
        let im = amalgam_image(&AmalgamSpec::new(e1, e2)?, &self.provider)?;
        let took = start.elapsed();
        let iso = im.image.iso();
        ensure!(iso == two_torsion(1), "image is {iso}, expected Z/2");
        ensure!(took < Duration::from_secs(60), "took {took:?}");
        Ok(Some(format!("QD32 *_Q16 QD32 with {Q16_IN_QD32}: image {iso}")))
    }

    fn carter_values(&mut self) -> Result<Option<String>> {
        let check = |name: &str, r: i64, s: usize| -> Result<()> {
            let rep = GroupK::new(Arc::new(catalog(name)?), &self.provider)?.report();
            ensure!((rep.carter_rank, rep.s) == (r, s), "{name}: (r, s) = ({}, {})", rep.carter_rank, rep.s);
            ensure!(rep.k_minus_1 == two_torsion(s), "{name}: K_-1 = {}", rep.k_minus_1);
            ensure!(rep.agreement, "{name}: routes disagree");
            Ok(())
        };
        check("Q16", 0, 1)?;
        check("QD32", 0, 0)?;
        if !self.fixture {
            return Ok(Some("Q16 Z/2, QD32 0; Q16xC2 skipped (no fixture)".into()));
        }
        check("Q16xC2", 0, 2)?;
        Ok(Some("Q16 Z/2, QD32 0, Q16xC2 (Z/2)^2".into()))
    }

    fn cross_validation(&mut self) -> Result<Option<String>> {
        self.ensure_groups()?;
        for (name, k) in &self.groups {
            let rep = k.report();
            ensure!(rep.agreement, "{name}: carter {} vs SC route {}", rep.k_minus_1, rep.k_minus_1_via_sc);
            ShortExactSeq::new(k.ses.i.clone(), k.ses.p.clone()).map_err(|e| anyhow!("{name}: {e}"))?;
        }
        Ok(Some(format!("{} groups agree; all sequences exact", self.groups.len())))
    }

    fn class_tables(&mut self) -> Result<Option<String>> {
        let q16 = todd_coxeter(&parse_presentation(Q16_PRESENTATION)?)?;
        let qd32 = todd_coxeter(&parse_presentation(QD32_PRESENTATION)?)?;
        let expect_q16 = vec![(1, 1), (2, 1), (4, 2), (4, 4), (4, 4), (8, 2), (8, 2)];
        let mut expect_qd32 = vec![(1, 1), (2, 1), (2, 8), (4, 2), (4, 8), (8, 2), (8, 2)];
        expect_qd32.extend([(16, 2); 4]);
        for (name, g, expect) in [("Q16", &q16, expect_q16), ("QD32", &qd32, expect_qd32)] {
            let got = g.classes().order_size_multiset();
            ensure!(got == expect, "{name}: classes {got:?}");
        }
        Ok(Some("Q16 7 classes, QD32 11 classes, order/size multisets match".into()))
    }

    fn rank_formulas(&mut self) -> Result<Option<String>> {
        self.ensure_groups()?;
        for (name, k) in &self.groups {
            let d = &k.data;
            let singular: usize = d.primes.iter().map(|p| d.r_qp[p] - d.r_fp[p]).sum();
            ensure!(k.sc.rank() == singular, "{name}: SC rank {} vs {singular}", k.sc.rank());
            let elements: Vec<Vec<u32>> = k.group.elements().iter().map(|p| p.images().to_vec()).collect();
            let mut r = 1 - oracle::fused_class_count(&elements, None) as i64;
            for &p in &d.primes {
                r += oracle::fused_class_count(&elements, Some((p, false))) as i64;
                r -= oracle::fused_class_count(&elements, Some((p, true))) as i64;
            }
            ensure!(k.carter_rank() == r, "{name}: carter rank {} vs oracle {r}", k.carter_rank());
            if k.group.order().is_power_of_two() {
                ensure!(r == 0, "{name}: 2-group with r = {r}");
            }
        }
        Ok(Some(format!("{} groups; class-orbit oracle agrees", self.groups.len())))
    }

    fn schur_consistency(&mut self) -> Result<Option<String>> {
        let g = Arc::new(catalog("Q16")?);
        let k = GroupK::new(g, &self.provider)?;
        let t = &k.data.table;
        let faithful: Vec<usize> = (0..t.len())
            .filter(|&i| t.degrees()[i] == 2)
            .filter(|&i| (1..t.classes().len()).all(|c| t.values()[i][c] != Cyclotomic::from_int(2)))
            .collect();
        ensure!(faithful.len() == 2, "{} faithful degree-2 characters", faithful.len());
        for &i in &faithful {
            ensure!(fs_indicator(t, i) == -1, "indicator {} on character {i}", fs_indicator(t, i));
        }
        let irr = k
            .irrs()
            .iter()
            .find(|r| r.orbit.contains(&faithful[0]))
            .ok_or_else(|| anyhow!("faithful orbit missing"))?;
        ensure!(irr.schur.m_infinity == 2, "m_inf = {}", irr.schur.m_infinity);
        let line = format!("schur group={} irr={} p=inf m=1\n", k.data.group_fingerprint(), irr.fingerprint);
        let mut bad = self.provider.clone();
        let outcome = bad.load_str(&line, "conflict").and_then(|_| GroupK::new(k.group.clone(), &bad).map(|_| ()));
        ensure!(matches!(outcome, Err(Error::DataConflict(_))), "conflicting datum accepted: {outcome:?}");
        Ok(Some("Q16 faithful characters have indicator -1, m_inf = 2; conflicting datum rejected".into()))
    }

    fn ensure_amalgams(&mut self) -> Result<(&[Amalgam], usize)> {
        if self.amalgams.is_none() {
            let computed = compute_amalgams(&self.provider).map_err(|e| format!("{e:#}"));
            self.amalgams = Some(computed);
        }
        match self.amalgams.as_ref().expect("filled above") {
            Ok((a, skipped)) => Ok((a, *skipped)),
            Err(e) => bail!("{e}"),
        }
    }

    fn two_torsion_law(&mut self) -> Result<Option<String>> {
        let provider = self.provider.clone();
        let (amalgams, skipped) = self.ensure_amalgams()?;
        ensure!(amalgams.len() >= 20, "only {} amalgams computed", amalgams.len());
        let mut s_of: BTreeMap<String, usize> = BTreeMap::new();
        let mut nontrivial = 0;
        for a in amalgams {
            ensure!(a.image.is_elementary_two(), "{}: image {}", a.label, a.image);
            let mut all_zero = true;
            for spec in &a.groups {
                let s = match s_of.get(spec) {
                    Some(&s) => s,
                    None => {
                        let s = GroupK::new(Arc::new(resolve_spec(spec)?), &provider)?.data.s();
                        s_of.insert(spec.clone(), s);
                        s
                    }
                };
                all_zero &= s == 0;
            }
            ensure!(!all_zero || a.image.is_trivial(), "{}: s vanishes but image is {}", a.label, a.image);
            nontrivial += usize::from(!a.image.is_trivial());
        }
        Ok(Some(format!(
            "{} amalgams computed ({nontrivial} with image Z/2), {skipped} need fixture data",
            amalgams.len()
        )))
    }

    fn other_amalgams(&mut self) -> Result<Option<String>> {
        if !self.fixture {
            return Ok(None);
        }
        let (amalgams, _) = self.ensure_amalgams()?;
        let find = |label: &str| {
            amalgams.iter().find(|a| a.label == label).ok_or_else(|| anyhow!("{label} not computed"))
        };
        for label in EXPECTED_Z2 {
            let a = find(label)?;
            ensure!(a.image == two_torsion(1), "{label}: image {}", a.image);
        }
        for label in EXPECTED_ZERO {
            let a = find(label)?;
            ensure!(a.image.is_trivial(), "{label}: image {}", a.image);
        }
        Ok(Some(format!(
            "{} amalgams give Z/2, {} give 0",
            EXPECTED_Z2.len(),
            EXPECTED_ZERO.len()
        )))
    }

    fn oracle_equivalence(&mut self) -> Result<Option<String>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for trial in 0..1000 {
            let (rows, cols) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            let m: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-9..=9)).collect()).collect();
            check_normal_forms(&m).map_err(|e| anyhow!("matrix {trial} {m:?}: {e}"))?;
        }
        self.ensure_groups()?;
        for (name, k) in &self.groups {
            check_orthogonality(&k.data.table).map_err(|e| anyhow!("{name}: {e}"))?;
        }
        for trial in 0..200 {
            random_ladder(&mut rng).map_err(|e| anyhow!("ladder {trial}: {e}"))?;
        }
        Ok(Some(format!(
            "1000 matrices, {} character tables, 200 ladders",
            self.groups.len()
        )))
    }

    fn todd_coxeter(&mut self) -> Result<Option<String>> {
        let mut parts = Vec::new();
        for (name, pres, order) in [("Q16", Q16_PRESENTATION, 16), ("QD32", QD32_PRESENTATION, 32)] {
            let start = Instant::now();
            let g = todd_coxeter(&parse_presentation(pres)?)?;
            let took = start.elapsed();
            ensure!(g.order() == order, "{name}: order {}", g.order());
            ensure!(took < Duration::from_secs(1), "{name}: took {took:?}");
            parts.push(format!("{name} order {order}"));
        }
        Ok(Some(parts.join(", ")))
    }
}

fn two_torsion(s: usize) -> AbIso {
    AbIso { rank: 0, torsion: vec![BigInt::from(2); s] }
}

fn compute_amalgams(provider: &SchurProvider) -> Result<(Vec<Amalgam>, usize)> {
    let mut out = Vec::new();
    let mut skipped = 0;
    for rec in parse_amalgams(BUNDLED_AMALGAMS)? {
        let spec = AmalgamSpec::from_record(&rec).map_err(|e| anyhow!("{}: {e}", rec.label))?;
        match amalgam_image(&spec, provider) {
            Ok(im) => out.push(Amalgam {
                label: rec.label.clone(),
                groups: [rec.h.clone(), rec.k1.clone(), rec.k2.clone()],
                image: im.image.iso(),
            }),
            Err(Error::UnknownSchurIndex { .. }) => skipped += 1,
            Err(e) => bail!("{}: {e}", rec.label),
        }
    }
    Ok((out, skipped))
}

fn to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128().ok_or_else(|| anyhow!("entry {x} out of range"))
}

fn check_normal_forms(m: &[Vec<i64>]) -> Result<()> {
    let a = IntMat::from_rows(m);
    let (d, p, q) = snf(&a);
    ensure!(p.mul(&a).mul(&q) == d, "D != PMQ");
    let mut diag = Vec::new();
    for i in 0..d.rows() {
        for j in 0..d.cols() {
            let v = d.get(i, j);
            if i != j {
                ensure!(v.is_zero(), "off-diagonal entry");
            } else if !v.is_zero() {
                diag.push(to_i128(&v.abs())?);
            }
        }
    }
    ensure!(diag.windows(2).all(|w| w[1] % w[0] == 0), "diagonal {diag:?} not a divisor chain");
    let minors = oracle::invariant_factors_by_minors(m);
    ensure!(diag == minors, "SNF {diag:?} vs minors {minors:?}");
    let (h, u) = hnf(&a);
    ensure!(a.mul(&u) == h, "H != MU");
    ensure!(u.det().abs() == BigInt::from(1), "U not unimodular");
    let expect = oracle::column_hermite(m);
    for (i, row) in expect.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            ensure!(to_i128(h.get(i, j))? == x, "HNF differs at ({i}, {j})");
        }
    }
    Ok(())
}

fn check_orthogonality(t: &CharacterTable) -> Result<()> {
    let classes = t.classes();
    let n = t.len();
    for i in 0..n {
        for j in 0..n {
            let v = inner_product(&t.character(i), &t.character(j), classes);
            let expect = Cyclotomic::from_int(i64::from(i == j));
            ensure!(v == expect, "rows {i}, {j}");
        }
    }
    for a in 0..n {
        for b in 0..n {
            let expect = if a == b { classes.centralizer_order(a) as i64 } else { 0 };
            ensure!(column_product(t, a, b) == Cyclotomic::from_int(expect), "columns {a}, {b}");
        }
    }
    Ok(())
}

fn mat(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> IntMat {
    let mut m = IntMat::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, BigInt::from(f(i, j)));
        }
    }
    m
}

fn split(a: usize, c: usize) -> Result<ShortExactSeq> {
    let (ga, gb, gc) = (FgAbGroup::free(a), FgAbGroup::free(a + c), FgAbGroup::free(c));
    let i = AbMap::new(ga, gb.clone(), mat(a + c, a, |r, k| i64::from(r == k)))?;
    let p = AbMap::new(gb, gc, mat(c, a + c, |r, k| i64::from(k == a + r)))?;
    Ok(ShortExactSeq::new(i, p)?)
}

/// A split ladder `A₁ ⊕ C₁ → A₂ ⊕ C₂` with middle map `[[f_A, X], [0, f_C]]`;
/// the connecting map must be `c ↦ [X c]`.
fn random_ladder(rng: &mut ChaCha8Rng) -> Result<()> {
    let (a1, c1, a2, c2) = (rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(0..=3));
    let mut draw = |r: usize, c: usize| -> Vec<Vec<i64>> {
        (0..r).map(|_| (0..c).map(|_| rng.gen_range(-3..=3)).collect()).collect()
    };
    let (fa, fc, x) = (draw(a2, a1), draw(c2, c1), draw(a2, c1));
    let top = split(a1, c1)?;
    let bot = split(a2, c2)?;
    let fb = mat(a2 + c2, a1 + c1, |i, j| match (i < a2, j < a1) {
        (true, true) => fa[i][j],
        (true, false) => x[i][j - a1],
        (false, true) => 0,
        (false, false) => fc[i - a2][j - a1],
    });
    let fa = AbMap::new(FgAbGroup::free(a1), FgAbGroup::free(a2), mat(a2, a1, |i, j| fa[i][j]))?;
    let fc = AbMap::new(FgAbGroup::free(c1), FgAbGroup::free(c2), mat(c2, c1, |i, j| fc[i][j]))?;
    let fb = AbMap::new(FgAbGroup::free(a1 + c1), FgAbGroup::free(a2 + c2), fb)?;
    let xm = AbMap::new(FgAbGroup::free(c1), FgAbGroup::free(a2), mat(a2, c1, |i, j| x[i][j]))?;
    let sn = snake(&top, &bot, &fa, &fb, &fc)?;
    sn.verify()?;
    let expect = sn.ker_c.1.then(&xm).then(&sn.cok_a.1);
    ensure!(sn.delta.equals(&expect), "connecting map differs from the X-block formula");
    Ok(())
}

