//! Lower K-theory of integral and rational group rings.
//!
//! Reduced `K₀` is modelled as the kernel of the augmentation recording the
//! multiplicity of the trivial representation. That augmentation commutes
//! with induction (Frobenius reciprocity), and its kernel maps isomorphically
//! onto `K₀ / ⟨[QG]⟩` because `[QG]` contains the trivial representation once.
//! [`Reduction::Quotient`] computes with the quotient instead.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::catalog::{resolve_spec, AmalgamRecord};
use crate::chartab::{character_table_seeded, induce, inner_product, ClassFunction};
use crate::cyclo::{Cyclotomic, Rat};
use crate::error::{Error, Result};
use crate::fp::hom_from_embedding;
use crate::perm::{FiniteGroup, GroupHom};
use crate::rational::{QpIrr, RationalData, RationalIrr, SchurProvider};
use crate::zlin::{cokernel, image, snake, AbIso, AbMap, FgAbGroup, IntMat, ShortExactSeq};

/// How reduced `K₀QG` is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reduction {
    /// Kernel of the trivial-multiplicity augmentation; basis the nontrivial
    /// rational irreducibles.
    #[default]
    Augmentation,
    /// `K₀QG` modulo the class of the regular representation.
    Quotient,
}

/// `K₀QG` on the basis of rational irreducibles.
#[derive(Debug, Clone)]
pub struct K0QBasis {
    pub lattice: FgAbGroup,
    pub reduced: FgAbGroup,
    /// Index of the trivial representation among the rational irreducibles.
    pub trivial: usize,
    /// Class of `QG` in `K₀QG`.
    pub regular: Vec<BigInt>,
    pub reduction: Reduction,
}

impl K0QBasis {
    pub fn rank(&self) -> usize {
        self.lattice.gens()
    }

    pub fn reduced_rank(&self) -> usize {
        self.reduced.iso().rank
    }

    /// Matrix sending reduced generators to `K₀QG` coordinates.
    fn reduced_to_full(&self) -> IntMat {
        let r = self.rank();
        match self.reduction {
            Reduction::Quotient => IntMat::identity(r),
            Reduction::Augmentation => {
                let cols: Vec<Vec<BigInt>> = (0..r)
                    .filter(|&i| i != self.trivial)
                    .map(|i| (0..r).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
                    .collect();
                IntMat::from_cols(r, &cols)
            }
        }
    }

    /// Restriction of a `K₀QG` matrix (rows and columns on all irreducibles)
    /// to the reduced model.
    fn reduce_square(&self, target: &K0QBasis, full: &IntMat) -> IntMat {
        match self.reduction {
            Reduction::Quotient => full.clone(),
            Reduction::Augmentation => {
                let rows: Vec<usize> = (0..target.rank()).filter(|&j| j != target.trivial).collect();
                let cols: Vec<usize> = (0..self.rank()).filter(|&i| i != self.trivial).collect();
                let mut m = IntMat::zeros(rows.len(), cols.len());
                for (a, &j) in rows.iter().enumerate() {
                    for (b, &i) in cols.iter().enumerate() {
                        m.set(a, b, full.get(j, i).clone());
                    }
                }
                m
            }
        }
    }
}

/// Singular characters at one prime.
#[derive(Debug, Clone)]
pub struct SCPrime {
    pub p: u64,
    /// Classes of elements whose order is divisible by `p`.
    pub singular: Vec<usize>,
    pub qp: Vec<QpIrr>,
    /// Columns: the `Q_p`-irreducible characters on singular classes,
    /// flattened over the power basis of `Q(ζ_e)`.
    pub flattened: IntMat,
    /// Generated by the `Q_p`-irreducibles, modulo characters vanishing on
    /// singular classes.
    pub group: FgAbGroup,
}

#[derive(Debug, Clone)]
pub struct SCGroup {
    pub primes: Vec<SCPrime>,
    pub lattice: FgAbGroup,
    /// Restriction `K̃₀QG → SC(G)`.
    pub restriction: AbMap,
}

impl SCGroup {
    pub fn rank(&self) -> usize {
        self.lattice.iso().rank
    }

    /// Offset of the generators of prime `p` in the direct sum.
    fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut acc = 0;
        for sp in &self.primes {
            out.push(acc);
            acc += sp.qp.len();
        }
        out
    }
}

/// Everything needed about one finite group.
#[derive(Debug, Clone)]
pub struct GroupK {
    pub group: Arc<FiniteGroup>,
    pub data: RationalData,
    pub k0q: K0QBasis,
    pub sc: SCGroup,
    /// `0 → K̃₀QG → SC(G) → K₋₁ZG → 0`.
    pub ses: ShortExactSeq,
}

impl GroupK {
    pub fn new(group: Arc<FiniteGroup>, provider: &SchurProvider) -> Result<Self> {
        Self::with_options(group, provider, 0, Reduction::Augmentation)
    }

    pub fn with_options(group: Arc<FiniteGroup>, provider: &SchurProvider, seed: u64, reduction: Reduction) -> Result<Self> {
        let table = Arc::new(character_table_seeded(&group, seed)?);
        let data = RationalData::new(table, provider)?;
        let k0q = k0q_basis(&data, reduction);
        let sc = sc_group(&data, &k0q)?;
        let (_, proj) = cokernel(&sc.restriction);
        let ses = ShortExactSeq::new(sc.restriction.clone(), proj)?;
        Ok(GroupK { group, data, k0q, sc, ses })
    }

    pub fn irrs(&self) -> &[RationalIrr] {
        &self.data.irrs
    }

    pub fn k_minus_1_via_sc(&self) -> &FgAbGroup {
        self.ses.c()
    }

    pub fn carter_rank(&self) -> i64 {
        let singular: i64 = self.data.primes.iter().map(|p| self.data.r_qp[p] as i64 - self.data.r_fp[p] as i64).sum();
        1 - self.data.r_q as i64 + singular
    }

    pub fn report(&self) -> KTheoryReport {
        let r = self.carter_rank();
        let s = self.data.s();
        let carter = AbIso { rank: r.max(0) as usize, torsion: vec![BigInt::from(2); s] };
        let via_sc = self.k_minus_1_via_sc().iso();
        KTheoryReport {
            order: self.group.order(),
            r_q: self.data.r_q,
            r_qp: self.data.r_qp.clone(),
            r_fp: self.data.r_fp.clone(),
            carter_rank: r,
            s,
            agreement: r >= 0 && carter == via_sc,
            k_minus_1: carter,
            k_minus_1_via_sc: via_sc,
            k0q_rank: self.k0q.reduced_rank(),
            sc_rank: self.sc.rank(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KTheoryReport {
    pub order: usize,
    pub r_q: usize,
    pub r_qp: BTreeMap<u64, usize>,
    pub r_fp: BTreeMap<u64, usize>,
    pub carter_rank: i64,
    pub s: usize,
    /// `Z^r ⊕ (Z/2)^s` from the counts.
    pub k_minus_1: AbIso,
    /// Cokernel of `K̃₀QG → SC(G)`.
    pub k_minus_1_via_sc: AbIso,
    pub agreement: bool,
    /// Rank of reduced `K₀QG`.
    pub k0q_rank: usize,
    pub sc_rank: usize,
}

pub fn k0q_basis(data: &RationalData, reduction: Reduction) -> K0QBasis {
    let r = data.irrs.len();
    let trivial = data.irrs.iter().position(|i| i.orbit.contains(&0)).expect("trivial character is row 0");
    let regular: Vec<BigInt> = data
        .irrs
        .iter()
        .map(|i| BigInt::from(i.constituent_degree / i.schur.m_global as u64))
        .collect();
    let lattice = FgAbGroup::free(r);
    let reduced = match reduction {
        Reduction::Augmentation => FgAbGroup::free(r - 1),
        Reduction::Quotient => FgAbGroup::new(IntMat::from_cols(r, std::slice::from_ref(&regular))),
    };
    K0QBasis { lattice, reduced, trivial, regular, reduction }
}

pub fn k0q(group: Arc<FiniteGroup>, provider: &SchurProvider) -> Result<K0QBasis> {
    Ok(GroupK::new(group, provider)?.k0q)
}

fn integral_coords(v: &Cyclotomic, e: u32) -> Result<Vec<BigInt>> {
    v.coords_in(e)
        .into_iter()
        .map(|q| {
            if q.is_integer() {
                Ok(q.to_integer())
            } else {
                Err(Error::DataConflict(format!("singular character value {v} is not an algebraic integer")))
            }
        })
        .collect()
}

fn flatten(f: &ClassFunction, classes: &[usize], e: u32) -> Result<Vec<BigInt>> {
    let mut out = Vec::new();
    for &c in classes {
        out.extend(integral_coords(&f.values[c], e)?);
    }
    Ok(out)
}

fn sc_group(data: &RationalData, k0q: &K0QBasis) -> Result<SCGroup> {
    let cd = data.table.classes();
    let e = cd.exponent() as u32;
    let mut primes = Vec::new();
    for &p in &data.primes {
        let singular: Vec<usize> = (0..cd.len()).filter(|&c| cd.orders()[c] as u64 % p == 0).collect();
        let qp = data.qp[&p].clone();
        let dim = singular.len() * crate::cyclo::euler_phi(e) as usize;
        let cols = qp.iter().map(|q| flatten(&q.character, &singular, e)).collect::<Result<Vec<_>>>()?;
        let flattened = IntMat::from_cols(dim, &cols);
        let group = FgAbGroup::new(crate::zlin::integer_kernel(&flattened));
        primes.push(SCPrime { p, singular, qp, flattened, group });
    }
    let lattice = FgAbGroup::direct_sum_all(&primes.iter().map(|s| s.group.clone()).collect::<Vec<_>>());

    // K₀QG → SC(G): χ_I = Σ (m(I)/m_p(I)) · β over the Q_p-irreducibles β in I.
    let total: usize = primes.iter().map(|s| s.qp.len()).sum();
    let mut full = IntMat::zeros(total, data.irrs.len());
    let mut offset = 0;
    for sp in &primes {
        for (k, q) in sp.qp.iter().enumerate() {
            let irr = &data.irrs[q.parent];
            full.set(offset + k, q.parent, BigInt::from(irr.schur.m_global / q.m_p));
        }
        for (i, irr) in data.irrs.iter().enumerate() {
            let direct = flatten(&irr.character, &sp.singular, e)?;
            let via: Vec<BigInt> = sp.flattened.mul_vec(&(0..sp.qp.len()).map(|k| full.get(offset + k, i).clone()).collect::<Vec<_>>());
            if direct != via {
                return Err(Error::DataConflict(format!(
                    "rational irreducible {i} does not split into Q{} irreducibles as its Schur data says",
                    sp.p
                )));
            }
        }
        offset += sp.qp.len();
    }
    let matrix = full.mul(&k0q.reduced_to_full());
    let restriction = AbMap::new(k0q.reduced.clone(), lattice.clone(), matrix)?;
    Ok(SCGroup { primes, lattice, restriction })
}

/// Carter's description of `K₋₁ZG` together with the cokernel route.
pub fn carter(group: Arc<FiniteGroup>, provider: &SchurProvider) -> Result<KTheoryReport> {
    Ok(GroupK::new(group, provider)?.report())
}

pub fn k_minus_1_via_sc(group: Arc<FiniteGroup>, provider: &SchurProvider) -> Result<FgAbGroup> {
    Ok(GroupK::new(group, provider)?.k_minus_1_via_sc().clone())
}

/// Multiplicity of each target constituent `ψ_J` in `Ind f`, divided by `div(J)`.
fn induction_column(
    h: &GroupHom,
    f: &ClassFunction,
    target: &GroupK,
    constituents: &[(usize, u32)],
    what: &str,
) -> Result<Vec<BigInt>> {
    let ind = induce(h, f)?;
    let t = &target.data.table;
    let mut out = Vec::new();
    for &(row, div) in constituents {
        let ip = inner_product(&ind, &t.character(row), t.classes());
        let q = ip.to_rational().ok_or_else(|| Error::NonIntegralCoefficient(format!("{what}: irrational multiplicity {ip}")))?;
        let q = q / Rat::from_integer(div.into());
        if !q.is_integer() || q < Rat::zero() {
            return Err(Error::NonIntegralCoefficient(format!("{what}: multiplicity {q}")));
        }
        out.push(q.to_integer());
    }
    Ok(out)
}

/// Induction maps along an injective homomorphism `H → K`.
#[derive(Debug, Clone)]
pub struct InductionMaps {
    /// On unreduced `K₀Q`.
    pub k0q_full: IntMat,
    pub k0q: AbMap,
    pub sc: AbMap,
    pub k_minus_1: AbMap,
}

pub fn induction_maps(h: &GroupHom, source: &GroupK, target: &GroupK) -> Result<InductionMaps> {
    h.ensure_injective()?;
    let rational: Vec<(usize, u32)> = target.irrs().iter().map(|j| (j.orbit[0], j.schur.m_global)).collect();
    let mut cols = Vec::new();
    for (i, irr) in source.irrs().iter().enumerate() {
        let col = induction_column(h, &irr.character, target, &rational, &format!("rational irreducible {i}"))?;
        let rebuilt = col.iter().zip(target.irrs()).fold(ClassFunction::zero(target.data.table.len()), |acc, (a, j)| {
            acc.add(&j.character.scale(&Rat::from_integer(a.clone())))
        });
        if rebuilt != induce(h, &irr.character)? {
            return Err(Error::NonIntegralCoefficient(format!("induced rational irreducible {i} is not a sum of rational irreducibles")));
        }
        cols.push(col);
    }
    let k0q_full = IntMat::from_cols(target.irrs().len(), &cols);
    let k0q_matrix = source.k0q.reduce_square(&target.k0q, &k0q_full);
    let k0q = AbMap::new(source.k0q.reduced.clone(), target.k0q.reduced.clone(), k0q_matrix)?;

    let src_off = source.sc.offsets();
    let tgt_off = target.sc.offsets();
    let tgt_total: usize = target.sc.primes.iter().map(|s| s.qp.len()).sum();
    let src_total: usize = source.sc.primes.iter().map(|s| s.qp.len()).sum();
    let mut sc_matrix = IntMat::zeros(tgt_total, src_total);
    for (si, sp) in source.sc.primes.iter().enumerate() {
        let Some(ti) = target.sc.primes.iter().position(|t| t.p == sp.p) else {
            return Err(Error::BadMap(format!("prime {} does not divide the target order", sp.p)));
        };
        let tp = &target.sc.primes[ti];
        let cons: Vec<(usize, u32)> = tp.qp.iter().map(|q| (q.suborbit[0], q.m_p)).collect();
        for (k, q) in sp.qp.iter().enumerate() {
            let col = induction_column(h, &q.character, target, &cons, &format!("Q{} irreducible {k}", sp.p))?;
            for (l, a) in col.into_iter().enumerate() {
                sc_matrix.set(tgt_off[ti] + l, src_off[si] + k, a);
            }
        }
    }
    let sc = AbMap::new(source.sc.lattice.clone(), target.sc.lattice.clone(), sc_matrix)?;
    if !source.sc.restriction.then(&sc).equals(&k0q.then(&target.sc.restriction)) {
        return Err(Error::NonCommutingLadder("induction does not commute with restriction to singular classes".into()));
    }
    let k_minus_1 = AbMap::new(source.ses.c().clone(), target.ses.c().clone(), sc.matrix.clone())?;
    Ok(InductionMaps { k0q_full, k0q, sc, k_minus_1 })
}

/// An edge `H → K_f`, `H → K_g` of a one-dimensional skeleton.
#[derive(Debug, Clone)]
pub struct Edge {
    pub group: Arc<FiniteGroup>,
    pub f_vertex: usize,
    pub f: GroupHom,
    pub g_vertex: usize,
    pub g: GroupHom,
}

#[derive(Debug, Clone, Default)]
pub struct OneSkeleton {
    pub vertices: Vec<Arc<FiniteGroup>>,
    pub edges: Vec<Edge>,
}

impl OneSkeleton {
    pub fn validate(&self) -> Result<()> {
        for e in &self.edges {
            for (v, h) in [(e.f_vertex, &e.f), (e.g_vertex, &e.g)] {
                let target = self.vertices.get(v).ok_or_else(|| Error::BadMap(format!("no vertex {v}")))?;
                if !Arc::ptr_eq(h.source(), &e.group) || !Arc::ptr_eq(h.target(), target) {
                    return Err(Error::BadMap("edge map has the wrong source or target".into()));
                }
                h.ensure_injective()?;
            }
        }
        Ok(())
    }
}

/// Kernels along the ladder and the resulting image group.
#[derive(Debug, Clone)]
pub struct SkeletonImage {
    pub ker_k0q: AbIso,
    pub ker_sc: AbIso,
    pub ker_k_minus_1: AbIso,
    /// `coker(ker^SC → ker^{K₋₁})`.
    pub image: FgAbGroup,
    /// Image of the snake connecting map; isomorphic to `image`.
    pub snake_image: AbIso,
}

fn group_ks(groups: &[Arc<FiniteGroup>], provider: &SchurProvider, seed: u64, reduction: Reduction) -> Result<Vec<GroupK>> {
    let mut out: Vec<GroupK> = Vec::new();
    for g in groups {
        match out.iter().find(|k| Arc::ptr_eq(&k.group, g)) {
            Some(k) => out.push(k.clone()),
            None => out.push(GroupK::with_options(g.clone(), provider, seed, reduction)?),
        }
    }
    Ok(out)
}

/// Places the blocks `(row block, col block, map)` into one map between
/// direct sums.
fn assemble(sources: &[FgAbGroup], targets: &[FgAbGroup], blocks: &[(usize, usize, &AbMap)]) -> Result<AbMap> {
    let src = FgAbGroup::direct_sum_all(sources);
    let tgt = FgAbGroup::direct_sum_all(targets);
    let offs = |gs: &[FgAbGroup]| {
        gs.iter().scan(0, |acc, g| {
            let o = *acc;
            *acc += g.gens();
            Some(o)
        })
        .collect::<Vec<_>>()
    };
    let (so, to) = (offs(sources), offs(targets));
    let mut m = IntMat::zeros(tgt.gens(), src.gens());
    for &(r, c, map) in blocks {
        for i in 0..map.matrix.rows() {
            for j in 0..map.matrix.cols() {
                let v = m.get(to[r] + i, so[c] + j) + map.matrix.get(i, j);
                m.set(to[r] + i, so[c] + j, v);
            }
        }
    }
    AbMap::new(src, tgt, m)
}

pub fn image_from_one_skeleton(sk: &OneSkeleton, provider: &SchurProvider) -> Result<SkeletonImage> {
    image_from_one_skeleton_with(sk, provider, 0, Reduction::Augmentation)
}

pub fn image_from_one_skeleton_with(
    sk: &OneSkeleton,
    provider: &SchurProvider,
    seed: u64,
    reduction: Reduction,
) -> Result<SkeletonImage> {
    sk.validate()?;
    let vk = group_ks(&sk.vertices, provider, seed, reduction)?;
    let ek = group_ks(&sk.edges.iter().map(|e| e.group.clone()).collect::<Vec<_>>(), provider, seed, reduction)?;
    let mut f_maps = Vec::new();
    let mut g_maps = Vec::new();
    for (i, e) in sk.edges.iter().enumerate() {
        f_maps.push(induction_maps(&e.f, &ek[i], &vk[e.f_vertex])?);
        g_maps.push(induction_maps(&e.g, &ek[i], &vk[e.g_vertex])?.negate());
    }
    let level = |pick: &dyn Fn(&GroupK) -> FgAbGroup, map: &dyn Fn(&InductionMaps) -> AbMap| -> Result<AbMap> {
        let fs: Vec<AbMap> = f_maps.iter().map(map).collect();
        let gs: Vec<AbMap> = g_maps.iter().map(map).collect();
        let mut blocks = Vec::new();
        for (i, e) in sk.edges.iter().enumerate() {
            blocks.push((e.f_vertex, i, &fs[i]));
            blocks.push((e.g_vertex, i, &gs[i]));
        }
        assemble(&ek.iter().map(pick).collect::<Vec<_>>(), &vk.iter().map(pick).collect::<Vec<_>>(), &blocks)
    };
    let fa = level(&|k| k.k0q.reduced.clone(), &|m| m.k0q.clone())?;
    let fb = level(&|k| k.sc.lattice.clone(), &|m| m.sc.clone())?;
    let fc = level(&|k| k.ses.c().clone(), &|m| m.k_minus_1.clone())?;
    let sum_ses = |ks: &[GroupK]| -> Result<ShortExactSeq> {
        let i = ks.iter().map(|k| k.ses.i.clone()).reduce(|a, b| a.direct_sum(&b));
        let p = ks.iter().map(|k| k.ses.p.clone()).reduce(|a, b| a.direct_sum(&b));
        match (i, p) {
            (Some(i), Some(p)) => ShortExactSeq::new(i, p),
            _ => {
                let t = FgAbGroup::trivial();
                ShortExactSeq::new(AbMap::zero(&t, &t), AbMap::zero(&t, &t))
            }
        }
    };
    let top = sum_ses(&ek)?;
    let bot = sum_ses(&vk)?;
    let sn = snake(&top, &bot, &fa, &fb, &fc).map_err(|e| match e {
        Error::NonCommutingSquare(m) => Error::NonCommutingLadder(m),
        other => other,
    })?;
    let (img, _) = cokernel(&sn.kb_kc);
    let snake_image = image(&sn.delta).0.iso();
    if snake_image != img.iso() {
        return Err(Error::NotExact(format!("snake image {} differs from cokernel {}", snake_image, img.iso())));
    }
    Ok(SkeletonImage {
        ker_k0q: sn.ker_a.0.iso(),
        ker_sc: sn.ker_b.0.iso(),
        ker_k_minus_1: sn.ker_c.0.iso(),
        image: img,
        snake_image,
    })
}

impl InductionMaps {
    fn negate(self) -> InductionMaps {
        InductionMaps {
            k0q_full: self.k0q_full.neg(),
            k0q: self.k0q.neg(),
            sc: self.sc.neg(),
            k_minus_1: self.k_minus_1.neg(),
        }
    }
}

/// `K₁ *_H K₂` with index-two embeddings.
#[derive(Debug, Clone)]
pub struct AmalgamSpec {
    pub h: Arc<FiniteGroup>,
    pub k1: Arc<FiniteGroup>,
    pub k2: Arc<FiniteGroup>,
    pub e1: GroupHom,
    pub e2: GroupHom,
}

impl AmalgamSpec {
    pub fn new(e1: GroupHom, e2: GroupHom) -> Result<Self> {
        if !Arc::ptr_eq(e1.source(), e2.source()) {
            return Err(Error::BadMap("embeddings have different sources".into()));
        }
        for e in [&e1, &e2] {
            e.ensure_injective()?;
            if e.target().order() != 2 * e.source().order() {
                return Err(Error::NotIndexTwo { overgroup: e.target().order(), subgroup: e.source().order() });
            }
        }
        Ok(AmalgamSpec { h: e1.source().clone(), k1: e1.target().clone(), k2: e2.target().clone(), e1, e2 })
    }

    pub fn skeleton(&self) -> OneSkeleton {
        OneSkeleton {
            vertices: vec![self.k1.clone(), self.k2.clone()],
            edges: vec![Edge { group: self.h.clone(), f_vertex: 0, f: self.e1.clone(), g_vertex: 1, g: self.e2.clone() }],
        }
    }
}

impl AmalgamSpec {
    /// Resolves the groups of a fixture record and checks both embeddings.
    pub fn from_record(rec: &AmalgamRecord) -> Result<Self> {
        let h = Arc::new(resolve_spec(&rec.h)?);
        let k1 = Arc::new(resolve_spec(&rec.k1)?);
        let k2 = if rec.k2 == rec.k1 { k1.clone() } else { Arc::new(resolve_spec(&rec.k2)?) };
        let e1 = hom_from_embedding(&rec.e1, h.clone(), k1)?;
        let e2 = hom_from_embedding(&rec.e2, h, k2)?;
        AmalgamSpec::new(e1, e2)
    }
}

pub fn amalgam_image(a: &AmalgamSpec, provider: &SchurProvider) -> Result<SkeletonImage> {
    image_from_one_skeleton(&a.skeleton(), provider)
}

/// Result of the VC1 computation for `H ⋊_t Z`.
#[derive(Debug, Clone)]
pub struct Vc1Report {
    /// Orbits of rational irreducibles under `χ ↦ χ ∘ t`.
    pub orbits: Vec<Vec<usize>>,
    pub k0q: FgAbGroup,
    /// Image of `K̃₀ZG → K̃₀QG` from the mapping-torus skeleton.
    pub image: FgAbGroup,
}

pub fn vc1_k0q(t: &GroupHom, provider: &SchurProvider) -> Result<Vc1Report> {
    let h = t.source().clone();
    if !Arc::ptr_eq(&h, t.target()) {
        return Err(Error::NotAutomorphism("source and target differ".into()));
    }
    let check = t.verify();
    if !check.is_hom {
        return Err(Error::NotAutomorphism("generator images do not define a homomorphism".into()));
    }
    if !check.is_injective {
        return Err(Error::NotAutomorphism("not injective".into()));
    }
    let gk = GroupK::new(h.clone(), provider)?;
    let cd = h.classes();
    let class_perm: Vec<usize> = (0..cd.len()).map(|c| cd.class_of(t.apply(cd.representative(c)))).collect();
    let irrs = gk.irrs();
    let moved: Vec<usize> = irrs
        .iter()
        .map(|irr| {
            let f = ClassFunction::new(class_perm.iter().map(|&c| irr.character.values[c].clone()).collect());
            irrs.iter().position(|j| j.character == f).expect("automorphisms permute rational irreducibles")
        })
        .collect();
    let mut seen = vec![false; irrs.len()];
    let mut orbits = Vec::new();
    for start in 0..irrs.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            orbit.push(x);
            x = moved[x];
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    let k0q = FgAbGroup::free(orbits.len());
    let sk = OneSkeleton {
        vertices: vec![h.clone()],
        edges: vec![Edge { group: h.clone(), f_vertex: 0, f: GroupHom::identity(h.clone()), g_vertex: 0, g: t.clone() }],
    };
    let image = image_from_one_skeleton(&sk, provider)?.image;
    Ok(Vc1Report { orbits, k0q, image })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;

    fn group(name: &str) -> Arc<FiniteGroup> {
        Arc::new(catalog(name).unwrap())
    }

    fn iso(rank: usize, torsion: &[i64]) -> AbIso {
        AbIso { rank, torsion: torsion.iter().map(|&t| BigInt::from(t)).collect() }
    }

    #[test]
    fn carter_q16_qd32() {
        let p = SchurProvider::core();
        let q = carter(group("Q16"), &p).unwrap();
        assert_eq!((q.carter_rank, q.s), (0, 1));
        assert_eq!(q.k_minus_1, iso(0, &[2]));
        assert!(q.agreement);
        assert_eq!(q.sc_rank, 5);
        let qd = carter(group("QD32"), &p).unwrap();
        assert_eq!((qd.carter_rank, qd.s, qd.sc_rank), (0, 0, 6));
        assert!(qd.agreement && qd.k_minus_1_via_sc.is_trivial());
        let t = carter(group("C1"), &p).unwrap();
        assert_eq!((t.k0q_rank, t.sc_rank), (0, 0));
    }

    #[test]
    fn s3_has_trivial_k_minus_1() {
        let r = carter(group("S3"), &SchurProvider::core()).unwrap();
        assert_eq!((r.carter_rank, r.s), (0, 0));
        assert!(r.agreement);
    }

    #[test]
    fn induction_from_trivial_group() {
        let p = SchurProvider::core();
        let c1 = GroupK::new(group("C1"), &p).unwrap();
        let c2g = group("C2");
        let c2 = GroupK::new(c2g.clone(), &p).unwrap();
        let h = GroupHom::new(c1.group.clone(), c2g, vec![]);
        let m = induction_maps(&h, &c1, &c2).unwrap();
        assert_eq!(m.k0q_full, IntMat::from_rows(&[vec![1], vec![1]]));
    }

    #[test]
    fn counterexample() {
        let p = SchurProvider::core();
        let h = group("Q16");
        let k = group("QD32");
        let e = hom_from_embedding("r=a^2;s=a*b", h, k).unwrap();
        let a = AmalgamSpec::new(e.clone(), e).unwrap();
        let img = amalgam_image(&a, &p).unwrap();
        assert_eq!(img.image.iso(), iso(0, &[2]));
        assert_eq!(img.ker_k_minus_1, iso(0, &[2]));
        let q = image_from_one_skeleton_with(&a.skeleton(), &p, 0, Reduction::Quotient).unwrap();
        assert_eq!(q.image.iso(), img.image.iso());
        assert_eq!(q.ker_k0q, img.ker_k0q);
    }

    #[test]
    fn infinite_dihedral() {
        let p = SchurProvider::core();
        let h = group("C1");
        let k = group("C2");
        let e = GroupHom::new(h, k, vec![]);
        let img = amalgam_image(&AmalgamSpec::new(e.clone(), e).unwrap(), &p).unwrap();
        assert!(img.image.is_trivial());
    }

    #[test]
    fn index_is_checked() {
        let h = group("C1");
        let e = GroupHom::new(h, group("C3"), vec![]);
        assert!(matches!(AmalgamSpec::new(e.clone(), e), Err(Error::NotIndexTwo { overgroup: 3, subgroup: 1 })));
    }

    #[test]
    fn vc1_examples() {
        let p = SchurProvider::core();
        let c3 = group("C3");
        let inv = hom_from_embedding("a=a^-1", c3.clone(), c3.clone()).unwrap();
        let r = vc1_k0q(&inv, &p).unwrap();
        assert_eq!(r.k0q.iso(), iso(2, &[]));
        assert!(r.image.is_trivial());
        let q16 = group("Q16");
        let r = vc1_k0q(&GroupHom::identity(q16.clone()), &p).unwrap();
        assert_eq!(r.k0q.iso(), iso(6, &[]));
        assert!(r.image.is_trivial());
        let c2 = group("C2");
        let bad = GroupHom::new(c2.clone(), c2, vec![0]);
        assert!(matches!(vc1_k0q(&bad, &p), Err(Error::NotAutomorphism(_))));
    }
}
