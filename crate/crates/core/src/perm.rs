//! Finite groups realized as permutation groups.
//!
//! Permutations act on the right: `i^(gh) = (i^g)^h`, so the product `g * h`
//! applies `g` first. Elements of a [`FiniteGroup`] are addressed by their
//! index in the canonical element list; index 0 is always the identity.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_integer::Integer;

use crate::error::{Error, Result};

/// Default bound on group orders accepted by [`FiniteGroup::generate`].
pub const DEFAULT_ORDER_BOUND: usize = 4096;

/// Groups up to this order cache a full multiplication table.
const MULT_TABLE_LIMIT: usize = 512;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::InvalidPerm(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(degree: usize) -> Self {
        Perm { images: (0..degree as u32).collect() }
    }

    /// Builds a permutation from 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                let p = p as usize;
                if p >= degree || touched[p] {
                    return Err(Error::InvalidPerm(format!("bad cycle {cycle:?}")));
                }
                touched[p] = true;
                images[p] = cycle[(k + 1) % cycle.len()];
            }
        }
        Perm::new(images)
    }

    /// Parses cycle notation with 1-based points, e.g. `(1,2,3)(4,5)`.
    /// `()` is the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        let text = text.trim();
        let mut cycles = Vec::new();
        let mut rest = text;
        let mut offset = 0;
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(Error::Parse { position: offset, expected: "'('".into() });
            }
            let close = rest.find(')').ok_or(Error::Parse {
                position: offset + rest.len(),
                expected: "')'".into(),
            })?;
            let body = rest[1..close].trim();
            if !body.is_empty() {
                let mut cycle = Vec::new();
                for tok in body.split(',') {
                    let v: u32 = tok.trim().parse().map_err(|_| Error::Parse {
                        position: offset + 1,
                        expected: "a positive point index".into(),
                    })?;
                    if v == 0 {
                        return Err(Error::Parse {
                            position: offset + 1,
                            expected: "a 1-based point index".into(),
                        });
                    }
                    cycle.push(v - 1);
                }
                cycles.push(cycle);
            }
            offset += close + 1;
            rest = &rest[close + 1..];
        }
        Perm::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm { images: inv }
    }

    /// Relabels points by adding `offset` and pads to `degree` with fixed points.
    pub fn shifted(&self, offset: usize, degree: usize) -> Perm {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for (i, &j) in self.images.iter().enumerate() {
            images[i + offset] = j + offset as u32;
        }
        Perm { images }
    }

    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p as u32);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Perm {
    /// 1-based cycle notation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", body.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{}", self)
    }
}

/// A finite permutation group with its canonically ordered element list.
pub struct FiniteGroup {
    degree: usize,
    gen_names: Vec<String>,
    generators: Vec<usize>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    /// For each non-identity element: (earlier element, generator) with
    /// `element = earlier * generator`.
    spanning: Vec<(usize, usize)>,
    mult: Option<Vec<u32>>,
    inverses: Vec<usize>,
    orders: Vec<usize>,
    classes: OnceLock<ClassData>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order())
            .field("degree", &self.degree)
            .field("gen_names", &self.gen_names)
            .finish()
    }
}

/// Generates the group spanned by `gens`, naming the generators `g1, g2, ...`.
pub fn group_from_generators(gens: Vec<Perm>) -> Result<FiniteGroup> {
    let names = (1..=gens.len()).map(|i| format!("g{i}")).collect();
    FiniteGroup::generate(names, gens, DEFAULT_ORDER_BOUND)
}

impl FiniteGroup {
    /// Closes `gens` under multiplication. Elements are listed breadth-first
    /// from the identity; within one BFS layer they are sorted by image array.
    pub fn generate(names: Vec<String>, gens: Vec<Perm>, bound: usize) -> Result<FiniteGroup> {
        assert_eq!(names.len(), gens.len(), "one name per generator");
        let degree = gens.first().map(Perm::degree).unwrap_or(1).max(1);
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: g.degree() });
            }
        }
        let identity = Perm::identity(degree);
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::new();
        index.insert(identity, 0usize);
        let mut spanning = vec![(0, 0)];
        let mut layer = vec![0usize];
        while !layer.is_empty() {
            let mut fresh: Vec<(Perm, usize, usize)> = Vec::new();
            let mut fresh_seen: HashMap<Perm, ()> = HashMap::new();
            for &e in &layer {
                for (gi, g) in gens.iter().enumerate() {
                    let p = elements[e].then(g);
                    if index.contains_key(&p) || fresh_seen.contains_key(&p) {
                        continue;
                    }
                    fresh_seen.insert(p.clone(), ());
                    fresh.push((p, e, gi));
                }
            }
            fresh.sort_by(|a, b| a.0.cmp(&b.0));
            layer.clear();
            for (p, parent, gi) in fresh {
                let id = elements.len();
                if id >= bound {
                    return Err(Error::OrderBoundExceeded { bound });
                }
                index.insert(p.clone(), id);
                elements.push(p);
                spanning.push((parent, gi));
                layer.push(id);
            }
        }
        let n = elements.len();
        let generators = gens.iter().map(|g| index[g]).collect();
        let mult = if n <= MULT_TABLE_LIMIT {
            let mut table = vec![0u32; n * n];
            for i in 0..n {
                for j in 0..n {
                    table[i * n + j] = index[&elements[i].then(&elements[j])] as u32;
                }
            }
            Some(table)
        } else {
            None
        };
        let inverses = elements.iter().map(|p| index[&p.inverse()]).collect();
        let mut group = FiniteGroup {
            degree,
            gen_names: names,
            generators,
            elements,
            index,
            spanning,
            mult,
            inverses,
            orders: Vec::new(),
            classes: OnceLock::new(),
        };
        group.orders = (0..n).map(|e| group.compute_order(e)).collect();
        Ok(group)
    }

    fn compute_order(&self, e: usize) -> usize {
        let mut k = 1;
        let mut x = e;
        while x != 0 {
            x = self.mul(x, e);
            k += 1;
        }
        k
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gen_names
    }

    /// Element indices of the generators, in generator order.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_perms(&self) -> Vec<Perm> {
        self.generators.iter().map(|&g| self.elements[g].clone()).collect()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.mult {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.index[&self.elements[a].then(&self.elements[b])],
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let n = self.orders[a] as i64;
        let k = k.rem_euclid(n);
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// `x^-1 * g * x`.
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(self.inv(x), g), x)
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.orders[a]
    }

    pub fn exponent(&self) -> usize {
        self.orders.iter().fold(1, |acc, &o| acc.lcm(&o))
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter().all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.gen_names.iter().position(|n| n == name)
    }

    /// Evaluates a word given as (generator index, exponent) pairs.
    pub fn evaluate(&self, word: &[(usize, i64)]) -> usize {
        word.iter().fold(0, |acc, &(g, e)| self.mul(acc, self.pow(self.generators[g], e)))
    }

    pub(crate) fn spanning(&self) -> &[(usize, usize)] {
        &self.spanning
    }

    pub fn center_order(&self) -> usize {
        (0..self.order())
            .filter(|&z| self.generators.iter().all(|&g| self.mul(z, g) == self.mul(g, z)))
            .count()
    }

    pub fn classes(&self) -> &ClassData {
        self.classes.get_or_init(|| ClassData::compute(self))
    }

    pub fn class_count(&self) -> usize {
        self.classes().len()
    }

    /// Prime divisors of the group order, ascending.
    pub fn prime_divisors(&self) -> Vec<u64> {
        prime_factors(self.order() as u64)
    }
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[derive(Debug, Clone)]
pub struct ConjugacyClass {
    pub representative: usize,
    pub members: Vec<usize>,
}

/// Conjugacy classes with orders, sizes and power maps.
///
/// Classes are sorted by (element order, class size, representative index);
/// the representative is the smallest element index in the class, so the
/// identity class is always class 0.
#[derive(Debug, Clone)]
pub struct ClassData {
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
    orders: Vec<usize>,
    sizes: Vec<usize>,
    exponent: usize,
    group_order: usize,
    power_maps: Vec<Vec<usize>>,
}

impl ClassData {
    fn compute(g: &FiniteGroup) -> ClassData {
        let n = g.order();
        let mut assigned = vec![usize::MAX; n];
        let mut raw: Vec<Vec<usize>> = Vec::new();
        for e in 0..n {
            if assigned[e] != usize::MAX {
                continue;
            }
            let id = raw.len();
            let mut members = vec![e];
            assigned[e] = id;
            let mut k = 0;
            while k < members.len() {
                let x = members[k];
                for &s in g.generators() {
                    let y = g.conjugate(x, s);
                    if assigned[y] == usize::MAX {
                        assigned[y] = id;
                        members.push(y);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            raw.push(members);
        }
        raw.sort_by_key(|m| (g.element_order(m[0]), m.len(), m[0]));
        let mut class_of = vec![0; n];
        for (c, m) in raw.iter().enumerate() {
            for &x in m {
                class_of[x] = c;
            }
        }
        let classes: Vec<ConjugacyClass> = raw
            .into_iter()
            .map(|members| ConjugacyClass { representative: members[0], members })
            .collect();
        let orders: Vec<usize> = classes.iter().map(|c| g.element_order(c.representative)).collect();
        let sizes = classes.iter().map(|c| c.members.len()).collect();
        let exponent = g.exponent();
        let power_maps = (0..exponent)
            .map(|k| {
                classes
                    .iter()
                    .map(|c| class_of[g.pow(c.representative, k as i64)])
                    .collect()
            })
            .collect();
        ClassData { classes, class_of, orders, sizes, exponent, group_order: n, power_maps }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element]
    }

    pub fn representative(&self, c: usize) -> usize {
        self.classes[c].representative
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn centralizer_order(&self, c: usize) -> usize {
        self.group_order / self.sizes[c]
    }

    /// Class map of `g -> g^k`; depends only on `k` modulo the exponent.
    pub fn power_map(&self, k: i64) -> &[usize] {
        &self.power_maps[k.rem_euclid(self.exponent as i64) as usize]
    }

    pub fn inverse_map(&self) -> &[usize] {
        self.power_map(-1)
    }

    /// Sorted (order, size) pairs.
    pub fn order_size_multiset(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> =
            self.orders.iter().copied().zip(self.sizes.iter().copied()).collect();
        v.sort_unstable();
        v
    }
}

pub fn conjugacy_classes(g: &FiniteGroup) -> &ClassData {
    g.classes()
}

/// A generator assignment from `source` into `target`.
#[derive(Clone)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    gen_images: Vec<usize>,
    element_map: Arc<OnceLock<Vec<usize>>>,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupHom")
            .field("source_order", &self.source.order())
            .field("target_order", &self.target.order())
            .field("gen_images", &self.gen_images)
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomCheck {
    pub is_hom: bool,
    pub is_injective: bool,
}

impl GroupHom {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, gen_images: Vec<usize>) -> Self {
        assert_eq!(source.generators().len(), gen_images.len(), "one image per source generator");
        assert!(gen_images.iter().all(|&x| x < target.order()), "images lie in target");
        GroupHom { source, target, gen_images, element_map: Arc::new(OnceLock::new()) }
    }

    pub fn identity(group: Arc<FiniteGroup>) -> Self {
        let imgs = group.generators().to_vec();
        GroupHom::new(group.clone(), group, imgs)
    }

    /// The inner automorphism `h -> x^-1 h x`.
    pub fn conjugation(group: Arc<FiniteGroup>, x: usize) -> Self {
        let imgs = group.generators().iter().map(|&g| group.conjugate(g, x)).collect();
        GroupHom::new(group.clone(), group, imgs)
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn gen_images(&self) -> &[usize] {
        &self.gen_images
    }

    /// Extends the generator images along the spanning tree of the source.
    /// Only meaningful once [`verify`](Self::verify) reports a homomorphism.
    pub fn element_map(&self) -> &[usize] {
        self.element_map.get_or_init(|| {
            let src = &self.source;
            let mut img = vec![0usize; src.order()];
            for (e, &(parent, gi)) in src.spanning().iter().enumerate().skip(1) {
                img[e] = self.target.mul(img[parent], self.gen_images[gi]);
            }
            img
        })
    }

    pub fn apply(&self, e: usize) -> usize {
        self.element_map()[e]
    }

    pub fn verify(&self) -> HomCheck {
        let src = &self.source;
        let tgt = &self.target;
        let img = self.element_map();
        let mut is_hom = true;
        'outer: for x in 0..src.order() {
            for (gi, &s) in src.generators().iter().enumerate() {
                if img[src.mul(x, s)] != tgt.mul(img[x], self.gen_images[gi]) {
                    is_hom = false;
                    break 'outer;
                }
            }
        }
        let is_injective = is_hom && img.iter().skip(1).all(|&y| y != 0);
        HomCheck { is_hom, is_injective }
    }

    pub fn ensure_injective(&self) -> Result<()> {
        let check = self.verify();
        if !check.is_hom {
            return Err(Error::NotHomomorphism);
        }
        if !check.is_injective {
            return Err(Error::NotInjective);
        }
        Ok(())
    }

    /// Sorted element indices of the image subgroup.
    pub fn image(&self) -> Vec<usize> {
        let mut v = self.element_map().to_vec();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        assert!(Arc::ptr_eq(&self.target, &other.source));
        let imgs = self.gen_images.iter().map(|&x| other.apply(x)).collect();
        GroupHom::new(self.source.clone(), other.target.clone(), imgs)
    }
}

pub fn verify_hom(h: &GroupHom) -> HomCheck {
    h.verify()
}

/// Direct product on disjoint point sets. Generator names are kept unless
/// they collide, in which case every name gets its factor number appended.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup> {
    direct_product_bounded(a, b, DEFAULT_ORDER_BOUND)
}

pub fn direct_product_bounded(a: &FiniteGroup, b: &FiniteGroup, bound: usize) -> Result<FiniteGroup> {
    if a.order().saturating_mul(b.order()) > bound {
        return Err(Error::OrderBoundExceeded { bound });
    }
    let degree = a.degree() + b.degree();
    let mut gens: Vec<Perm> = a.generator_perms().iter().map(|p| p.shifted(0, degree)).collect();
    gens.extend(b.generator_perms().iter().map(|p| p.shifted(a.degree(), degree)));
    let collide = a.gen_names().iter().any(|n| b.gen_names().contains(n));
    let mut names: Vec<String> = Vec::new();
    for (factor, g) in [a, b].iter().enumerate() {
        for n in g.gen_names() {
            names.push(if collide { format!("{n}{}", factor + 1) } else { n.clone() });
        }
    }
    FiniteGroup::generate(names, gens, bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: u32) -> FiniteGroup {
        let p = Perm::from_cycles(n as usize, &[(0..n).collect()]).unwrap();
        FiniteGroup::generate(vec!["a".into()], vec![p], DEFAULT_ORDER_BOUND).unwrap()
    }

    #[test]
    fn trivial_group_has_one_class() {
        let g = group_from_generators(vec![Perm::identity(1)]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.class_count(), 1);
    }

    #[test]
    fn four_cycle_generates_c4() {
        let g = cyclic(4);
        assert_eq!(g.order(), 4);
        assert_eq!(g.exponent(), 4);
        assert_eq!(g.class_count(), 4);
    }

    #[test]
    fn degree_mismatch_is_reported() {
        let err = group_from_generators(vec![Perm::identity(2), Perm::identity(3)]).unwrap_err();
        assert_eq!(err, Error::DegreeMismatch { expected: 2, found: 3 });
    }

    #[test]
    fn order_bound_is_enforced() {
        let p = Perm::from_cycles(10, &[(0..10).collect()]).unwrap();
        let err = FiniteGroup::generate(vec!["a".into()], vec![p], 5).unwrap_err();
        assert_eq!(err, Error::OrderBoundExceeded { bound: 5 });
    }

    #[test]
    fn cycle_notation_round_trip() {
        let p = Perm::parse_cycles("(1,3,2)(4,5)", 6).unwrap();
        assert_eq!(p.to_string(), "(1,3,2)(4,5)");
        assert_eq!(Perm::parse_cycles("()", 3).unwrap(), Perm::identity(3));
        assert!(Perm::parse_cycles("(1,1)", 3).is_err());
        assert!(Perm::parse_cycles("(0,1)", 3).is_err());
    }

    #[test]
    fn power_maps_compose() {
        let g = cyclic(12);
        let cd = g.classes();
        for k in 0..12i64 {
            for j in 0..12i64 {
                let kj: Vec<usize> = cd.power_map(k).iter().map(|&c| cd.power_map(j)[c]).collect();
                assert_eq!(kj.as_slice(), cd.power_map(k * j));
            }
        }
        let ident: Vec<usize> = (0..cd.len()).collect();
        assert_eq!(cd.power_map(1), ident.as_slice());
    }

    #[test]
    fn non_hom_from_c2_to_c3() {
        let c2 = Arc::new(cyclic(2));
        let c3 = Arc::new(cyclic(3));
        let a = c3.generators()[0];
        let h = GroupHom::new(c2, c3, vec![a]);
        assert!(!h.verify().is_hom);
    }

    #[test]
    fn products_of_small_groups() {
        let c2 = cyclic(2);
        let v4 = direct_product(&c2, &c2).unwrap();
        assert_eq!(v4.order(), 4);
        assert_eq!(v4.class_count(), 4);
        assert_eq!(v4.gen_names(), &["a1".to_string(), "a2".to_string()]);
        let trivial = group_from_generators(vec![Perm::identity(1)]).unwrap();
        let c6 = cyclic(6);
        let p = direct_product(&c6, &trivial).unwrap();
        assert_eq!(p.order(), 6);
        assert_eq!(p.class_count(), c6.class_count());
    }
}
