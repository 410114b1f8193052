//! Complex character tables by the Dixon–Schneider algorithm.
//!
//! Class-multiplication coefficients are reduced modulo a prime `ℓ ≡ 1 (mod e)`
//! (`e` the group exponent); their common eigenvectors, found by splitting
//! with seeded random linear combinations, give the irreducible characters
//! modulo `ℓ`, which are then lifted to `Q(ζ_e)` through root-of-unity
//! multiplicities.

use std::fmt;
use std::sync::Arc;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclo::{Accumulator, Cyclotomic, Rat};
use crate::error::{Error, Result};
use crate::perm::{ClassData, FiniteGroup, GroupHom};

const MAX_SPLIT_RETRIES: usize = 64;

/// Values of a class function, indexed by class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassFunction {
    pub values: Vec<Cyclotomic>,
}

impl ClassFunction {
    pub fn new(values: Vec<Cyclotomic>) -> Self {
        ClassFunction { values }
    }

    pub fn zero(len: usize) -> Self {
        ClassFunction { values: vec![Cyclotomic::zero(); len] }
    }

    pub fn constant(len: usize, v: i64) -> Self {
        ClassFunction { values: vec![Cyclotomic::from_int(v); len] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn add(&self, other: &ClassFunction) -> ClassFunction {
        ClassFunction { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &ClassFunction) -> ClassFunction {
        ClassFunction { values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, q: &Rat) -> ClassFunction {
        ClassFunction { values: self.values.iter().map(|v| v.scale(q)).collect() }
    }

    pub fn scale_int(&self, n: i64) -> ClassFunction {
        self.scale(&Rat::from_integer(n.into()))
    }

    /// `c ↦ f(g^t)` on class indices, i.e. the Galois twist `σ_t ∘ f` for
    /// characters.
    pub fn twist(&self, classes: &ClassData, t: i64) -> ClassFunction {
        let pm = classes.power_map(t);
        ClassFunction { values: pm.iter().map(|&c| self.values[c].clone()).collect() }
    }

    pub fn is_rational(&self) -> bool {
        self.values.iter().all(|v| v.conductor() == 1)
    }
}

/// `(1/|G|) Σ_g a(g) b(g⁻¹)`.
pub fn inner_product(a: &ClassFunction, b: &ClassFunction, classes: &ClassData) -> Cyclotomic {
    assert_eq!(a.len(), classes.len());
    assert_eq!(b.len(), classes.len());
    let inv = classes.inverse_map();
    let mut total = Cyclotomic::zero();
    for c in 0..classes.len() {
        if a.values[c].is_zero() {
            continue;
        }
        let term = &a.values[c] * &b.values[inv[c]];
        total = &total + &term.scale(&Rat::from_integer(classes.sizes()[c].into()));
    }
    total.scale(&Rat::new(One::one(), classes.group_order().into()))
}

/// The exact complex character table.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    group: Arc<FiniteGroup>,
    values: Vec<Vec<Cyclotomic>>,
    degrees: Vec<u64>,
    seed: u64,
    prime: u64,
}

impl CharacterTable {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn classes(&self) -> &ClassData {
        self.group.classes()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Vec<Cyclotomic>] {
        &self.values
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The prime used for the modular computation.
    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn character(&self, i: usize) -> ClassFunction {
        ClassFunction::new(self.values[i].clone())
    }

    /// Row index of the character equal to `f`, if any.
    pub fn position(&self, f: &ClassFunction) -> Option<usize> {
        self.values.iter().position(|row| *row == f.values)
    }

    pub fn regular_character(&self) -> ClassFunction {
        let mut v = vec![Cyclotomic::zero(); self.classes().len()];
        v[0] = Cyclotomic::from_int(self.group.order() as i64);
        ClassFunction::new(v)
    }
}

impl fmt::Display for CharacterTable {
    /// Header with class orders and sizes, then one row per irreducible.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cd = self.classes();
        let orders: Vec<String> = cd.orders().iter().map(|o| o.to_string()).collect();
        let sizes: Vec<String> = cd.sizes().iter().map(|s| s.to_string()).collect();
        writeln!(f, "order | {}", orders.join(" | "))?;
        writeln!(f, "size  | {}", sizes.join(" | "))?;
        for (i, row) in self.values.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "X.{} | {}", i + 1, cells.join(" | "))?;
        }
        Ok(())
    }
}

struct ModP {
    p: u64,
}

impl ModP {
    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.p as u128) as u64
    }
    fn pow(&self, mut a: u64, mut k: u64) -> u64 {
        let mut r = 1;
        while k > 0 {
            if k & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            k >>= 1;
        }
        r
    }
    fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0);
        self.pow(a, self.p - 2)
    }

    /// Basis of the null space of `a` (rows × cols), as column vectors.
    fn nullspace(&self, a: &[Vec<u64>], cols: usize) -> Vec<Vec<u64>> {
        let mut m: Vec<Vec<u64>> = a.to_vec();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..cols {
            let Some(r) = (row..m.len()).find(|&r| m[r][col] != 0) else { continue };
            m.swap(row, r);
            let iv = self.inv(m[row][col]);
            for x in m[row].iter_mut() {
                *x = self.mul(*x, iv);
            }
            for r2 in 0..m.len() {
                if r2 != row && m[r2][col] != 0 {
                    let f = m[r2][col];
                    for c in 0..cols {
                        let t = self.mul(f, m[row][c]);
                        m[r2][c] = self.sub(m[r2][c], t);
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == m.len() {
                break;
            }
        }
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u64; cols];
                v[fc] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = self.sub(0, m[r][fc]);
                }
                v
            })
            .collect()
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn isqrt_ceil(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// Smallest prime `ℓ ≡ 1 (mod e)` with `ℓ > 2⌈√n⌉`.
pub fn dixon_prime(e: u64, n: u64) -> u64 {
    let bound = 2 * isqrt_ceil(n);
    let mut l = e + 1;
    while l <= bound || !is_prime(l) {
        l += e;
    }
    l
}

fn primitive_root(p: u64) -> u64 {
    let m = ModP { p };
    let factors = crate::perm::prime_factors(p - 1);
    (2..p).find(|&g| factors.iter().all(|&q| m.pow(g, (p - 1) / q) != 1)).unwrap_or(1)
}

/// Common eigenspace decomposition state: subspaces as lists of column vectors.
struct Splitter<'a> {
    m: &'a ModP,
    mats: &'a [Vec<Vec<u64>>],
    k: usize,
}

impl Splitter<'_> {
    /// Coordinates of the image of each basis vector under `a` in that basis.
    fn restrict(&self, a: &[Vec<u64>], basis: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let d = basis.len();
        let m = self.m;
        // pick d independent coordinates: reduce the d×k matrix with rows = basis
        let mut rows: Vec<Vec<u64>> = basis.to_vec();
        let mut tracking: Vec<Vec<u64>> = (0..d).map(|i| (0..d).map(|j| u64::from(i == j)).collect()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.k {
            let Some(pr) = (r..d).find(|&x| rows[x][col] != 0) else { continue };
            rows.swap(r, pr);
            tracking.swap(r, pr);
            let iv = m.inv(rows[r][col]);
            for x in rows[r].iter_mut() {
                *x = m.mul(*x, iv);
            }
            for x in tracking[r].iter_mut() {
                *x = m.mul(*x, iv);
            }
            for o in 0..d {
                if o != r && rows[o][col] != 0 {
                    let f = rows[o][col];
                    for c in 0..self.k {
                        let t = m.mul(f, rows[r][c]);
                        rows[o][c] = m.sub(rows[o][c], t);
                    }
                    for c in 0..d {
                        let t = m.mul(f, tracking[r][c]);
                        tracking[o][c] = m.sub(tracking[o][c], t);
                    }
                }
            }
            pivots.push(col);
            r += 1;
            if r == d {
                break;
            }
        }
        // rows[i] = Σ_j tracking[i][j] basis[j]; rows is reduced with unit pivots,
        // so a vector v in the span equals Σ_i v[pivot_i] rows[i].
        let mut out = vec![vec![0u64; d]; d];
        for (j, b) in basis.iter().enumerate() {
            let img: Vec<u64> = (0..self.k)
                .map(|row| a[row].iter().zip(b).fold(0, |acc, (&x, &y)| m.add(acc, m.mul(x, y))))
                .collect();
            for (i, &pc) in pivots.iter().enumerate() {
                let c = img[pc];
                if c == 0 {
                    continue;
                }
                for (l, &t) in tracking[i].iter().enumerate() {
                    out[l][j] = m.add(out[l][j], m.mul(c, t));
                }
            }
        }
        out
    }

    fn split(&self, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<u64>>> {
        let m = self.m;
        let identity: Vec<Vec<u64>> = (0..self.k).map(|i| (0..self.k).map(|j| u64::from(i == j)).collect()).collect();
        let mut pending = vec![identity];
        let mut done = Vec::new();
        let mut failures = 0;
        while let Some(space) = pending.pop() {
            if space.len() == 1 {
                done.push(space.into_iter().next().expect("one vector"));
                continue;
            }
            let mut combo = vec![vec![0u64; self.k]; self.k];
            for mat in self.mats.iter().skip(1) {
                let r = rng.gen_range(0..m.p);
                for (crow, mrow) in combo.iter_mut().zip(mat) {
                    for (c, &x) in crow.iter_mut().zip(mrow) {
                        *c = m.add(*c, m.mul(r, x));
                    }
                }
            }
            let a = self.restrict(&combo, &space);
            let d = space.len();
            let mut parts = Vec::new();
            let mut total = 0;
            for lambda in 0..m.p {
                let shifted: Vec<Vec<u64>> = (0..d)
                    .map(|i| (0..d).map(|j| if i == j { m.sub(a[i][j], lambda) } else { a[i][j] }).collect())
                    .collect();
                let null = m.nullspace(&shifted, d);
                if null.is_empty() {
                    continue;
                }
                total += null.len();
                let vecs: Vec<Vec<u64>> = null
                    .iter()
                    .map(|y| {
                        (0..self.k)
                            .map(|row| y.iter().zip(&space).fold(0, |acc, (&c, b)| m.add(acc, m.mul(c, b[row]))))
                            .collect()
                    })
                    .collect();
                parts.push(vecs);
                if total == d {
                    break;
                }
            }
            if total != d {
                return Err(Error::CharacterTable("class matrices are not diagonalizable".into()));
            }
            if parts.len() == 1 {
                failures += 1;
                if failures > MAX_SPLIT_RETRIES {
                    return Err(Error::CharacterTable("eigenspace splitting did not separate".into()));
                }
                pending.push(space);
                continue;
            }
            failures = 0;
            pending.extend(parts);
        }
        Ok(done)
    }
}

pub fn character_table(group: &Arc<FiniteGroup>) -> Result<CharacterTable> {
    character_table_seeded(group, 0)
}

pub fn character_table_seeded(group: &Arc<FiniteGroup>, seed: u64) -> Result<CharacterTable> {
    let cd = group.classes();
    let k = cd.len();
    let n = group.order() as u64;
    let e = cd.exponent() as u64;
    let p = dixon_prime(e, n);
    let m = ModP { p };
    let omega = m.pow(primitive_root(p), (p - 1) / e);

    // class matrices: mats[i][j][l] = #{x ∈ C_i : x⁻¹ z_l ∈ C_j}
    let mut mats = vec![vec![vec![0u64; k]; k]; k];
    for (i, ci) in cd.classes().iter().enumerate() {
        for l in 0..k {
            let z = cd.representative(l);
            for &x in &ci.members {
                let j = cd.class_of(group.mul(group.inv(x), z));
                mats[i][j][l] += 1;
            }
        }
    }
    for mat in mats.iter_mut() {
        for row in mat.iter_mut() {
            for x in row.iter_mut() {
                *x %= p;
            }
        }
    }
    let splitter = Splitter { m: &m, mats: &mats, k };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vectors = splitter.split(&mut rng)?;
    if vectors.len() != k {
        return Err(Error::CharacterTable(format!("found {} characters for {k} classes", vectors.len())));
    }

    let sizes: Vec<u64> = cd.sizes().iter().map(|&s| s as u64).collect();
    let inv = cd.inverse_map();
    let max_degree = isqrt_ceil(n);
    let mut rows = Vec::with_capacity(k);
    for v in vectors {
        let w0 = v[0];
        if w0 == 0 {
            return Err(Error::CharacterTable("eigenvector vanishes at the identity".into()));
        }
        let s = m.inv(w0);
        let w: Vec<u64> = v.iter().map(|&x| m.mul(x, s)).collect();
        let mut sum = 0;
        for l in 0..k {
            sum = m.add(sum, m.mul(m.mul(w[l], w[inv[l]]), m.inv(sizes[l] % p)));
        }
        if sum == 0 {
            return Err(Error::CharacterTable("degenerate norm".into()));
        }
        let d2 = m.mul(n % p, m.inv(sum));
        let d = (1..=max_degree)
            .find(|&d| m.mul(d, d) == d2)
            .ok_or_else(|| Error::CharacterTable("no degree matches the norm".into()))?;
        let chi_mod: Vec<u64> = (0..k).map(|l| m.mul(m.mul(d, w[l]), m.inv(sizes[l] % p))).collect();
        rows.push(lift(&m, omega, e, cd, &chi_mod, d)?);
    }
    let mut keyed: Vec<(u64, bool, Vec<Cyclotomic>)> = rows
        .into_iter()
        .map(|row| {
            let deg = row[0].to_rational().and_then(|q| crate::cyclo::rat_to_i64(&q)).unwrap_or(0) as u64;
            let trivial = row.iter().all(Cyclotomic::is_one);
            (deg, !trivial, row)
        })
        .collect();
    keyed.sort();
    let degrees = keyed.iter().map(|r| r.0).collect();
    let values = keyed.into_iter().map(|r| r.2).collect();
    let table = CharacterTable { group: group.clone(), values, degrees, seed, prime: p };
    verify_orthogonality(&table)?;
    Ok(table)
}

/// Recovers exact values from residues via root-of-unity multiplicities.
fn lift(m: &ModP, omega: u64, e: u64, cd: &ClassData, chi: &[u64], d: u64) -> Result<Vec<Cyclotomic>> {
    let mut out = Vec::with_capacity(chi.len());
    for c in 0..chi.len() {
        let o = cd.orders()[c] as u64;
        let z = m.pow(omega, e / o);
        let zinv = m.inv(z);
        let oinv = m.inv(o % m.p);
        let mut acc = Accumulator::new(e as u32);
        for t in 0..o {
            let mut mu = 0;
            let step = m.pow(zinv, t);
            let mut f = 1;
            for j in 0..o {
                let val = chi[cd.power_map(j as i64)[c]];
                mu = m.add(mu, m.mul(val, f));
                f = m.mul(f, step);
            }
            let mu = m.mul(mu, oinv);
            if mu > d {
                return Err(Error::CharacterTable(format!("multiplicity {mu} exceeds degree {d}")));
            }
            if mu != 0 {
                acc.add_term((t * (e / o)) as i64, &Rat::from_integer(mu.into()));
            }
        }
        out.push(acc.finish());
    }
    Ok(out)
}

fn verify_orthogonality(t: &CharacterTable) -> Result<()> {
    let cd = t.classes();
    let n = t.group.order() as u64;
    if t.degrees.iter().map(|d| d * d).sum::<u64>() != n {
        return Err(Error::CharacterTable("sum of squared degrees differs from the group order".into()));
    }
    for i in 0..t.len() {
        for j in i..t.len() {
            let ip = inner_product(&t.character(i), &t.character(j), cd);
            let expected = if i == j { Cyclotomic::one() } else { Cyclotomic::zero() };
            if ip != expected {
                return Err(Error::CharacterTable(format!("rows {i} and {j} are not orthonormal")));
            }
        }
    }
    Ok(())
}

/// Class of the target containing each source class.
pub fn class_fusion(h: &GroupHom) -> Vec<usize> {
    let src = h.source().classes();
    let tgt = h.target().classes();
    (0..src.len()).map(|c| tgt.class_of(h.apply(src.representative(c)))).collect()
}

/// `(Ind f)(g) = |C_K(g)|/|H| · Σ_{D ⊆ [g]} |D| f(D)` over source classes `D`.
pub fn induce(h: &GroupHom, f: &ClassFunction) -> Result<ClassFunction> {
    h.ensure_injective()?;
    let src = h.source().classes();
    let tgt = h.target().classes();
    assert_eq!(f.len(), src.len());
    let fusion = class_fusion(h);
    let mut sums = vec![Cyclotomic::zero(); tgt.len()];
    for (d, &c) in fusion.iter().enumerate() {
        let term = f.values[d].scale(&Rat::from_integer(src.sizes()[d].into()));
        sums[c] = &sums[c] + &term;
    }
    let h_order = h.source().order();
    let values = sums
        .into_iter()
        .enumerate()
        .map(|(c, s)| s.scale(&Rat::new(tgt.centralizer_order(c).into(), h_order.into())))
        .collect();
    Ok(ClassFunction::new(values))
}

pub fn restrict(h: &GroupHom, f: &ClassFunction) -> ClassFunction {
    let fusion = class_fusion(h);
    ClassFunction::new(fusion.iter().map(|&c| f.values[c].clone()).collect())
}

/// Σ_i χ_i(g) conj(χ_i(h)), for checking the second orthogonality relation.
pub fn column_product(t: &CharacterTable, a: usize, b: usize) -> Cyclotomic {
    let mut total = Cyclotomic::zero();
    for row in t.values() {
        total = &total + &(&row[a] * &row[b].conj());
    }
    total
}

/// Multiplicities of the irreducibles in `f`, as rationals when possible.
pub fn decompose(t: &CharacterTable, f: &ClassFunction) -> Vec<Cyclotomic> {
    (0..t.len()).map(|i| inner_product(f, &t.character(i), t.classes())).collect()
}

pub fn is_zero_function(f: &ClassFunction) -> bool {
    f.values.iter().all(|v| v.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;

    fn table(name: &str) -> CharacterTable {
        character_table(&Arc::new(catalog(name).unwrap())).unwrap()
    }

    #[test]
    fn trivial_and_c2() {
        let t = table("C1");
        assert_eq!(t.values(), &[vec![Cyclotomic::one()]]);
        let t = table("C2");
        assert_eq!(t.values()[0], vec![Cyclotomic::one(), Cyclotomic::one()]);
        assert_eq!(t.values()[1], vec![Cyclotomic::one(), Cyclotomic::from_int(-1)]);
    }

    #[test]
    fn q16_degrees() {
        let t = table("Q16");
        let mut d = t.degrees().to_vec();
        d.sort();
        assert_eq!(d, vec![1, 1, 1, 1, 2, 2, 2]);
    }

    #[test]
    fn prime_choice() {
        assert_eq!(dixon_prime(16, 32), 17);
        assert_eq!(dixon_prime(2, 2), 5);
        assert_eq!(dixon_prime(12, 24), 13);
    }

    #[test]
    fn tables_of_small_groups() {
        for name in ["C3", "C12", "S3", "S4", "D8", "Q8", "QD32", "C2xC2", "D10", "Q16xC2"] {
            let t = table(name);
            assert_eq!(t.len(), t.classes().len(), "{name}");
        }
    }

    #[test]
    fn seeds_agree() {
        let g = Arc::new(catalog("QD32").unwrap());
        let a = character_table_seeded(&g, 0).unwrap();
        let b = character_table_seeded(&g, 12345).unwrap();
        assert_eq!(a.values(), b.values());
    }
}
