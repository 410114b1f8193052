//! Exact integer linear algebra and finitely generated abelian groups.
//!
//! Matrices act on column vectors. A group `Z^n / R·Z^k` is stored by its
//! relation matrix `R` (n × k); a map is an integer matrix on generators.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "rectangular input");
        IntMat { rows: r, cols: c, data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect() }
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    /// Parses a whitespace-separated integer grid, one row per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let mut offset = 0;
        for line in text.lines() {
            let start = offset;
            offset += line.len() + 1;
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<BigInt>().map_err(|_| Error::Parse { position: start, expected: "an integer".into() }))
                .collect::<Result<Vec<_>>>()?;
            if rows.first().is_some_and(|r| r.len() != row.len()) {
                return Err(Error::Parse { position: start, expected: "a row of the same length".into() });
            }
            rows.push(row);
        }
        let c = rows.first().map_or(0, Vec::len);
        Ok(IntMat { rows: rows.len(), cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn add(&self, other: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn neg(&self) -> IntMat {
        IntMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn sub(&self, other: &IntMat) -> IntMat {
        self.add(&other.neg())
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.rows, other.rows);
        let mut cols = self.columns();
        cols.extend(other.columns());
        IntMat::from_cols(self.rows, &cols)
    }

    /// `self` above `other`.
    pub fn vstack(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diag(&self, other: &IntMat) -> IntMat {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    /// Rows `range` of `self`.
    pub fn row_slice(&self, from: usize, to: usize) -> IntMat {
        IntMat { rows: to - from, cols: self.cols, data: self.data[from * self.cols..to * self.cols].to_vec() }
    }

    pub fn col_slice(&self, from: usize, to: usize) -> IntMat {
        IntMat::from_cols(self.rows, &(from..to).map(|j| self.col(j)).collect::<Vec<_>>())
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// col[dst] -= q · col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.get(i, src).clone();
            if !s.is_zero() {
                self.data[i * self.cols + dst] -= q * s;
            }
        }
    }

    /// row[dst] -= q · row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.get(src, j).clone();
            if !s.is_zero() {
                self.data[dst * self.cols + j] -= q * s;
            }
        }
    }

    fn neg_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    fn neg_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// Exact determinant of a square matrix.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "square matrix");
        rational_det(self)
    }
}

fn rational_det(m: &IntMat) -> BigInt {
    use num_rational::BigRational;
    let n = m.rows;
    let mut a: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| BigRational::from_integer(m.get(i, j).clone())).collect()).collect();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigInt::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            if f.is_zero() {
                continue;
            }
            for k in c..n {
                let v = &f * &a[c][k];
                a[r][k] -= v;
            }
        }
    }
    det.to_integer()
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMat{}x{}{}", self.rows, self.cols, self)
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Column Hermite normal form: `H = M·U` with `U` unimodular, `H` in column
/// echelon form with positive pivots and entries left of each pivot reduced
/// into `[0, pivot)`.
pub fn hnf(m: &IntMat) -> (IntMat, IntMat) {
    let (h, u, _) = hnf_with_pivots(m);
    (h, u)
}

/// As [`hnf`], also returning the pivot row of each nonzero column.
pub fn hnf_with_pivots(m: &IntMat) -> (IntMat, IntMat, Vec<usize>) {
    let mut h = m.clone();
    let mut u = IntMat::identity(m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for row in 0..m.rows {
        if r == m.cols {
            break;
        }
        loop {
            let best = (r..m.cols).filter(|&j| !h.get(row, j).is_zero()).min_by(|&a, &b| {
                h.get(row, a).abs().cmp(&h.get(row, b).abs()).then(a.cmp(&b))
            });
            let Some(best) = best else { break };
            h.swap_cols(r, best);
            u.swap_cols(r, best);
            let pivot = h.get(row, r).clone();
            let mut done = true;
            for j in r + 1..m.cols {
                let q = h.get(row, j).div_floor(&pivot);
                h.col_axpy(j, r, &q);
                u.col_axpy(j, r, &q);
                if !h.get(row, j).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(row, r).is_zero() {
            continue;
        }
        if h.get(row, r).is_negative() {
            h.neg_col(r);
            u.neg_col(r);
        }
        let pivot = h.get(row, r).clone();
        for j in 0..r {
            let q = h.get(row, j).div_floor(&pivot);
            h.col_axpy(j, r, &q);
            u.col_axpy(j, r, &q);
        }
        pivots.push(row);
        r += 1;
    }
    (h, u, pivots)
}

/// Smith normal form `D = P·M·Q` with `P`, `Q` unimodular and the diagonal
/// nonnegative with `d_1 | d_2 | …`.
pub fn snf(m: &IntMat) -> (IntMat, IntMat, IntMat) {
    let mut d = m.clone();
    let mut p = IntMat::identity(m.rows);
    let mut q = IntMat::identity(m.cols);
    let n = m.rows.min(m.cols);
    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m.rows {
                for j in t..m.cols {
                    let v = d.get(i, j);
                    if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return (d, p, q);
            };
            d.swap_rows(t, bi);
            p.swap_rows(t, bi);
            d.swap_cols(t, bj);
            q.swap_cols(t, bj);
            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..m.rows {
                let f = d.get(i, t).div_floor(&pivot);
                d.row_axpy(i, t, &f);
                p.row_axpy(i, t, &f);
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..m.cols {
                let f = d.get(t, j).div_floor(&pivot);
                d.col_axpy(j, t, &f);
                q.col_axpy(j, t, &f);
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m.rows).find(|&i| (t + 1..m.cols).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    d.row_axpy(t, i, &minus_one);
                    p.row_axpy(t, i, &minus_one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.neg_row(t);
            p.neg_row(t);
        }
    }
    (d, p, q)
}

/// Some integer `x` with `A·x = y`, if one exists.
pub fn solve(a: &IntMat, y: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows, y.len());
    let (h, u, pivots) = hnf_with_pivots(a);
    let mut residual = y.to_vec();
    let mut z = vec![BigInt::zero(); a.cols];
    let mut k = 0;
    for i in 0..a.rows {
        if k < pivots.len() && pivots[k] == i {
            let (c, rem) = residual[i].div_rem(h.get(i, k));
            if !rem.is_zero() {
                return None;
            }
            for (r, res) in residual.iter_mut().enumerate().skip(i) {
                let v = h.get(r, k);
                if !v.is_zero() {
                    *res -= &c * v;
                }
            }
            z[k] = c;
            k += 1;
        } else if !residual[i].is_zero() {
            return None;
        }
    }
    Some(u.mul_vec(&z))
}

/// Basis of the integer kernel of `A`, as columns.
pub fn integer_kernel(a: &IntMat) -> IntMat {
    let (_, u, pivots) = hnf_with_pivots(a);
    u.col_slice(pivots.len(), a.cols)
}

/// Isomorphism type `Z^rank ⊕ ⊕ Z/t_i` with `1 < t_1 | t_2 | …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbIso {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbIso {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn torsion_u64(&self) -> Vec<u64> {
        self.torsion.iter().map(|t| t.to_u64().expect("torsion factor fits in u64")).collect()
    }

    /// `(Z/2)^s` test, including the trivial group.
    pub fn is_elementary_two(&self) -> bool {
        self.rank == 0 && self.torsion.iter().all(|t| *t == BigInt::from(2))
    }
}

impl fmt::Display for AbIso {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut counts: BTreeMap<&BigInt, usize> = BTreeMap::new();
        for t in &self.torsion {
            *counts.entry(t).or_default() += 1;
        }
        for (t, k) in counts {
            parts.push(if k == 1 { format!("Z/{t}") } else { format!("(Z/{t})^{k}") });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Debug)]
struct SnfCache {
    /// Diagonal of the Smith form padded with zeros to length `n`.
    diag: Vec<BigInt>,
    /// Row transform: coordinates of `x` are `P·x`.
    p: IntMat,
}

/// `Z^n` modulo the column span of `relations`.
#[derive(Clone)]
pub struct FgAbGroup {
    n: usize,
    relations: IntMat,
    snf: Arc<SnfCache>,
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbGroup({} gens, {})", self.n, self.iso())
    }
}

impl FgAbGroup {
    pub fn new(relations: IntMat) -> Self {
        let n = relations.rows;
        let (d, p, _) = snf(&relations);
        let diag = (0..n).map(|i| if i < d.cols { d.get(i, i).clone() } else { BigInt::zero() }).collect();
        FgAbGroup { n, relations, snf: Arc::new(SnfCache { diag, p }) }
    }

    pub fn free(n: usize) -> Self {
        Self::new(IntMat::zeros(n, 0))
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// `⊕ Z/d_i`; a zero entry gives a free summand.
    pub fn cyclic(orders: &[i64]) -> Self {
        let n = orders.len();
        let mut r = IntMat::zeros(n, n);
        for (i, &d) in orders.iter().enumerate() {
            r.set(i, i, BigInt::from(d));
        }
        Self::new(r)
    }

    pub fn gens(&self) -> usize {
        self.n
    }

    pub fn relations(&self) -> &IntMat {
        &self.relations
    }

    pub fn iso(&self) -> AbIso {
        let mut torsion: Vec<BigInt> = self.snf.diag.iter().filter(|d| **d > BigInt::one()).cloned().collect();
        torsion.sort();
        AbIso { rank: self.snf.diag.iter().filter(|d| d.is_zero()).count(), torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.iso().is_trivial()
    }

    /// Whether `x ∈ Z^n` represents zero.
    pub fn is_zero(&self, x: &[BigInt]) -> bool {
        assert_eq!(x.len(), self.n);
        let y = self.snf.p.mul_vec(x);
        y.iter().zip(&self.snf.diag).all(|(v, d)| if d.is_zero() { v.is_zero() } else { v.is_multiple_of(d) })
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        FgAbGroup::new(self.relations.block_diag(&other.relations))
    }

    pub fn direct_sum_all(groups: &[FgAbGroup]) -> FgAbGroup {
        groups.iter().fold(FgAbGroup::trivial(), |acc, g| acc.direct_sum(g))
    }

    /// Subgroup generated by the columns of `v`, with its inclusion.
    pub fn subgroup(&self, v: &IntMat) -> (FgAbGroup, AbMap) {
        assert_eq!(v.rows, self.n);
        let m = v.cols;
        let rel = integer_kernel(&v.hstack(&self.relations)).row_slice(0, m);
        let s = FgAbGroup::new(rel);
        let incl = AbMap { source: s.clone(), target: self.clone(), matrix: v.clone() };
        (s, incl)
    }

    /// An equivalent presentation with one generator per nontrivial SNF
    /// summand, and the isomorphisms to and from it.
    pub fn simplify(&self) -> (FgAbGroup, AbMap, AbMap) {
        let (d, p, _) = snf(&self.relations);
        let keep: Vec<usize> =
            (0..self.n).filter(|&i| i >= d.cols || !d.get(i, i).is_one()).collect();
        let orders: Vec<BigInt> = keep.iter().map(|&i| if i < d.cols { d.get(i, i).clone() } else { BigInt::zero() }).collect();
        let k = keep.len();
        let mut rel = IntMat::zeros(k, k);
        for (i, o) in orders.into_iter().enumerate() {
            rel.set(i, i, o);
        }
        let small = FgAbGroup::new(rel);
        let mut to = IntMat::zeros(k, self.n);
        for (r, &i) in keep.iter().enumerate() {
            for j in 0..self.n {
                to.set(r, j, p.get(i, j).clone());
            }
        }
        let pinv = unimodular_inverse(&p);
        let from = IntMat::from_cols(self.n, &keep.iter().map(|&i| pinv.col(i)).collect::<Vec<_>>());
        let to_map = AbMap { source: self.clone(), target: small.clone(), matrix: to };
        let from_map = AbMap { source: small.clone(), target: self.clone(), matrix: from };
        (small, to_map, from_map)
    }
}

fn unimodular_inverse(p: &IntMat) -> IntMat {
    let n = p.rows;
    let cols: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let e: Vec<BigInt> = (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect();
            solve(p, &e).expect("unimodular matrix is invertible")
        })
        .collect();
    IntMat::from_cols(n, &cols)
}

/// A homomorphism given on generators.
#[derive(Debug, Clone)]
pub struct AbMap {
    pub source: FgAbGroup,
    pub target: FgAbGroup,
    pub matrix: IntMat,
}

impl AbMap {
    /// Checks that every source relation maps to zero.
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMat) -> Result<Self> {
        if matrix.rows != target.n || matrix.cols != source.n {
            return Err(Error::BadMap(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows, matrix.cols, target.n, source.n
            )));
        }
        let images = matrix.mul(&source.relations);
        for j in 0..images.cols {
            if !target.is_zero(&images.col(j)) {
                return Err(Error::BadMap(format!("relation {j} does not map to zero")));
            }
        }
        Ok(AbMap { source, target, matrix })
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        AbMap { source: source.clone(), target: target.clone(), matrix: IntMat::zeros(target.n, source.n) }
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        AbMap { source: g.clone(), target: g.clone(), matrix: IntMat::identity(g.n) }
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(x)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &AbMap) -> AbMap {
        assert_eq!(self.target.n, other.source.n, "composable maps");
        AbMap { source: self.source.clone(), target: other.target.clone(), matrix: other.matrix.mul(&self.matrix) }
    }

    pub fn add(&self, other: &AbMap) -> AbMap {
        AbMap { source: self.source.clone(), target: self.target.clone(), matrix: self.matrix.add(&other.matrix) }
    }

    pub fn neg(&self) -> AbMap {
        AbMap { source: self.source.clone(), target: self.target.clone(), matrix: self.matrix.neg() }
    }

    pub fn sub(&self, other: &AbMap) -> AbMap {
        self.add(&other.neg())
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols).all(|j| self.target.is_zero(&self.matrix.col(j)))
    }

    /// Equality as homomorphisms.
    pub fn equals(&self, other: &AbMap) -> bool {
        self.sub(other).is_zero()
    }

    /// `A ⊕ B → C ⊕ D` from `A → C` and `B → D`.
    pub fn direct_sum(&self, other: &AbMap) -> AbMap {
        AbMap {
            source: self.source.direct_sum(&other.source),
            target: self.target.direct_sum(&other.target),
            matrix: self.matrix.block_diag(&other.matrix),
        }
    }

    /// `A → B ⊕ C` from `A → B` and `A → C`.
    pub fn pair(&self, other: &AbMap) -> AbMap {
        AbMap {
            source: self.source.clone(),
            target: self.target.direct_sum(&other.target),
            matrix: self.matrix.vstack(&other.matrix),
        }
    }

    /// `A ⊕ B → C` from `A → C` and `B → C`.
    pub fn copair(&self, other: &AbMap) -> AbMap {
        AbMap {
            source: self.source.direct_sum(&other.source),
            target: self.target.clone(),
            matrix: self.matrix.hstack(&other.matrix),
        }
    }

    /// Some preimage of `y`, if `y` lies in the image.
    pub fn preimage(&self, y: &[BigInt]) -> Option<Vec<BigInt>> {
        let a = self.matrix.hstack(&self.target.relations);
        solve(&a, y).map(|x| x[..self.source.n].to_vec())
    }

    /// Factors `self: X → Y` through `through: S → Y`, i.e. finds `X → S`
    /// with `through ∘ result == self`.
    pub fn lift_through(&self, through: &AbMap) -> Result<AbMap> {
        let cols = (0..self.matrix.cols)
            .map(|j| through.preimage(&self.matrix.col(j)).ok_or_else(|| Error::BadMap("map does not factor".into())))
            .collect::<Result<Vec<_>>>()?;
        AbMap::new(self.source.clone(), through.source.clone(), IntMat::from_cols(through.source.n, &cols))
    }

    pub fn is_injective(&self) -> bool {
        kernel(self).0.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        cokernel(self).0.is_trivial()
    }
}

pub fn kernel(f: &AbMap) -> (FgAbGroup, AbMap) {
    let ns = f.source.n;
    let v = integer_kernel(&f.matrix.hstack(&f.target.relations)).row_slice(0, ns);
    f.source.subgroup(&v)
}

pub fn cokernel(f: &AbMap) -> (FgAbGroup, AbMap) {
    let c = FgAbGroup::new(f.target.relations.hstack(&f.matrix));
    let proj = AbMap { source: f.target.clone(), target: c.clone(), matrix: IntMat::identity(f.target.n) };
    (c, proj)
}

pub fn image(f: &AbMap) -> (FgAbGroup, AbMap) {
    f.target.subgroup(&f.matrix)
}

/// Generators of the sublattice of `Z^d` spanned by `vectors`, as a free
/// group with an HNF basis (columns of the returned matrix).
pub fn lattice_of_columns(dim: usize, vectors: &[Vec<BigInt>]) -> (FgAbGroup, IntMat) {
    let m = IntMat::from_cols(dim, vectors);
    let (h, _, pivots) = hnf_with_pivots(&m);
    let basis = h.col_slice(0, pivots.len());
    (FgAbGroup::free(pivots.len()), basis)
}

/// `ker(g) == im(f)` for `X --f--> Y --g--> Z`.
pub fn exact_at(f: &AbMap, g: &AbMap) -> bool {
    if !f.then(g).is_zero() {
        return false;
    }
    let (_, incl) = kernel(g);
    (0..incl.matrix.cols).all(|j| f.preimage(&incl.matrix.col(j)).is_some())
}

/// `0 → A --i--> B --p--> C → 0`, verified on construction.
#[derive(Debug, Clone)]
pub struct ShortExactSeq {
    pub i: AbMap,
    pub p: AbMap,
}

impl ShortExactSeq {
    pub fn new(i: AbMap, p: AbMap) -> Result<Self> {
        if !i.is_injective() {
            return Err(Error::NotExact("first map is not injective".into()));
        }
        if !p.is_surjective() {
            return Err(Error::NotExact("second map is not surjective".into()));
        }
        if !exact_at(&i, &p) {
            return Err(Error::NotExact("image of the first map differs from the kernel of the second".into()));
        }
        Ok(ShortExactSeq { i, p })
    }

    pub fn a(&self) -> &FgAbGroup {
        &self.i.source
    }

    pub fn b(&self) -> &FgAbGroup {
        &self.i.target
    }

    pub fn c(&self) -> &FgAbGroup {
        &self.p.target
    }
}

/// The six-term sequence of a map of short exact sequences.
#[derive(Debug, Clone)]
pub struct Snake {
    pub ker_a: (FgAbGroup, AbMap),
    pub ker_b: (FgAbGroup, AbMap),
    pub ker_c: (FgAbGroup, AbMap),
    pub cok_a: (FgAbGroup, AbMap),
    pub cok_b: (FgAbGroup, AbMap),
    pub cok_c: (FgAbGroup, AbMap),
    pub ka_kb: AbMap,
    pub kb_kc: AbMap,
    /// The connecting map `ker f_C → cok f_A`.
    pub delta: AbMap,
    pub ca_cb: AbMap,
    pub cb_cc: AbMap,
}

/// Connecting map of the ladder `top → bot` with vertical maps `fa, fb, fc`.
///
/// With `W = {(b, a) ∈ B₁ ⊕ A₂ : f_B(b) = i₂(a)}` and `Q = W / (i₁, f_A)(A₁)`,
/// `θ: Q → ker f_C` is induced by `(b, a) ↦ p₁(b)` and is an isomorphism,
/// `φ: Q → cok f_A` by `(b, a) ↦ [a]`; the connecting map is `φ ∘ θ⁻¹`.
/// All six exactness conditions are checked.
pub fn snake(top: &ShortExactSeq, bot: &ShortExactSeq, fa: &AbMap, fb: &AbMap, fc: &AbMap) -> Result<Snake> {
    if !top.i.then(fb).equals(&fa.then(&bot.i)) {
        return Err(Error::NonCommutingSquare("A → B".into()));
    }
    if !top.p.then(fc).equals(&fb.then(&bot.p)) {
        return Err(Error::NonCommutingSquare("B → C".into()));
    }
    let b1 = top.b();
    let a2 = bot.a();
    let pr_b = AbMap {
        source: b1.direct_sum(a2),
        target: b1.clone(),
        matrix: IntMat::identity(b1.n).hstack(&IntMat::zeros(b1.n, a2.n)),
    };
    let pr_a = AbMap {
        source: b1.direct_sum(a2),
        target: a2.clone(),
        matrix: IntMat::zeros(a2.n, b1.n).hstack(&IntMat::identity(a2.n)),
    };
    let defect = fb.copair(&bot.i.neg());
    let (w, w_incl) = kernel(&defect);
    let from_a1 = top.i.pair(fa).lift_through(&w_incl)?;
    let (q, _) = cokernel(&from_a1);
    let ker_c = kernel(fc);
    let w_to_c = w_incl.then(&pr_b).then(&top.p).lift_through(&ker_c.1)?;
    let theta = AbMap::new(q.clone(), ker_c.0.clone(), w_to_c.matrix.clone())?;
    let cok_a = cokernel(fa);
    let phi = AbMap::new(q.clone(), cok_a.0.clone(), w_incl.then(&pr_a).then(&cok_a.1).matrix)?;
    if !theta.is_injective() || !theta.is_surjective() {
        return Err(Error::NotExact("theta is not an isomorphism".into()));
    }
    let theta_inv_cols = (0..ker_c.0.n)
        .map(|j| {
            let e: Vec<BigInt> = (0..ker_c.0.n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect();
            theta.preimage(&e).ok_or_else(|| Error::NotExact("theta is not surjective".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let theta_inv = AbMap::new(ker_c.0.clone(), q, IntMat::from_cols(w.n, &theta_inv_cols))?;
    let delta = theta_inv.then(&phi);

    let ker_a = kernel(fa);
    let ker_b = kernel(fb);
    let ka_kb = ker_a.1.then(&top.i).lift_through(&ker_b.1)?;
    let kb_kc = ker_b.1.then(&top.p).lift_through(&ker_c.1)?;
    let cok_b = cokernel(fb);
    let cok_c = cokernel(fc);
    let ca_cb = AbMap::new(cok_a.0.clone(), cok_b.0.clone(), bot.i.matrix.clone())?;
    let cb_cc = AbMap::new(cok_b.0.clone(), cok_c.0.clone(), bot.p.matrix.clone())?;
    let out = Snake { ker_a, ker_b, ker_c, cok_a, cok_b, cok_c, ka_kb, kb_kc, delta, ca_cb, cb_cc };
    out.verify()?;
    Ok(out)
}

impl Snake {
    /// Exactness of `0 → ker f_A → ker f_B → ker f_C → cok f_A → cok f_B → cok f_C → 0`.
    pub fn verify(&self) -> Result<()> {
        let checks = [
            ("ker f_A", self.ka_kb.is_injective()),
            ("ker f_B", exact_at(&self.ka_kb, &self.kb_kc)),
            ("ker f_C", exact_at(&self.kb_kc, &self.delta)),
            ("cok f_A", exact_at(&self.delta, &self.ca_cb)),
            ("cok f_B", exact_at(&self.ca_cb, &self.cb_cc)),
            ("cok f_C", self.cb_cc.is_surjective()),
        ];
        match checks.iter().find(|c| !c.1) {
            Some((at, _)) => Err(Error::NotExact(format!("six-term sequence fails at {at}"))),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn iso(rank: usize, torsion: &[i64]) -> AbIso {
        AbIso { rank, torsion: big(torsion) }
    }

    #[test]
    fn hnf_small() {
        let m = IntMat::from_rows(&[vec![2, 4], vec![0, 2]]);
        let (h, u) = hnf(&m);
        assert_eq!(m.mul(&u), h);
        assert_eq!(h, IntMat::from_rows(&[vec![2, 0], vec![0, 2]]));
        let z = IntMat::zeros(2, 3);
        assert_eq!(hnf(&z), (z.clone(), IntMat::identity(3)));
        let i = IntMat::identity(3);
        assert_eq!(hnf(&i), (i.clone(), i.clone()));
    }

    #[test]
    fn snf_small() {
        let (d, p, q) = snf(&IntMat::from_rows(&[vec![6, 0], vec![0, 4]]));
        assert_eq!(d, IntMat::from_rows(&[vec![2, 0], vec![0, 12]]));
        assert_eq!(p.mul(&IntMat::from_rows(&[vec![6, 0], vec![0, 4]])).mul(&q), d);
        assert_eq!(FgAbGroup::cyclic(&[2]).iso(), iso(0, &[2]));
        assert_eq!(FgAbGroup::cyclic(&[6, 4, 0, 1]).iso(), iso(1, &[2, 12]));
    }

    #[test]
    fn solving() {
        let a = IntMat::from_rows(&[vec![2, 0], vec![1, 3]]);
        let x = solve(&a, &big(&[4, 5])).unwrap();
        assert_eq!(a.mul_vec(&x), big(&[4, 5]));
        assert!(solve(&a, &big(&[1, 0])).is_none());
        assert_eq!(integer_kernel(&IntMat::from_rows(&[vec![1, 1]])).cols(), 1);
    }

    #[test]
    fn kernels_and_cokernels() {
        let z = FgAbGroup::free(1);
        let zero = AbMap::zero(&z, &z);
        assert_eq!(kernel(&zero).0.iso(), iso(1, &[]));
        let two = AbMap::new(z.clone(), z.clone(), IntMat::from_rows(&[vec![2]])).unwrap();
        assert!(kernel(&two).0.is_trivial());
        assert_eq!(cokernel(&two).0.iso(), iso(0, &[2]));
        let z2 = FgAbGroup::cyclic(&[2]);
        let diag = AbMap::new(z2.clone(), z2.direct_sum(&z2), IntMat::from_rows(&[vec![1], vec![1]])).unwrap();
        assert!(kernel(&diag).0.is_trivial());
        assert_eq!(cokernel(&AbMap::zero(&FgAbGroup::trivial(), &FgAbGroup::free(3))).0.iso(), iso(3, &[]));
        assert!(AbMap::new(z2.clone(), z.clone(), IntMat::from_rows(&[vec![1]])).is_err());
    }

    #[test]
    fn lattices() {
        assert_eq!(lattice_of_columns(2, &[big(&[2, 0]), big(&[0, 3])]).0.gens(), 2);
        assert_eq!(lattice_of_columns(2, &[big(&[1, 1]), big(&[2, 2])]).0.gens(), 1);
    }

    #[test]
    fn simplify_roundtrip() {
        let g = FgAbGroup::new(IntMat::from_rows(&[vec![2, 4, 0], vec![0, 6, 0], vec![0, 0, 1]]));
        let (s, to, from) = g.simplify();
        assert_eq!(s.iso(), g.iso());
        assert!(to.then(&from).equals(&AbMap::identity(&g)));
        assert!(from.then(&to).equals(&AbMap::identity(&s)));
    }

    #[test]
    fn determinant() {
        assert_eq!(IntMat::from_rows(&[vec![2, 1], vec![1, 3]]).det(), BigInt::from(5));
        assert_eq!(IntMat::from_rows(&[vec![0, 1], vec![1, 0]]).det(), BigInt::from(-1));
    }

    #[test]
    fn snake_zero_verticals() {
        let z = FgAbGroup::free(1);
        let zz = z.direct_sum(&z);
        let i = AbMap::new(z.clone(), zz.clone(), IntMat::from_rows(&[vec![1], vec![0]])).unwrap();
        let p = AbMap::new(zz.clone(), z.clone(), IntMat::from_rows(&[vec![0, 1]])).unwrap();
        let ses = ShortExactSeq::new(i, p).unwrap();
        let s = snake(&ses, &ses, &AbMap::zero(&z, &z), &AbMap::zero(&zz, &zz), &AbMap::zero(&z, &z)).unwrap();
        assert!(s.delta.is_zero());
    }

    #[test]
    fn snake_nonsplit() {
        // 0 → Z --2--> Z → Z/2 → 0 mapped to itself by ×2 on A and B: δ: Z/2 → Z/2 is the identity.
        let z = FgAbGroup::free(1);
        let z2 = FgAbGroup::cyclic(&[2]);
        let i = AbMap::new(z.clone(), z.clone(), IntMat::from_rows(&[vec![2]])).unwrap();
        let p = AbMap::new(z.clone(), z2.clone(), IntMat::from_rows(&[vec![1]])).unwrap();
        let ses = ShortExactSeq::new(i, p).unwrap();
        let two = AbMap::new(z.clone(), z.clone(), IntMat::from_rows(&[vec![2]])).unwrap();
        let s = snake(&ses, &ses, &two, &two, &AbMap::zero(&z2, &z2)).unwrap();
        assert_eq!(s.ker_c.0.iso(), iso(0, &[2]));
        assert_eq!(image(&s.delta).0.iso(), iso(0, &[2]));
    }

    #[test]
    fn non_commuting_ladder_is_rejected() {
        let z = FgAbGroup::free(1);
        let ses = ShortExactSeq::new(AbMap::identity(&z), AbMap::zero(&z, &FgAbGroup::trivial())).unwrap();
        let two = AbMap::new(z.clone(), z.clone(), IntMat::from_rows(&[vec![2]])).unwrap();
        let t = FgAbGroup::trivial();
        let err = snake(&ses, &ses, &AbMap::identity(&z), &two, &AbMap::identity(&t)).unwrap_err();
        assert!(matches!(err, Error::NonCommutingSquare(_)));
    }

    #[test]
    fn iso_rendering() {
        assert_eq!(iso(0, &[]).to_string(), "0");
        assert_eq!(iso(2, &[2, 2, 4]).to_string(), "Z^2 + (Z/2)^2 + Z/4");
        assert_eq!(iso(1, &[2]).to_string(), "Z + Z/2");
    }
}
