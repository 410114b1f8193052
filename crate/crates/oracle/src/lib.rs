//! Slow reference computations for cross-checking the main engine.
//!
//! Nothing here shares code with `kzq-core`: matrices are plain `i128`
//! grids and groups are plain lists of permutation images.

use std::collections::{BTreeSet, HashMap, VecDeque};

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Determinant by cofactor expansion.
pub fn determinant(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        _ => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * determinant(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors `d_k / d_{k-1}` from the gcds `d_k` of all `k × k`
/// minors. Only the nonzero factors are returned (ones included).
pub fn invariant_factors_by_minors(m: &[Vec<i64>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = 1i128;
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut d = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c] as i128).collect()).collect();
                d = gcd(d, determinant(&minor));
            }
        }
        if d == 0 {
            break;
        }
        out.push(d / prev);
        prev = d;
    }
    out
}

/// Column Hermite form by Bezout steps: lower echelon, positive pivots,
/// entries left of a pivot reduced into `[0, pivot)`. Returned row-major.
pub fn column_hermite(m: &[Vec<i64>]) -> Vec<Vec<i128>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut h: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut r = 0;
    for i in 0..rows {
        if r == cols {
            break;
        }
        for j in r + 1..cols {
            let (a, b) = (h[i][r], h[i][j]);
            if b == 0 {
                continue;
            }
            let (g, x, y) = ext_gcd(a, b);
            let (ua, ub) = (a / g, b / g);
            for row in h.iter_mut() {
                let (cr, cj) = (row[r], row[j]);
                row[r] = x * cr + y * cj;
                row[j] = -ub * cr + ua * cj;
            }
        }
        if h[i][r] == 0 {
            continue;
        }
        if h[i][r] < 0 {
            for row in h.iter_mut() {
                row[r] = -row[r];
            }
        }
        let p = h[i][r];
        for j in 0..r {
            let q = h[i][j].div_euclid(p);
            for row in h.iter_mut() {
                row[j] -= q * row[r];
            }
        }
        r += 1;
    }
    h
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

type Elt = Vec<u32>;

fn compose(a: &Elt, b: &Elt) -> Elt {
    a.iter().map(|&x| b[x as usize]).collect()
}

/// All elements generated by the given permutations (breadth first).
pub fn closure(degree: usize, gens: &[Elt]) -> Vec<Elt> {
    let id: Elt = (0..degree as u32).collect();
    let mut seen: BTreeSet<Elt> = BTreeSet::new();
    let mut queue = VecDeque::from([id.clone()]);
    seen.insert(id);
    let mut out = Vec::new();
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = compose(&x, g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
        out.push(x);
    }
    out
}

fn order_of(x: &Elt) -> u64 {
    let id: Elt = (0..x.len() as u32).collect();
    let mut y = x.clone();
    let mut k = 1;
    while y != id {
        y = compose(&y, x);
        k += 1;
    }
    k
}

fn power(x: &Elt, k: u64) -> Elt {
    let mut y: Elt = (0..x.len() as u32).collect();
    for _ in 0..k {
        y = compose(&y, x);
    }
    y
}

fn coprime(a: u64, b: u64) -> bool {
    gcd(a as i128, b as i128) == 1
}

/// Exponents acting over `Q` (`None`), `Q_p` (`Some((p, false))`) or `F_p`
/// (`Some((p, true))`), as residues modulo `e`. Over `F_p` these are the
/// powers of `p`, meaningful only on `p`-regular elements.
pub fn galois_exponents(e: u64, field: Option<(u64, bool)>) -> Vec<u64> {
    let units: Vec<u64> = (1..=e).filter(|&t| coprime(t, e)).map(|t| t % e).collect();
    match field {
        None => units,
        Some((p, false)) => {
            let mut m = e;
            while m % p == 0 {
                m /= p;
            }
            let frob: BTreeSet<u64> = (0..m.max(1)).map(|k| mod_pow(p, k, m)).collect();
            units.into_iter().filter(|t| frob.contains(&(t % m))).collect()
        }
        Some((p, true)) => (0..e).map(|k| mod_pow(p, k, e)).collect::<BTreeSet<_>>().into_iter().collect(),
    }
}

fn mod_pow(b: u64, k: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1 % m;
    for _ in 0..k {
        r = r * b % m;
    }
    r
}

/// Number of classes of `x ~ g⁻¹ x^t g` over the given field; over `F_p`
/// only elements of order prime to `p` are counted.
pub fn fused_class_count(elements: &[Elt], field: Option<(u64, bool)>) -> usize {
    let e = elements.iter().map(order_of).fold(1u64, |a, b| a / gcd(a as i128, b as i128) as u64 * b);
    let ts = galois_exponents(e, field);
    let index: HashMap<&Elt, usize> = elements.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let inverses: Vec<Elt> = elements.iter().map(|x| power(x, order_of(x) - 1)).collect();
    let mut seen = vec![false; elements.len()];
    let mut count = 0;
    for (i, x) in elements.iter().enumerate() {
        if seen[i] {
            continue;
        }
        if let Some((p, true)) = field {
            if order_of(x) % p == 0 {
                seen[i] = true;
                continue;
            }
        }
        count += 1;
        for &t in &ts {
            let y = power(x, t);
            for (g, ginv) in elements.iter().zip(&inverses) {
                seen[index[&compose(&compose(ginv, &y), g)]] = true;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minors() {
        assert_eq!(invariant_factors_by_minors(&[vec![6, 0], vec![0, 4]]), vec![2, 12]);
        assert_eq!(invariant_factors_by_minors(&[vec![0, 0]]), Vec::<i128>::new());
        assert_eq!(determinant(&[vec![2, 1], vec![1, 3]]), 5);
    }

    #[test]
    fn hermite() {
        assert_eq!(column_hermite(&[vec![2, 4], vec![0, 2]]), vec![vec![2, 0], vec![0, 2]]);
        assert_eq!(column_hermite(&[vec![3, 5]]), vec![vec![1, 0]]);
    }

    #[test]
    fn class_counts() {
        let c4 = closure(4, &[vec![1, 2, 3, 0]]);
        assert_eq!(c4.len(), 4);
        assert_eq!(fused_class_count(&c4, None), 3);
        assert_eq!(fused_class_count(&c4, Some((2, true))), 1);
        let s3 = closure(3, &[vec![1, 2, 0], vec![1, 0, 2]]);
        assert_eq!(fused_class_count(&s3, None), 3);
        assert_eq!(fused_class_count(&s3, Some((3, true))), 2);
    }
}
