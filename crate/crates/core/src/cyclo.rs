//! Exact arithmetic in cyclotomic fields.
//!
//! A [`Cyclotomic`] is stored over the power basis `1, z, ..., z^(φ(e)-1)` of
//! `Q(ζ_e)` modulo the cyclotomic polynomial `Φ_e`, always at the smallest
//! conductor `e` whose field contains the value. Equality is therefore
//! structural.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::perm::prime_factors;

pub type Rat = BigRational;

pub fn euler_phi(n: u32) -> u32 {
    let mut r = n;
    for p in prime_factors(n as u64) {
        let p = p as u32;
        r = r / p * (p - 1);
    }
    r
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // both ascending, den monic
    let mut rem = num.to_vec();
    let dl = den.len();
    let mut q = vec![0i64; num.len() + 1 - dl];
    for k in (0..q.len()).rev() {
        let c = rem[k + dl - 1];
        q[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

/// Coefficients of `Φ_n`, ascending.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            p = poly_div_exact(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

/// Reduction data for one conductor.
struct Field {
    phi: usize,
    /// `zeta_pows[k]` = power-basis coordinates of `ζ_e^k`, `0 ≤ k < e`.
    zeta_pows: Vec<Vec<i64>>,
}

impl Field {
    fn build(e: u32) -> Field {
        let poly = cyclotomic_polynomial(e);
        let phi = poly.len() - 1;
        let mut zeta_pows = Vec::with_capacity(e as usize);
        let mut v = vec![0i64; phi];
        v[0] = 1;
        for _ in 0..e {
            zeta_pows.push(v.clone());
            let top = v[phi - 1];
            let mut next = vec![0i64; phi];
            next[1..phi].copy_from_slice(&v[..phi - 1]);
            for i in 0..phi {
                next[i] -= top * poly[i];
            }
            v = next;
        }
        Field { phi, zeta_pows }
    }

    /// Reduces a vector indexed by exponents mod `e`.
    fn reduce(&self, raw: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.phi];
        for (k, c) in raw.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < self.phi {
                out[k] += c;
                continue;
            }
            for (o, &t) in out.iter_mut().zip(&self.zeta_pows[k]) {
                if t != 0 {
                    *o += c * t;
                }
            }
        }
        out
    }
}

fn field(e: u32) -> Arc<Field> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Field>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().expect("field cache").get(&e) {
        return f.clone();
    }
    let f = Arc::new(Field::build(e));
    cache.lock().expect("field cache").entry(e).or_insert(f).clone()
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    let g = a.extended_gcd(&m);
    debug_assert_eq!(g.gcd, 1);
    g.x.rem_euclid(m)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    conductor: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic { conductor: 1, num: vec![BigInt::zero()], den: BigInt::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Cyclotomic { conductor: 1, num: vec![BigInt::from(n)], den: BigInt::one() }
    }

    pub fn from_rat(q: &Rat) -> Self {
        Cyclotomic { conductor: 1, num: vec![q.numer().clone()], den: q.denom().clone() }
    }

    /// `ζ_e^k`.
    pub fn zeta(e: u32, k: i64) -> Self {
        assert!(e >= 1);
        let mut raw = vec![BigInt::zero(); e as usize];
        raw[k.rem_euclid(e as i64) as usize] = BigInt::one();
        Self::from_raw(e, raw, BigInt::one())
    }

    /// Builds `(Σ raw[k] ζ_e^k) / den`.
    fn from_raw(e: u32, raw: Vec<BigInt>, den: BigInt) -> Self {
        let f = field(e);
        let num = f.reduce(&raw);
        Self::normalized(e, num, den)
    }

    fn normalized(e: u32, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if num.iter().all(Zero::is_zero) {
            return Self::zero();
        }
        let mut g = den.clone();
        for c in &num {
            g = g.gcd(c);
        }
        if den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in num.iter_mut() {
                *c /= &g;
            }
            den /= &g;
        }
        Self::canonical(Cyclotomic { conductor: e, num, den })
    }

    fn canonical(mut x: Cyclotomic) -> Cyclotomic {
        'descend: loop {
            if x.conductor == 1 {
                return x;
            }
            for p in prime_factors(x.conductor as u64) {
                if let Some(y) = x.descend(p as u32) {
                    x = y;
                    continue 'descend;
                }
            }
            return x;
        }
    }

    /// The value in `Q(ζ_{e/p})` if it lies there.
    fn descend(&self, p: u32) -> Option<Cyclotomic> {
        let e = self.conductor;
        let m = e / p;
        if m % p == 0 {
            // power basis of Q(ζ_e) is {ζ_m^q ζ_e^r : 0 ≤ r < p}
            if self.num.iter().enumerate().any(|(k, c)| k as u32 % p != 0 && !c.is_zero()) {
                return None;
            }
            let num = self.num.iter().step_by(p as usize).cloned().collect();
            return Some(Cyclotomic { conductor: m, num, den: self.den.clone() });
        }
        // ζ_e = ζ_m^α ζ_p^β with pα + mβ ≡ 1 (mod e)
        let alpha = if m == 1 { 0 } else { mod_inverse(p as i64, m as i64) };
        let beta = mod_inverse(m as i64 % p as i64, p as i64);
        let pu = p as usize;
        let mut parts = vec![vec![BigInt::zero(); m as usize]; pu - 1];
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let i = ((alpha * k as i64) % m as i64) as usize;
            let j = ((beta * k as i64) % p as i64) as usize;
            if j == pu - 1 {
                for part in parts.iter_mut() {
                    part[i] -= c;
                }
            } else {
                parts[j][i] += c;
            }
        }
        let fm = field(m);
        for part in &parts[1..] {
            if fm.reduce(part).iter().any(|c| !c.is_zero()) {
                return None;
            }
        }
        let num = fm.reduce(&parts[0]);
        Some(Cyclotomic { conductor: m, num, den: self.den.clone() })
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Power-basis coordinates at the canonical conductor.
    pub fn coeffs(&self) -> Vec<Rat> {
        self.num.iter().map(|c| Rat::new(c.clone(), self.den.clone())).collect()
    }

    /// Coordinates over the power basis of `Q(ζ_e)`; `e` must be a multiple
    /// of the conductor.
    pub fn coords_in(&self, e: u32) -> Vec<Rat> {
        assert!(e % self.conductor == 0, "conductor {} does not divide {e}", self.conductor);
        let num = field(e).reduce(&self.raw_in(e));
        num.into_iter().map(|c| Rat::new(c, self.den.clone())).collect()
    }

    /// Numerators placed at exponent positions modulo `e`.
    fn raw_in(&self, e: u32) -> Vec<BigInt> {
        let step = (e / self.conductor) as usize;
        let mut raw = vec![BigInt::zero(); e as usize];
        for (k, c) in self.num.iter().enumerate() {
            raw[k * step] = c.clone();
        }
        raw
    }

    pub fn is_zero(&self) -> bool {
        self.conductor == 1 && self.num[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.num[0].is_one() && self.den.is_one()
    }

    pub fn to_rational(&self) -> Option<Rat> {
        (self.conductor == 1).then(|| Rat::new(self.num[0].clone(), self.den.clone()))
    }

    /// Algebraic-integer test: `Z[ζ_e]` is the full ring of integers.
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn scale(&self, q: &Rat) -> Cyclotomic {
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        Self::normalized(self.conductor, num, &self.den * q.denom())
    }

    fn combine(&self, other: &Cyclotomic, sign: i32) -> Cyclotomic {
        let e = self.conductor.lcm(&other.conductor);
        let mut a = self.raw_in(e);
        let b = other.raw_in(e);
        for (x, y) in a.iter_mut().zip(b) {
            *x *= &other.den;
            if sign > 0 {
                *x += y * &self.den;
            } else {
                *x -= y * &self.den;
            }
        }
        Self::from_raw(e, a, &self.den * &other.den)
    }

    fn product(&self, other: &Cyclotomic) -> Cyclotomic {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let e = self.conductor.lcm(&other.conductor);
        let sa = (e / self.conductor) as usize;
        let sb = (e / other.conductor) as usize;
        let eu = e as usize;
        let mut raw = vec![BigInt::zero(); eu];
        for (i, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.num.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                raw[(i * sa + j * sb) % eu] += x * y;
            }
        }
        Self::from_raw(e, raw, &self.den * &other.den)
    }

    pub fn inv(&self) -> Result<Cyclotomic> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let e = self.conductor;
        let mut conj = Cyclotomic::one();
        for t in 2..e.max(2) {
            if t.gcd(&e) == 1 {
                conj = &conj * &self.galois_unchecked(t as i64);
            }
        }
        let norm = (self * &conj).to_rational().expect("norm is rational");
        Ok(conj.scale(&norm.recip()))
    }

    pub fn div(&self, other: &Cyclotomic) -> Result<Cyclotomic> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut k: u32) -> Cyclotomic {
        let mut base = self.clone();
        let mut acc = Cyclotomic::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Applies `ζ ↦ ζ^t`.
    pub fn galois(&self, t: i64) -> Result<Cyclotomic> {
        let e = self.conductor;
        if t.gcd(&(e as i64)) != 1 {
            return Err(Error::NotCoprime { t, conductor: e });
        }
        Ok(self.galois_unchecked(t))
    }

    fn galois_unchecked(&self, t: i64) -> Cyclotomic {
        let e = self.conductor as i64;
        if e == 1 {
            return self.clone();
        }
        let mut raw = vec![BigInt::zero(); e as usize];
        for (k, c) in self.num.iter().enumerate() {
            raw[(k as i64 * t).rem_euclid(e) as usize] = c.clone();
        }
        Self::from_raw(e as u32, raw, self.den.clone())
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Cyclotomic {
        self.galois_unchecked(-1)
    }
}

pub fn galois_apply(t: i64, x: &Cyclotomic) -> Result<Cyclotomic> {
    x.galois(t)
}

pub fn is_rational(x: &Cyclotomic) -> Option<Rat> {
    x.to_rational()
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialOrd for Cyclotomic {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// An arbitrary but fixed total order, used for canonical sorting.
impl Ord for Cyclotomic {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.conductor
            .cmp(&other.conductor)
            .then_with(|| self.num.cmp(&other.num))
            .then_with(|| self.den.cmp(&other.den))
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, o: &Cyclotomic) -> Cyclotomic {
        self.combine(o, 1)
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, o: &Cyclotomic) -> Cyclotomic {
        self.combine(o, -1)
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, o: &Cyclotomic) -> Cyclotomic {
        self.product(o)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { conductor: self.conductor, num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, o: Cyclotomic) -> Cyclotomic {
        &self + &o
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, o: Cyclotomic) -> Cyclotomic {
        &self - &o
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, o: Cyclotomic) -> Cyclotomic {
        &self * &o
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl From<i64> for Cyclotomic {
    fn from(n: i64) -> Self {
        Cyclotomic::from_int(n)
    }
}

/// Sums of rational multiples of roots of unity in a fixed `Q(ζ_e)`.
pub struct Accumulator {
    e: u32,
    raw: Vec<Rat>,
}

impl Accumulator {
    pub fn new(e: u32) -> Self {
        Accumulator { e, raw: vec![Rat::zero(); e as usize] }
    }

    /// Adds `q·ζ_e^k`.
    pub fn add_term(&mut self, k: i64, q: &Rat) {
        let i = k.rem_euclid(self.e as i64) as usize;
        self.raw[i] += q;
    }

    /// Adds `q·x`; the conductor of `x` must divide `e`.
    pub fn add_scaled(&mut self, x: &Cyclotomic, q: &Rat) {
        assert!(self.e % x.conductor == 0);
        let step = (self.e / x.conductor) as usize;
        for (k, c) in x.num.iter().enumerate() {
            if !c.is_zero() {
                self.raw[k * step] += q * Rat::new(c.clone(), x.den.clone());
            }
        }
    }

    pub fn finish(self) -> Cyclotomic {
        let mut den = BigInt::one();
        for q in &self.raw {
            den = den.lcm(q.denom());
        }
        let raw = self.raw.iter().map(|q| q.numer() * (&den / q.denom())).collect();
        Cyclotomic::from_raw(self.e, raw, den)
    }
}

fn render_rat(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Cyclotomic {
    /// `a0 + a1*z8 + a3*z8^3`, with `-` for negative coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, q) in self.coeffs().iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let neg = q.is_negative();
            let a = q.abs();
            let body = match k {
                0 => render_rat(&a),
                _ => {
                    let z = if k == 1 { format!("z{}", self.conductor) } else { format!("z{}^{}", self.conductor, k) };
                    if a.is_one() {
                        z
                    } else {
                        format!("{}*{}", render_rat(&a), z)
                    }
                }
            };
            match (first, neg) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({self})")
    }
}

fn parse_rat(s: &str, pos: usize) -> Result<Rat> {
    let bad = || Error::Parse { position: pos, expected: "a rational number".into() };
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

/// Parses `zE` or `zE^k`.
fn parse_zeta(s: &str, pos: usize) -> Result<Cyclotomic> {
    let bad = |what: &str| Error::Parse { position: pos, expected: what.into() };
    let rest = s.strip_prefix('z').ok_or_else(|| bad("`z<conductor>`"))?;
    let (e, k) = match rest.split_once('^') {
        Some((e, k)) => (e, k.trim().parse::<i64>().map_err(|_| bad("an integer exponent"))?),
        None => (rest, 1),
    };
    let e: u32 = e.trim().parse().map_err(|_| bad("a conductor"))?;
    if e == 0 {
        return Err(bad("a positive conductor"));
    }
    Ok(Cyclotomic::zeta(e, k))
}

impl FromStr for Cyclotomic {
    type Err = Error;

    /// Sums of terms `q`, `zE^k` and `q*zE^k` joined by `+` or `-`.
    fn from_str(s: &str) -> Result<Self> {
        let mut total = Cyclotomic::zero();
        let bytes: Vec<char> = s.chars().collect();
        let mut i = 0;
        let mut sign = 1i64;
        let mut expect_term = true;
        let mut start = 0;
        let push = |term: &str, start: usize, sign: i64, total: &mut Cyclotomic| -> Result<()> {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::Parse { position: start, expected: "a term".into() });
            }
            let mut value = Cyclotomic::one();
            for factor in term.split('*') {
                let factor = factor.trim();
                let v = if factor.starts_with('z') {
                    parse_zeta(factor, start)?
                } else {
                    Cyclotomic::from_rat(&parse_rat(factor, start)?)
                };
                value = &value * &v;
            }
            if sign < 0 {
                value = -value;
            }
            *total = &*total + &value;
            Ok(())
        };
        let mut term = String::new();
        while i < bytes.len() {
            let c = bytes[i];
            let after_caret = term.trim_end().ends_with('^');
            if (c == '+' || c == '-') && !after_caret && !term.trim().is_empty() {
                push(&term, start, sign, &mut total)?;
                term.clear();
                sign = if c == '-' { -1 } else { 1 };
                expect_term = true;
                start = i + 1;
            } else if (c == '+' || c == '-') && term.trim().is_empty() {
                if c == '-' {
                    sign = -sign;
                }
                start = i + 1;
            } else {
                term.push(c);
                expect_term = false;
            }
            i += 1;
        }
        if expect_term {
            return Err(Error::Parse { position: s.len(), expected: "a term".into() });
        }
        push(&term, start, sign, &mut total)?;
        Ok(total)
    }
}

/// Integer value of a rational known to be integral.
pub fn rat_to_i64(q: &Rat) -> Option<i64> {
    if q.denom().is_one() {
        q.numer().to_i64()
    } else {
        None
    }
}
