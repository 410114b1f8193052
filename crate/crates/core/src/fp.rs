//! Finite presentations and coset enumeration over the trivial subgroup.
//!
//! Text grammar:
//!
//! ```text
//! spec     := gens ";" relators
//! gens     := name ("," name)*
//! relators := word ("," word)*
//! word     := factor ("*" factor)*
//! factor   := name ("^" signed-int)?
//! ```

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::perm::{FiniteGroup, GroupHom, Perm, DEFAULT_ORDER_BOUND};

/// Default limit on the number of cosets alive at any point of an enumeration.
pub const DEFAULT_COSET_LIMIT: usize = 100_000;

/// A word as (generator index, nonzero exponent) pairs.
pub type Word = Vec<(usize, i64)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub gens: Vec<String>,
    pub relators: Vec<Word>,
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Character-level cursor shared by the presentation and embedding parsers.
pub(crate) struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor { chars: src.char_indices().collect(), pos: 0, len: src.len(), _src: src }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn offset(&self) -> usize {
        self.chars.get(self.pos).map(|c| c.0).unwrap_or(self.len)
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn error(&mut self, expected: &str) -> Error {
        self.skip_ws();
        Error::Parse { position: self.offset(), expected: expected.to_string() }
    }

    pub(crate) fn name(&mut self) -> Result<String> {
        match self.peek() {
            Some(c) if is_name_start(c) => {
                let mut s = String::new();
                while let Some(&(_, c)) = self.chars.get(self.pos) {
                    if !is_name_char(c) {
                        break;
                    }
                    s.push(c);
                    self.pos += 1;
                }
                Ok(s)
            }
            _ => Err(self.error("a generator name")),
        }
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut digits = String::new();
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            if !c.is_ascii_digit() {
                break;
            }
            digits.push(c);
            self.pos += 1;
        }
        if digits.is_empty() {
            return Err(self.error("an integer exponent"));
        }
        let v: i64 = digits.parse().map_err(|_| self.error("an exponent that fits in 64 bits"))?;
        Ok(if neg { -v } else { v })
    }

    /// Parses `factor ("*" factor)*`, resolving names via `lookup`.
    pub(crate) fn word(&mut self, lookup: &dyn Fn(&str) -> Option<usize>) -> Result<Word> {
        let mut word = Vec::new();
        loop {
            let start = self.offset_after_ws();
            let name = self.name()?;
            let g = lookup(&name).ok_or(Error::Parse {
                position: start,
                expected: format!("a declared generator (found `{name}`)"),
            })?;
            let exp = if self.eat('^') { self.signed_int()? } else { 1 };
            if exp == 0 {
                return Err(Error::Parse { position: start, expected: "a nonzero exponent".into() });
            }
            word.push((g, exp));
            if !self.eat('*') {
                break;
            }
        }
        Ok(word)
    }

    fn offset_after_ws(&mut self) -> usize {
        self.skip_ws();
        self.offset()
    }
}

pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut cur = Cursor::new(text);
    let mut gens: Vec<String> = Vec::new();
    loop {
        let start = cur.offset_after_ws();
        let n = cur.name()?;
        if gens.contains(&n) {
            return Err(Error::Parse { position: start, expected: format!("a new generator name (`{n}` repeated)") });
        }
        gens.push(n);
        if !cur.eat(',') {
            break;
        }
    }
    if !cur.eat(';') {
        return Err(cur.error("';' or ','"));
    }
    let mut relators = Vec::new();
    if !cur.at_end() {
        let lookup = |s: &str| gens.iter().position(|g| g == s);
        loop {
            relators.push(cur.word(&lookup)?);
            if !cur.eat(',') {
                break;
            }
        }
    }
    if !cur.at_end() {
        return Err(cur.error("',' or end of input"));
    }
    Ok(Presentation { gens, relators })
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.gens.join(","))?;
        let words: Vec<String> = self.relators.iter().map(|w| render_word(w, &self.gens)).collect();
        write!(f, "{}", words.join(","))
    }
}

pub fn render_word(w: &[(usize, i64)], names: &[String]) -> String {
    let parts: Vec<String> = w
        .iter()
        .map(|&(g, e)| if e == 1 { names[g].clone() } else { format!("{}^{}", names[g], e) })
        .collect();
    parts.join("*")
}

impl std::str::FromStr for Presentation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_presentation(s)
    }
}

/// Parses an embedding string `gen=word;gen=word...` assigning a word in
/// `target` generators to every `source` generator exactly once. `1` denotes
/// the empty word. Returns one word per source generator, in source order.
pub fn parse_embedding(text: &str, source: &[String], target: &[String]) -> Result<Vec<Word>> {
    let mut cur = Cursor::new(text);
    let mut images: Vec<Option<Word>> = vec![None; source.len()];
    let lookup = |s: &str| target.iter().position(|g| g == s);
    while !cur.at_end() {
        let start = cur.offset_after_ws();
        let name = cur.name()?;
        let g = source.iter().position(|s| *s == name).ok_or(Error::Parse {
            position: start,
            expected: format!("a source generator (found `{name}`)"),
        })?;
        if images[g].is_some() {
            return Err(Error::Parse { position: start, expected: format!("`{name}` assigned once") });
        }
        if !cur.eat('=') {
            return Err(cur.error("'='"));
        }
        images[g] = Some(if cur.eat('1') { Vec::new() } else { cur.word(&lookup)? });
        if !cur.eat(';') && !cur.at_end() {
            return Err(cur.error("';' or end of input"));
        }
    }
    images
        .into_iter()
        .enumerate()
        .map(|(i, w)| {
            w.ok_or(Error::Parse { position: text.len(), expected: format!("an assignment for `{}`", source[i]) })
        })
        .collect()
}

/// Builds the generator assignment described by an embedding string.
/// The result is not verified; see [`GroupHom::verify`].
pub fn hom_from_embedding(text: &str, source: Arc<FiniteGroup>, target: Arc<FiniteGroup>) -> Result<GroupHom> {
    let words = parse_embedding(text, source.gen_names(), target.gen_names())?;
    let images = words.iter().map(|w| target.evaluate(w)).collect();
    Ok(GroupHom::new(source, target, images))
}

/// Expands a word into letters: column `2g` is generator `g`, `2g+1` its inverse.
fn letters(word: &[(usize, i64)]) -> Vec<usize> {
    let mut out = Vec::new();
    for &(g, e) in word {
        let col = if e > 0 { 2 * g } else { 2 * g + 1 };
        for _ in 0..e.unsigned_abs() {
            out.push(col);
        }
    }
    out
}

fn inv_col(c: usize) -> usize {
    c ^ 1
}

/// Free and cyclic reduction of a letter sequence.
fn cyclically_reduce(mut w: Vec<usize>) -> Vec<usize> {
    let mut stack: Vec<usize> = Vec::with_capacity(w.len());
    for c in w.drain(..) {
        if stack.last() == Some(&inv_col(c)) {
            stack.pop();
        } else {
            stack.push(c);
        }
    }
    let mut lo = 0;
    let mut hi = stack.len();
    while hi - lo >= 2 && stack[lo] == inv_col(stack[hi - 1]) {
        lo += 1;
        hi -= 1;
    }
    stack[lo..hi].to_vec()
}

const UNDEF: usize = usize::MAX;

/// Coset table of an HLT enumeration with coincidence handling.
#[derive(Debug, Clone)]
pub struct CosetTable {
    /// rows[coset][column]; columns alternate generator / inverse.
    pub rows: Vec<Vec<usize>>,
    pub count: usize,
}

struct Enumerator {
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    ncols: usize,
    live: usize,
    limit: usize,
    queue: Vec<usize>,
}

impl Enumerator {
    fn new(ncols: usize, limit: usize) -> Self {
        Enumerator { table: vec![vec![UNDEF; ncols]], parent: vec![0], ncols, live: 1, limit, queue: Vec::new() }
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<()> {
        if self.live >= self.limit {
            return Err(Error::EnumerationBudgetExceeded { limit: self.limit });
        }
        let n = self.table.len();
        self.table.push(vec![UNDEF; self.ncols]);
        self.parent.push(n);
        self.live += 1;
        self.table[c][x] = n;
        self.table[n][inv_col(x)] = c;
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut k = c;
        while self.parent[k] != r {
            let next = self.parent[k];
            self.parent[k] = r;
            k = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra == rb {
            return;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        self.live -= 1;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for x in 0..self.ncols {
                let d = self.table[g][x];
                if d == UNDEF {
                    continue;
                }
                self.table[d][inv_col(x)] = UNDEF;
                let mu = self.rep(g);
                let nu = self.rep(d);
                if self.table[mu][x] != UNDEF {
                    let t = self.table[mu][x];
                    self.merge(nu, t);
                } else if self.table[nu][inv_col(x)] != UNDEF {
                    let t = self.table[nu][inv_col(x)];
                    self.merge(mu, t);
                } else {
                    self.table[mu][x] = nu;
                    self.table[nu][inv_col(x)] = mu;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<()> {
        if w.is_empty() {
            return Ok(());
        }
        let mut f = c;
        let mut b = c;
        let mut i: isize = 0;
        let mut j: isize = w.len() as isize - 1;
        loop {
            while i <= j && self.table[f][w[i as usize]] != UNDEF {
                f = self.table[f][w[i as usize]];
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i && self.table[b][inv_col(w[j as usize])] != UNDEF {
                b = self.table[b][inv_col(w[j as usize])];
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                let x = w[i as usize];
                self.table[f][x] = b;
                self.table[b][inv_col(x)] = f;
                return Ok(());
            }
            self.define(f, w[i as usize])?;
        }
    }
}

/// Enumerates cosets of the trivial subgroup.
pub fn coset_table(p: &Presentation, limit: usize) -> Result<CosetTable> {
    let ncols = 2 * p.gens.len();
    let relators: Vec<Vec<usize>> =
        p.relators.iter().map(|r| cyclically_reduce(letters(r))).filter(|r| !r.is_empty()).collect();
    let mut en = Enumerator::new(ncols, limit);
    let mut c = 0;
    while c < en.table.len() {
        if en.is_live(c) {
            for r in &relators {
                if !en.is_live(c) {
                    break;
                }
                en.scan_and_fill(c, r)?;
            }
            for x in 0..ncols {
                if !en.is_live(c) {
                    break;
                }
                if en.table[c][x] == UNDEF {
                    en.define(c, x)?;
                }
            }
        }
        c += 1;
    }
    let live: Vec<usize> = (0..en.table.len()).filter(|&c| en.is_live(c)).collect();
    let mut renumber = vec![UNDEF; en.table.len()];
    for (k, &c) in live.iter().enumerate() {
        renumber[c] = k;
    }
    let mut rows = Vec::with_capacity(live.len());
    for &c in &live {
        let row: Vec<usize> = (0..ncols)
            .map(|x| {
                let t = en.table[c][x];
                debug_assert!(t != UNDEF);
                renumber[en.rep(t)]
            })
            .collect();
        rows.push(row);
    }
    Ok(CosetTable { count: rows.len(), rows })
}

/// Regular permutation representation of the presented group.
pub fn todd_coxeter(p: &Presentation) -> Result<FiniteGroup> {
    todd_coxeter_with_limit(p, DEFAULT_COSET_LIMIT)
}

pub fn todd_coxeter_with_limit(p: &Presentation, limit: usize) -> Result<FiniteGroup> {
    let table = coset_table(p, limit)?;
    let gens: Vec<Perm> = (0..p.gens.len())
        .map(|g| Perm::new(table.rows.iter().map(|r| r[2 * g] as u32).collect()))
        .collect::<Result<_>>()?;
    let bound = DEFAULT_ORDER_BOUND.max(table.count);
    let group = FiniteGroup::generate(p.gens.clone(), gens, bound)?;
    debug_assert_eq!(group.order(), table.count);
    Ok(group)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embeddings() {
        let src = vec!["r".to_string(), "s".to_string()];
        let tgt = vec!["a".to_string(), "b".to_string()];
        let w = parse_embedding("r=a^2;s=a*b", &src, &tgt).unwrap();
        assert_eq!(w, vec![vec![(0, 2)], vec![(0, 1), (1, 1)]]);
        assert_eq!(parse_embedding("s=1;r=b;", &src, &tgt).unwrap(), vec![vec![(1, 1)], vec![]]);
        assert!(parse_embedding("", &[], &tgt).unwrap().is_empty());
        assert!(matches!(parse_embedding("r=a", &src, &tgt), Err(Error::Parse { .. })));
        assert!(matches!(parse_embedding("r=a;r=b;s=a", &src, &tgt), Err(Error::Parse { position: 4, .. })));
        assert!(matches!(parse_embedding("r=c;s=a", &src, &tgt), Err(Error::Parse { position: 2, .. })));
        assert!(matches!(parse_embedding("r a", &src, &tgt), Err(Error::Parse { position: 2, .. })));
    }

    #[test]
    fn q16_embeds_in_qd32() {
        let h = Arc::new(todd_coxeter(&parse_presentation(Q16).unwrap()).unwrap());
        let k = Arc::new(todd_coxeter(&parse_presentation(QD32).unwrap()).unwrap());
        let e = hom_from_embedding("r=a^2;s=a*b", h.clone(), k.clone()).unwrap();
        assert!(e.verify().is_injective);
        let bad = hom_from_embedding("r=a;s=b", h, k).unwrap();
        assert!(!bad.verify().is_hom);
    }

    const Q16: &str = "r,s;r^8,r^4*s^-2,s*r*s^-1*r^-7";
    const QD32: &str = "a,b;a^16,b^2,b*a*b*a^-7";

    #[test]
    fn parses_q16_and_qd32() {
        let q = parse_presentation(Q16).unwrap();
        assert_eq!(q.gens, vec!["r", "s"]);
        assert_eq!(q.relators.len(), 3);
        assert_eq!(q.relators[1], vec![(0, 4), (1, -2)]);
        let qd = parse_presentation(QD32).unwrap();
        assert_eq!(qd.relators.len(), 3);
    }

    #[test]
    fn rejects_empty_relator() {
        let err = parse_presentation("x;;").unwrap_err();
        assert!(matches!(err, Error::Parse { position: 2, .. }), "{err:?}");
    }

    #[test]
    fn rejects_unknown_generator_and_zero_exponent() {
        assert!(parse_presentation("a;b").is_err());
        assert!(parse_presentation("a;a^0").is_err());
        assert!(parse_presentation("a,a;a").is_err());
        assert!(parse_presentation("a;a^").is_err());
    }

    #[test]
    fn empty_relator_list_is_allowed() {
        let p = parse_presentation("a;").unwrap();
        assert!(p.relators.is_empty());
    }

    #[test]
    fn display_round_trips() {
        for text in [Q16, QD32, "a;a^3", "x,y;x^2,y^-3,x*y*x^-1*y"] {
            let p = parse_presentation(text).unwrap();
            assert_eq!(parse_presentation(&p.to_string()).unwrap(), p);
        }
    }

    #[test]
    fn enumerates_q16_and_qd32() {
        assert_eq!(todd_coxeter(&parse_presentation(Q16).unwrap()).unwrap().order(), 16);
        assert_eq!(todd_coxeter(&parse_presentation(QD32).unwrap()).unwrap().order(), 32);
        assert_eq!(todd_coxeter(&parse_presentation("a;a^3").unwrap()).unwrap().order(), 3);
    }

    #[test]
    fn enumerates_groups_needing_coincidences() {
        // S3 and A5 from Coxeter-style presentations
        let s3 = parse_presentation("a,b;a^2,b^2,a*b*a*b*a*b").unwrap();
        assert_eq!(todd_coxeter(&s3).unwrap().order(), 6);
        let a5 = parse_presentation("a,b;a^2,b^3,a*b*a*b*a*b*a*b*a*b").unwrap();
        assert_eq!(todd_coxeter(&a5).unwrap().order(), 60);
        let triv = parse_presentation("a,b;a*b^-1,a^2*b^-3").unwrap();
        assert_eq!(todd_coxeter(&triv).unwrap().order(), 1);
    }

    #[test]
    fn infinite_group_exhausts_budget() {
        let z = parse_presentation("a,b;a*b*a^-1*b^-1").unwrap();
        assert_eq!(
            todd_coxeter_with_limit(&z, 500).unwrap_err(),
            Error::EnumerationBudgetExceeded { limit: 500 }
        );
    }

    #[test]
    fn regular_representation_is_free() {
        let g = todd_coxeter(&parse_presentation(QD32).unwrap()).unwrap();
        for (i, p) in g.elements().iter().enumerate().skip(1) {
            assert!(p.images().iter().enumerate().all(|(k, &v)| k as u32 != v), "element {i} fixes a point");
        }
    }
}
