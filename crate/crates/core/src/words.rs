//! Reduced words in the free group F(a, b).
//!
//! A [`Word`] is kept in syllable form: a list of `(generator, exponent)`
//! pairs with adjacent generators distinct and no zero exponent. Letter-level
//! views are produced on demand for rotation and pattern work.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// One of the two free generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    A,
    B,
}

impl Gen {
    pub fn other(self) -> Gen {
        match self {
            Gen::A => Gen::B,
            Gen::B => Gen::A,
        }
    }

    fn symbol(self, inverse: bool) -> char {
        match (self, inverse) {
            (Gen::A, false) => 'a',
            (Gen::A, true) => 'A',
            (Gen::B, false) => 'b',
            (Gen::B, true) => 'B',
        }
    }
}

/// A single signed letter. Ordered `a < A < b < B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: Gen,
    pub inverse: bool,
}

impl Letter {
    pub const A: Letter = Letter { gen: Gen::A, inverse: false };
    pub const A_INV: Letter = Letter { gen: Gen::A, inverse: true };
    pub const B: Letter = Letter { gen: Gen::B, inverse: false };
    pub const B_INV: Letter = Letter { gen: Gen::B, inverse: true };

    pub fn new(gen: Gen, inverse: bool) -> Letter {
        Letter { gen, inverse }
    }

    pub fn inv(self) -> Letter {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn is_inverse_of(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }

    /// All four letters in their canonical order.
    pub fn all() -> [Letter; 4] {
        [Letter::A, Letter::A_INV, Letter::B, Letter::B_INV]
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gen.symbol(self.inverse))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub gen: Gen,
    pub exp: i64,
}

/// A freely reduced word in F(a, b).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    /// `g^exp` as a word.
    pub fn power_of(gen: Gen, exp: i64) -> Word {
        let mut w = Word::identity();
        w.push_syllable(gen, exp);
        w
    }

    pub fn a() -> Word {
        Word::power_of(Gen::A, 1)
    }

    pub fn b() -> Word {
        Word::power_of(Gen::B, 1)
    }

    /// Freely reduces a sequence of letters.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut w = Word::identity();
        for l in letters {
            w.push_syllable(l.gen, l.sign());
        }
        w
    }

    /// Builds a word from `(generator, exponent)` pairs, reducing as it goes.
    pub fn from_syllables<I: IntoIterator<Item = (Gen, i64)>>(pairs: I) -> Word {
        let mut w = Word::identity();
        for (g, e) in pairs {
            w.push_syllable(g, e);
        }
        w
    }

    /// Appends `gen^exp` on the right and restores the normal form.
    fn push_syllable(&mut self, gen: Gen, exp: i64) {
        if exp == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some(last) if last.gen == gen => {
                last.exp += exp;
                if last.exp == 0 {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push(Syllable { gen, exp }),
        }
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.syllables.iter().map(|s| s.exp.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.syllables.iter().flat_map(|s| {
            let l = Letter::new(s.gen, s.exp < 0);
            std::iter::repeat_n(l, s.exp.unsigned_abs() as usize)
        })
    }

    pub fn to_letters(&self) -> Vec<Letter> {
        self.letters().collect()
    }

    pub fn first_letter(&self) -> Option<Letter> {
        self.syllables.first().map(|s| Letter::new(s.gen, s.exp < 0))
    }

    pub fn last_letter(&self) -> Option<Letter> {
        self.syllables.last().map(|s| Letter::new(s.gen, s.exp < 0))
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable { gen: s.gen, exp: -s.exp })
                .collect(),
        }
    }

    /// Free product `self · other`.
    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for s in &other.syllables {
            w.push_syllable(s.gen, s.exp);
        }
        w
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity();
        for _ in 0..k.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    /// `c⁻¹ · self · c`.
    pub fn conjugate_by(&self, c: &Word) -> Word {
        c.inverse().mul(self).mul(c)
    }

    /// The exponent sum σ_g.
    pub fn exponent_sum(&self, gen: Gen) -> i64 {
        self.syllables.iter().filter(|s| s.gen == gen).map(|s| s.exp).sum()
    }

    pub fn contains_gen(&self, gen: Gen) -> bool {
        self.syllables.iter().any(|s| s.gen == gen)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first_letter(), self.last_letter()) {
            (Some(f), Some(l)) => !f.is_inverse_of(l),
            _ => true,
        }
    }

    /// Splits `self = conjugator · core · conjugator⁻¹` with `core` cyclically
    /// reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let letters = self.to_letters();
        if letters.is_empty() {
            return (Word::identity(), Word::identity());
        }
        let (mut i, mut j) = (0usize, letters.len() - 1);
        while i < j && letters[i].is_inverse_of(letters[j]) {
            i += 1;
            j -= 1;
        }
        let core = Word::from_letters(letters[i..=j].iter().copied());
        let conj = Word::from_letters(letters[..i].iter().copied());
        (core, conj)
    }

    /// Rotates the letter sequence left by `k` positions. Only meaningful on
    /// cyclically reduced words, where the result is again reduced.
    pub fn rotate_left(&self, k: usize) -> Word {
        let letters = self.to_letters();
        if letters.is_empty() {
            return Word::identity();
        }
        let k = k % letters.len();
        Word::from_letters(letters[k..].iter().chain(letters[..k].iter()).copied())
    }

    /// Proper-power decomposition: `self = root^exponent` with `exponent`
    /// maximal. The root is returned conjugated back into place, so
    /// `root.pow(exponent) == self`.
    pub fn proper_power(&self) -> ProperPower {
        let (core, conj) = self.cyclic_reduce();
        let letters = core.to_letters();
        let n = letters.len();
        if n == 0 {
            return ProperPower { root: Word::identity(), exponent: 1 };
        }
        let period = (1..=n)
            .filter(|d| n % d == 0)
            .find(|&d| (d..n).all(|i| letters[i] == letters[i - d]))
            .unwrap_or(n);
        let inner = Word::from_letters(letters[..period].iter().copied());
        let root = conj.mul(&inner).mul(&conj.inverse());
        ProperPower { root, exponent: (n / period) as i64 }
    }

    pub fn is_proper_power(&self) -> bool {
        self.proper_power().exponent > 1
    }

    /// Classifies the word by its running a-height.
    pub fn height_membership(&self) -> Cone {
        let mut h = 0i64;
        let (mut lo, mut hi) = (0i64, 0i64);
        for s in &self.syllables {
            if s.gen == Gen::A {
                // a-syllables inside a reduced word are monotone runs
                h += s.exp;
                lo = lo.min(h);
                hi = hi.max(h);
            }
        }
        if lo >= 0 && hi <= 1 {
            Cone::Positive
        } else if lo >= -1 && hi <= 0 {
            Cone::Negative
        } else {
            Cone::Neither
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProperPower {
    pub root: Word,
    pub exponent: i64,
}

/// Membership of a word in `⟨aba⁻¹, b⟩` (positive) or `⟨a⁻¹ba, b⟩` (negative).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Cone {
    Positive,
    Negative,
    Neither,
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let sym = s.gen.symbol(s.exp < 0);
            let e = s.exp.unsigned_abs();
            if e == 1 {
                write!(f, "{sym}")?;
            } else {
                write!(f, "{sym}^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses `a`, `b`, `A`, `B` tokens with optional `^<int>` exponents.
    /// Whitespace is ignored and `1` denotes the identity.
    fn from_str(text: &str) -> Result<Word> {
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut pos = 0;
        let mut w = Word::identity();
        let skip_ws = |pos: &mut usize| {
            while *pos < chars.len() && chars[*pos].1.is_whitespace() {
                *pos += 1;
            }
        };
        let offset = |pos: usize| chars.get(pos).map_or(text.len(), |c| c.0);
        loop {
            skip_ws(&mut pos);
            if pos >= chars.len() {
                break;
            }
            let (gen, sign) = match chars[pos].1 {
                'a' => (Gen::A, 1),
                'A' => (Gen::A, -1),
                'b' => (Gen::B, 1),
                'B' => (Gen::B, -1),
                '1' => {
                    pos += 1;
                    continue;
                }
                c => {
                    return Err(Error::Parse {
                        offset: offset(pos),
                        message: format!("unexpected character '{c}'"),
                    })
                }
            };
            pos += 1;
            skip_ws(&mut pos);
            let mut exp = 1i64;
            if pos < chars.len() && chars[pos].1 == '^' {
                pos += 1;
                skip_ws(&mut pos);
                let start = pos;
                if pos < chars.len() && (chars[pos].1 == '-' || chars[pos].1 == '+') {
                    pos += 1;
                }
                while pos < chars.len() && chars[pos].1.is_ascii_digit() {
                    pos += 1;
                }
                let digits: String = chars[start..pos].iter().map(|c| c.1).collect();
                exp = digits.parse().map_err(|_| Error::Parse {
                    offset: offset(start),
                    message: "expected an integer exponent".into(),
                })?;
            }
            w.push_syllable(gen, sign * exp);
        }
        Ok(w)
    }
}

/// A cyclically reduced word considered up to rotation.
///
/// Equality and hashing go through the least rotation of the letter ring.
#[derive(Clone, Debug)]
pub struct CyclicWord {
    core: Word,
    canonical: Vec<Letter>,
}

impl CyclicWord {
    /// Cyclically reduces `w` and records its canonical rotation.
    pub fn new(w: &Word) -> CyclicWord {
        let (core, _) = w.cyclic_reduce();
        let letters = core.to_letters();
        let start = least_rotation(&letters);
        let mut canonical = Vec::with_capacity(letters.len());
        canonical.extend_from_slice(&letters[start..]);
        canonical.extend_from_slice(&letters[..start]);
        CyclicWord { core, canonical }
    }

    pub fn core(&self) -> &Word {
        &self.core
    }

    /// The lexicographically least rotation of the letter ring.
    pub fn canonical_letters(&self) -> &[Letter] {
        &self.canonical
    }

    pub fn len(&self) -> usize {
        self.canonical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.canonical.is_empty()
    }

    pub fn inverse(&self) -> CyclicWord {
        CyclicWord::new(&self.core.inverse())
    }

    /// Extreme values of `i` over the cyclic subwords `a bⁱ a` (plus side)
    /// and `a⁻¹ bⁱ a⁻¹` (minus side).
    pub fn scan_extremes(&self) -> Result<ScanStats> {
        if self.core.exponent_sum(Gen::A) != 0 {
            return Err(Error::Precondition("scan requires a-exponent sum zero".into()));
        }
        let ring = self.core.to_letters();
        let a_positions: Vec<usize> =
            ring.iter().enumerate().filter(|(_, l)| l.gen == Gen::A).map(|(i, _)| i).collect();
        if a_positions.is_empty() {
            return Err(Error::NoALetters);
        }
        let mut stats = ScanStats::default();
        let n = ring.len();
        for (idx, &p) in a_positions.iter().enumerate() {
            let q = a_positions[(idx + 1) % a_positions.len()];
            let (lp, lq) = (ring[p], ring[q]);
            if lp != lq {
                continue;
            }
            // b-run strictly between p and q, walking forward around the ring
            let mut run = 0i64;
            let mut k = (p + 1) % n;
            while k != q {
                run += ring[k].sign();
                k = (k + 1) % n;
            }
            if lp.inverse {
                stats.record_minus(run);
            } else {
                stats.record_plus(run);
            }
        }
        Ok(stats)
    }
}

impl PartialEq for CyclicWord {
    fn eq(&self, other: &Self) -> bool {
        self.canonical == other.canonical
    }
}

impl Eq for CyclicWord {}

impl std::hash::Hash for CyclicWord {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.canonical.hash(state);
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.core)
    }
}

/// True iff the cyclic reductions of `u` and `v` are rotations of each other.
pub fn cyclically_equal(u: &Word, v: &Word) -> bool {
    CyclicWord::new(u) == CyclicWord::new(v)
}

/// Start index of the lexicographically least rotation (Booth's algorithm).
pub fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: isize| &s[i as usize % n];
    let mut fail = vec![-1isize; 2 * n];
    let mut k = 0isize;
    for j in 1..(2 * n) as isize {
        let sj = at(j);
        let mut i = fail[(j - k - 1) as usize];
        while i != -1 && sj != at(k + i + 1) {
            if sj < at(k + i + 1) {
                k = j - i - 1;
            }
            i = fail[i as usize];
        }
        if sj != at(k + i + 1) {
            // here i == -1
            if sj < at(k) {
                k = j;
            }
            fail[(j - k) as usize] = -1;
        } else {
            fail[(j - k) as usize] = i + 1;
        }
    }
    k as usize % n
}

/// Extremes of the same-sign a-adjacency scan.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanStats {
    pub min_plus: Option<i64>,
    pub max_plus: Option<i64>,
    pub min_minus: Option<i64>,
    pub max_minus: Option<i64>,
}

impl ScanStats {
    pub(crate) fn record_plus(&mut self, i: i64) {
        self.min_plus = Some(self.min_plus.map_or(i, |m| m.min(i)));
        self.max_plus = Some(self.max_plus.map_or(i, |m| m.max(i)));
    }

    pub(crate) fn record_minus(&mut self, i: i64) {
        self.min_minus = Some(self.min_minus.map_or(i, |m| m.min(i)));
        self.max_minus = Some(self.max_minus.map_or(i, |m| m.max(i)));
    }

    pub fn is_empty(&self) -> bool {
        self.min_plus.is_none() && self.min_minus.is_none()
    }

    /// The four extremes `(min₊, max₊, min₋, max₋)` when both sides are present.
    pub fn extremes(&self) -> Option<(i64, i64, i64, i64)> {
        Some((self.min_plus?, self.max_plus?, self.min_minus?, self.max_minus?))
    }
}

impl fmt::Display for ScanStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Option<i64>| v.map_or("-".to_string(), |x| x.to_string());
        write!(
            f,
            "min+={} max+={} min-={} max-={}",
            show(self.min_plus),
            show(self.max_plus),
            show(self.min_minus),
            show(self.max_minus)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn free_reduction_examples() {
        assert!(Word::from_letters([Letter::A, Letter::A_INV]).is_identity());
        let r = Word::from_letters([
            Letter::A,
            Letter::B,
            Letter::B,
            Letter::A_INV,
            Letter::A,
            Letter::B,
        ]);
        assert_eq!(r.syllables(), &[Syllable { gen: Gen::A, exp: 1 }, Syllable { gen: Gen::B, exp: 3 }]);
        let r = Word::from_letters([Letter::A, Letter::B, Letter::A_INV, Letter::B, Letter::B]);
        assert_eq!(r, w("a b A b^2"));
        assert_eq!(r.len(), 5);
    }

    #[test]
    fn cyclic_reduce_examples() {
        assert_eq!(w("a b A").cyclic_reduce(), (w("b"), w("a")));
        assert_eq!(w("a b A b^2").cyclic_reduce(), (w("a b A b^2"), Word::identity()));
        // b a^-2 b a^2 b^-1 peels b, then the core a^-2 b a^2 peels to b
        let x = w("b a^-2 b a^2 B");
        let (core, conj) = x.cyclic_reduce();
        assert_eq!(core, w("b"));
        assert_eq!(conj, w("b A^2"));
        assert_eq!(conj.mul(&core).mul(&conj.inverse()), x);
    }

    #[test]
    fn exponent_sums() {
        assert_eq!(w("a b A b^2").exponent_sum(Gen::A), 0);
        assert_eq!(w("a b A b^2").exponent_sum(Gen::B), 3);
        assert_eq!(Word::identity().exponent_sum(Gen::A), 0);
    }

    #[test]
    fn cyclic_equality_examples() {
        assert!(cyclically_equal(&w("a b A b"), &w("A b a b")));
        assert!(!cyclically_equal(&w("a b A b^2"), &w("A b a b^2")));
        assert!(cyclically_equal(&w("a b A b^2"), &w("a b A b^2")));
    }

    #[test]
    fn proper_power_examples() {
        let p = w("a b a b a b").proper_power();
        assert_eq!((p.root, p.exponent), (w("a b"), 3));
        let p = w("a b A b^2").proper_power();
        assert_eq!((p.root, p.exponent), (w("a b A b^2"), 1));
        // a⁻¹(ab)²a reduces to (ba)²
        let x = w("A a b a b a");
        let p = x.proper_power();
        assert_eq!((p.root.clone(), p.exponent), (w("b a"), 2));
        assert_eq!(p.root.pow(2), x);
        // conjugated power keeps its conjugator on the root
        let y = w("B a b a b a b^2");
        let p = y.proper_power();
        assert_eq!(p.exponent, 3);
        assert_eq!(p.root.pow(3), y);
    }

    #[test]
    fn scan_examples() {
        let s = CyclicWord::new(&w("a^2 b A^2 b")).scan_extremes().unwrap();
        assert_eq!(s.extremes(), Some((0, 0, 0, 0)));
        let s = CyclicWord::new(&w("a b A b^2 a b^3 A b^4")).scan_extremes().unwrap();
        assert!(s.is_empty());
        let s = CyclicWord::new(&w("a^2 b A b^2 A b^3")).scan_extremes().unwrap();
        assert_eq!(s.extremes(), Some((0, 0, 2, 2)));
        assert!(matches!(CyclicWord::new(&w("b^3")).scan_extremes(), Err(Error::NoALetters)));
    }

    #[test]
    fn scan_rejects_unbalanced() {
        assert!(CyclicWord::new(&w("a^2 b")).scan_extremes().is_err());
    }

    #[test]
    fn height_examples() {
        assert_eq!(w("a b A b^2").height_membership(), Cone::Positive);
        assert_eq!(w("A b a b").height_membership(), Cone::Negative);
        assert_eq!(w("a^2 b A^2 b").height_membership(), Cone::Neither);
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(w("a b A b^2").to_string(), "a b A b^2");
        assert_eq!(w("a^-2 b").to_string(), "A^2 b");
        assert_eq!(w("a^-2 b"), Word::from_syllables([(Gen::A, -2), (Gen::B, 1)]));
        assert_eq!(w("  a ^ 3 B^2 "), Word::from_syllables([(Gen::A, 3), (Gen::B, -2)]));
        assert_eq!(w(""), Word::identity());
        assert_eq!(w("1"), Word::identity());
        assert_eq!(Word::identity().to_string(), "1");
        match "a c".parse::<Word>() {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!("a^".parse::<Word>().is_err());
        assert!("a^x".parse::<Word>().is_err());
    }

    #[test]
    fn booth_matches_brute_force() {
        let cases = ["abab", "baba", "bbaab", "aaaa", "cabca", "zyxzyx", "a", "ba"];
        for c in cases {
            let s: Vec<char> = c.chars().collect();
            let n = s.len();
            let best = (0..n)
                .min_by_key(|&i| s[i..].iter().chain(s[..i].iter()).copied().collect::<String>())
                .unwrap();
            let k = least_rotation(&s);
            let rot = |i: usize| s[i..].iter().chain(s[..i].iter()).copied().collect::<String>();
            assert_eq!(rot(k), rot(best), "case {c}");
        }
    }
}
