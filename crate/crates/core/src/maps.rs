//! Endomorphisms of F(a, b) given by the images of the two generators.
//!
//! Maps act on the right: `w · compose(m1, m2) = (w · m1) · m2`. Conjugation
//! by `w` is `x ↦ w⁻¹ x w`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::words::{Gen, Word};

/// The parametric families of maps `a ↦ a^{±1} bᵏ, b ↦ b^{±1}` plus `ψ_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    /// `a ↦ a⁻¹bᵏ, b ↦ b`
    Alpha,
    /// `a ↦ abᵏ, b ↦ b⁻¹`
    Beta,
    /// `a ↦ a⁻¹bᵏ, b ↦ b⁻¹`
    Zeta,
    /// `a ↦ abᵏ, b ↦ b`
    Delta,
    /// `a ↦ a, b ↦ bᵏ`
    Psi,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Alpha => "alpha",
            Family::Beta => "beta",
            Family::Zeta => "zeta",
            Family::Delta => "delta",
            Family::Psi => "psi",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MapTag {
    Family(Family, i64),
    Conj(Word),
    Custom,
}

/// An endomorphism of F(a, b).
#[derive(Clone, Debug)]
pub struct GenMap {
    image_a: Word,
    image_b: Word,
    tag: MapTag,
}

impl PartialEq for GenMap {
    fn eq(&self, other: &Self) -> bool {
        self.image_a == other.image_a && self.image_b == other.image_b
    }
}

impl Eq for GenMap {}

impl GenMap {
    pub fn new(image_a: Word, image_b: Word) -> GenMap {
        let tag = recognize(&image_a, &image_b);
        GenMap { image_a, image_b, tag }
    }

    pub fn identity() -> GenMap {
        GenMap::new(Word::a(), Word::b())
    }

    /// The swap `a ↔ b`.
    pub fn swap() -> GenMap {
        GenMap::new(Word::b(), Word::a())
    }

    /// Conjugation `x ↦ w⁻¹ x w`.
    pub fn conjugation(w: &Word) -> GenMap {
        GenMap {
            image_a: Word::a().conjugate_by(w),
            image_b: Word::b().conjugate_by(w),
            tag: MapTag::Conj(w.clone()),
        }
    }

    pub fn family(family: Family, k: i64) -> Result<GenMap> {
        let a = |eps: i64| Word::from_syllables([(Gen::A, eps), (Gen::B, k)]);
        let (image_a, image_b) = match family {
            Family::Alpha => (a(-1), Word::b()),
            Family::Beta => (a(1), Word::b().inverse()),
            Family::Zeta => (a(-1), Word::b().inverse()),
            Family::Delta => (a(1), Word::b()),
            Family::Psi => {
                if k == 0 {
                    return Err(Error::PsiZero);
                }
                (Word::a(), Word::power_of(Gen::B, k))
            }
        };
        Ok(GenMap { image_a, image_b, tag: MapTag::Family(family, k) })
    }

    pub fn alpha(k: i64) -> GenMap {
        GenMap::family(Family::Alpha, k).unwrap()
    }

    pub fn beta(k: i64) -> GenMap {
        GenMap::family(Family::Beta, k).unwrap()
    }

    pub fn zeta(k: i64) -> GenMap {
        GenMap::family(Family::Zeta, k).unwrap()
    }

    pub fn delta(k: i64) -> GenMap {
        GenMap::family(Family::Delta, k).unwrap()
    }

    pub fn image_a(&self) -> &Word {
        &self.image_a
    }

    pub fn image_b(&self) -> &Word {
        &self.image_b
    }

    pub fn image(&self, g: Gen) -> &Word {
        match g {
            Gen::A => &self.image_a,
            Gen::B => &self.image_b,
        }
    }

    pub fn tag(&self) -> &MapTag {
        &self.tag
    }

    /// Substitutes the images into `w` and freely reduces.
    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Word::identity();
        for s in w.syllables() {
            out = out.mul(&self.image(s.gen).pow(s.exp));
        }
        out
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GenMap) -> GenMap {
        GenMap::new(next.apply(&self.image_a), next.apply(&self.image_b))
    }

    pub fn abel_matrix(&self) -> AbelMatrix {
        AbelMatrix([
            [self.image_a.exponent_sum(Gen::A), self.image_a.exponent_sum(Gen::B)],
            [self.image_b.exponent_sum(Gen::A), self.image_b.exponent_sum(Gen::B)],
        ])
    }

    /// Whether the images form a basis of F(a, b).
    pub fn is_basis(&self) -> bool {
        nielsen_reduce_pair(&self.image_a, &self.image_b).is_basis
    }
}

/// `w · compose(m1, m2) = (w · m1) · m2`.
pub fn compose(m1: &GenMap, m2: &GenMap) -> GenMap {
    m1.then(m2)
}

fn recognize(image_a: &Word, image_b: &Word) -> MapTag {
    let b = Word::b();
    let b_inv = b.inverse();
    let flip_b = if *image_b == b {
        Some(false)
    } else if *image_b == b_inv {
        Some(true)
    } else {
        None
    };
    let syl = image_a.syllables();
    let a_part = match syl {
        [s] if s.gen == Gen::A && s.exp.abs() == 1 => Some((s.exp, 0)),
        [s, t] if s.gen == Gen::A && s.exp.abs() == 1 => Some((s.exp, t.exp)),
        _ => None,
    };
    if let (Some(flip), Some((eps, k))) = (flip_b, a_part) {
        let family = match (eps, flip) {
            (-1, false) => Family::Alpha,
            (1, true) => Family::Beta,
            (-1, true) => Family::Zeta,
            _ => Family::Delta,
        };
        return MapTag::Family(family, k);
    }
    if *image_a == Word::a() {
        if let [s] = image_b.syllables() {
            if s.gen == Gen::B {
                return MapTag::Family(Family::Psi, s.exp);
            }
        }
    }
    MapTag::Custom
}

impl fmt::Display for GenMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a -> {}; b -> {}", self.image_a, self.image_b)
    }
}

impl Serialize for GenMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for GenMap {
    type Err = Error;

    /// Accepts `a -> <word>; b -> <word>` or one of the shorthands
    /// `alpha(k)`, `beta(k)`, `zeta(k)`, `delta(k)`, `psi(k)`.
    fn from_str(text: &str) -> Result<GenMap> {
        let trimmed = text.trim();
        let lead = text.len() - text.trim_start().len();
        for family in [Family::Alpha, Family::Beta, Family::Zeta, Family::Delta, Family::Psi] {
            if let Some(rest) = trimmed.strip_prefix(family.name()) {
                let inner = rest
                    .trim()
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse {
                        offset: lead + family.name().len(),
                        message: format!("expected {}(<int>)", family.name()),
                    })?;
                let k: i64 = inner.trim().parse().map_err(|_| Error::Parse {
                    offset: lead + family.name().len() + 1,
                    message: "expected an integer parameter".into(),
                })?;
                return GenMap::family(family, k);
            }
        }
        let mut image_a = None;
        let mut image_b = None;
        let mut base = 0usize;
        for part in text.split(';') {
            let part_offset = base;
            base += part.len() + 1;
            if part.trim().is_empty() {
                continue;
            }
            let (lhs, rhs) = part.split_once("->").ok_or_else(|| Error::Parse {
                offset: part_offset,
                message: "expected '<generator> -> <word>'".into(),
            })?;
            let rhs_offset = part_offset + lhs.len() + 2;
            let image: Word = rhs.parse().map_err(|e| match e {
                Error::Parse { offset, message } => {
                    Error::Parse { offset: offset + rhs_offset, message }
                }
                other => other,
            })?;
            let slot = match lhs.trim() {
                "a" => &mut image_a,
                "b" => &mut image_b,
                other => {
                    return Err(Error::Parse {
                        offset: part_offset,
                        message: format!("unknown generator '{other}'"),
                    })
                }
            };
            *slot = Some(image);
        }
        match (image_a, image_b) {
            (Some(a), Some(b)) => Ok(GenMap::new(a, b)),
            _ => Err(Error::Parse {
                offset: text.len(),
                message: "a map needs images for both a and b".into(),
            }),
        }
    }
}

/// Exponent-sum matrix of a map; rows are the images of a and b.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AbelMatrix(pub [[i64; 2]; 2]);

impl AbelMatrix {
    pub fn det(&self) -> i64 {
        let m = self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// Row-vector product: the matrix of `compose(m1, m2)` is
    /// `m1.abel_matrix().mul(&m2.abel_matrix())`.
    pub fn mul(&self, other: &AbelMatrix) -> AbelMatrix {
        let (x, y) = (self.0, other.0);
        let mut out = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
            }
        }
        AbelMatrix(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Slot {
    First,
    Second,
}

/// One elementary Nielsen move: the `target` element is multiplied by the
/// other element (inverted if `inverse`) on the left or on the right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NielsenMove {
    pub target: Slot,
    pub left: bool,
    pub inverse: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NielsenReduction {
    pub is_basis: bool,
    pub reduced: (Word, Word),
    pub trace: Vec<NielsenMove>,
}

/// Greedy Nielsen reduction of a pair: applies the move that shortens the
/// pair the most until no move shortens it.
pub fn nielsen_reduce_pair(u: &Word, v: &Word) -> NielsenReduction {
    let (mut u, mut v) = (u.clone(), v.clone());
    let mut trace = Vec::new();
    loop {
        if u.is_identity() || v.is_identity() {
            break;
        }
        let total = u.len() + v.len();
        let mut best: Option<(usize, NielsenMove, Word)> = None;
        for target in [Slot::First, Slot::Second] {
            let (t, o) = match target {
                Slot::First => (&u, &v),
                Slot::Second => (&v, &u),
            };
            for left in [false, true] {
                for inverse in [false, true] {
                    let factor = if inverse { o.inverse() } else { o.clone() };
                    let cand = if left { factor.mul(t) } else { t.mul(&factor) };
                    let new_total = cand.len() + o.len();
                    if new_total < total && best.as_ref().is_none_or(|b| new_total < b.0) {
                        best = Some((new_total, NielsenMove { target, left, inverse }, cand));
                    }
                }
            }
        }
        match best {
            Some((_, mv, cand)) => {
                match mv.target {
                    Slot::First => u = cand,
                    Slot::Second => v = cand,
                }
                trace.push(mv);
            }
            None => break,
        }
    }
    let is_basis = u.len() == 1 && v.len() == 1 && u.syllables()[0].gen != v.syllables()[0].gen;
    NielsenReduction { is_basis, reduced: (u, v), trace }
}

/// Solutions of `w⁻¹ x w = y`, as `(w₀, z)` where every solution is `zᵗ w₀`.
fn conjugacy_solutions(x: &Word, y: &Word) -> Option<(Word, Word, Vec<usize>)> {
    let (core1, c1) = x.cyclic_reduce();
    let (core2, c2) = y.cyclic_reduce();
    let l1 = core1.to_letters();
    let l2 = core2.to_letters();
    if l1.len() != l2.len() || l1.is_empty() {
        return None;
    }
    let n = l1.len();
    let shift = (0..n).find(|&j| (0..n).all(|i| l2[i] == l1[(i + j) % n]))?;
    let r = Word::from_letters(l1[..shift].iter().copied());
    let w0 = c1.mul(&r).mul(&c2.inverse());
    let root = core1.proper_power().root;
    let z = c1.mul(&root).mul(&c1.inverse());
    let sizes = vec![c1.len(), c2.len(), r.len(), root.len()];
    Some((w0, z, sizes))
}

/// Decides whether `m1` and `m2` differ by an inner automorphism of F(a, b),
/// returning `w` with `m2 = m1 · γ_w` (that is, `m2(x) = w⁻¹ m1(x) w`).
pub fn mod_inn_equal(m1: &GenMap, m2: &GenMap) -> Result<Option<Word>> {
    if m1.image_a.is_identity()
        || m1.image_b.is_identity()
        || m2.image_a.is_identity()
        || m2.image_b.is_identity()
    {
        return Err(Error::TrivialImage);
    }
    let Some((w0, z, sizes)) = conjugacy_solutions(&m1.image_a, &m2.image_a) else {
        return Ok(None);
    };
    let (c1, c2, r, rho) = (sizes[0], sizes[1], sizes[2], sizes[3]);
    // ρ^{-t} (c1⁻¹ B1 c1) ρ^t grows linearly in |t| once it exceeds this window
    let span = m1.image_b.len() + m2.image_b.len() + 2 * (c1 + c2 + r) + 2 * rho;
    let bound = (span / rho + 2) as i64;
    let check = |t: i64| {
        let w = z.pow(t).mul(&w0);
        (m1.image_b.conjugate_by(&w) == m2.image_b).then_some(w)
    };
    for t in 0..=bound {
        if let Some(w) = check(t) {
            return Ok(Some(w));
        }
        if t > 0 {
            if let Some(w) = check(-t) {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn family_examples() {
        assert_eq!(GenMap::delta(1), GenMap::new(w("a b"), w("b")));
        assert_eq!(GenMap::alpha(0), GenMap::new(w("A"), w("b")));
        assert_eq!(GenMap::delta(0), GenMap::identity());
        assert_eq!(GenMap::family(Family::Psi, 0), Err(Error::PsiZero));
        assert_eq!(GenMap::family(Family::Psi, 3).unwrap(), GenMap::new(w("a"), w("b^3")));
    }

    #[test]
    fn apply_examples() {
        let s = w("a b A b^2");
        assert_eq!(GenMap::delta(1).apply(&s), s);
        assert_eq!(GenMap::beta(0).apply(&s), w("a B A B^2"));
        assert_eq!(GenMap::conjugation(&w("b")).apply(&w("a")), w("B a b"));
    }

    #[test]
    fn compose_examples() {
        for (i, j) in [(0, 0), (2, -3), (-1, 4)] {
            let c = compose(&GenMap::beta(i), &GenMap::beta(j));
            assert_eq!(c, GenMap::new(Word::from_syllables([(Gen::A, 1), (Gen::B, j - i)]), w("b")));
            assert_eq!(c.tag(), &MapTag::Family(Family::Delta, j - i));
        }
        for i in [-2, 0, 3] {
            let c = compose(&GenMap::zeta(i), &GenMap::zeta(i));
            let expected = Word::from_syllables([(Gen::B, -i), (Gen::A, 1), (Gen::B, -i)]);
            assert_eq!(c, GenMap::new(expected, w("b")));
        }
        let m = GenMap::new(w("a b A"), w("b^2 a"));
        assert_eq!(compose(&GenMap::identity(), &m), m);
        assert_eq!(compose(&m, &GenMap::identity()), m);
    }

    #[test]
    fn abel_matrix_examples() {
        for k in [-3, 0, 5] {
            assert_eq!(GenMap::alpha(k).abel_matrix(), AbelMatrix([[-1, k], [0, 1]]));
            assert_eq!(GenMap::delta(k).abel_matrix(), AbelMatrix([[1, k], [0, 1]]));
            assert_eq!(GenMap::zeta(k).abel_matrix(), AbelMatrix([[-1, k], [0, -1]]));
        }
    }

    #[test]
    fn nielsen_examples() {
        let r = nielsen_reduce_pair(&w("a"), &w("b"));
        assert!(r.is_basis);
        assert!(r.trace.is_empty());
        let r = nielsen_reduce_pair(&w("a b"), &w("b"));
        assert!(r.is_basis);
        assert_eq!(r.reduced, (w("a"), w("b")));
        assert_eq!(r.trace, vec![NielsenMove { target: Slot::First, left: false, inverse: true }]);
        let r = nielsen_reduce_pair(&w("a^2"), &w("b"));
        assert!(!r.is_basis);
        assert!(r.trace.is_empty());
        assert!(!nielsen_reduce_pair(&w("a b"), &w("b a")).is_basis);
        assert!(!nielsen_reduce_pair(&w("a"), &w("a")).is_basis);
    }

    #[test]
    fn mod_inn_examples() {
        for (i, j) in [(0, 0), (3, 1), (-2, 4), (5, -5)] {
            let lhs = compose(&GenMap::alpha(i), &GenMap::alpha(j));
            let wit = mod_inn_equal(&lhs, &GenMap::delta(i - j)).unwrap();
            assert_eq!(wit, Some(Word::power_of(Gen::B, -j)));
        }
        let m = GenMap::new(w("a b A"), w("b^2 a"));
        assert_eq!(mod_inn_equal(&m, &m).unwrap(), Some(Word::identity()));
        assert_eq!(mod_inn_equal(&GenMap::delta(1), &GenMap::delta(2)).unwrap(), None);
        let t = GenMap::new(Word::identity(), w("b"));
        assert_eq!(mod_inn_equal(&t, &m), Err(Error::TrivialImage));
    }

    #[test]
    fn mod_inn_finds_long_conjugators() {
        let m = GenMap::new(w("a b^2 A b"), w("b a B"));
        let c = w("a b a B^3 a^2");
        let conj = compose(&m, &GenMap::conjugation(&c));
        let wit = mod_inn_equal(&m, &conj).unwrap().expect("conjugate maps");
        assert_eq!(m.image_a().conjugate_by(&wit), *conj.image_a());
        assert_eq!(m.image_b().conjugate_by(&wit), *conj.image_b());
    }

    #[test]
    fn parse_maps() {
        assert_eq!("beta(0)".parse::<GenMap>().unwrap(), GenMap::beta(0));
        assert_eq!(" delta( -2 ) ".parse::<GenMap>().unwrap(), GenMap::delta(-2));
        let m: GenMap = "a -> a b; b -> B".parse().unwrap();
        assert_eq!(m, GenMap::beta(1));
        assert_eq!(m.tag(), &MapTag::Family(Family::Beta, 1));
        assert_eq!(m.to_string().parse::<GenMap>().unwrap(), m);
        assert!("a -> a c; b -> b".parse::<GenMap>().is_err());
        assert!("a -> a".parse::<GenMap>().is_err());
        assert!("gamma(2)".parse::<GenMap>().is_err());
    }
}
