//! Rewriting a relator so that `a` has exponent sum zero.
//!
//! The exponent-sum vector `(σ_a, σ_b)` is driven to `(0, ±gcd)` by a
//! Euclidean descent using the Nielsen maps `a ↦ abᵗ` and `b ↦ baᵗ`,
//! followed by a swap `a ↔ b` when the zero lands on the b-coordinate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{compose, GenMap};
use crate::words::{Gen, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BalanceFlags {
    pub primitive: bool,
    pub in_derived: bool,
}

/// A relator `s` with `σ_a(s) = 0` together with the automorphism of F(a, b)
/// that carried the original relator onto it (up to conjugacy and inversion).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalancedPresentation {
    pub s: Word,
    pub n: i64,
    pub basis_change: GenMap,
    pub flags: BalanceFlags,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    Derived,
    Primitive,
    Generic,
}

impl BalancedPresentation {
    pub fn branch(&self) -> Branch {
        detect_branch(self)
    }

    /// Order of the torsion factor of the abelianization, `n·|σ_b(s)|`.
    pub fn abelian_torsion(&self) -> i64 {
        self.n * self.s.exponent_sum(Gen::B).abs()
    }

    /// `sⁿ` as a word.
    pub fn relator(&self) -> Word {
        self.s.pow(self.n)
    }
}

pub fn detect_branch(bp: &BalancedPresentation) -> Branch {
    if bp.flags.in_derived {
        Branch::Derived
    } else if bp.flags.primitive {
        Branch::Primitive
    } else {
        Branch::Generic
    }
}

/// The multiplier `t` minimizing `|q + t·p|`, ties broken toward smaller `|t|`.
fn euclid_step(q: i64, p: i64) -> i64 {
    let t0 = -(q / p);
    [t0 - 1, t0, t0 + 1]
        .into_iter()
        .min_by_key(|&t| ((q + t * p).abs(), t.abs()))
        .unwrap()
}

/// Balances `r` so that `a` has exponent sum zero in the rewritten relator.
pub fn balance_relator(r: &Word, n: i64) -> Result<BalancedPresentation> {
    if n <= 1 {
        return Err(Error::InvalidExponent(n));
    }
    if r.is_identity() {
        return Err(Error::EmptyRelator);
    }
    if r.is_proper_power() {
        return Err(Error::ProperPower(r.to_string()));
    }
    let (mut p, mut q) = (r.exponent_sum(Gen::A), r.exponent_sum(Gen::B));
    let mut change = GenMap::identity();
    if p == 0 && q == 0 {
        let (core, _) = r.cyclic_reduce();
        return Ok(BalancedPresentation {
            s: core,
            n,
            basis_change: change,
            flags: BalanceFlags { primitive: false, in_derived: true },
        });
    }
    while p != 0 && q != 0 {
        if p.abs() <= q.abs() {
            // a ↦ abᵗ sends (p, q) to (p, q + t·p)
            let t = euclid_step(q, p);
            let step = GenMap::new(Word::from_syllables([(Gen::A, 1), (Gen::B, t)]), Word::b());
            change = compose(&change, &step);
            q += t * p;
        } else {
            // b ↦ baᵗ sends (p, q) to (p + t·q, q)
            let t = euclid_step(p, q);
            let step = GenMap::new(Word::a(), Word::from_syllables([(Gen::B, 1), (Gen::A, t)]));
            change = compose(&change, &step);
            p += t * q;
        }
    }
    if p != 0 {
        change = compose(&change, &GenMap::swap());
    }
    let (mut s, _) = change.apply(r).cyclic_reduce();
    let mut primitive = false;
    if s.len() == 1 && s.contains_gen(Gen::B) {
        primitive = true;
        if s.exponent_sum(Gen::B) < 0 {
            change = compose(&change, &GenMap::beta(0));
            s = Word::b();
        }
    }
    debug_assert_eq!(s.exponent_sum(Gen::A), 0);
    Ok(BalancedPresentation {
        s,
        n,
        basis_change: change,
        flags: BalanceFlags { primitive, in_derived: false },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::cyclically_equal;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn euclid_step_strictly_decreases() {
        for p in [-7i64, -3, -1, 1, 2, 5] {
            for q in -20i64..=20 {
                let t = euclid_step(q, p);
                assert!((q + t * p).abs() * 2 <= p.abs(), "q={q} p={p} t={t}");
            }
        }
        // tie at q/p = 2.5 goes to the smaller multiplier
        assert_eq!(euclid_step(5, 2), -2);
        assert_eq!(euclid_step(-5, 2), 2);
    }

    #[test]
    fn balance_examples() {
        let bp = balance_relator(&w("a^2 b^2"), 2).unwrap();
        assert_eq!(bp.s, w("b A b a"));
        assert_eq!(bp.s.exponent_sum(Gen::B), 2);
        let replay = bp.basis_change.apply(&w("a^2 b^2"));
        assert!(cyclically_equal(&replay, &bp.s));

        let bp = balance_relator(&w("a b A b^2"), 3).unwrap();
        assert_eq!(bp.s, w("a b A b^2"));
        assert_eq!(bp.basis_change, GenMap::identity());
        assert_eq!(detect_branch(&bp), Branch::Generic);

        let bp = balance_relator(&w("a^2 b a b"), 2).unwrap();
        assert!(bp.flags.primitive);
        assert_eq!(bp.s, w("b"));
        assert_eq!(detect_branch(&bp), Branch::Primitive);
        assert_eq!(bp.basis_change.abel_matrix().det().abs(), 1);
    }

    #[test]
    fn inverse_generator_is_normalized_to_b() {
        for r in ["B", "A", "a", "a b^3", "A B A"] {
            let bp = balance_relator(&w(r), 4).unwrap();
            assert!(bp.flags.primitive, "{r}");
            assert_eq!(bp.s, w("b"), "{r}");
            let (replay, _) = bp.basis_change.apply(&w(r)).cyclic_reduce();
            assert_eq!(replay, w("b"), "{r}");
        }
    }

    #[test]
    fn derived_relators_are_left_alone() {
        let bp = balance_relator(&w("a b A B"), 2).unwrap();
        assert!(bp.flags.in_derived);
        assert_eq!(detect_branch(&bp), Branch::Derived);
        let bp = balance_relator(&w("a b A B a^2 b A^2 B"), 2).unwrap();
        assert_eq!(bp.s.exponent_sum(Gen::B), 0);
        assert!(bp.s.is_cyclically_reduced());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(balance_relator(&w("a b a b"), 2), Err(Error::ProperPower("a b a b".into())));
        assert_eq!(balance_relator(&Word::identity(), 2), Err(Error::EmptyRelator));
        assert_eq!(balance_relator(&w("a b"), 1), Err(Error::InvalidExponent(1)));
    }

    #[test]
    fn balanced_input_is_a_fixed_point() {
        for r in ["a b A b^2", "a^2 b A^2 b", "A b^3 a B"] {
            let bp = balance_relator(&w(r), 2).unwrap();
            assert_eq!(bp.basis_change, GenMap::identity());
            assert_eq!(bp.s, w(r));
        }
    }
}
