//! Brute-force cross-checks for the classification shortcuts.
//!
//! Nothing here uses the candidate ranges, canonical rotations or the
//! syllable-level scan; each check works directly on letter sequences.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::autdetect::{is_relator_auto, AutVerdict};
use crate::classify::{alpha_candidates, beta_candidates};
use crate::error::{Error, Result};
use crate::maps::{Family, GenMap};
use crate::words::{Cone, CyclicWord, Gen, Letter, ScanStats, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleConfig {
    pub k_window: i64,
    pub max_word_len: usize,
    pub sample_count: usize,
    pub rng_seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { k_window: 10, max_word_len: 40, sample_count: 200, rng_seed: 1 }
    }
}

/// Which side of the δ-dichotomy a sampled relator must land on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BranchFilter {
    Any,
    /// Height range at least 2.
    Finite,
    /// Inside `⟨aba⁻¹, b⟩` or `⟨a⁻¹ba, b⟩`.
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Constraints {
    /// `σ_a = 0`, `σ_b ≠ 0` and at least one a-letter.
    pub balanced: bool,
    pub branch: BranchFilter,
}

/// Every family member that passed, per family.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FamilyPasses {
    pub alpha: BTreeSet<i64>,
    pub beta: BTreeSet<i64>,
    pub zeta: BTreeSet<i64>,
    pub delta: BTreeSet<i64>,
}

/// The exhaustive window `±(|s| + 5)`.
pub fn default_window(s: &Word) -> RangeInclusive<i64> {
    let h = s.len() as i64 + 5;
    -h..=h
}

fn rotations(letters: &[Letter]) -> impl Iterator<Item = Vec<Letter>> + '_ {
    (0..letters.len()).map(move |i| letters[i..].iter().chain(&letters[..i]).copied().collect())
}

/// Compares the cyclic reduction of `m(s)` against every rotation of `s` and `s⁻¹`.
pub fn brute_verdict(s: &Word, m: &GenMap) -> AutVerdict {
    let mut image = m.apply(s).to_letters();
    while image.len() > 1 && image[0].is_inverse_of(image[image.len() - 1]) {
        image.remove(0);
        image.pop();
    }
    let s = s.to_letters();
    let s_inv: Vec<Letter> = s.iter().rev().map(|l| l.inv()).collect();
    if rotations(&s).any(|r| r == image) {
        AutVerdict::FixesRelator
    } else if rotations(&s_inv).any(|r| r == image) {
        AutVerdict::InvertsRelator
    } else {
        AutVerdict::NotAut
    }
}

fn require_generic(s: &Word) -> Result<()> {
    if !s.is_cyclically_reduced() {
        return Err(Error::Precondition(format!("{s} is not cyclically reduced")));
    }
    if !s.contains_gen(Gen::A) {
        return Err(Error::NoALetters);
    }
    if s.exponent_sum(Gen::A) != 0 || s.exponent_sum(Gen::B) == 0 {
        return Err(Error::Precondition(format!("{s} is not balanced with σ_b ≠ 0")));
    }
    Ok(())
}

/// Tests `α_k, β_k, ζ_k, δ_k` for every `k` in `window` and records the passes.
pub fn enumerate_family_auts(s: &Word, window: RangeInclusive<i64>) -> Result<FamilyPasses> {
    require_generic(s)?;
    let mut passes = FamilyPasses::default();
    for k in window {
        for (family, set) in [
            (Family::Alpha, &mut passes.alpha),
            (Family::Beta, &mut passes.beta),
            (Family::Zeta, &mut passes.zeta),
            (Family::Delta, &mut passes.delta),
        ] {
            let m = GenMap::family(family, k)?;
            let verdict = is_relator_auto(s, &m)?;
            if verdict != brute_verdict(s, &m) {
                return Err(Error::TheoryViolation(format!("verdicts disagree on {s} under {m}")));
            }
            if verdict.is_aut() {
                set.insert(k);
            }
        }
    }
    Ok(passes)
}

fn widened(ks: &BTreeSet<i64>, widen: i64) -> RangeInclusive<i64> {
    ks.first().unwrap() - widen..=ks.last().unwrap() + widen
}

/// Whether every α/β pass in the widened candidate ranges is a candidate.
pub fn verify_candidate_ranges(s: &Word, widen: i64) -> Result<bool> {
    require_generic(s)?;
    if s.height_membership() != Cone::Neither {
        return Err(Error::Precondition(format!("{s} is in the infinite branch")));
    }
    let stats = CyclicWord::new(s).scan_extremes()?;
    let alphas = alpha_candidates(&stats)?;
    let betas = beta_candidates(&stats)?;
    let pa = enumerate_family_auts(s, widened(&alphas, widen))?;
    let pb = enumerate_family_auts(s, widened(&betas, widen))?;
    Ok(pa.alpha.is_subset(&alphas) && pb.beta.is_subset(&betas))
}

/// Scans every linear rotation of `s²` for same-sign a-letter pairs.
pub fn literal_power_scan(s: &Word) -> ScanStats {
    let sq = s.pow(2).to_letters();
    let mut stats = ScanStats::default();
    for rot in rotations(&sq) {
        let mut prev: Option<Letter> = None;
        let mut run = 0i64;
        for l in rot {
            if l.gen == Gen::B {
                run += l.sign();
                continue;
            }
            if prev == Some(l) {
                if l.inverse {
                    stats.record_minus(run);
                } else {
                    stats.record_plus(run);
                }
            }
            prev = Some(l);
            run = 0;
        }
    }
    stats
}

/// Whether the cyclic scan of `s` matches the literal scan of `s²`.
pub fn scan_power_crosscheck(s: &Word) -> Result<bool> {
    let (core, _) = s.cyclic_reduce();
    Ok(CyclicWord::new(&core).scan_extremes()? == literal_power_scan(&core))
}

/// Literal δ₁ test: some rotation `T` of `s` has `Tδ₁ = T` or `(aTa⁻¹)δ₁ = aTa⁻¹`
/// as reduced words. The second form covers relators in `⟨a⁻¹ba, b⟩`.
pub fn delta_syntactic(s: &Word) -> bool {
    let delta = GenMap::delta(1);
    let (core, _) = s.cyclic_reduce();
    (0..core.len().max(1)).any(|i| {
        let t = core.rotate_left(i);
        let shifted = Word::a().mul(&t).mul(&Word::a().inverse());
        delta.apply(&t) == t || delta.apply(&shifted) == shifted
    })
}

/// Whitehead moves of rank two, up to inner automorphisms.
fn whitehead_moves() -> Vec<GenMap> {
    let (a, b) = (Word::a(), Word::b());
    let mut moves = Vec::new();
    for e in [1, -1] {
        let bb = Word::power_of(Gen::B, e);
        let aa = Word::power_of(Gen::A, e);
        moves.push(GenMap::new(a.mul(&bb), b.clone()));
        moves.push(GenMap::new(bb.mul(&a), b.clone()));
        moves.push(GenMap::new(a.clone(), b.mul(&aa)));
        moves.push(GenMap::new(a.clone(), aa.mul(&b)));
    }
    moves
}

/// Whitehead's algorithm: `w` is primitive iff length-reducing moves bring its
/// cyclic reduction down to a single letter.
pub fn is_primitive_whitehead(w: &Word) -> bool {
    let moves = whitehead_moves();
    let (mut cur, _) = w.cyclic_reduce();
    loop {
        if cur.len() == 1 {
            return true;
        }
        let next = moves
            .iter()
            .map(|m| m.apply(&cur).cyclic_reduce().0)
            .filter(|x| x.len() < cur.len())
            .min_by_key(|x| x.len());
        match next {
            Some(x) => cur = x,
            None => return false,
        }
    }
}

/// Seeded rejection sampler for relators.
pub struct RelatorSampler {
    cfg: OracleConfig,
    rng: ChaCha8Rng,
}

const MAX_REJECTIONS: usize = 1_000_000;

impl RelatorSampler {
    pub fn new(cfg: OracleConfig) -> RelatorSampler {
        RelatorSampler { cfg, rng: ChaCha8Rng::seed_from_u64(cfg.rng_seed) }
    }

    /// A uniformly random freely reduced word of length `len`.
    fn reduced_word(&mut self, len: usize) -> Word {
        let all = Letter::all();
        let mut letters = vec![all[self.rng.gen_range(0..4)]];
        while letters.len() < len {
            let prev = *letters.last().unwrap();
            let choices: Vec<Letter> = all.into_iter().filter(|l| !l.is_inverse_of(prev)).collect();
            letters.push(choices[self.rng.gen_range(0..3)]);
        }
        Word::from_letters(letters)
    }

    /// A random element of `⟨aba⁻¹, b⟩` or `⟨a⁻¹ba, b⟩`, cyclically reduced.
    fn cone_word(&mut self) -> Word {
        let sign = if self.rng.gen_bool(0.5) { 1 } else { -1 };
        let a = Word::power_of(Gen::A, sign);
        let x = a.mul(&Word::b()).mul(&a.inverse());
        let blocks = self.rng.gen_range(1..=(self.cfg.max_word_len / 3).max(1));
        let mut w = Word::identity();
        for _ in 0..blocks {
            let e = self.rng.gen_range(-3i64..=3);
            let g = if self.rng.gen_bool(0.5) { x.clone() } else { Word::b() };
            let next = w.mul(&g.pow(e));
            if next.cyclic_reduce().0.len() > self.cfg.max_word_len {
                break;
            }
            w = next;
        }
        w.cyclic_reduce().0
    }

    fn accepts(w: &Word, c: Constraints) -> bool {
        if w.is_identity() || w.is_proper_power() || w.len() == 1 && w.contains_gen(Gen::B) {
            return false;
        }
        if c.balanced
            && (!w.contains_gen(Gen::A) || w.exponent_sum(Gen::A) != 0 || w.exponent_sum(Gen::B) == 0)
        {
            return false;
        }
        match c.branch {
            BranchFilter::Any => true,
            BranchFilter::Finite => w.height_membership() == Cone::Neither,
            BranchFilter::Infinite => w.height_membership() != Cone::Neither,
        }
    }

    /// Next relator meeting `c`; infinite-branch words are built inside a cone.
    pub fn sample(&mut self, c: Constraints) -> Result<Word> {
        for _ in 0..MAX_REJECTIONS {
            let w = if c.branch == BranchFilter::Infinite {
                self.cone_word()
            } else {
                let len = self.rng.gen_range(2..=self.cfg.max_word_len.max(2));
                let w = self.reduced_word(len);
                if !w.is_cyclically_reduced() {
                    continue;
                }
                w
            };
            if Self::accepts(&w, c) {
                return Ok(w);
            }
        }
        Err(Error::SamplingExhausted(MAX_REJECTIONS))
    }
}

/// The first relator of the seeded stream.
pub fn random_relator(cfg: OracleConfig, c: Constraints) -> Result<Word> {
    RelatorSampler::new(cfg).sample(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn family_enumeration_examples() {
        let p = enumerate_family_auts(&w("a b A b^2"), -10..=10).unwrap();
        assert_eq!(p.delta, (-10..=10).collect());
        assert_eq!(p.beta, (-10..=10).collect());
        assert!(p.alpha.is_empty() && p.zeta.is_empty());

        let p = enumerate_family_auts(&w("a^2 b A^2 b"), -10..=10).unwrap();
        assert_eq!(p.alpha, BTreeSet::from([0]));
        assert_eq!(p.beta, BTreeSet::from([0]));
        assert_eq!(p.zeta, BTreeSet::from([0]));
        assert_eq!(p.delta, BTreeSet::from([0]));

        assert_eq!(enumerate_family_auts(&w("b^3"), -2..=2), Err(Error::NoALetters));
    }

    #[test]
    fn candidate_range_examples() {
        assert_eq!(verify_candidate_ranges(&w("a^2 b A^2 b"), 10), Ok(true));
        assert_eq!(verify_candidate_ranges(&w("a^2 b A b^2 A b^3"), 10), Ok(true));
        assert!(matches!(verify_candidate_ranges(&w("a b A b^2"), 10), Err(Error::Precondition(_))));
    }

    #[test]
    fn scan_crosscheck_examples() {
        for s in ["a^2 b A^2 b", "a b A b^2", "a^2 b A b^2 A b^3"] {
            assert_eq!(scan_power_crosscheck(&w(s)), Ok(true), "{s}");
        }
        assert!(literal_power_scan(&w("a b A b^2")).is_empty());
    }

    #[test]
    fn delta_syntactic_examples() {
        assert!(delta_syntactic(&w("a b A b^2")));
        assert!(delta_syntactic(&w("A b a b^2")));
        assert!(delta_syntactic(&w("b^2 A b a")));
        assert!(!delta_syntactic(&w("a^2 b A^2 b")));
        // a⁻¹ba is moved by δ₁ even though the relator lies in ⟨a⁻¹ba, b⟩
        let t = w("A b a b^2");
        assert_ne!(GenMap::delta(1).apply(&t), t);
    }

    #[test]
    fn whitehead_examples() {
        for p in ["a", "B", "a b", "a^2 b a b", "a b^3", "A B A", "a b a b^2"] {
            assert!(is_primitive_whitehead(&w(p)), "{p}");
        }
        for q in ["a^2", "a b A B", "a^2 b^2", "a b A b^2", "a^2 b A^2 b"] {
            assert!(!is_primitive_whitehead(&w(q)), "{q}");
        }
    }

    #[test]
    fn sampler_contracts() {
        let cfg = OracleConfig { rng_seed: 7, max_word_len: 20, ..Default::default() };
        let mut s1 = RelatorSampler::new(cfg);
        let mut s2 = RelatorSampler::new(cfg);
        for branch in [BranchFilter::Any, BranchFilter::Finite, BranchFilter::Infinite] {
            let c = Constraints { balanced: true, branch };
            for _ in 0..50 {
                let x = s1.sample(c).unwrap();
                assert_eq!(x, s2.sample(c).unwrap());
                assert_eq!(x.exponent_sum(Gen::A), 0);
                assert!(x.is_cyclically_reduced() && !x.is_proper_power() && x.len() <= 20);
                match branch {
                    BranchFilter::Finite => assert_eq!(x.height_membership(), Cone::Neither),
                    BranchFilter::Infinite => assert_ne!(x.height_membership(), Cone::Neither),
                    BranchFilter::Any => {}
                }
            }
        }
    }

    proptest! {
        #[test]
        fn power_scan_agrees(seed in any::<u64>()) {
            let cfg = OracleConfig { rng_seed: seed, max_word_len: 24, ..Default::default() };
            let s = random_relator(cfg, Constraints { balanced: true, branch: BranchFilter::Any }).unwrap();
            prop_assert_eq!(scan_power_crosscheck(&s), Ok(true));
        }

        #[test]
        fn brute_and_canonical_verdicts_agree(seed in any::<u64>(), f in 0usize..4, k in -4i64..=4) {
            let cfg = OracleConfig { rng_seed: seed, max_word_len: 16, ..Default::default() };
            let s = random_relator(cfg, Constraints { balanced: false, branch: BranchFilter::Any }).unwrap();
            let fam = [Family::Alpha, Family::Beta, Family::Zeta, Family::Delta][f];
            let m = GenMap::family(fam, k).unwrap();
            prop_assert_eq!(is_relator_auto(&s, &m).unwrap(), brute_verdict(&s, &m));
        }
    }
}
