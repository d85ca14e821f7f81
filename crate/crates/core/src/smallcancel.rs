//! Small-cancellation presentations on two generators.
//!
//! Pieces are common prefixes of distinct members of the symmetrized set;
//! `C′(λ)` is checked with strict inequality. Dehn's algorithm replaces the
//! leftmost, then longest, subword that is more than half of a member.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::Serialize;

use crate::classify::{euler_phi, infinite_class, OutClass, Witnesses};
use crate::error::{Error, Result};
use crate::maps::GenMap;
use crate::words::{Cone, Gen, Letter, Word};

/// All cyclic shifts of all relators and their inverses, sorted and distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetrizedSet {
    members: Vec<Vec<Letter>>,
}

impl SymmetrizedSet {
    pub fn members(&self) -> impl Iterator<Item = Word> + '_ {
        self.members.iter().map(|m| Word::from_letters(m.iter().copied()))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.members.binary_search(&w.to_letters()).is_ok()
    }

    /// Longest common prefix of `members[i]` with any other member.
    fn piece_at(&self, i: usize) -> usize {
        let lcp = |x: &[Letter], y: &[Letter]| x.iter().zip(y).take_while(|(p, q)| p == q).count();
        let m = &self.members;
        let before = if i > 0 { lcp(&m[i - 1], &m[i]) } else { 0 };
        let after = if i + 1 < m.len() { lcp(&m[i], &m[i + 1]) } else { 0 };
        before.max(after)
    }
}

pub fn symmetrize(relators: &[Word]) -> SymmetrizedSet {
    let mut set = BTreeSet::new();
    for r in relators {
        let (core, _) = r.cyclic_reduce();
        for w in [core.clone(), core.inverse()] {
            let letters = w.to_letters();
            for i in 0..letters.len() {
                set.insert(letters[i..].iter().chain(&letters[..i]).copied().collect::<Vec<_>>());
            }
        }
    }
    SymmetrizedSet { members: set.into_iter().collect() }
}

/// Length of the longest piece; sorted neighbours realize every maximal prefix.
pub fn max_piece_length(ss: &SymmetrizedSet) -> usize {
    (0..ss.members.len()).map(|i| ss.piece_at(i)).max().unwrap_or(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BOrder {
    Finite(i64),
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiRelatorPresentation {
    pub relators: Vec<Word>,
    /// User-supplied order of `b`; `None` defers to syntactic detection.
    pub b_order: Option<BOrder>,
}

impl MultiRelatorPresentation {
    pub fn new(relators: Vec<Word>, b_order: Option<BOrder>) -> Result<MultiRelatorPresentation> {
        if relators.is_empty() || relators.iter().any(Word::is_identity) {
            return Err(Error::EmptyRelator);
        }
        if let Some(BOrder::Finite(n)) = b_order {
            if n < 1 {
                return Err(Error::InvalidExponent(n));
            }
        }
        Ok(MultiRelatorPresentation { relators, b_order })
    }

    pub fn symmetrized(&self) -> SymmetrizedSet {
        symmetrize(&self.relators)
    }

    /// Smallest `|m|` over relators that are cyclically `bᵐ`.
    pub fn detected_b_order(&self) -> Option<i64> {
        self.relators
            .iter()
            .map(|r| r.cyclic_reduce().0)
            .filter(|c| !c.contains_gen(Gen::A))
            .map(|c| c.exponent_sum(Gen::B).abs())
            .min()
    }

    pub fn effective_b_order(&self) -> BOrder {
        match (self.b_order, self.detected_b_order()) {
            (Some(o), _) => o,
            (None, Some(n)) => BOrder::Finite(n),
            (None, None) => BOrder::Infinite,
        }
    }
}

impl FromStr for MultiRelatorPresentation {
    type Err = Error;

    /// One relator per line; blank lines and `#` comments are skipped; an
    /// optional `b_order = <n|infinite>` header sets the order of `b`.
    fn from_str(text: &str) -> Result<Self> {
        let mut relators = Vec::new();
        let mut b_order = None;
        let mut offset = 0;
        for raw in text.split_inclusive('\n') {
            let line = raw.split('#').next().unwrap().trim();
            if let Some(rest) = line.strip_prefix("b_order") {
                let value = rest.trim_start().strip_prefix('=').map(str::trim).ok_or_else(|| Error::Parse {
                    offset,
                    message: "expected `b_order = <n|infinite>`".into(),
                })?;
                b_order = Some(match value {
                    "infinite" => BOrder::Infinite,
                    v => BOrder::Finite(v.parse().map_err(|_| Error::Parse {
                        offset,
                        message: format!("bad b_order value {v:?}"),
                    })?),
                });
            } else if !line.is_empty() {
                let lead = offset + raw.len() - raw.trim_start().len();
                relators.push(line.parse::<Word>().map_err(|e| match e {
                    Error::Parse { offset: o, message } => Error::Parse { offset: lead + o, message },
                    other => other,
                })?);
            }
            offset += raw.len();
        }
        MultiRelatorPresentation::new(relators, b_order)
    }
}

/// `C′(λ)`: every piece is strictly shorter than `λ` times each member it prefixes.
pub fn satisfies_metric(p: &MultiRelatorPresentation, lambda: Ratio<i64>) -> bool {
    let ss = p.symmetrized();
    (0..ss.members.len()).all(|i| Ratio::from_integer(ss.piece_at(i) as i64) < lambda * ss.members[i].len() as i64)
}

/// Dehn's algorithm; the result has no subword exceeding half a member.
pub fn dehn_reduce(w: &Word, ss: &SymmetrizedSet) -> Word {
    let mut cur = w.to_letters();
    'outer: loop {
        for i in 0..cur.len() {
            let mut best: Option<(usize, &Vec<Letter>)> = None;
            for m in &ss.members {
                let l = cur[i..].iter().zip(m).take_while(|(p, q)| p == q).count();
                if 2 * l > m.len() && best.is_none_or(|(bl, _)| l > bl) {
                    best = Some((l, m));
                }
            }
            if let Some((l, m)) = best {
                let replacement = m[l..].iter().rev().map(|x| x.inv());
                let next: Vec<Letter> = cur[..i].iter().copied().chain(replacement).chain(cur[i + l..].iter().copied()).collect();
                cur = Word::from_letters(next).to_letters();
                continue 'outer;
            }
        }
        return Word::from_letters(cur);
    }
}

pub fn is_trivial_word(w: &Word, ss: &SymmetrizedSet) -> bool {
    dehn_reduce(w, ss).is_identity()
}

/// Which of `α₀, β₀, ζ₀` carry every relator onto a free conjugate of a member.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScWitnesses {
    pub alpha: bool,
    pub beta: bool,
    pub zeta: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScOutcome {
    /// All relators lie in the derived subgroup.
    ResiduallyFiniteOnly,
    /// `b` of infinite order: the class given by the witnessed maps, with the
    /// maps that the syntactic test could not confirm listed as unresolved.
    Infinite { out_class: OutClass, witnessed: ScWitnesses, unresolved: Vec<String> },
    /// `b` of order `n`: `Out(G)` embeds in `Out(⟨a, b; bⁿ⟩)`, of order
    /// `order_bound = 2nφ(n)`, and `n` divides `|Out(G)|`.
    FiniteBOrder { n: i64, order_bound: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScReport {
    pub max_piece: usize,
    pub b_order: BOrder,
    pub outcome: ScOutcome,
}

impl fmt::Display for ScReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "max piece length: {}", self.max_piece)?;
        match &self.outcome {
            ScOutcome::ResiduallyFiniteOnly => {
                writeln!(f, "relators lie in the derived subgroup: Out(G) is residually finite (no classification)")
            }
            ScOutcome::Infinite { out_class, witnessed, unresolved } => {
                writeln!(f, "b has infinite order: Out(G) = {out_class}")?;
                writeln!(f, "witnessed: alpha={} beta={} zeta={}", witnessed.alpha, witnessed.beta, witnessed.zeta)?;
                if !unresolved.is_empty() {
                    writeln!(f, "not witnessed by the syntactic test: {}", unresolved.join(", "))?;
                }
                Ok(())
            }
            ScOutcome::FiniteBOrder { n, order_bound } => writeln!(
                f,
                "b has order {n}: Out(G) <= Out(<a, b; b^{n}>) of order {order_bound}, and {n} divides |Out(G)|"
            ),
        }
    }
}

/// Each hypothesis of the classification theorem that `p` fails.
pub fn sc_hypothesis_failures(p: &MultiRelatorPresentation) -> Vec<String> {
    let mut failures = Vec::new();
    if !satisfies_metric(p, Ratio::new(1, 24)) {
        failures.push("symmetrized set does not satisfy C'(1/24)".to_string());
    }
    for r in &p.relators {
        if !r.is_proper_power() {
            failures.push(format!("relator {r} is not a proper power"));
        }
        if r.exponent_sum(Gen::A) != 0 {
            failures.push(format!("relator {r} has nonzero a-exponent sum"));
        }
        if r.height_membership() == Cone::Neither {
            failures.push(format!("relator {r} lies in neither <aba^-1, b> nor <a^-1ba, b>"));
        }
    }
    failures
}

fn maps_into_members(m: &GenMap, relators: &[Word], ss: &SymmetrizedSet) -> bool {
    relators.iter().all(|r| ss.contains(&m.apply(r).cyclic_reduce().0))
}

pub fn classify_sc_out(p: &MultiRelatorPresentation) -> Result<ScReport> {
    let failures = sc_hypothesis_failures(p);
    if !failures.is_empty() {
        return Err(Error::Hypotheses(failures));
    }
    let ss = p.symmetrized();
    let max_piece = max_piece_length(&ss);
    let b_order = p.effective_b_order();
    let outcome = if p.relators.iter().all(|r| r.exponent_sum(Gen::B) == 0) {
        ScOutcome::ResiduallyFiniteOnly
    } else {
        match b_order {
            BOrder::Finite(n) => ScOutcome::FiniteBOrder { n, order_bound: 2 * n * euler_phi(n).max(1) },
            BOrder::Infinite => {
                let witnessed = ScWitnesses {
                    alpha: maps_into_members(&GenMap::alpha(0), &p.relators, &ss),
                    beta: maps_into_members(&GenMap::beta(0), &p.relators, &ss),
                    zeta: maps_into_members(&GenMap::zeta(0), &p.relators, &ss),
                };
                let w = Witnesses {
                    delta_in: true,
                    alpha_ks: witnessed.alpha.then_some(0).into_iter().collect(),
                    beta_ks: witnessed.beta.then_some(0).into_iter().collect(),
                    zeta0_in: witnessed.zeta,
                };
                let unresolved = [("alpha", witnessed.alpha), ("beta", witnessed.beta), ("zeta", witnessed.zeta)]
                    .into_iter()
                    .filter(|(_, ok)| !ok)
                    .map(|(name, _)| name.to_string())
                    .collect();
                ScOutcome::Infinite { out_class: infinite_class(&w)?, witnessed, unresolved }
            }
        }
    };
    Ok(ScReport { max_piece, b_order, outcome })
}
