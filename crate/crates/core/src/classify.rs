//! Classification of `Out(G)` for `G = ⟨a, b; Rⁿ⟩`, with presentations of
//! `Out(G)` and `Aut(G)`.
//!
//! After balancing, the generic case splits on whether `δ₁` is an
//! automorphism. If it is, `Out(G)` is infinite and determined by which of
//! `α₀, β₀, ζ₀` are automorphisms. Otherwise `Out(G)` is finite and only the
//! finitely many `α_k, β_k` allowed by the adjacency scan, plus `ζ₀`, need
//! testing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::autdetect::{relator_verdict, AutVerdict};
use crate::error::{Error, Result};
use crate::maps::{compose, mod_inn_equal, Family, GenMap};
use crate::normalize::{balance_relator, BalancedPresentation, Branch};
use crate::words::{cyclically_equal, CyclicWord, Gen, ScanStats, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OutClass {
    Trivial,
    C2,
    C2xC2,
    Z,
    ZxC2,
    Dinf,
    DinfxC2,
    /// `D_n ⋊ Aut(C_n)`, of order `2nφ(n)`.
    PrimitiveDnAutCn(i64),
    /// `Out(F(a, b)) ≅ GL(2, Z)`.
    DerivedCommutator,
    DerivedUnclassified,
}

impl OutClass {
    pub fn is_infinite(self) -> bool {
        matches!(
            self,
            OutClass::Z | OutClass::ZxC2 | OutClass::Dinf | OutClass::DinfxC2 | OutClass::DerivedCommutator
        )
    }
}

impl fmt::Display for OutClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutClass::Trivial => write!(f, "Trivial"),
            OutClass::C2 => write!(f, "C2"),
            OutClass::C2xC2 => write!(f, "C2xC2"),
            OutClass::Z => write!(f, "Z"),
            OutClass::ZxC2 => write!(f, "ZxC2"),
            OutClass::Dinf => write!(f, "Dinf"),
            OutClass::DinfxC2 => write!(f, "DinfxC2"),
            OutClass::PrimitiveDnAutCn(n) => write!(f, "PrimitiveDnAutCn({n})"),
            OutClass::DerivedCommutator => write!(f, "DerivedCommutator"),
            OutClass::DerivedUnclassified => write!(f, "DerivedUnclassified"),
        }
    }
}

impl Serialize for OutClass {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Which family members were found to be automorphisms of G.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Witnesses {
    #[serde(rename = "delta")]
    pub delta_in: bool,
    #[serde(rename = "alphas")]
    pub alpha_ks: BTreeSet<i64>,
    #[serde(rename = "betas")]
    pub beta_ks: BTreeSet<i64>,
    #[serde(rename = "zeta0")]
    pub zeta0_in: bool,
}

/// One step of the decision procedure, in execution order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum TraceStep {
    Balanced { s: Word, n: i64, basis_change: GenMap },
    Branch { branch: Branch },
    Commutator { matched: bool },
    DeltaTest { verdict: AutVerdict },
    Scan { stats: ScanStats },
    Candidates { alphas: Vec<i64>, betas: Vec<i64> },
    FamilyTest { family: Family, k: i64, verdict: AutVerdict },
    Decision { out_class: OutClass },
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceStep::Balanced { s, n, basis_change } => {
                write!(f, "balanced: S = {s}, n = {n}, basis change {basis_change}")
            }
            TraceStep::Branch { branch } => write!(f, "branch: {branch:?}"),
            TraceStep::Commutator { matched } => write!(f, "commutator match: {matched}"),
            TraceStep::DeltaTest { verdict } => write!(f, "delta(1): {verdict:?}"),
            TraceStep::Scan { stats } => write!(f, "scan: {stats}"),
            TraceStep::Candidates { alphas, betas } => {
                write!(f, "candidates: alpha k in {alphas:?}, beta k in {betas:?}")
            }
            TraceStep::FamilyTest { family, k, verdict } => {
                write!(f, "{}({k}): {verdict:?}", family.name())
            }
            TraceStep::Decision { out_class } => write!(f, "decision: {out_class}"),
        }
    }
}

/// A presentation `⟨ generators | relators ⟩` with relators kept symbolic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    pub iso_label: String,
}

impl GroupPresentation {
    fn new(generators: &[String], relators: Vec<String>, iso_label: impl Into<String>) -> GroupPresentation {
        GroupPresentation { generators: generators.to_vec(), relators, iso_label: iso_label.into() }
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨ {} | {} ⟩", self.generators.join(", "), self.relators.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub out_class: OutClass,
    pub witnesses: Witnesses,
    pub balanced: BalancedPresentation,
    pub scan: Option<ScanStats>,
    pub out_presentation: Option<GroupPresentation>,
    pub aut_presentation: Option<GroupPresentation>,
    pub note: Option<String>,
    pub trace: Vec<TraceStep>,
}

impl ClassificationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "out_class": self.out_class,
            "witnesses": self.witnesses,
            "balanced": {
                "s": self.balanced.s,
                "n": self.balanced.n,
                "basis_change": self.balanced.basis_change,
                "flags": self.balanced.flags,
            },
            "scan": self.scan,
            "presentations": {
                "out": self.out_presentation,
                "aut": self.aut_presentation,
            },
            "note": self.note,
            "trace": self.trace,
        })
    }

    /// Text rendering; `trace` appends the step list.
    pub fn render(&self, trace: bool) -> String {
        let mut out = String::new();
        let line = |out: &mut String, s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(&mut out, format!("out_class: {}", self.out_class));
        line(&mut out, format!("balanced: S = {} (n = {})", self.balanced.s, self.balanced.n));
        line(&mut out, format!("basis change: {}", self.balanced.basis_change));
        let w = &self.witnesses;
        line(
            &mut out,
            format!(
                "witnesses: delta={} alphas={:?} betas={:?} zeta0={}",
                w.delta_in, w.alpha_ks, w.beta_ks, w.zeta0_in
            ),
        );
        if let Some(scan) = &self.scan {
            line(&mut out, format!("scan: {scan}"));
        }
        if let Some(p) = &self.out_presentation {
            line(&mut out, format!("Out(G) = {p} ≅ {}", p.iso_label));
        }
        if let Some(p) = &self.aut_presentation {
            line(&mut out, format!("Aut(G) = {p} ≅ {}", p.iso_label));
        }
        if let Some(note) = &self.note {
            line(&mut out, format!("note: {note}"));
        }
        if trace {
            for (i, step) in self.trace.iter().enumerate() {
                line(&mut out, format!("  {:>2}. {step}", i + 1));
            }
        }
        out
    }
}

/// α-candidates `{−(max₊+min₊)} ∪ [min₋−min₊, max₋−max₊]`.
pub fn alpha_candidates(stats: &ScanStats) -> Result<BTreeSet<i64>> {
    let (min_p, max_p, min_m, max_m) = two_sided(stats)?;
    let mut ks: BTreeSet<i64> = (min_m - min_p..=max_m - max_p).collect();
    ks.insert(-(max_p + min_p));
    Ok(ks)
}

/// β-candidates `{max₊+min₊} ∪ [max₊−max₋, min₊−min₋]`.
pub fn beta_candidates(stats: &ScanStats) -> Result<BTreeSet<i64>> {
    let (min_p, max_p, min_m, max_m) = two_sided(stats)?;
    let mut ks: BTreeSet<i64> = (max_p - max_m..=min_p - min_m).collect();
    ks.insert(max_p + min_p);
    Ok(ks)
}

fn two_sided(stats: &ScanStats) -> Result<(i64, i64, i64, i64)> {
    stats
        .extremes()
        .ok_or_else(|| Error::TheoryViolation(format!("finite branch with a one-sided scan ({stats})")))
}

fn is_commutator(s: &Word) -> bool {
    let c = Word::a().mul(&Word::b()).mul(&Word::a().inverse()).mul(&Word::b().inverse());
    cyclically_equal(s, &c) || cyclically_equal(s, &c.inverse())
}

/// Class of an infinite-branch witness pattern (`δ₁` present).
pub fn infinite_class(w: &Witnesses) -> Result<OutClass> {
    let alpha = w.alpha_ks.contains(&0);
    let beta = w.beta_ks.contains(&0);
    match (alpha, beta, w.zeta0_in) {
        (false, false, false) => Ok(OutClass::Z),
        (false, false, true) => Ok(OutClass::ZxC2),
        (true, false, false) | (false, true, false) => Ok(OutClass::Dinf),
        (true, true, true) => Ok(OutClass::DinfxC2),
        _ => Err(Error::TheoryViolation(format!(
            "infinite branch with alpha={alpha} beta={beta} zeta={}",
            w.zeta0_in
        ))),
    }
}

/// Class of a finite-branch witness pattern (`δ₁` absent).
pub fn finite_class(w: &Witnesses) -> Result<OutClass> {
    let count = w.alpha_ks.len() + w.beta_ks.len() + usize::from(w.zeta0_in);
    let violation = || {
        Error::TheoryViolation(format!(
            "finite branch with alphas={:?} betas={:?} zeta0={}",
            w.alpha_ks, w.beta_ks, w.zeta0_in
        ))
    };
    match count {
        0 => Ok(OutClass::Trivial),
        1 => Ok(OutClass::C2),
        3 if w.zeta0_in && w.alpha_ks.len() == 1 && w.beta_ks.len() == 1 => {
            let (a, b) = (w.alpha_ks.first().unwrap(), w.beta_ks.first().unwrap());
            if *a == -*b {
                Ok(OutClass::C2xC2)
            } else {
                Err(violation())
            }
        }
        _ => Err(violation()),
    }
}

fn family_test(s: &Word, family: Family, k: i64, trace: &mut Vec<TraceStep>) -> bool {
    let verdict = relator_verdict(s, &GenMap::family(family, k).expect("family maps with k in range"));
    trace.push(TraceStep::FamilyTest { family, k, verdict });
    verdict.is_aut()
}

/// Classifies `Out(⟨a, b; rⁿ⟩)`.
pub fn classify_out(r: &Word, n: i64) -> Result<ClassificationReport> {
    let balanced = balance_relator(r, n)?;
    let mut trace = vec![TraceStep::Balanced {
        s: balanced.s.clone(),
        n,
        basis_change: balanced.basis_change.clone(),
    }];
    let branch = balanced.branch();
    trace.push(TraceStep::Branch { branch });
    let s = balanced.s.clone();
    let mut witnesses = Witnesses::default();
    let mut scan = None;
    let mut note = None;
    let out_class = match branch {
        Branch::Derived => {
            let matched = is_commutator(&s);
            trace.push(TraceStep::Commutator { matched });
            if matched {
                OutClass::DerivedCommutator
            } else {
                note = Some(
                    "relator lies in the derived subgroup; Out(G) embeds canonically in \
                     Out(F(a, b)) ≅ GL(2, Z) and is residually finite, but is not classified here"
                        .to_string(),
                );
                OutClass::DerivedUnclassified
            }
        }
        Branch::Primitive => OutClass::PrimitiveDnAutCn(n),
        Branch::Generic => {
            let verdict = relator_verdict(&s, &GenMap::delta(1));
            trace.push(TraceStep::DeltaTest { verdict });
            witnesses.delta_in = verdict.is_aut();
            if witnesses.delta_in {
                if family_test(&s, Family::Alpha, 0, &mut trace) {
                    witnesses.alpha_ks.insert(0);
                }
                if family_test(&s, Family::Beta, 0, &mut trace) {
                    witnesses.beta_ks.insert(0);
                }
                witnesses.zeta0_in = family_test(&s, Family::Zeta, 0, &mut trace);
                infinite_class(&witnesses)?
            } else {
                let stats = CyclicWord::new(&s).scan_extremes()?;
                trace.push(TraceStep::Scan { stats });
                scan = Some(stats);
                let alphas = alpha_candidates(&stats)?;
                let betas = beta_candidates(&stats)?;
                trace.push(TraceStep::Candidates {
                    alphas: alphas.iter().copied().collect(),
                    betas: betas.iter().copied().collect(),
                });
                for &k in &alphas {
                    if family_test(&s, Family::Alpha, k, &mut trace) {
                        witnesses.alpha_ks.insert(k);
                    }
                }
                for &k in &betas {
                    if family_test(&s, Family::Beta, k, &mut trace) {
                        witnesses.beta_ks.insert(k);
                    }
                }
                witnesses.zeta0_in = family_test(&s, Family::Zeta, 0, &mut trace);
                finite_class(&witnesses)?
            }
        }
    };
    trace.push(TraceStep::Decision { out_class });
    let mut report = ClassificationReport {
        out_class,
        witnesses,
        balanced,
        scan,
        out_presentation: None,
        aut_presentation: None,
        note,
        trace,
    };
    if out_class != OutClass::DerivedUnclassified {
        report.out_presentation = Some(emit_out_presentation(out_class, &report.witnesses)?);
    }
    if branch != Branch::Derived {
        report.aut_presentation = Some(emit_aut_presentation(&report)?);
    }
    Ok(report)
}

/// Recomputes the class from the recorded steps alone.
pub fn replay_trace(trace: &[TraceStep]) -> Result<OutClass> {
    let bad = |m: &str| Error::Precondition(format!("malformed trace: {m}"));
    let mut n = None;
    let mut branch = None;
    let mut commutator = None;
    let mut w = Witnesses::default();
    for step in trace {
        match step {
            TraceStep::Balanced { n: m, .. } => n = Some(*m),
            TraceStep::Branch { branch: b } => branch = Some(*b),
            TraceStep::Commutator { matched } => commutator = Some(*matched),
            TraceStep::DeltaTest { verdict } => w.delta_in = verdict.is_aut(),
            TraceStep::FamilyTest { family, k, verdict } if verdict.is_aut() => match family {
                Family::Alpha => {
                    w.alpha_ks.insert(*k);
                }
                Family::Beta => {
                    w.beta_ks.insert(*k);
                }
                Family::Zeta if *k == 0 => w.zeta0_in = true,
                _ => return Err(bad("unexpected family test")),
            },
            _ => {}
        }
    }
    match branch.ok_or_else(|| bad("no branch"))? {
        Branch::Derived => match commutator.ok_or_else(|| bad("no commutator test"))? {
            true => Ok(OutClass::DerivedCommutator),
            false => Ok(OutClass::DerivedUnclassified),
        },
        Branch::Primitive => Ok(OutClass::PrimitiveDnAutCn(n.ok_or_else(|| bad("no exponent"))?)),
        Branch::Generic if w.delta_in => infinite_class(&w),
        Branch::Generic => finite_class(&w),
    }
}

fn sym(base: &str, k: i64) -> String {
    if k == 0 {
        base.to_string()
    } else {
        format!("{base}_{k}")
    }
}

fn b_pow(k: i64) -> String {
    match k {
        0 => "1".to_string(),
        1 => "b".to_string(),
        _ => format!("b^{k}"),
    }
}

fn gens(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn units_mod(n: i64) -> Vec<i64> {
    (1..n).filter(|&k| num_integer::gcd(k, n) == 1).collect()
}

pub fn euler_phi(n: i64) -> i64 {
    units_mod(n).len() as i64
}

fn wrong_witnesses(c: OutClass, w: &Witnesses) -> Error {
    Error::Precondition(format!("witnesses {w:?} do not match class {c}"))
}

/// Presentation of `Out(G)` for a class and its witnesses.
pub fn emit_out_presentation(c: OutClass, w: &Witnesses) -> Result<GroupPresentation> {
    let p = match c {
        OutClass::Trivial => GroupPresentation::new(&[], vec![], "1"),
        OutClass::C2 => {
            let g = if let Some(&k) = w.alpha_ks.first() {
                sym("α", k)
            } else if let Some(&k) = w.beta_ks.first() {
                sym("β", k)
            } else if w.zeta0_in {
                "ζ".to_string()
            } else {
                return Err(wrong_witnesses(c, w));
            };
            GroupPresentation::new(std::slice::from_ref(&g), vec![format!("{g}^2")], "C2")
        }
        OutClass::C2xC2 => {
            let k = *w.alpha_ks.first().ok_or_else(|| wrong_witnesses(c, w))?;
            let (x, y) = (sym("α", k), sym("β", -k));
            GroupPresentation::new(
                &[x.clone(), y.clone()],
                vec![format!("{x}^2"), format!("{y}^2"), format!("[{x}, {y}]")],
                "C2 x C2",
            )
        }
        OutClass::Z => GroupPresentation::new(&gens(&["δ"]), vec![], "Z"),
        OutClass::Dinf => {
            let g = if w.alpha_ks.contains(&0) { "α" } else { "β" };
            GroupPresentation::new(
                &gens(&["δ", g]),
                vec![format!("{g}^2"), format!("{g}δ = δ^-1 {g}")],
                "D∞",
            )
        }
        OutClass::ZxC2 => GroupPresentation::new(&gens(&["δ", "ζ"]), vec!["ζ^2".into(), "[δ, ζ]".into()], "Z x C2"),
        OutClass::DinfxC2 => GroupPresentation::new(
            &gens(&["α", "δ", "ζ"]),
            vec!["α^2".into(), "ζ^2".into(), "αδα = δ^-1".into(), "[α, ζ]".into(), "[δ, ζ]".into()],
            "D∞ x C2",
        ),
        OutClass::PrimitiveDnAutCn(n) => {
            let units: Vec<i64> = units_mod(n).into_iter().filter(|&k| k != 1).collect();
            let psi = |k: i64| if k == 1 { "1".to_string() } else { format!("ψ_{k}") };
            let mut generators = gens(&["α", "δ"]);
            generators.extend(units.iter().map(|&k| psi(k)));
            let mut relators = vec!["α^2".to_string(), format!("δ^{n}"), "αδα = δ^-1".to_string()];
            for &i in &units {
                relators.push(format!("{p}^-1 δ {p} = δ^{i}", p = psi(i)));
                relators.push(format!("[α, {}]", psi(i)));
            }
            for &i in &units {
                for &j in &units {
                    relators.push(format!("{} {} = {}", psi(i), psi(j), psi(i * j % n)));
                }
            }
            let label = if n == 2 { "D2 ⋊ Aut(C2) ≅ C2 x C2".to_string() } else { format!("D{n} ⋊ Aut(C{n})") };
            GroupPresentation::new(&generators, relators, label)
        }
        OutClass::DerivedCommutator => GroupPresentation::new(
            &gens(&["s", "t", "r"]),
            vec![
                "s^4".into(),
                "s^2 = (s t)^3".into(),
                "r^2".into(),
                "r s r = s^-1".into(),
                "r t r = t^-1".into(),
            ],
            "GL(2, Z) ≅ Out(F(a, b))",
        ),
        OutClass::DerivedUnclassified => {
            return Err(Error::DerivedBranch("no presentation for an unclassified derived relator".into()))
        }
    };
    Ok(p)
}

/// Presentation of `Aut(G)` as an extension of `Inn(G) ≅ G`.
pub fn emit_aut_presentation(report: &ClassificationReport) -> Result<GroupPresentation> {
    let bp = &report.balanced;
    if bp.flags.in_derived {
        return Err(Error::DerivedBranch(format!("Aut(G) is not described for relator {}", bp.s)));
    }
    let n = bp.n;
    let rel = format!("({})^{n}", bp.s);
    let w = &report.witnesses;
    let delta_rels = || vec!["a^δ = a b".to_string(), "b^δ = b".to_string()];
    let alpha_rels = |i: i64| {
        let g = sym("α", i);
        let a_img = if i == 0 { "a^-1".to_string() } else { format!("a^-1 {}", b_pow(i)) };
        vec![format!("{g}^2 = {}", b_pow(i)), format!("a^{g} = {a_img}"), format!("b^{g} = b")]
    };
    let beta_rels = |i: i64| {
        let g = sym("β", i);
        let a_img = if i == 0 { "a".to_string() } else { format!("a {}", b_pow(i)) };
        vec![format!("a^{g} = {a_img}"), format!("b^{g} = b^-1"), format!("{g}^2 = 1")]
    };
    let zeta_rels = || vec!["a^ζ = a^-1".to_string(), "b^ζ = b^-1".to_string(), "ζ^2 = 1".to_string()];
    let mut relators = vec![rel];
    let (generators, label): (Vec<String>, String) = match report.out_class {
        OutClass::Trivial => (gens(&["a", "b"]), "G".into()),
        OutClass::Z => {
            relators.extend(delta_rels());
            (gens(&["δ", "a", "b"]), "G ⋊ Z".into())
        }
        OutClass::C2 => {
            if let Some(&i) = w.alpha_ks.first() {
                relators.extend(alpha_rels(i));
                (vec![sym("α", i), "a".into(), "b".into()], "G.C2".into())
            } else if let Some(&i) = w.beta_ks.first() {
                relators.extend(beta_rels(i));
                (vec![sym("β", i), "a".into(), "b".into()], "G ⋊ C2".into())
            } else {
                relators.extend(zeta_rels());
                (gens(&["ζ", "a", "b"]), "G ⋊ C2".into())
            }
        }
        OutClass::C2xC2 => {
            let i = *w.alpha_ks.first().ok_or_else(|| wrong_witnesses(OutClass::C2xC2, w))?;
            let (x, y) = (sym("α", i), sym("β", -i));
            relators.extend(alpha_rels(i));
            relators.extend(beta_rels(-i));
            relators.extend(zeta_rels());
            relators.push(format!("{x} {y} = ζ {}", b_pow(-i)));
            relators.push(format!("{x} ζ = ζ {x} {}", b_pow(-i)));
            relators.push(format!("{y} {x} = ζ"));
            relators.push(format!("ζ {y} = {x} {}", b_pow(-i)));
            (vec![x, y, "ζ".into(), "a".into(), "b".into()], "G.(C2 x C2)".into())
        }
        OutClass::Dinf if w.alpha_ks.contains(&0) => {
            relators.extend(["a^α = a^-1", "b^α = b", "α^2 = 1"].map(String::from));
            relators.extend(delta_rels());
            relators.push("δ^α = δ^-1 b".into());
            (gens(&["α", "δ", "a", "b"]), "G.D∞".into())
        }
        OutClass::Dinf => {
            relators.extend(["a^β = a", "b^β = b^-1", "β^2 = 1"].map(String::from));
            relators.extend(delta_rels());
            relators.push("δ^β = δ^-1".into());
            (gens(&["β", "δ", "a", "b"]), "G ⋊ D∞".into())
        }
        OutClass::ZxC2 => {
            relators.extend(zeta_rels());
            relators.extend(delta_rels());
            relators.push("δ^ζ = δ b^-1".into());
            (gens(&["ζ", "δ", "a", "b"]), "G.(Z x C2)".into())
        }
        OutClass::DinfxC2 | OutClass::PrimitiveDnAutCn(_) => {
            let primitive = matches!(report.out_class, OutClass::PrimitiveDnAutCn(_));
            if primitive {
                relators[0] = format!("b^{n}");
            }
            relators.extend(["a^α = a^-1", "b^α = b", "α^2 = 1", "a^β = a", "b^β = b^-1", "β^2 = 1"].map(String::from));
            relators.extend(delta_rels());
            if primitive {
                relators.push(format!("δ^{n} = 1"));
            }
            relators.extend(["[α, β] = 1", "δ^α = δ^-1 b", "δ^β = δ^-1"].map(String::from));
            let label = if primitive { format!("G.(D{n} ⋊ Aut(C{n}))") } else { "G.(D∞ x C2)".into() };
            (gens(&["α", "β", "δ", "a", "b"]), label)
        }
        OutClass::DerivedCommutator | OutClass::DerivedUnclassified => {
            return Err(Error::DerivedBranch("derived-subgroup relator".into()))
        }
    };
    Ok(GroupPresentation::new(&generators, relators, label))
}

/// `2nφ(n)`.
pub fn primitive_out_order(n: i64) -> Result<i64> {
    if n <= 1 {
        return Err(Error::InvalidExponent(n));
    }
    Ok(2 * n * euler_phi(n))
}

/// An element `a ↦ a^ε bⁱ, b ↦ bᵏ` of `Out(⟨a, b; bⁿ⟩)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PrimitiveElement {
    pub eps: i64,
    pub i: i64,
    pub k: i64,
}

impl PrimitiveElement {
    pub fn to_map(self) -> GenMap {
        GenMap::new(Word::from_syllables([(Gen::A, self.eps), (Gen::B, self.i)]), Word::power_of(Gen::B, self.k))
    }
}

/// `Out(⟨a, b; bⁿ⟩)` as an explicit multiplication table.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub n: i64,
    pub elements: Vec<PrimitiveElement>,
    /// `table[x][y]` is the index of `x·y` (apply `x` first).
    pub table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> Option<usize> {
        (0..self.order()).find(|&e| (0..self.order()).all(|x| self.table[e][x] == x && self.table[x][e] == x))
    }

    /// Checks closure, associativity, identity and inverses exhaustively.
    pub fn verify_axioms(&self) -> Result<()> {
        let m = self.order();
        let fail = |what: &str| Err(Error::TheoryViolation(format!("n = {}: {what}", self.n)));
        if self.table.len() != m || self.table.iter().any(|row| row.len() != m || row.iter().any(|&v| v >= m)) {
            return fail("table is not closed");
        }
        for x in 0..m {
            for y in 0..m {
                let xy = self.table[x][y];
                for z in 0..m {
                    if self.table[xy][z] != self.table[x][self.table[y][z]] {
                        return fail("not associative");
                    }
                }
            }
        }
        let Some(e) = self.identity() else {
            return fail("no identity");
        };
        if (0..m).any(|x| !(0..m).any(|y| self.table[x][y] == e && self.table[y][x] == e)) {
            return fail("missing inverse");
        }
        Ok(())
    }

    pub fn is_abelian(&self) -> bool {
        let m = self.order();
        (0..m).all(|x| (0..m).all(|y| self.table[x][y] == self.table[y][x]))
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> usize {
        let e = self.identity().expect("group has an identity");
        (0..self.order())
            .map(|x| {
                let (mut y, mut k) = (x, 1);
                while y != e {
                    y = self.table[y][x];
                    k += 1;
                }
                k
            })
            .fold(1, num_integer::lcm)
    }
}

/// Composes two elements through their maps on F(a, b) and normalizes
/// `b^x a^ε b^y` to `a^ε b^{x+y}` by a b-power conjugation.
fn primitive_product(n: i64, x: PrimitiveElement, y: PrimitiveElement) -> Result<PrimitiveElement> {
    let composed = compose(&x.to_map(), &y.to_map());
    let k = composed.image_b().exponent_sum(Gen::B);
    let syl = composed.image_a().syllables();
    let (lead, core) = match syl.first() {
        Some(s) if s.gen == Gen::B => (s.exp, &syl[1..]),
        _ => (0, syl),
    };
    let (eps, tail) = match core {
        [a] if a.gen == Gen::A => (a.exp, 0),
        [a, t] if a.gen == Gen::A && t.gen == Gen::B => (a.exp, t.exp),
        _ => return Err(Error::TheoryViolation(format!("unexpected image {}", composed.image_a()))),
    };
    let normal = PrimitiveElement { eps, i: lead + tail, k };
    if mod_inn_equal(&composed, &normal.to_map())?.is_none() {
        return Err(Error::TheoryViolation(format!("{composed} is not conjugate to {}", normal.to_map())));
    }
    Ok(PrimitiveElement { eps, i: normal.i.rem_euclid(n), k: k.rem_euclid(n) })
}

/// Builds `Out(⟨a, b; bⁿ⟩)` from normalized triples `(ε, i mod n, k ∈ (Z/n)ˣ)`.
pub fn realize_primitive_out(n: i64) -> Result<FiniteGroup> {
    if n <= 1 {
        return Err(Error::InvalidExponent(n));
    }
    let mut elements = Vec::new();
    for eps in [1, -1] {
        for i in 0..n {
            for &k in &units_mod(n) {
                elements.push(PrimitiveElement { eps, i, k });
            }
        }
    }
    elements.sort();
    let index: BTreeMap<PrimitiveElement, usize> = elements.iter().enumerate().map(|(ix, &e)| (e, ix)).collect();
    let mut table = vec![vec![0; elements.len()]; elements.len()];
    for (ix, &x) in elements.iter().enumerate() {
        for (iy, &y) in elements.iter().enumerate() {
            let z = primitive_product(n, x, y)?;
            table[ix][iy] = *index
                .get(&z)
                .ok_or_else(|| Error::TheoryViolation(format!("product {z:?} left the element set")))?;
        }
    }
    Ok(FiniteGroup { n, elements, table })
}
