use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;
use onerel::classify::classify_out;
use onerel::maps::GenMap;
use onerel::oracle::{
    default_window, enumerate_family_auts, is_primitive_whitehead, scan_power_crosscheck, verify_candidate_ranges,
    BranchFilter, Constraints, OracleConfig, RelatorSampler,
};
use onerel::smallcancel::{
    classify_sc_out, max_piece_length, satisfies_metric, sc_hypothesis_failures, MultiRelatorPresentation,
};
use onerel::words::{Cone, CyclicWord};
use onerel::{balance_relator, is_relator_auto, Error, Gen, Word};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "onerel", version, about = "Outer automorphism groups of one-relator groups with torsion")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Include the algorithm trace.
    #[arg(long, global = true)]
    trace: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RelatorArgs {
    /// Relator word, e.g. "a b A b^2".
    #[arg(short, long)]
    relator: String,
    /// Torsion exponent n > 1.
    #[arg(short, long, default_value_t = 2)]
    n: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Classify Out(<a, b; R^n>).
    Classify(RelatorArgs),
    /// Decide whether a map of F(a, b) induces an automorphism.
    CheckMap {
        #[command(flatten)]
        rel: RelatorArgs,
        /// Map as "family(k)" or "a -> W; b -> W".
        #[arg(short, long)]
        map: String,
    },
    /// Rewrite the relator so that a has exponent sum zero.
    Balance(RelatorArgs),
    /// Brute-force cross-checks on one relator, or on a seeded random sample.
    Oracle {
        #[arg(short, long)]
        relator: Option<String>,
        /// Half-width added around the candidate ranges.
        #[arg(long, default_value_t = 10)]
        widen: i64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of sampled relators when no relator is given.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 20)]
        max_len: usize,
    },
    /// Small-cancellation analysis of a presentation file.
    ScCheck {
        /// One relator per line, optional `b_order = <n|infinite>` header.
        file: PathBuf,
    },
}

enum Failure {
    Input(String),
    Theory(String),
    /// Input error that still produced a report.
    Partial(Output, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TheoryViolation(_) => Failure::Theory(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

struct Output {
    text: String,
    json: Value,
}

fn parse_word(text: &str) -> Result<Word, Failure> {
    text.parse::<Word>().map_err(|e| Failure::Input(format!("relator {text:?}: {e}")))
}

fn check_n(n: i64) -> Result<(), Failure> {
    if n <= 1 {
        return Err(Error::InvalidExponent(n).into());
    }
    Ok(())
}

fn classify(args: &RelatorArgs, trace: bool) -> Result<Output, Failure> {
    check_n(args.n)?;
    let report = classify_out(&parse_word(&args.relator)?, args.n)?;
    Ok(Output { text: report.render(trace), json: report.to_json() })
}

fn check_map(args: &RelatorArgs, map: &str) -> Result<Output, Failure> {
    check_n(args.n)?;
    let r = parse_word(&args.relator)?;
    let m: GenMap = map.parse().map_err(|e| Failure::Input(format!("map {map:?}: {e}")))?;
    let verdict = is_relator_auto(&r, &m)?;
    Ok(Output {
        text: format!("{verdict:?}\n"),
        json: json!({ "relator": r, "n": args.n, "map": m, "verdict": verdict }),
    })
}

fn balance(args: &RelatorArgs) -> Result<Output, Failure> {
    let r = parse_word(&args.relator)?;
    let bp = balance_relator(&r, args.n)?;
    let gcd = bp.s.exponent_sum(Gen::B).abs();
    let text = format!(
        "s = {}\nbasis change: {}\n|σ_b(s)| = gcd(σ_a, σ_b) = {gcd}\nprimitive: {}, in derived subgroup: {}\n",
        bp.s, bp.basis_change, bp.flags.primitive, bp.flags.in_derived
    );
    let json = json!({
        "s": bp.s, "n": bp.n, "basis_change": bp.basis_change, "flags": bp.flags, "gcd": gcd,
    });
    Ok(Output { text, json })
}

fn oracle_one(r: &Word, widen: i64) -> Result<Value, Failure> {
    let bp = balance_relator(r, 2)?;
    let s = &bp.s;
    let mut out = json!({ "relator": r, "balanced": s, "primitive_whitehead": is_primitive_whitehead(r) });
    if bp.flags.primitive || bp.flags.in_derived {
        out["skipped"] = json!("family enumeration needs a generic balanced relator");
        return Ok(out);
    }
    out["window"] = json!([default_window(s).start(), default_window(s).end()]);
    out["passes"] = json!(enumerate_family_auts(s, default_window(s))?);
    out["scan_power_crosscheck"] = json!(scan_power_crosscheck(s)?);
    if s.height_membership() == Cone::Neither {
        out["scan"] = json!(CyclicWord::new(s).scan_extremes()?);
        out["candidate_ranges_sound"] = json!(verify_candidate_ranges(s, widen)?);
    }
    Ok(out)
}

fn oracle(relator: Option<&str>, widen: i64, seed: u64, samples: usize, max_len: usize) -> Result<Output, Failure> {
    if let Some(text) = relator {
        let v = oracle_one(&parse_word(text)?, widen)?;
        let text = serde_json::to_string_pretty(&v).unwrap() + "\n";
        return Ok(Output { text, json: v });
    }
    let cfg = OracleConfig { k_window: widen, max_word_len: max_len, sample_count: samples, rng_seed: seed };
    let mut sampler = RelatorSampler::new(cfg);
    let mut sound = 0;
    let mut scans = 0;
    for _ in 0..samples {
        let s = sampler.sample(Constraints { balanced: true, branch: BranchFilter::Finite })?;
        sound += usize::from(verify_candidate_ranges(&s, widen)?);
        scans += usize::from(scan_power_crosscheck(&s)?);
    }
    let text = format!(
        "seed {seed}: {samples} finite-branch relators, candidate ranges sound on {sound}, power scan agrees on {scans}\n"
    );
    let json = json!({ "seed": seed, "samples": samples, "ranges_sound": sound, "scan_agrees": scans });
    if sound != samples {
        return Err(Failure::Theory(format!("candidate ranges missed an automorphism: {text}")));
    }
    Ok(Output { text, json })
}

fn sc_check(file: &PathBuf) -> Result<Output, Failure> {
    let text = fs::read_to_string(file).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    let p: MultiRelatorPresentation = text.parse().map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    let max_piece = max_piece_length(&p.symmetrized());
    let c6 = satisfies_metric(&p, Ratio::new(1, 6));
    let c24 = satisfies_metric(&p, Ratio::new(1, 24));
    let mut out = format!("relators: {}\nmax piece length: {max_piece}\nC'(1/6): {c6}\nC'(1/24): {c24}\n", p.relators.len());
    let failures = sc_hypothesis_failures(&p);
    if !failures.is_empty() {
        for f in &failures {
            out.push_str(&format!("hypothesis failed: {f}\n"));
        }
        let json = json!({ "max_piece": max_piece, "c_1_6": c6, "c_1_24": c24, "hypothesis_failures": failures });
        let msg = format!("{} hypothesis failure(s)", failures.len());
        return Err(Failure::Partial(Output { text: out, json }, msg));
    }
    let report = classify_sc_out(&p)?;
    out.push_str(&report.to_string());
    let json = json!({ "max_piece": max_piece, "c_1_6": c6, "c_1_24": c24, "report": report });
    Ok(Output { text: out, json })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Classify(args) => classify(args, cli.trace),
        Command::CheckMap { rel, map } => check_map(rel, map),
        Command::Balance(args) => balance(args),
        Command::Oracle { relator, widen, seed, samples, max_len } => {
            oracle(relator.as_deref(), *widen, *seed, *samples, *max_len)
        }
        Command::ScCheck { file } => sc_check(file),
    }
}

fn emit(out: Output, json: bool) {
    let body = if json { serde_json::to_string_pretty(&out.json).unwrap() + "\n" } else { out.text };
    // A closed stdout (e.g. piped into `head`) is not an error.
    let _ = std::io::stdout().lock().write_all(body.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            emit(out, cli.json);
            ExitCode::SUCCESS
        }
        Err(Failure::Partial(out, msg)) => {
            emit(out, cli.json);
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Theory(msg)) => {
            eprintln!("theory violation: {msg}");
            ExitCode::from(2)
        }
    }
}
