//! `cayley-poset`: recognize, classify and construct Cayley posets.
//!
//! Every invocation prints one JSON line (a run record) on stdout and a
//! short human summary on stderr. Exit codes: 0 success or decided,
//! 1 input error, 2 search budget exhausted, 3 internal invariant breach.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use cayley_poset::algebra::{Certificate, CertificateJson};
use cayley_poset::auto_equiv::{
    check_auto_equivalent, lex_counterexample, make_presentation, roundtrip, truncated_cayley, MonoidPresentation,
    PresentationJson, Window,
};
use cayley_poset::constructions::{run_pipeline, Step};
use cayley_poset::poset::{export_dot, parse_poset_json, PosetJson};
use cayley_poset::recognizer::{census, classify, recognize, verify_certificate, ClassQuery, SearchConfig, CENSUS_CAP};
use cayley_poset::Poset;

#[derive(Parser)]
#[command(name = "cayley-poset", version, about = "Cayley posets of semigroup acts")]
struct Cli {
    /// Worker threads for the search (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Seed for randomized generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SearchArgs {
    /// Node budget per query.
    #[arg(long, env = "CAYLEY_POSET_BUDGET")]
    budget: Option<u64>,
    /// Single-threaded search returning the least certificate.
    #[arg(long)]
    deterministic: bool,
    /// Disable lemma-based pruning.
    #[arg(long)]
    no_prune: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide one class for a poset.
    Recognize {
        /// semigroup, monoid, full, full-monoid or act.
        #[arg(long)]
        class: ClassQuery,
        #[arg(long = "in")]
        input: PathBuf,
        /// Write the certificate here on a yes.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Decide every class for a poset.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Classify all posets up to isomorphism with at most `n` elements.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Run a construction pipeline.
    Construct {
        #[arg(long)]
        pipeline: PathBuf,
        /// Write the results (one JSON line each) here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Truncated Cayley poset of a finitely generated monoid.
    Numsem {
        #[command(flatten)]
        monoid: MonoidArgs,
        /// Write the truncation here, and its Hasse diagram next to it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Auto-equivalence checks and monoid reconstruction.
    Autoequiv {
        #[command(flatten)]
        monoid: MonoidArgs,
        /// Rebuild the monoid from the collision lattice and compare.
        #[arg(long)]
        roundtrip: bool,
        /// Weight bound for factorizations (default: twice the window).
        #[arg(long)]
        bound: Option<i64>,
        /// Run the lexicographic counterexample on an `a,b` window instead.
        #[arg(long, conflicts_with_all = ["gens", "presentation", "roundtrip"])]
        lex: Option<String>,
    },
    /// Hasse diagram as DOT, or a random poset as JSON.
    Export {
        #[arg(long = "in", required_unless_present = "random")]
        input: Option<PathBuf>,
        /// Highlight the subset S of this certificate.
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Emit a random poset on this many elements (uses --seed).
        #[arg(long, conflicts_with = "input")]
        random: Option<usize>,
        /// Relation density for --random.
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct MonoidArgs {
    /// Generators: `3,5`, or vectors with `:` between coordinates (`1:0,1:1`).
    #[arg(long)]
    gens: Option<String>,
    /// Torsion moduli, `2,3`; their coordinates come last in each generator.
    #[arg(long, default_value = "")]
    torsion: String,
    /// Presentation JSON file instead of --gens.
    #[arg(long, conflicts_with = "gens")]
    presentation: Option<PathBuf>,
    /// Bound on the free coordinates, one value or one per coordinate.
    #[arg(long, default_value = "10")]
    window: String,
}

/// Not an input problem: a result failed its own verification.
#[derive(Debug)]
struct InvariantBreach(String);

impl std::fmt::Display for InvariantBreach {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "internal invariant breach: {}", self.0)
    }
}

impl std::error::Error for InvariantBreach {}

enum Status {
    Done,
    Unknown,
}

#[derive(Serialize)]
struct RunRecord {
    command: Vec<String>,
    version: &'static str,
    inputs: BTreeMap<String, String>,
    verdicts: BTreeMap<String, String>,
    stats: Value,
    wall_ms: f64,
    result: Value,
}

struct Recorder {
    start: Instant,
    inputs: BTreeMap<String, String>,
}

impl Recorder {
    fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.insert(path.display().to_string(), hex::encode(Sha256::digest(&bytes)));
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }

    fn emit(self, verdicts: BTreeMap<String, String>, stats: Value, result: Value) -> Result<()> {
        let record = RunRecord {
            command: std::env::args().collect(),
            version: env!("CARGO_PKG_VERSION"),
            inputs: self.inputs,
            verdicts,
            stats,
            wall_ms: self.start.elapsed().as_secs_f64() * 1e3,
            result,
        };
        println!("{}", serde_json::to_string(&record)?);
        Ok(())
    }
}

fn stats_json(nodes: u64, elapsed: Duration) -> Value {
    json!({"nodes": nodes, "elapsed_ms": elapsed.as_secs_f64() * 1e3})
}

fn config(search: &SearchArgs, threads: usize) -> SearchConfig {
    let mut c = if search.deterministic { SearchConfig::deterministic() } else { SearchConfig::default() };
    c.threads = threads;
    if let Some(b) = search.budget {
        c.budget = b;
    }
    if search.no_prune {
        c = c.without_pruning();
    }
    c
}

fn parse_poset(rec: &mut Recorder, path: &Path) -> Result<Poset> {
    let text = rec.read(path)?;
    parse_poset_json(&text).with_context(|| format!("parsing poset {}", path.display()))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, sep: char) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(sep)
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|e| anyhow!("bad number {t:?}: {e}")))
        .collect()
}

fn presentation(rec: &mut Recorder, args: &MonoidArgs) -> Result<MonoidPresentation> {
    if let Some(path) = &args.presentation {
        let text = rec.read(path)?;
        let j: PresentationJson = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        return Ok(MonoidPresentation::from_json(&j)?);
    }
    let gens = args.gens.as_deref().ok_or_else(|| anyhow!("either --gens or --presentation is required"))?;
    let torsion: Vec<i64> = parse_list(&args.torsion, ',')?;
    let generators: Vec<Vec<i64>> = gens.split(',').map(|g| parse_list(g, ':')).collect::<Result<_>>()?;
    let arity = generators.first().map_or(torsion.len() + 1, Vec::len);
    let free_rank = arity.checked_sub(torsion.len()).ok_or_else(|| anyhow!("generators are shorter than the torsion part"))?;
    Ok(make_presentation(free_rank, torsion, generators)?)
}

fn window(args: &MonoidArgs, free_rank: usize) -> Result<Window> {
    let b: Vec<i64> = parse_list(&args.window, ',')?;
    match b.len() {
        1 => Ok(Window::uniform(free_rank, b[0])),
        k if k == free_rank => Ok(Window::new(b)),
        k => bail!("window has {k} bounds for {free_rank} free coordinates"),
    }
}

fn cmd_recognize(
    mut rec: Recorder,
    class: ClassQuery,
    input: &Path,
    out: Option<&Path>,
    search: &SearchArgs,
    threads: usize,
) -> Result<Status> {
    let p = parse_poset(&mut rec, input)?;
    let outcome = recognize(&p, class, &config(search, threads));
    if let Some(cert) = outcome.verdict.certificate() {
        if let Err(r) = verify_certificate(&p, cert) {
            return Err(InvariantBreach(format!("certificate failed verification: {}", r.name())).into());
        }
        if let Some(path) = out {
            fs::write(path, serde_json::to_string(&cert.to_json())?)
                .with_context(|| format!("writing {}", path.display()))?;
        }
    }
    eprintln!(
        "{}: {} ({} nodes, {:.3} s)",
        class.as_str(),
        outcome.verdict.label(),
        outcome.stats.nodes,
        outcome.stats.elapsed.as_secs_f64()
    );
    let verdicts = BTreeMap::from([(class.as_str().to_string(), outcome.verdict.label().to_string())]);
    let status = if outcome.verdict.is_unknown() { Status::Unknown } else { Status::Done };
    rec.emit(verdicts, stats_json(outcome.stats.nodes, outcome.stats.elapsed), outcome.verdict.to_json())?;
    Ok(status)
}

fn cmd_classify(mut rec: Recorder, input: &Path, search: &SearchArgs, threads: usize) -> Result<Status> {
    let p = parse_poset(&mut rec, input)?;
    let labels = classify(&p, &config(search, threads));
    if !labels.is_consistent() {
        return Err(InvariantBreach("verdicts contradict the class inclusions".into()).into());
    }
    for q in ClassQuery::ALL {
        if let Some(cert) = labels.get(q).certificate() {
            if let Err(r) = verify_certificate(&p, cert) {
                return Err(InvariantBreach(format!("{} certificate rejected: {}", q.as_str(), r.name())).into());
            }
        }
    }
    let verdicts: BTreeMap<String, String> =
        ClassQuery::ALL.iter().map(|&q| (q.as_str().to_string(), labels.get(q).label().to_string())).collect();
    eprintln!("{}", ClassQuery::ALL.map(|q| format!("{}={}", q.as_str(), labels.get(q).label())).join(" "));
    let unknown = ClassQuery::ALL.iter().any(|&q| labels.get(q).is_unknown());
    rec.emit(verdicts, stats_json(labels.stats.nodes, labels.stats.elapsed), labels.to_json())?;
    Ok(if unknown { Status::Unknown } else { Status::Done })
}

fn cmd_census(rec: Recorder, n: usize, out: Option<&Path>, search: &SearchArgs, threads: usize) -> Result<Status> {
    let report = census(n, CENSUS_CAP, &config(search, threads))?;
    let unknown = report.entries.iter().any(|e| ClassQuery::ALL.iter().any(|&q| e.labels.get(q).is_unknown()));
    let json = report.to_json();
    if let Some(path) = out {
        fs::write(path, serde_json::to_string_pretty(&json)?).with_context(|| format!("writing {}", path.display()))?;
    }
    let verdicts: BTreeMap<String, String> =
        ClassQuery::ALL.iter().map(|&q| (q.as_str().to_string(), report.count_with(q).to_string())).collect();
    eprintln!("{} posets with at most {n} elements", report.entries.len());
    for (q, count) in &verdicts {
        eprintln!("  {q}: {count}");
    }
    let (nodes, elapsed) = report
        .entries
        .iter()
        .fold((0, Duration::ZERO), |(n, t), e| (n + e.labels.stats.nodes, t + e.labels.stats.elapsed));
    let result = if out.is_some() { json!({"posets": report.entries.len(), "cells": report.cells}) } else { json };
    rec.emit(verdicts, stats_json(nodes, elapsed), result)?;
    Ok(if unknown { Status::Unknown } else { Status::Done })
}

fn cmd_construct(mut rec: Recorder, pipeline: &Path, out: Option<&Path>) -> Result<Status> {
    let text = rec.read(pipeline)?;
    let steps: Vec<Step> = serde_json::from_str(&text).with_context(|| format!("parsing {}", pipeline.display()))?;
    let results = run_pipeline(&steps)?;
    let mut lines = String::new();
    let mut verdicts = BTreeMap::new();
    for (name, cp) in &results {
        if let Err(r) = verify_certificate(&cp.poset, &cp.cert) {
            return Err(InvariantBreach(format!("{name}: certificate rejected: {}", r.name())).into());
        }
        let mut value = serde_json::to_value(cp.to_json())?;
        value["name"] = json!(name);
        lines.push_str(&serde_json::to_string(&value)?);
        lines.push('\n');
        verdicts.insert(name.clone(), cp.kind().as_str().to_string());
        eprintln!("{name}: {} elements, {}", cp.len(), cp.kind());
    }
    let result = match out {
        Some(path) => {
            fs::write(path, &lines).with_context(|| format!("writing {}", path.display()))?;
            json!({"results": results.len(), "out": path.display().to_string()})
        }
        None => json!({"results": lines.lines().map(|l| serde_json::from_str::<Value>(l)).collect::<Result<Vec<_>, _>>()?}),
    };
    rec.emit(verdicts, Value::Null, result)?;
    Ok(Status::Done)
}

fn cmd_numsem(mut rec: Recorder, args: &MonoidArgs, out: Option<&Path>) -> Result<Status> {
    let p = presentation(&mut rec, args)?;
    let w = window(args, p.free_rank())?;
    let t = truncated_cayley(&p, &w)?;
    let dot = export_dot(&t.poset, None);
    if let Some(path) = out {
        fs::write(path, serde_json::to_string(&t.to_json())?).with_context(|| format!("writing {}", path.display()))?;
        let dot_path = path.with_extension("dot");
        fs::write(&dot_path, &dot).with_context(|| format!("writing {}", dot_path.display()))?;
    }
    eprintln!("{} elements, {} covers", t.len(), t.poset.hasse().len());
    let result = json!({
        "elements": t.elements,
        "covers": t.poset.hasse(),
        "dot": if out.is_none() { json!(dot) } else { Value::Null },
    });
    rec.emit(BTreeMap::new(), Value::Null, result)?;
    Ok(Status::Done)
}

fn cmd_autoequiv(
    mut rec: Recorder,
    args: &MonoidArgs,
    do_roundtrip: bool,
    bound: Option<i64>,
    lex: Option<&str>,
) -> Result<Status> {
    if let Some(spec) = lex {
        let w: Vec<usize> = parse_list(spec, ',')?;
        let [a, b] = w[..] else { bail!("--lex takes two bounds, `a,b`") };
        let report = lex_counterexample((a, b));
        if !(report.associative && report.commutative && report.identity.is_some() && report.realizes_lex) {
            return Err(InvariantBreach("lexicographic monoid failed its axioms".into()).into());
        }
        eprintln!(
            "lex window ({a},{b}): abelian monoid realizing the order; cancellativity fails at {:?}",
            report.cancellativity_witness
        );
        let verdicts = BTreeMap::from([("cancellative".to_string(), report.cancellativity_witness.is_none().to_string())]);
        rec.emit(verdicts, Value::Null, serde_json::to_value(&report)?)?;
        return Ok(Status::Done);
    }
    let p = presentation(&mut rec, args)?;
    let w = window(args, p.free_rank())?;
    let t = truncated_cayley(&p, &w)?;
    let check = check_auto_equivalent(&t)?;
    let mut verdicts = BTreeMap::from([("auto_equivalent_on_window".to_string(), check.passed.to_string())]);
    let mut result = json!({"check": check});
    eprintln!(
        "window check: {} ({} violations), atoms {:?}",
        if check.passed { "pass" } else { "fail" },
        check.violation_count,
        check.atom_labels
    );
    if do_roundtrip {
        let bound = bound.unwrap_or(2 * w.bounds.iter().map(|b| b.abs()).sum::<i64>().max(1));
        let r = roundtrip(&p, &w, bound)?;
        verdicts.insert("roundtrip".into(), r.passed().to_string());
        eprintln!(
            "roundtrip: {} (free rank {}, torsion {:?}, atom images {:?})",
            r.passed(),
            r.quotient.free_rank,
            r.quotient.torsion,
            r.quotient.atom_images
        );
        result["roundtrip"] = json!({
            "passed": r.passed(),
            "atoms": r.atoms,
            "lattice": r.lattice,
            "quotient": r.quotient,
            "recovered": r.recovered.to_json(),
            "embeds": r.embeds,
            "rank_matches": r.rank_matches,
            "same_window_isomorphic": r.same_window_isomorphic,
        });
    }
    rec.emit(verdicts, Value::Null, result)?;
    Ok(Status::Done)
}

fn random_poset(n: usize, density: f64, seed: u64) -> Result<Poset> {
    if !(0.0..=1.0).contains(&density) {
        bail!("density must lie in [0, 1]");
    }
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((i, j));
            }
        }
    }
    Ok(Poset::from_relations(n, &pairs)?)
}

#[allow(clippy::too_many_arguments)]
fn cmd_export(
    mut rec: Recorder,
    input: Option<&Path>,
    cert: Option<&Path>,
    random: Option<usize>,
    density: f64,
    seed: u64,
    out: Option<&Path>,
) -> Result<Status> {
    if let Some(n) = random {
        let p = random_poset(n, density, seed)?;
        let text = serde_json::to_string(&PosetJson::from_poset(&p))? + "\n";
        write_or_print(out, &text)?;
        eprintln!("random poset: {n} elements, {} covers", p.hasse().len());
        return Ok(Status::Done);
    }
    let input = input.ok_or_else(|| anyhow!("--in is required"))?;
    let p = parse_poset(&mut rec, input)?;
    let highlight = match cert {
        Some(path) => {
            let text = rec.read(path)?;
            let j: CertificateJson = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            let c = Certificate::from_json(&j)?;
            verify_certificate(&p, &c).map_err(|r| anyhow!("certificate does not realize the poset: {}", r.name()))?;
            Some(c.s_subset)
        }
        None => None,
    };
    write_or_print(out, &export_dot(&p, highlight.as_ref()))?;
    eprintln!("{} nodes, {} edges", p.len(), p.hasse().len());
    Ok(Status::Done)
}

fn run(cli: Cli) -> Result<Status> {
    let rec = Recorder { start: Instant::now(), inputs: BTreeMap::new() };
    let threads = cli.threads;
    match &cli.command {
        Command::Recognize { class, input, out, search } => {
            cmd_recognize(rec, *class, input, out.as_deref(), search, threads)
        }
        Command::Classify { input, search } => cmd_classify(rec, input, search, threads),
        Command::Census { n, out, search } => cmd_census(rec, *n, out.as_deref(), search, threads),
        Command::Construct { pipeline, out } => cmd_construct(rec, pipeline, out.as_deref()),
        Command::Numsem { monoid, out } => cmd_numsem(rec, monoid, out.as_deref()),
        Command::Autoequiv { monoid, roundtrip, bound, lex } => {
            cmd_autoequiv(rec, monoid, *roundtrip, *bound, lex.as_deref())
        }
        Command::Export { input, cert, random, density, out } => {
            cmd_export(rec, input.as_deref(), cert.as_deref(), *random, *density, cli.seed, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Status::Done) => ExitCode::SUCCESS,
        Ok(Status::Unknown) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InvariantBreach>().is_some() {
                ExitCode::from(3)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
