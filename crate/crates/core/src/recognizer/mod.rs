//! Deciding membership in the Cayley classes by exhaustive table search.
//!
//! A `yes` comes with a certificate that has passed
//! [`verify_certificate`]. A `no` means every candidate subsemigroup was
//! refuted; the attached log counts which constraint closed each branch.
//! Running out of budget gives `unknown`, never `no`.

mod engine;
mod prune;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{
    cayley_poset, inflationary_act, Certificate, Kind, OpTable, Rejection, SemigroupAct,
    DEFAULT_INFLATIONARY_CAP,
};
use crate::poset::{bitset_of, enumerate_posets, Poset, PosetError, PosetJson};

use engine::{Engine, Flow, OrderMasks, Shared};
pub use engine::Constraint;
pub use prune::{monoid_feasibility_prune, monoid_obstruction, MonoidObstruction};

/// Default node budget per query.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Largest poset size accepted by [`census`] unless a larger cap is passed.
pub const CENSUS_CAP: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassQuery {
    Semigroup,
    Monoid,
    Full,
    FullMonoid,
    Act,
}

impl ClassQuery {
    pub const ALL: [ClassQuery; 5] = [
        ClassQuery::Semigroup,
        ClassQuery::Monoid,
        ClassQuery::Full,
        ClassQuery::FullMonoid,
        ClassQuery::Act,
    ];

    pub fn kind(self) -> Option<Kind> {
        match self {
            ClassQuery::Semigroup => Some(Kind::Semigroup),
            ClassQuery::Monoid => Some(Kind::Monoid),
            ClassQuery::Full => Some(Kind::Full),
            ClassQuery::FullMonoid => Some(Kind::FullMonoid),
            ClassQuery::Act => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self.kind() {
            Some(k) => k.as_str(),
            None => "act",
        }
    }
}

impl From<Kind> for ClassQuery {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Semigroup => ClassQuery::Semigroup,
            Kind::Monoid => ClassQuery::Monoid,
            Kind::Full => ClassQuery::Full,
            Kind::FullMonoid => ClassQuery::FullMonoid,
        }
    }
}

impl fmt::Display for ClassQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassQuery {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "semigroup" => Ok(ClassQuery::Semigroup),
            "monoid" => Ok(ClassQuery::Monoid),
            "full" => Ok(ClassQuery::Full),
            "full-monoid" | "full_monoid" => Ok(ClassQuery::FullMonoid),
            "act" => Ok(ClassQuery::Act),
            other => Err(format!("unknown class {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Use the lemma-based propagation and candidate filters. Turning this
    /// off leaves only the defining constraints.
    pub prune: bool,
    /// Single-threaded, and the first certificate found is the
    /// lexicographically least over (subset mask, flattened table).
    pub deterministic: bool,
    /// Worker count when not deterministic; 0 picks the rayon default.
    pub threads: usize,
    pub budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { prune: true, deterministic: false, threads: 0, budget: DEFAULT_BUDGET }
    }
}

impl SearchConfig {
    pub fn deterministic() -> Self {
        SearchConfig { deterministic: true, ..Self::default() }
    }

    pub fn with_budget(self, budget: u64) -> Self {
        SearchConfig { budget, ..self }
    }

    pub fn without_pruning(self) -> Self {
        SearchConfig { prune: false, ..self }
    }
}

/// Evidence for a `yes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Table(Certificate),
    /// The inflationary monoid act.
    Act(Box<SemigroupAct>),
    /// Every finite poset is an act poset; the explicit inflationary monoid
    /// was too large to build.
    ActTheorem { monoid_size_exceeds: usize },
}

/// Why no certificate exists: counts of refuted candidates and closed
/// branches, or the verdict it was derived from.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustionLog {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derived_from: Option<String>,
    pub candidates: usize,
    pub candidates_pruned: BTreeMap<String, u64>,
    pub branches_closed: BTreeMap<String, u64>,
}

impl ExhaustionLog {
    pub fn derived(reason: &str) -> Self {
        ExhaustionLog { derived_from: Some(reason.to_string()), ..Self::default() }
    }

    fn prune(&mut self, reason: &str) {
        *self.candidates_pruned.entry(reason.to_string()).or_default() += 1;
    }

    fn add_closed(&mut self, closed: &[u64; 6]) {
        for c in Constraint::ALL {
            let k = closed[c as usize];
            if k > 0 {
                *self.branches_closed.entry(c.name().to_string()).or_default() += k;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Yes(Witness),
    No(ExhaustionLog),
    Unknown,
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown)
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Yes(Witness::Table(c)) => Some(c),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Yes(_) => "yes",
            Verdict::No(_) => "no",
            Verdict::Unknown => "unknown",
        }
    }

    /// `yes`, `no` and `unknown` as `Some(true)`, `Some(false)`, `None`.
    pub fn decided(&self) -> Option<bool> {
        match self {
            Verdict::Yes(_) => Some(true),
            Verdict::No(_) => Some(false),
            Verdict::Unknown => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Verdict::Yes(Witness::Table(c)) => json!({"verdict": "yes", "certificate": c.to_json()}),
            Verdict::Yes(Witness::Act(a)) => json!({
                "verdict": "yes",
                "act": {"monoid_size": a.semigroup().len(), "action": a.action_rows()},
            }),
            Verdict::Yes(Witness::ActTheorem { monoid_size_exceeds }) => json!({
                "verdict": "yes",
                "act": {"monoid_size_exceeds": monoid_size_exceeds},
            }),
            Verdict::No(log) => json!({"verdict": "no", "exhaustion": log}),
            Verdict::Unknown => json!({"verdict": "unknown"}),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub elapsed: Duration,
}

impl SearchStats {
    fn add(&mut self, other: SearchStats) {
        self.nodes += other.nodes;
        self.elapsed += other.elapsed;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub verdict: Verdict,
    pub stats: SearchStats,
}

/// Checks a certificate against a poset; see [`Certificate::verify`].
pub fn verify_certificate(p: &Poset, cert: &Certificate) -> Result<(), Rejection> {
    cert.verify(p)
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    s_mask: u64,
    identity: Option<usize>,
}

fn mask_of(s: &FixedBitSet) -> u64 {
    s.ones().fold(0, |m, i| m | 1 << i)
}

fn all_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Candidate `(S, identity)` pairs for a kind, in increasing order of the
/// subset mask.
fn candidates(p: &Poset, kind: Kind, prune: bool, log: &mut ExhaustionLog) -> Vec<Candidate> {
    let n = p.len();
    let all = all_mask(n);
    let largest_up = (0..n).map(|x| p.up(x).count_ones(..)).max().unwrap_or(0);
    match kind {
        Kind::Full => vec![Candidate { s_mask: all, identity: None }],
        Kind::FullMonoid => match p.global_min() {
            Some(z) => vec![Candidate { s_mask: all, identity: Some(z) }],
            None => {
                log.prune("no_global_minimum");
                Vec::new()
            }
        },
        Kind::Monoid => {
            let mut out: Vec<Candidate> = Vec::new();
            for e in 0..n {
                if prune {
                    if let Some(ob) = monoid_obstruction(p, e) {
                        log.prune(match ob {
                            MonoidObstruction::UpsetTooSmall { .. } => "upset_too_small",
                            MonoidObstruction::NoSurjection { .. } => "no_surjection",
                            MonoidObstruction::NoInjection { .. } => "no_injection",
                        });
                        continue;
                    }
                }
                out.push(Candidate { s_mask: mask_of(p.up(e)), identity: Some(e) });
            }
            out.sort_by_key(|c| c.s_mask);
            out
        }
        Kind::Semigroup => {
            if prune {
                // a semigroup poset with a global minimum is a full monoid
                // poset whose identity is that minimum
                if let Some(z) = p.global_min() {
                    return vec![Candidate { s_mask: all, identity: Some(z) }];
                }
            }
            let mut out = Vec::new();
            for s in p.upsets() {
                if prune && s.count_ones(..) < largest_up {
                    log.prune("subset_too_small");
                    continue;
                }
                out.push(Candidate { s_mask: mask_of(&s), identity: None });
            }
            out
        }
    }
}

fn make_certificate(p: &Poset, kind: Kind, cand: Candidate, table: Vec<usize>) -> Option<Certificate> {
    let n = p.len();
    let table = OpTable::new(n, table).ok()?;
    let s_subset = bitset_of(n, (0..n).filter(|&i| cand.s_mask >> i & 1 == 1));
    let identity = if kind.is_monoid() { cand.identity } else { None };
    let cert = Certificate { kind, identity, s_subset, table };
    cert.verify(p).ok().map(|_| cert)
}

/// Runs the search over all candidates, stopping after `limit` verified
/// certificates.
fn run(
    p: &Poset,
    kind: Kind,
    config: &SearchConfig,
    limit: usize,
) -> (Vec<Certificate>, ExhaustionLog, bool, SearchStats) {
    let start = Instant::now();
    let mut log = ExhaustionLog::default();
    if p.len() > 63 || (kind == Kind::Semigroup && p.len() >= 32) {
        return (Vec::new(), log, true, SearchStats::default());
    }
    let cands = candidates(p, kind, config.prune, &mut log);
    log.candidates = cands.len();
    let order = OrderMasks::new(p);
    let shared = Shared::new(config.budget);
    let found: Mutex<Vec<Certificate>> = Mutex::new(Vec::new());
    let closed: Mutex<[u64; 6]> = Mutex::new([0; 6]);
    let merge = |c: &[u64; 6]| {
        let mut g = closed.lock().expect("closed counters");
        for i in 0..6 {
            g[i] += c[i];
        }
    };
    let mut rejected = 0u64;

    let parallel = !config.deterministic && config.threads != 1 && limit == 1;
    if !parallel {
        'cands: for cand in &cands {
            let mut eng = match Engine::new(&order, cand.s_mask, cand.identity, config.prune, &shared) {
                Ok(e) => e,
                Err(c) => {
                    let mut one = [0; 6];
                    one[c as usize] = 1;
                    merge(&one);
                    continue;
                }
            };
            let mut on_solution = |t: Vec<usize>| match make_certificate(p, kind, *cand, t) {
                Some(cert) => {
                    let mut f = found.lock().expect("found certificates");
                    f.push(cert);
                    f.len() < limit
                }
                None => {
                    rejected += 1;
                    true
                }
            };
            let flow = eng.search(&mut on_solution);
            eng.flush();
            merge(&eng.closed);
            if flow != Flow::Continue {
                break 'cands;
            }
        }
    } else {
        // top-level branches: candidate subsets and the values of the
        // first undecided cell
        let mut items: Vec<(Candidate, Engine)> = Vec::new();
        for cand in &cands {
            match Engine::new(&order, cand.s_mask, cand.identity, config.prune, &shared) {
                Err(c) => {
                    let mut one = [0; 6];
                    one[c as usize] = 1;
                    merge(&one);
                }
                Ok(eng) => match eng.next_cell() {
                    None => items.push((*cand, eng)),
                    Some(cell) => {
                        let mut d = eng.domains()[cell];
                        while d != 0 {
                            let v = d.trailing_zeros() as usize;
                            d &= d - 1;
                            let mut branch = eng.clone();
                            match branch.assign(cell, v) {
                                Ok(_) => items.push((*cand, branch)),
                                Err(c) => {
                                    branch.record(c);
                                    merge(&branch.closed);
                                }
                            }
                        }
                    }
                },
            }
        }
        let work = || {
            items.into_par_iter().for_each(|(cand, mut eng)| {
                if shared.stopped() {
                    return;
                }
                let mut on_solution = |t: Vec<usize>| match make_certificate(p, kind, cand, t) {
                    Some(cert) => {
                        found.lock().expect("found certificates").push(cert);
                        shared.request_stop();
                        false
                    }
                    None => true,
                };
                eng.search(&mut on_solution);
                eng.flush();
                merge(&eng.closed);
            })
        };
        match rayon::ThreadPoolBuilder::new().num_threads(config.threads).build() {
            Ok(pool) => pool.install(work),
            Err(_) => work(),
        }
    }
    log.add_closed(&closed.into_inner().expect("closed counters"));
    if rejected > 0 {
        log.branches_closed.insert("verifier".into(), rejected);
    }
    let found = found.into_inner().expect("found certificates");
    let stats = SearchStats { nodes: shared.nodes(), elapsed: start.elapsed() };
    (found, log, shared.exhausted(), stats)
}

fn act_verdict(p: &Poset) -> Verdict {
    match inflationary_act(p, DEFAULT_INFLATIONARY_CAP) {
        Ok(act) => {
            let realized = cayley_poset(&act).map(|q| q.same_order(p)).unwrap_or(false);
            assert!(realized, "inflationary act must realize the poset");
            Verdict::Yes(Witness::Act(Box::new(act)))
        }
        Err(_) => Verdict::Yes(Witness::ActTheorem { monoid_size_exceeds: DEFAULT_INFLATIONARY_CAP }),
    }
}

/// Decides whether `p` belongs to the class `q`.
pub fn recognize(p: &Poset, q: ClassQuery, config: &SearchConfig) -> Outcome {
    let Some(kind) = q.kind() else {
        let start = Instant::now();
        let verdict = act_verdict(p);
        return Outcome { verdict, stats: SearchStats { nodes: 0, elapsed: start.elapsed() } };
    };
    let (mut found, log, exhausted, stats) = run(p, kind, config, 1);
    let verdict = if let Some(cert) = found.pop() {
        Verdict::Yes(Witness::Table(cert))
    } else if exhausted {
        Verdict::Unknown
    } else {
        Verdict::No(log)
    };
    Outcome { verdict, stats }
}

/// Up to `limit` verified certificates of the given kind, in search order.
/// Always single-threaded.
pub fn enumerate_certificates(p: &Poset, kind: Kind, config: &SearchConfig, limit: usize) -> Vec<Certificate> {
    let cfg = SearchConfig { deterministic: true, ..*config };
    run(p, kind, &cfg, limit.max(1)).0
}

/// Searches a single subsemigroup `s` (and identity, if given) only.
pub fn recognize_candidate(
    p: &Poset,
    kind: Kind,
    s: &FixedBitSet,
    identity: Option<usize>,
    config: &SearchConfig,
) -> Outcome {
    let start = Instant::now();
    let order = OrderMasks::new(p);
    let shared = Shared::new(config.budget);
    let cand = Candidate { s_mask: mask_of(s), identity };
    let mut log = ExhaustionLog { candidates: 1, ..Default::default() };
    let mut cert = None;
    match Engine::new(&order, cand.s_mask, identity, config.prune, &shared) {
        Err(c) => {
            let mut one = [0; 6];
            one[c as usize] = 1;
            log.add_closed(&one);
        }
        Ok(mut eng) => {
            eng.search(&mut |t| match make_certificate(p, kind, cand, t) {
                Some(c) => {
                    cert = Some(c);
                    false
                }
                None => true,
            });
            eng.flush();
            log.add_closed(&eng.closed);
        }
    }
    let verdict = match cert {
        Some(c) => Verdict::Yes(Witness::Table(c)),
        None if shared.exhausted() => Verdict::Unknown,
        None => Verdict::No(log),
    };
    Outcome { verdict, stats: SearchStats { nodes: shared.nodes(), elapsed: start.elapsed() } }
}

/// Verdicts for all five classes of one poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassLabelSet {
    pub semigroup: Verdict,
    pub monoid: Verdict,
    pub full: Verdict,
    pub full_monoid: Verdict,
    pub act: Verdict,
    pub stats: SearchStats,
}

impl ClassLabelSet {
    pub fn get(&self, q: ClassQuery) -> &Verdict {
        match q {
            ClassQuery::Semigroup => &self.semigroup,
            ClassQuery::Monoid => &self.monoid,
            ClassQuery::Full => &self.full,
            ClassQuery::FullMonoid => &self.full_monoid,
            ClassQuery::Act => &self.act,
        }
    }

    /// Whether the verdicts respect the inclusions among the classes.
    pub fn is_consistent(&self) -> bool {
        let yes = |v: &Verdict| v.is_yes();
        let ok_fm = !yes(&self.full_monoid) || (yes(&self.full) && yes(&self.monoid));
        let ok_sg = !(yes(&self.full) || yes(&self.monoid)) || yes(&self.semigroup);
        ok_fm && ok_sg && yes(&self.act)
    }

    /// Short name of the diagram cell, such as `semigroup+full`.
    pub fn cell(&self) -> String {
        let mut parts = Vec::new();
        for q in [ClassQuery::Semigroup, ClassQuery::Monoid, ClassQuery::Full, ClassQuery::FullMonoid] {
            match self.get(q) {
                Verdict::Yes(_) => parts.push(q.as_str().to_string()),
                Verdict::Unknown => parts.push(format!("{q}?")),
                Verdict::No(_) => {}
            }
        }
        if parts.is_empty() {
            "act".into()
        } else {
            parts.join("+")
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "semigroup": self.semigroup.to_json(),
            "monoid": self.monoid.to_json(),
            "full": self.full.to_json(),
            "full_monoid": self.full_monoid.to_json(),
            "act": {"verdict": self.act.label()},
            "cell": self.cell(),
            "nodes": self.stats.nodes,
            "elapsed_ms": self.stats.elapsed.as_millis() as u64,
        })
    }
}

fn derive_yes(p: &Poset, from: &Verdict, kind: Kind) -> Option<Verdict> {
    let cert = from.certificate()?.clone().upgraded().as_kind(kind)?;
    cert.verify(p).ok()?;
    Some(Verdict::Yes(Witness::Table(cert)))
}

/// Classifies `p` into the inclusion diagram. Verdicts implied by others
/// are derived instead of searched; the full monoid verdict comes from the
/// semigroup verdict and the existence of a global minimum.
pub fn classify(p: &Poset, config: &SearchConfig) -> ClassLabelSet {
    let mut stats = SearchStats::default();
    let search = |q: ClassQuery, stats: &mut SearchStats| {
        let o = recognize(p, q, config);
        stats.add(o.stats);
        o.verdict
    };
    let act = act_verdict(p);
    let mut semigroup = search(ClassQuery::Semigroup, &mut stats);

    let full_monoid = if p.global_min().is_none() {
        Verdict::No(ExhaustionLog::derived("no_global_minimum"))
    } else if semigroup.is_no() {
        Verdict::No(ExhaustionLog::derived("semigroup"))
    } else {
        match derive_yes(p, &semigroup, Kind::FullMonoid) {
            Some(v) => v,
            None => search(ClassQuery::FullMonoid, &mut stats),
        }
    };

    let derive = |kind: Kind, stats: &mut SearchStats| {
        if let Some(v) = derive_yes(p, &full_monoid, kind).or_else(|| derive_yes(p, &semigroup, kind)) {
            v
        } else if semigroup.is_no() {
            Verdict::No(ExhaustionLog::derived("semigroup"))
        } else {
            search(kind.into(), stats)
        }
    };
    let full = derive(Kind::Full, &mut stats);
    let monoid = derive(Kind::Monoid, &mut stats);

    if semigroup.is_unknown() {
        if let Some(v) = derive_yes(p, &full, Kind::Semigroup).or_else(|| derive_yes(p, &monoid, Kind::Semigroup)) {
            semigroup = v;
        }
    }
    ClassLabelSet { semigroup, monoid, full, full_monoid, act, stats }
}

/// One census row.
#[derive(Debug, Clone)]
pub struct CensusEntry {
    pub poset: Poset,
    pub labels: ClassLabelSet,
}

/// Inclusions `smaller ⊂ larger` for which the census records a smallest
/// poset in `larger` but not in `smaller`.
pub const STRICT_INCLUSIONS: [(ClassQuery, ClassQuery); 5] = [
    (ClassQuery::FullMonoid, ClassQuery::Full),
    (ClassQuery::FullMonoid, ClassQuery::Monoid),
    (ClassQuery::Full, ClassQuery::Semigroup),
    (ClassQuery::Monoid, ClassQuery::Semigroup),
    (ClassQuery::Semigroup, ClassQuery::Act),
];

#[derive(Debug, Clone)]
pub struct CensusReport {
    pub n_max: usize,
    pub entries: Vec<CensusEntry>,
    /// Number of posets per diagram cell.
    pub cells: BTreeMap<String, usize>,
    /// Index into `entries` of the first separating poset, keyed by
    /// `"smaller<larger"`.
    pub witnesses: BTreeMap<String, Option<usize>>,
}

impl CensusReport {
    pub fn count_with(&self, q: ClassQuery) -> usize {
        self.entries.iter().filter(|e| e.labels.get(q).is_yes()).count()
    }

    pub fn to_json(&self) -> Value {
        let witnesses: BTreeMap<&String, Value> = self
            .witnesses
            .iter()
            .map(|(k, v)| {
                let w = v.map(|i| {
                    json!({"index": i, "poset": PosetJson::from_poset(&self.entries[i].poset)})
                });
                (k, w.unwrap_or(Value::Null))
            })
            .collect();
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                let mut labels = BTreeMap::new();
                for q in ClassQuery::ALL {
                    labels.insert(q.as_str(), e.labels.get(q).label());
                }
                json!({
                    "poset": PosetJson::from_poset(&e.poset),
                    "cell": e.labels.cell(),
                    "labels": labels,
                    "nodes": e.labels.stats.nodes,
                })
            })
            .collect();
        json!({
            "n_max": self.n_max,
            "posets": self.entries.len(),
            "cells": self.cells,
            "witnesses": witnesses,
            "entries": entries,
        })
    }
}

/// Classifies every isomorphism class of posets with at most `n_max`
/// elements. `cap` bounds `n_max`.
pub fn census(n_max: usize, cap: usize, config: &SearchConfig) -> Result<CensusReport, PosetError> {
    if n_max > cap {
        return Err(PosetError::SizeLimit { n: n_max, limit: cap });
    }
    let mut entries = Vec::new();
    for n in 1..=n_max {
        for poset in enumerate_posets(n, cap)? {
            let labels = classify(&poset, config);
            entries.push(CensusEntry { poset, labels });
        }
    }
    let mut cells = BTreeMap::new();
    for e in &entries {
        *cells.entry(e.labels.cell()).or_insert(0) += 1;
    }
    let mut witnesses = BTreeMap::new();
    for (small, large) in STRICT_INCLUSIONS {
        let w = entries
            .iter()
            .position(|e| e.labels.get(large).is_yes() && e.labels.get(small).is_no());
        witnesses.insert(format!("{small}<{large}"), w);
    }
    Ok(CensusReport { n_max, entries, cells, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det() -> SearchConfig {
        SearchConfig::deterministic()
    }

    #[test]
    fn singleton_is_full_monoid() {
        let o = recognize(&Poset::chain(1), ClassQuery::FullMonoid, &det());
        assert!(o.verdict.is_yes());
    }

    #[test]
    fn n_poset_monoid() {
        let p = Poset::n_poset();
        let o = recognize(&p, ClassQuery::Monoid, &det());
        let cert = o.verdict.certificate().expect("monoid certificate");
        assert!(verify_certificate(&p, cert).is_ok());
        assert_eq!(cert.kind, Kind::Monoid);
    }

    #[test]
    fn n_poset_classification() {
        let labels = classify(&Poset::n_poset(), &det());
        assert!(labels.semigroup.is_yes());
        assert!(labels.monoid.is_yes());
        assert!(labels.full.is_yes());
        assert!(labels.full_monoid.is_no());
        assert!(labels.is_consistent());
    }

    #[test]
    fn deterministic_certificates_repeat() {
        let p = Poset::n_poset();
        let a = recognize(&p, ClassQuery::Full, &det());
        let b = recognize(&p, ClassQuery::Full, &det());
        assert_eq!(a.verdict, b.verdict);
    }

    #[test]
    fn tiny_budget_gives_unknown() {
        let p = Poset::nat_interval(4);
        let o = recognize(&p, ClassQuery::Full, &det().with_budget(5));
        assert!(o.verdict.is_unknown());
    }

    #[test]
    fn parse_class_names() {
        assert_eq!("full-monoid".parse::<ClassQuery>(), Ok(ClassQuery::FullMonoid));
        assert!("lattice".parse::<ClassQuery>().is_err());
    }

    #[test]
    fn census_one() {
        let r = census(1, CENSUS_CAP, &det()).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert!(r.entries[0].labels.full_monoid.is_yes());
        assert!(census(7, CENSUS_CAP, &det()).is_err());
    }
}
