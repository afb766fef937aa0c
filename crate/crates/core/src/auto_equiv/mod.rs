//! Finitely generated pointed submonoids of abelian groups.
//!
//! A monoid `M` inside `Z^m ⊕ Z/d_1 ⊕ … ⊕ Z/d_r` is given by generators.
//! Its Cayley poset `s <= t iff t - s ∈ M` is infinite, so everything here
//! works on a window: a box on the free coordinates. Torsion coordinates
//! are unbounded (they are finite anyway).

mod lattice;
mod lex;

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::{is_isomorphic, Poset, PosetError, PosetJson};

pub use lattice::{
    hermite, hermite_rows, quotient_structure, smith_normal_form, smith_normal_form_in, ExactInt, LatticeBasis,
    QuotientStructure, SmithForm, Snf,
};
pub use lex::{lex_counterexample, lex_poset, lex_table, LexReport};

#[derive(Debug, Error)]
pub enum AutoEquivError {
    #[error("generator {index} has {found} coordinates, expected {expected}")]
    ArityMismatch { index: usize, expected: usize, found: usize },
    #[error("torsion modulus {0} must be at least 2")]
    InvalidModulus(i64),
    #[error("generator {0} is zero")]
    ZeroGenerator(usize),
    #[error("monoid is not pointed: the combination {0:?} of generators is zero")]
    NotPointed(Vec<u64>),
    #[error("pointedness could not be decided with coefficients up to {0}")]
    PointednessUndetermined(u64),
    #[error("window has {found} bounds, expected {expected}")]
    WindowArity { expected: usize, found: usize },
    #[error("poset has no global minimum")]
    NoMinimum,
    #[error("integer overflow")]
    Overflow,
    #[error("{0}")]
    Shape(String),
    #[error("truncation would exceed {0} elements")]
    TooLarge(usize),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// Coefficient bound used by [`make_presentation`] when searching for a
/// zero combination.
pub const POINTEDNESS_BOUND: u64 = 8;

/// Largest number of monoid elements materialized by one enumeration.
pub const MEMBER_LIMIT: usize = 1 << 20;

/// Outcome of the pointedness check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pointedness {
    /// Certified by an integer functional positive on every generator's
    /// free part.
    Pointed { weight: Vec<i64> },
    /// A nontrivial nonnegative combination of generators is zero.
    NotPointed { combination: Vec<u64> },
    /// Neither certificate found with coefficients up to `bound`.
    Undetermined { bound: u64 },
}

/// `M = ⟨generators⟩` inside `Z^free_rank ⊕ Z/torsion[0] ⊕ …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidPresentation {
    free_rank: usize,
    torsion: Vec<i64>,
    generators: Vec<Vec<i64>>,
    pointed: Pointedness,
}

/// Serialized form: `{"free_rank": m, "torsion": [d…], "generators": [[…]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationJson {
    pub free_rank: usize,
    #[serde(default)]
    pub torsion: Vec<i64>,
    pub generators: Vec<Vec<i64>>,
}

/// Validates the shape, reduces torsion coordinates and runs the
/// pointedness check.
pub fn make_presentation(
    free_rank: usize,
    torsion: Vec<i64>,
    generators: Vec<Vec<i64>>,
) -> Result<MonoidPresentation, AutoEquivError> {
    if let Some(&d) = torsion.iter().find(|&&d| d < 2) {
        return Err(AutoEquivError::InvalidModulus(d));
    }
    let arity = free_rank + torsion.len();
    let mut p = MonoidPresentation {
        free_rank,
        torsion,
        generators: Vec::with_capacity(generators.len()),
        pointed: Pointedness::Undetermined { bound: 0 },
    };
    for (index, mut g) in generators.into_iter().enumerate() {
        if g.len() != arity {
            return Err(AutoEquivError::ArityMismatch { index, expected: arity, found: g.len() });
        }
        p.reduce(&mut g);
        if g.iter().all(|&x| x == 0) {
            return Err(AutoEquivError::ZeroGenerator(index));
        }
        p.generators.push(g);
    }
    p.pointed = is_pointed(&p, POINTEDNESS_BOUND);
    Ok(p)
}

impl MonoidPresentation {
    pub fn from_json(j: &PresentationJson) -> Result<Self, AutoEquivError> {
        make_presentation(j.free_rank, j.torsion.clone(), j.generators.clone())
    }

    pub fn to_json(&self) -> PresentationJson {
        PresentationJson { free_rank: self.free_rank, torsion: self.torsion.clone(), generators: self.generators.clone() }
    }

    /// Numerical semigroup `⟨gens⟩ ⊂ N`.
    pub fn numerical(gens: &[i64]) -> Result<Self, AutoEquivError> {
        make_presentation(1, Vec::new(), gens.iter().map(|&g| vec![g]).collect())
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[i64] {
        &self.torsion
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn pointedness(&self) -> &Pointedness {
        &self.pointed
    }

    pub fn arity(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.arity()]
    }

    fn reduce(&self, v: &mut [i64]) {
        for (x, &d) in v[self.free_rank..].iter_mut().zip(&self.torsion) {
            *x = x.rem_euclid(d);
        }
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Result<Vec<i64>, AutoEquivError> {
        let mut v = a.iter().zip(b).map(|(x, y)| x.checked_add(*y)).collect::<Option<Vec<_>>>().ok_or(AutoEquivError::Overflow)?;
        self.reduce(&mut v);
        Ok(v)
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Result<Vec<i64>, AutoEquivError> {
        let mut v = a.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect::<Option<Vec<_>>>().ok_or(AutoEquivError::Overflow)?;
        self.reduce(&mut v);
        Ok(v)
    }

    /// `Σ c_i · g_i`.
    pub fn combine(&self, coeffs: &[i64], gens: &[Vec<i64>]) -> Result<Vec<i64>, AutoEquivError> {
        let mut v = self.zero();
        for (c, g) in coeffs.iter().zip(gens) {
            for (x, y) in v.iter_mut().zip(g) {
                *x = y.checked_mul(*c).and_then(|t| x.checked_add(t)).ok_or(AutoEquivError::Overflow)?;
            }
        }
        self.reduce(&mut v);
        Ok(v)
    }

    fn weight_vector(&self) -> Result<&[i64], AutoEquivError> {
        match &self.pointed {
            Pointedness::Pointed { weight } => Ok(weight),
            Pointedness::NotPointed { combination } => Err(AutoEquivError::NotPointed(combination.clone())),
            Pointedness::Undetermined { bound } => Err(AutoEquivError::PointednessUndetermined(*bound)),
        }
    }

    /// Value of the pointedness functional; every generator weighs at
    /// least one.
    pub fn weight(&self, v: &[i64]) -> Result<i64, AutoEquivError> {
        let w = self.weight_vector()?;
        w.iter()
            .zip(v)
            .try_fold(0i64, |acc, (a, b)| a.checked_mul(*b).and_then(|t| acc.checked_add(t)))
            .ok_or(AutoEquivError::Overflow)
    }

    /// All members of weight at most `max_weight`.
    pub fn members_up_to(&self, max_weight: i64) -> Result<HashSet<Vec<i64>>, AutoEquivError> {
        self.members_of(&self.generators, max_weight)
    }

    fn members_of(&self, gens: &[Vec<i64>], max_weight: i64) -> Result<HashSet<Vec<i64>>, AutoEquivError> {
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        if max_weight < 0 {
            return Ok(seen);
        }
        seen.insert(self.zero());
        queue.push_back(self.zero());
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.add(&x, g)?;
                if self.weight(&y)? <= max_weight && seen.insert(y.clone()) {
                    if seen.len() > MEMBER_LIMIT {
                        return Err(AutoEquivError::TooLarge(MEMBER_LIMIT));
                    }
                    queue.push_back(y);
                }
            }
        }
        Ok(seen)
    }

    /// Membership of `v` in `M`.
    pub fn contains(&self, v: &[i64]) -> Result<bool, AutoEquivError> {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        let w = self.weight(&v)?;
        Ok(self.members_up_to(w)?.contains(&v))
    }

    /// Indices of the minimal generating set: generators that are not
    /// nonnegative combinations of the others (of repeated generators the
    /// first is kept).
    pub fn atoms(&self) -> Result<Vec<usize>, AutoEquivError> {
        let mut out = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            if self.generators[..i].contains(g) {
                continue;
            }
            let others: Vec<Vec<i64>> = self
                .generators
                .iter()
                .enumerate()
                .filter(|&(j, h)| j != i && h != g)
                .map(|(_, h)| h.clone())
                .collect();
            if !self.members_of(&others, self.weight(g)?)?.contains(g) {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// `13` for numerical semigroups, `(1,0)` otherwise.
    pub fn label(&self, v: &[i64]) -> String {
        if v.len() == 1 {
            v[0].to_string()
        } else {
            let parts: Vec<String> = v.iter().map(i64::to_string).collect();
            format!("({})", parts.join(","))
        }
    }
}

/// Three-valued pointedness: `M ∩ -M = {0}`.
///
/// A generator with zero free part has finite order, which is a zero
/// combination. Otherwise `M` is pointed exactly when the cone of the free
/// parts is, which is certified by a small integer functional positive on
/// all of them; failing that, nonnegative combinations with coefficients up
/// to `bound` are searched for zero.
pub fn is_pointed(p: &MonoidPresentation, bound: u64) -> Pointedness {
    let m = p.free_rank;
    let k = p.generators.len();
    for (i, g) in p.generators.iter().enumerate() {
        if g[..m].iter().all(|&x| x == 0) {
            let order = p.torsion.iter().zip(&g[m..]).fold(1i64, |acc, (&d, &x)| {
                let o = d / num_integer::gcd(d, x);
                num_integer::lcm(acc, o)
            });
            let mut combination = vec![0; k];
            combination[i] = order as u64;
            return Pointedness::NotPointed { combination };
        }
    }
    let positive = |w: &[i64]| {
        p.generators
            .iter()
            .all(|g| w.iter().zip(&g[..m]).map(|(a, b)| (*a as i128) * (*b as i128)).sum::<i128>() > 0)
    };
    let ones = vec![1; m];
    if positive(&ones) {
        return Pointedness::Pointed { weight: ones };
    }
    for b in 1..=4i64 {
        if (2 * b + 1).checked_pow(m as u32).is_none_or(|c| c > 1_000_000) {
            break;
        }
        let mut w = vec![-b; m];
        loop {
            if w.iter().any(|x| x.abs() == b) && positive(&w) {
                return Pointedness::Pointed { weight: w };
            }
            let Some(pos) = w.iter().position(|&x| x < b) else { break };
            w[pos] += 1;
            for x in w[..pos].iter_mut() {
                *x = -b;
            }
        }
    }
    // zero combination search
    let limit = (bound + 1).checked_pow(k as u32);
    if limit.is_some_and(|l| l <= 4_000_000) {
        let mut c = vec![0u64; k];
        loop {
            let Some(pos) = c.iter().position(|&x| x < bound) else { break };
            c[pos] += 1;
            for x in c[..pos].iter_mut() {
                *x = 0;
            }
            let coeffs: Vec<i64> = c.iter().map(|&x| x as i64).collect();
            if p.combine(&coeffs, &p.generators).is_ok_and(|v| v.iter().all(|&x| x == 0)) {
                return Pointedness::NotPointed { combination: c };
            }
        }
    }
    Pointedness::Undetermined { bound }
}

/// Box on the free coordinates: `|x_i| <= bounds[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub bounds: Vec<i64>,
}

impl Window {
    pub fn new(bounds: Vec<i64>) -> Self {
        Window { bounds }
    }

    pub fn uniform(free_rank: usize, bound: i64) -> Self {
        Window { bounds: vec![bound; free_rank] }
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.bounds.iter().zip(v).all(|(b, x)| x.abs() <= *b)
    }
}

/// Members of `M` inside a window with the induced Cayley order.
#[derive(Debug, Clone)]
pub struct TruncatedPoset {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
    /// Group vectors, sorted by weight then lexicographically; the neutral
    /// element comes first.
    pub elements: Vec<Vec<i64>>,
    pub poset: Poset,
    pub window: Window,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TruncatedPosetJson {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
    pub elements: Vec<Vec<i64>>,
    pub window: Window,
    pub poset: PosetJson,
}

impl TruncatedPoset {
    /// A hand-assembled truncation; the order is not checked against the
    /// vectors (that is what [`check_auto_equivalent`] is for).
    pub fn from_parts(
        free_rank: usize,
        torsion: Vec<i64>,
        elements: Vec<Vec<i64>>,
        poset: Poset,
        window: Window,
    ) -> Result<Self, AutoEquivError> {
        let arity = free_rank + torsion.len();
        if elements.len() != poset.len() {
            return Err(AutoEquivError::Shape("one vector per poset element is required".into()));
        }
        if let Some(index) = elements.iter().position(|e| e.len() != arity) {
            return Err(AutoEquivError::ArityMismatch { index, expected: arity, found: elements[index].len() });
        }
        if window.bounds.len() != free_rank {
            return Err(AutoEquivError::WindowArity { expected: free_rank, found: window.bounds.len() });
        }
        Ok(TruncatedPoset { free_rank, torsion, elements, poset, window })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, v: &[i64]) -> Option<usize> {
        self.elements.iter().position(|e| e == v)
    }

    fn normalize(&self, mut v: Vec<i64>) -> Vec<i64> {
        for (x, &d) in v[self.free_rank..].iter_mut().zip(&self.torsion) {
            *x = x.rem_euclid(d);
        }
        v
    }

    pub fn to_json(&self) -> TruncatedPosetJson {
        TruncatedPosetJson {
            free_rank: self.free_rank,
            torsion: self.torsion.clone(),
            elements: self.elements.clone(),
            window: self.window.clone(),
            poset: PosetJson::from_poset(&self.poset),
        }
    }
}

/// Members of `M` in the window, ordered by `s <= t iff t - s ∈ M`.
pub fn truncated_cayley(p: &MonoidPresentation, window: &Window) -> Result<TruncatedPoset, AutoEquivError> {
    if window.bounds.len() != p.free_rank {
        return Err(AutoEquivError::WindowArity { expected: p.free_rank, found: window.bounds.len() });
    }
    let w = p.weight_vector()?.to_vec();
    // the heaviest point of the box bounds the weight of every member in it,
    // and of every difference of two members in it
    let max_weight = w
        .iter()
        .zip(&window.bounds)
        .try_fold(0i64, |acc, (a, b)| a.abs().checked_mul(*b).and_then(|t| acc.checked_add(t)))
        .ok_or(AutoEquivError::Overflow)?;
    let members = p.members_up_to(max_weight)?;
    let mut elements: Vec<Vec<i64>> = members.iter().filter(|v| window.contains(v)).cloned().collect();
    let weights: HashMap<Vec<i64>, i64> =
        elements.iter().map(|v| Ok((v.clone(), p.weight(v)?))).collect::<Result<_, AutoEquivError>>()?;
    elements.sort_by(|a, b| weights[a].cmp(&weights[b]).then_with(|| a.cmp(b)));
    let n = elements.len();
    let mut leq = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            leq[i * n + j] = members.contains(&p.sub(&elements[j], &elements[i])?);
        }
    }
    let labels = elements.iter().map(|v| p.label(v)).collect();
    let poset = Poset::from_leq(n, |i, j| leq[i * n + j])?.with_labels(labels)?;
    Ok(TruncatedPoset { free_rank: p.free_rank, torsion: p.torsion.clone(), elements, poset, window: window.clone() })
}

/// A failed requirement of auto-equivalence, by element indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    /// The global minimum is not neutral for the translations.
    MinimumNotNeutral { min: usize, x: usize },
    /// `φ_s(x)` lands in the window but is not an element.
    ImageNotElement { s: usize, x: usize },
    /// `φ_s(x)` is not above `s`.
    OutsideUpset { s: usize, x: usize },
    NotOrderPreserving { s: usize, x: usize, y: usize },
    NotOrderReflecting { s: usize, x: usize, y: usize },
    NotInjective { s: usize, x: usize, y: usize },
    /// `t >= s` but no element of the window is sent to `t` by `φ_s`.
    NotOnto { s: usize, t: usize },
    NotCommuting { s: usize, t: usize, x: usize },
    /// No order isomorphism `P -> ↑x` exists.
    NoOrderIsomorphism { x: usize },
}

/// Result of checking auto-equivalence on a window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutoEquivReport {
    pub passed: bool,
    /// First violations found (at most [`VIOLATION_SAMPLE`]).
    pub violations: Vec<Violation>,
    pub violation_count: usize,
    pub atoms: Vec<usize>,
    pub atom_labels: Vec<String>,
}

pub const VIOLATION_SAMPLE: usize = 16;

/// Where `φ_s` might send something onto `t`.
pub(crate) enum Preimage {
    Found(usize),
    Missing,
    /// The candidate lies outside the window; nothing to check.
    Unknown,
}

#[derive(Default)]
struct Violations {
    sample: Vec<Violation>,
    count: usize,
}

impl Violations {
    fn push(&mut self, v: Violation) {
        self.count += 1;
        if self.sample.len() < VIOLATION_SAMPLE {
            self.sample.push(v);
        }
    }
}

fn atoms_of(p: &Poset, min: usize) -> Vec<usize> {
    (0..p.len()).filter(|&x| x != min && p.down(x).count_ones(..) == 2).collect()
}

/// Checks translations `φ_s = op(s, ·)` on a window. `op` returns `None`
/// when the product leaves the window.
pub(crate) fn check_translations(
    p: &Poset,
    op: &dyn Fn(usize, usize) -> Option<usize>,
    preimage: &dyn Fn(usize, usize) -> Preimage,
) -> Result<AutoEquivReport, AutoEquivError> {
    let min = p.global_min().ok_or(AutoEquivError::NoMinimum)?;
    let n = p.len();
    let mut out = Violations::default();
    for x in 0..n {
        if op(min, x).is_some_and(|y| y != x) || op(x, min).is_some_and(|y| y != x) {
            out.push(Violation::MinimumNotNeutral { min, x });
        }
    }
    let img: Vec<Vec<Option<usize>>> = (0..n).map(|s| (0..n).map(|x| op(s, x)).collect()).collect();
    for s in 0..n {
        for x in 0..n {
            let Some(fx) = img[s][x] else { continue };
            if !p.leq(s, fx) {
                out.push(Violation::OutsideUpset { s, x });
            }
            for y in 0..n {
                let Some(fy) = img[s][y] else { continue };
                if p.leq(x, y) && !p.leq(fx, fy) {
                    out.push(Violation::NotOrderPreserving { s, x, y });
                }
                if p.leq(fx, fy) && !p.leq(x, y) {
                    out.push(Violation::NotOrderReflecting { s, x, y });
                }
                if x < y && fx == fy {
                    out.push(Violation::NotInjective { s, x, y });
                }
            }
        }
        for t in p.up(s).ones() {
            match preimage(s, t) {
                Preimage::Found(x) if img[s][x] == Some(t) => {}
                Preimage::Unknown => {}
                _ => out.push(Violation::NotOnto { s, t }),
            }
        }
        for t in s + 1..n {
            for x in 0..n {
                let a = img[t][x].and_then(|y| img[s][y]);
                let b = img[s][x].and_then(|y| img[t][y]);
                if let (Some(a), Some(b)) = (a, b) {
                    if a != b {
                        out.push(Violation::NotCommuting { s, t, x });
                    }
                }
            }
        }
    }
    let atoms = atoms_of(p, min);
    Ok(AutoEquivReport {
        passed: out.count == 0,
        violations: out.sample,
        violation_count: out.count,
        atom_labels: atoms.iter().map(|&a| p.label(a)).collect(),
        atoms,
    })
}

/// Checks, on the window, that the translations `φ_s(x) = s + x` behave
/// like the maps required by auto-equivalence: the minimum is the neutral
/// element, each `φ_s` maps into `↑s`, is order-preserving, -reflecting and
/// injective, reaches every `t >= s` whose preimage lies in the window, and
/// the maps commute.
pub fn check_auto_equivalent(t: &TruncatedPoset) -> Result<AutoEquivReport, AutoEquivError> {
    let index: HashMap<&[i64], usize> = t.elements.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
    let locate = |v: Vec<i64>| -> Option<Result<usize, ()>> {
        let v = t.normalize(v);
        if !t.window.contains(&v) {
            return None;
        }
        Some(index.get(v.as_slice()).copied().ok_or(()))
    };
    let combine = |a: usize, b: usize, sign: i64| -> Option<Vec<i64>> {
        t.elements[a].iter().zip(&t.elements[b]).map(|(x, y)| x.checked_add(sign * y)).collect()
    };
    let sums: Vec<Vec<Option<Result<usize, ()>>>> = (0..t.len())
        .map(|s| (0..t.len()).map(|x| combine(s, x, 1).and_then(&locate)).collect())
        .collect();
    let mut missing = Violations::default();
    for (s, row) in sums.iter().enumerate() {
        for (x, v) in row.iter().enumerate() {
            if matches!(v, Some(Err(()))) {
                missing.push(Violation::ImageNotElement { s, x });
            }
        }
    }
    let op = |s: usize, x: usize| sums[s][x].and_then(Result::ok);
    let preimage = |s: usize, u: usize| match combine(u, s, -1).and_then(&locate) {
        Some(Ok(x)) => Preimage::Found(x),
        Some(Err(())) => Preimage::Missing,
        None => Preimage::Unknown,
    };
    let mut report = check_translations(&t.poset, &op, &preimage)?;
    if missing.count > 0 {
        report.passed = false;
        report.violation_count += missing.count;
        let room = VIOLATION_SAMPLE.saturating_sub(report.violations.len());
        report.violations.extend(missing.sample.into_iter().take(room));
    }
    Ok(report)
}

/// The definition applied to a finite poset taken as a whole: for every
/// `x` an order isomorphism `P -> ↑x` must exist. Fails for every finite
/// poset with at least two elements.
pub fn check_auto_equivalent_finite(p: &Poset) -> Result<AutoEquivReport, AutoEquivError> {
    let min = p.global_min().ok_or(AutoEquivError::NoMinimum)?;
    let mut out = Violations::default();
    for x in 0..p.len() {
        let up: Vec<usize> = p.up(x).ones().collect();
        if is_isomorphic(p, &p.induced(&up)).is_none() {
            out.push(Violation::NoOrderIsomorphism { x });
        }
    }
    let atoms = atoms_of(p, min);
    Ok(AutoEquivReport {
        passed: out.count == 0,
        violations: out.sample,
        violation_count: out.count,
        atom_labels: atoms.iter().map(|&a| p.label(a)).collect(),
        atoms,
    })
}

/// Breadth-first walk over `N^A` by total degree, `f(α + e_a) = f(α) + a`.
/// Returns the first factorization reaching each element of weight at most
/// `bound`, and the collision differences met on the way.
fn factorization_walk(
    p: &MonoidPresentation,
    atoms: &[Vec<i64>],
    bound: i64,
) -> Result<(HashMap<Vec<i64>, Vec<i64>>, Vec<Vec<i64>>), AutoEquivError> {
    let k = atoms.len();
    let mut rep: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut queue = VecDeque::new();
    rep.insert(p.zero(), vec![0; k]);
    queue.push_back(p.zero());
    while let Some(x) = queue.pop_front() {
        let alpha = rep[&x].clone();
        for (a, g) in atoms.iter().enumerate() {
            let y = p.add(&x, g)?;
            if p.weight(&y)? > bound {
                continue;
            }
            let mut cand = alpha.clone();
            cand[a] += 1;
            match rep.get(&y) {
                None => {
                    if rep.len() >= MEMBER_LIMIT {
                        return Err(AutoEquivError::TooLarge(MEMBER_LIMIT));
                    }
                    rep.insert(y.clone(), cand);
                    queue.push_back(y);
                }
                Some(beta) if *beta != cand => {
                    rows.push(cand.iter().zip(beta).map(|(u, v)| u - v).collect());
                    if rows.len() > 4 * k + 8 {
                        rows = hermite(&rows)?;
                    }
                }
                Some(_) => {}
            }
        }
    }
    Ok((rep, rows))
}

fn atom_vectors(p: &MonoidPresentation) -> Result<Vec<Vec<i64>>, AutoEquivError> {
    Ok(p.atoms()?.into_iter().map(|i| p.generators[i].clone()).collect())
}

/// Generators of `L_P = {α - β : f(α) = f(β)}` from all factorizations of
/// elements of weight at most `bound`, in Hermite normal form. Columns are
/// the atoms in the order of [`MonoidPresentation::atoms`].
pub fn collision_lattice(p: &MonoidPresentation, bound: i64) -> Result<LatticeBasis, AutoEquivError> {
    let atoms = atom_vectors(p)?;
    let (_, rows) = factorization_walk(p, &atoms, bound)?;
    LatticeBasis::new(atoms.len(), rows)
}

/// Outcome of presentation → truncation → lattice → quotient → presentation.
#[derive(Debug, Clone)]
pub struct RoundtripReport {
    pub atoms: Vec<Vec<i64>>,
    pub lattice: LatticeBasis,
    pub quotient: QuotientStructure,
    pub recovered: MonoidPresentation,
    /// Image of each window element in the recovered group.
    pub images: Vec<Vec<i64>>,
    /// The window embeds into the recovered poset, order and all.
    pub embeds: bool,
    /// Free rank of the recovered group equals the rank of the group
    /// generated by the atoms.
    pub rank_matches: bool,
    /// When both presentations live in groups of the same shape, whether
    /// their truncations to the same window are isomorphic.
    pub same_window_isomorphic: Option<bool>,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.embeds && self.rank_matches && self.same_window_isomorphic != Some(false)
    }
}

/// Reconstructs the monoid from the truncation and compares.
pub fn roundtrip(p: &MonoidPresentation, window: &Window, bound: i64) -> Result<RoundtripReport, AutoEquivError> {
    let t = truncated_cayley(p, window)?;
    let atoms = atom_vectors(p)?;
    let window_weight = t.elements.iter().map(|v| p.weight(v)).try_fold(0, |a, w| w.map(|w| a.max(w)))?;
    let (rep, rows) = factorization_walk(p, &atoms, bound.max(window_weight))?;
    let lattice = LatticeBasis::new(atoms.len(), rows)?;
    let quotient = quotient_structure(&lattice, atoms.len())?;
    let recovered = make_presentation(quotient.free_rank, quotient.torsion.clone(), quotient.atom_images.clone())?;
    let images: Vec<Vec<i64>> = t
        .elements
        .iter()
        .map(|v| recovered.combine(&rep[v], &quotient.atom_images))
        .collect::<Result<_, _>>()?;
    let distinct: HashSet<&Vec<i64>> = images.iter().collect();
    let mut embeds = distinct.len() == images.len();
    if embeds {
        let n = images.len();
        let max_w = images.iter().map(|v| recovered.weight(v)).try_fold(0, |a, w| w.map(|w| a.max(w)))?;
        let members = recovered.members_up_to(max_w)?;
        'outer: for i in 0..n {
            for j in 0..n {
                let d = recovered.sub(&images[j], &images[i])?;
                if members.contains(&d) != t.poset.leq(i, j) {
                    embeds = false;
                    break 'outer;
                }
            }
        }
    }
    let free_parts: Vec<Vec<i64>> = atoms.iter().map(|a| a[..p.free_rank].to_vec()).collect();
    let rank_matches = hermite(&free_parts)?.len() == quotient.free_rank;
    let same_window_isomorphic = if recovered.free_rank == p.free_rank && recovered.torsion == p.torsion {
        let t2 = truncated_cayley(&recovered, window)?;
        Some(is_isomorphic(&t.poset, &t2.poset).is_some())
    } else {
        None
    };
    Ok(RoundtripReport { atoms, lattice, quotient, recovered, images, embeds, rank_matches, same_window_isomorphic })
}

/// Whether the roundtrip reconstructs the monoid on the window.
pub fn roundtrip_check(p: &MonoidPresentation, window: &Window, bound: i64) -> Result<bool, AutoEquivError> {
    Ok(roundtrip(p, window, bound)?.passed())
}
