//! Finite posets stored as dense bit matrices.
//!
//! Elements are the indices `0..n`. Both the principal upsets and the
//! principal downsets are materialized so that comparability tests and set
//! scans are a single bit lookup.

mod endo;
mod iso;
mod json;
mod sp;

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

pub use endo::{order_endomorphisms, EndoIter, Endomorphism};
pub use iso::{canonical_form, enumerate_posets, is_isomorphic, CanonicalForm};
pub use json::{export_dot, parse_poset_json, poset_to_json, PosetJson};
pub use sp::{eval_sp, is_series_parallel, sp_decompose, SpExpr};

/// Default cap on the poset size accepted by the enumerators.
pub const DEFAULT_ENUMERATION_CAP: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("relation is not antisymmetric: `{0}` and `{1}` lie on a cycle")]
    Cycle(String, String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("element {index} out of range for a poset with {n} elements")]
    OutOfRange { index: usize, n: usize },
    #[error("relation is not {0}")]
    NotAnOrder(&'static str),
    #[error("size {n} exceeds the configured limit {limit}")]
    SizeLimit { n: usize, limit: usize },
    #[error("label list has {got} entries, expected {expected}")]
    LabelCount { got: usize, expected: usize },
    #[error("schema error: {0}")]
    Schema(String),
}

/// Which principal set to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

/// Minimal/maximal elements, atoms and global extrema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extremes {
    pub minima: Vec<usize>,
    pub maxima: Vec<usize>,
    /// Minimal elements of `P \ {global_min}`; empty when there is no
    /// global minimum.
    pub atoms: Vec<usize>,
    pub global_min: Option<usize>,
    pub global_max: Option<usize>,
}

/// A finite partially ordered set on `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<(String, String)> = self
            .hasse()
            .into_iter()
            .map(|(x, y)| (self.label(x), self.label(y)))
            .collect();
        f.debug_struct("Poset")
            .field("n", &self.n)
            .field("covers", &covers)
            .finish()
    }
}

impl Poset {
    /// Builds a poset from a full `n x n` relation given as a predicate.
    /// The relation must already be reflexive, antisymmetric and transitive.
    pub fn from_leq<F: Fn(usize, usize) -> bool>(n: usize, leq: F) -> Result<Self, PosetError> {
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (x, row) in up.iter_mut().enumerate() {
            for y in 0..n {
                if leq(x, y) {
                    row.insert(y);
                }
            }
        }
        Self::from_up_sets(up)
    }

    fn from_up_sets(up: Vec<FixedBitSet>) -> Result<Self, PosetError> {
        let n = up.len();
        for (x, row) in up.iter().enumerate() {
            if !row.contains(x) {
                return Err(PosetError::NotAnOrder("reflexive"));
            }
        }
        for x in 0..n {
            for y in up[x].ones() {
                if y != x && up[y].contains(x) {
                    return Err(PosetError::Cycle(x.to_string(), y.to_string()));
                }
                if !up[y].is_subset(&up[x]) {
                    return Err(PosetError::NotAnOrder("transitive"));
                }
            }
        }
        Ok(Self::from_valid_up_sets(up))
    }

    fn from_valid_up_sets(up: Vec<FixedBitSet>) -> Self {
        let n = up.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (x, row) in up.iter().enumerate() {
            for y in row.ones() {
                down[y].insert(x);
            }
        }
        Poset { n, up, down, labels: None }
    }

    /// Reflexive-transitive closure of the given strict relations on `0..n`.
    pub fn from_relations(n: usize, pairs: &[(usize, usize)]) -> Result<Self, PosetError> {
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (x, row) in up.iter_mut().enumerate() {
            row.insert(x);
        }
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(PosetError::OutOfRange { index: x.max(y), n });
            }
            up[x].insert(y);
        }
        // Warshall on bit rows.
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for x in 0..n {
            for y in up[x].ones() {
                if y != x && up[y].contains(x) {
                    return Err(PosetError::Cycle(x.to_string(), y.to_string()));
                }
            }
        }
        Ok(Self::from_valid_up_sets(up))
    }

    /// Builds the poset on the declared labels generated by `pairs`, where
    /// `(a, b)` means `a < b`.
    pub fn build<S: AsRef<str>>(labels: &[S], pairs: &[(S, S)]) -> Result<Self, PosetError> {
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.as_ref().to_string(), i).is_some() {
                return Err(PosetError::DuplicateLabel(l.as_ref().to_string()));
            }
        }
        let lookup = |l: &S| {
            index
                .get(l.as_ref())
                .copied()
                .ok_or_else(|| PosetError::UnknownLabel(l.as_ref().to_string()))
        };
        let mut idx_pairs = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            idx_pairs.push((lookup(a)?, lookup(b)?));
        }
        let names: Vec<String> = labels.iter().map(|l| l.as_ref().to_string()).collect();
        match Self::from_relations(labels.len(), &idx_pairs) {
            Ok(p) => p.with_labels(names),
            Err(PosetError::Cycle(a, b)) => {
                let name = |s: &str| names[s.parse::<usize>().unwrap()].clone();
                Err(PosetError::Cycle(name(&a), name(&b)))
            }
            Err(e) => Err(e),
        }
    }

    /// Attaches element names. Names must be unique.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, PosetError> {
        if labels.len() != self.n {
            return Err(PosetError::LabelCount { got: labels.len(), expected: self.n });
        }
        let mut seen = HashMap::new();
        for l in &labels {
            if seen.insert(l.as_str(), ()).is_some() {
                return Err(PosetError::DuplicateLabel(l.clone()));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    pub fn chain(n: usize) -> Self {
        Self::from_leq(n, |x, y| x <= y).expect("chain is an order")
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_leq(n, |x, y| x == y).expect("antichain is an order")
    }

    /// The N-poset on labels `a, b, c, d` with `a < b`, `c < b`, `c < d`.
    pub fn n_poset() -> Self {
        Self::build(&["a", "b", "c", "d"], &[("a", "b"), ("c", "b"), ("c", "d")])
            .expect("N-poset is an order")
    }

    /// Integers of `ground` ordered by `a < b` iff `b - a >= 2`.
    pub fn gap_two_order(ground: &[i64]) -> Self {
        let p = Self::from_leq(ground.len(), |x, y| x == y || ground[y] - ground[x] >= 2)
            .expect("gap order is an order");
        p.with_labels(ground.iter().map(|v| v.to_string()).collect())
            .expect("distinct integers")
    }

    /// `{0, ..., c}` with `a < b` iff `b - a >= 2`.
    pub fn nat_interval(c: i64) -> Self {
        let ground: Vec<i64> = (0..=c).collect();
        Self::gap_two_order(&ground)
    }

    /// `{0, 2, 3, ..., c}` with `a < b` iff `b - a >= 2`.
    pub fn nat_interval_star(c: i64) -> Self {
        let ground: Vec<i64> = std::iter::once(0).chain(2..=c).collect();
        Self::gap_two_order(&ground)
    }

    /// The N-poset with an added chain `i < i-1 < ... < 1 < a`.
    pub fn n_family(i: usize) -> Self {
        let mut labels: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let mut pairs: Vec<(String, String)> = vec![
            ("a".into(), "b".into()),
            ("c".into(), "b".into()),
            ("c".into(), "d".into()),
        ];
        for k in 1..=i {
            labels.push(k.to_string());
            let above = if k == 1 { "a".to_string() } else { (k - 1).to_string() };
            pairs.push((k.to_string(), above));
        }
        Self::build(&labels, &pairs).expect("N_i is an order")
    }

    /// Weak order with the given level sizes, bottom level first. Elements
    /// are numbered level by level.
    pub fn weak_order(levels: &[usize]) -> Self {
        let level_of: Vec<usize> = levels
            .iter()
            .enumerate()
            .flat_map(|(i, &k)| std::iter::repeat(i).take(k))
            .collect();
        Self::from_leq(level_of.len(), |x, y| x == y || level_of[x] < level_of[y])
            .expect("weak order is an order")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.up[x].contains(y)
    }

    #[inline]
    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// `↑x` as a bit set.
    pub fn up(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    /// `↓x` as a bit set.
    pub fn down(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    /// `↑x` or `↓x` as a sorted list. Always contains `x`.
    pub fn principal_set(&self, x: usize, dir: Direction) -> Vec<usize> {
        match dir {
            Direction::Up => self.up[x].ones().collect(),
            Direction::Down => self.down[x].ones().collect(),
        }
    }

    /// Elements comparable to neither side of `x`.
    pub fn incomparables(&self, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&y| !self.comparable(x, y)).collect()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Name of an element; falls back to its index.
    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        match &self.labels {
            Some(l) => l.iter().position(|s| s == label),
            None => label.parse().ok().filter(|&i| i < self.n),
        }
    }

    /// Cover pairs `(x, y)`: `x < y` with nothing strictly between.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let mut covers = Vec::new();
        for x in 0..self.n {
            for y in self.up[x].ones() {
                if y == x {
                    continue;
                }
                let between = self.up[x]
                    .intersection(&self.down[y])
                    .any(|z| z != x && z != y);
                if !between {
                    covers.push((x, y));
                }
            }
        }
        covers
    }

    pub fn minima(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.down[x].count_ones(..) == 1).collect()
    }

    pub fn maxima(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.up[x].count_ones(..) == 1).collect()
    }

    pub fn global_min(&self) -> Option<usize> {
        (0..self.n).find(|&x| self.up[x].count_ones(..) == self.n)
    }

    pub fn global_max(&self) -> Option<usize> {
        (0..self.n).find(|&x| self.down[x].count_ones(..) == self.n)
    }

    pub fn extremes(&self) -> Extremes {
        let global_min = self.global_min();
        let atoms = match global_min {
            Some(m) => (0..self.n)
                .filter(|&x| x != m && self.down[x].count_ones(..) == 2)
                .collect(),
            None => Vec::new(),
        };
        Extremes {
            minima: self.minima(),
            maxima: self.maxima(),
            atoms,
            global_min,
            global_max: self.global_max(),
        }
    }

    /// Whether `set` is upward closed.
    pub fn is_upset(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|x| self.up[x].is_subset(set))
    }

    /// All nonempty upsets, in increasing order of their bit mask.
    pub fn upsets(&self) -> Vec<FixedBitSet> {
        assert!(self.n < 32, "upset enumeration is limited to small posets");
        let mut out = Vec::new();
        for mask in 1u32..(1u32 << self.n) {
            let mut set = FixedBitSet::with_capacity(self.n);
            for x in 0..self.n {
                if mask >> x & 1 == 1 {
                    set.insert(x);
                }
            }
            if self.is_upset(&set) {
                out.push(set);
            }
        }
        out
    }

    /// Induced subposet on `elements`, in the given order.
    pub fn induced(&self, elements: &[usize]) -> Self {
        let p = Self::from_leq(elements.len(), |i, j| self.leq(elements[i], elements[j]))
            .expect("induced subposet of an order");
        match &self.labels {
            Some(l) => p
                .with_labels(elements.iter().map(|&x| l[x].clone()).collect())
                .expect("labels stay unique"),
            None => p,
        }
    }

    /// Order dual.
    pub fn dual(&self) -> Self {
        let mut p = Self::from_valid_up_sets(self.down.clone());
        p.labels = self.labels.clone();
        p
    }

    /// Renumbers elements: element `x` of `self` becomes `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let mut inv = vec![0; self.n];
        for (x, &px) in perm.iter().enumerate() {
            inv[px] = x;
        }
        let mut p = Self::from_leq(self.n, |a, b| self.leq(inv[a], inv[b]))
            .expect("relabeling preserves order");
        if let Some(l) = &self.labels {
            p.labels = Some((0..self.n).map(|a| l[inv[a]].clone()).collect());
        }
        p
    }

    /// True when both posets have the same relation on `0..n` (labels ignored).
    pub fn same_order(&self, other: &Self) -> bool {
        self.n == other.n && self.up == other.up
    }

    /// Least upper bound of `x` and `y`, if one exists.
    pub fn join(&self, x: usize, y: usize) -> Option<usize> {
        let mut common = self.up[x].clone();
        common.intersect_with(&self.up[y]);
        common.ones().find(|&z| common.is_subset(&self.up[z]))
    }

    pub fn is_join_semilattice(&self) -> bool {
        (0..self.n).all(|x| (x..self.n).all(|y| self.join(x, y).is_some()))
    }

    /// Cartesian product; `(i, j)` is numbered `i * other.len() + j`.
    pub fn product(&self, other: &Self) -> Self {
        let m = other.n;
        let p = Self::from_leq(self.n * m, |a, b| {
            self.leq(a / m, b / m) && other.leq(a % m, b % m)
        })
        .expect("product of orders");
        match (&self.labels, &other.labels) {
            (None, None) => p,
            _ => {
                let labels = (0..self.n * m)
                    .map(|a| format!("({},{})", self.label(a / m), other.label(a % m)))
                    .collect();
                p.with_labels(labels).expect("pairs are distinct")
            }
        }
    }

    fn disjoint_sum<F: Fn(usize, usize) -> bool>(&self, other: &Self, cross: F) -> Self {
        let n = self.n;
        let p = Self::from_leq(n + other.n, |a, b| match (a < n, b < n) {
            (true, true) => self.leq(a, b),
            (false, false) => other.leq(a - n, b - n),
            _ => cross(a, b),
        })
        .expect("composition of orders");
        merge_labels(p, &[self, other])
    }

    /// Series composition: every element of `self` below every element of `upper`.
    pub fn series(&self, upper: &Self) -> Self {
        let n = self.n;
        self.disjoint_sum(upper, |a, b| a < n && b >= n)
    }

    /// Parallel composition (disjoint union).
    pub fn parallel(&self, other: &Self) -> Self {
        self.disjoint_sum(other, |_, _| false)
    }

    /// Replaces `x` by a copy of `q`. Elements of `self` other than `x` come
    /// first, in order, followed by the elements of `q`.
    pub fn blowup(&self, x: usize, q: &Self) -> Self {
        let kept: Vec<usize> = (0..self.n).filter(|&y| y != x).collect();
        let k = kept.len();
        let origin = |a: usize| if a < k { kept[a] } else { x };
        let p = Self::from_leq(k + q.n, |a, b| {
            if a >= k && b >= k {
                q.leq(a - k, b - k)
            } else {
                a == b || self.lt(origin(a), origin(b))
            }
        })
        .expect("blowup of orders");
        match (&self.labels, &q.labels) {
            (None, None) => p,
            _ => {
                let xl = self.label(x);
                let labels = kept
                    .iter()
                    .map(|&y| self.label(y))
                    .chain((0..q.n).map(|j| format!("{xl}/{}", q.label(j))))
                    .collect();
                match p.clone().with_labels(labels) {
                    Ok(l) => l,
                    Err(_) => p,
                }
            }
        }
    }

    /// Every element replaced by an antichain of size `k`; `(x, i)` is
    /// numbered `x * k + i`.
    pub fn replicate(&self, k: usize) -> Self {
        Self::from_leq(self.n * k, |a, b| a == b || self.lt(a / k, b / k))
            .expect("replication of an order")
    }

    /// Adds a new least element, numbered `n`.
    pub fn adjoin_min(&self) -> Self {
        let n = self.n;
        let p = Self::from_leq(n + 1, |a, b| a == n || (b < n && self.leq(a, b)))
            .expect("adjoined minimum");
        self.extend_labels(p, "min")
    }

    /// Adds a new greatest element, numbered `n`.
    pub fn adjoin_max(&self) -> Self {
        let n = self.n;
        let p = Self::from_leq(n + 1, |a, b| b == n || (a < n && self.leq(a, b)))
            .expect("adjoined maximum");
        self.extend_labels(p, "max")
    }

    fn extend_labels(&self, p: Self, extra: &str) -> Self {
        match &self.labels {
            Some(l) => {
                let mut name = extra.to_string();
                while l.contains(&name) {
                    name.push('\'');
                }
                let mut labels = l.clone();
                labels.push(name);
                p.with_labels(labels).expect("fresh label")
            }
            None => p,
        }
    }
}

fn merge_labels(p: Poset, parts: &[&Poset]) -> Poset {
    if parts.iter().all(|q| q.labels.is_none()) {
        return p;
    }
    let labels: Vec<String> = parts
        .iter()
        .flat_map(|q| (0..q.n).map(move |x| q.label(x)))
        .collect();
    p.clone().with_labels(labels).unwrap_or(p)
}

/// Bit set over `0..n` holding the given elements.
pub fn bitset_of(n: usize, elements: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    for x in elements {
        s.insert(x);
    }
    s
}
