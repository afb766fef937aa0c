//! Finite semigroups given by tables, right acts, and certificates.
//!
//! Throughout, the act is on the right: `x·s`, and the Cayley relation is
//! `x <= y` iff `x·s = y` for some `s` in the acting semigroup.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::{bitset_of, Endomorphism, Poset};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("table shape mismatch: {0}")]
    Shape(String),
    #[error("entry {value} at ({row}, {col}) is out of range")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("act is incompatible: (x s) s' != x (s s') for x={x}, s={s}, s'={t}")]
    IncompatibleAct { x: usize, s: usize, t: usize },
    #[error("act does not induce a partial order: {0}")]
    NotAPartialOrder(&'static str),
    #[error("subset is not closed: {s}·{t} leaves it")]
    NotClosed { s: usize, t: usize },
    #[error("monoid would have {size} elements, limit is {limit}")]
    SizeLimit { size: usize, limit: usize },
    #[error("certificate rejected: {0}")]
    CertificateInvalid(Rejection),
}

/// A binary operation on `0..n`, stored row-major.
pub struct OpTable {
    n: usize,
    table: Vec<usize>,
    assoc: OnceLock<bool>,
}

impl Clone for OpTable {
    fn clone(&self) -> Self {
        OpTable { n: self.n, table: self.table.clone(), assoc: self.assoc.clone() }
    }
}

impl PartialEq for OpTable {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.table == other.table
    }
}

impl Eq for OpTable {}

impl fmt::Debug for OpTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl OpTable {
    pub fn new(n: usize, table: Vec<usize>) -> Result<Self, AlgebraError> {
        if table.len() != n * n {
            return Err(AlgebraError::Shape(format!("{} entries for n = {n}", table.len())));
        }
        if let Some(i) = table.iter().position(|&v| v >= n) {
            return Err(AlgebraError::OutOfRange { row: i / n, col: i % n, value: table[i] });
        }
        Ok(OpTable { n, table, assoc: OnceLock::new() })
    }

    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self, AlgebraError> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(AlgebraError::Shape(format!("row of length {} in a table of size {n}", r.len())));
        }
        Self::new(n, rows.concat())
    }

    pub fn from_fn<F: Fn(usize, usize) -> usize>(n: usize, f: F) -> Result<Self, AlgebraError> {
        let table = (0..n * n).map(|i| f(i / n, i % n)).collect();
        Self::new(n, table)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y]
    }

    /// Overwrites one entry. Used by mutation tests; resets the cached
    /// associativity verdict.
    pub fn set(&mut self, x: usize, y: usize, v: usize) {
        self.table[x * self.n + y] = v;
        self.assoc = OnceLock::new();
    }

    pub fn row(&self, x: usize) -> &[usize] {
        &self.table[x * self.n..(x + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|x| self.row(x).to_vec()).collect()
    }

    pub fn flat(&self) -> &[usize] {
        &self.table
    }

    /// First triple `(x, y, z)` with `(xy)z != x(yz)`.
    pub fn associativity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                let xy = self.mul(x, y);
                for z in 0..n {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn is_associative(&self) -> bool {
        *self.assoc.get_or_init(|| self.associativity_violation().is_none())
    }

    /// The two-sided identity, if any.
    pub fn identity(&self) -> Option<usize> {
        (0..self.n).find(|&e| self.is_identity(e))
    }

    pub fn is_identity(&self, e: usize) -> bool {
        (0..self.n).all(|x| self.mul(e, x) == x && self.mul(x, e) == x)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.n).all(|x| (0..x).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// First pair of members whose product leaves `set`.
    pub fn closure_violation(&self, set: &FixedBitSet) -> Option<(usize, usize)> {
        for s in set.ones() {
            for t in set.ones() {
                if !set.contains(self.mul(s, t)) {
                    return Some((s, t));
                }
            }
        }
        None
    }

    /// Left multiplication by `t` as a self-map of `0..n`.
    pub fn left_mult(&self, t: usize) -> Endomorphism {
        Endomorphism { map: self.row(t).to_vec() }
    }
}

/// A right act of the semigroup `sg` on `0..x_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupAct {
    x_count: usize,
    sg: OpTable,
    action: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActProperties {
    /// Every `x` has some `s` with `x·s = x`.
    pub s_unital: bool,
    /// `x·s·s' = x` implies `x·s = x`.
    pub acyclic: bool,
}

impl SemigroupAct {
    /// Validates ranges and the compatibility law `(x·s)·s' = x·(s s')`.
    pub fn new(x_count: usize, sg: OpTable, action: Vec<usize>) -> Result<Self, AlgebraError> {
        let m = sg.len();
        if action.len() != x_count * m {
            return Err(AlgebraError::Shape(format!(
                "action has {} entries, expected {}",
                action.len(),
                x_count * m
            )));
        }
        if let Some(i) = action.iter().position(|&v| v >= x_count) {
            return Err(AlgebraError::OutOfRange { row: i / m, col: i % m, value: action[i] });
        }
        let act = SemigroupAct { x_count, sg, action };
        for x in 0..x_count {
            for s in 0..m {
                for t in 0..m {
                    if act.apply(act.apply(x, s), t) != act.apply(x, act.sg.mul(s, t)) {
                        return Err(AlgebraError::IncompatibleAct { x, s, t });
                    }
                }
            }
        }
        Ok(act)
    }

    pub fn x_count(&self) -> usize {
        self.x_count
    }

    pub fn semigroup(&self) -> &OpTable {
        &self.sg
    }

    #[inline]
    pub fn apply(&self, x: usize, s: usize) -> usize {
        self.action[x * self.sg.len() + s]
    }

    pub fn action_rows(&self) -> Vec<Vec<usize>> {
        (0..self.x_count)
            .map(|x| (0..self.sg.len()).map(|s| self.apply(x, s)).collect())
            .collect()
    }
}

/// Decides s-unitality and acyclicity of an act.
pub fn check_act(act: &SemigroupAct) -> ActProperties {
    let m = act.sg.len();
    let s_unital = (0..act.x_count).all(|x| (0..m).any(|s| act.apply(x, s) == x));
    let acyclic = (0..act.x_count).all(|x| {
        (0..m).all(|s| {
            let xs = act.apply(x, s);
            xs == x || (0..m).all(|t| act.apply(xs, t) != x)
        })
    });
    ActProperties { s_unital, acyclic }
}

/// The Cayley poset of an s-unital acyclic act.
pub fn cayley_poset(act: &SemigroupAct) -> Result<Poset, AlgebraError> {
    let props = check_act(act);
    if !props.s_unital {
        return Err(AlgebraError::NotAPartialOrder("act is not s-unital"));
    }
    if !props.acyclic {
        return Err(AlgebraError::NotAPartialOrder("act is not acyclic"));
    }
    let m = act.sg.len();
    let p = Poset::from_leq(act.x_count, |x, y| (0..m).any(|s| act.apply(x, s) == y))
        .map_err(|_| AlgebraError::NotAPartialOrder("relation is not an order"))?;
    Ok(p)
}

/// Right multiplication of `t` restricted to the subsemigroup `s`. Members
/// of `s` are renumbered `0..|s|` in increasing order.
pub fn pair_act(t: &OpTable, s: &FixedBitSet) -> Result<SemigroupAct, AlgebraError> {
    if let Some((a, b)) = t.closure_violation(s) {
        return Err(AlgebraError::NotClosed { s: a, t: b });
    }
    let members: Vec<usize> = s.ones().collect();
    let index: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let sg = OpTable::from_fn(members.len(), |i, j| index[&t.mul(members[i], members[j])])?;
    let action = (0..t.len())
        .flat_map(|x| members.iter().map(move |&s| t.mul(x, s)))
        .collect();
    SemigroupAct::new(t.len(), sg, action)
}

/// Default bound on the size of the monoid built by [`inflationary_act`].
pub const DEFAULT_INFLATIONARY_CAP: usize = 4096;

/// The monoid of inflationary self-maps (`x <= φ(x)`) acting by
/// evaluation. Monoid elements are listed in lexicographic order of their
/// function tables, so the identity map is element 0 only when it is
/// lexicographically least. Multiplication is `φφ' := φ' ∘ φ`.
pub fn inflationary_act(p: &Poset, cap: usize) -> Result<SemigroupAct, AlgebraError> {
    let n = p.len();
    let choices: Vec<Vec<usize>> = (0..n).map(|x| p.up(x).ones().collect()).collect();
    let size = choices
        .iter()
        .try_fold(1usize, |acc, c| acc.checked_mul(c.len()).filter(|&v| v <= cap))
        .ok_or(AlgebraError::SizeLimit { size: usize::MAX, limit: cap })?;
    let mut maps: Vec<Vec<usize>> = Vec::with_capacity(size);
    let mut digits = vec![0usize; n];
    'outer: loop {
        maps.push((0..n).map(|x| choices[x][digits[x]]).collect());
        for x in (0..n).rev() {
            digits[x] += 1;
            if digits[x] < choices[x].len() {
                continue 'outer;
            }
            digits[x] = 0;
        }
        break;
    }
    let index: HashMap<&[usize], usize> =
        maps.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
    let sg = OpTable::from_fn(maps.len(), |a, b| {
        let composed: Vec<usize> = (0..n).map(|x| maps[b][maps[a][x]]).collect();
        index[composed.as_slice()]
    })?;
    let action = (0..n).flat_map(|x| maps.iter().map(move |m| m[x])).collect();
    SemigroupAct::new(n, sg, action)
}

/// Position of a certificate in the class diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Semigroup,
    Monoid,
    Full,
    FullMonoid,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Semigroup, Kind::Monoid, Kind::Full, Kind::FullMonoid];

    pub fn from_flags(full: bool, monoid: bool) -> Kind {
        match (full, monoid) {
            (true, true) => Kind::FullMonoid,
            (true, false) => Kind::Full,
            (false, true) => Kind::Monoid,
            (false, false) => Kind::Semigroup,
        }
    }

    pub fn is_full(self) -> bool {
        matches!(self, Kind::Full | Kind::FullMonoid)
    }

    pub fn is_monoid(self) -> bool {
        matches!(self, Kind::Monoid | Kind::FullMonoid)
    }

    /// Whether a certificate of kind `self` also witnesses `other`.
    pub fn implies(self, other: Kind) -> bool {
        (!other.is_full() || self.is_full()) && (!other.is_monoid() || self.is_monoid())
    }

    /// Strongest kind implied by both.
    pub fn meet(self, other: Kind) -> Kind {
        Kind::from_flags(self.is_full() && other.is_full(), self.is_monoid() && other.is_monoid())
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Semigroup => "semigroup",
            Kind::Monoid => "monoid",
            Kind::Full => "full",
            Kind::FullMonoid => "full_monoid",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Why a certificate fails verification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Rejection {
    #[error("table has {table} elements, poset has {poset}")]
    SizeMismatch { table: usize, poset: usize },
    #[error("s_subset is empty")]
    EmptySubset,
    #[error("s_subset mentions {0}, outside the ground set")]
    SubsetOutOfRange(usize),
    #[error("kind {kind} requires {requirement}")]
    KindMismatch { kind: Kind, requirement: &'static str },
    #[error("{0} is not a two-sided identity")]
    NotIdentity(usize),
    #[error("identity {0} is not in s_subset")]
    IdentityOutsideSubset(usize),
    #[error("s_subset not closed: {0}·{1} leaves it")]
    NotClosed(usize, usize),
    #[error("s_subset not an upset: {0} <= {1} but {1} is missing")]
    NotUpset(usize, usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    Associativity(usize, usize, usize),
    #[error("order mismatch at ({x}, {y}): poset says {in_poset}, table says {in_table}")]
    OrderMismatch { x: usize, y: usize, in_poset: bool, in_table: bool },
}

impl Rejection {
    /// Short stable name of the failed check.
    pub fn name(&self) -> &'static str {
        match self {
            Rejection::SizeMismatch { .. } => "size_mismatch",
            Rejection::EmptySubset => "empty_subset",
            Rejection::SubsetOutOfRange(_) => "subset_out_of_range",
            Rejection::KindMismatch { .. } => "kind_mismatch",
            Rejection::NotIdentity(_) => "not_identity",
            Rejection::IdentityOutsideSubset(_) => "identity_outside_subset",
            Rejection::NotClosed(..) => "not_closed",
            Rejection::NotUpset(..) => "not_upset",
            Rejection::Associativity(..) => "associativity",
            Rejection::OrderMismatch { .. } => "order_mismatch",
        }
    }
}

/// A multiplication table on a poset's ground set and a distinguished
/// subsemigroup `S` whose right action realizes the order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub kind: Kind,
    pub identity: Option<usize>,
    pub s_subset: FixedBitSet,
    pub table: OpTable,
}

/// Wire format: `{"kind", "identity", "s_subset", "table"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    pub kind: Kind,
    pub identity: Option<usize>,
    pub s_subset: Vec<usize>,
    pub table: Vec<Vec<usize>>,
}

impl Certificate {
    /// Builds a certificate, deriving the identity from the table when the
    /// kind calls for one.
    pub fn new(kind: Kind, s_subset: FixedBitSet, table: OpTable) -> Self {
        let identity = if kind.is_monoid() { table.identity() } else { None };
        Certificate { kind, identity, s_subset, table }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn s_members(&self) -> Vec<usize> {
        self.s_subset.ones().collect()
    }

    /// Checks associativity, closure, kind-specific structure and exact
    /// order realization against `p`.
    pub fn verify(&self, p: &Poset) -> Result<(), Rejection> {
        let n = p.len();
        let t = &self.table;
        if t.len() != n {
            return Err(Rejection::SizeMismatch { table: t.len(), poset: n });
        }
        if let Some(x) = self.s_subset.ones().find(|&x| x >= n) {
            return Err(Rejection::SubsetOutOfRange(x));
        }
        if self.s_subset.count_ones(..) == 0 {
            return Err(Rejection::EmptySubset);
        }
        if self.kind.is_full() && self.s_subset.count_ones(..) != n {
            return Err(Rejection::KindMismatch { kind: self.kind, requirement: "s_subset = ground set" });
        }
        if self.kind.is_monoid() && self.identity.is_none() {
            return Err(Rejection::KindMismatch { kind: self.kind, requirement: "an identity element" });
        }
        if let Some(e) = self.identity {
            if e >= n || !t.is_identity(e) {
                return Err(Rejection::NotIdentity(e));
            }
            if !self.s_subset.contains(e) {
                return Err(Rejection::IdentityOutsideSubset(e));
            }
        }
        if let Some((a, b)) = t.closure_violation(&self.s_subset) {
            return Err(Rejection::NotClosed(a, b));
        }
        for s in self.s_subset.ones() {
            if let Some(y) = p.up(s).ones().find(|&y| !self.s_subset.contains(y)) {
                return Err(Rejection::NotUpset(s, y));
            }
        }
        if let Some((a, b, c)) = t.associativity_violation() {
            return Err(Rejection::Associativity(a, b, c));
        }
        for x in 0..n {
            let mut reached = FixedBitSet::with_capacity(n);
            for s in self.s_subset.ones() {
                reached.insert(t.mul(x, s));
            }
            if reached != *p.up(x) {
                let y = (0..n).find(|&y| reached.contains(y) != p.leq(x, y)).expect("sets differ");
                return Err(Rejection::OrderMismatch {
                    x,
                    y,
                    in_poset: p.leq(x, y),
                    in_table: reached.contains(y),
                });
            }
        }
        Ok(())
    }

    /// The relation `x <= y` iff `x·s = y` for some `s` in `S`, if it is an order.
    pub fn realized_poset(&self) -> Result<Poset, AlgebraError> {
        let act = pair_act(&self.table, &self.s_subset)?;
        cayley_poset(&act)
    }

    /// Strongest kind supported by the structure of the table and subset.
    pub fn strongest_kind(&self) -> Kind {
        let full = self.s_subset.count_ones(..) == self.table.len();
        let monoid = self.table.identity().is_some_and(|e| self.s_subset.contains(e));
        Kind::from_flags(full, monoid)
    }

    /// Same table and subset relabeled with the strongest supported kind.
    pub fn upgraded(mut self) -> Self {
        self.kind = self.strongest_kind();
        self.identity = if self.kind.is_monoid() { self.table.identity() } else { None };
        self
    }

    /// Same data declared as a weaker (or equal) kind.
    pub fn as_kind(&self, kind: Kind) -> Option<Self> {
        if !self.strongest_kind().implies(kind) {
            return None;
        }
        let identity = if kind.is_monoid() { self.table.identity() } else { None };
        Some(Certificate { kind, identity, s_subset: self.s_subset.clone(), table: self.table.clone() })
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            kind: self.kind,
            identity: self.identity,
            s_subset: self.s_members(),
            table: self.table.rows(),
        }
    }

    pub fn from_json(j: &CertificateJson) -> Result<Self, AlgebraError> {
        let table = OpTable::from_rows(&j.table)?;
        let n = table.len();
        if let Some(&x) = j.s_subset.iter().find(|&&x| x >= n) {
            return Err(AlgebraError::Shape(format!("s_subset member {x} out of range")));
        }
        Ok(Certificate {
            kind: j.kind,
            identity: j.identity,
            s_subset: bitset_of(n, j.s_subset.iter().copied()),
            table,
        })
    }
}

/// Left multiplications `x ↦ t·x` of a valid certificate. Each is an order
/// endomorphism of `p`, and distinct `t` give distinct maps.
pub fn left_mult_endomorphisms(p: &Poset, cert: &Certificate) -> Result<Vec<Endomorphism>, AlgebraError> {
    cert.verify(p).map_err(AlgebraError::CertificateInvalid)?;
    Ok((0..p.len()).map(|t| cert.table.left_mult(t)).collect())
}

/// A multiplication table with undecided entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialTable {
    n: usize,
    cells: Vec<Option<usize>>,
}

/// Result of running a propagation rule to fixpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Propagation {
    Consistent(PartialTable),
    /// Entry `(row, col)` is forced to `forced` but holds `found`.
    Contradiction { row: usize, col: usize, forced: usize, found: usize },
}

impl PartialTable {
    pub fn empty(n: usize) -> Self {
        PartialTable { n, cells: vec![None; n * n] }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, x: usize, y: usize) -> Option<usize> {
        self.cells[x * self.n + y]
    }

    pub fn set(&mut self, x: usize, y: usize, v: usize) {
        self.cells[x * self.n + y] = Some(v);
    }

    pub fn decided(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    /// Whether every decided entry of `self` agrees with `full`.
    pub fn agrees_with(&self, full: &OpTable) -> bool {
        (0..self.n * self.n).all(|i| self.cells[i].is_none_or(|v| v == full.flat()[i]))
    }

    pub fn complete(&self) -> Option<OpTable> {
        let flat: Option<Vec<usize>> = self.cells.iter().copied().collect();
        OpTable::new(self.n, flat?).ok()
    }
}

/// Forces `m·x = x` for every `x` in `↑m` whenever `m·m = m` is decided.
/// Runs to fixpoint and reports the first conflict.
pub fn idempotent_consequences(partial: &PartialTable, p: &Poset) -> Propagation {
    let mut t = partial.clone();
    loop {
        let mut changed = false;
        for m in 0..t.n {
            if t.get(m, m) != Some(m) {
                continue;
            }
            for x in p.up(m).ones() {
                match t.get(m, x) {
                    None => {
                        t.set(m, x, x);
                        changed = true;
                    }
                    Some(v) if v != x => {
                        return Propagation::Contradiction { row: m, col: x, forced: x, found: v };
                    }
                    Some(_) => {}
                }
            }
        }
        if !changed {
            return Propagation::Consistent(t);
        }
    }
}
