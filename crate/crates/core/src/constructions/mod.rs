//! Constructions that carry certificates along.
//!
//! Every operation builds the new table from the input tables, claims the
//! kind the corresponding theorem promises, and verifies the result before
//! returning it.

mod pipeline;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Certificate, CertificateJson, Kind, OpTable, Rejection};
use crate::poset::{bitset_of, eval_sp, Endomorphism, Poset, PosetJson, SpExpr};

pub use pipeline::{run_pipeline, PipelineError, Step};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("{op} needs {required}, got a {found} certificate")]
    KindMismatch { op: &'static str, required: &'static str, found: Kind },
    #[error("not a retract: {0}")]
    NotARetract(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("not a join-semilattice")]
    NotASemilattice,
    #[error("element {0} is not join-irreducible")]
    NotJoinIrreducible(usize),
    #[error("not a monoid homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("element {index} out of range for {n} elements")]
    OutOfRange { index: usize, n: usize },
    #[error("constructed certificate failed verification: {0}")]
    Invalid(Rejection),
}

/// A poset together with a certificate that verifies against it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedPoset {
    pub poset: Poset,
    pub cert: Certificate,
}

/// JSON bundle `{"poset": ..., "certificate": ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedPosetJson {
    pub poset: PosetJson,
    pub certificate: CertificateJson,
}

impl CertifiedPoset {
    /// Pairs a poset with a certificate after verifying it.
    pub fn new(poset: Poset, cert: Certificate) -> Result<Self, ConstructionError> {
        cert.verify(&poset).map_err(ConstructionError::Invalid)?;
        Ok(CertifiedPoset { poset, cert })
    }

    fn build(poset: Poset, kind: Kind, identity: Option<usize>, s: Vec<usize>, table: OpTable) -> Result<Self, ConstructionError> {
        let n = poset.len();
        let cert = Certificate {
            kind,
            identity: if kind.is_monoid() { identity } else { None },
            s_subset: bitset_of(n, s),
            table,
        };
        Self::new(poset, cert)
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn kind(&self) -> Kind {
        self.cert.kind
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.cert.table.mul(a, b)
    }

    fn in_s(&self, a: usize) -> bool {
        self.cert.s_subset.contains(a)
    }

    /// The one-element full monoid.
    pub fn singleton() -> Self {
        Self::chain(1)
    }

    /// Chain `0 < 1 < ... < n-1` with `x·y = max(x, y)`.
    pub fn chain(n: usize) -> Self {
        let table = OpTable::from_fn(n, |a, b| a.max(b)).expect("max table");
        Self::build(Poset::chain(n), Kind::FullMonoid, Some(0), (0..n).collect(), table).expect("chain certificate")
    }

    /// Antichain with the left-zero table `x·y = x`.
    pub fn antichain(n: usize) -> Self {
        let table = OpTable::from_fn(n, |a, _| a).expect("left-zero table");
        let kind = if n == 1 { Kind::FullMonoid } else { Kind::Full };
        Self::build(Poset::antichain(n), kind, Some(0), (0..n).collect(), table).expect("antichain certificate")
    }

    /// A join-semilattice with its join table; a full monoid when it has a
    /// least element.
    pub fn join_semilattice(p: &Poset) -> Result<Self, ConstructionError> {
        if !p.is_join_semilattice() {
            return Err(ConstructionError::NotASemilattice);
        }
        let table = OpTable::from_fn(p.len(), |a, b| p.join(a, b).expect("joins exist")).expect("join table");
        let bottom = p.global_min();
        let kind = if bottom.is_some() { Kind::FullMonoid } else { Kind::Full };
        Self::build(p.clone(), kind, bottom, (0..p.len()).collect(), table)
    }

    pub fn to_json(&self) -> CertifiedPosetJson {
        CertifiedPosetJson { poset: PosetJson::from_poset(&self.poset), certificate: self.cert.to_json() }
    }

    pub fn from_json(j: &CertifiedPosetJson) -> Result<Self, Box<dyn std::error::Error + Send + Sync>> {
        let poset = j.poset.to_poset()?;
        let cert = Certificate::from_json(&j.certificate)?;
        Ok(Self::new(poset, cert)?)
    }
}

/// Which extremum [`adjoin_extremum`] adds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extremum {
    Min,
    Max,
}

/// Adds a least element as a new identity (input must be full), or a
/// greatest element as a new absorbing element. The new element is
/// numbered `n`.
pub fn adjoin_extremum(cp: &CertifiedPoset, which: Extremum) -> Result<CertifiedPoset, ConstructionError> {
    let n = cp.len();
    match which {
        Extremum::Min => {
            if !cp.kind().is_full() {
                return Err(ConstructionError::KindMismatch {
                    op: "adjoin min",
                    required: "a full certificate",
                    found: cp.kind(),
                });
            }
            let table = OpTable::from_fn(n + 1, |a, b| match (a == n, b == n) {
                (true, _) => b,
                (_, true) => a,
                _ => cp.mul(a, b),
            })
            .expect("extended table");
            CertifiedPoset::build(cp.poset.adjoin_min(), Kind::FullMonoid, Some(n), (0..=n).collect(), table)
        }
        Extremum::Max => {
            let table = OpTable::from_fn(n + 1, |a, b| if a == n || b == n { n } else { cp.mul(a, b) })
                .expect("extended table");
            let s = cp.cert.s_members().into_iter().chain([n]).collect();
            CertifiedPoset::build(cp.poset.adjoin_max(), cp.kind(), cp.cert.identity, s, table)
        }
    }
}

/// Componentwise product; `(i, j)` is numbered `i * b.len() + j`.
pub fn product_cert(a: &CertifiedPoset, b: &CertifiedPoset) -> Result<CertifiedPoset, ConstructionError> {
    let m = b.len();
    let table = OpTable::from_fn(a.len() * m, |x, y| a.mul(x / m, y / m) * m + b.mul(x % m, y % m))
        .expect("product table");
    let s = (0..a.len() * m).filter(|&z| a.in_s(z / m) && b.in_s(z % m)).collect();
    let kind = a.kind().meet(b.kind());
    let identity = match (a.cert.identity, b.cert.identity) {
        (Some(e), Some(f)) => Some(e * m + f),
        _ => None,
    };
    CertifiedPoset::build(a.poset.product(&b.poset), kind, identity, s, table)
}

/// Checks that `sigma` is a retract of the table onto `S`: multiplicative,
/// image exactly `S`, identity on `S`.
pub fn check_retract(cp: &CertifiedPoset, sigma: &Endomorphism) -> Result<(), ConstructionError> {
    let n = cp.len();
    if sigma.map.len() != n || sigma.map.iter().any(|&v| v >= n) {
        return Err(ConstructionError::NotARetract("map has the wrong shape".into()));
    }
    for a in 0..n {
        for b in 0..n {
            if sigma.map[cp.mul(a, b)] != cp.mul(sigma.map[a], sigma.map[b]) {
                return Err(ConstructionError::NotARetract(format!("not multiplicative at ({a}, {b})")));
            }
        }
    }
    if let Some(s) = cp.cert.s_subset.ones().find(|&s| sigma.map[s] != s) {
        return Err(ConstructionError::NotARetract(format!("moves {s}, which is in S")));
    }
    if let Some(a) = (0..n).find(|&a| !cp.in_s(sigma.map[a])) {
        return Err(ConstructionError::NotARetract(format!("image of {a} lies outside S")));
    }
    Ok(())
}

/// `t·t' := t σ(t')` for a retract `σ` onto `S`; the result is full on the
/// same poset.
pub fn retract_to_full(cp: &CertifiedPoset, sigma: &Endomorphism) -> Result<CertifiedPoset, ConstructionError> {
    check_retract(cp, sigma)?;
    let n = cp.len();
    let table = OpTable::from_fn(n, |a, b| cp.mul(a, sigma.map[b])).expect("retract table");
    CertifiedPoset::build(cp.poset.clone(), Kind::Full, None, (0..n).collect(), table)
}

/// Searches for a retract of the table onto `S`.
pub fn find_retract(cp: &CertifiedPoset) -> Option<Endomorphism> {
    let n = cp.len();
    let s: Vec<usize> = cp.cert.s_members();
    let mut map: Vec<Option<usize>> = (0..n).map(|a| cp.in_s(a).then_some(a)).collect();
    let free: Vec<usize> = (0..n).filter(|&a| !cp.in_s(a)).collect();

    fn consistent(cp: &CertifiedPoset, map: &[Option<usize>]) -> bool {
        let n = map.len();
        (0..n).all(|a| {
            (0..n).all(|b| match (map[a], map[b], map[cp.mul(a, b)]) {
                (Some(x), Some(y), Some(z)) => cp.mul(x, y) == z,
                _ => true,
            })
        })
    }

    fn rec(cp: &CertifiedPoset, s: &[usize], free: &[usize], i: usize, map: &mut Vec<Option<usize>>) -> bool {
        if i == free.len() {
            return true;
        }
        for &v in s {
            map[free[i]] = Some(v);
            if consistent(cp, map) && rec(cp, s, free, i + 1, map) {
                return true;
            }
        }
        map[free[i]] = None;
        false
    }

    if !consistent(cp, &map) || !rec(cp, &s, &free, 0, &mut map) {
        return None;
    }
    Some(Endomorphism { map: map.into_iter().map(|v| v.expect("assigned")).collect() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementProperties {
    pub irreducible: bool,
    pub self_centered: bool,
}

/// `x` is irreducible if `x = ab` forces `x ∈ {a, b}`, and self-centered
/// if `yx = x ⇔ xy = x` for all `y`.
pub fn irreducible_self_centered(cp: &CertifiedPoset, x: usize) -> Result<ElementProperties, ConstructionError> {
    let n = cp.len();
    if x >= n {
        return Err(ConstructionError::OutOfRange { index: x, n });
    }
    let irreducible = (0..n).all(|a| (0..n).all(|b| cp.mul(a, b) != x || a == x || b == x));
    let self_centered = (0..n).all(|y| (cp.mul(y, x) == x) == (cp.mul(x, y) == x));
    Ok(ElementProperties { irreducible, self_centered })
}

/// Replaces `x` by a copy of `q`. Elements other than `x` keep their order
/// and come first, then the elements of `q`.
pub fn blowup_cert(cp: &CertifiedPoset, x: usize, cq: &CertifiedPoset) -> Result<CertifiedPoset, ConstructionError> {
    let props = irreducible_self_centered(cp, x)?;
    if !props.irreducible {
        return Err(ConstructionError::PreconditionFailed(format!("{x} is not irreducible")));
    }
    if !props.self_centered {
        return Err(ConstructionError::PreconditionFailed(format!("{x} is not self-centered")));
    }
    if !cp.in_s(x) {
        return Err(ConstructionError::PreconditionFailed(format!("{x} is not in S")));
    }
    let minimal = cp.poset.minima().contains(&x);
    if !minimal && !cq.kind().is_full() {
        return Err(ConstructionError::PreconditionFailed(format!(
            "{x} is not minimal and the inserted certificate is not full"
        )));
    }
    let n = cp.len();
    let k = n - 1;
    // new index -> T element or V element
    let kept: Vec<usize> = (0..n).filter(|&y| y != x).collect();
    let new_of_t = |t: usize| if t < x { t } else { t - 1 };
    enum Part {
        T(usize),
        V(usize),
    }
    let part = |a: usize| if a < k { Part::T(kept[a]) } else { Part::V(a - k) };
    let table = OpTable::from_fn(k + cq.len(), |a, b| match (part(a), part(b)) {
        (Part::T(t), Part::T(u)) => new_of_t(cp.mul(t, u)),
        (Part::V(v), Part::V(w)) => k + cq.mul(v, w),
        (Part::V(v), Part::T(u)) => {
            let r = cp.mul(x, u);
            if r != x {
                new_of_t(r)
            } else {
                k + v
            }
        }
        (Part::T(t), Part::V(w)) => {
            let r = cp.mul(t, x);
            if r != x {
                new_of_t(r)
            } else {
                k + w
            }
        }
    })
    .expect("blowup table");
    let s: Vec<usize> = kept
        .iter()
        .filter(|&&t| cp.in_s(t))
        .map(|&t| new_of_t(t))
        .chain(cq.cert.s_subset.ones().map(|u| k + u))
        .collect();
    let full = cp.kind().is_full() && cq.kind().is_full();
    let identity = match (cp.cert.identity, cq.cert.identity) {
        (Some(e), _) if cp.kind().is_monoid() && e != x => Some(new_of_t(e)),
        (Some(_), Some(f)) if cp.kind().is_monoid() && cq.kind().is_monoid() => Some(k + f),
        _ => None,
    };
    let kind = Kind::from_flags(full, identity.is_some());
    CertifiedPoset::build(cp.poset.blowup(x, &cq.poset), kind, identity, s, table)
}

/// Replaces join-irreducible elements of a join-semilattice by antichains.
/// `replacements` lists `(element, antichain size)`; they are applied in
/// decreasing order of element so earlier indices stay valid.
pub fn antichain_blowup_semilattice(
    semilattice: &Poset,
    replacements: &[(usize, usize)],
) -> Result<CertifiedPoset, ConstructionError> {
    let base = CertifiedPoset::join_semilattice(semilattice)?;
    let n = semilattice.len();
    for &(x, size) in replacements {
        if x >= n {
            return Err(ConstructionError::OutOfRange { index: x, n });
        }
        if size == 0 {
            return Err(ConstructionError::PreconditionFailed("antichain of size 0".into()));
        }
        if !irreducible_self_centered(&base, x)?.irreducible {
            return Err(ConstructionError::NotJoinIrreducible(x));
        }
    }
    let mut order: Vec<(usize, usize)> = replacements.to_vec();
    order.sort_by(|a, b| b.0.cmp(&a.0));
    order.dedup_by_key(|r| r.0);
    let mut cp = base;
    for (x, size) in order {
        cp = blowup_cert(&cp, x, &CertifiedPoset::antichain(size))?;
    }
    Ok(cp)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Composition {
    Series,
    Parallel,
}

/// Series (`a` below `b`) or parallel composition. Elements of `a` come
/// first. With `sigma`, a parallel composition of two monoid certificates
/// becomes a monoid certificate with `S = M_a`.
pub fn compose_cert(
    a: &CertifiedPoset,
    b: &CertifiedPoset,
    how: Composition,
    sigma: Option<&[usize]>,
) -> Result<CertifiedPoset, ConstructionError> {
    let n = a.len();
    let total = n + b.len();
    let s_union = || -> Vec<usize> {
        a.cert.s_subset.ones().chain(b.cert.s_subset.ones().map(|u| n + u)).collect()
    };
    match (how, sigma) {
        (Composition::Series, _) => {
            if !b.kind().is_full() {
                return Err(ConstructionError::KindMismatch {
                    op: "series composition",
                    required: "a full upper part",
                    found: b.kind(),
                });
            }
            let table = OpTable::from_fn(total, |x, y| match (x < n, y < n) {
                (true, true) => a.mul(x, y),
                (false, false) => n + b.mul(x - n, y - n),
                (true, false) => y,
                (false, true) => x,
            })
            .expect("series table");
            let kind = Kind::from_flags(a.kind().is_full(), a.kind().is_monoid());
            CertifiedPoset::build(a.poset.series(&b.poset), kind, a.cert.identity, s_union(), table)
        }
        (Composition::Parallel, None) => {
            let za = left_zero_in_s(a).ok_or_else(|| {
                ConstructionError::PreconditionFailed("first part has no left zero in S".into())
            })?;
            let zb = left_zero_in_s(b).ok_or_else(|| {
                ConstructionError::PreconditionFailed("second part has no left zero in S".into())
            })?;
            let table = OpTable::from_fn(total, |x, y| match (x < n, y < n) {
                (true, true) => a.mul(x, y),
                (false, false) => n + b.mul(x - n, y - n),
                (true, false) => a.mul(x, za),
                (false, true) => n + b.mul(x - n, zb),
            })
            .expect("parallel table");
            let kind = Kind::from_flags(a.kind().is_full() && b.kind().is_full(), false);
            CertifiedPoset::build(a.poset.parallel(&b.poset), kind, None, s_union(), table)
        }
        (Composition::Parallel, Some(sigma)) => {
            check_monoid_hom(a, b, sigma)?;
            let table = OpTable::from_fn(total, |x, y| match (x < n, y < n) {
                (true, true) => a.mul(x, y),
                (false, false) => n + b.mul(x - n, y - n),
                (false, true) => n + b.mul(x - n, sigma[y]),
                (true, false) => n + b.mul(sigma[x], y - n),
            })
            .expect("parallel monoid table");
            CertifiedPoset::build(
                a.poset.parallel(&b.poset),
                Kind::Monoid,
                a.cert.identity,
                a.cert.s_members(),
                table,
            )
        }
    }
}

/// Smallest `z` in `S` with `z·t = z` for all `t`. Every maximal element
/// of a full certificate qualifies.
pub fn left_zero_in_s(cp: &CertifiedPoset) -> Option<usize> {
    cp.cert.s_subset.ones().find(|&z| (0..cp.len()).all(|t| cp.mul(z, t) == z))
}

fn check_monoid_hom(a: &CertifiedPoset, b: &CertifiedPoset, sigma: &[usize]) -> Result<(), ConstructionError> {
    for (cp, side) in [(a, "first"), (b, "second")] {
        if !cp.kind().is_monoid() {
            return Err(ConstructionError::KindMismatch {
                op: "parallel monoid composition",
                required: if side == "first" { "a monoid first part" } else { "a monoid second part" },
                found: cp.kind(),
            });
        }
    }
    let n = a.len();
    if sigma.len() != n || sigma.iter().any(|&v| v >= b.len()) {
        return Err(ConstructionError::NotAHomomorphism("map has the wrong shape".into()));
    }
    let (e, f) = (a.cert.identity.expect("monoid"), b.cert.identity.expect("monoid"));
    if sigma[e] != f {
        return Err(ConstructionError::NotAHomomorphism("identity is not preserved".into()));
    }
    for x in 0..n {
        for y in 0..n {
            if sigma[a.mul(x, y)] != b.mul(sigma[x], sigma[y]) {
                return Err(ConstructionError::NotAHomomorphism(format!("not multiplicative at ({x}, {y})")));
            }
        }
    }
    let image = bitset_of(b.len(), a.cert.s_subset.ones().map(|s| sigma[s]));
    if image != b.cert.s_subset {
        return Err(ConstructionError::NotAHomomorphism("image of M is not M'".into()));
    }
    Ok(())
}

/// Largest first part for which [`find_parallel_sigma`] searches.
pub const SIGMA_SEARCH_LIMIT: usize = 6;

/// Bounded search for a monoid homomorphism `σ` with `σ(M) = M'`.
pub fn find_parallel_sigma(a: &CertifiedPoset, b: &CertifiedPoset) -> Option<Vec<usize>> {
    if a.len() > SIGMA_SEARCH_LIMIT || !a.kind().is_monoid() || !b.kind().is_monoid() {
        return None;
    }
    let n = a.len();
    let mut map = vec![usize::MAX; n];
    fn rec(a: &CertifiedPoset, b: &CertifiedPoset, i: usize, map: &mut Vec<usize>) -> bool {
        let n = map.len();
        if i == n {
            return check_monoid_hom(a, b, map).is_ok();
        }
        for v in 0..b.len() {
            map[i] = v;
            let ok = (0..=i).all(|x| {
                (0..=i).all(|y| {
                    let z = a.mul(x, y);
                    z > i || map[z] == b.mul(map[x], map[y])
                })
            });
            if ok && rec(a, b, i + 1, map) {
                return true;
            }
        }
        map[i] = usize::MAX;
        false
    }
    rec(a, b, 0, &mut map).then_some(map)
}

/// Full certificate for a series-parallel expression, by structural
/// recursion. Element order matches [`eval_sp`].
pub fn series_parallel_cert(expr: &SpExpr) -> CertifiedPoset {
    let cp = match expr {
        SpExpr::Leaf => CertifiedPoset::singleton(),
        SpExpr::Series(children) | SpExpr::Parallel(children) => {
            let how = if matches!(expr, SpExpr::Series(_)) { Composition::Series } else { Composition::Parallel };
            let mut parts = children.iter().map(series_parallel_cert);
            let first = parts.next().expect("composition needs children");
            parts.fold(first, |acc, c| compose_cert(&acc, &c, how, None).expect("parts are full"))
        }
    };
    debug_assert!(cp.poset.same_order(&eval_sp(expr)));
    cp
}

/// `N × Z_k` with `M' = ((M ∖ {e}) × Z_k) ∪ {(e, 0)}`. Requires
/// `nm = n ⇒ m = e` for all `n` in `N`, `m` in `M`.
pub fn k_blowup_monoid(cp: &CertifiedPoset, k: usize) -> Result<CertifiedPoset, ConstructionError> {
    if !cp.kind().is_monoid() {
        return Err(ConstructionError::KindMismatch {
            op: "k-blowup",
            required: "a monoid certificate",
            found: cp.kind(),
        });
    }
    if k == 0 {
        return Err(ConstructionError::PreconditionFailed("k must be positive".into()));
    }
    let e = cp.cert.identity.expect("monoid certificate has an identity");
    for nn in 0..cp.len() {
        for m in cp.cert.s_subset.ones() {
            if m != e && cp.mul(nn, m) == nn {
                return Err(ConstructionError::HypothesisFailed(format!("{nn}·{m} = {nn} with {m} not the identity")));
            }
        }
    }
    let (table, s) = k_blowup_parts(cp, k);
    let kind = Kind::from_flags(s.len() == table.len(), true);
    CertifiedPoset::build(cp.poset.replicate(k), kind, Some(e * k), s, table)
}

/// Table and subset of the `k`-fold construction without checking the
/// hypothesis.
pub(crate) fn k_blowup_parts(cp: &CertifiedPoset, k: usize) -> (OpTable, Vec<usize>) {
    let e = cp.cert.identity.expect("monoid");
    let table = OpTable::from_fn(cp.len() * k, |x, y| cp.mul(x / k, y / k) * k + (x % k + y % k) % k)
        .expect("k-blowup table");
    let s = (0..cp.len() * k)
        .filter(|&z| {
            let (m, i) = (z / k, z % k);
            cp.in_s(m) && (m != e || i == 0)
        })
        .collect();
    (table, s)
}

/// Certificates for a finite weak order.
#[derive(Debug, Clone)]
pub struct WeakOrderCerts {
    /// `x·y` is the factor on the higher level, the left one on ties.
    pub full: CertifiedPoset,
    /// Identity at the first bottom element; the bottom level carries
    /// `Z_k`, higher levels multiply as in `full`.
    pub monoid: CertifiedPoset,
}

/// Full and monoid certificates for the weak order with the given level
/// sizes (bottom first, elements numbered level by level).
pub fn weak_order_cert(levels: &[usize]) -> Result<WeakOrderCerts, ConstructionError> {
    if levels.is_empty() || levels.contains(&0) {
        return Err(ConstructionError::PreconditionFailed("levels must be nonempty".into()));
    }
    let poset = Poset::weak_order(levels);
    let level: Vec<usize> = levels.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat(i).take(k)).collect();
    let n = level.len();
    let full_table = OpTable::from_fn(n, |a, b| if level[b] > level[a] { b } else { a }).expect("weak order table");
    let bottom_single = levels[0] == 1;
    let kind = if bottom_single { Kind::FullMonoid } else { Kind::Full };
    let full = CertifiedPoset::build(poset.clone(), kind, Some(0), (0..n).collect(), full_table)?;

    let k0 = levels[0];
    let monoid_table = OpTable::from_fn(n, |a, b| {
        if level[a] == 0 && level[b] == 0 {
            (a + b) % k0
        } else if level[b] > level[a] {
            b
        } else {
            a
        }
    })
    .expect("weak order monoid table");
    let s: Vec<usize> = (0..n).filter(|&z| z == 0 || level[z] > 0).collect();
    let monoid = CertifiedPoset::build(poset, Kind::from_flags(bottom_single, true), Some(0), s, monoid_table)?;
    Ok(WeakOrderCerts { full, monoid })
}
