//! Canonical forms, isomorphism tests and census enumeration.
//!
//! The canonical form is computed by colour refinement on up/down
//! neighbourhoods followed by individualization of the first non-singleton
//! cell; the lexicographically least relation matrix over all leaves is the
//! canonical code.

use std::collections::BTreeMap;

use super::{Poset, PosetError};

/// Size above which `is_isomorphic` switches from comparing canonical forms
/// to a direct refinement-guided matching search.
const CANONICAL_ISO_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    /// Row `i` has bit `j` set iff canonical element `i` is below `j`.
    pub code: Vec<u64>,
    /// `perm[x]` is the canonical index of element `x`.
    pub perm: Vec<usize>,
}

// One refinement round signature: own colour, sorted colours strictly above,
// sorted colours strictly below.
type Signature = (usize, Vec<usize>, Vec<usize>);

fn refine(p: &Poset, colors: &mut Vec<usize>) {
    let n = p.len();
    loop {
        let before = count_distinct(colors);
        let sigs: Vec<Signature> = (0..n)
            .map(|x| {
                let mut ups: Vec<usize> =
                    p.up(x).ones().filter(|&y| y != x).map(|y| colors[y]).collect();
                let mut downs: Vec<usize> =
                    p.down(x).ones().filter(|&y| y != x).map(|y| colors[y]).collect();
                ups.sort_unstable();
                downs.sort_unstable();
                (colors[x], ups, downs)
            })
            .collect();
        let mut sorted = sigs.clone();
        sorted.sort();
        sorted.dedup();
        for x in 0..n {
            colors[x] = sorted.binary_search(&sigs[x]).expect("signature present");
        }
        if count_distinct(colors) == before {
            return;
        }
    }
}

fn count_distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn initial_colors(p: &Poset) -> Vec<usize> {
    let keys: Vec<(usize, usize)> = (0..p.len())
        .map(|x| (p.up(x).count_ones(..), p.down(x).count_ones(..)))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort_unstable();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).unwrap()).collect()
}

fn code_for(p: &Poset, perm: &[usize]) -> Vec<u64> {
    let n = p.len();
    let mut code = vec![0u64; n];
    for x in 0..n {
        for y in p.up(x).ones() {
            code[perm[x]] |= 1u64 << perm[y];
        }
    }
    code
}

fn search(p: &Poset, colors: Vec<usize>, best: &mut Option<CanonicalForm>) {
    let n = p.len();
    let mut counts = vec![0usize; n];
    for &c in &colors {
        counts[c] += 1;
    }
    let target = (0..n).find(|&c| counts[c] > 1);
    let Some(cell) = target else {
        let code = code_for(p, &colors);
        if best.as_ref().is_none_or(|b| code < b.code) {
            *best = Some(CanonicalForm { code, perm: colors });
        }
        return;
    };
    for v in (0..n).filter(|&x| colors[x] == cell) {
        let mut next: Vec<usize> = colors
            .iter()
            .enumerate()
            .map(|(x, &c)| if c > cell || (c == cell && x != v) { c + 1 } else { c })
            .collect();
        refine(p, &mut next);
        search(p, next, best);
    }
}

/// Canonical code and relabeling of `p`. Intended for posets with at most
/// 64 elements; cost grows with the automorphism group.
pub fn canonical_form(p: &Poset) -> CanonicalForm {
    assert!(p.len() <= 64, "canonical form supports at most 64 elements");
    if p.is_empty() {
        return CanonicalForm { code: vec![], perm: vec![] };
    }
    let mut colors = initial_colors(p);
    refine(p, &mut colors);
    let mut best = None;
    search(p, colors, &mut best);
    best.expect("at least one leaf")
}

/// An order isomorphism `p -> q` as a map on indices, if one exists.
pub fn is_isomorphic(p: &Poset, q: &Poset) -> Option<Vec<usize>> {
    if p.len() != q.len() || p.hasse().len() != q.hasse().len() {
        return None;
    }
    if p.len() <= CANONICAL_ISO_LIMIT {
        let cp = canonical_form(p);
        let cq = canonical_form(q);
        if cp.code != cq.code {
            return None;
        }
        let mut inv_q = vec![0; q.len()];
        for (y, &c) in cq.perm.iter().enumerate() {
            inv_q[c] = y;
        }
        return Some(cp.perm.iter().map(|&c| inv_q[c]).collect());
    }
    match_search(p, q)
}

// Joint colour refinement on the disjoint union, then backtracking over
// colour-compatible assignments.
fn match_search(p: &Poset, q: &Poset) -> Option<Vec<usize>> {
    let n = p.len();
    let union = p.parallel(q).without_labels();
    let mut colors = initial_colors(&union);
    refine(&union, &mut colors);
    let (cp, cq) = colors.split_at(n);
    let mut a = cp.to_vec();
    let mut b = cq.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return None;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        i: usize,
        p: &Poset,
        q: &Poset,
        cp: &[usize],
        cq: &[usize],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == p.len() {
            return true;
        }
        for y in 0..q.len() {
            if used[y] || cq[y] != cp[i] {
                continue;
            }
            let ok = (0..i).all(|j| {
                p.leq(j, i) == q.leq(map[j], y) && p.leq(i, j) == q.leq(y, map[j])
            });
            if !ok {
                continue;
            }
            map[i] = y;
            used[y] = true;
            if go(i + 1, p, q, cp, cq, map, used) {
                return true;
            }
            used[y] = false;
        }
        false
    }
    go(0, p, q, cp, cq, &mut map, &mut used).then_some(map)
}

/// One canonical representative per isomorphism class of `n`-element
/// posets, sorted by canonical code.
pub fn enumerate_posets(n: usize, cap: usize) -> Result<Vec<Poset>, PosetError> {
    if n > cap {
        return Err(PosetError::SizeLimit { n, limit: cap });
    }
    let mut reps: Vec<Poset> = vec![Poset::antichain(0)];
    for k in 1..=n {
        let mut next: BTreeMap<Vec<u64>, Poset> = BTreeMap::new();
        for rep in &reps {
            let m = k - 1;
            for mask in 0u64..(1u64 << m) {
                // the new maximal element sits above exactly this downset
                let is_downset = (0..m)
                    .filter(|&x| mask >> x & 1 == 1)
                    .all(|x| rep.down(x).ones().all(|y| mask >> y & 1 == 1));
                if !is_downset {
                    continue;
                }
                let candidate = Poset::from_leq(k, |x, y| {
                    if y == m {
                        x == m || mask >> x & 1 == 1
                    } else {
                        x != m && rep.leq(x, y)
                    }
                })
                .expect("extension by a maximal element");
                let cf = canonical_form(&candidate);
                next.entry(cf.code).or_insert_with(|| candidate.relabel(&cf.perm));
            }
        }
        reps = next.into_values().collect();
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Oracle: all permutations.
    fn brute_iso(p: &Poset, q: &Poset) -> bool {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for i in 0..n {
                    let mut v = p.clone();
                    v.insert(i, n - 1);
                    out.push(v);
                }
            }
            out
        }
        p.len() == q.len()
            && perms(p.len()).into_iter().any(|f| {
                (0..p.len()).all(|x| (0..p.len()).all(|y| p.leq(x, y) == q.leq(f[x], f[y])))
            })
    }

    // Oracle: every relation on n points that is a partial order, deduplicated
    // by brute-force isomorphism.
    fn brute_census(n: usize) -> usize {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y))).collect();
        let mut classes: Vec<Poset> = Vec::new();
        for mask in 0u32..(1 << pairs.len()) {
            let rel = |x: usize, y: usize| {
                x == y || pairs.iter().position(|&pr| pr == (x, y)).is_some_and(|i| mask >> i & 1 == 1)
            };
            if let Ok(p) = Poset::from_leq(n, rel) {
                if !classes.iter().any(|c| brute_iso(c, &p)) {
                    classes.push(p);
                }
            }
        }
        classes.len()
    }

    #[test]
    fn census_counts_match_brute_force() {
        assert_eq!(brute_census(3), 5);
        assert_eq!(brute_census(4), 16);
        assert_eq!(enumerate_posets(1, 7).unwrap().len(), 1);
        assert_eq!(enumerate_posets(3, 7).unwrap().len(), 5);
        assert_eq!(enumerate_posets(4, 7).unwrap().len(), 16);
        assert_eq!(enumerate_posets(5, 7).unwrap().len(), 63);
    }

    #[test]
    fn size_limit() {
        assert!(enumerate_posets(8, 7).is_err());
    }

    #[test]
    fn identity_and_non_iso() {
        let n = Poset::n_poset();
        let f = is_isomorphic(&n, &n).unwrap();
        assert!((0..4).all(|x| (0..4).all(|y| n.leq(x, y) == n.leq(f[x], f[y]))));
        assert!(is_isomorphic(&Poset::chain(2), &Poset::antichain(2)).is_none());
    }

    #[test]
    fn n_poset_is_self_dual() {
        let n = Poset::n_poset();
        let d = n.dual().relabel(&[3, 1, 0, 2]);
        assert!(brute_iso(&n, &d));
        let f = is_isomorphic(&n, &d).unwrap();
        assert!((0..4).all(|x| (0..4).all(|y| n.leq(x, y) == d.leq(f[x], f[y]))));
    }

    #[test]
    fn large_match_search() {
        let p = Poset::weak_order(&[3, 4, 5]);
        let perm: Vec<usize> = (0..12).rev().collect();
        let q = p.relabel(&perm);
        let f = is_isomorphic(&p, &q).unwrap();
        assert!((0..12).all(|x| (0..12).all(|y| p.leq(x, y) == q.leq(f[x], f[y]))));
        assert!(is_isomorphic(&p, &Poset::weak_order(&[4, 3, 5])).is_none());
    }
}
