//! Series-parallel expressions.

use serde::{Deserialize, Serialize};

use super::Poset;

/// Tree built from singletons by series and parallel composition. Series
/// children are listed bottom to top.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpExpr {
    Leaf,
    Series(Vec<SpExpr>),
    Parallel(Vec<SpExpr>),
}

impl SpExpr {
    pub fn leaves(&self) -> usize {
        match self {
            SpExpr::Leaf => 1,
            SpExpr::Series(c) | SpExpr::Parallel(c) => c.iter().map(SpExpr::leaves).sum(),
        }
    }

    /// Every expression with exactly `leaves` leaves, where internal nodes
    /// are binary. Distinct trees may evaluate to isomorphic posets.
    pub fn all_binary(leaves: usize) -> Vec<SpExpr> {
        if leaves == 1 {
            return vec![SpExpr::Leaf];
        }
        let mut out = Vec::new();
        for left in 1..leaves {
            let ls = Self::all_binary(left);
            let rs = Self::all_binary(leaves - left);
            for l in &ls {
                for r in &rs {
                    out.push(SpExpr::Series(vec![l.clone(), r.clone()]));
                    out.push(SpExpr::Parallel(vec![l.clone(), r.clone()]));
                }
            }
        }
        out
    }
}

/// Evaluates an expression; element order follows a left-to-right leaf walk.
pub fn eval_sp(expr: &SpExpr) -> Poset {
    match expr {
        SpExpr::Leaf => Poset::chain(1),
        SpExpr::Series(children) => fold(children, Poset::series),
        SpExpr::Parallel(children) => fold(children, Poset::parallel),
    }
}

fn fold(children: &[SpExpr], op: fn(&Poset, &Poset) -> Poset) -> Poset {
    let mut it = children.iter().map(eval_sp);
    let first = it.next().expect("composition needs children");
    it.fold(first, |acc, p| op(&acc, &p))
}

/// True iff `p` has no induced subposet isomorphic to the N-poset.
pub fn is_series_parallel(p: &Poset) -> bool {
    let n = p.len();
    // N: a < b, c < b, c < d and no other relations among the four.
    for b in 0..n {
        for c in 0..n {
            if !p.lt(c, b) {
                continue;
            }
            for a in 0..n {
                if a == c || !p.lt(a, b) || p.comparable(a, c) {
                    continue;
                }
                for d in 0..n {
                    if d == b || !p.lt(c, d) {
                        continue;
                    }
                    if !p.comparable(a, d) && !p.comparable(b, d) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Recovers a series-parallel expression whose evaluation is isomorphic to
/// `p`, or `None` when `p` is not series-parallel. Independent of the
/// forbidden-subposet scan in [`is_series_parallel`].
pub fn sp_decompose(p: &Poset) -> Option<SpExpr> {
    let all: Vec<usize> = (0..p.len()).collect();
    decompose(p, &all)
}

fn decompose(p: &Poset, elems: &[usize]) -> Option<SpExpr> {
    if elems.len() == 1 {
        return Some(SpExpr::Leaf);
    }
    // Components of the comparability graph give a parallel split.
    let comps = components(elems, |x, y| p.comparable(x, y));
    if comps.len() > 1 {
        let children = comps.iter().map(|c| decompose(p, c)).collect::<Option<Vec<_>>>()?;
        return Some(SpExpr::Parallel(children));
    }
    // Components of the incomparability graph give a series split.
    let mut comps = components(elems, |x, y| x != y && !p.comparable(x, y));
    if comps.len() > 1 {
        // consecutive blocks must be totally stacked
        comps.sort_by(|a, b| {
            if p.lt(a[0], b[0]) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        let children = comps.iter().map(|c| decompose(p, c)).collect::<Option<Vec<_>>>()?;
        return Some(SpExpr::Series(children));
    }
    None
}

fn components<F: Fn(usize, usize) -> bool>(elems: &[usize], adj: F) -> Vec<Vec<usize>> {
    let mut seen = vec![false; elems.len()];
    let mut out = Vec::new();
    for start in 0..elems.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![elems[start]];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..elems.len() {
                if !seen[j] && adj(elems[i], elems[j]) {
                    seen[j] = true;
                    comp.push(elems[j]);
                    stack.push(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::is_isomorphic;

    #[test]
    fn eval_examples() {
        let s = eval_sp(&SpExpr::Series(vec![SpExpr::Leaf, SpExpr::Leaf]));
        assert!(s.same_order(&Poset::chain(2)));
        let par = eval_sp(&SpExpr::Parallel(vec![SpExpr::Leaf, SpExpr::Leaf]));
        assert!(par.same_order(&Poset::antichain(2)));
        let v = eval_sp(&SpExpr::Series(vec![
            SpExpr::Parallel(vec![SpExpr::Leaf, SpExpr::Leaf]),
            SpExpr::Leaf,
        ]));
        assert_eq!(v.len(), 3);
        assert_eq!(v.global_max(), Some(2));
        assert_eq!(v.minima(), vec![0, 1]);
    }

    #[test]
    fn n_free_examples() {
        assert!(!is_series_parallel(&Poset::n_poset()));
        assert!(is_series_parallel(&Poset::chain(5)));
        // {0,1,3,4}: 0<3, 0<4, 1<3, 1<4? no: 1<3 and 1<4, 0<3... check via scan
        assert!(!is_series_parallel(&Poset::nat_interval(4)));
    }

    #[test]
    fn decomposition_agrees_with_scan_on_census() {
        for n in 1..=5 {
            for p in crate::poset::enumerate_posets(n, 7).unwrap() {
                let d = sp_decompose(&p);
                assert_eq!(d.is_some(), is_series_parallel(&p));
                if let Some(e) = d {
                    assert!(is_isomorphic(&eval_sp(&e), &p).is_some());
                }
            }
        }
    }

    #[test]
    fn binary_expression_counts() {
        assert_eq!(SpExpr::all_binary(1).len(), 1);
        assert_eq!(SpExpr::all_binary(2).len(), 2);
        assert!(SpExpr::all_binary(4).iter().all(|e| e.leaves() == 4));
    }
}
