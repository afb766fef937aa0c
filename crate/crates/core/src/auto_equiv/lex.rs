//! `(N^2, <=_lex)` as the Cayley poset of a non-cancellative monoid.

use serde::Serialize;

use crate::algebra::{Certificate, Kind, OpTable};
use crate::poset::{bitset_of, Poset};

use super::{check_translations, AutoEquivReport, Preimage};

type Pair = (usize, usize);

/// Elements `(i, j)` with `i <= a`, `j <= b`, indexed `i·(b+1) + j`.
fn elements(window: Pair) -> Vec<Pair> {
    (0..=window.0).flat_map(|i| (0..=window.1).map(move |j| (i, j))).collect()
}

fn lex_mul(x: Pair, y: Pair) -> Pair {
    use std::cmp::Ordering::*;
    match x.0.cmp(&y.0) {
        Greater => x,
        Less => y,
        Equal => (x.0, x.1.max(y.1)),
    }
}

/// The lexicographic order on the window.
pub fn lex_poset(window: Pair) -> Poset {
    let els = elements(window);
    let labels = els.iter().map(|(i, j)| format!("({i},{j})")).collect();
    Poset::from_leq(els.len(), |x, y| els[x] <= els[y])
        .expect("lexicographic order")
        .with_labels(labels)
        .expect("distinct labels")
}

/// `(i,j)·(k,l)` is `(i,j)` if `i > k`, `(k,l)` if `i < k` and
/// `(i, max(j,l))` if `i = k`. The window is closed under it.
pub fn lex_table(window: Pair) -> (Vec<Pair>, OpTable) {
    let els = elements(window);
    let idx = |p: Pair| p.0 * (window.1 + 1) + p.1;
    let table = OpTable::from_fn(els.len(), |x, y| idx(lex_mul(els[x], els[y]))).expect("lex table");
    (els, table)
}

#[derive(Debug, Clone, Serialize)]
pub struct LexReport {
    pub window: Pair,
    pub size: usize,
    pub associative: bool,
    pub commutative: bool,
    pub identity: Option<Pair>,
    /// The table, with `S` everything, realizes `<=_lex` on the window.
    pub realizes_lex: bool,
    /// Checks of the translations `x ↦ s·x`; these are not injective.
    pub translations: AutoEquivReport,
    /// `a·b = a·c` with `b ≠ c`.
    pub cancellativity_witness: Option<[Pair; 3]>,
    /// `a·(1,0) = (1,0)` for every `a` in `{0} × N`, as forced for any
    /// monoid realizing the order.
    pub first_column_absorbed: bool,
}

pub fn lex_counterexample(window: Pair) -> LexReport {
    let (els, table) = lex_table(window);
    let n = els.len();
    let poset = lex_poset(window);
    let cert = Certificate::new(Kind::FullMonoid, bitset_of(n, 0..n), table.clone());
    let realizes_lex = cert.verify(&poset).is_ok();
    let op = |s: usize, x: usize| Some(table.mul(s, x));
    let preimage = |s: usize, t: usize| match (0..n).find(|&x| table.mul(s, x) == t) {
        Some(x) => Preimage::Found(x),
        None => Preimage::Missing,
    };
    let translations = check_translations(&poset, &op, &preimage).expect("lex window has a minimum");
    let mut witness = None;
    'scan: for a in 0..n {
        for b in 0..n {
            for c in b + 1..n {
                if table.mul(a, b) == table.mul(a, c) {
                    witness = Some([els[a], els[b], els[c]]);
                    break 'scan;
                }
            }
        }
    }
    let idx = |p: Pair| p.0 * (window.1 + 1) + p.1;
    let first_column_absorbed =
        window.0 >= 1 && (0..=window.1).all(|j| table.mul(idx((0, j)), idx((1, 0))) == idx((1, 0)));
    LexReport {
        window,
        size: n,
        associative: table.is_associative(),
        commutative: table.is_commutative(),
        identity: table.identity().map(|e| els[e]),
        realizes_lex,
        translations,
        cancellativity_witness: witness,
        first_column_absorbed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_window() {
        let r = lex_counterexample((3, 4));
        assert!(r.associative && r.commutative && r.realizes_lex && r.first_column_absorbed);
        assert_eq!(r.identity, Some((0, 0)));
        let [a, b, c] = r.cancellativity_witness.unwrap();
        assert_ne!(b, c);
        assert_eq!(lex_mul(a, b), lex_mul(a, c));
        assert!(!r.translations.passed);
    }

    #[test]
    fn lex_three_four_witness() {
        assert_eq!(lex_mul((1, 0), (0, 1)), (1, 0));
        assert_eq!(lex_mul((1, 0), (0, 2)), (1, 0));
    }
}
