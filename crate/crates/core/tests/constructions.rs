use proptest::prelude::*;

use cayley_poset::algebra::{Certificate, Kind, OpTable};
use cayley_poset::constructions::{
    adjoin_extremum, blowup_cert, compose_cert, find_retract, product_cert, retract_to_full,
    series_parallel_cert, weak_order_cert, CertifiedPoset, Composition, Extremum,
};
use cayley_poset::poset::{bitset_of, eval_sp, is_isomorphic, SpExpr};
use cayley_poset::recognizer::{enumerate_certificates, recognize, verify_certificate, ClassQuery, SearchConfig};
use cayley_poset::Poset;

#[test]
fn series_parallel_sweep() {
    let cfg = SearchConfig::deterministic();
    for leaves in 1..=5 {
        for e in SpExpr::all_binary(leaves) {
            let cp = series_parallel_cert(&e);
            assert!(cp.poset.same_order(&eval_sp(&e)));
            assert!(cp.kind().is_full());
            assert_eq!(verify_certificate(&cp.poset, &cp.cert), Ok(()));
            assert!(recognize(&cp.poset, ClassQuery::Full, &cfg).verdict.is_yes());
        }
    }
}

#[test]
fn series_parallel_six_leaves_verify() {
    for e in SpExpr::all_binary(6) {
        let cp = series_parallel_cert(&e);
        assert_eq!(verify_certificate(&cp.poset, &cp.cert), Ok(()));
    }
}

fn compositions(total: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for mut rest in compositions(total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[test]
fn weak_order_sweep() {
    for total in 1..=6 {
        for levels in compositions(total) {
            let w = weak_order_cert(&levels).unwrap();
            let p = Poset::weak_order(&levels);
            assert_eq!(verify_certificate(&p, &w.full.cert), Ok(()));
            assert_eq!(verify_certificate(&p, &w.monoid.cert), Ok(()));
            assert_eq!(w.full.kind() == Kind::FullMonoid, levels[0] == 1, "{levels:?}");
            assert!(w.monoid.kind().is_monoid());
        }
    }
    let w = weak_order_cert(&[2, 2]).unwrap();
    assert_eq!(w.monoid.kind(), Kind::Monoid);
}

/// Levels `0..L` with addition capped at `L - 1`, times `Z_k`.
fn capped_sum_table(levels: usize, k: usize) -> OpTable {
    OpTable::from_fn(levels * k, |a, b| {
        let (i, g) = (a / k, a % k);
        let (j, h) = (b / k, b % k);
        (i + j).min(levels - 1) * k + (g + h) % k
    })
    .unwrap()
}

#[test]
fn capped_sum_construction_needs_the_top_level_handled() {
    // two levels of two: associative, but the top level is not realized
    let t = capped_sum_table(2, 2);
    assert!(t.is_associative());
    let s = bitset_of(4, [0, 2, 3]);
    let cert = Certificate::new(Kind::Monoid, s, t);
    assert!(cert.verify(&Poset::weak_order(&[2, 2])).is_err());
}

fn labeled(p: Poset, prefix: &str) -> Poset {
    let labels = (0..p.len()).map(|i| format!("{prefix}{i}")).collect();
    p.with_labels(labels).unwrap()
}

fn relabeled(cp: CertifiedPoset, prefix: &str) -> CertifiedPoset {
    CertifiedPoset::new(labeled(cp.poset, prefix), cp.cert).unwrap()
}

#[test]
fn blowups_commute() {
    let p = relabeled(CertifiedPoset::chain(4), "p");
    let q = relabeled(CertifiedPoset::antichain(2), "q");
    let r = relabeled(CertifiedPoset::antichain(3), "r");
    let (x, y) = (1, 3);
    // blow up y first (index of x unchanged), or x first (y shifts down)
    let first = blowup_cert(&blowup_cert(&p, y, &r).unwrap(), x, &q).unwrap();
    let second = blowup_cert(&blowup_cert(&p, x, &q).unwrap(), y - 1, &r).unwrap();
    assert_eq!(first.len(), second.len());
    let index = |cp: &CertifiedPoset, l: &str| cp.poset.index_of(l).unwrap();
    for a in 0..first.len() {
        for b in 0..first.len() {
            let (la, lb) = (first.poset.label(a), first.poset.label(b));
            let v1 = first.poset.label(first.cert.table.mul(a, b));
            let v2 = second.poset.label(second.cert.table.mul(index(&second, &la), index(&second, &lb)));
            assert_eq!(v1, v2, "{la}·{lb}");
        }
    }
}

#[test]
fn n_poset_retract_gives_full_certificate() {
    let p = Poset::n_poset();
    let cfg = SearchConfig::deterministic();
    let mut done = false;
    for cert in enumerate_certificates(&p, Kind::Monoid, &cfg, 10_000) {
        let cp = CertifiedPoset::new(p.clone(), cert).unwrap();
        if let Some(sigma) = find_retract(&cp) {
            let full = retract_to_full(&cp, &sigma).unwrap();
            assert_eq!(full.kind(), Kind::Full);
            assert_eq!(verify_certificate(&p, &full.cert), Ok(()));
            done = true;
            break;
        }
    }
    assert!(done, "some monoid certificate of the N-poset admits a retract");
}

#[test]
fn structural_agreement() {
    let c2 = CertifiedPoset::chain(2);
    let a2 = CertifiedPoset::antichain(2);
    let w = weak_order_cert(&[1, 2]).unwrap().full;
    let cases = vec![
        (product_cert(&c2, &w).unwrap(), c2.poset.product(&w.poset)),
        (compose_cert(&a2, &w, Composition::Series, None).unwrap(), a2.poset.series(&w.poset)),
        (compose_cert(&w, &a2, Composition::Parallel, None).unwrap(), w.poset.parallel(&a2.poset)),
        (blowup_cert(&w, 0, &a2).unwrap(), w.poset.blowup(0, &a2.poset)),
        (adjoin_extremum(&w, Extremum::Max).unwrap(), w.poset.adjoin_max()),
    ];
    for (cp, structural) in cases {
        let realized = cp.cert.realized_poset().unwrap();
        assert!(is_isomorphic(&realized, &structural).is_some());
        assert!(realized.same_order(&structural));
    }
}

fn base() -> impl Strategy<Value = CertifiedPoset> {
    prop_oneof![
        (1usize..4).prop_map(CertifiedPoset::chain),
        (1usize..4).prop_map(CertifiedPoset::antichain),
        prop::collection::vec(1usize..3, 1..4).prop_map(|l| weak_order_cert(&l).unwrap().full),
        prop::collection::vec(1usize..3, 1..4).prop_map(|l| weak_order_cert(&l).unwrap().monoid),
        (1usize..5, any::<prop::sample::Index>()).prop_map(|(n, i)| {
            let all = SpExpr::all_binary(n);
            series_parallel_cert(&all[i.index(all.len())])
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn constructions_always_verify(a in base(), b in base(), op in 0usize..6) {
        let out = match op {
            0 => product_cert(&a, &b).ok(),
            1 => adjoin_extremum(&a, Extremum::Max).ok(),
            2 => adjoin_extremum(&a, Extremum::Min).ok(),
            3 => compose_cert(&a, &b, Composition::Series, None).ok(),
            4 => compose_cert(&a, &b, Composition::Parallel, None).ok(),
            _ => (0..a.len()).find_map(|x| blowup_cert(&a, x, &b).ok()),
        };
        match op {
            0 | 1 => prop_assert!(out.is_some()),
            4 => prop_assert!(out.is_some() || !(a.kind().is_full() && b.kind().is_full())),
            2 => prop_assert_eq!(out.is_some(), a.kind().is_full()),
            3 => prop_assert_eq!(out.is_some(), b.kind().is_full()),
            _ => {}
        }
        if let Some(cp) = out {
            prop_assert_eq!(verify_certificate(&cp.poset, &cp.cert), Ok(()));
            if op == 2 {
                prop_assert_eq!(cp.poset.global_min(), cp.cert.identity);
            }
        }
    }
}
