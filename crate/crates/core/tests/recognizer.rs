mod common;

use cayley_poset::algebra::Kind;
use cayley_poset::poset::enumerate_posets;
use cayley_poset::recognizer::{
    classify, enumerate_certificates, recognize, verify_certificate, ClassQuery, SearchConfig, Verdict,
};
use cayley_poset::Poset;

use common::{kind_index, oracle, order_key, semigroups};

#[test]
fn labeled_semigroup_counts() {
    let counts: Vec<usize> = (1..=3).map(|n| semigroups(n).len()).collect();
    assert_eq!(counts, vec![1, 8, 113]);
}

#[test]
fn verdicts_match_brute_force_oracle() {
    for n in 1..=4 {
        let sets = oracle(n);
        for p in enumerate_posets(n, 7).unwrap() {
            let key = order_key(n, |x, y| p.leq(x, y));
            for kind in Kind::ALL {
                let expected = sets[kind_index(kind)].contains(&key);
                for config in [SearchConfig::deterministic(), SearchConfig::deterministic().without_pruning()] {
                    let got = recognize(&p, kind.into(), &config).verdict;
                    assert_eq!(got.decided(), Some(expected), "{kind} on {p:?} (prune={})", config.prune);
                }
            }
            assert!(recognize(&p, ClassQuery::Act, &SearchConfig::default()).verdict.is_yes());
        }
    }
}

#[test]
fn every_yes_certificate_verifies() {
    for n in 1..=5 {
        for p in enumerate_posets(n, 7).unwrap() {
            let labels = classify(&p, &SearchConfig::deterministic());
            assert!(labels.is_consistent());
            for q in [ClassQuery::Semigroup, ClassQuery::Monoid, ClassQuery::Full, ClassQuery::FullMonoid] {
                if let Some(cert) = labels.get(q).certificate() {
                    assert_eq!(verify_certificate(&p, cert), Ok(()));
                    assert!(cert.kind.implies(q.kind().unwrap()));
                }
            }
        }
    }
}

#[test]
fn full_monoid_iff_semigroup_with_minimum() {
    for n in 1..=5 {
        for p in enumerate_posets(n, 7).unwrap() {
            // the unpruned semigroup search ranges over all upsets and
            // does not use the global-minimum reduction
            let cfg = SearchConfig::deterministic();
            let fm = recognize(&p, ClassQuery::FullMonoid, &cfg).verdict;
            let sg = recognize(&p, ClassQuery::Semigroup, &cfg.without_pruning()).verdict;
            assert_eq!(fm.is_yes(), sg.is_yes() && p.global_min().is_some(), "{p:?}");
        }
    }
}

#[test]
fn small_posets_are_all_semigroup_posets() {
    for n in 1..=5 {
        for p in enumerate_posets(n, 7).unwrap() {
            let v = recognize(&p, ClassQuery::Semigroup, &SearchConfig::deterministic()).verdict;
            assert!(v.is_yes(), "{p:?}");
        }
    }
}

#[test]
fn parallel_and_sequential_verdicts_agree() {
    let posets = [Poset::n_poset(), Poset::nat_interval(4), Poset::n_family(2), Poset::nat_interval_star(6)];
    for p in &posets {
        for q in [ClassQuery::Semigroup, ClassQuery::Monoid, ClassQuery::Full, ClassQuery::FullMonoid] {
            let seq = recognize(p, q, &SearchConfig::deterministic()).verdict;
            for threads in [2, 4] {
                let cfg = SearchConfig { threads, ..SearchConfig::default() };
                let par = recognize(p, q, &cfg).verdict;
                assert_eq!(seq.decided(), par.decided());
                if let Some(c) = par.certificate() {
                    assert!(verify_certificate(p, c).is_ok());
                }
            }
        }
    }
}

#[test]
fn deterministic_certificate_is_least_enumerated() {
    let p = Poset::n_poset();
    let cfg = SearchConfig::deterministic();
    for kind in [Kind::Full, Kind::Monoid] {
        let first = recognize(&p, kind.into(), &cfg).verdict.certificate().cloned().unwrap();
        let all = enumerate_certificates(&p, kind, &cfg, usize::MAX);
        let least = all
            .iter()
            .min_by_key(|c| (c.s_members().iter().fold(0u64, |m, &i| m | 1 << i), c.table.flat().to_vec()))
            .unwrap();
        assert_eq!(&first, least);
    }
}

#[test]
fn unknown_is_never_no() {
    let p = Poset::nat_interval(5);
    let v = recognize(&p, ClassQuery::Full, &SearchConfig::deterministic().without_pruning().with_budget(100)).verdict;
    assert!(matches!(v, Verdict::Unknown));
}

#[test]
fn known_classifications() {
    let cfg = SearchConfig::deterministic();
    let l = classify(&Poset::nat_interval(4), &cfg);
    assert!(l.semigroup.is_yes() && l.monoid.is_yes() && l.full.is_no() && l.full_monoid.is_no());
    let l = classify(&Poset::n_family(2), &cfg);
    assert!(l.semigroup.is_yes() && l.monoid.is_no() && l.full.is_yes() && l.full_monoid.is_no());
    assert!(recognize(&Poset::nat_interval_star(6), ClassQuery::Semigroup, &cfg).verdict.is_no());
}
