use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use cayley_poset::algebra::{cayley_poset, pair_act, OpTable};
use cayley_poset::auto_equiv::{
    check_auto_equivalent, check_auto_equivalent_finite, collision_lattice, make_presentation, roundtrip,
    smith_normal_form, truncated_cayley, AutoEquivError, MonoidPresentation, Window,
};
use cayley_poset::poset::{bitset_of, enumerate_posets};

/// Determinant by fraction-free elimination.
fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        sign
    } else {
        sign * &a[n - 1][n - 1]
    }
}

fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    a.iter()
        .map(|r| (0..b[0].len()).map(|j| r.iter().zip(b).map(|(x, row)| x * &row[j]).sum()).collect())
        .collect()
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-20i64..=20, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn smith_normal_form_is_correct(m in matrix()) {
        let snf = smith_normal_form(&m).unwrap().to_big();
        let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        prop_assert_eq!(&mul(&mul(&snf.u, &big), &snf.v), &snf.s);
        prop_assert_eq!(det(&snf.u).abs(), BigInt::one());
        prop_assert_eq!(det(&snf.v).abs(), BigInt::one());
        for (i, row) in snf.s.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                prop_assert!(i == j || x.is_zero());
            }
        }
        let d = snf.diagonal();
        for w in d.windows(2) {
            prop_assert!(!w[0].is_negative());
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

#[test]
fn two_generator_lattices_stabilize() {
    for a in 2..=7i64 {
        for b in a + 1..=30 {
            if a * b > 60 || gcd(a, b) != 1 {
                continue;
            }
            let p = MonoidPresentation::numerical(&[a, b]).unwrap();
            assert!(collision_lattice(&p, a * b - 1).unwrap().rows.is_empty(), "<{a},{b}>");
            for bound in [a * b, a * b + 7, 2 * a * b] {
                assert_eq!(collision_lattice(&p, bound).unwrap().rows, vec![vec![b, -a]], "<{a},{b}> at {bound}");
            }
        }
    }
}

#[test]
fn lattice_grows_with_bound() {
    let p = MonoidPresentation::numerical(&[4, 6, 7]).unwrap();
    let mut prev = collision_lattice(&p, 0).unwrap();
    for bound in 1..=40 {
        let next = collision_lattice(&p, bound).unwrap();
        assert!(prev.is_sublattice_of(&next).unwrap(), "bound {bound}");
        prev = next;
    }
    assert_eq!(prev.rank(), 2);
}

fn regression_set() -> Vec<(&'static str, MonoidPresentation, Window)> {
    vec![
        ("<3,5>", MonoidPresentation::numerical(&[3, 5]).unwrap(), Window::uniform(1, 13)),
        ("<2,3>", MonoidPresentation::numerical(&[2, 3]).unwrap(), Window::uniform(1, 10)),
        ("<4,6,7>", MonoidPresentation::numerical(&[4, 6, 7]).unwrap(), Window::uniform(1, 20)),
        ("N^2", make_presentation(2, vec![], vec![vec![1, 0], vec![0, 1]]).unwrap(), Window::uniform(2, 4)),
        (
            "N x Z/2",
            make_presentation(1, vec![2], vec![vec![1, 0], vec![1, 1]]).unwrap(),
            Window::uniform(1, 6),
        ),
    ]
}

#[test]
fn roundtrip_regression_set() {
    for (name, p, w) in regression_set() {
        let max = w.bounds.iter().sum::<i64>();
        let r = roundtrip(&p, &w, 3 * max).unwrap();
        assert!(r.passed(), "{name}: {r:?}");
        assert_eq!(r.same_window_isomorphic, Some(true), "{name}");
    }
}

#[test]
fn regression_set_is_auto_equivalent_on_windows() {
    for (name, p, w) in regression_set() {
        let t = truncated_cayley(&p, &w).unwrap();
        let r = check_auto_equivalent(&t).unwrap();
        assert!(r.passed, "{name}: {r:?}");
        // atoms of the truncation are the minimal generators
        let gens: Vec<String> = p.atoms().unwrap().iter().map(|&i| p.label(&p.generators()[i])).collect();
        let mut atoms = r.atom_labels.clone();
        atoms.sort();
        let mut gens_sorted = gens.clone();
        gens_sorted.sort();
        assert_eq!(atoms, gens_sorted, "{name}");
    }
}

#[test]
fn finite_posets_are_not_auto_equivalent() {
    for n in 2..=4 {
        for p in enumerate_posets(n, 7).unwrap() {
            match check_auto_equivalent_finite(&p) {
                Ok(r) => assert!(!r.passed),
                Err(AutoEquivError::NoMinimum) => assert!(p.global_min().is_none()),
                Err(e) => panic!("{e}"),
            }
        }
    }
}

fn in_numerical(x: i64, gens: &[i64]) -> bool {
    let mut reach = vec![false; x as usize + 1];
    reach[0] = true;
    for v in 1..=x as usize {
        reach[v] = gens.iter().any(|&g| g as usize <= v && reach[v - g as usize]);
    }
    reach[x as usize]
}

#[test]
fn figure_two_covers() {
    let p = MonoidPresentation::numerical(&[3, 5]).unwrap();
    let t = truncated_cayley(&p, &Window::uniform(1, 13)).unwrap();
    let members: Vec<i64> = (0..=13).filter(|&x| in_numerical(x, &[3, 5])).collect();
    let got: Vec<i64> = t.elements.iter().map(|v| v[0]).collect();
    assert_eq!(got, members);
    let mut expected: Vec<(i64, i64)> = Vec::new();
    for &x in &members {
        for &y in &members {
            if [3, 5].contains(&(y - x)) {
                expected.push((x, y));
            }
        }
    }
    let mut covers: Vec<(i64, i64)> =
        t.poset.hasse().into_iter().map(|(a, b)| (t.elements[a][0], t.elements[b][0])).collect();
    covers.sort();
    expected.sort();
    assert_eq!(covers, expected);
}

/// Window elements plus an absorbing element for everything beyond it.
fn rees_quotient(elements: &[i64], top: i64) -> OpTable {
    let n = elements.len();
    OpTable::from_fn(n + 1, |a, b| {
        if a == n || b == n {
            return n;
        }
        let s = elements[a] + elements[b];
        if s > top {
            n
        } else {
            elements.iter().position(|&e| e == s).expect("members are closed under addition")
        }
    })
    .unwrap()
}

#[test]
fn truncation_matches_finite_quotient() {
    for (gens, top) in [(vec![3, 5], 13), (vec![2, 3], 10)] {
        let p = MonoidPresentation::numerical(&gens).unwrap();
        let t = truncated_cayley(&p, &Window::uniform(1, top)).unwrap();
        let els: Vec<i64> = t.elements.iter().map(|v| v[0]).collect();
        let table = rees_quotient(&els, top);
        let n = els.len();
        let act = pair_act(&table, &bitset_of(n + 1, 0..=n)).unwrap();
        let q = cayley_poset(&act).unwrap();
        let window: Vec<usize> = (0..n).collect();
        assert!(q.induced(&window).same_order(&t.poset), "{gens:?}");
    }
}
