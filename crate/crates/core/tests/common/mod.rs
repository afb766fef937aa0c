//! Brute-force oracle shared by the recognizer and acceptance tests.

use std::collections::HashSet;

use cayley_poset::algebra::Kind;

/// All labeled semigroups of order `n` by plain backtracking.
pub fn semigroups(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, t: &mut Vec<Option<usize>>, i: usize, out: &mut Vec<Vec<usize>>) {
        if i == n * n {
            out.push(t.iter().map(|v| v.unwrap()).collect());
            return;
        }
        for v in 0..n {
            t[i] = Some(v);
            let ok = (0..n).all(|a| {
                (0..n).all(|b| {
                    (0..n).all(|c| {
                        let ab = t[a * n + b];
                        let bc = t[b * n + c];
                        match (ab, bc) {
                            (Some(ab), Some(bc)) => match (t[ab * n + c], t[a * n + bc]) {
                                (Some(l), Some(r)) => l == r,
                                _ => true,
                            },
                            _ => true,
                        }
                    })
                })
            });
            if ok {
                rec(n, t, i + 1, out);
            }
        }
        t[i] = None;
    }
    let mut out = Vec::new();
    rec(n, &mut vec![None; n * n], 0, &mut out);
    out
}

pub fn order_key(n: usize, leq: impl Fn(usize, usize) -> bool) -> u64 {
    let mut k = 0;
    for x in 0..n {
        for y in 0..n {
            if leq(x, y) {
                k |= 1 << (x * n + y);
            }
        }
    }
    k
}

/// Order relations realized by some (table, subset) pair, per kind.
pub fn oracle(n: usize) -> [HashSet<u64>; 4] {
    let mut sets: [HashSet<u64>; 4] = Default::default();
    for t in semigroups(n) {
        let identity = (0..n).find(|&e| (0..n).all(|x| t[e * n + x] == x && t[x * n + e] == x));
        for mask in 1u32..(1 << n) {
            let inside = |x: usize| mask >> x & 1 == 1;
            let closed = (0..n).all(|a| (0..n).all(|b| !inside(a) || !inside(b) || inside(t[a * n + b])));
            if !closed {
                continue;
            }
            let rel = |x: usize, y: usize| (0..n).any(|s| inside(s) && t[x * n + s] == y);
            let reflexive = (0..n).all(|x| rel(x, x));
            let antisym = (0..n).all(|x| (0..n).all(|y| x == y || !(rel(x, y) && rel(y, x))));
            if !reflexive || !antisym {
                continue;
            }
            let key = order_key(n, rel);
            let full = mask == (1 << n) - 1;
            let monoid = identity.is_some_and(inside);
            sets[0].insert(key);
            if monoid {
                sets[1].insert(key);
            }
            if full {
                sets[2].insert(key);
            }
            if full && monoid {
                sets[3].insert(key);
            }
        }
    }
    sets
}

pub fn kind_index(k: Kind) -> usize {
    match k {
        Kind::Semigroup => 0,
        Kind::Monoid => 1,
        Kind::Full => 2,
        Kind::FullMonoid => 3,
    }
}
