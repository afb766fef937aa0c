//! Necessary conditions on the identity of a monoid certificate.

use crate::poset::Poset;

/// Which necessary condition rejected a candidate identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonoidObstruction {
    /// Some `↑x` is larger than `↑e`, so `x·↑e = ↑x` is impossible.
    UpsetTooSmall { x: usize },
    /// No order-preserving map from `↑e` onto `↑x` sends `e` to `x`.
    NoSurjection { x: usize },
    /// For `x < e`, the elements incomparable to `x` do not embed
    /// injectively and monotonically into those incomparable to `e`.
    NoInjection { x: usize },
}

/// Checks the necessary conditions for `e` to be the identity of a monoid
/// certificate with `M = ↑e`. `None` means no obstruction was found.
pub fn monoid_obstruction(p: &Poset, e: usize) -> Option<MonoidObstruction> {
    let up_e: Vec<usize> = p.up(e).ones().collect();
    for x in 0..p.len() {
        if p.up(x).count_ones(..) > up_e.len() {
            return Some(MonoidObstruction::UpsetTooSmall { x });
        }
    }
    for x in 0..p.len() {
        let target: Vec<usize> = p.up(x).ones().collect();
        if !order_map_exists(p, &up_e, &target, Some((e, x)), false, true) {
            return Some(MonoidObstruction::NoSurjection { x });
        }
    }
    let incomparable_to = |z: usize| -> Vec<usize> {
        (0..p.len()).filter(|&y| !p.comparable(y, z)).collect()
    };
    let inc_e = incomparable_to(e);
    for x in p.down(e).ones().filter(|&x| x != e) {
        let inc_x = incomparable_to(x);
        if inc_x.len() > inc_e.len() || !order_map_exists(p, &inc_x, &inc_e, None, true, false) {
            return Some(MonoidObstruction::NoInjection { x });
        }
    }
    None
}

/// Whether `e` survives every necessary condition for being the identity
/// of a monoid certificate.
pub fn monoid_feasibility_prune(p: &Poset, e: usize) -> bool {
    monoid_obstruction(p, e).is_none()
}

/// Whether an order-preserving map `domain -> codomain` exists, optionally
/// pinned at one point, injective, or onto.
pub(crate) fn order_map_exists(
    p: &Poset,
    domain: &[usize],
    codomain: &[usize],
    pin: Option<(usize, usize)>,
    injective: bool,
    surjective: bool,
) -> bool {
    if injective && domain.len() > codomain.len() {
        return false;
    }
    if surjective && domain.len() < codomain.len() {
        return false;
    }
    // assign in a linear extension so comparable pairs are checked early
    let mut dom = domain.to_vec();
    dom.sort_by_key(|&x| (p.down(x).count_ones(..), x));
    let mut image = vec![usize::MAX; dom.len()];
    let mut hits = vec![0usize; codomain.len()];
    let mut covered = 0;
    search(p, &dom, codomain, pin, injective, surjective, 0, &mut image, &mut hits, &mut covered)
}

#[allow(clippy::too_many_arguments)]
fn search(
    p: &Poset,
    dom: &[usize],
    cod: &[usize],
    pin: Option<(usize, usize)>,
    injective: bool,
    surjective: bool,
    i: usize,
    image: &mut [usize],
    hits: &mut [usize],
    covered: &mut usize,
) -> bool {
    if surjective && cod.len() - *covered > dom.len() - i {
        return false;
    }
    if i == dom.len() {
        return true;
    }
    let x = dom[i];
    for (k, &y) in cod.iter().enumerate() {
        if let Some((a, b)) = pin {
            if x == a && y != b {
                continue;
            }
        }
        if injective && hits[k] > 0 {
            continue;
        }
        let monotone = (0..i).all(|j| {
            let w = dom[j];
            let fw = cod[image[j]];
            (!p.leq(w, x) || p.leq(fw, y)) && (!p.leq(x, w) || p.leq(y, fw))
        });
        if !monotone {
            continue;
        }
        image[i] = k;
        hits[k] += 1;
        if hits[k] == 1 {
            *covered += 1;
        }
        if search(p, dom, cod, pin, injective, surjective, i + 1, image, hits, covered) {
            return true;
        }
        hits[k] -= 1;
        if hits[k] == 0 {
            *covered -= 1;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_bottom_is_feasible() {
        let c = Poset::chain(4);
        assert!(monoid_feasibility_prune(&c, 0));
        assert!(!monoid_feasibility_prune(&c, 1));
    }

    #[test]
    fn weak_order_bottom_is_feasible() {
        let w = Poset::weak_order(&[1, 2, 1]);
        assert!(monoid_feasibility_prune(&w, 0));
    }

    #[test]
    fn order_maps() {
        let c3 = Poset::chain(3);
        assert!(order_map_exists(&c3, &[0, 1, 2], &[1, 2], Some((0, 1)), false, true));
        assert!(!order_map_exists(&c3, &[0, 1], &[0, 1, 2], None, false, true));
        let a = Poset::antichain(3);
        assert!(order_map_exists(&a, &[0, 1], &[1, 2], None, true, false));
        // chain of two cannot be embedded into an antichain
        assert!(!order_map_exists(&c3, &[0, 1], &[2], None, true, false));
    }
}
