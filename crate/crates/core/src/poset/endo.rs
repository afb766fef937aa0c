use super::{Poset, PosetError};

/// An order-preserving self-map given by its function table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endomorphism {
    pub map: Vec<usize>,
}

impl Endomorphism {
    /// Wraps `map` after checking that it is an order endomorphism of `p`.
    pub fn new(p: &Poset, map: Vec<usize>) -> Option<Self> {
        let e = Endomorphism { map };
        e.is_order_preserving(p).then_some(e)
    }

    pub fn identity(n: usize) -> Self {
        Endomorphism { map: (0..n).collect() }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn is_order_preserving(&self, p: &Poset) -> bool {
        self.map.len() == p.len()
            && self.map.iter().all(|&v| v < p.len())
            && (0..p.len()).all(|x| p.up(x).ones().all(|y| p.leq(self.map[x], self.map[y])))
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Endomorphism { map: other.map.iter().map(|&y| self.map[y]).collect() }
    }
}

/// Lazy enumeration of all order endomorphisms in lexicographic order of the
/// function table.
pub struct EndoIter<'a> {
    poset: &'a Poset,
    map: Vec<usize>,
    // Position currently being advanced; `None` once exhausted.
    pos: Option<usize>,
    started: bool,
}

/// Streams every order-preserving self-map of `p` exactly once. Fails when
/// `p` has more than `cap` elements.
pub fn order_endomorphisms(p: &Poset, cap: usize) -> Result<EndoIter<'_>, PosetError> {
    if p.len() > cap {
        return Err(PosetError::SizeLimit { n: p.len(), limit: cap });
    }
    Ok(EndoIter { poset: p, map: vec![0; p.len()], pos: Some(0), started: false })
}

impl EndoIter<'_> {
    // Whether the value at `i` is compatible with the already fixed prefix.
    fn consistent(&self, i: usize) -> bool {
        let p = self.poset;
        let v = self.map[i];
        (0..i).all(|j| {
            let w = self.map[j];
            (!p.leq(j, i) || p.leq(w, v)) && (!p.leq(i, j) || p.leq(v, w))
        })
    }

    // Depth-first step: from a consistent prefix of length `i`, find the next
    // complete consistent table.
    fn advance(&mut self, mut i: usize, mut fresh: bool) -> bool {
        let n = self.poset.len();
        loop {
            if fresh {
                if i == n {
                    return true;
                }
                self.map[i] = 0;
            } else {
                self.map[i] += 1;
            }
            if self.map[i] >= n {
                if i == 0 {
                    return false;
                }
                i -= 1;
                fresh = false;
                continue;
            }
            if self.consistent(i) {
                i += 1;
                fresh = true;
            } else {
                fresh = false;
            }
        }
    }
}

impl Iterator for EndoIter<'_> {
    type Item = Endomorphism;

    fn next(&mut self) -> Option<Endomorphism> {
        self.pos?;
        let n = self.poset.len();
        if n == 0 {
            self.pos = None;
            return if self.started { None } else { self.started = true; Some(Endomorphism { map: vec![] }) };
        }
        let found = if self.started { self.advance(n - 1, false) } else { self.advance(0, true) };
        self.started = true;
        if found {
            Some(Endomorphism { map: self.map.clone() })
        } else {
            self.pos = None;
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_count(p: &Poset) -> usize {
        let n = p.len();
        let total = n.pow(n as u32);
        (0..total)
            .filter(|&code| {
                let map: Vec<usize> = (0..n).map(|i| code / n.pow(i as u32) % n).collect();
                Endomorphism { map }.is_order_preserving(p)
            })
            .count()
    }

    #[test]
    fn small_counts() {
        assert_eq!(order_endomorphisms(&Poset::chain(1), 8).unwrap().count(), 1);
        let chain2: Vec<Vec<usize>> =
            order_endomorphisms(&Poset::chain(2), 8).unwrap().map(|e| e.map).collect();
        assert_eq!(chain2, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(order_endomorphisms(&Poset::antichain(2), 8).unwrap().count(), 4);
    }

    #[test]
    fn agrees_with_brute_force_and_is_sorted() {
        for p in [Poset::n_poset(), Poset::nat_interval(4), Poset::weak_order(&[2, 1, 2])] {
            let all: Vec<Endomorphism> = order_endomorphisms(&p, 8).unwrap().collect();
            assert_eq!(all.len(), brute_force_count(&p));
            assert!(all.windows(2).all(|w| w[0].map < w[1].map));
        }
    }

    #[test]
    fn size_limit() {
        assert!(matches!(
            order_endomorphisms(&Poset::chain(5), 4),
            Err(PosetError::SizeLimit { n: 5, limit: 4 })
        ));
    }
}
