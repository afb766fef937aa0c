//! Backtracking search over multiplication tables with domain propagation.
//!
//! Cells are the `n²` entries `x·y`, each holding a bitmask of still
//! possible values. Cells are decided in row-major order with values tried
//! in increasing order, so for a fixed subsemigroup the first table found
//! is the lexicographically least one.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use crate::poset::Poset;

/// Constraint responsible for closing a branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constraint {
    /// `x·s` must lie in `↑x` for `s` in `S`.
    Order,
    Associativity,
    /// Left multiplications are order endomorphisms.
    RowMonotonicity,
    /// `m = mm` forces `m·x = x` on `↑m`.
    Idempotent,
    /// Every `y` in `↑x` must be reached as `x·s`.
    Realization,
    Identity,
}

impl Constraint {
    pub const ALL: [Constraint; 6] = [
        Constraint::Order,
        Constraint::Associativity,
        Constraint::RowMonotonicity,
        Constraint::Idempotent,
        Constraint::Realization,
        Constraint::Identity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Constraint::Order => "order",
            Constraint::Associativity => "associativity",
            Constraint::RowMonotonicity => "row_monotonicity",
            Constraint::Idempotent => "idempotent",
            Constraint::Realization => "realization",
            Constraint::Identity => "identity",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// State shared by all workers of one query.
#[derive(Debug)]
pub(crate) struct Shared {
    nodes: AtomicU64,
    limit: u64,
    chunk: u64,
    stop: AtomicBool,
    exhausted: AtomicBool,
}

impl Shared {
    pub fn new(limit: u64) -> Self {
        Shared {
            nodes: AtomicU64::new(0),
            limit,
            chunk: (limit / 64).clamp(1, 1024),
            stop: AtomicBool::new(false),
            exhausted: AtomicBool::new(false),
        }
    }

    pub fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    pub fn exhausted(&self) -> bool {
        self.exhausted.load(Ordering::Relaxed)
    }

    pub fn request_stop(&self) {
        self.stop.store(true, Ordering::Relaxed);
    }

    pub fn stopped(&self) -> bool {
        self.stop.load(Ordering::Relaxed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Flow {
    Continue,
    /// The solution callback asked to stop.
    Done,
    /// Budget exhausted or another worker finished.
    Abort,
}

/// Order data as `u64` masks.
#[derive(Debug, Clone)]
pub(crate) struct OrderMasks {
    pub n: usize,
    pub up: Vec<u64>,
    pub down: Vec<u64>,
}

impl OrderMasks {
    pub fn new(p: &Poset) -> Self {
        let n = p.len();
        assert!(n <= 64, "table search is limited to 64 elements");
        let mask = |s: &fixedbitset::FixedBitSet| s.ones().fold(0u64, |m, i| m | 1 << i);
        OrderMasks {
            n,
            up: (0..n).map(|x| mask(p.up(x))).collect(),
            down: (0..n).map(|x| mask(p.down(x))).collect(),
        }
    }
}

#[derive(Clone)]
pub(crate) struct Engine<'a> {
    n: usize,
    order: &'a OrderMasks,
    s_mask: u64,
    prune: bool,
    dom: Vec<u64>,
    trail: Vec<(usize, u64)>,
    queue: Vec<usize>,
    dirty_rows: u64,
    pub closed: [u64; 6],
    local_nodes: u64,
    shared: &'a Shared,
}

fn ones(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

impl<'a> Engine<'a> {
    /// Sets up domains for subsemigroup `s_mask` and optional identity, and
    /// runs initial propagation. `Err` means the candidate is refuted
    /// before branching.
    pub fn new(
        order: &'a OrderMasks,
        s_mask: u64,
        identity: Option<usize>,
        prune: bool,
        shared: &'a Shared,
    ) -> Result<Self, Constraint> {
        let n = order.n;
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut e = Engine {
            n,
            order,
            s_mask,
            prune,
            dom: vec![all; n * n],
            trail: Vec::new(),
            queue: Vec::new(),
            dirty_rows: 0,
            closed: [0; 6],
            local_nodes: 0,
            shared,
        };
        for x in 0..n {
            for s in ones(s_mask) {
                e.restrict(x * n + s, order.up[x], Constraint::Order)?;
            }
        }
        if let Some(id) = identity {
            for y in 0..n {
                e.restrict(id * n + y, 1 << y, Constraint::Identity)?;
                e.restrict(y * n + id, 1 << y, Constraint::Identity)?;
            }
        }
        // cells that started out as singletons
        for c in 0..n * n {
            if e.dom[c].is_power_of_two() && !e.queue.contains(&c) {
                e.queue.push(c);
            }
        }
        e.dirty_rows = all;
        e.propagate()?;
        e.trail.clear();
        Ok(e)
    }

    pub fn domains(&self) -> &[u64] {
        &self.dom
    }

    #[inline]
    fn val(&self, cell: usize) -> Option<usize> {
        let d = self.dom[cell];
        d.is_power_of_two().then(|| d.trailing_zeros() as usize)
    }

    fn restrict(&mut self, cell: usize, mask: u64, why: Constraint) -> Result<(), Constraint> {
        let old = self.dom[cell];
        let new = old & mask;
        if new == old {
            return Ok(());
        }
        if new == 0 {
            return Err(why);
        }
        self.trail.push((cell, old));
        self.dom[cell] = new;
        self.dirty_rows |= 1 << (cell / self.n);
        if new.is_power_of_two() {
            self.queue.push(cell);
        }
        Ok(())
    }

    /// Two cells that associativity says must hold the same value.
    fn equate(&mut self, a: usize, b: usize) -> Result<(), Constraint> {
        if self.prune {
            let m = self.dom[a] & self.dom[b];
            self.restrict(a, m, Constraint::Associativity)?;
            self.restrict(b, m, Constraint::Associativity)
        } else {
            match (self.val(a), self.val(b)) {
                (Some(u), Some(v)) if u != v => Err(Constraint::Associativity),
                _ => Ok(()),
            }
        }
    }

    fn process(&mut self, cell: usize) -> Result<(), Constraint> {
        let n = self.n;
        let (x, y) = (cell / n, cell % n);
        let v = self.val(cell).expect("queued cells are decided");
        // (x y) c = x (y c)
        for c in 0..n {
            if let Some(b) = self.val(y * n + c) {
                self.equate(v * n + c, x * n + b)?;
            }
        }
        // (a x) y = a (x y)
        for a in 0..n {
            if let Some(d) = self.val(a * n + x) {
                self.equate(d * n + y, a * n + v)?;
            }
        }
        // x = ab: (a b) y = a (b y)
        for a in 0..n {
            for b in 0..n {
                if self.val(a * n + b) == Some(x) {
                    if let Some(e) = self.val(b * n + y) {
                        self.equate(cell, a * n + e)?;
                    }
                }
            }
        }
        // y = bc: (x b) c = x (b c)
        for b in 0..n {
            for c in 0..n {
                if self.val(b * n + c) == Some(y) {
                    if let Some(d) = self.val(x * n + b) {
                        self.equate(d * n + c, cell)?;
                    }
                }
            }
        }
        if !self.prune {
            return Ok(());
        }
        let up_y = self.order.up[y];
        let down_y = self.order.down[y];
        for z in ones(up_y & !(1 << y)) {
            self.restrict(x * n + z, self.order.up[v], Constraint::RowMonotonicity)?;
        }
        for z in ones(down_y & !(1 << y)) {
            self.restrict(x * n + z, self.order.down[v], Constraint::RowMonotonicity)?;
        }
        if x == y && v == x {
            for z in ones(self.order.up[x]) {
                self.restrict(x * n + z, 1 << z, Constraint::Idempotent)?;
            }
        } else if x != y && self.order.up[x] >> y & 1 == 1 && v != y {
            self.restrict(x * n + x, !(1 << x), Constraint::Idempotent)?;
        }
        Ok(())
    }

    /// Each `y` in `↑x` needs some `s` in `S` with `y` still possible for
    /// `x·s`; a unique such cell is forced.
    fn support(&mut self, x: usize) -> Result<(), Constraint> {
        let n = self.n;
        for y in ones(self.order.up[x]) {
            let bit = 1u64 << y;
            let mut count = 0;
            let mut last = 0;
            for s in ones(self.s_mask) {
                if self.dom[x * n + s] & bit != 0 {
                    count += 1;
                    last = s;
                    if count > 1 {
                        break;
                    }
                }
            }
            match count {
                0 => return Err(Constraint::Realization),
                1 => self.restrict(x * n + last, bit, Constraint::Realization)?,
                _ => {}
            }
        }
        Ok(())
    }

    fn propagate(&mut self) -> Result<(), Constraint> {
        loop {
            while let Some(c) = self.queue.pop() {
                self.process(c)?;
            }
            if !self.prune || self.dirty_rows == 0 {
                self.dirty_rows = 0;
                return Ok(());
            }
            let rows = std::mem::take(&mut self.dirty_rows);
            for x in ones(rows) {
                self.support(x)?;
            }
            if self.queue.is_empty() && self.dirty_rows == 0 {
                return Ok(());
            }
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (c, old) = self.trail.pop().expect("trail above mark");
            self.dom[c] = old;
        }
        self.queue.clear();
        self.dirty_rows = 0;
    }

    fn realized(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| {
            let reached = ones(self.s_mask).fold(0u64, |m, s| m | self.dom[x * n + s]);
            reached == self.order.up[x]
        })
    }

    fn tick(&mut self) -> bool {
        self.local_nodes += 1;
        if self.local_nodes >= self.shared.chunk {
            return self.flush();
        }
        true
    }

    /// Publishes the local node count; false when the search must stop.
    pub fn flush(&mut self) -> bool {
        let k = std::mem::take(&mut self.local_nodes);
        let total = self.shared.nodes.fetch_add(k, Ordering::Relaxed) + k;
        if total >= self.shared.limit {
            self.shared.exhausted.store(true, Ordering::Relaxed);
            self.shared.request_stop();
        }
        !self.shared.stopped()
    }

    /// First undecided cell in row-major order.
    pub fn next_cell(&self) -> Option<usize> {
        self.dom.iter().position(|d| !d.is_power_of_two())
    }

    /// Tries `cell = v` and propagates. On failure the state is restored
    /// and the responsible constraint is returned.
    pub fn assign(&mut self, cell: usize, v: usize) -> Result<usize, Constraint> {
        let mark = self.trail.len();
        let r = self.restrict(cell, 1 << v, Constraint::Order).and_then(|_| self.propagate());
        match r {
            Ok(()) => Ok(mark),
            Err(c) => {
                self.undo(mark);
                Err(c)
            }
        }
    }

    /// Depth-first search below the current state. `on_solution` gets the
    /// decided table and returns whether to keep searching.
    pub fn search(&mut self, on_solution: &mut dyn FnMut(Vec<usize>) -> bool) -> Flow {
        let Some(cell) = self.next_cell() else {
            if !self.realized() {
                self.closed[Constraint::Realization.index()] += 1;
                return Flow::Continue;
            }
            let table = self.dom.iter().map(|d| d.trailing_zeros() as usize).collect();
            return if on_solution(table) { Flow::Continue } else { Flow::Done };
        };
        for v in ones(self.dom[cell]) {
            if !self.tick() {
                return Flow::Abort;
            }
            match self.assign(cell, v) {
                Ok(mark) => {
                    let flow = self.search(on_solution);
                    self.undo(mark);
                    if flow != Flow::Continue {
                        return flow;
                    }
                }
                Err(c) => self.closed[c.index()] += 1,
            }
        }
        Flow::Continue
    }

    pub fn record(&mut self, c: Constraint) {
        self.closed[c.index()] += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solutions(p: &Poset, s_mask: u64, identity: Option<usize>, prune: bool) -> Vec<Vec<usize>> {
        let order = OrderMasks::new(p);
        let shared = Shared::new(u64::MAX);
        let mut out = Vec::new();
        if let Ok(mut e) = Engine::new(&order, s_mask, identity, prune, &shared) {
            e.search(&mut |t| {
                out.push(t);
                true
            });
        }
        out
    }

    #[test]
    fn chain_two_full_tables() {
        // x·s in ↑x with S = {0, 1}: the tables realizing 0 < 1.
        let p = Poset::chain(2);
        let a = solutions(&p, 0b11, None, true);
        let b = solutions(&p, 0b11, None, false);
        assert_eq!(a, b);
        assert!(a.contains(&vec![0, 1, 1, 1]));
    }

    #[test]
    fn pruning_keeps_every_solution() {
        for n in 1..=3 {
            for p in crate::poset::enumerate_posets(n, 7).unwrap() {
                for s in p.upsets() {
                    let mask = s.ones().fold(0u64, |m, i| m | 1 << i);
                    assert_eq!(solutions(&p, mask, None, true), solutions(&p, mask, None, false));
                }
            }
        }
    }

    #[test]
    fn first_solution_is_least() {
        let p = Poset::n_poset();
        let all = solutions(&p, 0b1111, None, true);
        assert!(!all.is_empty());
        let min = all.iter().min().unwrap();
        assert_eq!(&all[0], min);
    }
}
