//! Exact cover search over boolean-interval blocks.
//!
//! Items are the faces of a [`Target`](super::Target); blocks are candidate
//! parts. The state is kept Algorithm-X style with counters instead of
//! linked lists: `bad[b]` counts the reasons block `b` is unusable,
//! `live[i]` the blocks through item `i` that are still selectable. The branching item is
//! the uncovered one with the fewest options, ties to the smallest index,
//! and its blocks are tried in index order.
//!
//! Two optional layers sit on top:
//!
//! * a minima-closure constraint (every target face below a chosen minimum
//!   must also end up a minimum), propagated incrementally;
//! * for the unconstrained first-solution search, splitting of the
//!   uncovered items into independent components, a face-size profile test
//!   and memoisation of item sets known to be uncoverable.

use std::cell::Cell;
use std::collections::HashSet;
use std::ops::ControlFlow;

use crate::fpoly::FPolynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct BudgetExceeded;

/// Failed states kept for pruning; past this the search continues without
/// recording more.
const MEMO_LIMIT: usize = 1 << 21;

pub(crate) struct Problem {
    pub n_items: usize,
    /// Items of each block, ascending.
    pub blocks: Vec<Vec<usize>>,
    /// The minimum of each block.
    pub block_min: Vec<usize>,
    pub item_blocks: Vec<Vec<usize>>,
    /// Blocks by their minimum.
    pub min_blocks: Vec<Vec<usize>>,
    /// Face size of each item.
    pub grade: Vec<usize>,
    /// All blocks have `2^rank` items.
    pub rank: usize,
    /// Optional branching priority per item: items of the lowest region
    /// still uncovered are branched on first.
    pub region: Option<Vec<u32>>,
}

impl Problem {
    pub fn new(
        n_items: usize,
        blocks: Vec<Vec<usize>>,
        block_min: Vec<usize>,
        grade: Vec<usize>,
        rank: usize,
    ) -> Self {
        let mut item_blocks = vec![Vec::new(); n_items];
        for (b, items) in blocks.iter().enumerate() {
            debug_assert_eq!(items.len(), 1 << rank);
            for &i in items {
                item_blocks[i].push(b);
            }
        }
        let mut min_blocks = vec![Vec::new(); n_items];
        for (b, &m) in block_min.iter().enumerate() {
            min_blocks[m].push(b);
        }
        Problem {
            n_items,
            min_blocks,
            blocks,
            block_min,
            item_blocks,
            grade,
            rank,
            region: None,
        }
    }
}

/// Order relation between items, for the minima constraint.
pub(crate) struct Closure {
    pub below: Vec<Vec<usize>>,
    pub above: Vec<Vec<usize>>,
}

pub(crate) struct Search<'a> {
    p: &'a Problem,
    closure: Option<&'a Closure>,
    covered: Vec<bool>,
    /// Reasons block `b` is unusable: covered items, plus under the closure
    /// constraint a forbidden minimum or a required minimum it would not
    /// have as its minimum.
    bad: Vec<u32>,
    /// Usable blocks through each item.
    live: Vec<u32>,
    /// > 0 when some item below is covered as a non-minimum.
    forbid_min: Vec<u32>,
    /// > 0 when some chosen minimum lies above.
    require_min: Vec<u32>,
    /// Items chosen as minima (tracked only under a closure constraint).
    is_min: Vec<bool>,
    nodes: &'a Cell<u64>,
    budget: u64,
    memo: HashSet<Vec<u64>>,
}

impl<'a> Search<'a> {
    /// Items with `active[i] == false` start out covered; under a closure
    /// constraint they count as non-minima.
    pub fn new(
        p: &'a Problem,
        active: &[bool],
        closure: Option<&'a Closure>,
        nodes: &'a Cell<u64>,
        budget: u64,
    ) -> Self {
        let mut s = Search {
            p,
            closure,
            covered: active.iter().map(|a| !a).collect(),
            bad: vec![0; p.blocks.len()],
            live: vec![0; p.n_items],
            forbid_min: vec![0; p.n_items],
            require_min: vec![0; p.n_items],
            is_min: vec![false; p.n_items],
            nodes,
            budget,
            memo: HashSet::new(),
        };
        for (b, items) in p.blocks.iter().enumerate() {
            s.bad[b] = items.iter().filter(|&&i| s.covered[i]).count() as u32;
            if s.bad[b] == 0 {
                for &i in items {
                    s.live[i] += 1;
                }
            }
        }
        if let Some(c) = closure {
            for i in 0..p.n_items {
                if !active[i] {
                    for &j in &c.above[i] {
                        s.forbid(j);
                    }
                }
            }
        }
        s
    }

    fn tick(&self) -> Result<(), BudgetExceeded> {
        let n = self.nodes.get() + 1;
        self.nodes.set(n);
        if n > self.budget {
            Err(BudgetExceeded)
        } else {
            Ok(())
        }
    }

    fn block(&mut self, b: usize) {
        if self.bad[b] == 0 {
            for &j in &self.p.blocks[b] {
                self.live[j] -= 1;
            }
        }
        self.bad[b] += 1;
    }

    fn unblock(&mut self, b: usize) {
        self.bad[b] -= 1;
        if self.bad[b] == 0 {
            for &j in &self.p.blocks[b] {
                self.live[j] += 1;
            }
        }
    }

    /// Item `y` may no longer be a minimum.
    fn forbid(&mut self, y: usize) {
        self.forbid_min[y] += 1;
        if self.forbid_min[y] == 1 {
            for &b in &self.p.min_blocks[y] {
                self.block(b);
            }
        }
    }

    fn unforbid(&mut self, y: usize) {
        if self.forbid_min[y] == 1 {
            for &b in self.p.min_blocks[y].iter().rev() {
                self.unblock(b);
            }
        }
        self.forbid_min[y] -= 1;
    }

    /// Item `z` must be a minimum.
    fn require(&mut self, z: usize) {
        self.require_min[z] += 1;
        if self.require_min[z] == 1 {
            for &b in &self.p.item_blocks[z] {
                if self.p.block_min[b] != z {
                    self.block(b);
                }
            }
        }
    }

    fn unrequire(&mut self, z: usize) {
        if self.require_min[z] == 1 {
            for &b in self.p.item_blocks[z].iter().rev() {
                if self.p.block_min[b] != z {
                    self.unblock(b);
                }
            }
        }
        self.require_min[z] -= 1;
    }

    fn cover(&mut self, b: usize) {
        let p = self.p;
        for &i in &p.blocks[b] {
            self.covered[i] = true;
            for &b2 in &p.item_blocks[i] {
                self.block(b2);
            }
        }
        if let Some(c) = self.closure {
            let m = p.block_min[b];
            self.is_min[m] = true;
            for &x in &p.blocks[b] {
                if x != m {
                    for &y in &c.above[x] {
                        self.forbid(y);
                    }
                }
            }
            for &z in &c.below[m] {
                self.require(z);
            }
        }
    }

    fn uncover(&mut self, b: usize) {
        let p = self.p;
        if let Some(c) = self.closure {
            let m = p.block_min[b];
            self.is_min[m] = false;
            for &z in c.below[m].iter().rev() {
                self.unrequire(z);
            }
            for &x in p.blocks[b].iter().rev() {
                if x != m {
                    for &y in c.above[x].iter().rev() {
                        self.unforbid(y);
                    }
                }
            }
        }
        for &i in p.blocks[b].iter().rev() {
            for &b2 in p.item_blocks[i].iter().rev() {
                self.unblock(b2);
            }
            self.covered[i] = false;
        }
    }

    fn allowed(&self, b: usize) -> bool {
        self.bad[b] == 0
    }

    fn options(&self, i: usize) -> usize {
        self.live[i] as usize
    }

    /// The item to branch on among `items` (uncovered), with its option
    /// count: any item with at most one option, otherwise the most
    /// constrained item of the lowest region present. Ties go to the
    /// smallest index.
    fn choose<I: Iterator<Item = usize>>(&self, items: I) -> Option<(usize, usize)> {
        let Some(region) = &self.p.region else {
            let mut best: Option<(usize, usize)> = None;
            for i in items {
                let n = self.options(i);
                if best.is_none_or(|(_, m)| n < m) {
                    best = Some((i, n));
                    if n == 0 {
                        break;
                    }
                }
            }
            return best;
        };
        let mut forced: Option<(usize, usize)> = None;
        let mut best: Option<(u32, usize, usize)> = None;
        for i in items {
            let n = self.options(i);
            if n <= 1 {
                if n == 0 {
                    return Some((i, 0));
                }
                forced.get_or_insert((i, n));
                continue;
            }
            let r = region[i];
            if best.is_none_or(|(br, _, m)| (r, n) < (br, m)) {
                best = Some((r, i, n));
            }
        }
        forced.or(best.map(|(_, i, n)| (i, n)))
    }

    /// Records a failed state while the memo is below its size limit.
    fn remember(&mut self, key: Vec<u64>) {
        if self.memo.len() < MEMO_LIMIT {
            self.memo.insert(key);
        }
    }

    /// The search state: covered items, plus the chosen minima when the
    /// closure constraint is on (they determine the constraint counters).
    fn key(&self) -> Vec<u64> {
        let words = self.p.n_items.div_ceil(64);
        let mut k = vec![
            0u64;
            if self.closure.is_some() {
                2 * words
            } else {
                words
            }
        ];
        for (i, &c) in self.covered.iter().enumerate() {
            if c {
                k[i / 64] |= 1 << (i % 64);
            }
        }
        if self.closure.is_some() {
            for (i, &m) in self.is_min.iter().enumerate() {
                if m {
                    k[words + i / 64] |= 1 << (i % 64);
                }
            }
        }
        k
    }

    /// Enumerates every cover of the uncovered items, in search order,
    /// until `f` breaks. Returns whether `f` broke.
    pub fn for_each_solution<F>(&mut self, mut f: F) -> Result<ControlFlow<()>, BudgetExceeded>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let mut chosen = Vec::new();
        let mut found = 0u64;
        self.dfs(&mut chosen, &mut found, &mut f)
    }

    fn dfs(
        &mut self,
        chosen: &mut Vec<usize>,
        found: &mut u64,
        f: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, BudgetExceeded> {
        let Some((item, count)) = self.choose((0..self.p.n_items).filter(|&i| !self.covered[i]))
        else {
            *found += 1;
            return Ok(f(chosen));
        };
        if count == 0 {
            return Ok(ControlFlow::Continue(()));
        }
        let key = self.key();
        if self.memo.contains(&key) {
            return Ok(ControlFlow::Continue(()));
        }
        let before = *found;
        let p = self.p;
        for &b in &p.item_blocks[item] {
            if !self.allowed(b) {
                continue;
            }
            self.tick()?;
            self.cover(b);
            chosen.push(b);
            let r = self.dfs(chosen, found, f);
            chosen.pop();
            self.uncover(b);
            if r?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        if *found == before {
            self.remember(key);
        }
        Ok(ControlFlow::Continue(()))
    }

    /// First solution, splitting the uncovered items into independent
    /// components whenever possible.
    pub fn first_solution(&mut self) -> Result<Option<Vec<usize>>, BudgetExceeded> {
        let items: Vec<usize> = (0..self.p.n_items).filter(|&i| !self.covered[i]).collect();
        self.solve_set(&items)
    }

    /// The top-level branching: the chosen item and its selectable blocks.
    pub fn root_branches(&self) -> Option<(usize, Vec<usize>)> {
        let uncovered = (0..self.p.n_items).filter(|&i| !self.covered[i]);
        let (item, _) = self.choose(uncovered)?;
        let blocks = self.p.item_blocks[item]
            .iter()
            .copied()
            .filter(|&b| self.allowed(b))
            .collect();
        Some((item, blocks))
    }

    /// Commits a block before searching (used to split work at the root).
    pub fn select(&mut self, b: usize) -> Result<(), BudgetExceeded> {
        self.tick()?;
        self.cover(b);
        Ok(())
    }

    fn profile_ok(&self, items: &[usize]) -> bool {
        if !items.len().is_multiple_of(1 << self.p.rank) {
            return false;
        }
        let mut counts = vec![
            0i64;
            items
                .iter()
                .map(|&i| self.p.grade[i] + 1)
                .max()
                .unwrap_or(0)
        ];
        for &i in items {
            counts[self.p.grade[i]] += 1;
        }
        match FPolynomial::new(counts).quotient(self.p.rank) {
            Ok(q) => q.coeffs().iter().all(|&c| c >= 0),
            Err(_) => false,
        }
    }

    fn components(&self, items: &[usize]) -> Vec<Vec<usize>> {
        let n = self.p.n_items;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &i in items {
            for &b in &self.p.item_blocks[i] {
                if !self.allowed(b) {
                    continue;
                }
                let r0 = find(&mut parent, i);
                for &j in &self.p.blocks[b] {
                    let r = find(&mut parent, j);
                    if r != r0 {
                        parent[r] = r0;
                    }
                }
            }
            // the minima constraint couples comparable uncovered items
            if let Some(c) = self.closure {
                for &j in &c.below[i] {
                    if !self.covered[j] {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        if a != b {
                            parent[a] = b;
                        }
                    }
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for &i in items {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        let mut comps: Vec<Vec<usize>> = groups.into_values().collect();
        comps.sort_by_key(|c| (c.len(), c[0]));
        comps
    }

    /// The items still to cover, plus the chosen minima under the closure
    /// constraint (they fix the constraint counters).
    fn set_key(&self, items: &[usize]) -> Vec<u64> {
        let words = self.p.n_items.div_ceil(64);
        let mut k = vec![
            0u64;
            if self.closure.is_some() {
                2 * words
            } else {
                words
            }
        ];
        for &i in items {
            k[i / 64] |= 1 << (i % 64);
        }
        if self.closure.is_some() {
            for (i, &m) in self.is_min.iter().enumerate() {
                if m {
                    k[words + i / 64] |= 1 << (i % 64);
                }
            }
        }
        k
    }

    /// Covers exactly `items`, all of which are uncovered, leaving the state
    /// unchanged on return.
    fn solve_set(&mut self, items: &[usize]) -> Result<Option<Vec<usize>>, BudgetExceeded> {
        if items.is_empty() {
            return Ok(Some(Vec::new()));
        }
        let key = self.set_key(items);
        if self.memo.contains(&key) {
            return Ok(None);
        }
        let comps = self.components(items);
        if comps.iter().any(|c| !self.profile_ok(c)) {
            self.remember(key);
            return Ok(None);
        }
        let result = if comps.len() > 1 {
            let mut all = Vec::new();
            let mut ok = true;
            for c in &comps {
                match self.solve_set(c)? {
                    Some(s) => all.extend(s),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            ok.then_some(all)
        } else {
            self.solve_connected(items)?
        };
        if result.is_none() {
            self.remember(key);
        }
        Ok(result)
    }

    fn solve_connected(&mut self, items: &[usize]) -> Result<Option<Vec<usize>>, BudgetExceeded> {
        let Some((item, count)) = self.choose(items.iter().copied()) else {
            return Ok(Some(Vec::new()));
        };
        if count == 0 {
            return Ok(None);
        }
        let p = self.p;
        for &b in &p.item_blocks[item] {
            if !self.allowed(b) {
                continue;
            }
            self.tick()?;
            self.cover(b);
            let rest: Vec<usize> = items
                .iter()
                .copied()
                .filter(|&i| !self.covered[i])
                .collect();
            let r = self.solve_set(&rest);
            self.uncover(b);
            if let Some(mut s) = r? {
                s.push(b);
                return Ok(Some(s));
            }
        }
        Ok(None)
    }
}

/// Maximum matching in a bipartite graph given as adjacency of the left
/// side; neighbours are tried in list order. Returns the matching size.
pub(crate) fn max_bipartite_matching(adj: &[Vec<usize>], n_right: usize) -> usize {
    let mut match_right: Vec<Option<usize>> = vec![None; n_right];
    let mut size = 0;
    for u in 0..adj.len() {
        let mut seen = vec![false; n_right];
        if augment(u, adj, &mut match_right, &mut seen) {
            size += 1;
        }
    }
    size
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    match_right: &mut [Option<usize>],
    seen: &mut [bool],
) -> bool {
    for &v in &adj[u] {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        if match_right[v].is_none_or(|w| augment(w, adj, match_right, seen)) {
            match_right[v] = Some(u);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    // items 0..4; pairs
    fn pairs(edges: &[(usize, usize)], n: usize) -> Problem {
        let blocks: Vec<Vec<usize>> = edges.iter().map(|&(a, b)| vec![a, b]).collect();
        let mins = edges.iter().map(|&(a, _)| a).collect();
        Problem::new(n, blocks, mins, vec![0; n], 1)
    }

    #[test]
    fn enumerates_all_perfect_matchings_of_a_square() {
        // 4-cycle 0-1-2-3-0 has two perfect matchings
        let p = pairs(&[(0, 1), (1, 2), (2, 3), (0, 3)], 4);
        let nodes = Cell::new(0);
        let mut s = Search::new(&p, &[true; 4], None, &nodes, u64::MAX);
        let mut sols = Vec::new();
        let _ = s
            .for_each_solution(|sol| {
                let mut v = sol.to_vec();
                v.sort();
                sols.push(v);
                ControlFlow::Continue(())
            })
            .unwrap();
        sols.sort();
        assert_eq!(sols, vec![vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn path_of_three_has_no_cover() {
        let p = pairs(&[(0, 1), (1, 2)], 3);
        let nodes = Cell::new(0);
        let mut s = Search::new(&p, &[true; 3], None, &nodes, u64::MAX);
        assert_eq!(s.first_solution().unwrap(), None);
    }

    #[test]
    fn budget_is_reported() {
        let blocks = vec![vec![0, 1], vec![2, 3]];
        let p = Problem::new(4, blocks, vec![0, 2], vec![0, 1, 0, 1], 1);
        let nodes = Cell::new(0);
        let mut s = Search::new(&p, &[true; 4], None, &nodes, 1);
        assert_eq!(s.first_solution(), Err(BudgetExceeded));
    }

    #[test]
    fn matching_size() {
        let adj = vec![vec![0, 1], vec![0], vec![1]];
        assert_eq!(max_bipartite_matching(&adj, 2), 2);
        assert_eq!(max_bipartite_matching(&[vec![0], vec![0]], 1), 1);
    }
}
