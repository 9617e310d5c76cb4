//! Indexing of cop placements as sorted multisets and per-layer move tables.

use crate::graph::{bit, members, Vertex, VertexSet};
use crate::periodic::PeriodicGraph;

/// `C(n + k - 1, k)`, saturating.
pub fn multiset_count(n: usize, k: usize) -> u128 {
    if n == 0 {
        return if k == 0 { 1 } else { 0 };
    }
    let top = (n + k - 1) as u128;
    let k = k as u128;
    let k = k.min(top - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(top - i) / (i + 1);
    }
    acc
}

/// All sorted k-multisets over `0..n`, ranked in colexicographic order of
/// the strictly increasing sequence `c_i + i`.
#[derive(Clone, Debug)]
pub struct CopSets {
    n: usize,
    k: usize,
    binom: Vec<Vec<usize>>,
    flat: Vec<u8>,
    masks: Vec<VertexSet>,
    distinct: Vec<bool>,
}

impl CopSets {
    pub fn new(n: usize, k: usize) -> Self {
        let top = n + k;
        let mut binom = vec![vec![0usize; k + 2]; top + 1];
        for row in binom.iter_mut() {
            row[0] = 1;
        }
        for i in 1..=top {
            for j in 1..=k + 1 {
                binom[i][j] = binom[i - 1][j - 1] + binom[i - 1][j];
            }
        }
        let count = multiset_count(n, k) as usize;
        let mut sets = CopSets {
            n,
            k,
            binom,
            flat: vec![0; count * k],
            masks: vec![0; count],
            distinct: vec![false; count],
        };
        let mut cur = vec![0usize; k];
        loop {
            let r = sets.rank(&cur);
            for (i, &c) in cur.iter().enumerate() {
                sets.flat[r * k + i] = c as u8;
            }
            sets.masks[r] = cur.iter().fold(0, |acc, &c| acc | bit(c));
            sets.distinct[r] = cur.windows(2).all(|w| w[0] < w[1]);
            // Next nondecreasing sequence in lexicographic order.
            let Some(pos) = (0..k).rev().find(|&i| cur[i] + 1 < n) else {
                break;
            };
            let v = cur[pos] + 1;
            for c in &mut cur[pos..] {
                *c = v;
            }
        }
        sets
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of a sorted multiset.
    #[inline]
    pub fn rank(&self, sorted: &[Vertex]) -> usize {
        debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
        sorted
            .iter()
            .enumerate()
            .map(|(i, &c)| self.binom[c + i][i + 1])
            .sum()
    }

    pub fn rank_unsorted(&self, cops: &[Vertex]) -> usize {
        let mut v = cops.to_vec();
        v.sort_unstable();
        self.rank(&v)
    }

    #[inline]
    pub fn get(&self, idx: usize) -> impl Iterator<Item = Vertex> + '_ {
        self.flat[idx * self.k..(idx + 1) * self.k]
            .iter()
            .map(|&c| c as Vertex)
    }

    pub fn to_vec(&self, idx: usize) -> Vec<Vertex> {
        self.get(idx).collect()
    }

    /// Vertices occupied by at least one cop.
    #[inline]
    pub fn mask(&self, idx: usize) -> VertexSet {
        self.masks[idx]
    }

    /// Whether all cops sit on different vertices.
    #[inline]
    pub fn is_distinct(&self, idx: usize) -> bool {
        self.distinct[idx]
    }
}

/// Compressed adjacency: `targets[offsets[i]..offsets[i+1]]`.
#[derive(Clone, Debug, Default)]
pub struct Csr {
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl Csr {
    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }
}

/// Joint cop moves in one snapshot: for every multiset, the sorted, deduplicated
/// ranks of the multisets reachable when each cop stays or crosses one edge.
/// The relation is symmetric, so each row doubles as the predecessor list.
pub fn move_table(pg: &PeriodicGraph, t: usize, sets: &CopSets, allow_stacking: bool) -> Csr {
    let g = pg.snapshot(t);
    let k = sets.k();
    let choices: Vec<Vec<Vertex>> = (0..pg.n()).map(|u| members(g.closed(u)).collect()).collect();
    let mut offsets = Vec::with_capacity(sets.len() + 1);
    let mut targets: Vec<u32> = Vec::new();
    offsets.push(0u32);
    let mut cur = vec![0usize; k];
    let mut buf = vec![0usize; k];
    let mut row: Vec<u32> = Vec::new();
    for idx in 0..sets.len() {
        row.clear();
        if allow_stacking || sets.is_distinct(idx) {
            let from = sets.to_vec(idx);
            expand(&from, &choices, 0, &mut cur, &mut buf, sets, allow_stacking, &mut row);
            row.sort_unstable();
            row.dedup();
        }
        targets.extend_from_slice(&row);
        offsets.push(targets.len() as u32);
    }
    Csr { offsets, targets }
}

#[allow(clippy::too_many_arguments)]
fn expand(
    from: &[Vertex],
    choices: &[Vec<Vertex>],
    i: usize,
    cur: &mut [Vertex],
    buf: &mut [Vertex],
    sets: &CopSets,
    allow_stacking: bool,
    row: &mut Vec<u32>,
) {
    if i == from.len() {
        buf.copy_from_slice(cur);
        buf.sort_unstable();
        if allow_stacking || buf.windows(2).all(|w| w[0] < w[1]) {
            row.push(sets.rank(buf) as u32);
        }
        return;
    }
    // Identical cops may be assumed to move in nondecreasing order.
    let floor = if i > 0 && from[i] == from[i - 1] {
        Some(cur[i - 1])
    } else {
        None
    };
    for &v in &choices[from[i]] {
        if floor.is_some_and(|f| v < f) {
            continue;
        }
        cur[i] = v;
        expand(from, choices, i + 1, cur, buf, sets, allow_stacking, row);
    }
}
